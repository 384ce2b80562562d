//! Intersection homology from perversity-allowable simplicial chains.
//!
//! Everything is computed on the doubled complex. Its strata are full
//! subcomplexes, so |η| ∩ X_{n−k} is the face of η spanned by its vertices in
//! X_{n−k}, and a chain is allowable iff every simplex of its support is.

use crate::error::{Error, Result};
use crate::linalg::{Echelon, GradedDims, Matrix, QSpaceComplex, SparseVec, Q};
use crate::scx::{Complex, Subcomplex};
use crate::strata::{Perversity, StratifiedComplex};
use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Which chain groups to use. `Relative` drops simplices of the boundary,
/// giving H(X, ∂X), which for a compact X is the Borel–Moore homology of X − ∂X.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainMode {
    Absolute,
    Relative,
}

/// Dimension caps i − k + p(k) for an i-chain, k = 2..=n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllowabilityProfile {
    pub degree: usize,
    /// (k, cap)
    pub caps: Vec<(usize, i32)>,
}

impl AllowabilityProfile {
    pub fn new(p: &Perversity, degree: usize) -> AllowabilityProfile {
        let caps = (2..=p.n()).map(|k| (k, degree as i32 - k as i32 + p.at(k))).collect();
        AllowabilityProfile { degree, caps }
    }

    /// `meet[k]` is dim(|ξ| ∩ X_{n−k}), −1 when empty.
    pub fn admits(&self, meet: impl Fn(usize) -> i32) -> bool {
        self.caps.iter().all(|&(k, cap)| {
            let m = meet(k);
            m < 0 || m <= cap
        })
    }
}

/// A simplicial chain on the doubled complex.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Chain {
    pub degree: usize,
    pub terms: BTreeMap<usize, Q>,
}

impl Chain {
    pub fn new(degree: usize, terms: impl IntoIterator<Item = (usize, Q)>) -> Chain {
        let mut c = Chain { degree, terms: BTreeMap::new() };
        for (s, x) in terms {
            c.add(s, x);
        }
        c
    }

    fn add(&mut self, s: usize, x: Q) {
        let e = self.terms.entry(s).or_insert_with(Q::zero);
        *e = &*e + &x;
        if e.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    pub fn boundary(&self, k: &Complex) -> Chain {
        let mut out = Chain { degree: self.degree.saturating_sub(1), terms: BTreeMap::new() };
        if self.degree == 0 {
            return out;
        }
        for (&s, x) in &self.terms {
            for (j, &f) in k.faces(s).iter().enumerate() {
                out.add(f as usize, if j % 2 == 0 { x.clone() } else { -x });
            }
        }
        out
    }
}

/// Depth of each doubled vertex: least j with v ∈ X_j.
fn vertex_depths(s: &StratifiedComplex) -> Vec<usize> {
    let k = s.doubled();
    (0..k.vertex_count()).map(|v| (0..=s.n()).find(|&j| s.stratum(j).contains(v)).expect("X_n is everything")).collect()
}

fn meet_dim(k: &Complex, depths: &[usize], n: usize, simplex: usize, codim: usize) -> i32 {
    k.simplex(simplex).iter().filter(|&&v| depths[v as usize] <= n - codim).count() as i32 - 1
}

/// dim(|ξ| ∩ X_{n−k}) ≤ deg − k + p(k) for all k ≥ 2.
pub fn chain_allowable(xi: &Chain, s: &StratifiedComplex, p: &Perversity) -> Result<bool> {
    check_perversity(s, p)?;
    let k = s.doubled();
    if let Some(&bad) = xi.terms.keys().find(|&&i| i >= k.len() || k.simplex_dim(i) != xi.degree) {
        return Err(Error::Domain(format!("simplex {bad} is not a {}-simplex of the doubled complex", xi.degree)));
    }
    let depths = vertex_depths(s);
    let prof = AllowabilityProfile::new(p, xi.degree);
    Ok(xi.support().all(|i| prof.admits(|c| meet_dim(k, &depths, s.n(), i, c))))
}

fn check_perversity(s: &StratifiedComplex, p: &Perversity) -> Result<()> {
    if p.n() != s.n() {
        return Err(Error::Input(format!("perversity is for n = {} but the space has n = {}", p.n(), s.n())));
    }
    Ok(())
}

/// Allowability data and chain groups for one (space, perversity, mode).
pub struct IcData {
    complex: Arc<Complex>,
    /// simplices in the chain groups, per dimension, ambient order
    cells: Vec<Vec<usize>>,
    /// position within `cells[dim]`, or u32::MAX outside the chain groups
    pos: Vec<u32>,
    allowed: FixedBitSet,
}

impl IcData {
    pub fn new(s: &StratifiedComplex, p: &Perversity, mode: ChainMode) -> Result<IcData> {
        check_perversity(s, p)?;
        let k = s.doubled();
        let depths = vertex_depths(s);
        let profiles: Vec<AllowabilityProfile> = (0..=s.n()).map(|d| AllowabilityProfile::new(p, d)).collect();
        let flags: Vec<bool> = (0..k.len())
            .into_par_iter()
            .map(|i| profiles[k.simplex_dim(i)].admits(|c| meet_dim(k, &depths, s.n(), i, c)))
            .collect();
        let mut allowed = FixedBitSet::with_capacity(k.len());
        for (i, f) in flags.into_iter().enumerate() {
            allowed.set(i, f);
        }
        Ok(IcData::build(s, mode, allowed))
    }

    /// Every simplex allowable: ordinary chains.
    pub fn unfiltered(s: &StratifiedComplex, mode: ChainMode) -> IcData {
        let mut allowed = FixedBitSet::with_capacity(s.doubled().len());
        allowed.insert_range(..);
        IcData::build(s, mode, allowed)
    }

    fn build(s: &StratifiedComplex, mode: ChainMode, allowed: FixedBitSet) -> IcData {
        let k = s.doubled().clone();
        let skip = match mode {
            ChainMode::Relative => s.doubled_boundary(),
            ChainMode::Absolute => Subcomplex::empty(&k),
        };
        let top = k.dim().max(0) as usize;
        let mut cells = vec![Vec::new(); top + 1];
        let mut pos = vec![u32::MAX; k.len()];
        for (i, slot) in pos.iter_mut().enumerate() {
            if !skip.contains(i) {
                let d = k.simplex_dim(i);
                *slot = cells[d].len() as u32;
                cells[d].push(i);
            }
        }
        IcData { complex: k, cells, pos, allowed }
    }

    pub fn top(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn chain_rank(&self, d: usize) -> usize {
        self.cells[d].len()
    }

    pub fn is_allowable(&self, simplex: usize) -> bool {
        self.allowed.contains(simplex)
    }

    pub fn allowable(&self, d: usize) -> Vec<usize> {
        self.cells[d].iter().copied().filter(|&i| self.allowed.contains(i)).collect()
    }

    /// ∂ of simplex `i` in chain-group coordinates of degree dim − 1; with
    /// `rows` given, only those rows are kept, renumbered.
    fn boundary(&self, i: usize, rows: Option<&[u32]>) -> SparseVec {
        let mut v: SparseVec = Vec::new();
        for (j, &f) in self.complex.faces(i).iter().enumerate() {
            let mut r = self.pos[f as usize];
            if r == u32::MAX {
                continue;
            }
            if let Some(map) = rows {
                r = map[r as usize];
                if r == u32::MAX {
                    continue;
                }
            }
            v.push((r, if j % 2 == 0 { Q::one() } else { -Q::one() }));
        }
        v.sort_by_key(|e| e.0);
        v
    }

    /// Renumbering of the non-allowable (d)-cells.
    fn forbidden_rows(&self, d: usize) -> Vec<u32> {
        let mut next = 0;
        self.cells[d]
            .iter()
            .map(|&i| {
                if self.allowed.contains(i) {
                    u32::MAX
                } else {
                    next += 1;
                    next - 1
                }
            })
            .collect()
    }

    fn rank(&self, d: usize, projected: bool) -> usize {
        if d == 0 || d > self.top() {
            return 0;
        }
        let rows = projected.then(|| self.forbidden_rows(d - 1));
        let width = match &rows {
            Some(r) => r.iter().filter(|&&x| x != u32::MAX).count(),
            None => self.cells[d - 1].len(),
        };
        // pivoting on the last entry keeps fill-in low on boundary matrices
        let mut ech = Echelon::new(width);
        for i in self.allowable(d) {
            let mut v = self.boundary(i, rows.as_deref());
            if v.is_empty() {
                continue;
            }
            let w = width as u32;
            for e in v.iter_mut() {
                e.0 = w - 1 - e.0;
            }
            v.reverse();
            ech.push(v, u32::MAX);
        }
        ech.rank()
    }

    /// IH_i = |A_i| − rank ∂|A_i − rank ∂|A_{i+1} + rank π_N ∂|A_{i+1}, where A
    /// are allowable simplices and π_N projects onto non-allowable ones.
    pub fn betti(&self) -> GradedDims {
        let top = self.top();
        let jobs: Vec<(usize, bool)> = (1..=top).flat_map(|d| [(d, false), (d, true)]).collect();
        let ranks: Vec<usize> = jobs.par_iter().map(|&(d, pr)| self.rank(d, pr)).collect();
        let r = |d: usize, pr: bool| if d == 0 || d > top { 0 } else { ranks[2 * (d - 1) + pr as usize] };
        let mut out = GradedDims::new();
        for i in 0..=top {
            let a = self.allowable(i).len();
            out.set(i as i32, a + r(i + 1, true) - r(i, false) - r(i + 1, false));
        }
        out
    }

    /// IC as an explicit complex, homological degree i placed in degree −i so
    /// the differential raises degree.
    pub fn complex(&self) -> QSpaceComplex {
        let top = self.top();
        // basis of IC_d: kernel of π_N ∂ on span(A_d); coordinates are the free entries
        let bases: Vec<(Vec<usize>, Matrix, Vec<usize>)> = (0..=top)
            .into_par_iter()
            .map(|d| {
                let a = self.allowable(d);
                let m = if d == 0 {
                    Matrix::zeros(0, a.len())
                } else {
                    let rows = self.forbidden_rows(d - 1);
                    let h = rows.iter().filter(|&&x| x != u32::MAX).count();
                    Matrix::from_columns(h, a.iter().map(|&i| self.boundary(i, Some(&rows))).collect())
                };
                let (k, free) = m.kernel_with_free();
                (a, k, free)
            })
            .collect();
        let dims: Vec<usize> = (0..=top).rev().map(|d| bases[d].1.ncols()).collect();
        let diffs = (1..=top)
            .rev()
            .map(|d| {
                let (a, k, _) = &bases[d];
                let (a1, _, free1) = &bases[d - 1];
                // ∂ on A_d into A_{d−1} coordinates, then into IC_{d−1} coordinates
                let mut into_a = vec![u32::MAX; self.cells[d - 1].len()];
                for (j, &i) in a1.iter().enumerate() {
                    into_a[self.pos[i] as usize] = j as u32;
                }
                let b = Matrix::from_columns(a1.len(), a.iter().map(|&i| self.boundary(i, Some(&into_a))).collect());
                b.mul(k).select_rows(free1)
            })
            .collect();
        QSpaceComplex::new(-(top as i32), dims, diffs).expect("IC is closed under the boundary")
    }
}

/// IH^p_i of the doubled complex.
pub fn ih_betti(s: &StratifiedComplex, p: &Perversity, mode: ChainMode) -> Result<GradedDims> {
    Ok(IcData::new(s, p, mode)?.betti())
}

/// The intersection chain complex (degree −i holds IC_i).
pub fn ic_complex(s: &StratifiedComplex, p: &Perversity, mode: ChainMode) -> Result<QSpaceComplex> {
    Ok(IcData::new(s, p, mode)?.complex())
}

/// Ordinary rational homology of the doubled complex.
pub fn h_betti(s: &StratifiedComplex, mode: ChainMode) -> GradedDims {
    IcData::unfiltered(s, mode).betti()
}

/// Over a field cohomology has the dual ranks, so IH^i = IH_i.
pub fn ih_cohomology(s: &StratifiedComplex, p: &Perversity, mode: ChainMode) -> Result<GradedDims> {
    ih_betti(s, p, mode)
}

/// IH of the cone cL on an (n−1)-dimensional link from IH of the link: keep
/// degrees below n − 1 − p(n), zero from there up.
pub fn cone_formula_oracle(link: &GradedDims, p_at_n: i32, n: usize) -> GradedDims {
    let cut = n as i32 - 1 - p_at_n;
    let mut out = GradedDims::new();
    for (i, d) in link.iter() {
        if i < cut {
            out.set(i, d);
        }
    }
    out
}

/// Relative version IH(cL, L): degree i + 1 gets IH_i(L) for i ≥ n − 1 − p(n).
pub fn cone_formula_oracle_relative(link: &GradedDims, p_at_n: i32, n: usize) -> GradedDims {
    let cut = n as i32 - 1 - p_at_n;
    let mut out = GradedDims::new();
    for (i, d) in link.iter() {
        if i >= cut {
            out.set(i + 1, d);
        }
    }
    out
}

#[cfg(test)]
mod tests;
