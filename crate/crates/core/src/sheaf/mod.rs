//! Bounded complexes of sheaves of finite-dimensional rational spaces on a
//! face poset with the up-set topology.
//!
//! A sheaf is stored by its stalks F_x = F(↑x) and the restrictions along
//! covering relations x ⋖ y. Values on other opens are computed by the
//! gluing equalizer (see [`Sections`]).

mod godement;
mod json;
mod map;
mod phi;
mod sections;

pub use godement::Godement;
pub use json::{MatrixJson, SheafJson};
pub use map::SheafMap;
pub use phi::{cochain_sheaf, cochains_on, phi_model, phi_model_product};
pub use sections::Sections;

use crate::error::{Error, Result};
use crate::fintop::{FacePoset, UpSet};
use crate::linalg::{GradedDims, Matrix, QSpaceComplex};
use rayon::prelude::*;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stalk {
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
    res: Vec<Vec<Matrix>>,
}

impl Stalk {
    /// `diffs[i]` leaves degree index `i`; `res[j][i]` is the restriction to
    /// the j-th up-cover in degree index `i`.
    pub fn new(dims: Vec<usize>, diffs: Vec<Matrix>, res: Vec<Vec<Matrix>>) -> Stalk {
        Stalk { dims, diffs, res }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn diffs(&self) -> &[Matrix] {
        &self.diffs
    }

    pub fn res(&self) -> &[Vec<Matrix>] {
        &self.res
    }

    fn zero(len: usize, cover_dims: &[Vec<usize>]) -> Stalk {
        Stalk {
            dims: vec![0; len],
            diffs: vec![Matrix::zeros(0, 0); len.saturating_sub(1)],
            res: cover_dims.iter().map(|d| d.iter().map(|&n| Matrix::zeros(n, 0)).collect()).collect(),
        }
    }
}

#[derive(Clone)]
pub struct SheafComplex {
    poset: Arc<FacePoset>,
    support: UpSet,
    lo: i32,
    len: usize,
    stalks: Vec<Stalk>,
}

impl PartialEq for SheafComplex {
    fn eq(&self, other: &SheafComplex) -> bool {
        Arc::ptr_eq(&self.poset, &other.poset)
            && self.support == other.support
            && self.lo == other.lo
            && self.len == other.len
            && self.stalks == other.stalks
    }
}

impl std::fmt::Debug for SheafComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SheafComplex(degrees {}..={}, {} points", self.lo, self.hi(), self.support.len())?;
        write!(f, ", total rank {})", self.stalks.iter().flat_map(|s| s.dims.iter()).sum::<usize>())
    }
}

impl SheafComplex {
    /// Checked constructor. `support` must contain every point with a nonzero stalk.
    pub fn new(poset: &Arc<FacePoset>, support: UpSet, lo: i32, stalks: Vec<Stalk>) -> Result<SheafComplex> {
        let len = stalks.iter().map(|s| s.dims.len()).max().unwrap_or(0);
        let f = SheafComplex { poset: poset.clone(), support, lo, len, stalks };
        f.validate()?;
        Ok(f)
    }

    /// Constructor for sheaves that are correct by construction; still
    /// validated in debug builds.
    pub(crate) fn assemble(poset: &Arc<FacePoset>, support: UpSet, lo: i32, len: usize, stalks: Vec<Stalk>) -> SheafComplex {
        let f = SheafComplex { poset: poset.clone(), support, lo, len, stalks };
        if cfg!(debug_assertions) {
            if let Err(e) = f.validate() {
                panic!("internal sheaf construction is inconsistent: {e}");
            }
        }
        f
    }

    /// ℚ^d in degree 0 on `support`, identity restrictions.
    pub fn constant(poset: &Arc<FacePoset>, support: &UpSet, d: usize) -> SheafComplex {
        let stalks = (0..poset.len())
            .map(|x| {
                let n = if support.contains(x) { d } else { 0 };
                let res = poset
                    .up_covers(x)
                    .iter()
                    .map(|&y| {
                        let m = if support.contains(y as usize) { d } else { 0 };
                        vec![if n == m { Matrix::identity(n) } else { Matrix::zeros(m, n) }]
                    })
                    .collect();
                Stalk { dims: vec![n], diffs: Vec::new(), res }
            })
            .collect();
        SheafComplex::assemble(poset, support.clone(), 0, 1, stalks)
    }

    pub fn zero(poset: &Arc<FacePoset>, support: &UpSet) -> SheafComplex {
        SheafComplex::zero_like(poset, support, 0)
    }

    fn zero_like(poset: &Arc<FacePoset>, support: &UpSet, lo: i32) -> SheafComplex {
        let stalks = (0..poset.len())
            .map(|x| {
                let covers: Vec<Vec<usize>> = poset.up_covers(x).iter().map(|_| Vec::new()).collect();
                Stalk::zero(0, &covers)
            })
            .collect();
        SheafComplex { poset: poset.clone(), support: support.clone(), lo, len: 0, stalks }
    }

    pub fn poset(&self) -> &Arc<FacePoset> {
        &self.poset
    }

    pub fn support(&self) -> &UpSet {
        &self.support
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.len as i32 - 1
    }

    /// Number of stored degrees.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn stalk_data(&self, x: usize) -> &Stalk {
        &self.stalks[x]
    }

    fn idx(&self, deg: i32) -> Option<usize> {
        let i = deg - self.lo;
        (i >= 0 && (i as usize) < self.len).then_some(i as usize)
    }

    pub fn dim(&self, x: usize, deg: i32) -> usize {
        self.idx(deg).map_or(0, |i| self.stalks[x].dims[i])
    }

    pub(crate) fn dim_i(&self, x: usize, i: usize) -> usize {
        self.stalks[x].dims[i]
    }

    pub(crate) fn diff_i(&self, x: usize, i: usize) -> &Matrix {
        &self.stalks[x].diffs[i]
    }

    /// Differential of the stalk at `x` leaving `deg`.
    pub fn diff(&self, x: usize, deg: i32) -> Matrix {
        match self.idx(deg) {
            Some(i) if i + 1 < self.len => self.stalks[x].diffs[i].clone(),
            _ => Matrix::zeros(self.dim(x, deg + 1), self.dim(x, deg)),
        }
    }

    pub fn cover_index(&self, x: usize, y: usize) -> Option<usize> {
        self.poset.up_covers(x).iter().position(|&c| c as usize == y)
    }

    /// Restriction F_x → F_y along a cover, in degree `deg`.
    pub fn res(&self, x: usize, y: usize, deg: i32) -> Result<Matrix> {
        let j = self.cover_index(x, y).ok_or_else(|| Error::Domain(format!("{y} does not cover {x}")))?;
        Ok(match self.idx(deg) {
            Some(i) => self.stalks[x].res[j][i].clone(),
            None => Matrix::zeros(0, 0),
        })
    }

    /// Restriction F_x → F_y for any x ≤ y, composed along a saturated chain.
    pub fn res_path(&self, x: usize, y: usize, deg: i32) -> Result<Matrix> {
        let chain = self.poset.chain(x, y).ok_or_else(|| Error::Domain(format!("{x} is not below {y}")))?;
        let Some(i) = self.idx(deg) else {
            return Ok(Matrix::zeros(0, 0));
        };
        let mut m = Matrix::identity(self.stalks[x].dims[i]);
        for w in chain.windows(2) {
            let j = self.cover_index(w[0], w[1]).expect("chain steps are covers");
            m = self.stalks[w[0]].res[j][i].mul(&m);
        }
        Ok(m)
    }

    /// R_{x→y} for every y in `poset.up(x)`, in that order.
    pub(crate) fn res_from(&self, x: usize, i: usize) -> Vec<Matrix> {
        let up = self.poset.up(x);
        let mut out: Vec<Matrix> = Vec::with_capacity(up.len());
        out.push(Matrix::identity(self.stalks[x].dims[i]));
        let complex = self.poset.complex();
        for &y in &up[1..] {
            let y = y as usize;
            let z = complex
                .faces(y)
                .iter()
                .map(|&z| z as usize)
                .find(|&z| up.binary_search(&(z as u32)).is_ok())
                .expect("a face of y lies above x");
            let pz = up.binary_search(&(z as u32)).expect("checked");
            let j = self.cover_index(z, y).expect("z is a facet of y");
            out.push(self.stalks[z].res[j][i].mul(&out[pz]));
        }
        out
    }

    pub fn stalk(&self, x: usize) -> QSpaceComplex {
        let s = &self.stalks[x];
        QSpaceComplex::new(self.lo, s.dims.clone(), s.diffs.clone()).expect("validated stalk")
    }

    pub fn stalk_cohomology(&self, x: usize) -> GradedDims {
        self.stalk(x).cohomology()
    }

    /// Stalk cohomology at every point, in point order.
    pub fn stalk_table(&self) -> Vec<GradedDims> {
        (0..self.poset.len()).into_par_iter().map(|x| self.stalk_cohomology(x)).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.stalks.iter().flat_map(|s| s.dims.iter()).sum()
    }

    /// Shape, d∘d = 0, chain-map condition on covers, commuting diamonds, and
    /// the degree window.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Contract(m));
        let height = self.poset.height() as i32;
        if self.len > 0 && (self.lo < -1 || self.hi() > 2 * height + 2) {
            return bad(format!("degrees {}..={} outside the window -1..={}", self.lo, self.hi(), 2 * height + 2));
        }
        if self.stalks.len() != self.poset.len() {
            return bad(format!("{} stalks for {} points", self.stalks.len(), self.poset.len()));
        }
        let problem = (0..self.poset.len()).into_par_iter().find_map_any(|x| self.check_point(x).err());
        match problem {
            Some(m) => bad(m),
            None => Ok(()),
        }
    }

    fn check_point(&self, x: usize) -> std::result::Result<(), String> {
        let s = &self.stalks[x];
        let label = || self.poset.label(x);
        if s.dims.len() != self.len || s.diffs.len() != self.len.saturating_sub(1) {
            return Err(format!("stalk at {} has the wrong number of degrees", label()));
        }
        if !self.support.contains(x) && s.dims.iter().any(|&d| d > 0) {
            return Err(format!("nonzero stalk at {} outside the support", label()));
        }
        for (i, d) in s.diffs.iter().enumerate() {
            if d.ncols() != s.dims[i] || d.nrows() != s.dims[i + 1] {
                return Err(format!("differential at {} has the wrong shape", label()));
            }
            if i > 0 && !d.mul(&s.diffs[i - 1]).is_zero() {
                return Err(format!("d∘d ≠ 0 at {}", label()));
            }
        }
        let covers = self.poset.up_covers(x);
        if s.res.len() != covers.len() {
            return Err(format!("stalk at {} lists {} restrictions for {} covers", label(), s.res.len(), covers.len()));
        }
        for (j, &y) in covers.iter().enumerate() {
            let t = &self.stalks[y as usize];
            if s.res[j].len() != self.len {
                return Err(format!("restriction {} → {} has the wrong number of degrees", label(), self.poset.label(y as usize)));
            }
            for i in 0..self.len {
                let r = &s.res[j][i];
                if r.ncols() != s.dims[i] || r.nrows() != t.dims[i] {
                    return Err(format!("restriction {} → {} has the wrong shape", label(), self.poset.label(y as usize)));
                }
                if i + 1 < self.len && t.diffs[i].mul(r) != s.res[j][i + 1].mul(&s.diffs[i]) {
                    return Err(format!("restriction {} → {} is not a chain map", label(), self.poset.label(y as usize)));
                }
            }
        }
        // codimension-two intervals are diamonds x ⋖ a, b ⋖ z
        for (ja, &a) in covers.iter().enumerate() {
            for (jb, &b) in covers.iter().enumerate().skip(ja + 1) {
                let vb = self.poset.complex().simplex(b as usize).iter().find(|v| !self.poset.complex().simplex(x).contains(v)).copied();
                let Some(z) = vb.and_then(|v| self.poset.add_vertex(a as usize, v)) else { continue };
                let za = self.cover_index(a as usize, z).expect("z covers a");
                let zb = self.cover_index(b as usize, z).expect("z covers b");
                for i in 0..self.len {
                    let via_a = self.stalks[a as usize].res[za][i].mul(&s.res[ja][i]);
                    let via_b = self.stalks[b as usize].res[zb][i].mul(&s.res[jb][i]);
                    if via_a != via_b {
                        return Err(format!("restrictions around {} ≤ {} do not commute", label(), self.poset.label(z)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Open restriction F|_W, kept on the same poset.
    pub fn restrict(&self, w: &UpSet) -> SheafComplex {
        let support = self.support.intersection(w);
        let stalks = (0..self.poset.len())
            .map(|x| {
                if support.contains(x) {
                    return self.stalks[x].clone();
                }
                let covers: Vec<Vec<usize>> =
                    self.poset.up_covers(x).iter().map(|&y| if support.contains(y as usize) { self.stalks[y as usize].dims.clone() } else { vec![0; self.len] }).collect();
                Stalk::zero(self.len, &covers)
            })
            .collect();
        SheafComplex { poset: self.poset.clone(), support, lo: self.lo, len: self.len, stalks }
    }

    /// Sections over an open, as a complex with its coordinates.
    pub fn sections(&self, w: &UpSet) -> Sections {
        Sections::new(self, w)
    }

    /// Γ(W, F) as a complex.
    pub fn sections_complex(&self, w: &UpSet) -> QSpaceComplex {
        self.sections(w).complex().clone()
    }

    /// ι_* F for the inclusion of the support into the larger open `target`:
    /// the stalk at σ is F(U ∩ ↑σ).
    pub fn pushforward(&self, target: &UpSet) -> Result<SheafComplex> {
        if !self.support.is_subset(target) {
            return Err(Error::Domain("pushforward target must contain the support".into()));
        }
        let n = self.poset.len();
        let secs: Vec<Option<Sections>> = (0..n)
            .into_par_iter()
            .map(|x| target.contains(x).then(|| self.sections(&UpSet::principal(&self.poset, x).intersection(&self.support))))
            .collect();
        let stalks = (0..n)
            .into_par_iter()
            .map(|x| {
                let covers = self.poset.up_covers(x);
                match &secs[x] {
                    None => {
                        let cd: Vec<Vec<usize>> = covers.iter().map(|&y| sec_dims(&secs[y as usize], self.len)).collect();
                        Stalk::zero(self.len, &cd)
                    }
                    Some(s) => {
                        let res = covers
                            .iter()
                            .map(|&y| self.restrict_sections(s, secs[y as usize].as_ref().expect("target is open")))
                            .collect();
                        Stalk { dims: s.dims_vec(), diffs: s.complex().diffs().to_vec(), res }
                    }
                }
            })
            .collect();
        Ok(SheafComplex::assemble(&self.poset, target.clone(), self.lo, self.len, stalks))
    }

    /// τ_{≤p}: unchanged below p, cocycles in degree p, zero above.
    pub fn truncate(&self, p: i32) -> SheafComplex {
        if self.len == 0 || p >= self.hi() {
            return self.clone();
        }
        if p < self.lo {
            return SheafComplex::zero_like(&self.poset, &self.support, self.lo);
        }
        let ip = (p - self.lo) as usize;
        let ker: Vec<Matrix> = self.stalks.par_iter().map(|s| s.diffs[ip].kernel()).collect();
        let stalks = (0..self.poset.len())
            .into_par_iter()
            .map(|x| {
                let s = &self.stalks[x];
                let mut dims = s.dims[..=ip].to_vec();
                dims[ip] = ker[x].ncols();
                let mut diffs = s.diffs[..ip].to_vec();
                if ip > 0 {
                    diffs[ip - 1] = ker[x].solve(&s.diffs[ip - 1]).expect("boundaries are cocycles");
                }
                let res = self
                    .poset
                    .up_covers(x)
                    .iter()
                    .enumerate()
                    .map(|(j, &y)| {
                        let mut r = s.res[j][..=ip].to_vec();
                        r[ip] = ker[y as usize].solve(&r[ip].mul(&ker[x])).expect("restriction preserves cocycles");
                        r
                    })
                    .collect();
                Stalk { dims, diffs, res }
            })
            .collect();
        SheafComplex::assemble(&self.poset, self.support.clone(), self.lo, ip + 1, stalks)
    }

    /// The cohomology sheaf H^m(F), placed in degree 0.
    pub fn cohomology_sheaf(&self, m: i32) -> SheafComplex {
        let Some(i) = self.idx(m) else {
            return SheafComplex::zero(&self.poset, &self.support);
        };
        let bases: Vec<_> = (0..self.poset.len()).into_par_iter().map(|x| self.stalk(x).cohomology_basis(m)).collect();
        let stalks = (0..self.poset.len())
            .into_par_iter()
            .map(|x| {
                let hx = &bases[x];
                let res = self
                    .poset
                    .up_covers(x)
                    .iter()
                    .enumerate()
                    .map(|(j, &y)| vec![crate::linalg::induced_map(hx, &bases[y as usize], &self.stalks[x].res[j][i])])
                    .collect();
                Stalk { dims: vec![hx.dim()], diffs: Vec::new(), res }
            })
            .collect();
        SheafComplex::assemble(&self.poset, self.support.clone(), 0, 1, stalks)
    }

    /// Restriction Γ(W) → Γ(W') between two section spaces with W' ⊆ W.
    pub fn restrict_sections(&self, big: &Sections, small: &Sections) -> Vec<Matrix> {
        sections::restriction(self, big, small)
    }

    /// Points σ and degrees where F_σ → Γ(↑σ − σ, F) is not surjective.
    ///
    /// On a finite space this is equivalent to every restriction between
    /// opens being surjective.
    pub fn flasque_failures(&self) -> Vec<(usize, i32)> {
        let pts: Vec<usize> = self.support.iter().collect();
        let mut out: Vec<(usize, i32)> = pts
            .par_iter()
            .flat_map_iter(|&x| {
                let punctured = UpSet::principal(&self.poset, x).intersection(&self.support).without_minimal(&self.poset, x);
                (0..self.len).filter_map(move |i| (!sections::extends(self, x, &punctured, i)).then_some((x, self.lo + i as i32)))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_flasque(&self) -> bool {
        self.flasque_failures().is_empty()
    }

    pub fn godement(&self) -> Godement {
        Godement::new(self)
    }

    /// ℍ*(U, F) for U the support.
    pub fn hypercohomology(&self) -> GradedDims {
        self.godement().global_sections().cohomology()
    }

    /// Rι_* F := ι_* of the Godement resolution.
    pub fn derived_pushforward(&self, target: &UpSet) -> Result<SheafComplex> {
        self.godement().pushforward(target)
    }
}

fn sec_dims(s: &Option<Sections>, len: usize) -> Vec<usize> {
    match s {
        Some(s) => s.dims_vec(),
        None => vec![0; len],
    }
}

#[cfg(test)]
mod tests;
