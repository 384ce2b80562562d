//! The finite topology on Sd²(X′) whose basis is {fst(σ) : σ ∈ X′}.
//!
//! fst(τ) ⊆ fst(σ) exactly when σ ≤ τ, so the basis poset is the face poset
//! of X′ turned upside down and every open is an up-set of base simplices.

mod poset;

pub use poset::{FacePoset, UpSet};

use crate::error::{Error, Result};
use crate::scx::Subcomplex;
use crate::strata::StratifiedComplex;
use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Arc;

/// An open set of the topology together with the base simplices whose
/// basis sets it is the union of.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenRef {
    set: Subcomplex,
    witness: UpSet,
}

impl OpenRef {
    pub fn set(&self) -> &Subcomplex {
        &self.set
    }

    /// All σ with fst(σ) ⊆ W.
    pub fn witness(&self) -> &UpSet {
        &self.witness
    }
}

pub struct FiniteTopology {
    space: Arc<StratifiedComplex>,
    poset: Arc<FacePoset>,
    basis: Vec<Subcomplex>,
    anchor: Vec<u32>,
}

impl std::fmt::Debug for FiniteTopology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteTopology({}, {} basis sets)", self.space.name(), self.basis.len())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TopologyReport {
    pub points: usize,
    pub basis_sizes: Vec<usize>,
    pub pairs_checked: usize,
    pub hasse: Vec<(usize, usize)>,
}

impl FiniteTopology {
    /// Builds the basis and checks the claims the sheaf layer relies on:
    /// intersection closure, minimal opens and the inclusion order.
    pub fn generate(space: &Arc<StratifiedComplex>) -> Result<FiniteTopology> {
        let base = space.base().clone();
        let basis: Vec<Subcomplex> = (0..base.len()).into_par_iter().map(|s| space.fst(s)).collect::<Result<_>>()?;
        let dbl = space.doubled().clone();
        let anchor: Vec<u32> = (0..dbl.len()).map(|i| space.sd().anchor(i) as u32).collect();
        let t = FiniteTopology { space: space.clone(), poset: Arc::new(FacePoset::new(&base)), basis, anchor };
        t.check_intersections()?;
        t.check_minimal_opens()?;
        t.check_order()?;
        Ok(t)
    }

    pub fn space(&self) -> &Arc<StratifiedComplex> {
        &self.space
    }

    pub fn poset(&self) -> &Arc<FacePoset> {
        &self.poset
    }

    pub fn points(&self) -> usize {
        self.space.doubled().len()
    }

    /// fst(σ).
    pub fn basis(&self, sigma: usize) -> &Subcomplex {
        &self.basis[sigma]
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    /// Base simplex whose basis set is the smallest open around `point`.
    pub fn minimal_basis(&self, point: usize) -> usize {
        self.anchor[point] as usize
    }

    pub fn minimal_open(&self, point: usize) -> Result<OpenRef> {
        if point >= self.points() {
            return Err(Error::Domain(format!("point {point} not in the space")));
        }
        Ok(self.open_from_upset(UpSet::principal(&self.poset, self.minimal_basis(point))))
    }

    /// Union of basis sets over an up-set of base simplices.
    pub fn open_from_upset(&self, w: UpSet) -> OpenRef {
        let mut bits = FixedBitSet::with_capacity(self.points());
        for (p, &a) in self.anchor.iter().enumerate() {
            if w.contains(a as usize) {
                bits.insert(p);
            }
        }
        OpenRef { set: Subcomplex::from_bits_unchecked(self.space.doubled(), bits), witness: w }
    }

    /// Union of fst(σ) over the listed σ.
    pub fn open_from_witness(&self, gens: &[usize]) -> Result<OpenRef> {
        if let Some(&g) = gens.iter().find(|&&g| g >= self.basis.len()) {
            return Err(Error::Domain(format!("basis index {g} out of range")));
        }
        Ok(self.open_from_upset(UpSet::generated(&self.poset, gens.iter().copied())))
    }

    /// Some(witness) when `sub` is a union of basis sets.
    pub fn as_open(&self, sub: &Subcomplex) -> Result<Option<OpenRef>> {
        crate::scx::check_ambient(self.space.doubled(), sub.ambient(), "open test")?;
        let inside: Vec<usize> =
            (0..self.basis.len()).filter(|&s| self.basis[s].is_subset(sub).expect("same ambient")).collect();
        let w = UpSet::generated(&self.poset, inside);
        let o = self.open_from_upset(w);
        Ok(if o.set == *sub { Some(o) } else { None })
    }

    pub fn whole(&self) -> OpenRef {
        self.open_from_upset(UpSet::all(&self.poset))
    }

    pub fn empty_open(&self) -> OpenRef {
        self.open_from_upset(UpSet::empty(&self.poset))
    }

    /// U_k for k = 2..=n+1 with witnesses {σ : σ ∉ X′_{n−k}}.
    pub fn open_chain(&self) -> Vec<(usize, OpenRef)> {
        let n = self.space.n();
        (2..=n + 1)
            .map(|k| {
                let w = if k == n + 1 {
                    UpSet::all(&self.poset)
                } else {
                    let z = self.space.base_stratum(n - k);
                    UpSet::from_points(&self.poset, (0..self.basis.len()).filter(|&s| !z.contains(s)))
                        .expect("complement of a subcomplex is open")
                };
                (k, self.open_from_upset(w))
            })
            .collect()
    }

    /// Covering relations fst(τ) ⊂ fst(σ) as (σ, τ), i.e. σ a facet of τ.
    pub fn open_poset(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for s in 0..self.basis.len() {
            for &t in self.poset.up_covers(s) {
                out.push((s, t as usize));
            }
        }
        out
    }

    pub fn report(&self) -> TopologyReport {
        TopologyReport {
            points: self.points(),
            basis_sizes: self.basis.iter().map(|b| b.len()).collect(),
            pairs_checked: self.basis.len() * (self.basis.len() + 1) / 2,
            hasse: self.open_poset(),
        }
    }

    pub fn to_dot(&self) -> String {
        let base = self.space.base();
        let mut s = String::from("digraph basis {\n  rankdir=BT;\n");
        for i in 0..base.len() {
            s.push_str(&format!("  n{i} [label=\"fst{} ({})\"];\n", base.simplex_label(i), self.basis[i].len()));
        }
        for (a, b) in self.open_poset() {
            s.push_str(&format!("  n{b} -> n{a};\n"));
        }
        s.push_str("}\n");
        s
    }

    fn check_intersections(&self) -> Result<()> {
        let m = self.basis.len();
        let bad = (0..m).into_par_iter().find_map_any(|a| {
            for b in a..m {
                let i = self.basis[a].intersection(&self.basis[b]).expect("same ambient");
                let mut acc = FixedBitSet::with_capacity(self.points());
                // only σ whose double barycenter lies in I can have fst(σ) ⊆ I
                for s in 0..m {
                    let bary = self.space.sd().double_barycenter(s) as usize;
                    if i.contains(bary) && self.basis[s].is_subset(&i).expect("same ambient") {
                        acc.union_with(self.basis[s].bits());
                    }
                }
                if &acc != i.bits() {
                    return Some((a, b));
                }
            }
            None
        });
        match bad {
            Some((a, b)) => Err(Error::Topology(format!(
                "fst({}) ∩ fst({}) is not a union of basis sets",
                self.space.base().simplex_label(a),
                self.space.base().simplex_label(b)
            ))),
            None => Ok(()),
        }
    }

    fn check_minimal_opens(&self) -> Result<()> {
        // group points by which basis sets contain them
        let mut groups: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
        for p in 0..self.points() {
            let sig: Vec<u32> = (0..self.basis.len() as u32).filter(|&s| self.basis[s as usize].contains(p)).collect();
            groups.entry(sig).or_default().push(p);
        }
        for (sig, pts) in groups {
            let meet = Subcomplex::intersection_all(self.space.doubled(), sig.iter().map(|&s| &self.basis[s as usize]))?;
            for p in pts {
                let a = self.minimal_basis(p);
                if self.basis[a] != meet {
                    return Err(Error::Topology(format!("minimal open of point {p} is not fst of its anchor")));
                }
            }
        }
        Ok(())
    }

    fn check_order(&self) -> Result<()> {
        let m = self.basis.len();
        let bad = (0..m).into_par_iter().find_any(|&s| {
            (0..m).any(|t| self.basis[t].is_subset(&self.basis[s]).expect("same ambient") != self.poset.leq(s, t))
        });
        match bad {
            Some(s) => Err(Error::Topology(format!("basis inclusions at {} disagree with the face order", s))),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::catalog;

    #[test]
    fn cone_topology() {
        let s = Arc::new(catalog::cone_on_sphere(1));
        let t = FiniteTopology::generate(&s).unwrap();
        assert_eq!(t.basis_len(), s.base().len());
        assert_eq!(t.whole().set(), &Subcomplex::full(s.doubled()));
        for (k, u) in t.open_chain() {
            let direct = s.open_chain().into_iter().find(|(j, _)| *j == k).unwrap().1;
            assert_eq!(u.set(), &direct);
            assert_eq!(t.as_open(&direct).unwrap().as_ref(), Some(&u));
        }
        for p in 0..t.points() {
            let m = t.minimal_open(p).unwrap();
            assert!(m.set().contains(p));
        }
    }

    #[test]
    fn non_open_detected() {
        let s = Arc::new(catalog::sphere(2));
        let t = FiniteTopology::generate(&s).unwrap();
        let single = Subcomplex::closure_of_indices(s.doubled(), [0]).unwrap();
        assert!(t.as_open(&single).unwrap().is_none());
    }
}
