//! The finite-space model of Φ, and the simplicial cochain sheaf.
//!
//! A sheaf G on the face poset of Sd²(X′) is turned into a sheaf on the
//! basis poset of (X, 𝒯) by taking, over fst(σ), the sections of G on the
//! smallest face-poset open containing fst(σ): all cofaces of its simplices.
//! Reports call this the Φ-model; it is not the topological Φ.

use super::{SheafComplex, Stalk};
use crate::error::{Error, Result};
use crate::fintop::{FacePoset, FiniteTopology, UpSet};
use crate::linalg::{Matrix, QSpaceComplex, Q};
use crate::scx::Subcomplex;
use rayon::prelude::*;
use std::sync::Arc;

/// Cofaces of the simplices of fst(σ), as a face-poset open of Sd²(X′).
fn neighbourhood(g_poset: &FacePoset, topo: &FiniteTopology, sigma: usize) -> UpSet {
    UpSet::generated(g_poset, topo.basis(sigma).indices())
}

fn check_same_space(g: &SheafComplex, topo: &FiniteTopology) -> Result<()> {
    let a = g.poset().complex();
    let b = topo.space().doubled();
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::AmbientMismatch("Φ-model input must live on the face poset of the doubled complex".into()))
    }
}

/// Φ-model of a face-poset sheaf complex, computed by the gluing equalizer.
pub fn phi_model(g: &SheafComplex, topo: &FiniteTopology) -> Result<SheafComplex> {
    check_same_space(g, topo)?;
    let base = topo.poset();
    let n = base.len();
    let secs: Vec<_> = (0..n).into_par_iter().map(|s| g.sections(&neighbourhood(g.poset(), topo, s))).collect();
    let stalks = (0..n)
        .into_par_iter()
        .map(|s| {
            let res = base.up_covers(s).iter().map(|&t| g.restrict_sections(&secs[s], &secs[t as usize])).collect();
            Stalk::new(secs[s].dims_vec(), secs[s].complex().diffs().to_vec(), res)
        })
        .collect();
    Ok(SheafComplex::assemble(base, UpSet::all(base), g.lo(), g.len(), stalks))
}

/// Φ-model of G⁰(H) without building G⁰(H): its sections over an open W
/// are Π_{x∈W} H_x, so the stalk at σ is ⊕ H_x over the neighbourhood of
/// fst(σ) and restrictions are coordinate projections.
pub fn phi_model_product(h: &SheafComplex, topo: &FiniteTopology) -> Result<SheafComplex> {
    check_same_space(h, topo)?;
    let base = topo.poset();
    let n = base.len();
    let len = h.len();
    let pts: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|s| neighbourhood(h.poset(), topo, s).intersection(h.support()).iter().collect())
        .collect();
    let offsets = |s: usize, i: usize| -> Vec<usize> {
        let mut o = vec![0];
        for &x in &pts[s] {
            o.push(o.last().unwrap() + h.dim_i(x, i));
        }
        o
    };
    let stalks = (0..n)
        .into_par_iter()
        .map(|s| {
            let offs: Vec<Vec<usize>> = (0..len).map(|i| offsets(s, i)).collect();
            let dims: Vec<usize> = offs.iter().map(|o| *o.last().unwrap()).collect();
            let diffs = (0..len.saturating_sub(1))
                .map(|i| {
                    let blocks: Vec<(usize, usize, bool, &Matrix)> =
                        pts[s].iter().enumerate().map(|(b, &x)| (offs[i + 1][b], offs[i][b], false, h.diff_i(x, i))).collect();
                    Matrix::from_blocks(dims[i + 1], dims[i], &blocks)
                })
                .collect();
            let res = base
                .up_covers(s)
                .iter()
                .map(|&t| {
                    (0..len)
                        .map(|i| {
                            let mut picks = Vec::new();
                            for &x in &pts[t as usize] {
                                let b = pts[s].binary_search(&x).expect("the neighbourhood shrinks upward");
                                picks.extend(offs[i][b]..offs[i][b + 1]);
                            }
                            Matrix::selection(&picks, dims[i])
                        })
                        .collect()
                })
                .collect();
            Stalk::new(dims, diffs, res)
        })
        .collect();
    Ok(SheafComplex::assemble(base, UpSet::all(base), h.lo(), len, stalks))
}

/// Simplices of `sub` by dimension, in ambient index order.
fn by_dim(sub: &Subcomplex, top: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); top + 1];
    for i in sub.indices() {
        out[sub.ambient().simplex_dim(i)].push(i);
    }
    out
}

fn coboundary(sub: &Subcomplex, lower: &[usize], upper: &[usize]) -> Matrix {
    let k = sub.ambient();
    let mut ent = Vec::new();
    for (r, &b) in upper.iter().enumerate() {
        for (j, &a) in k.faces(b).iter().enumerate() {
            let c = lower.binary_search(&(a as usize)).expect("subcomplex is closed");
            ent.push((r, c, if j % 2 == 0 { Q::one() } else { -Q::one() }));
        }
    }
    Matrix::from_triplets(upper.len(), lower.len(), ent)
}

/// Simplicial cochains of a subcomplex, degrees 0..=top.
pub fn cochains_on(sub: &Subcomplex, top: usize) -> QSpaceComplex {
    let cells = by_dim(sub, top);
    let dims = cells.iter().map(|c| c.len()).collect();
    let diffs = (0..top).map(|q| coboundary(sub, &cells[q], &cells[q + 1])).collect();
    QSpaceComplex::new(0, dims, diffs).expect("δ∘δ = 0")
}

/// C^•_Δ on (X, 𝒯): over fst(σ), rational functions on the simplices of
/// fst(σ), restriction of functions, simplicial coboundary.
pub fn cochain_sheaf(topo: &FiniteTopology) -> SheafComplex {
    let base = topo.poset();
    let top = topo.space().n();
    let n = base.len();
    let cells: Vec<Vec<Vec<usize>>> = (0..n).into_par_iter().map(|s| by_dim(topo.basis(s), top)).collect();
    let stalks = (0..n)
        .into_par_iter()
        .map(|s| {
            let c = cochains_on(topo.basis(s), top);
            let res = base
                .up_covers(s)
                .iter()
                .map(|&t| {
                    (0..=top)
                        .map(|q| {
                            let picks: Vec<usize> = cells[t as usize][q]
                                .iter()
                                .map(|a| cells[s][q].binary_search(a).expect("fst shrinks upward"))
                                .collect();
                            Matrix::selection(&picks, cells[s][q].len())
                        })
                        .collect()
                })
                .collect();
            Stalk::new(c.dims().to_vec(0, top as i32), c.diffs().to_vec(), res)
        })
        .collect();
    SheafComplex::assemble(base, UpSet::all(base), 0, top + 1, stalks)
}
