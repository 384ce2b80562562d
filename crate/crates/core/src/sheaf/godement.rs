//! Godement resolution on a finite space.
//!
//! With stalks F_x = F(↑x), G⁰(F)(W) = Π_{x∈W} F_x and
//! G⁰(F)_x = ⊕_{y≥x} F_y. The cokernel C¹ of F → G⁰F has stalks
//! coker(e_x) for e_x = (R_{x→y})_{y≥x}; iterating gives
//! G^k = G⁰(C^k), and C^k vanishes once k exceeds the height.
//! Each cokernel is stored by a quotient matrix P_x whose kernel is im e_x,
//! with a coordinate section picked from the free columns of P_x.

use super::{SheafComplex, SheafMap, Stalk};
use crate::error::{Error, Result};
use crate::fintop::UpSet;
use crate::linalg::{Matrix, QSpaceComplex, Q};
use rayon::prelude::*;

pub struct Godement {
    source: SheafComplex,
    levels: usize,
    /// `q[k][i][x]`: rank of C^k at x in F-degree index i.
    q: Vec<Vec<Vec<usize>>>,
    /// `off[k][i][x]`: offset of the block (k, i, x) in total degree index i+k.
    off: Vec<Vec<Vec<usize>>>,
    /// Point of every coordinate of each total degree.
    owner: Vec<Vec<u32>>,
    diffs: Vec<Matrix>,
}

impl std::fmt::Debug for Godement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let dims: Vec<usize> = self.owner.iter().map(|o| o.len()).collect();
        write!(f, "Godement({} levels, total dims {:?})", self.levels, dims)
    }
}

/// Offsets of the blocks y ∈ ↑x inside ⊕_{y≥x} Q_y.
fn block_offsets(up: &[u32], q: &[usize]) -> Vec<usize> {
    let mut o = Vec::with_capacity(up.len() + 1);
    let mut acc = 0;
    for &y in up {
        o.push(acc);
        acc += q[y as usize];
    }
    o.push(acc);
    o
}

fn locate(offs: &[usize], f: usize) -> (usize, usize) {
    let b = offs.partition_point(|&o| o <= f) - 1;
    (b, f - offs[b])
}

impl Godement {
    pub fn new(f: &SheafComplex) -> Godement {
        let poset = f.poset().clone();
        let n = poset.len();
        let len = f.len();
        let pts: Vec<usize> = f.support().iter().collect();

        let mut q: Vec<Vec<Vec<usize>>> = vec![(0..len).map(|i| (0..n).map(|x| f.dim_i(x, i)).collect()).collect()];
        // quot[k][i][x] for k ≥ 1: ⊕_{y≥x} C^{k−1}_y → C^k_x
        let mut quot: Vec<Vec<Vec<Matrix>>> = vec![Vec::new()];
        // vert[k][i][x]: C^k_x in index i → i+1, induced by d_F
        let mut vert: Vec<Vec<Vec<Matrix>>> = vec![(0..len.saturating_sub(1))
            .map(|i| (0..n).map(|x| f.diff_i(x, i).clone()).collect())
            .collect()];
        // current-level restrictions R[i][x][pos in up(x)]
        let mut res: Vec<Vec<Vec<Matrix>>> = (0..len)
            .map(|i| (0..n).into_par_iter().map(|x| if f.support().contains(x) { f.res_from(x, i) } else { Vec::new() }).collect())
            .collect();

        loop {
            let k = q.len() - 1;
            if q[k].iter().all(|qi| qi.iter().all(|&d| d == 0)) || len == 0 {
                break;
            }
            // quotients of the next level
            let step: Vec<Vec<(Matrix, Vec<usize>)>> = (0..len)
                .map(|i| {
                    (0..n)
                        .into_par_iter()
                        .map(|x| {
                            if !f.support().contains(x) {
                                return (Matrix::zeros(0, 0), Vec::new());
                            }
                            let parts: Vec<&Matrix> = res[i][x].iter().collect();
                            Matrix::vstack(&parts).left_kernel_with_free()
                        })
                        .collect()
                })
                .collect();
            let qn: Vec<Vec<usize>> = step.iter().map(|s| s.iter().map(|(p, _)| p.nrows()).collect()).collect();
            let offs: Vec<Vec<Vec<usize>>> =
                (0..len).map(|i| (0..n).map(|x| block_offsets(poset.up(x), &q[k][i])).collect()).collect();

            let next_res: Vec<Vec<Vec<Matrix>>> = (0..len)
                .map(|i| {
                    (0..n)
                        .into_par_iter()
                        .map(|x| {
                            if !f.support().contains(x) {
                                return Vec::new();
                            }
                            let up = poset.up(x);
                            let (_, free) = &step[i][x];
                            up.iter()
                                .map(|&z| {
                                    let z = z as usize;
                                    let (pz, _) = &step[i][z];
                                    let upz = poset.up(z);
                                    let cols = free
                                        .iter()
                                        .map(|&fc| {
                                            let (b, j) = locate(&offs[i][x], fc);
                                            let y = up[b];
                                            match upz.binary_search(&y) {
                                                Ok(bz) => pz.col(offs[i][z][bz] + j).clone(),
                                                Err(_) => Vec::new(),
                                            }
                                        })
                                        .collect();
                                    Matrix::from_columns(qn[i][z], cols)
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();

            let next_vert: Vec<Vec<Matrix>> = (0..len.saturating_sub(1))
                .map(|i| {
                    (0..n)
                        .into_par_iter()
                        .map(|x| {
                            if !f.support().contains(x) {
                                return Matrix::zeros(0, 0);
                            }
                            let up = poset.up(x);
                            let (p1, _) = &step[i + 1][x];
                            let (_, free) = &step[i][x];
                            let cols = free
                                .iter()
                                .map(|&fc| {
                                    let (b, j) = locate(&offs[i][x], fc);
                                    let y = up[b] as usize;
                                    let shift = offs[i + 1][x][b] as u32;
                                    let v: Vec<(u32, Q)> = vert[k][i][y].col(j).iter().map(|(r, c)| (r + shift, c.clone())).collect();
                                    p1.mul_vec(&v)
                                })
                                .collect();
                            Matrix::from_columns(qn[i + 1][x], cols)
                        })
                        .collect()
                })
                .collect();

            quot.push(step.into_iter().map(|s| s.into_iter().map(|(p, _)| p).collect()).collect());
            q.push(qn);
            vert.push(next_vert);
            res = next_res;
        }
        let levels = if len == 0 { 0 } else { (q.len() - 1).max(1) };
        q.truncate(levels.max(1));
        quot.truncate(levels.max(1));
        vert.truncate(levels.max(1));

        // total complex layout
        let tlen = if len == 0 { 0 } else { len + levels - 1 };
        let mut off = vec![vec![vec![0usize; n]; len]; levels];
        let mut owner: Vec<Vec<u32>> = vec![Vec::new(); tlen];
        for (t, own) in owner.iter_mut().enumerate() {
            for k in 0..levels {
                if t < k || t - k >= len {
                    continue;
                }
                let i = t - k;
                for &x in &pts {
                    off[k][i][x] = own.len();
                    own.extend(std::iter::repeat_n(x as u32, q[k][i][x]));
                }
            }
        }
        let diffs: Vec<Matrix> = (0..tlen.saturating_sub(1))
            .into_par_iter()
            .map(|t| {
                let mut ent: Vec<(usize, usize, Q)> = Vec::new();
                for k in 0..levels {
                    if t < k || t - k >= len {
                        continue;
                    }
                    let i = t - k;
                    if k + 1 < levels {
                        for &y in &pts {
                            let p = &quot[k + 1][i][y];
                            let bo = block_offsets(poset.up(y), &q[k][i]);
                            for (c, col) in p.columns().iter().enumerate() {
                                let (b, j) = locate(&bo, c);
                                let x = poset.up(y)[b] as usize;
                                let gc = off[k][i][x] + j;
                                for (r, v) in col {
                                    ent.push((off[k + 1][i][y] + *r as usize, gc, v.clone()));
                                }
                            }
                        }
                    }
                    if i + 1 < len {
                        let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
                        for &x in &pts {
                            for (c, col) in vert[k][i][x].columns().iter().enumerate() {
                                for (r, v) in col {
                                    ent.push((off[k][i + 1][x] + *r as usize, off[k][i][x] + c, &sign * v));
                                }
                            }
                        }
                    }
                }
                Matrix::from_triplets(owner[t + 1].len(), owner[t].len(), ent)
            })
            .collect();
        if cfg!(debug_assertions) {
            for t in 1..diffs.len() {
                assert!(diffs[t].mul(&diffs[t - 1]).is_zero(), "Godement total differential squares to zero");
            }
        }
        Godement { source: f.clone(), levels, q, off, owner, diffs }
    }

    pub fn source(&self) -> &SheafComplex {
        &self.source
    }

    /// Number of nonzero levels G⁰, G¹, ….
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Rank of C^k at `x` in F-degree `deg`.
    pub fn cokernel_rank(&self, k: usize, x: usize, deg: i32) -> usize {
        let i = deg - self.source.lo();
        if k >= self.levels || i < 0 || i as usize >= self.source.len() {
            0
        } else {
            self.q[k][i as usize][x]
        }
    }

    pub fn total_dims(&self) -> Vec<usize> {
        self.owner.iter().map(|o| o.len()).collect()
    }

    /// Coordinates of each total degree owned by points of `w`.
    fn coords(&self, w: &UpSet) -> Vec<Vec<usize>> {
        self.owner.iter().map(|o| (0..o.len()).filter(|&c| w.contains(o[c] as usize)).collect()).collect()
    }

    fn complex_on(&self, coords: &[Vec<usize>]) -> QSpaceComplex {
        let dims = coords.iter().map(|c| c.len()).collect();
        let diffs = (0..coords.len().saturating_sub(1))
            .map(|t| self.diffs[t].select_rows(&coords[t + 1]).select_cols(&coords[t]))
            .collect();
        QSpaceComplex::new(self.source.lo(), dims, diffs).expect("restricting to an open keeps d∘d = 0")
    }

    /// Γ(W, G•F) for an open W.
    pub fn sections(&self, w: &UpSet) -> QSpaceComplex {
        self.complex_on(&self.coords(w))
    }

    pub fn global_sections(&self) -> QSpaceComplex {
        self.sections(self.source.support())
    }

    /// ι_* of the total resolution to an open `target` containing the support.
    pub fn pushforward(&self, target: &UpSet) -> Result<SheafComplex> {
        let f = &self.source;
        if !f.support().is_subset(target) {
            return Err(Error::Domain("pushforward target must contain the support".into()));
        }
        let poset = f.poset();
        let n = poset.len();
        let tlen = self.owner.len();
        let coords: Vec<Option<Vec<Vec<usize>>>> = (0..n)
            .into_par_iter()
            .map(|x| target.contains(x).then(|| self.coords(&UpSet::principal(poset, x))))
            .collect();
        let stalks = (0..n)
            .into_par_iter()
            .map(|x| {
                let covers = poset.up_covers(x);
                let Some(cx) = &coords[x] else {
                    let dims = vec![0; tlen];
                    let res = covers
                        .iter()
                        .map(|&y| match &coords[y as usize] {
                            Some(cy) => cy.iter().map(|c| Matrix::zeros(c.len(), 0)).collect(),
                            None => vec![Matrix::zeros(0, 0); tlen],
                        })
                        .collect();
                    return Stalk::new(dims, vec![Matrix::zeros(0, 0); tlen.saturating_sub(1)], res);
                };
                let local = self.complex_on(cx);
                let res = covers
                    .iter()
                    .map(|&y| {
                        let cy = coords[y as usize].as_ref().expect("target is open");
                        (0..tlen)
                            .map(|t| {
                                let picks: Vec<usize> =
                                    cy[t].iter().map(|c| cx[t].binary_search(c).expect("↑y ⊆ ↑x")).collect();
                                Matrix::selection(&picks, cx[t].len())
                            })
                            .collect()
                    })
                    .collect();
                Stalk::new(local.dims().to_vec(f.lo(), f.lo() + tlen as i32 - 1), local.diffs().to_vec(), res)
            })
            .collect();
        Ok(SheafComplex::assemble(poset, target.clone(), f.lo(), tlen, stalks))
    }

    /// The resolution itself as a sheaf complex on the support.
    pub fn as_sheaf(&self) -> SheafComplex {
        self.pushforward(self.source.support()).expect("support contains itself")
    }

    /// Unit of the adjunction at σ: `big` restricts to the source on its
    /// support, and F_σ → Γ(U ∩ ↑σ, G•F) sends a germ to its restrictions
    /// into level 0. One matrix per degree of `big`.
    pub fn unit_at(&self, big: &SheafComplex, sigma: usize) -> Vec<Matrix> {
        let f = &self.source;
        let poset = f.poset();
        let w = UpSet::principal(poset, sigma);
        let cx = self.coords(&w);
        let up = poset.up(sigma);
        (0..big.len())
            .map(|bi| {
                let deg = big.lo() + bi as i32;
                let t = deg - f.lo();
                let cols = big.dim_i(sigma, bi);
                if t < 0 || t as usize >= cx.len() {
                    return Matrix::zeros(0, cols);
                }
                let t = t as usize;
                if t >= f.len() {
                    return Matrix::zeros(cx[t].len(), cols);
                }
                let rs = big.res_from(sigma, bi);
                let mut ent = Vec::new();
                for (py, &y) in up.iter().enumerate() {
                    let y = y as usize;
                    if !f.support().contains(y) || self.q[0][t][y] == 0 {
                        continue;
                    }
                    let start = self.off[0][t][y];
                    let row0 = cx[t].binary_search(&start).expect("level-0 block of y");
                    for (c, col) in rs[py].columns().iter().enumerate() {
                        for (r, v) in col {
                            ent.push((row0 + *r as usize, c, v.clone()));
                        }
                    }
                }
                Matrix::from_triplets(cx[t].len(), cols, ent)
            })
            .collect()
    }

    /// The unit big → ι_* G•(big|_U) as a sheaf map, `pushed` being
    /// `self.pushforward(big.support())`.
    pub fn unit(&self, big: &SheafComplex, pushed: &SheafComplex) -> SheafMap {
        let n = big.poset().len();
        let lo = big.lo().min(pushed.lo());
        let hi = big.hi().max(pushed.hi());
        let mats = (0..n)
            .into_par_iter()
            .map(|x| {
                let u = if big.support().contains(x) { self.unit_at(big, x) } else { Vec::new() };
                (lo..=hi)
                    .map(|deg| {
                        let bi = deg - big.lo();
                        if bi >= 0 && (bi as usize) < u.len() {
                            u[bi as usize].clone()
                        } else {
                            Matrix::zeros(pushed.dim(x, deg), big.dim(x, deg))
                        }
                    })
                    .collect()
            })
            .collect();
        SheafMap::assemble(big, pushed, lo, mats)
    }
}

impl SheafComplex {
    /// G⁰(F) alone: stalk ⊕_{y≥x} F_y, restrictions are projections.
    pub fn godement_zero(&self) -> SheafComplex {
        let poset = self.poset().clone();
        let n = poset.len();
        let len = self.len();
        let up_sup = |x: usize| -> Vec<usize> { poset.up(x).iter().map(|&y| y as usize).filter(|&y| self.support().contains(y)).collect() };
        let stalks = (0..n)
            .into_par_iter()
            .map(|x| {
                let ux = up_sup(x);
                let offs: Vec<Vec<usize>> = (0..len)
                    .map(|i| {
                        let mut o = vec![0];
                        for &y in &ux {
                            o.push(o.last().unwrap() + self.dim_i(y, i));
                        }
                        o
                    })
                    .collect();
                let dims: Vec<usize> = offs.iter().map(|o| *o.last().unwrap()).collect();
                let diffs = (0..len.saturating_sub(1))
                    .map(|i| {
                        let blocks: Vec<(usize, usize, bool, &Matrix)> =
                            ux.iter().enumerate().map(|(b, &y)| (offs[i + 1][b], offs[i][b], false, self.diff_i(y, i))).collect();
                        Matrix::from_blocks(dims[i + 1], dims[i], &blocks)
                    })
                    .collect();
                let res = poset
                    .up_covers(x)
                    .iter()
                    .map(|&z| {
                        let uz = up_sup(z as usize);
                        (0..len)
                            .map(|i| {
                                let mut picks = Vec::new();
                                for &y in &uz {
                                    let b = ux.binary_search(&y).expect("↑z ⊆ ↑x");
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
        SheafComplex::assemble(&poset, self.support().clone(), self.lo(), len, stalks)
    }
}
