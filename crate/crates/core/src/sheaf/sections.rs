use super::SheafComplex;
use crate::fintop::UpSet;
use crate::linalg::{Matrix, QSpaceComplex};
use std::collections::HashMap;

/// Γ(W, F) computed as the equalizer: families indexed by the minimal
/// points of W that agree after restriction to every point above two of them.
#[derive(Clone, Debug)]
pub struct Sections {
    mins: Vec<usize>,
    /// `offsets[i][k]`: start of the block of `mins[k]` in degree index `i`;
    /// the final entry is the number of variables.
    offsets: Vec<Vec<usize>>,
    /// Columns spanning the sections, in variable coordinates.
    basis: Vec<Matrix>,
    complex: QSpaceComplex,
}

/// The points of `w` above at least two minimal points, each paired with the
/// minimal points below it, keeping only those not implied by a facet.
fn meeting_points(f: &SheafComplex, w: &UpSet, mins: &[usize]) -> Vec<(usize, Vec<usize>)> {
    let pos: HashMap<usize, usize> = mins.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let complex = f.poset().complex();
    let below = |y: usize| -> Vec<usize> {
        let mut b: Vec<usize> = complex.all_faces(y).into_iter().filter_map(|z| pos.get(&(z as usize)).copied()).collect();
        b.sort_unstable();
        b
    };
    let mut out = Vec::new();
    for y in w.iter() {
        let b = below(y);
        if b.len() < 2 {
            continue;
        }
        let implied = complex.faces(y).iter().any(|&z| w.contains(z as usize) && below(z as usize) == b);
        if !implied {
            out.push((y, b));
        }
    }
    out
}

impl Sections {
    pub(crate) fn new(f: &SheafComplex, w: &UpSet) -> Sections {
        let w = w.intersection(f.support());
        let mins = w.minimal(f.poset());
        let len = f.len();
        let offsets: Vec<Vec<usize>> = (0..len)
            .map(|i| {
                let mut o = Vec::with_capacity(mins.len() + 1);
                let mut acc = 0;
                for &m in &mins {
                    o.push(acc);
                    acc += f.dim_i(m, i);
                }
                o.push(acc);
                o
            })
            .collect();
        let meets = meeting_points(f, &w, &mins);
        let maps: Vec<HashMap<usize, Vec<Matrix>>> = restriction_tables(f, &mins, &meets);
        let basis: Vec<Matrix> = (0..len)
            .map(|i| {
                let c = constraints(f, &mins, &offsets[i], &meets, &maps, i);
                if c.nrows() == 0 {
                    Matrix::identity(c.ncols())
                } else {
                    c.kernel()
                }
            })
            .collect();
        let dims: Vec<usize> = basis.iter().map(|b| b.ncols()).collect();
        let diffs: Vec<Matrix> = (0..len.saturating_sub(1))
            .map(|i| {
                let blocks: Vec<(usize, usize, bool, &Matrix)> =
                    mins.iter().enumerate().map(|(k, &m)| (offsets[i + 1][k], offsets[i][k], false, f.diff_i(m, i))).collect();
                let d = Matrix::from_blocks(offsets[i + 1][mins.len()], offsets[i][mins.len()], &blocks);
                basis[i + 1].solve(&d.mul(&basis[i])).expect("d maps sections to sections")
            })
            .collect();
        let complex = QSpaceComplex::new(f.lo(), dims, diffs).expect("sections form a complex");
        Sections { mins, offsets, basis, complex }
    }

    pub fn complex(&self) -> &QSpaceComplex {
        &self.complex
    }

    pub fn mins(&self) -> &[usize] {
        &self.mins
    }

    pub fn basis(&self, i: usize) -> &Matrix {
        &self.basis[i]
    }

    pub fn vars(&self, i: usize) -> usize {
        *self.offsets[i].last().expect("offsets end with the total")
    }

    pub(crate) fn dims_vec(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.ncols()).collect()
    }

    /// Block of variables belonging to the minimal point `m`.
    pub fn block(&self, i: usize, m: usize) -> Option<std::ops::Range<usize>> {
        let k = self.mins.iter().position(|&x| x == m)?;
        Some(self.offsets[i][k]..self.offsets[i][k + 1])
    }

    /// Evaluation Γ(W) → F_y for a point y of W, in degree index `i`.
    pub fn value_at(&self, f: &SheafComplex, y: usize, i: usize) -> Matrix {
        let k = self.mins.iter().position(|&m| f.poset().leq(m, y)).expect("y lies in W");
        let deg = f.lo() + i as i32;
        let r = f.res_path(self.mins[k], y, deg).expect("m ≤ y");
        let block = Matrix::selection(&(self.offsets[i][k]..self.offsets[i][k + 1]).collect::<Vec<_>>(), self.vars(i));
        r.mul(&block).mul(&self.basis[i])
    }
}

/// For each minimal point, R_{m→y} for the meeting points y above it.
fn restriction_tables(f: &SheafComplex, mins: &[usize], meets: &[(usize, Vec<usize>)]) -> Vec<HashMap<usize, Vec<Matrix>>> {
    let mut need: Vec<Vec<usize>> = vec![Vec::new(); mins.len()];
    for (y, b) in meets {
        for &k in b {
            need[k].push(*y);
        }
    }
    use rayon::prelude::*;
    mins.par_iter()
        .zip(need.par_iter())
        .map(|(&m, ys)| {
            if ys.is_empty() {
                return HashMap::new();
            }
            let up = f.poset().up(m);
            let per_deg: Vec<Vec<Matrix>> = (0..f.len()).map(|i| f.res_from(m, i)).collect();
            ys.iter()
                .map(|&y| {
                    let p = up.binary_search(&(y as u32)).expect("y above m");
                    (y, per_deg.iter().map(|r| r[p].clone()).collect())
                })
                .collect()
        })
        .collect()
}

fn constraints(
    f: &SheafComplex,
    mins: &[usize],
    offs: &[usize],
    meets: &[(usize, Vec<usize>)],
    maps: &[HashMap<usize, Vec<Matrix>>],
    i: usize,
) -> Matrix {
    let mut blocks: Vec<(usize, usize, bool, &Matrix)> = Vec::new();
    let mut row = 0;
    for (y, b) in meets {
        let dy = f.dim_i(*y, i);
        for pair in b.windows(2) {
            blocks.push((row, offs[pair[0]], false, &maps[pair[0]][y][i]));
            blocks.push((row, offs[pair[1]], true, &maps[pair[1]][y][i]));
            row += dy;
        }
    }
    Matrix::from_blocks(row, offs[mins.len()], &blocks)
}

/// Γ(W) → Γ(W') for W' ⊆ W, per degree index.
pub(crate) fn restriction(f: &SheafComplex, big: &Sections, small: &Sections) -> Vec<Matrix> {
    let pos: HashMap<usize, usize> = big.mins.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let complex = f.poset().complex();
    (0..f.len())
        .map(|i| {
            let deg = f.lo() + i as i32;
            let mut parts = Vec::new();
            for (k2, &m2) in small.mins.iter().enumerate() {
                let k = complex
                    .all_faces(m2)
                    .into_iter()
                    .find_map(|z| pos.get(&(z as usize)).copied())
                    .expect("every point of W' lies above a minimal point of W");
                let r = f.res_path(big.mins[k], m2, deg).expect("face relation");
                parts.push((small.offsets[i][k2], big.offsets[i][k], r));
            }
            let blocks: Vec<(usize, usize, bool, &Matrix)> = parts.iter().map(|(r, c, m)| (*r, *c, false, m)).collect();
            let m = Matrix::from_blocks(small.vars(i), big.vars(i), &blocks);
            small.basis[i].solve(&m.mul(&big.basis[i])).expect("restricted sections are sections")
        })
        .collect()
}

/// Whether every section over `w` (an open with x below all of it) comes
/// from F_x in degree index `i`.
pub(crate) fn extends(f: &SheafComplex, x: usize, w: &UpSet, i: usize) -> bool {
    let w = w.intersection(f.support());
    if w.is_empty() {
        return true;
    }
    let mins = w.minimal(f.poset());
    let mut offs = Vec::with_capacity(mins.len() + 1);
    let mut acc = 0;
    for &m in &mins {
        offs.push(acc);
        acc += f.dim_i(m, i);
    }
    offs.push(acc);
    let meets = meeting_points(f, &w, &mins);
    let maps = restriction_tables(f, &mins, &meets);
    let c = constraints(f, &mins, &offs, &meets, &maps, i);
    let gamma = acc - c.rank();
    let deg = f.lo() + i as i32;
    let rs: Vec<Matrix> = mins.iter().map(|&m| f.res_path(x, m, deg).expect("x below W")).collect();
    let refs: Vec<&Matrix> = rs.iter().collect();
    let image = Matrix::vstack(&refs).rank();
    image == gamma
}
