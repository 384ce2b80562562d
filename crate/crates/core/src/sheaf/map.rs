use super::SheafComplex;
use crate::error::{Error, Result};
use crate::linalg::{induced_map, Matrix};
use rayon::prelude::*;

/// A morphism of sheaf complexes, stored stalkwise over the degree range
/// `lo..lo+len` covering both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafMap {
    lo: i32,
    mats: Vec<Vec<Matrix>>,
}

impl SheafMap {
    /// Checks shapes, the chain-map condition and naturality along covers.
    pub fn new(src: &SheafComplex, dst: &SheafComplex, lo: i32, mats: Vec<Vec<Matrix>>) -> Result<SheafMap> {
        let m = SheafMap { lo, mats };
        m.validate(src, dst)?;
        Ok(m)
    }

    pub(crate) fn assemble(src: &SheafComplex, dst: &SheafComplex, lo: i32, mats: Vec<Vec<Matrix>>) -> SheafMap {
        let m = SheafMap { lo, mats };
        if cfg!(debug_assertions) {
            if let Err(e) = m.validate(src, dst) {
                panic!("internal sheaf map is inconsistent: {e}");
            }
        }
        m
    }

    pub fn identity(f: &SheafComplex) -> SheafMap {
        let mats = (0..f.poset().len()).map(|x| (0..f.len()).map(|i| Matrix::identity(f.dim_i(x, i))).collect()).collect();
        SheafMap { lo: f.lo(), mats }
    }

    /// Component at `x` in degree `deg`, zero outside the stored range.
    pub fn at(&self, src: &SheafComplex, dst: &SheafComplex, x: usize, deg: i32) -> Matrix {
        let i = deg - self.lo;
        if i >= 0 && (i as usize) < self.mats[x].len() {
            self.mats[x][i as usize].clone()
        } else {
            Matrix::zeros(dst.dim(x, deg), src.dim(x, deg))
        }
    }

    fn degrees(&self, src: &SheafComplex, dst: &SheafComplex) -> std::ops::RangeInclusive<i32> {
        let lo = src.lo().min(dst.lo()).min(self.lo);
        let hi = src.hi().max(dst.hi()).max(self.lo + self.mats.first().map_or(0, |m| m.len()) as i32 - 1);
        lo..=hi
    }

    pub fn validate(&self, src: &SheafComplex, dst: &SheafComplex) -> Result<()> {
        let n = src.poset().len();
        if self.mats.len() != n || dst.poset().len() != n {
            return Err(Error::Contract("sheaf map over a different poset".into()));
        }
        let degs = self.degrees(src, dst);
        let bad = (0..n).into_par_iter().find_map_any(|x| {
            for deg in degs.clone() {
                let f = self.at(src, dst, x, deg);
                if f.nrows() != dst.dim(x, deg) || f.ncols() != src.dim(x, deg) {
                    return Some(format!("component at {} in degree {deg} has the wrong shape", src.poset().label(x)));
                }
                let f1 = self.at(src, dst, x, deg + 1);
                if dst.diff(x, deg).mul(&f) != f1.mul(&src.diff(x, deg)) {
                    return Some(format!("not a chain map at {} in degree {deg}", src.poset().label(x)));
                }
                for &y in src.poset().up_covers(x) {
                    let y = y as usize;
                    let rs = pad(&src.res(x, y, deg).expect("cover"), src.dim(y, deg), src.dim(x, deg));
                    let rd = pad(&dst.res(x, y, deg).expect("cover"), dst.dim(y, deg), dst.dim(x, deg));
                    let (a, b) = (self.at(src, dst, y, deg).mul(&rs), rd.mul(&f));
                    if a != b {
                        return Some(format!("not natural along {} ≤ {}", src.poset().label(x), src.poset().label(y)));
                    }
                }
            }
            None
        });
        match bad {
            Some(m) => Err(Error::Contract(m)),
            None => Ok(()),
        }
    }

    /// Induced map H^deg(src_x) → H^deg(dst_x).
    pub fn on_cohomology(&self, src: &SheafComplex, dst: &SheafComplex, x: usize, deg: i32) -> Matrix {
        let (a, b) = (src.stalk(x), dst.stalk(x));
        induced_map(&a.cohomology_basis(deg), &b.cohomology_basis(deg), &self.at(src, dst, x, deg))
    }

    /// Whether the induced map on H^m at `x` is an isomorphism for every m in `degs`.
    pub fn iso_at(&self, src: &SheafComplex, dst: &SheafComplex, x: usize, degs: impl IntoIterator<Item = i32>) -> bool {
        degs.into_iter().all(|m| {
            let h = self.on_cohomology(src, dst, x, m);
            h.nrows() == h.ncols() && h.rank() == h.nrows()
        })
    }

    /// Points where the map is not a stalkwise quasi-isomorphism.
    pub fn quasi_iso_failures(&self, src: &SheafComplex, dst: &SheafComplex) -> Vec<usize> {
        let degs = self.degrees(src, dst);
        (0..src.poset().len()).into_par_iter().filter(|&x| !self.iso_at(src, dst, x, degs.clone())).collect()
    }

    pub fn is_quasi_iso(&self, src: &SheafComplex, dst: &SheafComplex) -> bool {
        self.quasi_iso_failures(src, dst).is_empty()
    }
}

/// Restriction matrices are stored as 0x0 when the degree is outside the
/// sheaf's range; give them their nominal shape.
fn pad(m: &Matrix, rows: usize, cols: usize) -> Matrix {
    if m.nrows() == rows && m.ncols() == cols {
        m.clone()
    } else {
        Matrix::zeros(rows, cols)
    }
}
