use super::Matrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Dimension per degree. Zero entries are never stored, so equality is
/// equality of Betti tables.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedDims(BTreeMap<i32, usize>);

impl GradedDims {
    pub fn new() -> GradedDims {
        GradedDims(BTreeMap::new())
    }

    pub fn from_slice(lo: i32, dims: &[usize]) -> GradedDims {
        let mut g = GradedDims::new();
        for (i, &d) in dims.iter().enumerate() {
            g.set(lo + i as i32, d);
        }
        g
    }

    pub fn set(&mut self, deg: i32, d: usize) {
        if d == 0 {
            self.0.remove(&deg);
        } else {
            self.0.insert(deg, d);
        }
    }

    pub fn get(&self, deg: i32) -> usize {
        self.0.get(&deg).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.0.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.0.keys().next().copied()
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    /// Dense list over `lo..=hi`.
    pub fn to_vec(&self, lo: i32, hi: i32) -> Vec<usize> {
        (lo..=hi).map(|d| self.get(d)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.iter().map(|(d, n)| if d.rem_euclid(2) == 0 { n as i64 } else { -(n as i64) }).sum()
    }
}

impl fmt::Debug for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Bounded cochain complex of finite-dimensional rational spaces.
/// `diffs[i]` maps degree `lo + i` to `lo + i + 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QSpaceComplex {
    lo: i32,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl QSpaceComplex {
    pub fn new(lo: i32, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<QSpaceComplex, String> {
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(format!("{} spaces need {} differentials, got {}", dims.len(), dims.len().saturating_sub(1), diffs.len()));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.ncols() != dims[i] || d.nrows() != dims[i + 1] {
                return Err(format!("differential in degree {} has shape {}x{}", lo + i as i32, d.nrows(), d.ncols()));
            }
        }
        for i in 1..diffs.len() {
            if !diffs[i].mul(&diffs[i - 1]).is_zero() {
                return Err(format!("d∘d ≠ 0 at degree {}", lo + i as i32 - 1));
            }
        }
        Ok(QSpaceComplex { lo, dims, diffs })
    }

    pub fn zero() -> QSpaceComplex {
        QSpaceComplex { lo: 0, dims: Vec::new(), diffs: Vec::new() }
    }

    pub fn concentrated(deg: i32, dim: usize) -> QSpaceComplex {
        QSpaceComplex { lo: deg, dims: vec![dim], diffs: Vec::new() }
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, deg: i32) -> usize {
        let i = deg - self.lo;
        if i < 0 || i as usize >= self.dims.len() {
            0
        } else {
            self.dims[i as usize]
        }
    }

    /// Differential out of `deg`, zero outside the stored range.
    pub fn diff(&self, deg: i32) -> Matrix {
        let i = deg - self.lo;
        if i < 0 || i as usize >= self.diffs.len() {
            Matrix::zeros(self.dim(deg + 1), self.dim(deg))
        } else {
            self.diffs[i as usize].clone()
        }
    }

    pub fn cohomology(&self) -> GradedDims {
        let ranks: Vec<usize> = self.diffs.iter().map(|d| d.rank()).collect();
        let mut g = GradedDims::new();
        for (i, &n) in self.dims.iter().enumerate() {
            let out = ranks.get(i).copied().unwrap_or(0);
            let inc = if i == 0 { 0 } else { ranks[i - 1] };
            g.set(self.lo + i as i32, n - out - inc);
        }
        g
    }

    pub fn dims(&self) -> GradedDims {
        GradedDims::from_slice(self.lo, &self.dims)
    }

    pub fn diffs(&self) -> &[Matrix] {
        &self.diffs
    }

    /// Coordinates on H^deg: cocycles `z`, a quotient `p` of cocycle
    /// coordinates killing the coboundaries, and a splitting `s` of `p`.
    pub fn cohomology_basis(&self, deg: i32) -> CohomologyBasis {
        let n = self.dim(deg);
        let z = if n == 0 { Matrix::zeros(0, 0) } else { self.diff(deg).kernel() };
        let b = z.solve(&self.diff(deg - 1)).expect("image of d lies in the cocycles");
        let (p, free) = b.left_kernel_with_free();
        let s = Matrix::selection(&free, z.ncols()).transpose();
        CohomologyBasis { z, p, s }
    }
}

#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub z: Matrix,
    pub p: Matrix,
    pub s: Matrix,
}

impl CohomologyBasis {
    pub fn dim(&self) -> usize {
        self.p.nrows()
    }

    /// Cohomology classes (as rows of `p`) to representing cochains.
    pub fn lift(&self) -> Matrix {
        self.z.mul(&self.s)
    }

    /// Class of each cocycle column of `c`.
    pub fn classify(&self, c: &Matrix) -> Matrix {
        self.p.mul(&self.z.solve(c).expect("argument must consist of cocycles"))
    }
}

/// Map on H^deg induced by a degreewise map `f` (given in degree `deg`).
pub fn induced_map(src: &CohomologyBasis, dst: &CohomologyBasis, f: &Matrix) -> Matrix {
    dst.classify(&f.mul(&src.lift()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_cochains() {
        // three vertices, three edges of a triangle boundary
        let d0 = Matrix::from_rows_i64(3, 3, &[vec![-1, 1, 0], vec![0, -1, 1], vec![-1, 0, 1]]);
        let c = QSpaceComplex::new(0, vec![3, 3], vec![d0]).unwrap();
        assert_eq!(c.cohomology(), GradedDims::from_slice(0, &[1, 1]));
    }

    #[test]
    fn rejects_non_complex() {
        let d = Matrix::identity(1);
        assert!(QSpaceComplex::new(0, vec![1, 1, 1], vec![d.clone(), d]).is_err());
    }

    #[test]
    fn graded_dims_drop_zeros() {
        let a = GradedDims::from_slice(-1, &[0, 2, 0]);
        let mut b = GradedDims::new();
        b.set(0, 2);
        assert_eq!(a, b);
        assert_eq!(a.euler_characteristic(), 2);
    }
}
