use super::Q;
use std::fmt;

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(u32, Q)>;

/// `a + c * b`.
pub fn axpy(a: &[(u32, Q)], c: &Q, b: &[(u32, Q)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn scale_vec(v: &mut SparseVec, c: &Q) {
    if c.is_one() {
        return;
    }
    for e in v.iter_mut() {
        e.1 = &e.1 * c;
    }
}

/// Incremental row echelon form. Each stored row has a leading 1 at its pivot
/// and zeros in every pivot column that existed when it was inserted.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivots: Vec<u32>,
    pivot_row: Vec<Option<u32>>,
}

pub enum Push {
    Independent,
    Dependent,
    /// Reduced vector had no eligible pivot but is nonzero.
    Inconsistent,
}

impl Echelon {
    pub fn new(width: usize) -> Echelon {
        Echelon { rows: Vec::new(), pivots: Vec::new(), pivot_row: vec![None; width] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[u32] {
        &self.pivots
    }

    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut i = 0;
        while i < v.len() {
            let col = v[i].0 as usize;
            match self.pivot_row[col] {
                Some(r) => {
                    let c = -&v[i].1;
                    v = axpy(&v, &c, &self.rows[r as usize]);
                }
                None => i += 1,
            }
        }
        v
    }

    /// Reduce `v` and keep it if independent. Only columns below `limit` may
    /// become pivots.
    pub fn push(&mut self, v: SparseVec, limit: u32) -> Push {
        let mut v = self.reduce(v);
        if v.is_empty() {
            return Push::Dependent;
        }
        let Some(pos) = v.iter().position(|e| e.0 < limit) else {
            return Push::Inconsistent;
        };
        let lead = v[pos].1.recip();
        scale_vec(&mut v, &lead);
        let col = v[pos].0;
        self.pivot_row[col as usize] = Some(self.rows.len() as u32);
        self.pivots.push(col);
        self.rows.push(v);
        Push::Independent
    }

    /// Clear every pivot column from every other row.
    pub fn back_substitute(&mut self) {
        for r in (0..self.rows.len()).rev() {
            let mut v = std::mem::take(&mut self.rows[r]);
            let own = self.pivots[r];
            let mut i = 0;
            while i < v.len() {
                let col = v[i].0;
                if col != own {
                    if let Some(p) = self.pivot_row[col as usize] {
                        let c = -&v[i].1;
                        v = axpy(&v, &c, &self.rows[p as usize]);
                        continue;
                    }
                }
                i += 1;
            }
            self.rows[r] = v;
        }
    }

    pub fn pivot_row_of(&self, col: u32) -> Option<usize> {
        self.pivot_row[col as usize].map(|r| r as usize)
    }
}

/// Sparse rational matrix, stored by columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    nrows: usize,
    ncols: usize,
    cols: Vec<SparseVec>,
}

impl Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Matrix {
        Matrix { nrows, ncols, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix { nrows: n, ncols: n, cols: (0..n).map(|i| vec![(i as u32, Q::one())]).collect() }
    }

    pub fn from_columns(nrows: usize, cols: Vec<SparseVec>) -> Matrix {
        for c in &cols {
            debug_assert!(c.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(c.iter().all(|e| (e.0 as usize) < nrows && !e.1.is_zero()));
        }
        Matrix { nrows, ncols: cols.len(), cols }
    }

    /// Dense row-major input, mostly for tests.
    pub fn from_rows_i64(nrows: usize, ncols: usize, rows: &[Vec<i64>]) -> Matrix {
        let mut m = Matrix::zeros(nrows, ncols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols);
            for (c, &x) in row.iter().enumerate() {
                if x != 0 {
                    m.cols[c].push((r as u32, Q::from_int(x)));
                }
            }
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Q>], ncols: usize) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), ncols);
        for (r, row) in rows.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    m.cols[c].push((r as u32, x.clone()));
                }
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        match self.cols[c].binary_search_by_key(&(r as u32), |e| e.0) {
            Ok(i) => self.cols[c][i].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut d = vec![vec![Q::zero(); self.ncols]; self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, x) in col {
                d[*r as usize][c] = x.clone();
            }
        }
        d
    }

    pub fn transpose(&self) -> Matrix {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, x) in col {
                cols[*r as usize].push((c as u32, x.clone()));
            }
        }
        Matrix { nrows: self.ncols, ncols: self.nrows, cols }
    }

    pub fn mul_vec(&self, v: &[(u32, Q)]) -> SparseVec {
        if v.len() == 1 {
            let (k, x) = &v[0];
            return self.cols[*k as usize].iter().map(|(r, y)| (*r, x * y)).collect();
        }
        let mut terms: Vec<(u32, Q)> = Vec::new();
        for (k, x) in v {
            terms.extend(self.cols[*k as usize].iter().map(|(r, y)| (*r, x * y)));
        }
        terms.sort_by_key(|e| e.0);
        let mut acc: SparseVec = Vec::with_capacity(terms.len());
        for (r, y) in terms {
            match acc.last_mut() {
                Some(last) if last.0 == r => last.1 = &last.1 + &y,
                _ => {
                    if acc.last().is_some_and(|l| l.1.is_zero()) {
                        acc.pop();
                    }
                    acc.push((r, y));
                }
            }
        }
        if acc.last().is_some_and(|l| l.1.is_zero()) {
            acc.pop();
        }
        acc
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch in product");
        let cols = rhs.cols.iter().map(|c| self.mul_vec(c)).collect();
        Matrix { nrows: self.nrows, ncols: rhs.ncols, cols }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols), "dimension mismatch in sum");
        let one = Q::one();
        let cols = self.cols.iter().zip(&rhs.cols).map(|(a, b)| axpy(a, &one, b)).collect();
        Matrix { nrows: self.nrows, ncols: self.ncols, cols }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols), "dimension mismatch in difference");
        let m1 = -Q::one();
        let cols = self.cols.iter().zip(&rhs.cols).map(|(a, b)| axpy(a, &m1, b)).collect();
        Matrix { nrows: self.nrows, ncols: self.ncols, cols }
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        if c.is_zero() {
            return Matrix::zeros(self.nrows, self.ncols);
        }
        let mut m = self.clone();
        for col in &mut m.cols {
            scale_vec(col, c);
        }
        m
    }

    /// Rows listed in `idx`, in that order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut pos = vec![u32::MAX; self.nrows];
        for (new, &old) in idx.iter().enumerate() {
            pos[old] = new as u32;
        }
        let cols = self
            .cols
            .iter()
            .map(|c| {
                let mut v: SparseVec =
                    c.iter().filter(|e| pos[e.0 as usize] != u32::MAX).map(|e| (pos[e.0 as usize], e.1.clone())).collect();
                v.sort_by_key(|e| e.0);
                v
            })
            .collect();
        Matrix { nrows: idx.len(), ncols: self.ncols, cols }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix { nrows: self.nrows, ncols: idx.len(), cols: idx.iter().map(|&j| self.cols[j].clone()).collect() }
    }

    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        let nrows = parts.first().map_or(0, |m| m.nrows);
        let mut cols = Vec::new();
        for m in parts {
            assert_eq!(m.nrows, nrows, "hstack row mismatch");
            cols.extend(m.cols.iter().cloned());
        }
        Matrix { nrows, ncols: cols.len(), cols }
    }

    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        let ncols = parts.first().map_or(0, |m| m.ncols);
        let mut cols: Vec<SparseVec> = vec![Vec::new(); ncols];
        let mut off = 0u32;
        for m in parts {
            assert_eq!(m.ncols, ncols, "vstack column mismatch");
            for (c, col) in m.cols.iter().enumerate() {
                cols[c].extend(col.iter().map(|e| (e.0 + off, e.1.clone())));
            }
            off += m.nrows as u32;
        }
        Matrix { nrows: off as usize, ncols, cols }
    }

    pub fn block_diag(parts: &[&Matrix]) -> Matrix {
        let nrows = parts.iter().map(|m| m.nrows).sum();
        let mut cols = Vec::new();
        let mut off = 0u32;
        for m in parts {
            for col in &m.cols {
                cols.push(col.iter().map(|e| (e.0 + off, e.1.clone())).collect());
            }
            off += m.nrows as u32;
        }
        Matrix { nrows, ncols: cols.len(), cols }
    }

    /// Assemble from non-overlapping blocks `(row offset, col offset, negate, block)`.
    pub fn from_blocks(nrows: usize, ncols: usize, blocks: &[(usize, usize, bool, &Matrix)]) -> Matrix {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); ncols];
        for (r0, c0, neg, b) in blocks {
            assert!(r0 + b.nrows <= nrows && c0 + b.ncols <= ncols, "block outside the matrix");
            for (j, col) in b.cols.iter().enumerate() {
                let dst = &mut cols[c0 + j];
                dst.extend(col.iter().map(|(r, x)| (*r + *r0 as u32, if *neg { -x } else { x.clone() })));
            }
        }
        for c in &mut cols {
            c.sort_by_key(|e| e.0);
            debug_assert!(c.windows(2).all(|w| w[0].0 < w[1].0), "overlapping blocks");
        }
        Matrix { nrows, ncols, cols }
    }

    /// 0/1 matrix picking coordinates: row `i` reads column `picks[i]`.
    pub fn selection(picks: &[usize], ncols: usize) -> Matrix {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); ncols];
        for (i, &j) in picks.iter().enumerate() {
            cols[j].push((i as u32, Q::one()));
        }
        Matrix { nrows: picks.len(), ncols, cols }
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.nrows);
        for c in &self.cols {
            ech.push(c.clone(), u32::MAX);
        }
        ech.rank()
    }

    /// Basis of the null space, as columns.
    pub fn kernel(&self) -> Matrix {
        self.kernel_with_free().0
    }

    /// Null space basis plus its free coordinates: column `i` has a 1 in row
    /// `free[i]` and 0 in every other free row.
    pub fn kernel_with_free(&self) -> (Matrix, Vec<usize>) {
        let t = self.transpose();
        let mut ech = Echelon::new(self.ncols);
        for row in t.cols {
            ech.push(row, u32::MAX);
        }
        ech.back_substitute();
        let mut is_pivot = vec![false; self.ncols];
        for &p in ech.pivots() {
            is_pivot[p as usize] = true;
        }
        // entries of pivot rows sitting in free columns
        let mut free_entries: Vec<Vec<(u32, Q)>> = vec![Vec::new(); self.ncols];
        for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
            for (c, x) in row {
                if *c != p {
                    free_entries[*c as usize].push((p, -x));
                }
            }
        }
        let mut cols = Vec::new();
        let mut free = Vec::new();
        for f in 0..self.ncols {
            if is_pivot[f] {
                continue;
            }
            let mut v = std::mem::take(&mut free_entries[f]);
            v.push((f as u32, Q::one()));
            v.sort_by_key(|e| e.0);
            cols.push(v);
            free.push(f);
        }
        (Matrix { nrows: self.ncols, ncols: cols.len(), cols }, free)
    }

    /// Rows spanning `{y : y A = 0}`.
    pub fn left_kernel(&self) -> Matrix {
        self.transpose().kernel().transpose()
    }

    /// Left kernel rows `P` with `free`: `P` times the unit vector at
    /// `free[i]` is the i-th unit vector, so those units give a section of `P`.
    pub fn left_kernel_with_free(&self) -> (Matrix, Vec<usize>) {
        let (k, free) = self.transpose().kernel_with_free();
        (k.transpose(), free)
    }

    /// From `(row, col, value)` entries; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, mut entries: Vec<(usize, usize, Q)>) -> Matrix {
        entries.sort_by_key(|e| (e.1, e.0));
        let mut cols: Vec<SparseVec> = vec![Vec::new(); ncols];
        for (r, c, x) in entries {
            assert!(r < nrows && c < ncols, "entry ({r}, {c}) outside {nrows}x{ncols}");
            let col = &mut cols[c];
            match col.last_mut() {
                Some(last) if last.0 as usize == r => last.1 = &last.1 + &x,
                _ => col.push((r as u32, x)),
            }
        }
        for col in &mut cols {
            col.retain(|e| !e.1.is_zero());
        }
        Matrix { nrows, ncols, cols }
    }

    /// Some `X` with `A X = B`, or `None` if inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.nrows, rhs.nrows, "solve row mismatch");
        let n = self.ncols as u32;
        let width = self.ncols + rhs.ncols;
        let at = self.transpose();
        let bt = rhs.transpose();
        let mut ech = Echelon::new(width);
        for (a, b) in at.cols.into_iter().zip(bt.cols) {
            let mut row = a;
            row.extend(b.into_iter().map(|e| (e.0 + n, e.1)));
            if let Push::Inconsistent = ech.push(row, n) {
                return None;
            }
        }
        ech.back_substitute();
        let mut cols: Vec<SparseVec> = vec![Vec::new(); rhs.ncols];
        for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
            for (c, x) in row {
                if *c >= n {
                    cols[(*c - n) as usize].push((p, x.clone()));
                }
            }
        }
        for c in &mut cols {
            c.sort_by_key(|e| e.0);
        }
        Some(Matrix { nrows: self.ncols, ncols: rhs.ncols, cols })
    }

    /// `S` with `self * S = I`; requires full row rank.
    pub fn right_inverse(&self) -> Option<Matrix> {
        self.solve(&Matrix::identity(self.nrows))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.nrows, self.ncols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> Matrix {
        let nc = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows_i64(rows.len(), nc, rows)
    }

    #[test]
    fn rank_and_kernel_small() {
        let a = m(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.ncols(), 1);
        assert!(a.mul(&k).is_zero());
        let lk = a.left_kernel();
        assert_eq!(lk.nrows(), 1);
        assert!(lk.mul(&a).is_zero());
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[vec![1, 1], vec![0, 1], vec![1, 2]]);
        let b = m(&[vec![3], vec![1], vec![4]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x), b);
        let bad = m(&[vec![3], vec![1], vec![5]]);
        assert!(a.solve(&bad).is_none());
    }

    #[test]
    fn right_inverse_of_projection() {
        let p = m(&[vec![1, 0, 1], vec![0, 1, 1]]);
        let s = p.right_inverse().unwrap();
        assert_eq!(p.mul(&s), Matrix::identity(2));
    }

    #[test]
    fn stacking() {
        let a = m(&[vec![1, 2]]);
        let b = m(&[vec![3, 4]]);
        let v = Matrix::vstack(&[&a, &b]);
        assert_eq!(v, m(&[vec![1, 2], vec![3, 4]]));
        let h = Matrix::hstack(&[&a, &b]);
        assert_eq!(h, m(&[vec![1, 2, 3, 4]]));
        let d = Matrix::block_diag(&[&a, &b]);
        assert_eq!(d, m(&[vec![1, 2, 0, 0], vec![0, 0, 3, 4]]));
        assert_eq!(v.select_rows(&[1, 0]), m(&[vec![3, 4], vec![1, 2]]));
    }
}
