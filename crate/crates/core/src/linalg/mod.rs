//! Exact linear algebra over the rationals.

mod complex;
mod matrix;
mod scalar;

pub use complex::{induced_map, CohomologyBasis, GradedDims, QSpaceComplex};
pub use matrix::{axpy, Echelon, Matrix, Push, SparseVec};
pub use scalar::Q;

/// Rank of a family of sparse vectors of the given width.
pub fn rank_of_vectors<I: IntoIterator<Item = SparseVec>>(width: usize, vs: I) -> usize {
    let mut ech = Echelon::new(width);
    for v in vs {
        ech.push(v, u32::MAX);
    }
    ech.rank()
}
