//! Barycentric subdivision.
//!
//! Vertex `i` of Sd(K) is the barycenter of simplex `i` of K, and a simplex of
//! Sd(K) is a chain of base simplices. Because base simplices are indexed by
//! dimension first, a chain listed by vertex index is listed by inclusion,
//! so its maximum is the last entry.

use crate::error::Result;
use crate::scx::{check_ambient, Complex, Simplex, Subcomplex, VertexId};
use fixedbitset::FixedBitSet;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct SdComplex {
    complex: Arc<Complex>,
    base: Arc<Complex>,
}

pub fn subdivide(base: &Arc<Complex>) -> SdComplex {
    let mut ends: Vec<Vec<Simplex>> = Vec::with_capacity(base.len());
    let mut all: Vec<Simplex> = Vec::new();
    for t in 0..base.len() {
        let mut here: Vec<Simplex> = vec![vec![t as u32].into_boxed_slice()];
        for f in base.all_faces(t) {
            if f as usize == t {
                continue;
            }
            for c in &ends[f as usize] {
                let mut v = c.to_vec();
                v.push(t as u32);
                here.push(v.into_boxed_slice());
            }
        }
        all.extend(here.iter().cloned());
        ends.push(here);
    }
    drop(ends);
    SdComplex { complex: Arc::new(Complex::barycentric(base.clone(), all)), base: base.clone() }
}

impl SdComplex {
    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn base(&self) -> &Arc<Complex> {
        &self.base
    }

    /// b_σ.
    pub fn barycenter(&self, base_simplex: usize) -> VertexId {
        base_simplex as VertexId
    }

    /// The chain of base simplex indices making up simplex `i` of Sd.
    pub fn chain(&self, i: usize) -> &[u32] {
        self.complex.simplex(i)
    }

    /// Largest base simplex of the chain.
    pub fn top(&self, i: usize) -> usize {
        *self.complex.simplex(i).last().expect("nonempty") as usize
    }

    /// Sd(Z): chains whose maximum lies in Z.
    pub fn subdivide_sub(&self, z: &Subcomplex) -> Result<Subcomplex> {
        check_ambient(&self.base, z.ambient(), "subdivide_sub")?;
        let mut set = FixedBitSet::with_capacity(self.complex.len());
        for i in 0..self.complex.len() {
            if z.contains(self.top(i)) {
                set.insert(i);
            }
        }
        Ok(Subcomplex::from_bits_unchecked(&self.complex, set))
    }
}

/// Sd²(K) with both subdivision layers kept.
#[derive(Clone, Debug)]
pub struct DoubleSd {
    first: SdComplex,
    second: SdComplex,
}

impl DoubleSd {
    pub fn new(base: &Arc<Complex>) -> DoubleSd {
        let first = subdivide(base);
        let second = subdivide(first.complex());
        DoubleSd { first, second }
    }

    pub fn base(&self) -> &Arc<Complex> {
        self.first.base()
    }

    pub fn first(&self) -> &SdComplex {
        &self.first
    }

    pub fn second(&self) -> &SdComplex {
        &self.second
    }

    pub fn complex(&self) -> &Arc<Complex> {
        self.second.complex()
    }

    /// Sd²(Z) for Z ≤ K.
    pub fn subdivide_sub(&self, z: &Subcomplex) -> Result<Subcomplex> {
        self.second.subdivide_sub(&self.first.subdivide_sub(z)?)
    }

    /// Smallest base simplex whose closed realization contains the simplex:
    /// the top base simplex of the top chain entry.
    pub fn carrier(&self, i: usize) -> usize {
        self.first.top(self.second.top(i))
    }

    /// Largest base simplex of the smallest chain entry. The simplex lies in
    /// the open star of b_τ exactly for τ ≤ this simplex.
    pub fn anchor(&self, i: usize) -> usize {
        let bottom = self.complex().simplex(i)[0] as usize;
        self.first.top(bottom)
    }

    /// The vertex b_{b_σ} of Sd² sitting over base simplex σ.
    pub fn double_barycenter(&self, base_simplex: usize) -> VertexId {
        // singleton chain {σ} of Sd has index σ
        base_simplex as VertexId
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scx::{boundary_of_simplex, simplex};

    #[test]
    fn f_vectors() {
        assert_eq!(subdivide(&Arc::new(simplex(1))).complex().f_vector(), vec![3, 2]);
        assert_eq!(subdivide(&Arc::new(simplex(2))).complex().f_vector(), vec![7, 12, 6]);
        assert_eq!(subdivide(&Arc::new(boundary_of_simplex(2))).complex().f_vector(), vec![6, 6]);
    }

    #[test]
    fn labels_name_barycenters() {
        let sd = subdivide(&Arc::new(simplex(1)));
        assert_eq!(sd.complex().label(2), "b(0,1)");
        let sd2 = subdivide(sd.complex());
        assert_eq!(sd2.complex().label(3), "b(b(0),b(0,1))");
    }

    #[test]
    fn boundary_rim_is_fat() {
        let d2 = Arc::new(simplex(2));
        let sd = subdivide(&d2);
        let bd = Subcomplex::closure(&d2, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let rim = sd.subdivide_sub(&bd).unwrap();
        assert_eq!(rim.f_vector(), vec![6, 6]);
        assert!(rim.is_fat());
        assert!(sd.subdivide_sub(&Subcomplex::empty(&d2)).unwrap().is_empty());
    }

    #[test]
    fn carrier_and_anchor_on_edge() {
        let d = DoubleSd::new(&Arc::new(simplex(1)));
        let k = d.complex();
        assert_eq!(k.f_vector(), vec![5, 4]);
        // double barycenters
        for s in 0..3 {
            assert_eq!(d.carrier(d.double_barycenter(s) as usize), s);
        }
        // edge from b{0} to b{{0},{01}}: carrier is the base edge, anchor the vertex
        let e = k.find(&[0, 3]).unwrap();
        assert_eq!(d.carrier(e), 2);
        assert_eq!(d.anchor(e), 0);
    }
}
