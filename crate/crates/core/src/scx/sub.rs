use super::{check_ambient, same_ambient, Complex, VertexId};
use crate::error::{Error, Result};
use fixedbitset::FixedBitSet;
use std::fmt;
use std::sync::Arc;

/// Face-closed subset of an ambient complex.
#[derive(Clone)]
pub struct Subcomplex {
    ambient: Arc<Complex>,
    set: FixedBitSet,
}

impl Subcomplex {
    pub fn empty(ambient: &Arc<Complex>) -> Subcomplex {
        Subcomplex { ambient: ambient.clone(), set: FixedBitSet::with_capacity(ambient.len()) }
    }

    pub fn full(ambient: &Arc<Complex>) -> Subcomplex {
        let mut set = FixedBitSet::with_capacity(ambient.len());
        set.insert_range(..);
        Subcomplex { ambient: ambient.clone(), set }
    }

    /// Caller guarantees face-closure.
    pub(crate) fn from_bits_unchecked(ambient: &Arc<Complex>, set: FixedBitSet) -> Subcomplex {
        debug_assert_eq!(set.len(), ambient.len());
        Subcomplex { ambient: ambient.clone(), set }
    }

    /// Checked conversion from an arbitrary set of simplex indices.
    pub fn from_bits(ambient: &Arc<Complex>, set: FixedBitSet) -> Result<Subcomplex> {
        if set.len() != ambient.len() {
            return Err(Error::Domain("bitset width differs from ambient size".into()));
        }
        let s = Subcomplex { ambient: ambient.clone(), set };
        if !s.is_face_closed() {
            return Err(Error::Domain("set is not closed under faces".into()));
        }
        Ok(s)
    }

    /// Smallest subcomplex containing the given simplex indices.
    pub fn closure_of_indices(ambient: &Arc<Complex>, idx: impl IntoIterator<Item = usize>) -> Result<Subcomplex> {
        let mut set = FixedBitSet::with_capacity(ambient.len());
        for i in idx {
            if i >= ambient.len() {
                return Err(Error::Domain(format!("simplex index {i} not in ambient")));
            }
            set.insert(i);
        }
        close_down(ambient, &mut set);
        Ok(Subcomplex { ambient: ambient.clone(), set })
    }

    /// Smallest subcomplex containing the given vertex sets.
    pub fn closure(ambient: &Arc<Complex>, simplices: &[Vec<VertexId>]) -> Result<Subcomplex> {
        let mut idx = Vec::with_capacity(simplices.len());
        for s in simplices {
            idx.push(ambient.find(s).ok_or_else(|| Error::Domain(format!("{s:?} is not a simplex of the ambient")))?);
        }
        Subcomplex::closure_of_indices(ambient, idx)
    }

    /// Im(σ): all faces of one simplex.
    pub fn image_of_simplex(ambient: &Arc<Complex>, i: usize) -> Subcomplex {
        let mut set = FixedBitSet::with_capacity(ambient.len());
        for f in ambient.all_faces(i) {
            set.insert(f as usize);
        }
        Subcomplex { ambient: ambient.clone(), set }
    }

    /// 𝒢(A): simplices with all vertices in `a`.
    pub fn hull(ambient: &Arc<Complex>, a: &[VertexId]) -> Subcomplex {
        let mut inside = vec![false; ambient.vertex_count()];
        for &v in a {
            if (v as usize) < inside.len() {
                inside[v as usize] = true;
            }
        }
        let mut set = FixedBitSet::with_capacity(ambient.len());
        for (i, s) in ambient.simplices().iter().enumerate() {
            if s.iter().all(|&v| inside[v as usize]) {
                set.insert(i);
            }
        }
        Subcomplex { ambient: ambient.clone(), set }
    }

    /// st(σ): union of Im(τ) over τ ≥ σ.
    pub fn star(ambient: &Arc<Complex>, i: usize) -> Subcomplex {
        let mut tops = ambient.all_cofaces(i);
        tops.push(i as u32);
        Subcomplex::closure_of_indices(ambient, tops.into_iter().map(|t| t as usize)).expect("indices are in range")
    }

    /// lk(σ) = st(σ) −Δ Im(σ).
    pub fn link(ambient: &Arc<Complex>, i: usize) -> Subcomplex {
        Subcomplex::star(ambient, i)
            .delta_subtract(&Subcomplex::image_of_simplex(ambient, i))
            .expect("same ambient")
    }

    pub fn ambient(&self) -> &Arc<Complex> {
        &self.ambient
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.set
    }

    pub fn contains(&self, i: usize) -> bool {
        self.set.contains(i)
    }

    pub fn contains_simplex(&self, s: &[VertexId]) -> bool {
        self.ambient.find(s).is_some_and(|i| self.set.contains(i))
    }

    pub fn len(&self) -> usize {
        self.set.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_clear()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.set.ones()
    }

    /// V(Y).
    pub fn vertices(&self) -> Vec<VertexId> {
        (0..self.ambient.vertex_count()).filter(|&v| self.set.contains(v)).map(|v| v as VertexId).collect()
    }

    pub fn dim(&self) -> i32 {
        self.set.ones().next_back().map_or(-1, |i| self.ambient.simplex_dim(i) as i32)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0usize; (self.dim() + 1) as usize];
        for i in self.set.ones() {
            f[self.ambient.simplex_dim(i)] += 1;
        }
        f
    }

    pub fn is_face_closed(&self) -> bool {
        self.set.ones().all(|i| self.ambient.faces(i).iter().all(|&f| self.set.contains(f as usize)))
    }

    pub fn union(&self, other: &Subcomplex) -> Result<Subcomplex> {
        check_ambient(&self.ambient, &other.ambient, "union")?;
        let mut set = self.set.clone();
        set.union_with(&other.set);
        Ok(Subcomplex { ambient: self.ambient.clone(), set })
    }

    pub fn intersection(&self, other: &Subcomplex) -> Result<Subcomplex> {
        check_ambient(&self.ambient, &other.ambient, "intersection")?;
        let mut set = self.set.clone();
        set.intersect_with(&other.set);
        Ok(Subcomplex { ambient: self.ambient.clone(), set })
    }

    /// Union of a family; the empty family gives ∅.
    pub fn union_all<'a>(ambient: &Arc<Complex>, family: impl IntoIterator<Item = &'a Subcomplex>) -> Result<Subcomplex> {
        let mut acc = Subcomplex::empty(ambient);
        for y in family {
            check_ambient(ambient, &y.ambient, "union")?;
            acc.set.union_with(&y.set);
        }
        Ok(acc)
    }

    /// Intersection of a family; the empty family gives the ambient.
    pub fn intersection_all<'a>(
        ambient: &Arc<Complex>,
        family: impl IntoIterator<Item = &'a Subcomplex>,
    ) -> Result<Subcomplex> {
        let mut acc = Subcomplex::full(ambient);
        for y in family {
            check_ambient(ambient, &y.ambient, "intersection")?;
            acc.set.intersect_with(&y.set);
        }
        Ok(acc)
    }

    /// Y −Δ Z = {σ ∈ Y : Z ∩ Im(σ) = ∅}.
    pub fn delta_subtract(&self, z: &Subcomplex) -> Result<Subcomplex> {
        check_ambient(&self.ambient, &z.ambient, "delta_subtract")?;
        let nv = self.ambient.vertex_count();
        let mut set = FixedBitSet::with_capacity(self.ambient.len());
        for i in self.set.ones() {
            let s = self.ambient.simplex(i);
            if s.iter().all(|&v| (v as usize) < nv && !z.set.contains(v as usize)) {
                set.insert(i);
            }
        }
        Ok(Subcomplex { ambient: self.ambient.clone(), set })
    }

    /// Plain set difference; generally not a subcomplex.
    pub fn set_difference_indices(&self, z: &Subcomplex) -> Result<Vec<usize>> {
        check_ambient(&self.ambient, &z.ambient, "difference")?;
        Ok(self.set.ones().filter(|&i| !z.set.contains(i)).collect())
    }

    pub fn is_subset(&self, other: &Subcomplex) -> Result<bool> {
        check_ambient(&self.ambient, &other.ambient, "inclusion test")?;
        Ok(self.set.is_subset(&other.set))
    }

    pub fn is_fat(&self) -> bool {
        *self == Subcomplex::hull(&self.ambient, &self.vertices())
    }

    /// The subcomplex as a standalone complex, keeping labels; also returns
    /// the ambient index of each new simplex.
    pub fn to_complex(&self) -> (Complex, Vec<usize>) {
        let verts = self.vertices();
        let mut newv = vec![u32::MAX; self.ambient.vertex_count()];
        for (i, &v) in verts.iter().enumerate() {
            newv[v as usize] = i as u32;
        }
        let labels: Vec<String> = verts.iter().map(|&v| self.ambient.label(v)).collect();
        let maximal: Vec<Vec<u32>> = self
            .set
            .ones()
            .filter(|&i| self.ambient.cofaces(i).iter().all(|&c| !self.set.contains(c as usize)))
            .map(|i| self.ambient.simplex(i).iter().map(|&v| newv[v as usize]).collect())
            .collect();
        let k = Complex::new(labels, &maximal).expect("subcomplex data is valid");
        let back = k
            .simplices()
            .iter()
            .map(|s| {
                let orig: Vec<u32> = s.iter().map(|&v| verts[v as usize]).collect();
                self.ambient.index_of(&orig).expect("simplex of the subcomplex")
            })
            .collect();
        (k, back)
    }
}

pub(crate) fn close_down(ambient: &Complex, set: &mut FixedBitSet) {
    // faces have smaller indices, so one descending sweep suffices
    let mut i = ambient.len();
    while i > 0 {
        i -= 1;
        if set.contains(i) {
            for &f in ambient.faces(i) {
                set.insert(f as usize);
            }
        }
    }
}

impl PartialEq for Subcomplex {
    fn eq(&self, other: &Subcomplex) -> bool {
        self.set == other.set && same_ambient(&self.ambient, &other.ambient)
    }
}

impl Eq for Subcomplex {}

impl std::hash::Hash for Subcomplex {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.set.hash(h);
    }
}

impl fmt::Debug for Subcomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ambient.len() <= 64 {
            let names: Vec<String> = self.set.ones().map(|i| self.ambient.simplex_label(i)).collect();
            write!(f, "Subcomplex[{}]", names.join(" "))
        } else {
            write!(f, "Subcomplex(f={:?})", self.f_vector())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{boundary_of_simplex, simplex};
    use super::*;

    #[test]
    fn closure_examples() {
        let k = Arc::new(simplex(3));
        let im = Subcomplex::closure(&k, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(im.len(), 7);
        assert!(Subcomplex::closure(&k, &[]).unwrap().is_empty());
        let d2 = Arc::new(simplex(2));
        let bd = Subcomplex::closure(&d2, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(bd.f_vector(), vec![3, 3]);
        assert!(Subcomplex::closure(&d2, &[vec![0, 5]]).is_err());
    }

    #[test]
    fn lattice_examples() {
        let d2 = Arc::new(simplex(2));
        let bd = Subcomplex::closure(&d2, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let top = Subcomplex::closure(&d2, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(bd.union(&top).unwrap(), Subcomplex::full(&d2));
        let e = Subcomplex::closure(&d2, &[vec![0, 1]]).unwrap();
        assert_eq!(bd.intersection(&e).unwrap(), e);
        let other = Arc::new(boundary_of_simplex(3));
        assert!(matches!(bd.union(&Subcomplex::full(&other)), Err(Error::AmbientMismatch(_))));
    }

    #[test]
    fn delta_subtract_examples() {
        let d1 = Arc::new(simplex(1));
        let v0 = Subcomplex::closure(&d1, &[vec![0]]).unwrap();
        let v1 = Subcomplex::closure(&d1, &[vec![1]]).unwrap();
        let full = Subcomplex::full(&d1);
        let both = v0.union(&v1).unwrap();
        assert!(full.delta_subtract(&both).unwrap().is_empty());
        let morgan = full.delta_subtract(&v0).unwrap().union(&full.delta_subtract(&v1).unwrap()).unwrap();
        assert_eq!(morgan, both);

        let d2 = Arc::new(simplex(2));
        let bd = Subcomplex::closure(&d2, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let x = Subcomplex::full(&d2);
        assert!(x.delta_subtract(&bd).unwrap().is_empty());
        let back = x.delta_subtract(&x.delta_subtract(&bd).unwrap()).unwrap();
        assert_eq!(back, x);
        assert!(!back.is_subset(&bd).unwrap());
        assert_eq!(bd.delta_subtract(&Subcomplex::empty(&d2)).unwrap(), bd);
        assert!(bd.delta_subtract(&bd).unwrap().is_empty());
    }

    #[test]
    fn hull_and_fatness() {
        let d2 = Arc::new(simplex(2));
        let bd = Subcomplex::closure(&d2, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(!bd.is_fat());
        assert_eq!(Subcomplex::hull(&d2, &[0, 1, 2]), Subcomplex::full(&d2));
        let e = Subcomplex::image_of_simplex(&d2, 4);
        assert!(e.is_fat());
        assert_eq!(Subcomplex::hull(&d2, &[0, 2]), e);
    }

    #[test]
    fn star_and_link() {
        let d1 = Arc::new(simplex(1));
        assert_eq!(Subcomplex::star(&d1, 0), Subcomplex::full(&d1));
        assert_eq!(Subcomplex::link(&d1, 0), Subcomplex::closure(&d1, &[vec![1]]).unwrap());
        // vertex link in the boundary of a tetrahedron is a triangle boundary
        let t = Arc::new(boundary_of_simplex(3));
        let lk = Subcomplex::link(&t, 0);
        assert_eq!(lk.f_vector(), vec![3, 3]);
        assert!(!lk.contains(0));
    }

    #[test]
    fn standalone_copy() {
        let t = Arc::new(boundary_of_simplex(3));
        let lk = Subcomplex::link(&t, 0);
        let (c, back) = lk.to_complex();
        assert_eq!(c.f_vector(), vec![3, 3]);
        assert_eq!(c.betti(), vec![1, 1]);
        assert!(back.iter().all(|&i| lk.contains(i)));
    }
}
