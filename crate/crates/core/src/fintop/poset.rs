use crate::error::{Error, Result};
use crate::scx::Complex;
use fixedbitset::FixedBitSet;
use std::fmt;
use std::sync::Arc;

/// Face poset of a complex with the up-set (Alexandrov) topology.
///
/// Opens are coface-closed sets of simplices; the minimal open around a
/// point x is ↑x.
pub struct FacePoset {
    complex: Arc<Complex>,
    up: Vec<Box<[u32]>>,
}

impl FacePoset {
    pub fn new(complex: &Arc<Complex>) -> FacePoset {
        let up = (0..complex.len())
            .map(|i| {
                let mut v = complex.all_cofaces(i);
                v.push(i as u32);
                v.sort_unstable();
                v.into_boxed_slice()
            })
            .collect();
        FacePoset { complex: complex.clone(), up }
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    /// Longest strict chain length (the dimension of the complex).
    pub fn height(&self) -> usize {
        self.complex.dim().max(0) as usize
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.complex.is_face(a, b)
    }

    /// ↑x including x, ascending.
    pub fn up(&self, x: usize) -> &[u32] {
        &self.up[x]
    }

    pub fn up_covers(&self, x: usize) -> &[u32] {
        self.complex.cofaces(x)
    }

    pub fn down_covers(&self, x: usize) -> &[u32] {
        self.complex.faces(x)
    }

    pub fn rank(&self, x: usize) -> usize {
        self.complex.simplex_dim(x)
    }

    pub fn label(&self, x: usize) -> String {
        self.complex.simplex_label(x)
    }

    /// The element directly above `x` obtained by adding vertex `v`.
    pub fn add_vertex(&self, x: usize, v: u32) -> Option<usize> {
        let mut s = self.complex.simplex(x).to_vec();
        s.push(v);
        self.complex.find(&s)
    }

    /// Saturated chain x = c₀ ⋖ c₁ ⋖ … ⋖ y; None unless x ≤ y.
    pub fn chain(&self, x: usize, y: usize) -> Option<Vec<usize>> {
        if !self.leq(x, y) {
            return None;
        }
        let sx = self.complex.simplex(x);
        let mut cur = x;
        let mut out = vec![x];
        for &v in self.complex.simplex(y) {
            if sx.binary_search(&v).is_err() {
                cur = self.add_vertex(cur, v).expect("faces of y exist");
                out.push(cur);
            }
        }
        Some(out)
    }

    /// Number of connected components of the comparability graph restricted to `w`.
    pub fn components(&self, w: &UpSet) -> usize {
        self.component_sets(w).len()
    }

    /// The components themselves, each sorted, ordered by least point.
    pub fn component_sets(&self, w: &UpSet) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        for x in w.iter() {
            for &y in self.up_covers(x) {
                if w.contains(y as usize) {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, y as usize));
                    parent[a] = b;
                }
            }
        }
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
        for x in w.iter() {
            let r = find(&mut parent, x);
            by_root.entry(r).or_default().push(x);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
        out.sort_by_key(|c| c[0]);
        out
    }
}

impl fmt::Debug for FacePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FacePoset({} points)", self.len())
    }
}

/// Open set of a face poset: a coface-closed set of points.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UpSet {
    bits: FixedBitSet,
}

impl UpSet {
    pub fn empty(poset: &FacePoset) -> UpSet {
        UpSet { bits: FixedBitSet::with_capacity(poset.len()) }
    }

    pub fn all(poset: &FacePoset) -> UpSet {
        let mut bits = FixedBitSet::with_capacity(poset.len());
        bits.insert_range(..);
        UpSet { bits }
    }

    /// Up-closure of the given points.
    pub fn generated(poset: &FacePoset, gens: impl IntoIterator<Item = usize>) -> UpSet {
        let mut bits = FixedBitSet::with_capacity(poset.len());
        for g in gens {
            for &y in poset.up(g) {
                bits.insert(y as usize);
            }
        }
        UpSet { bits }
    }

    pub fn principal(poset: &FacePoset, x: usize) -> UpSet {
        UpSet::generated(poset, [x])
    }

    pub fn from_points(poset: &FacePoset, pts: impl IntoIterator<Item = usize>) -> Result<UpSet> {
        let mut bits = FixedBitSet::with_capacity(poset.len());
        for p in pts {
            if p >= poset.len() {
                return Err(Error::Domain(format!("point {p} outside the poset")));
            }
            bits.insert(p);
        }
        let u = UpSet { bits };
        if u.iter().any(|x| poset.up_covers(x).iter().any(|&y| !u.contains(y as usize))) {
            return Err(Error::Domain("point set is not open (not closed upward)".into()));
        }
        Ok(u)
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_subset(&self, other: &UpSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection(&self, other: &UpSet) -> UpSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        UpSet { bits }
    }

    pub fn union(&self, other: &UpSet) -> UpSet {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        UpSet { bits }
    }

    /// Removes a minimal point; the result stays open.
    pub fn without_minimal(&self, poset: &FacePoset, x: usize) -> UpSet {
        debug_assert!(poset.down_covers(x).iter().all(|&d| !self.contains(d as usize)));
        let mut bits = self.bits.clone();
        bits.set(x, false);
        UpSet { bits }
    }

    /// Minimal elements: the smallest generating set.
    pub fn minimal(&self, poset: &FacePoset) -> Vec<usize> {
        self.iter().filter(|&x| poset.down_covers(x).iter().all(|&d| !self.contains(d as usize))).collect()
    }

    pub fn difference_points(&self, other: &UpSet) -> Vec<usize> {
        self.iter().filter(|&x| !other.contains(x)).collect()
    }
}

impl fmt::Debug for UpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<usize> = self.iter().collect();
        write!(f, "UpSet{v:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scx::{boundary_of_simplex, simplex};

    #[test]
    fn edge_poset() {
        let k = Arc::new(simplex(1));
        let p = FacePoset::new(&k);
        assert_eq!(p.len(), 3);
        assert_eq!(p.up(0), &[0, 2]);
        assert!(p.leq(0, 2) && !p.leq(2, 0));
        assert_eq!(p.chain(0, 2), Some(vec![0, 2]));
        assert_eq!(p.chain(0, 1), None);
    }

    #[test]
    fn components_of_open() {
        let k = Arc::new(boundary_of_simplex(1));
        let p = FacePoset::new(&k);
        assert_eq!(p.components(&UpSet::all(&p)), 2);
        let t = Arc::new(boundary_of_simplex(3));
        let pt = FacePoset::new(&t);
        let e01 = t.find(&[0, 1]).unwrap();
        let punctured = UpSet::principal(&pt, e01).without_minimal(&pt, e01);
        assert_eq!(pt.components(&punctured), 2);
        assert!(UpSet::from_points(&pt, [e01]).is_err());
    }
}
