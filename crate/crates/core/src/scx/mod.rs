//! Abstract simplicial complexes and their subcomplex lattice.

mod build;
mod map;
mod sub;

pub use build::{boundary_of_simplex, cone, simplex, suspension};
pub use map::{product, product_ordered, Product, SimplicialMap};
pub use sub::Subcomplex;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Q};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Vertex handle: index into the owning complex's vertex table.
pub type VertexId = u32;

/// Strictly increasing, nonempty vertex list.
pub type Simplex = Box<[VertexId]>;

#[derive(Clone)]
enum Labels {
    Explicit(Vec<String>),
    /// Vertex `i` is the barycenter of simplex `i` of the base.
    Barycentric(Arc<Complex>),
}

/// Finite abstract simplicial complex with its face lattice.
///
/// Simplices are indexed in (dimension, lexicographic) order, so the singleton
/// of vertex `v` always has index `v`.
#[derive(Clone)]
pub struct Complex {
    labels: Labels,
    nverts: usize,
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, u32>,
    dim_start: Vec<usize>,
    faces: Vec<Box<[u32]>>,
    cofaces: Vec<Box<[u32]>>,
}

impl Complex {
    /// Face closure of `maximal` over the vertices `0..labels.len()`.
    pub fn new(labels: Vec<String>, maximal: &[Vec<VertexId>]) -> Result<Complex> {
        let n = labels.len();
        let mut seen: HashMap<Simplex, ()> = HashMap::new();
        for v in 0..n as u32 {
            seen.insert(vec![v].into_boxed_slice(), ());
        }
        for m in maximal {
            let mut s = m.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::Domain("empty simplex".into()));
            }
            if let Some(&bad) = s.iter().find(|&&v| v as usize >= n) {
                return Err(Error::Domain(format!("vertex index {bad} out of range")));
            }
            if s.len() > 24 {
                return Err(Error::Domain("simplex dimension too large".into()));
            }
            if seen.contains_key(s.as_slice()) {
                continue;
            }
            let k = s.len();
            for mask in 1u32..(1u32 << k) {
                let face: Vec<u32> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
                seen.entry(face.into_boxed_slice()).or_insert(());
            }
        }
        let mut lab_sorted = labels.clone();
        lab_sorted.sort();
        if lab_sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("duplicate vertex label".into()));
        }
        Ok(Complex::from_closed(Labels::Explicit(labels), n, seen.into_keys().collect()))
    }

    /// Build from labels and maximal simplices given by label.
    pub fn from_labeled(vertices: &[&str], maximal: &[Vec<&str>]) -> Result<Complex> {
        let pos: HashMap<&str, u32> = vertices.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
        let mut ms = Vec::new();
        for m in maximal {
            let mut s = Vec::new();
            for v in m {
                s.push(*pos.get(v).ok_or_else(|| Error::Input(format!("unknown vertex label {v:?}")))?);
            }
            ms.push(s);
        }
        Complex::new(vertices.iter().map(|s| s.to_string()).collect(), &ms)
    }

    /// `simps` must already be face-closed and contain every vertex singleton.
    fn from_closed(labels: Labels, nverts: usize, mut simps: Vec<Simplex>) -> Complex {
        simps.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let maxlen = simps.last().map_or(0, |s| s.len());
        // dim_start[d] = first index of a d-simplex; last entry is the total
        let mut dim_start: Vec<usize> = (1..=maxlen).map(|len| simps.partition_point(|s| s.len() < len)).collect();
        dim_start.push(simps.len());
        let index: HashMap<Simplex, u32> = simps.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        let mut faces: Vec<Box<[u32]>> = Vec::with_capacity(simps.len());
        let mut coface_lists: Vec<Vec<u32>> = vec![Vec::new(); simps.len()];
        let mut buf = Vec::new();
        for (i, s) in simps.iter().enumerate() {
            if s.len() == 1 {
                faces.push(Box::new([]));
                continue;
            }
            let mut fs = Vec::with_capacity(s.len());
            for skip in 0..s.len() {
                buf.clear();
                buf.extend(s.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, v)| *v));
                let f = index[buf.as_slice()];
                fs.push(f);
                coface_lists[f as usize].push(i as u32);
            }
            faces.push(fs.into_boxed_slice());
        }
        let cofaces = coface_lists.into_iter().map(|v| v.into_boxed_slice()).collect();
        Complex { labels, nverts, simplices: simps, index, dim_start, faces, cofaces }
    }

    pub(crate) fn barycentric(base: Arc<Complex>, simps: Vec<Simplex>) -> Complex {
        let n = base.len();
        Complex::from_closed(Labels::Barycentric(base), n, simps)
    }

    /// The complex with no simplices.
    pub fn empty() -> Complex {
        Complex::from_closed(Labels::Explicit(Vec::new()), 0, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.nverts
    }

    /// -1 for the empty complex.
    pub fn dim(&self) -> i32 {
        self.dim_start.len() as i32 - 2
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.dim_start.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Index range of the `d`-simplices.
    pub fn of_dim(&self, d: usize) -> std::ops::Range<usize> {
        if d + 1 >= self.dim_start.len() {
            self.len()..self.len()
        } else {
            self.dim_start[d]..self.dim_start[d + 1]
        }
    }

    pub fn simplex(&self, i: usize) -> &[VertexId] {
        &self.simplices[i]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex_dim(&self, i: usize) -> usize {
        self.simplices[i].len() - 1
    }

    pub fn index_of(&self, s: &[VertexId]) -> Option<usize> {
        self.index.get(s).map(|&i| i as usize)
    }

    /// Index of an arbitrary vertex set, sorting it first.
    pub fn find(&self, vs: &[VertexId]) -> Option<usize> {
        let mut v = vs.to_vec();
        v.sort_unstable();
        v.dedup();
        self.index_of(&v)
    }

    /// Codimension-one faces; entry `j` omits vertex position `j`.
    pub fn faces(&self, i: usize) -> &[u32] {
        &self.faces[i]
    }

    /// Codimension-one cofaces.
    pub fn cofaces(&self, i: usize) -> &[u32] {
        &self.cofaces[i]
    }

    /// All proper cofaces, in index order.
    pub fn all_cofaces(&self, i: usize) -> Vec<u32> {
        let mut out: Vec<u32> = self.cofaces[i].to_vec();
        let mut start = 0;
        while start < out.len() {
            let end = out.len();
            for j in start..end {
                let t = out[j] as usize;
                out.extend_from_slice(&self.cofaces[t]);
            }
            out[end..].sort_unstable();
            let mut layer = out.split_off(end);
            layer.dedup();
            start = end;
            out.extend(layer);
        }
        out.sort_unstable();
        out
    }

    /// All faces including `i` itself, in index order.
    pub fn all_faces(&self, i: usize) -> Vec<u32> {
        let s = &self.simplices[i];
        let k = s.len();
        let mut out: Vec<u32> = (1u32..(1u32 << k))
            .map(|mask| {
                let f: Vec<u32> = (0..k).filter(|j| mask & (1 << j) != 0).map(|j| s[j]).collect();
                self.index[f.as_slice()]
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_face(&self, a: usize, b: usize) -> bool {
        let (sa, sb) = (&self.simplices[a], &self.simplices[b]);
        sa.len() <= sb.len() && sa.iter().all(|v| sb.binary_search(v).is_ok())
    }

    pub fn maximal_simplices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.cofaces[i].is_empty()).collect()
    }

    pub fn label(&self, v: VertexId) -> String {
        match &self.labels {
            Labels::Explicit(l) => l[v as usize].clone(),
            Labels::Barycentric(base) => {
                let inner: Vec<String> = base.simplex(v as usize).iter().map(|&w| base.label(w)).collect();
                format!("b({})", inner.join(","))
            }
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.nverts as u32).map(|v| self.label(v)).collect()
    }

    pub fn simplex_label(&self, i: usize) -> String {
        let inner: Vec<String> = self.simplices[i].iter().map(|&v| self.label(v)).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// The base complex when this is a barycentric subdivision.
    pub fn sd_base(&self) -> Option<&Arc<Complex>> {
        match &self.labels {
            Labels::Barycentric(b) => Some(b),
            Labels::Explicit(_) => None,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Rational Betti numbers b_0..b_dim.
    pub fn betti(&self) -> Vec<usize> {
        let d = self.dim();
        if d < 0 {
            return Vec::new();
        }
        let d = d as usize;
        // rank of ∂_k : C_k -> C_{k-1}
        let mut ranks = vec![0usize; d + 2];
        for (k, rank) in ranks.iter_mut().enumerate().take(d + 1).skip(1) {
            let lo = self.of_dim(k - 1).start;
            let mut ech = Echelon::new(self.of_dim(k - 1).len());
            for i in self.of_dim(k) {
                ech.push(self.boundary_vector(i, lo), u32::MAX);
            }
            *rank = ech.rank();
        }
        (0..=d).map(|k| self.of_dim(k).len() - ranks[k] - ranks[k + 1]).collect()
    }

    /// Simplicial boundary of simplex `i` with row indices shifted by `-offset`.
    pub fn boundary_vector(&self, i: usize, offset: usize) -> Vec<(u32, Q)> {
        let mut v: Vec<(u32, Q)> = self.faces[i]
            .iter()
            .enumerate()
            .map(|(j, &f)| (f - offset as u32, if j % 2 == 0 { Q::one() } else { -Q::one() }))
            .collect();
        v.sort_by_key(|e| e.0);
        v
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Complex) -> bool {
        self.nverts == other.nverts
            && self.simplices == other.simplices
            && (0..self.nverts as u32).all(|v| self.label(v) == other.label(v))
    }
}

impl Eq for Complex {}

impl std::hash::Hash for Complex {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.nverts.hash(h);
        self.simplices.hash(h);
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex(f={:?})", self.f_vector())
    }
}

pub(crate) fn same_ambient(a: &Arc<Complex>, b: &Arc<Complex>) -> bool {
    Arc::ptr_eq(a, b) || (a.len() == b.len() && **a == **b)
}

pub(crate) fn check_ambient(a: &Arc<Complex>, b: &Arc<Complex>, op: &str) -> Result<()> {
    if same_ambient(a, b) {
        Ok(())
    } else {
        Err(Error::AmbientMismatch(format!("{op}: operands live in different complexes")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_indexing() {
        let k = simplex(2);
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
        for v in 0..3u32 {
            assert_eq!(k.index_of(&[v]), Some(v as usize));
        }
        assert_eq!(k.dim(), 2);
        assert_eq!(k.faces(6), &[5, 4, 3]);
        assert_eq!(k.all_cofaces(0), vec![3, 4, 6]);
    }

    #[test]
    fn empty_complex() {
        let e = Complex::empty();
        assert_eq!(e.dim(), -1);
        assert!(e.f_vector().is_empty());
        assert!(e.betti().is_empty());
    }

    #[test]
    fn betti_of_spheres() {
        assert_eq!(boundary_of_simplex(3).betti(), vec![1, 0, 1]);
        assert_eq!(boundary_of_simplex(2).betti(), vec![1, 1]);
        assert_eq!(simplex(3).betti(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Complex::new(vec!["a".into()], &[vec![0, 1]]).is_err());
        assert!(Complex::new(vec!["a".into(), "a".into()], &[vec![0, 1]]).is_err());
        assert!(Complex::from_labeled(&["a"], &[vec!["z"]]).is_err());
    }
}
