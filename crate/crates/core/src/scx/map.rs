use super::{check_ambient, Complex, Subcomplex, VertexId};
use crate::error::{Error, Result};
use fixedbitset::FixedBitSet;
use std::sync::Arc;

/// Vertex map sending every simplex to a simplex.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    source: Arc<Complex>,
    target: Arc<Complex>,
    vmap: Vec<VertexId>,
    smap: Vec<u32>,
}

impl SimplicialMap {
    pub fn new(source: &Arc<Complex>, target: &Arc<Complex>, vmap: Vec<VertexId>) -> Result<SimplicialMap> {
        if vmap.len() != source.vertex_count() {
            return Err(Error::InvalidMap(format!("{} vertex images for {} vertices", vmap.len(), source.vertex_count())));
        }
        if let Some(&v) = vmap.iter().find(|&&v| v as usize >= target.vertex_count()) {
            return Err(Error::InvalidMap(format!("vertex image {v} outside the target")));
        }
        let mut smap = Vec::with_capacity(source.len());
        let mut buf = Vec::new();
        for (i, s) in source.simplices().iter().enumerate() {
            buf.clear();
            buf.extend(s.iter().map(|&v| vmap[v as usize]));
            buf.sort_unstable();
            buf.dedup();
            match target.index_of(&buf) {
                Some(j) => smap.push(j as u32),
                None => {
                    return Err(Error::InvalidMap(format!(
                        "image of {} is not a simplex of the target",
                        source.simplex_label(i)
                    )))
                }
            }
        }
        Ok(SimplicialMap { source: source.clone(), target: target.clone(), vmap, smap })
    }

    pub fn identity(k: &Arc<Complex>) -> SimplicialMap {
        SimplicialMap::new(k, k, (0..k.vertex_count() as u32).collect()).expect("identity is simplicial")
    }

    pub fn source(&self) -> &Arc<Complex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex> {
        &self.target
    }

    pub fn vertex_image(&self, v: VertexId) -> VertexId {
        self.vmap[v as usize]
    }

    pub fn simplex_image(&self, i: usize) -> usize {
        self.smap[i] as usize
    }

    pub fn image(&self, z: &Subcomplex) -> Result<Subcomplex> {
        check_ambient(&self.source, z.ambient(), "map image")?;
        let mut set = FixedBitSet::with_capacity(self.target.len());
        for i in z.indices() {
            set.insert(self.smap[i] as usize);
        }
        Ok(Subcomplex::from_bits_unchecked(&self.target, set))
    }

    pub fn preimage(&self, z: &Subcomplex) -> Result<Subcomplex> {
        check_ambient(&self.target, z.ambient(), "map preimage")?;
        let mut set = FixedBitSet::with_capacity(self.source.len());
        for (i, &j) in self.smap.iter().enumerate() {
            if z.contains(j as usize) {
                set.insert(i);
            }
        }
        Ok(Subcomplex::from_bits_unchecked(&self.source, set))
    }

    pub fn vertex_preimage(&self, a: &[VertexId]) -> Vec<VertexId> {
        let mut inside = vec![false; self.target.vertex_count()];
        for &v in a {
            inside[v as usize] = true;
        }
        (0..self.vmap.len() as u32).filter(|&v| inside[self.vmap[v as usize] as usize]).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap> {
        check_ambient(&self.target, &other.source, "composition")?;
        let vmap = self.vmap.iter().map(|&v| other.vmap[v as usize]).collect();
        SimplicialMap::new(&self.source, &other.target, vmap)
    }

    /// Bijective on vertices and on simplices.
    pub fn is_isomorphism(&self) -> bool {
        if self.source.vertex_count() != self.target.vertex_count() || self.source.len() != self.target.len() {
            return false;
        }
        let mut hit = vec![false; self.target.len()];
        for &j in &self.smap {
            if std::mem::replace(&mut hit[j as usize], true) {
                return false;
            }
        }
        true
    }
}

/// Ordered product K × L with its projections.
#[derive(Clone, Debug)]
pub struct Product {
    complex: Arc<Complex>,
    left: SimplicialMap,
    right: SimplicialMap,
}

/// Product using each factor's interning order.
pub fn product(k: &Arc<Complex>, l: &Arc<Complex>) -> Product {
    let ok: Vec<u32> = (0..k.vertex_count() as u32).collect();
    let ol: Vec<u32> = (0..l.vertex_count() as u32).collect();
    product_ordered(k, &ok, l, &ol).expect("identity orders are valid")
}

/// Product with explicit vertex orders (each a permutation listing vertices
/// from smallest to largest).
pub fn product_ordered(k: &Arc<Complex>, order_k: &[VertexId], l: &Arc<Complex>, order_l: &[VertexId]) -> Result<Product> {
    let rank_k = ranks(order_k, k.vertex_count())?;
    let rank_l = ranks(order_l, l.vertex_count())?;
    let nl = l.vertex_count() as u32;
    let pair = |a: u32, b: u32| a * nl + b;
    let mut labels = Vec::with_capacity(k.vertex_count() * l.vertex_count());
    for a in 0..k.vertex_count() as u32 {
        for b in 0..nl {
            labels.push(format!("({},{})", k.label(a), l.label(b)));
        }
    }
    let mut maximal = Vec::new();
    for si in k.maximal_simplices() {
        let mut s = k.simplex(si).to_vec();
        s.sort_by_key(|&v| rank_k[v as usize]);
        for ti in l.maximal_simplices() {
            let mut t = l.simplex(ti).to_vec();
            t.sort_by_key(|&v| rank_l[v as usize]);
            staircases(&s, &t, &mut |path| {
                maximal.push(path.iter().map(|&(a, b)| pair(a, b)).collect());
            });
        }
    }
    let complex = Arc::new(Complex::new(labels, &maximal)?);
    let left = SimplicialMap::new(&complex, k, (0..complex.vertex_count() as u32).map(|v| v / nl).collect())?;
    let right = SimplicialMap::new(&complex, l, (0..complex.vertex_count() as u32).map(|v| v % nl).collect())?;
    Ok(Product { complex, left, right })
}

fn ranks(order: &[VertexId], n: usize) -> Result<Vec<usize>> {
    let mut r = vec![usize::MAX; n];
    if order.len() != n {
        return Err(Error::Input("vertex order must list every vertex once".into()));
    }
    for (i, &v) in order.iter().enumerate() {
        if v as usize >= n || r[v as usize] != usize::MAX {
            return Err(Error::Input("vertex order must list every vertex once".into()));
        }
        r[v as usize] = i;
    }
    Ok(r)
}

type Emit<'a> = dyn FnMut(&[(u32, u32)]) + 'a;

fn staircases(s: &[u32], t: &[u32], emit: &mut Emit) {
    fn go(s: &[u32], t: &[u32], i: usize, j: usize, path: &mut Vec<(u32, u32)>, emit: &mut Emit) {
        path.push((s[i], t[j]));
        if i + 1 == s.len() && j + 1 == t.len() {
            emit(path);
        }
        if i + 1 < s.len() {
            go(s, t, i + 1, j, path, emit);
        }
        if j + 1 < t.len() {
            go(s, t, i, j + 1, path, emit);
        }
        path.pop();
    }
    go(s, t, 0, 0, &mut Vec::new(), emit);
}

impl Product {
    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    pub fn left(&self) -> &SimplicialMap {
        &self.left
    }

    pub fn right(&self) -> &SimplicialMap {
        &self.right
    }

    /// A × B for A ≤ K and B ≤ L, as a subcomplex of K × L.
    pub fn sub_product(&self, a: &Subcomplex, b: &Subcomplex) -> Result<Subcomplex> {
        self.left.preimage(a)?.intersection(&self.right.preimage(b)?)
    }

    /// Product vertex of a pair.
    pub fn vertex(&self, a: VertexId, b: VertexId) -> VertexId {
        a * self.right.target().vertex_count() as u32 + b
    }
}

#[cfg(test)]
mod tests {
    use super::super::{boundary_of_simplex, simplex};
    use super::*;

    #[test]
    fn square_and_prism() {
        let d1 = Arc::new(simplex(1));
        let d2 = Arc::new(simplex(2));
        assert_eq!(product(&d1, &d1).complex().f_vector(), vec![4, 5, 2]);
        let prism = product(&d1, &d2);
        assert_eq!(prism.complex().f_vector()[3], 3);
        assert_eq!(prism.complex().dim(), 3);
    }

    #[test]
    fn point_times_l() {
        let p = Arc::new(simplex(0));
        let l = Arc::new(boundary_of_simplex(3));
        let pr = product(&p, &l);
        assert_eq!(pr.complex().f_vector(), l.f_vector());
        assert!(pr.right().is_isomorphism());
    }

    #[test]
    fn invalid_maps_rejected() {
        let d1 = Arc::new(simplex(1));
        let bd = Arc::new(boundary_of_simplex(2));
        let d2 = Arc::new(simplex(2));
        // Δ² → ∂Δ² by identity on vertices is not simplicial
        assert!(SimplicialMap::new(&d2, &bd, vec![0, 1, 2]).is_err());
        let collapse = SimplicialMap::new(&d1, &Arc::new(simplex(0)), vec![0, 0]).unwrap();
        let img = collapse.image(&Subcomplex::full(&d1)).unwrap();
        assert_eq!(img.len(), 1);
    }
}
