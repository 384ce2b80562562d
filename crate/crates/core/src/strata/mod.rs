//! Stratified pseudomanifolds on a doubly subdivided triangulation.

pub mod catalog;
mod local;
mod perversity;

pub use local::LocalStructure;
pub use perversity::Perversity;

use crate::error::{Error, Result};
use crate::scx::{Complex, Subcomplex};
use crate::subdivision::DoubleSd;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

/// Base complex X′ with a filtration X₀ ≤ … ≤ X_n = X′, carried to Sd²(X′).
#[derive(Clone, Debug)]
pub struct StratifiedComplex {
    name: String,
    n: usize,
    sd: DoubleSd,
    base_strata: Vec<Subcomplex>,
    doubled_strata: Vec<Subcomplex>,
    base_boundary: Subcomplex,
}

impl StratifiedComplex {
    /// `strata` lists X₀..X_{n−1} (or X₀..X_n) as subcomplexes of `base`.
    pub fn new(name: &str, base: Complex, n: usize, strata: Vec<Subcomplex>) -> Result<StratifiedComplex> {
        let base = Arc::new(base);
        let mut strata: Vec<Subcomplex> =
            strata.into_iter().map(|s| Subcomplex::from_bits(&base, s.bits().clone())).collect::<Result<_>>()?;
        if strata.len() == n {
            strata.push(Subcomplex::full(&base));
        }
        validate(&base, n, &strata)?;
        let base_boundary = boundary_of(&base, n);
        if !base_boundary.intersection(&strata[n - 2])?.is_empty() {
            return Err(Error::Input("boundary must stay away from the singular set".into()));
        }
        let sd = DoubleSd::new(&base);
        let doubled_strata = strata.iter().map(|s| sd.subdivide_sub(s)).collect::<Result<_>>()?;
        Ok(StratifiedComplex { name: name.to_string(), n, sd, base_strata: strata, doubled_strata, base_boundary })
    }

    /// Strata given by vertex labels; each X_k is the hull of its vertices.
    pub fn from_vertex_strata(name: &str, base: Complex, n: usize, strata: &[Vec<String>]) -> Result<StratifiedComplex> {
        let base_arc = Arc::new(base);
        let pos: HashMap<String, u32> = base_arc.labels().into_iter().enumerate().map(|(i, l)| (l, i as u32)).collect();
        let mut subs = Vec::new();
        for (k, vs) in strata.iter().enumerate() {
            let mut ids = Vec::new();
            for v in vs {
                ids.push(*pos.get(v).ok_or_else(|| Error::Input(format!("stratum {k}: unknown vertex {v:?}")))?);
            }
            subs.push(Subcomplex::hull(&base_arc, &ids));
        }
        let base = Arc::try_unwrap(base_arc).unwrap_or_else(|a| (*a).clone());
        StratifiedComplex::new(name, base, n, subs)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &Arc<Complex> {
        self.sd.base()
    }

    pub fn doubled(&self) -> &Arc<Complex> {
        self.sd.complex()
    }

    pub fn sd(&self) -> &DoubleSd {
        &self.sd
    }

    /// X_k in the base, for 0 ≤ k ≤ n.
    pub fn base_stratum(&self, k: usize) -> &Subcomplex {
        &self.base_strata[k]
    }

    /// X_k in Sd²(X′).
    pub fn stratum(&self, k: usize) -> &Subcomplex {
        &self.doubled_strata[k]
    }

    pub fn doubled_strata(&self) -> &[Subcomplex] {
        &self.doubled_strata
    }

    /// Closure of the codimension-one simplices with a single top coface.
    pub fn base_boundary(&self) -> &Subcomplex {
        &self.base_boundary
    }

    pub fn has_boundary(&self) -> bool {
        !self.base_boundary.is_empty()
    }

    pub fn doubled_boundary(&self) -> Subcomplex {
        self.sd.subdivide_sub(&self.base_boundary).expect("same base")
    }

    /// Stratum index j with σ ∈ X_j − X_{j−1}; the barycenter of σ lies in that stratum.
    pub fn base_depth(&self, sigma: usize) -> usize {
        (0..=self.n).find(|&j| self.base_strata[j].contains(sigma)).expect("X_n is everything")
    }

    fn check_base(&self, sigma: usize) -> Result<()> {
        if sigma >= self.base().len() {
            Err(Error::Domain(format!("base simplex {sigma} does not exist")))
        } else {
            Ok(())
        }
    }

    /// Star of b_σ in Sd²(X′).
    pub fn lst(&self, sigma: usize) -> Result<Subcomplex> {
        self.check_base(sigma)?;
        Ok(Subcomplex::star(self.doubled(), self.sd.double_barycenter(sigma) as usize))
    }

    /// Union of lst(τ) over τ ≥ σ.
    pub fn fst(&self, sigma: usize) -> Result<Subcomplex> {
        let mut parts = vec![self.lst(sigma)?];
        for t in self.base().all_cofaces(sigma) {
            parts.push(self.lst(t as usize)?);
        }
        Subcomplex::union_all(self.doubled(), &parts)
    }

    /// U_k = X −Δ X_{n−k} for k = 2..=n, then U_{n+1} = X.
    pub fn open_chain(&self) -> Vec<(usize, Subcomplex)> {
        let full = Subcomplex::full(self.doubled());
        let mut out = Vec::new();
        for k in 2..=self.n {
            out.push((k, full.delta_subtract(self.stratum(self.n - k)).expect("same ambient")));
        }
        out.push((self.n + 1, full));
        out
    }

    /// The same stratified space on the base Sd(X′), so its doubled complex is Sd³(X′).
    pub fn refined(&self) -> Result<StratifiedComplex> {
        let first = self.sd.first();
        let strata = self.base_strata.iter().map(|z| first.subdivide_sub(z)).collect::<Result<Vec<_>>>()?;
        let base = (**first.complex()).clone();
        StratifiedComplex::new(&format!("{}-refined", self.name), base, self.n, strata)
    }

    pub fn local_structure(&self, sigma: usize) -> Result<LocalStructure> {
        self.check_base(sigma)?;
        LocalStructure::build(self, sigma)
    }
}

fn validate(base: &Arc<Complex>, n: usize, strata: &[Subcomplex]) -> Result<()> {
    if n < 2 {
        return Err(Error::Input(format!("formal dimension must be at least 2, got {n}")));
    }
    if strata.len() != n + 1 {
        return Err(Error::Input(format!("need strata X_0..X_{n}, got {}", strata.len())));
    }
    if base.dim() != n as i32 {
        return Err(Error::Input(format!("complex has dimension {} but n = {n}", base.dim())));
    }
    if strata[n] != Subcomplex::full(base) {
        return Err(Error::Input("X_n must be the whole complex".into()));
    }
    for k in 0..n {
        if !strata[k].is_subset(&strata[k + 1])? {
            return Err(Error::Input(format!("filtration not ascending at X_{k} ≤ X_{}", k + 1)));
        }
        if strata[k].dim() > k as i32 {
            return Err(Error::Input(format!("X_{k} has dimension {}", strata[k].dim())));
        }
    }
    if strata[n - 1] != strata[n - 2] {
        return Err(Error::Input("pseudomanifold condition X_{n-1} = X_{n-2} fails".into()));
    }
    for i in base.maximal_simplices() {
        if base.simplex_dim(i) != n {
            return Err(Error::Input(format!("{} is maximal but not {n}-dimensional", base.simplex_label(i))));
        }
    }
    for i in base.of_dim(n - 1) {
        let c = base.cofaces(i).len();
        if c == 0 || c > 2 {
            return Err(Error::Input(format!("{} has {c} top cofaces", base.simplex_label(i))));
        }
    }
    Ok(())
}

fn boundary_of(base: &Arc<Complex>, n: usize) -> Subcomplex {
    let b: Vec<usize> = base.of_dim(n - 1).filter(|&i| base.cofaces(i).len() == 1).collect();
    Subcomplex::closure_of_indices(base, b).expect("in range")
}

/// On-disk stratification: strata are vertex lists, X_k = hull.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrataJson {
    pub filtration: Vec<Vec<String>>,
    pub n: usize,
}

impl StrataJson {
    pub fn build(&self, name: &str, base: Complex) -> Result<StratifiedComplex> {
        StratifiedComplex::from_vertex_strata(name, base, self.n, &self.filtration)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scx::{cone, simplex};

    fn cone_on_triangle() -> StratifiedComplex {
        let k = cone(&crate::scx::boundary_of_simplex(2), "c");
        let base = Arc::new(k.clone());
        let apex = Subcomplex::hull(&base, &[3]);
        StratifiedComplex::new("c", k, 2, vec![apex.clone(), apex]).unwrap()
    }

    #[test]
    fn validation_failures() {
        let k = simplex(2);
        let base = Arc::new(k.clone());
        let e = Subcomplex::empty(&base);
        let v = Subcomplex::hull(&base, &[0]);
        assert!(StratifiedComplex::new("ok", k.clone(), 2, vec![e.clone(), e.clone()]).is_ok());
        // X_1 ≠ X_0
        assert!(StratifiedComplex::new("bad", k.clone(), 2, vec![e.clone(), v.clone()]).is_err());
        // wrong dimension
        assert!(StratifiedComplex::new("bad", k.clone(), 3, vec![e.clone(), e.clone(), e.clone()]).is_err());
        // descending
        assert!(StratifiedComplex::new("bad", k.clone(), 2, vec![v.clone(), e.clone()]).is_err());
        // boundary touching the singular set
        assert!(StratifiedComplex::new("bad", k, 2, vec![v.clone(), v]).is_err());
    }

    #[test]
    fn lst_and_fst_basics() {
        let s = cone_on_triangle();
        let base = s.base().clone();
        for t in base.maximal_simplices() {
            assert_eq!(s.fst(t).unwrap(), s.lst(t).unwrap());
        }
        for sig in 0..base.len() {
            let f = s.fst(sig).unwrap();
            for t in base.all_cofaces(sig) {
                assert!(s.lst(t as usize).unwrap().is_subset(&f).unwrap());
            }
            assert!(f.is_fat());
            assert!(s.lst(sig).unwrap().is_fat());
        }
        assert!(s.lst(base.len()).is_err());
    }

    #[test]
    fn open_chain_ends() {
        let s = cone_on_triangle();
        let chain = s.open_chain();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain[1].1, Subcomplex::full(s.doubled()));
        // cone minus apex retracts onto the triangle boundary
        let (u, _) = chain[0].1.to_complex();
        assert_eq!(u.betti(), vec![1, 1, 0]);
    }
}
