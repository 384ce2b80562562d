use super::StratifiedComplex;
use crate::error::{Error, Result};
use crate::scx::{product, Complex, SimplicialMap, Subcomplex};
use std::collections::HashMap;
use std::sync::Arc;

/// Chain combinatorics around the barycenter of a base simplex σ.
///
/// Vertices of Sd²(X′) are chains of base simplices. `s` holds the chains
/// through σ, `s_minus` those ending at σ, `s_plus` those starting at σ.
#[derive(Clone, Debug)]
pub struct LocalStructure {
    pub sigma: usize,
    pub s: Vec<u32>,
    pub s_minus: Vec<u32>,
    pub s_plus: Vec<u32>,
    /// 𝒢(S₊ − {{σ}}).
    pub link: Subcomplex,
}

fn fail(sigma: usize, what: &str) -> Error {
    Error::Contract(format!("local structure at base simplex {sigma}: {what}"))
}

fn standalone(sub: &Subcomplex) -> (Arc<Complex>, HashMap<u32, u32>) {
    let verts = sub.vertices();
    let pos = verts.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    (Arc::new(sub.to_complex().0), pos)
}

impl LocalStructure {
    pub(super) fn build(x: &StratifiedComplex, sigma: usize) -> Result<LocalStructure> {
        let sd1 = x.sd().first().complex().clone();
        let dbl = x.doubled().clone();
        let sg = sigma as u32;
        let mut s = Vec::new();
        let mut s_minus = Vec::new();
        let mut s_plus = Vec::new();
        for c in 0..sd1.len() {
            let chain = sd1.simplex(c);
            if chain.binary_search(&sg).is_ok() {
                s.push(c as u32);
                if *chain.last().unwrap() == sg {
                    s_minus.push(c as u32);
                }
                if chain[0] == sg {
                    s_plus.push(c as u32);
                }
            }
        }
        let apex = sg; // the singleton chain {σ} has index σ in Sd
        let link_verts: Vec<u32> = s_plus.iter().copied().filter(|&c| c != apex).collect();
        let link = Subcomplex::hull(&dbl, &link_verts);
        let ls = LocalStructure { sigma, s, s_minus, s_plus, link };
        ls.verify(x)?;
        Ok(ls)
    }

    fn verify(&self, x: &StratifiedComplex) -> Result<()> {
        let sigma = self.sigma;
        let dbl = x.doubled();
        let sd1 = x.sd().first().complex();
        let g_s = Subcomplex::hull(dbl, &self.s);
        if g_s != x.lst(sigma)? {
            return Err(fail(sigma, "lst(σ) ≠ 𝒢(S(σ))"));
        }
        let g_minus = Subcomplex::hull(dbl, &self.s_minus);
        let im = x.sd().subdivide_sub(&Subcomplex::image_of_simplex(x.base(), sigma))?;
        if x.lst(sigma)?.intersection(&im)? != g_minus {
            return Err(fail(sigma, "lst(σ) ∩ σ ≠ 𝒢(S₋)"));
        }

        // f : 𝒢(S₋) × 𝒢(S₊) → 𝒢(S), (A, B) ↦ A ∪ B
        let g_plus = Subcomplex::hull(dbl, &self.s_plus);
        let (cm, _) = standalone(&g_minus);
        let (cp, _) = standalone(&g_plus);
        let (cs, pos_s) = standalone(&g_s);
        let prod = product(&cm, &cp);
        let np = self.s_plus.len() as u32;
        let mut vmap = Vec::with_capacity(prod.complex().vertex_count());
        for a in &self.s_minus {
            for b in &self.s_plus {
                let mut u = sd1.simplex(*a as usize).to_vec();
                u.extend_from_slice(&sd1.simplex(*b as usize)[1..]);
                let c = sd1.index_of(&u).ok_or_else(|| fail(sigma, "A ∪ B is not a chain"))? as u32;
                vmap.push(*pos_s.get(&c).ok_or_else(|| fail(sigma, "A ∪ B misses S(σ)"))?);
            }
        }
        let f = SimplicialMap::new(prod.complex(), &cs, vmap.clone()).map_err(|e| fail(sigma, &e.to_string()))?;
        if !f.is_isomorphism() {
            return Err(fail(sigma, "(A, B) ↦ A ∪ B is not an isomorphism"));
        }
        // g splits a chain at σ; check it inverts f on vertices
        let pos_minus: HashMap<u32, u32> = self.s_minus.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        let pos_plus: HashMap<u32, u32> = self.s_plus.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        for (i, &c) in self.s.iter().enumerate() {
            let chain = sd1.simplex(c as usize);
            let cut = chain.iter().position(|&t| t as usize == sigma).unwrap();
            let a = sd1.index_of(&chain[..=cut]).unwrap() as u32;
            let b = sd1.index_of(&chain[cut..]).unwrap() as u32;
            let pv = pos_minus[&a] * np + pos_plus[&b];
            if vmap[pv as usize] != i as u32 {
                return Err(fail(sigma, "splitting at σ does not invert A ∪ B"));
            }
        }

        // 𝒢(S₊) is the cone on L with apex {σ}
        let apex = sigma as u32;
        if g_plus.len() != 2 * self.link.len() + 1 {
            return Err(fail(sigma, "𝒢(S₊) is not a cone on L"));
        }
        for t in self.link.indices() {
            let mut v = dbl.simplex(t).to_vec();
            v.push(apex);
            match dbl.find(&v) {
                Some(j) if g_plus.contains(j) => {}
                _ => return Err(fail(sigma, "cone simplex missing from 𝒢(S₊)")),
            }
        }

        // L^σ ≅ L^A by prefix extension
        let (cl, _) = standalone(&self.link);
        let link_verts = self.link.vertices();
        for &a in &self.s_minus {
            let pre = sd1.simplex(a as usize).to_vec();
            let ext: Vec<u32> = (0..sd1.len() as u32)
                .filter(|&c| {
                    let ch = sd1.simplex(c as usize);
                    ch.len() > pre.len() && ch[..pre.len()] == pre[..]
                })
                .collect();
            let la = Subcomplex::hull(dbl, &ext);
            let (ca, pos_a) = standalone(&la);
            let mut vm = Vec::with_capacity(link_verts.len());
            for &b in &link_verts {
                let mut u = pre.clone();
                u.extend_from_slice(&sd1.simplex(b as usize)[1..]);
                let c = sd1.index_of(&u).ok_or_else(|| fail(sigma, "prefix extension leaves Sd"))? as u32;
                vm.push(*pos_a.get(&c).ok_or_else(|| fail(sigma, "prefix extension misses L^A"))?);
            }
            let m = SimplicialMap::new(&cl, &ca, vm).map_err(|e| fail(sigma, &e.to_string()))?;
            if !m.is_isomorphism() {
                return Err(fail(sigma, "L^σ → L^A is not an isomorphism"));
            }
        }
        Ok(())
    }

    /// L^σ as a standalone complex.
    pub fn link_complex(&self) -> Complex {
        self.link.to_complex().0
    }
}
