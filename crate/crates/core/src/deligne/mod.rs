//! The Deligne fold on (X, 𝒯) and the Δ-Deligne axiom checker.
//!
//! Stages run k = 2..=n across U_k ⊆ U_{k+1}. The fold starts from the
//! constant sheaf on U₂ and at each stage takes Rι_* followed by τ_{≤p(k)},
//! without the classical [n] shift, so ℍ^i(X, P) is compared with IH_{n−i}.

mod generic;

pub use generic::{generic_check, generic_fold, toy_truncation_system, truncate_complex, DeligneSystem, GenericVerdict, ToySystem};

use crate::error::{Error, Result};
use crate::fintop::{FacePoset, FiniteTopology, UpSet};
use crate::linalg::{induced_map, GradedDims, Matrix};
use crate::sheaf::SheafComplex;
use crate::strata::{Perversity, StratifiedComplex};
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// One crossing U_k ↪ U_{k+1}, truncated at `cut` (normally p(k)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub k: usize,
    pub from: UpSet,
    pub to: UpSet,
    pub cut: i32,
    /// Points of U_{k+1} − U_k, i.e. base simplices of X_{n−k} − X_{n−k−1}.
    pub new_points: Vec<usize>,
}

impl Stage {
    /// U_k = U_{k+1}: Rι_* is the identity and only the truncation acts.
    pub fn is_identity(&self) -> bool {
        self.new_points.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct DeligneContext {
    space: Arc<StratifiedComplex>,
    poset: Arc<FacePoset>,
    perversity: Perversity,
    start: UpSet,
    stages: Vec<Stage>,
}

impl DeligneContext {
    pub fn new(space: &Arc<StratifiedComplex>, p: &Perversity) -> Result<DeligneContext> {
        DeligneContext::on_poset(space, &Arc::new(FacePoset::new(space.base())), p)
    }

    /// Shares the point set of an existing topology.
    pub fn from_topology(topo: &FiniteTopology, p: &Perversity) -> Result<DeligneContext> {
        DeligneContext::on_poset(topo.space(), topo.poset(), p)
    }

    pub fn on_poset(space: &Arc<StratifiedComplex>, poset: &Arc<FacePoset>, p: &Perversity) -> Result<DeligneContext> {
        let n = space.n();
        if p.n() != n {
            return Err(Error::Input(format!("perversity is for n = {} but {} has n = {n}", p.n(), space.name())));
        }
        if !Arc::ptr_eq(poset.complex(), space.base()) && **poset.complex() != **space.base() {
            return Err(Error::AmbientMismatch("the poset must be the face poset of the base complex".into()));
        }
        // U_k as the up-set of base simplices outside X_{n−k}
        let open = |k: usize| -> Result<UpSet> {
            if k == n + 1 {
                return Ok(UpSet::all(poset));
            }
            let z = space.base_stratum(n - k);
            UpSet::from_points(poset, (0..poset.len()).filter(|&s| !z.contains(s)))
        };
        let start = open(2)?;
        let mut stages = Vec::new();
        for k in 2..=n {
            let (from, to) = (open(k)?, open(k + 1)?);
            let new_points = to.difference_points(&from);
            stages.push(Stage { k, from, to, cut: p.at(k), new_points });
        }
        Ok(DeligneContext { space: space.clone(), poset: poset.clone(), perversity: p.clone(), start, stages })
    }

    pub fn space(&self) -> &Arc<StratifiedComplex> {
        &self.space
    }

    pub fn poset(&self) -> &Arc<FacePoset> {
        &self.poset
    }

    pub fn perversity(&self) -> &Perversity {
        &self.perversity
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn stage(&self, k: usize) -> Option<&Stage> {
        self.stages.iter().find(|s| s.k == k)
    }

    /// U₂ = X − X_{n−2}.
    pub fn start_open(&self) -> &UpSet {
        &self.start
    }

    /// F₀ = ℚ on U₂.
    pub fn start_sheaf(&self) -> SheafComplex {
        SheafComplex::constant(&self.poset, &self.start, 1)
    }

    /// The same context with the fold truncating stage `k` at `cut`. The
    /// axioms are still checked against the perversity.
    pub fn with_cut(&self, k: usize, cut: i32) -> Result<DeligneContext> {
        let mut c = self.clone();
        let s = c.stages.iter_mut().find(|s| s.k == k).ok_or_else(|| Error::Domain(format!("no stage k = {k}")))?;
        s.cut = cut;
        Ok(c)
    }

    fn check_same_poset(&self, f: &SheafComplex) -> Result<()> {
        if Arc::ptr_eq(f.poset(), &self.poset) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch("sheaf and context live on different posets".into()))
        }
    }
}

/// One stage of the fold: Rι_* then τ_{≤cut}; identity stages only truncate.
pub fn fold_step(stage: &Stage, f: &SheafComplex) -> Result<SheafComplex> {
    let pushed = if stage.is_identity() { f.clone() } else { f.derived_pushforward(&stage.to)? };
    Ok(pushed.truncate(stage.cut))
}

/// P₂ = F₀ followed by the output of every stage. Each stage is checked
/// stalkwise against j_k ι_k ≃ id on U_k.
pub fn fold_stages(ctx: &DeligneContext) -> Result<Vec<SheafComplex>> {
    let mut out = vec![ctx.start_sheaf()];
    for stage in &ctx.stages {
        let prev = out.last().expect("nonempty");
        let pushed = if stage.is_identity() { prev.clone() } else { prev.derived_pushforward(&stage.to)? };
        let bad = stage.from.iter().collect::<Vec<_>>().into_par_iter().find_any(|&x| pushed.stalk_cohomology(x) != prev.stalk_cohomology(x));
        if let Some(x) = bad {
            return Err(Error::Contract(format!(
                "stage k = {}: restricting Rι_* back to U_k changed the stalk at {}",
                stage.k,
                ctx.poset.label(x)
            )));
        }
        out.push(pushed.truncate(stage.cut));
    }
    Ok(out)
}

/// P = τ_{p(n)} Rι_{n*} … τ_{p(2)} Rι_{2*} ℚ_{U₂}.
pub fn fold(ctx: &DeligneContext) -> Result<SheafComplex> {
    Ok(fold_stages(ctx)?.pop().expect("nonempty"))
}

#[derive(Clone, Debug, Serialize)]
pub struct StalkRow {
    pub point: String,
    /// H*(F_σ)
    pub stalk: GradedDims,
    /// H*(Rι_*(F|U_k))_σ
    pub pushed: GradedDims,
}

#[derive(Clone, Debug, Serialize)]
pub struct Ax1Report {
    pub pass: bool,
    pub components: usize,
    pub map: &'static str,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub k: usize,
    pub cut: i32,
    pub identity: bool,
    pub vanishing: bool,
    pub attaching: bool,
    pub map: &'static str,
    pub failures: Vec<String>,
    pub stalks: Vec<StalkRow>,
}

impl StageReport {
    pub fn pass(&self) -> bool {
        self.vanishing && self.attaching
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub space: String,
    pub perversity: String,
    pub ax1: Ax1Report,
    pub stages: Vec<StageReport>,
}

impl AxiomReport {
    pub fn pass(&self) -> bool {
        self.ax1.pass && self.stages.iter().all(|s| s.pass())
    }

    /// k of every stage with a failed verdict.
    pub fn failing_stages(&self) -> Vec<usize> {
        self.stages.iter().filter(|s| !s.pass()).map(|s| s.k).collect()
    }
}

const AX1_MAP: &str = "ℚ_C → F sending 1 to the generator of Z⁰Γ(C, F) on each component C of U₂";
const AX2_MAP: &str = "adjunction unit F_σ → Γ(U_k ∩ ↑σ, G•(F|U_k)) into the Godement resolution";

fn ax1(f: &SheafComplex, ctx: &DeligneContext) -> Ax1Report {
    let comps = ctx.poset.component_sets(&ctx.start);
    // Z⁰Γ(C, F) = Z⁰Γ(C, τ≤0 F), and τ≤0 F is much smaller
    let low = f.truncate(0);
    let failures: Vec<String> = comps
        .par_iter()
        .flat_map_iter(|c| ax1_component(f, &low, ctx, c))
        .collect();
    Ax1Report { pass: failures.is_empty(), components: comps.len(), map: AX1_MAP, failures }
}

fn ax1_component(f: &SheafComplex, low: &SheafComplex, ctx: &DeligneContext, comp: &[usize]) -> Vec<String> {
    let p = &ctx.poset;
    let here = || p.label(comp[0]);
    let Some(i0) = (0 - low.lo() >= 0 && ((0 - low.lo()) as usize) < low.len()).then(|| (0 - low.lo()) as usize) else {
        return vec![format!("component of {}: F has no degree 0", here())];
    };
    let w = UpSet::from_points(p, comp.iter().copied()).expect("a component of an open is open");
    let secs = low.sections(&w);
    let z = secs.complex().diff(0).kernel();
    if z.ncols() != 1 {
        return vec![format!("component of {}: Z⁰Γ(C, F) has dimension {}, not 1", here(), z.ncols())];
    }
    let mut out = Vec::new();
    for &x in comp {
        let h = f.stalk_cohomology(x);
        if h != GradedDims::from_slice(0, &[1]) {
            out.push(format!("{}: stalk cohomology {h} is not ℚ in degree 0", p.label(x)));
            continue;
        }
        // germ of the generator in τ≤0 F_x; its degree-0 part is the cocycle coordinates
        let v = secs.value_at(low, x, i0).mul(&z);
        let basis = low.stalk(x).cohomology_basis(0);
        if basis.classify(&v).is_zero() {
            out.push(format!("{}: the canonical section vanishes in H⁰", p.label(x)));
        }
    }
    out
}

fn ax2(f: &SheafComplex, ctx: &DeligneContext, stage: &Stage) -> StageReport {
    let p = &ctx.poset;
    let cut = ctx.perversity.at(stage.k);
    let rows: Vec<(StalkRow, Vec<String>, bool, bool)> = stage
        .new_points
        .par_iter()
        .map(|&s| {
            let mut fails = Vec::new();
            let stalk = f.stalk_cohomology(s);
            let vanish = stalk.max_degree().is_none_or(|m| m <= cut);
            if !vanish {
                fails.push(format!("{}: H*(F_σ) = {stalk} is nonzero above {cut}", p.label(s)));
            }
            let w = stage.from.intersection(&UpSet::principal(p, s));
            let g = f.restrict(&w).godement();
            let target = g.sections(&w);
            let unit = g.unit_at(f, s);
            let src = f.stalk(s);
            let mut attach = true;
            for m in f.lo().min(target.lo())..=cut {
                let bi = m - f.lo();
                let map = if bi >= 0 && (bi as usize) < unit.len() {
                    unit[bi as usize].clone()
                } else {
                    Matrix::zeros(target.dim(m), src.dim(m))
                };
                let h = induced_map(&src.cohomology_basis(m), &target.cohomology_basis(m), &map);
                if h.nrows() != h.ncols() || h.rank() != h.nrows() {
                    attach = false;
                    fails.push(format!(
                        "{}: unit is not an isomorphism on H^{m} ({} → {})",
                        p.label(s),
                        h.ncols(),
                        h.nrows()
                    ));
                }
            }
            let row = StalkRow { point: p.label(s), stalk, pushed: target.cohomology() };
            (row, fails, vanish, attach)
        })
        .collect();
    let mut rep = StageReport {
        k: stage.k,
        cut,
        identity: stage.is_identity(),
        vanishing: true,
        attaching: true,
        map: AX2_MAP,
        failures: Vec::new(),
        stalks: Vec::new(),
    };
    for (row, fails, v, a) in rows {
        rep.vanishing &= v;
        rep.attaching &= a;
        rep.failures.extend(fails);
        rep.stalks.push(row);
    }
    rep
}

/// AX1 on U₂ and, per stage, vanishing and attaching at the new points.
pub fn check_axioms(f: &SheafComplex, ctx: &DeligneContext) -> Result<AxiomReport> {
    ctx.check_same_poset(f)?;
    if !f.support().is_subset(&UpSet::all(&ctx.poset)) || f.support().len() != ctx.poset.len() {
        return Err(Error::Domain("the sheaf must live on all of X".into()));
    }
    let ax1 = ax1(f, ctx);
    let stages = ctx.stages.iter().map(|s| ax2(f, ctx, s)).collect();
    Ok(AxiomReport { space: ctx.space.name().to_string(), perversity: ctx.perversity.name().to_string(), ax1, stages })
}

/// A wrong cut for stage `k` whose effect stays on the new stratum: the
/// cut c ≠ p(k) nearest to p(k) such that τ_{≤c} and τ_{≤p(k)} differ on
/// some pushed stalk of a new point while leaving every stalk over U_k
/// alone. None for identity stages or when no such cut exists.
pub fn perturbation_cut(ctx: &DeligneContext, k: usize) -> Result<Option<i32>> {
    let stages = fold_stages(ctx)?;
    let i = ctx.stages.iter().position(|s| s.k == k).ok_or_else(|| Error::Domain(format!("no stage k = {k}")))?;
    let stage = &ctx.stages[i];
    if stage.is_identity() {
        return Ok(None);
    }
    let pushed = stages[i].derived_pushforward(&stage.to)?;
    let new: Vec<GradedDims> = stage.new_points.iter().map(|&s| pushed.stalk_cohomology(s)).collect();
    let old: Vec<GradedDims> = stage.from.iter().map(|x| pushed.stalk_cohomology(x)).collect();
    let p = ctx.perversity.at(k);
    let top = new.iter().chain(&old).filter_map(|g| g.max_degree()).max().unwrap_or(p);
    let bottom = new.iter().chain(&old).filter_map(|g| g.min_degree()).min().unwrap_or(p);
    let changes = |g: &GradedDims, c: i32| (c.min(p) + 1..=c.max(p)).any(|m| g.get(m) > 0);
    for dist in 1..=(top - bottom + 1).max(1) {
        for c in [p + dist, p - dist] {
            if new.iter().any(|g| changes(g, c)) && !old.iter().any(|g| changes(g, c)) {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

/// The sheaf instance of the generic layer: categories are sheaves on U_k,
/// ι = Rι_* (identity on identity stages), j = restriction, τ = truncation,
/// and ≃ is equality of stalk cohomology tables.
pub struct SheafSystem<'a> {
    pub ctx: &'a DeligneContext,
}

impl DeligneSystem for SheafSystem<'_> {
    type Obj = SheafComplex;

    fn stage_count(&self) -> usize {
        self.ctx.stages.len()
    }

    fn cut(&self, s: usize) -> i32 {
        self.ctx.stages[s].cut
    }

    fn push(&self, s: usize, a: &SheafComplex) -> Result<SheafComplex> {
        let st = &self.ctx.stages[s];
        if st.is_identity() {
            Ok(a.clone())
        } else {
            a.derived_pushforward(&st.to)
        }
    }

    fn pull(&self, s: usize, a: &SheafComplex) -> SheafComplex {
        a.restrict(&self.ctx.stages[s].from)
    }

    fn truncate(&self, cut: i32, a: &SheafComplex) -> SheafComplex {
        a.truncate(cut)
    }

    fn equivalent(&self, a: &SheafComplex, b: &SheafComplex) -> bool {
        a.support() == b.support() && a.stalk_table() == b.stalk_table()
    }
}

#[cfg(test)]
mod tests;
