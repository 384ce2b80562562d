//! One function per subcommand; each returns a report body.

use crate::report::{Body, Failure, Outcome};
use crate::{BasisArgs, BuildArgs, CheckArgs, ComplexInfoArgs, ComplexOpArgs, HyperArgs, IhArgs, Level, ModeArg, Op, PropsArgs, Sizes, SpaceArgs, VerifyArgs};
use serde::Serialize;
use serde_json::json;
use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;
use strathom::deligne::{check_axioms, fold, fold_stages, DeligneContext};
use strathom::fintop::{FacePoset, FiniteTopology, UpSet};
use strathom::ih::{h_betti, ih_betti, ChainMode, IcData};
use strathom::io::{parse_complex, ComplexJson};
use strathom::laws::{run_laws, LawConfig};
use strathom::linalg::GradedDims;
use strathom::scx::{cone, product, suspension, Complex, Subcomplex, VertexId};
use strathom::sheaf::{SheafComplex, SheafJson};
use strathom::strata::{catalog, Perversity, StrataJson, StratifiedComplex};
use strathom::subdivision::subdivide;

pub struct Ctx {
    pub seed: u64,
    pub degrees: Option<(i32, i32)>,
}

impl Ctx {
    fn crop(&self, g: &GradedDims) -> GradedDims {
        let Some((lo, hi)) = self.degrees else {
            return g.clone();
        };
        let mut out = GradedDims::new();
        for (d, n) in g.iter().filter(|&(d, _)| lo <= d && d <= hi) {
            out.set(d, n);
        }
        out
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn read(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn complex_file(path: &Path) -> Outcome<Complex> {
    parse_complex(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn json_file<T: serde::de::DeserializeOwned>(path: &Path) -> Outcome<T> {
    serde_json::from_str(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

pub fn load_space(a: &SpaceArgs) -> Outcome<StratifiedComplex> {
    match (&a.space, &a.complex, &a.strata) {
        (Some(name), None, None) => Ok(catalog::by_name(name)?),
        (None, Some(c), Some(s)) => {
            let k = complex_file(c)?;
            let strata: StrataJson = json_file(s)?;
            let name = c.file_stem().map(|x| x.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into());
            strata.build(&name, k).map_err(|e| input(format!("{}: {e}", s.display())))
        }
        _ => Err(input("give --space NAME, or --complex FILE with --strata FILE")),
    }
}

fn perversity(name: &str, s: &StratifiedComplex) -> Outcome<Perversity> {
    Ok(Perversity::by_name(name, s.n())?)
}

fn chain_mode(s: &StratifiedComplex) -> ChainMode {
    if s.has_boundary() {
        ChainMode::Relative
    } else {
        ChainMode::Absolute
    }
}

fn mode_name(m: ChainMode) -> &'static str {
    match m {
        ChainMode::Absolute => "absolute",
        ChainMode::Relative => "relative to the boundary",
    }
}

/// IH_{n−i} placed in degree i.
fn flipped(ih: &GradedDims, n: usize) -> GradedDims {
    let mut out = GradedDims::new();
    for (i, d) in ih.iter() {
        out.set(n as i32 - i, d);
    }
    out
}

fn simplex_labels(k: &Complex, i: usize) -> Vec<String> {
    k.simplex(i).iter().map(|&v| k.label(v)).collect()
}

fn maximal_in(z: &Subcomplex) -> Vec<Vec<String>> {
    let k = z.ambient();
    let mut out: Vec<Vec<String>> = z
        .indices()
        .filter(|&i| !k.cofaces(i).iter().any(|&c| z.contains(c as usize)))
        .map(|i| {
            let mut s = simplex_labels(k, i);
            s.sort();
            s
        })
        .collect();
    out.sort();
    out
}

fn vertex_list(k: &Complex, text: &str) -> Outcome<Vec<VertexId>> {
    let index: HashMap<String, VertexId> = k.labels().into_iter().enumerate().map(|(i, l)| (l, i as VertexId)).collect();
    let mut vs = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| index.get(t).copied().ok_or_else(|| input(format!("unknown vertex {t:?}"))))
        .collect::<Outcome<Vec<_>>>()?;
    vs.sort_unstable();
    vs.dedup();
    Ok(vs)
}

/// `a,b;b,c` → closure of {ab, bc}.
fn subcomplex_arg(k: &Arc<Complex>, text: Option<&str>, flag: &str) -> Outcome<Subcomplex> {
    let text = text.ok_or_else(|| input(format!("this operation needs --{flag}")))?;
    let simplices = text
        .split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| vertex_list(k, t))
        .collect::<Outcome<Vec<_>>>()?;
    Ok(Subcomplex::closure(k, &simplices)?)
}

#[derive(Serialize)]
struct ComplexSummary {
    vertices: usize,
    simplices: usize,
    dim: i32,
    f_vector: Vec<usize>,
    euler_characteristic: i64,
    betti: Vec<usize>,
    maximal_simplices: usize,
}

fn summary(k: &Complex) -> ComplexSummary {
    ComplexSummary {
        vertices: k.vertex_count(),
        simplices: k.len(),
        dim: k.dim(),
        f_vector: k.f_vector(),
        euler_characteristic: k.euler_characteristic(),
        betti: k.betti(),
        maximal_simplices: k.maximal_simplices().len(),
    }
}

pub fn complex_info(_: &Ctx, a: &ComplexInfoArgs) -> Outcome<Body> {
    let k = match (&a.file, &a.space) {
        (Some(f), None) => Arc::new(complex_file(f)?),
        (None, Some(name)) => {
            let s = catalog::by_name(name)?;
            match a.level {
                Level::Base => s.base().clone(),
                Level::Sd => s.sd().first().complex().clone(),
                Level::Doubled => s.doubled().clone(),
            }
        }
        _ => return Err(input("give --file FILE or --space NAME")),
    };
    Ok(Body::pass(summary(&k)))
}

pub fn complex_op(_: &Ctx, a: &ComplexOpArgs) -> Outcome<Body> {
    let k = Arc::new(complex_file(&a.file)?);
    let built = |c: &Complex| Body::pass(json!({ "complex": ComplexJson::from_complex(c), "summary": summary(c) }));
    let sub = |z: &Subcomplex| Body::pass(json!({ "maximal": maximal_in(z), "f_vector": z.f_vector(), "simplices": z.len() }));
    let y = || subcomplex_arg(&k, a.y.as_deref(), "y");
    let z = || subcomplex_arg(&k, a.z.as_deref(), "z");
    let vertices = || vertex_list(&k, a.vertices.as_deref().ok_or_else(|| input("this operation needs --vertices"))?);
    let simplex = || {
        let vs = vertices()?;
        k.index_of(&vs).ok_or_else(|| input(format!("{:?} is not a simplex", a.vertices.as_deref().unwrap_or(""))))
    };
    Ok(match a.op {
        Op::Sd => built(subdivide(&k).complex()),
        Op::Cone => built(&cone(&k, &a.apex)),
        Op::Suspension => built(&suspension(&k, "north", "south")),
        Op::Product => {
            let other = a.other.as_deref().ok_or_else(|| input("product needs --other FILE"))?;
            let l = Arc::new(complex_file(other)?);
            built(product(&k, &l).complex())
        }
        Op::Union => sub(&y()?.union(&z()?)?),
        Op::Intersection => sub(&y()?.intersection(&z()?)?),
        Op::Minus => sub(&y()?.delta_subtract(&z()?)?),
        Op::Hull => sub(&Subcomplex::hull(&k, &vertices()?)),
        Op::Star => sub(&Subcomplex::star(&k, simplex()?)),
        Op::Link => sub(&Subcomplex::link(&k, simplex()?)),
    })
}

pub fn strata_check(_: &Ctx, a: &SpaceArgs) -> Outcome<Body> {
    let s = load_space(a)?;
    let base = s.base().clone();
    let n = s.n();
    let strata: Vec<_> = (0..n)
        .map(|j| json!({ "j": j, "base_simplices": s.base_stratum(j).len(), "doubled_simplices": s.stratum(j).len() }))
        .collect();
    let chain: Vec<_> = s.open_chain().into_iter().map(|(k, u)| json!({ "k": k, "simplices": u.len() })).collect();
    let mut euler_failures = Vec::new();
    let mut singular = Vec::new();
    for sigma in 0..base.len() {
        for (what, z) in [("lst", s.lst(sigma)?), ("fst", s.fst(sigma)?)] {
            let chi = z.to_complex().0.euler_characteristic();
            if chi != 1 {
                euler_failures.push(format!("χ({what}{}) = {chi}", base.simplex_label(sigma)));
            }
        }
        let depth = s.base_depth(sigma);
        if depth < n {
            let local = s.local_structure(sigma)?;
            singular.push(json!({
                "simplex": base.simplex_label(sigma),
                "stratum": depth,
                "link_betti": local.link_complex().betti(),
            }));
        }
    }
    let ok = euler_failures.is_empty();
    Ok(Body::judged(
        ok,
        json!({
            "name": s.name(),
            "n": n,
            "has_boundary": s.has_boundary(),
            "base_f_vector": base.f_vector(),
            "doubled_f_vector": s.doubled().f_vector(),
            "strata": strata,
            "open_chain": chain,
            "euler_checked": 2 * base.len(),
            "euler_failures": euler_failures,
            "singular_simplices": singular,
        }),
    ))
}

pub fn topology_basis(ctx: &Ctx, a: &BasisArgs) -> Outcome<Body> {
    let s = Arc::new(load_space(&a.space)?);
    let topo = FiniteTopology::generate(&s)?;
    let base = s.base();
    let p = topo.poset();
    let rep = topo.report();
    if a.dot {
        let head = format!("// strathom {} seed {} space {}\n", strathom::VERSION, ctx.seed, s.name());
        let mut body = Body::pass(json!({}));
        body.raw_text = Some(head + &topo.to_dot());
        return Ok(body);
    }
    let basis: Vec<_> = rep
        .basis_sizes
        .iter()
        .enumerate()
        .map(|(i, &size)| json!({ "simplex": base.simplex_label(i), "size": size }))
        .collect();
    let hasse: Vec<_> = rep.hasse.iter().map(|&(a, b)| (p.label(b), p.label(a))).collect();
    let chain: Vec<_> = topo
        .open_chain()
        .into_iter()
        .map(|(k, u)| {
            let gens: Vec<String> = u.witness().minimal(p).into_iter().map(|x| p.label(x)).collect();
            json!({ "k": k, "simplices": u.set().len(), "witness": gens })
        })
        .collect();
    Ok(Body::pass(json!({
        "space": s.name(),
        "points": rep.points,
        "basis_sets": basis.len(),
        "intersection_pairs_checked": rep.pairs_checked,
        "basis": basis,
        "inclusions": hasse,
        "open_chain": chain,
    })))
}

pub fn ih_compute(ctx: &Ctx, a: &IhArgs) -> Outcome<Body> {
    let s = load_space(&a.space)?;
    let p = perversity(&a.perversity, &s)?;
    let mode = match a.mode {
        ModeArg::Auto => chain_mode(&s),
        ModeArg::Absolute => ChainMode::Absolute,
        ModeArg::Relative => ChainMode::Relative,
    };
    let ic = IcData::new(&s, &p, mode)?;
    let ranks: Vec<usize> = (0..=ic.top()).map(|d| ic.chain_rank(d)).collect();
    Ok(Body::pass(json!({
        "space": s.name(),
        "perversity": p.name(),
        "values": p.values(),
        "mode": mode_name(mode),
        "ih": ctx.crop(&ic.betti()),
        "allowable_chains": ranks,
    })))
}

fn context(s: StratifiedComplex, p: &Perversity) -> Outcome<DeligneContext> {
    Ok(DeligneContext::new(&Arc::new(s), p)?)
}

pub fn deligne_build(ctx: &Ctx, a: &BuildArgs) -> Outcome<Body> {
    let s = load_space(&a.space)?;
    let p = perversity(&a.perversity, &s)?;
    let dc = context(s, &p)?;
    let steps = fold_stages(&dc)?;
    let last = steps.last().expect("fold output");
    let stages: Vec<_> = dc
        .stages()
        .iter()
        .zip(&steps[1..])
        .map(|(st, f)| json!({ "k": st.k, "cut": st.cut, "identity": st.is_identity(), "new_points": st.new_points.len(), "total_rank": f.total_rank() }))
        .collect();
    let poset = dc.poset();
    let stalks: Option<BTreeMap<String, GradedDims>> =
        a.dump_stalks.then(|| (0..poset.len()).map(|x| (poset.label(x), ctx.crop(&last.stalk_cohomology(x)))).collect());
    if let Some(path) = &a.out {
        let text = serde_json::to_string(&SheafJson::from_sheaf(last)).expect("serializable");
        std::fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))?;
    }
    Ok(Body::pass(json!({
        "space": dc.space().name(),
        "perversity": p.name(),
        "values": p.values(),
        "start_points": dc.start_open().len(),
        "points": poset.len(),
        "stages": stages,
        "hypercohomology": ctx.crop(&last.hypercohomology()),
        "stalks": stalks,
        "written": a.out,
    })))
}

fn sheaf_file(path: &Path, poset: &Arc<FacePoset>) -> Outcome<SheafComplex> {
    let j: SheafJson = json_file(path)?;
    j.to_sheaf(poset).map_err(|e| input(format!("{}: {e}", path.display())))
}

pub fn deligne_check(_: &Ctx, a: &CheckArgs) -> Outcome<Body> {
    let s = load_space(&a.space)?;
    let p = perversity(&a.perversity, &s)?;
    let dc = context(s, &p)?;
    let f = sheaf_file(&a.sheaf, dc.poset())?;
    let rep = check_axioms(&f, &dc)?;
    let ok = rep.pass();
    Ok(Body::judged(ok, json!({ "failing_stages": rep.failing_stages(), "axioms": rep })))
}

pub fn hyper(ctx: &Ctx, a: &HyperArgs) -> Outcome<Body> {
    let s = load_space(&a.space)?;
    if let Some(path) = &a.sheaf {
        let poset = Arc::new(FacePoset::new(s.base()));
        let f = sheaf_file(path, &poset)?;
        return Ok(Body::pass(json!({ "space": s.name(), "sheaf": path, "hypercohomology": ctx.crop(&f.hypercohomology()) })));
    }
    if let Some(name) = &a.perversity {
        let p = perversity(name, &s)?;
        let name = s.name().to_string();
        let h = fold(&context(s, &p)?)?.hypercohomology();
        return Ok(Body::pass(json!({ "space": name, "sheaf": format!("fold for {}", p.name()), "hypercohomology": ctx.crop(&h) })));
    }
    // constant sheaf: compare with ordinary homology from the chain pipeline
    let poset = Arc::new(FacePoset::new(s.base()));
    let h = SheafComplex::constant(&poset, &UpSet::all(&poset), 1).hypercohomology();
    let homology = h_betti(&s, ChainMode::Absolute);
    Ok(Body::judged(
        h == homology,
        json!({ "space": s.name(), "sheaf": "constant Q", "hypercohomology": ctx.crop(&h), "homology": ctx.crop(&homology) }),
    ))
}

pub fn verify_main(ctx: &Ctx, a: &VerifyArgs) -> Outcome<Body> {
    let s = Arc::new(load_space(&a.space)?);
    let n = s.n();
    let ps = if a.perversity == "all" { Perversity::presets(n) } else { vec![perversity(&a.perversity, &s)?] };
    let mut rows = Vec::new();
    let mut ok = true;
    for p in &ps {
        let h = fold(&DeligneContext::new(&s, p)?)?.hypercohomology();
        let mode = chain_mode(&s);
        let ih = ih_betti(&s, p, mode)?;
        let equal = h == flipped(&ih, n);
        ok &= equal;
        rows.push(json!({
            "perversity": p.name(),
            "values": p.values(),
            "hypercohomology": ctx.crop(&h),
            "ih_at_n_minus_i": ctx.crop(&flipped(&ih, n)),
            "ih": ih,
            "mode": mode_name(mode),
            "equal": equal,
        }));
    }
    Ok(Body::judged(ok, json!({ "space": s.name(), "n": n, "doubled_simplices": s.doubled().len(), "comparisons": rows })))
}

pub fn props_selftest(ctx: &Ctx, a: &PropsArgs) -> Outcome<Body> {
    let cfg = LawConfig {
        seed: ctx.seed,
        random_instances: a.instances.unwrap_or(match a.sizes {
            Sizes::Tiny => 300,
            Sizes::Full => 10_000,
        }),
        exhaustive: !a.no_exhaustive,
    };
    let rep = run_laws(&cfg)?;
    for l in rep.failing() {
        eprintln!(
            "law failed {} of {} times: {}\n  smallest counterexample: {}",
            l.failures,
            l.checked,
            l.law,
            l.witness.as_deref().unwrap_or("none recorded")
        );
    }
    for c in rep.counterexamples.iter().filter(|c| !c.reproduced || c.repaired_after_sd == Some(false)) {
        eprintln!("counterexample {} did not behave as expected on {}", c.name, c.instance);
    }
    let failing: Vec<&str> = rep.failing().iter().map(|l| l.law.as_str()).collect();
    Ok(Body::judged(
        rep.pass(),
        json!({ "total_checks": rep.total_checks(), "laws_checked": rep.laws.len(), "failing": failing, "report": rep }),
    ))
}
