use super::*;
use crate::linalg::Matrix;
use crate::strata::catalog;

fn ctx(name: &str, p: &str) -> DeligneContext {
    let s = Arc::new(catalog::by_name(name).unwrap());
    let p = Perversity::by_name(p, s.n()).unwrap();
    DeligneContext::new(&s, &p).unwrap()
}

fn apex(c: &DeligneContext, v: u32) -> usize {
    c.space().base().find(&[v]).unwrap()
}

fn link_cohomology(c: &DeligneContext, v: u32) -> GradedDims {
    let l = c.space().local_structure(apex(c, v)).unwrap().link_complex();
    GradedDims::from_slice(0, &l.betti())
}

fn truncated(g: &GradedDims, p: i32) -> GradedDims {
    let mut out = GradedDims::new();
    for (d, n) in g.iter().filter(|&(d, _)| d <= p) {
        out.set(d, n);
    }
    out
}

#[test]
fn empty_singular_set_folds_to_the_constant_sheaf() {
    let c = ctx("sphere-2", "zero");
    assert!(c.stages().iter().all(|s| s.is_identity()));
    assert_eq!(fold(&c).unwrap(), c.start_sheaf());
    assert!(check_axioms(&fold(&c).unwrap(), &c).unwrap().pass());
}

#[test]
fn stage_bookkeeping() {
    let c = ctx("cone-s2", "zero");
    assert_eq!(c.stages().len(), 2);
    // U_2 = U_3 = X − {c}, U_4 = X
    assert!(c.stage(2).unwrap().is_identity());
    assert_eq!(c.stage(3).unwrap().new_points, vec![apex(&c, 4)]);
    let ps = fold_stages(&c).unwrap();
    for (i, st) in c.stages().iter().enumerate() {
        assert_eq!(ps[i + 1].restrict(&st.from).stalk_table(), ps[i].stalk_table(), "k = {}", st.k);
    }
}

#[test]
fn apex_stalk_is_truncated_link_cohomology() {
    for (name, v) in [("cone-s1", 3u32), ("cone-s2", 4)] {
        for p in ["zero", "lower-middle", "top"] {
            let c = ctx(name, p);
            let n = c.space().n();
            let f = fold(&c).unwrap();
            let want = truncated(&link_cohomology(&c, v), c.perversity().at(n));
            assert_eq!(f.stalk_cohomology(apex(&c, v)), want, "{name} {p}");
        }
    }
}

#[test]
fn folds_satisfy_the_axioms() {
    for name in ["cone-s1", "cone-s2", "pinched-torus"] {
        for p in ["zero", "top"] {
            let c = ctx(name, p);
            let r = check_axioms(&fold(&c).unwrap(), &c).unwrap();
            assert!(r.pass(), "{name} {p}: {:?}", r);
            assert!(r.ax1.components >= 1);
        }
    }
}

#[test]
fn constant_sheaf_fails_attaching_at_the_pinch() {
    // the link of the pinch is two circles, so H⁰ of the pushforward is ℚ²
    let c = ctx("pinched-torus", "zero");
    let all = UpSet::all(c.poset());
    let r = check_axioms(&SheafComplex::constant(c.poset(), &all, 1), &c).unwrap();
    assert!(r.ax1.pass);
    assert_eq!(r.failing_stages(), vec![2]);
    let st = &r.stages[0];
    assert!(st.vanishing && !st.attaching);
    assert_eq!(st.stalks[0].pushed, GradedDims::from_slice(0, &[2, 2]));
}

#[test]
fn constant_sheaf_on_a_ball_is_already_deligne() {
    // H*(S²) has nothing in degrees 1..=p(3), so ℚ_X passes and, as the
    // converse predicts, has the fold's stalk tables
    let c = ctx("cone-s2", "top");
    let all = UpSet::all(c.poset());
    let q = SheafComplex::constant(c.poset(), &all, 1);
    assert!(check_axioms(&q, &c).unwrap().pass());
    assert_eq!(q.stalk_table(), fold(&c).unwrap().stalk_table());
}

#[test]
fn ax1_rejects_a_rank_two_start() {
    let c = ctx("cone-s1", "zero");
    let all = UpSet::all(c.poset());
    let r = check_axioms(&SheafComplex::constant(c.poset(), &all, 2), &c).unwrap();
    assert!(!r.ax1.pass);
}

#[test]
fn perturbed_folds_fail_exactly_at_the_perturbed_stage() {
    for (name, p) in [("cone-s1", "zero"), ("cone-s2", "zero"), ("cone-s2", "top"), ("pinched-torus", "zero")] {
        let c = ctx(name, p);
        for st in c.stages().iter().filter(|s| !s.is_identity()) {
            let cut = perturbation_cut(&c, st.k).unwrap().expect("detectable perturbation");
            let bad = fold(&c.with_cut(st.k, cut).unwrap()).unwrap();
            let r = check_axioms(&bad, &c).unwrap();
            assert_eq!(r.failing_stages(), vec![st.k], "{name} {p} cut {cut}");
            assert!(r.ax1.pass);
        }
    }
    // cone-s2: H¹(S²) = 0 and cutting below 0 would also empty U₃, so the cut moves to 2
    let c = ctx("cone-s2", "zero");
    assert_eq!(perturbation_cut(&c, 3).unwrap(), Some(2));
    assert_eq!(perturbation_cut(&ctx("cone-s1", "zero"), 2).unwrap(), Some(1));
    assert_eq!(perturbation_cut(&c, 2).unwrap(), None);
}

#[test]
fn refolding_a_stage_changes_nothing() {
    let c = ctx("cone-s1", "zero");
    let ps = fold_stages(&c).unwrap();
    let st = &c.stages()[0];
    let again = fold_step(st, &ps[1]).unwrap();
    assert_eq!(again.stalk_table(), ps[1].stalk_table());
}

#[test]
fn sheaf_instance_reproduces_fold() {
    let c = ctx("cone-s2", "zero");
    let sys = SheafSystem { ctx: &c };
    let out = generic_fold(&sys, &c.start_sheaf()).unwrap();
    let f = fold(&c).unwrap();
    assert_eq!(out.last().unwrap(), &f);
    let v = generic_check(&sys, &f, &c.start_sheaf()).unwrap();
    assert!(v.pass());
}

#[test]
fn other_posets_are_rejected() {
    let c = ctx("cone-s1", "zero");
    let other = ctx("cone-s1", "zero");
    assert!(check_axioms(&other.start_sheaf(), &c).is_err());
    let s = Arc::new(catalog::cone_on_sphere(1));
    assert!(DeligneContext::new(&s, &Perversity::zero(3)).is_err());
}

fn wide_complex() -> QSpaceComplex {
    // cohomology ℚ in each of the degrees -1..=3, zero differentials
    QSpaceComplex::new(-1, vec![1; 5], vec![Matrix::zeros(1, 1); 4]).unwrap()
}

use crate::linalg::QSpaceComplex;

#[test]
fn toy_fold_is_a_single_truncation() {
    let sys = toy_truncation_system(vec![0, 1, 1]);
    let f0 = truncate_complex(&wide_complex(), 0);
    let out = generic_fold(&sys, &f0).unwrap();
    assert_eq!(out.len(), 4);
    assert_eq!(out[3].cohomology(), truncate_complex(&wide_complex(), 0).cohomology());
    assert!(generic_check(&sys, &out[3], &f0).unwrap().pass());
    // a non-fixed start object is refused
    assert!(generic_fold(&sys, &wide_complex()).is_err());
}

#[test]
fn toy_check_sees_wrong_objects() {
    let sys = toy_truncation_system(vec![0, 1]);
    let f0 = truncate_complex(&wide_complex(), 0);
    let v = generic_check(&sys, &truncate_complex(&wide_complex(), 2), &f0).unwrap();
    assert!(!v.ax1);
    assert!(!v.pass());
}

struct Shifty;

impl DeligneSystem for Shifty {
    type Obj = QSpaceComplex;
    fn stage_count(&self) -> usize {
        1
    }
    fn cut(&self, _: usize) -> i32 {
        2
    }
    fn push(&self, _: usize, a: &QSpaceComplex) -> crate::Result<QSpaceComplex> {
        Ok(a.clone())
    }
    fn pull(&self, _: usize, a: &QSpaceComplex) -> QSpaceComplex {
        a.clone()
    }
    // cuts one degree lower every time it is applied
    fn truncate(&self, cut: i32, a: &QSpaceComplex) -> QSpaceComplex {
        truncate_complex(a, cut.min(a.hi()) - 1)
    }
    fn equivalent(&self, a: &QSpaceComplex, b: &QSpaceComplex) -> bool {
        a.cohomology() == b.cohomology()
    }
}

#[test]
fn non_idempotent_truncation_is_a_contract_error() {
    let f0 = wide_complex();
    let err = generic_fold(&Shifty, &f0).unwrap_err();
    assert!(matches!(err, Error::Contract(_)));
    // F₀ itself is not fixed, which is the first thing to break
    let ok_start = generic_fold(&Shifty, &truncate_complex(&f0, 0));
    let msg = ok_start.unwrap_err().to_string();
    assert!(msg.contains("F₀") || msg.contains("idempotence"), "{msg}");
}
