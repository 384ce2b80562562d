use super::*;
use crate::strata::catalog;
use proptest::prelude::*;

fn gd(v: &[usize]) -> GradedDims {
    GradedDims::from_slice(0, v)
}

fn base_betti(s: &StratifiedComplex) -> GradedDims {
    gd(&s.base().betti())
}

fn link_betti(s: &StratifiedComplex, vertex: u32) -> GradedDims {
    let apex = s.base().find(&[vertex]).unwrap();
    gd(&s.local_structure(apex).unwrap().link_complex().betti())
}

#[test]
fn manifolds_have_ih_equal_to_h() {
    for name in ["sphere-2", "sphere-3"] {
        let s = catalog::by_name(name).unwrap();
        let h = h_betti(&s, ChainMode::Absolute);
        assert_eq!(h, base_betti(&s), "{name}");
        for p in Perversity::presets(s.n()) {
            assert_eq!(ih_betti(&s, &p, ChainMode::Absolute).unwrap(), h, "{name} {}", p.name());
        }
    }
    assert_eq!(h_betti(&catalog::sphere(3), ChainMode::Absolute), gd(&[1, 0, 0, 1]));
}

#[test]
fn empty_singular_set_keeps_every_chain() {
    let s = catalog::sphere(2);
    let c = ic_complex(&s, &Perversity::zero(2), ChainMode::Absolute).unwrap();
    let f = s.doubled().f_vector();
    assert_eq!(c.dims().to_vec(-2, 0), vec![f[2], f[1], f[0]]);
}

#[test]
fn pinched_torus() {
    let s = catalog::pinched_torus();
    assert_eq!(h_betti(&s, ChainMode::Absolute), gd(&[1, 1, 1]));
    assert_eq!(h_betti(&s, ChainMode::Absolute), base_betti(&s));
    // n = 2: every GM perversity is zero
    assert_eq!(ih_betti(&s, &Perversity::zero(2), ChainMode::Absolute).unwrap(), gd(&[1, 0, 1]));
}

#[test]
fn cones_follow_the_cone_formula() {
    for (name, apex) in [("cone-s1", 3u32), ("cone-s2", 4)] {
        let s = catalog::by_name(name).unwrap();
        let n = s.n();
        let link = link_betti(&s, apex);
        for p in Perversity::presets(n) {
            let abs = ih_betti(&s, &p, ChainMode::Absolute).unwrap();
            assert_eq!(abs, cone_formula_oracle(&link, p.at(n), n), "{name} {}", p.name());
            let rel = ih_betti(&s, &p, ChainMode::Relative).unwrap();
            assert_eq!(rel, cone_formula_oracle_relative(&link, p.at(n), n), "{name} {} relative", p.name());
        }
    }
}

#[test]
fn cone_formula_edge_cases() {
    // cone on a point is an interval; nothing is cut
    assert_eq!(cone_formula_oracle(&gd(&[1]), 0, 2), gd(&[1]));
    let t2 = gd(&[1, 2, 1]);
    // larger p(n) keeps fewer degrees
    let kept = |p| cone_formula_oracle(&t2, p, 3).total();
    assert!(kept(0) >= kept(1));
    assert_eq!(cone_formula_oracle(&t2, 1, 3), gd(&[1]));
    assert_eq!(cone_formula_oracle(&t2, 0, 3), gd(&[1, 2]));
}

#[test]
fn suspended_torus_tables_and_duality() {
    let s = catalog::suspended_torus();
    let zero = ih_betti(&s, &Perversity::zero(3), ChainMode::Absolute).unwrap();
    let top = ih_betti(&s, &Perversity::top(3), ChainMode::Absolute).unwrap();
    assert_eq!(zero, gd(&[1, 2, 0, 1]));
    assert_eq!(top, gd(&[1, 0, 2, 1]));
    // IH^p_i = IH^{t−p}_{n−i}
    for i in 0..=3 {
        assert_eq!(zero.get(i), top.get(3 - i));
    }
    assert_eq!(h_betti(&s, ChainMode::Absolute), base_betti(&s));
}

#[test]
fn explicit_complex_matches_rank_formula() {
    for name in ["cone-s1", "pinched-torus", "cone-s2"] {
        let s = catalog::by_name(name).unwrap();
        for p in Perversity::presets(s.n()) {
            for mode in [ChainMode::Absolute, ChainMode::Relative] {
                let c = ic_complex(&s, &p, mode).unwrap();
                let mut homological = GradedDims::new();
                for (d, h) in c.cohomology().iter() {
                    homological.set(-d, h);
                }
                assert_eq!(homological, ih_betti(&s, &p, mode).unwrap(), "{name} {} {mode:?}", p.name());
            }
        }
    }
}

#[test]
fn ic_grows_with_the_perversity() {
    let s = catalog::suspended_torus();
    let lo = IcData::new(&s, &Perversity::zero(3), ChainMode::Absolute).unwrap();
    let hi = IcData::new(&s, &Perversity::top(3), ChainMode::Absolute).unwrap();
    for d in 0..=3 {
        let a = lo.allowable(d);
        assert!(a.iter().all(|&i| hi.is_allowable(i)));
        assert!(a.len() <= hi.allowable(d).len());
    }
    let c_lo = ic_complex(&catalog::cone_on_sphere(2), &Perversity::zero(3), ChainMode::Absolute).unwrap();
    let c_hi = ic_complex(&catalog::cone_on_sphere(2), &Perversity::top(3), ChainMode::Absolute).unwrap();
    for d in -3..=0 {
        assert!(c_lo.dim(d) <= c_hi.dim(d));
    }
}

#[test]
fn small_chains_at_the_pinch() {
    let s = catalog::pinched_torus();
    let k = s.doubled();
    let p = Perversity::zero(2);
    let pinch = s.sd().double_barycenter(s.base().find(&[0]).unwrap());
    // a point of Σ is never an allowable 0-chain
    let point = Chain::new(0, [(pinch as usize, Q::one())]);
    assert!(!chain_allowable(&point, &s, &p).unwrap());
    // away from Σ anything goes
    let far = k.of_dim(1).find(|&e| k.simplex(e).iter().all(|&v| v != pinch)).unwrap();
    assert!(chain_allowable(&Chain::new(1, [(far, Q::one())]), &s, &p).unwrap());
    // every triangle at the pinch is allowable (dim 0 ≤ 2 − 2), none of its
    // edges at the pinch are (dim 0 > 1 − 2), so a boundary through the pinch never is
    for t in k.of_dim(2).filter(|&t| k.simplex(t).contains(&pinch)) {
        let xi = Chain::new(2, [(t, Q::one())]);
        assert!(chain_allowable(&xi, &s, &p).unwrap());
        assert!(!chain_allowable(&xi.boundary(k), &s, &p).unwrap());
    }
    assert!(chain_allowable(&Chain::new(1, [(0, Q::one())]), &s, &p).is_err());
    assert!(chain_allowable(&point, &s, &Perversity::zero(3)).is_err());
}

#[test]
fn boundary_of_boundary_vanishes() {
    let s = catalog::cone_on_sphere(2);
    let k = s.doubled();
    for t in k.of_dim(3).take(50) {
        let c = Chain::new(3, [(t, Q::from_int(2))]);
        assert!(c.boundary(k).boundary(k).terms.is_empty());
    }
}

#[test]
fn one_more_subdivision_changes_nothing() {
    for name in ["cone-s1", "pinched-torus"] {
        let s = catalog::by_name(name).unwrap();
        let r = s.refined().unwrap();
        assert!(r.doubled().len() > s.doubled().len());
        for p in Perversity::presets(s.n()) {
            for mode in [ChainMode::Absolute, ChainMode::Relative] {
                assert_eq!(ih_betti(&r, &p, mode).unwrap(), ih_betti(&s, &p, mode).unwrap(), "{name} {}", p.name());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chain_allowability_is_simplexwise(picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..6), d in 0usize..3) {
        let s = catalog::cone_on_sphere(1);
        let k = s.doubled();
        let p = Perversity::zero(2);
        let cells: Vec<usize> = k.of_dim(d).collect();
        let sup: Vec<usize> = picks.iter().map(|i| cells[i.index(cells.len())]).collect();
        let xi = Chain::new(d, sup.iter().map(|&i| (i, Q::one())));
        let data = IcData::new(&s, &p, ChainMode::Absolute).unwrap();
        prop_assert_eq!(chain_allowable(&xi, &s, &p).unwrap(), xi.support().all(|i| data.is_allowable(i)));
    }
}
