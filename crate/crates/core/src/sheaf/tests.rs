use super::*;
use crate::fintop::FiniteTopology;
use crate::linalg::Q;
use crate::scx::{boundary_of_simplex, Complex, Subcomplex};
use crate::strata::catalog;
use proptest::prelude::*;

fn poset_of(k: Complex) -> Arc<FacePoset> {
    Arc::new(FacePoset::new(&Arc::new(k)))
}

/// Cosimplicial (Roos) complex: degree (k, i) is the product over strict
/// chains x₀ < … < x_k of F^i(x_k). Its cohomology is ℍ*.
fn roos_hypercohomology(f: &SheafComplex) -> GradedDims {
    let p = f.poset();
    let mut chains: Vec<Vec<Vec<usize>>> = vec![f.support().iter().map(|x| vec![x]).collect()];
    loop {
        let last = chains.last().unwrap();
        let next: Vec<Vec<usize>> = last
            .iter()
            .flat_map(|c| {
                let top = *c.last().unwrap();
                p.up(top).iter().skip(1).map(move |&y| {
                    let mut d = c.clone();
                    d.push(y as usize);
                    d
                })
            })
            .collect();
        if next.is_empty() {
            break;
        }
        chains.push(next);
    }
    let len = f.len();
    let levels = chains.len();
    let lo = f.lo();
    // coordinates of each (k, i) block
    let block_dim = |k: usize, i: usize| -> Vec<usize> {
        let mut o = vec![0];
        for c in &chains[k] {
            o.push(o.last().unwrap() + f.dim(*c.last().unwrap(), lo + i as i32));
        }
        o
    };
    let tlen = len + levels - 1;
    let mut toff = vec![vec![0usize; len]; levels];
    let mut tdim = vec![0usize; tlen];
    for t in 0..tlen {
        for k in 0..levels {
            if t >= k && t - k < len {
                toff[k][t - k] = tdim[t];
                tdim[t] += block_dim(k, t - k).last().unwrap();
            }
        }
    }
    let mut diffs = Vec::new();
    for t in 0..tlen.saturating_sub(1) {
        let mut ent: Vec<(usize, usize, Q)> = Vec::new();
        for k in 0..levels {
            if t < k || t - k >= len {
                continue;
            }
            let i = t - k;
            let deg = lo + i as i32;
            let src = block_dim(k, i);
            if k + 1 < levels {
                let dst = block_dim(k + 1, i);
                let index: std::collections::HashMap<&Vec<usize>, usize> = chains[k].iter().enumerate().map(|(a, c)| (c, a)).collect();
                for (b, c) in chains[k + 1].iter().enumerate() {
                    for j in 0..=k + 1 {
                        let mut face = c.clone();
                        face.remove(j);
                        let a = index[&face];
                        let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
                        let m = if j == k + 1 {
                            f.res_path(c[k], c[k + 1], deg).unwrap()
                        } else {
                            Matrix::identity(f.dim(c[k + 1], deg))
                        };
                        for (cc, col) in m.columns().iter().enumerate() {
                            for (r, v) in col {
                                ent.push((toff[k + 1][i] + dst[b] + *r as usize, toff[k][i] + src[a] + cc, &sign * v));
                            }
                        }
                    }
                }
            }
            if i + 1 < len {
                let dst = block_dim(k, i + 1);
                let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
                for (a, c) in chains[k].iter().enumerate() {
                    let d = f.diff(*c.last().unwrap(), deg);
                    for (cc, col) in d.columns().iter().enumerate() {
                        for (r, v) in col {
                            ent.push((toff[k][i + 1] + dst[a] + *r as usize, toff[k][i] + src[a] + cc, &sign * v));
                        }
                    }
                }
            }
        }
        diffs.push(Matrix::from_triplets(tdim[t + 1], tdim[t], ent));
    }
    QSpaceComplex::new(lo, tdim, diffs).unwrap().cohomology()
}

/// Components of a subcomplex through shared vertices.
fn subcomplex_components(s: &Subcomplex) -> usize {
    let (k, _) = s.to_complex();
    k.betti().first().copied().unwrap_or(0)
}

/// A sheaf with random stalks, random vertex-to-edge restrictions and zero
/// restrictions elsewhere; every diamond commutes because it passes
/// through a zero map.
fn random_sheaf(poset: &Arc<FacePoset>, dims: &[usize], entries: &[i64]) -> SheafComplex {
    let mut e = entries.iter().cycle();
    let stalks = (0..poset.len())
        .map(|x| {
            let dx = dims[x % dims.len()];
            let res = poset
                .up_covers(x)
                .iter()
                .map(|&y| {
                    let dy = dims[y as usize % dims.len()];
                    let m = if poset.rank(x) == 0 {
                        let rows: Vec<Vec<i64>> = (0..dy).map(|_| (0..dx).map(|_| *e.next().unwrap()).collect()).collect();
                        Matrix::from_rows_i64(dy, dx, &rows)
                    } else {
                        Matrix::zeros(dy, dx)
                    };
                    vec![m]
                })
                .collect();
            Stalk::new(vec![dx], Vec::new(), res)
        })
        .collect();
    SheafComplex::new(poset, UpSet::all(poset), 0, stalks).unwrap()
}

#[test]
fn constant_on_two_points() {
    let p = poset_of(boundary_of_simplex(1));
    let f = SheafComplex::constant(&p, &UpSet::all(&p), 1);
    assert_eq!(f.sections_complex(&UpSet::all(&p)).dims(), GradedDims::from_slice(0, &[2]));
    assert_eq!(f.hypercohomology(), GradedDims::from_slice(0, &[2]));
}

#[test]
fn constant_sections_count_components() {
    let s = Arc::new(catalog::sphere(2));
    let t = FiniteTopology::generate(&s).unwrap();
    let p = t.poset().clone();
    let f = SheafComplex::constant(&p, &UpSet::all(&p), 1);
    for sigma in 0..p.len() {
        assert_eq!(f.sections_complex(&UpSet::principal(&p, sigma)).dim(0), 1);
    }
    // every open generated by one or two basis sets
    for a in 0..p.len() {
        for b in a..p.len() {
            let o = t.open_from_witness(&[a, b]).unwrap();
            let c = subcomplex_components(o.set());
            assert_eq!(f.sections_complex(o.witness()).dim(0), c, "opens fst({a}) ∪ fst({b})");
        }
    }
}

#[test]
fn constant_is_not_flasque_over_two_components() {
    let s = Arc::new(catalog::sphere(2));
    let t = FiniteTopology::generate(&s).unwrap();
    let p = t.poset().clone();
    let f = SheafComplex::constant(&p, &UpSet::all(&p), 1);
    let fails = f.flasque_failures();
    assert!(!fails.is_empty());
    // the failures sit at edges, whose punctured star is two triangles
    for (x, _) in &fails {
        assert_eq!(p.rank(*x), 1);
        let punctured = UpSet::principal(&p, *x).without_minimal(&p, *x);
        assert_eq!(p.components(&punctured), 2);
    }
}

#[test]
fn godement_matches_roos_on_catalog() {
    for name in ["sphere-2", "cone-s1", "pinched-torus"] {
        let s = Arc::new(catalog::by_name(name).unwrap());
        let p = Arc::new(FacePoset::new(s.base()));
        let f = SheafComplex::constant(&p, &UpSet::all(&p), 1);
        let h = f.hypercohomology();
        assert_eq!(h, roos_hypercohomology(&f), "{name}");
        let betti = s.base().betti();
        assert_eq!(h, GradedDims::from_slice(0, &betti), "{name}");
    }
}

#[test]
fn godement_resolution_is_exact_and_flasque() {
    let s = Arc::new(catalog::cone_on_sphere(1));
    let p = Arc::new(FacePoset::new(s.base()));
    let f = SheafComplex::constant(&p, &UpSet::all(&p), 2);
    let g = f.godement();
    assert_eq!(g.levels(), 3);
    let res = g.as_sheaf();
    assert!(res.is_flasque());
    assert!(f.godement_zero().is_flasque());
    let unit = g.unit(&f, &res);
    assert!(unit.is_quasi_iso(&f, &res));
    // sections over every basis open: H^0 = F_σ, nothing above
    for x in 0..p.len() {
        assert_eq!(g.sections(&UpSet::principal(&p, x)).cohomology(), GradedDims::from_slice(0, &[2]));
    }
}

#[test]
fn truncation_laws() {
    let s = Arc::new(catalog::cone_on_sphere(2));
    let p = Arc::new(FacePoset::new(s.base()));
    let apex = s.base().find(&[4]).unwrap();
    let punctured = UpSet::all(&p).without_minimal(&p, apex);
    let c = SheafComplex::constant(&p, &punctured, 1);
    let rf = c.derived_pushforward(&UpSet::all(&p)).unwrap();
    assert_eq!(rf.stalk_cohomology(apex), GradedDims::from_slice(0, &[1, 0, 1]));
    for a in -1..=3 {
        let ta = rf.truncate(a);
        // idempotence, exactly
        assert_eq!(ta.truncate(a), ta);
        for b in -1..=3 {
            let lhs = rf.truncate(a).truncate(b).stalk_table();
            let rhs = rf.truncate(a.min(b)).stalk_table();
            assert_eq!(lhs, rhs, "τ{b} τ{a}");
        }
        // cohomology kept up to a, killed above
        for x in 0..p.len() {
            let full = rf.stalk_cohomology(x);
            let cut = ta.stalk_cohomology(x);
            for m in -1..=6 {
                assert_eq!(cut.get(m), if m <= a { full.get(m) } else { 0 });
            }
        }
        // restriction to an open commutes with truncation
        assert_eq!(rf.truncate(a).restrict(&punctured), rf.restrict(&punctured).truncate(a));
    }
}

#[test]
fn pushforward_formula_on_basis_opens() {
    let s = Arc::new(catalog::cone_on_sphere(1));
    let p = Arc::new(FacePoset::new(s.base()));
    let apex = s.base().find(&[3]).unwrap();
    let all = UpSet::all(&p);
    let u = all.without_minimal(&p, apex);
    let f = SheafComplex::constant(&p, &u, 1);
    let pf = f.pushforward(&all).unwrap();
    for x in 0..p.len() {
        let w = UpSet::principal(&p, x);
        assert_eq!(pf.sections_complex(&w).dims(), f.sections_complex(&w.intersection(&u)).dims());
    }
    assert_eq!(pf.sections_complex(&all).dims(), f.sections_complex(&u).dims());
    // j ∘ ι = id on the nose
    assert_eq!(pf.restrict(&u), f);
    // over the apex the two components of the punctured circle... one: the link is a circle
    assert_eq!(pf.stalk_cohomology(apex), GradedDims::from_slice(0, &[1]));
}

#[test]
fn derived_pushforward_over_cone_point_sees_the_link() {
    let s = Arc::new(catalog::cone_on_sphere(2));
    let p = Arc::new(FacePoset::new(s.base()));
    let apex = s.base().find(&[4]).unwrap();
    let all = UpSet::all(&p);
    let u = all.without_minimal(&p, apex);
    let f = SheafComplex::constant(&p, &u, 1);
    let r = f.derived_pushforward(&all).unwrap();
    let link = s.base().simplices().iter().filter(|sm| !sm.contains(&4)).map(|sm| sm.to_vec()).collect::<Vec<_>>();
    let lk = Complex::new((0..4).map(|i| i.to_string()).collect(), &link).unwrap();
    assert_eq!(r.stalk_cohomology(apex), GradedDims::from_slice(0, &lk.betti()));
    // away from the apex it resolves the constant sheaf
    for x in u.iter() {
        assert_eq!(r.stalk_cohomology(x), GradedDims::from_slice(0, &[1]));
    }
    assert!(r.is_flasque());
    // unit ℚ → Rι_*ℚ on U is a quasi-isomorphism there
    let g = f.godement();
    let unit = g.unit(&f, &g.as_sheaf());
    assert!(unit.is_quasi_iso(&f, &g.as_sheaf()));
}

#[test]
fn cohomology_sheaf_has_stalk_cohomology() {
    let s = Arc::new(catalog::cone_on_sphere(1));
    let t = FiniteTopology::generate(&s).unwrap();
    let c = cochain_sheaf(&t);
    for m in 0..=2 {
        let h = c.cohomology_sheaf(m);
        for x in 0..t.poset().len() {
            assert_eq!(h.dim(x, 0), c.stalk_cohomology(x).get(m));
        }
    }
}

#[test]
fn cochain_sheaf_is_flasque_with_the_right_hypercohomology() {
    for name in ["sphere-2", "cone-s1"] {
        let s = Arc::new(catalog::by_name(name).unwrap());
        let t = FiniteTopology::generate(&s).unwrap();
        let c = cochain_sheaf(&t);
        assert!(c.is_flasque(), "{name}");
        let top = t.poset().complex().len() - 1;
        // over a top simplex fst is Sd²(σ): acyclic, one 0-class
        assert_eq!(c.stalk_cohomology(top), GradedDims::from_slice(0, &[1]));
        let h = GradedDims::from_slice(0, &s.base().betti());
        assert_eq!(c.hypercohomology(), h, "{name}");
        assert_eq!(c.sections_complex(&UpSet::all(t.poset())).cohomology(), h, "{name}");
    }
}

#[test]
fn phi_model_small_spaces() {
    for name in ["sphere-2", "cone-s1"] {
        let s = Arc::new(catalog::by_name(name).unwrap());
        let t = FiniteTopology::generate(&s).unwrap();
        let gp = Arc::new(FacePoset::new(s.doubled()));
        let constant = SheafComplex::constant(&gp, &UpSet::all(&gp), 1);
        let phi_c = phi_model(&constant, &t).unwrap();
        for x in 0..t.poset().len() {
            assert_eq!(phi_c.stalk_cohomology(x), GradedDims::from_slice(0, &[1]));
        }
        assert!(!phi_c.is_flasque(), "{name}");
        let soft = constant.godement_zero();
        assert!(soft.is_flasque());
        let phi_soft = phi_model(&soft, &t).unwrap();
        let phi_fast = phi_model_product(&constant, &t).unwrap();
        for x in 0..t.poset().len() {
            assert_eq!(phi_soft.stalk(x).dims(), phi_fast.stalk(x).dims());
        }
        assert!(phi_soft.is_flasque(), "{name}");
        assert!(phi_fast.is_flasque(), "{name}");
    }
}

#[test]
fn json_round_trip() {
    let s = Arc::new(catalog::cone_on_sphere(1));
    let t = FiniteTopology::generate(&s).unwrap();
    let c = cochain_sheaf(&t);
    let j = SheafJson::from_sheaf(&c);
    let text = serde_json::to_string(&j).unwrap();
    let back: SheafJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_sheaf(t.poset()).unwrap(), c);
    let mut broken = back.clone();
    broken.stalks[0].dims[0] += 1;
    assert!(broken.to_sheaf(t.poset()).is_err());
}

#[test]
fn validation_rejects_bad_data() {
    let p = poset_of(crate::scx::simplex(1));
    let all = UpSet::all(&p);
    let id = Matrix::identity(1);
    let ok = |r: Matrix| {
        let st = vec![
            Stalk::new(vec![1], vec![], vec![vec![r.clone()]]),
            Stalk::new(vec![1], vec![], vec![vec![Matrix::identity(1)]]),
            Stalk::new(vec![1], vec![], vec![]),
        ];
        SheafComplex::new(&p, all.clone(), 0, st)
    };
    assert!(ok(id).is_ok());
    assert!(ok(Matrix::zeros(2, 1)).is_err());
    // outside the degree window
    let st = (0..3).map(|x| Stalk::new(vec![0], vec![], vec![vec![Matrix::zeros(0, 0)]; p.up_covers(x).len()])).collect();
    assert!(SheafComplex::new(&p, all, 7, st).is_err());
}

#[test]
fn non_natural_map_rejected() {
    let p = poset_of(crate::scx::simplex(1));
    let all = UpSet::all(&p);
    let f = SheafComplex::constant(&p, &all, 1);
    let mut mats: Vec<Vec<Matrix>> = (0..3).map(|_| vec![Matrix::identity(1)]).collect();
    assert!(SheafMap::new(&f, &f, 0, mats.clone()).is_ok());
    mats[2] = vec![Matrix::from_rows_i64(1, 1, &[vec![2]])];
    assert!(SheafMap::new(&f, &f, 0, mats).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn godement_agrees_with_roos(dims in proptest::collection::vec(0usize..3, 1..5), entries in proptest::collection::vec(-2i64..3, 1..12)) {
        let p = poset_of(boundary_of_simplex(2));
        let f = random_sheaf(&p, &dims, &entries);
        prop_assert_eq!(f.hypercohomology(), roos_hypercohomology(&f));
        let g = f.godement();
        prop_assert!(g.as_sheaf().is_flasque());
        let res = g.as_sheaf();
        prop_assert!(g.unit(&f, &res).is_quasi_iso(&f, &res));
    }

    #[test]
    fn flasque_sheaves_need_no_resolution(dims in proptest::collection::vec(0usize..3, 1..5), entries in proptest::collection::vec(-2i64..3, 1..12)) {
        let p = poset_of(crate::scx::simplex(2));
        let f = random_sheaf(&p, &dims, &entries).godement_zero();
        prop_assert!(f.is_flasque());
        prop_assert_eq!(f.hypercohomology(), f.sections_complex(&UpSet::all(&p)).cohomology());
    }
}
