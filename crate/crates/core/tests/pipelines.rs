use proptest::prelude::*;
use std::sync::Arc;
use strathom::deligne::{check_axioms, fold, DeligneContext};
use strathom::ih::{h_betti, ih_betti, ChainMode};
use strathom::io::{parse_complex, write_complex};
use strathom::linalg::GradedDims;
use strathom::sheaf::SheafJson;
use strathom::strata::{Perversity, StrataJson, StratifiedComplex};

fn polygon(n: usize) -> String {
    let vs: Vec<String> = (0..n).map(|i| format!("\"v{i}\"")).collect();
    let es: Vec<String> = (0..n).map(|i| format!("[\"v{i}\",\"v{}\"]", (i + 1) % n)).collect();
    format!("{{\"vertices\":[{}],\"maximal_simplices\":[{}]}}", vs.join(","), es.join(","))
}

fn flipped(g: &GradedDims, n: usize) -> GradedDims {
    let mut out = GradedDims::new();
    for (i, d) in g.iter() {
        out.set(n as i32 - i, d);
    }
    out
}

/// Σ of an n-gon with both poles declared singular.
fn suspended_polygon(n: usize) -> StratifiedComplex {
    let circle = parse_complex(&polygon(n)).unwrap();
    let k = strathom::scx::suspension(&circle, "north", "south");
    let strata: StrataJson = serde_json::from_str(r#"{"filtration":[["north","south"],["north","south"]],"n":2}"#).unwrap();
    strata.build("suspended polygon", parse_complex(&write_complex(&k)).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    // the poles are fake singularities of a 2-sphere, so every perversity sees H*(S²)
    #[test]
    fn fake_singularities_are_invisible(n in 3usize..7) {
        let s = suspended_polygon(n);
        let sphere = GradedDims::from_slice(0, &[1, 0, 1]);
        prop_assert_eq!(h_betti(&s, ChainMode::Absolute), sphere.clone());
        for p in Perversity::presets(2) {
            let ih = ih_betti(&s, &p, ChainMode::Absolute).unwrap();
            prop_assert_eq!(&ih, &sphere);
            let h = fold(&DeligneContext::new(&Arc::new(s.clone()), &p).unwrap()).unwrap().hypercohomology();
            prop_assert_eq!(h, flipped(&ih, 2));
        }
    }
}

#[test]
fn folded_sheaf_survives_a_json_round_trip() {
    let s = Arc::new(suspended_polygon(4));
    let ctx = DeligneContext::new(&s, &Perversity::zero(2)).unwrap();
    let f = fold(&ctx).unwrap();
    let text = serde_json::to_string(&SheafJson::from_sheaf(&f)).unwrap();
    let back: SheafJson = serde_json::from_str(&text).unwrap();
    let g = back.to_sheaf(ctx.poset()).unwrap();
    assert_eq!(g.stalk_table(), f.stalk_table());
    assert!(check_axioms(&g, &ctx).unwrap().pass());
    assert_eq!(g.hypercohomology(), f.hypercohomology());
}
