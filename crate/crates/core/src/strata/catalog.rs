//! Built-in stratified spaces.

use super::StratifiedComplex;
use crate::error::{Error, Result};
use crate::scx::{boundary_of_simplex, cone, suspension, Complex};

pub const NAMES: &[&str] = &["sphere-2", "sphere-3", "cone-s1", "cone-s2", "pinched-torus", "sigma-t2"];

pub fn by_name(name: &str) -> Result<StratifiedComplex> {
    match name {
        "sphere-2" => Ok(sphere(2)),
        "sphere-3" => Ok(sphere(3)),
        "cone-s1" => Ok(cone_on_sphere(1)),
        "cone-s2" => Ok(cone_on_sphere(2)),
        "pinched-torus" => Ok(pinched_torus()),
        "sigma-t2" => Ok(suspended_torus()),
        other => Err(Error::Input(format!("unknown space {other:?}; known: {}", NAMES.join(", ")))),
    }
}

/// ∂Δ^{n+1} with empty singular set.
pub fn sphere(n: usize) -> StratifiedComplex {
    let strata = vec![Vec::new(); n];
    StratifiedComplex::from_vertex_strata(&format!("sphere-{n}"), boundary_of_simplex(n + 1), n, &strata)
        .expect("spheres are valid")
}

/// Cone on ∂Δ^{d+1}, apex as the only singular stratum; formal dimension d + 1.
pub fn cone_on_sphere(d: usize) -> StratifiedComplex {
    let n = d + 1;
    let k = cone(&boundary_of_simplex(d + 1), "c");
    let strata: Vec<Vec<String>> = (0..n).map(|j| if j + 2 <= n { vec!["c".to_string()] } else { Vec::new() }).collect();
    StratifiedComplex::from_vertex_strata(&format!("cone-s{d}"), k, n, &fill_top(strata, n)).expect("cones are valid")
}

// X_{n-1} = X_{n-2}: copy the singular set up to codimension one
fn fill_top(mut strata: Vec<Vec<String>>, n: usize) -> Vec<Vec<String>> {
    strata[n - 1] = strata[n - 2].clone();
    strata
}

/// Seven-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
pub fn seven_vertex_torus() -> Complex {
    let labels = (0..7).map(|i| format!("t{i}")).collect();
    let mut tris = Vec::new();
    for i in 0..7u32 {
        tris.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        tris.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    Complex::new(labels, &tris).expect("torus is valid")
}

/// Suspension of the seven-vertex torus; the two apexes form X₀.
pub fn suspended_torus() -> StratifiedComplex {
    let k = suspension(&seven_vertex_torus(), "north", "south");
    let apexes = vec!["north".to_string(), "south".to_string()];
    let strata = vec![apexes.clone(), apexes.clone(), apexes];
    StratifiedComplex::from_vertex_strata("sigma-t2", k, 3, &strata).expect("suspension is valid")
}

/// Torus with a meridian circle collapsed to a point: a three-level cylinder
/// over a triangle whose two end circles are both coned to `p`.
pub fn pinched_torus() -> StratifiedComplex {
    let labels: Vec<String> = ["p", "b0", "b1", "b2", "c0", "c1", "c2"].iter().map(|s| s.to_string()).collect();
    let (p, b, c) = (0u32, [1u32, 2, 3], [4u32, 5, 6]);
    let mut tris = Vec::new();
    for i in 0..3 {
        let j = (i + 1) % 3;
        tris.push(vec![p, b[i], b[j]]);
        tris.push(vec![p, c[i], c[j]]);
        tris.push(vec![b[i], b[j], c[j]]);
        tris.push(vec![b[i], c[i], c[j]]);
    }
    let k = Complex::new(labels, &tris).expect("pinched torus is valid");
    let pinch = vec!["p".to_string()];
    StratifiedComplex::from_vertex_strata("pinched-torus", k, 2, &[pinch.clone(), pinch]).expect("pinched torus strata")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_is_a_torus() {
        let t = seven_vertex_torus();
        assert_eq!(t.f_vector(), vec![7, 21, 14]);
        assert_eq!(t.betti(), vec![1, 2, 1]);
    }

    #[test]
    fn catalog_builds() {
        for name in NAMES {
            let s = by_name(name).unwrap();
            assert_eq!(s.name(), *name);
        }
        assert!(by_name("klein-bottle").is_err());
    }
}
