//! JSON formats for complexes and stratifications.

use crate::error::{Error, Result};
use crate::scx::Complex;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub maximal_simplices: Vec<Vec<String>>,
}

impl ComplexJson {
    pub fn to_complex(&self) -> Result<Complex> {
        let vs: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        let ms: Vec<Vec<&str>> = self.maximal_simplices.iter().map(|m| m.iter().map(String::as_str).collect()).collect();
        Complex::from_labeled(&vs, &ms)
    }

    /// Canonical form: vertices and simplices sorted lexicographically by label.
    pub fn from_complex(k: &Complex) -> ComplexJson {
        let mut vertices = k.labels();
        vertices.sort();
        let mut maximal_simplices: Vec<Vec<String>> = k
            .maximal_simplices()
            .into_iter()
            .map(|i| {
                let mut s: Vec<String> = k.simplex(i).iter().map(|&v| k.label(v)).collect();
                s.sort();
                s
            })
            .collect();
        maximal_simplices.sort();
        ComplexJson { vertices, maximal_simplices }
    }
}

pub fn parse_complex(text: &str) -> Result<Complex> {
    let j: ComplexJson = serde_json::from_str(text).map_err(|e| Error::Input(format!("complex JSON: {e}")))?;
    j.to_complex()
}

pub fn write_complex(k: &Complex) -> String {
    serde_json::to_string_pretty(&ComplexJson::from_complex(k)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scx::boundary_of_simplex;

    #[test]
    fn roundtrip() {
        let k = boundary_of_simplex(3);
        let text = write_complex(&k);
        let back = parse_complex(&text).unwrap();
        assert_eq!(back, k);
        assert_eq!(write_complex(&back), text);
    }

    #[test]
    fn loader_closes_faces() {
        let k = parse_complex(r#"{"vertices":["x","y","z"],"maximal_simplices":[["z","x","y"]]}"#).unwrap();
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
        assert!(parse_complex(r#"{"vertices":["x"],"maximal_simplices":[["q"]]}"#).is_err());
        assert!(parse_complex("not json").is_err());
    }
}
