//! Report envelope, exit codes and the text renderer.

use serde::Serialize;
use serde_json::Value;
use std::process::ExitCode;
use strathom::Error;

pub const STAGE_NOTE: &str = "stages k = 2..n: F0 is the constant sheaf Q on U_2 = X -Δ X_{n-2}; \
crossing U_k -> U_{k+1} applies Rι_* then τ≤p(k) with no shift, so ℍ^i(X, P) is compared with IH_{n-i}";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Mismatch,
}

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Contract(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Contract(_) | Error::Topology(_) => Failure::Contract(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Input(_) => ExitCode::from(2),
            Failure::Contract(_) => ExitCode::from(3),
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Contract(m) => m,
        }
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

#[derive(Serialize)]
struct Versions {
    cli: &'static str,
    library: &'static str,
}

/// What a command hands back: its verdict, the result body, and optionally
/// raw text (a DOT graph) printed instead of the envelope.
pub struct Body {
    pub verdict: Verdict,
    pub result: Value,
    pub raw_text: Option<String>,
}

impl Body {
    pub fn pass(result: impl Serialize) -> Body {
        Body { verdict: Verdict::Pass, result: to_value(result), raw_text: None }
    }

    pub fn judged(ok: bool, result: impl Serialize) -> Body {
        Body { verdict: if ok { Verdict::Pass } else { Verdict::Mismatch }, result: to_value(result), raw_text: None }
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    versions: Versions,
    command: &'a str,
    seed: u64,
    convention: &'static str,
    config: &'a Value,
    verdict: Verdict,
    result: &'a Value,
}

pub fn envelope(command: &str, seed: u64, config: &Value, body: &Body) -> Value {
    to_value(Envelope {
        tool: "strathom",
        versions: Versions { cli: env!("CARGO_PKG_VERSION"), library: strathom::VERSION },
        command,
        seed,
        convention: STAGE_NOTE,
        config,
        verdict: body.verdict,
        result: &body.result,
    })
}

/// Indented key: value listing of a JSON value.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")))
        }
        // Betti tables and other small flat maps go on one line
        Value::Object(m) if m.len() <= 12 && m.keys().all(|k| k.parse::<i64>().is_ok()) && m.values().all(Value::is_number) => {
            if m.is_empty() {
                Some("0".into())
            } else {
                Some(m.iter().map(|(k, x)| format!("{k}:{x}")).collect::<Vec<_>>().join(" "))
            }
        }
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn betti_maps_render_inline() {
        let t = render_text(&json!({"table": {"0": 1, "2": 1}, "empty": {}, "list": [1, 2]}));
        assert_eq!(t, "empty: 0\nlist: [1, 2]\ntable: 0:1 2:1\n");
    }

    #[test]
    fn nested_objects_indent() {
        let t = render_text(&json!({"a": {"b": "x"}, "rows": [{"k": 2}]}));
        assert_eq!(t, "a:\n  b: x\nrows:\n  -\n    k: 2\n");
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert!(matches!(Failure::from(Error::Input("x".into())), Failure::Input(_)));
        assert!(matches!(Failure::from(Error::Domain("x".into())), Failure::Input(_)));
        assert!(matches!(Failure::from(Error::Contract("x".into())), Failure::Contract(_)));
    }
}
