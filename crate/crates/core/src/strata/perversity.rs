use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Integer values p(k) for codimensions k = 2..=n.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Perversity {
    name: String,
    n: usize,
    values: Vec<i32>,
    gm_strict: bool,
}

impl Perversity {
    /// `values[i]` is p(i + 2).
    pub fn new(name: &str, n: usize, values: Vec<i32>, gm_strict: bool) -> Result<Perversity> {
        if n < 2 {
            return Err(Error::Input(format!("perversities need n ≥ 2, got {n}")));
        }
        if values.len() != n - 1 {
            return Err(Error::Input(format!("expected {} perversity values for n = {n}, got {}", n - 1, values.len())));
        }
        if gm_strict {
            if values[0] != 0 {
                return Err(Error::Input(format!("GM perversity needs p(2) = 0, got {}", values[0])));
            }
            for (i, w) in values.windows(2).enumerate() {
                if w[1] != w[0] && w[1] != w[0] + 1 {
                    return Err(Error::Input(format!("GM growth violated between p({}) and p({})", i + 2, i + 3)));
                }
            }
        }
        Ok(Perversity { name: name.to_string(), n, values, gm_strict })
    }

    pub fn zero(n: usize) -> Perversity {
        Perversity::new("zero", n, vec![0; n.max(2) - 1], true).expect("zero perversity")
    }

    pub fn top(n: usize) -> Perversity {
        Perversity::new("top", n, (2..=n as i32).map(|k| k - 2).collect(), true).expect("top perversity")
    }

    pub fn lower_middle(n: usize) -> Perversity {
        Perversity::new("lower-middle", n, (2..=n as i32).map(|k| (k - 2) / 2).collect(), true).expect("lower middle")
    }

    pub fn upper_middle(n: usize) -> Perversity {
        Perversity::new("upper-middle", n, (2..=n as i32).map(|k| (k - 1) / 2).collect(), true).expect("upper middle")
    }

    pub fn presets(n: usize) -> Vec<Perversity> {
        vec![Perversity::zero(n), Perversity::lower_middle(n), Perversity::upper_middle(n), Perversity::top(n)]
    }

    pub fn by_name(name: &str, n: usize) -> Result<Perversity> {
        match name {
            "zero" | "0" => Ok(Perversity::zero(n)),
            "top" | "t" => Ok(Perversity::top(n)),
            "lower-middle" | "m" => Ok(Perversity::lower_middle(n)),
            "upper-middle" | "n" => Ok(Perversity::upper_middle(n)),
            other if other.contains('=') => {
                // k2=0,k3=1: every codimension 2..=n named exactly once
                let mut vals = vec![None; n.saturating_sub(1)];
                for part in other.split(',') {
                    let bad = || Error::Input(format!("bad perversity entry {part:?} in {other:?}"));
                    let (k, v) = part.trim().split_once('=').ok_or_else(bad)?;
                    let k: usize = k.trim().strip_prefix('k').ok_or_else(bad)?.parse().map_err(|_| bad())?;
                    let v: i32 = v.trim().parse().map_err(|_| bad())?;
                    let slot = k.checked_sub(2).and_then(|i| vals.get_mut(i)).ok_or_else(|| Error::Input(format!("codimension {k} outside 2..={n}")))?;
                    if slot.replace(v).is_some() {
                        return Err(Error::Input(format!("codimension {k} given twice")));
                    }
                }
                let vals = vals
                    .into_iter()
                    .enumerate()
                    .map(|(i, v)| v.ok_or_else(|| Error::Input(format!("perversity {other:?} misses k{}", i + 2))))
                    .collect::<Result<Vec<_>>>()?;
                Perversity::new("custom", n, vals, true)
            }
            other => {
                // comma separated custom values p(2),...,p(n)
                let vals: std::result::Result<Vec<i32>, _> = other.split(',').map(|s| s.trim().parse::<i32>()).collect();
                match vals {
                    Ok(v) => Perversity::new("custom", n, v, true),
                    Err(_) => Err(Error::Input(format!("unknown perversity {other:?}"))),
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_gm(&self) -> bool {
        self.gm_strict
    }

    /// p(k) for 2 ≤ k ≤ n.
    pub fn at(&self, k: usize) -> i32 {
        assert!((2..=self.n).contains(&k), "codimension {k} outside 2..={}", self.n);
        self.values[k - 2]
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    /// Dual perversity t − p.
    pub fn complement(&self) -> Perversity {
        let vals = (2..=self.n).map(|k| k as i32 - 2 - self.at(k)).collect();
        Perversity::new(&format!("dual-{}", self.name), self.n, vals, self.gm_strict).expect("dual of GM is GM")
    }
}

impl fmt::Debug for Perversity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.name, self.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_formulas() {
        assert_eq!(Perversity::zero(3).values(), &[0, 0]);
        assert_eq!(Perversity::top(3).values(), &[0, 1]);
        assert_eq!(Perversity::lower_middle(4).values(), &[0, 0, 1]);
        assert_eq!(Perversity::upper_middle(4).values(), &[0, 1, 1]);
        for n in 2..7 {
            for p in Perversity::presets(n) {
                assert!(p.is_gm());
                assert_eq!(p.complement().complement().values(), p.values());
            }
        }
    }

    #[test]
    fn gm_validation() {
        assert!(Perversity::new("bad", 3, vec![1, 1], true).is_err());
        assert!(Perversity::new("bad", 4, vec![0, 2, 2], true).is_err());
        assert!(Perversity::new("loose", 4, vec![0, 2, 2], false).is_ok());
        assert!(Perversity::new("short", 4, vec![0], false).is_err());
        assert_eq!(Perversity::by_name("0,1", 3).unwrap().values(), &[0, 1]);
        assert!(Perversity::by_name("bogus", 3).is_err());
    }

    #[test]
    fn keyed_values() {
        assert_eq!(Perversity::by_name("k2=0,k3=1", 3).unwrap().values(), &[0, 1]);
        assert_eq!(Perversity::by_name("k3=1, k2=0", 3).unwrap().values(), &[0, 1]);
        assert!(Perversity::by_name("k2=0", 3).is_err());
        assert!(Perversity::by_name("k2=0,k2=0,k3=1", 3).is_err());
        assert!(Perversity::by_name("k2=0,k4=1", 3).is_err());
        assert!(Perversity::by_name("k2=1,k3=1", 3).is_err());
    }
}
