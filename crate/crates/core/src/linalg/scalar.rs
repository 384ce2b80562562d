use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Exact rational number.
///
/// Values that fit in `i64/i64` stay on the fast path; everything else is a
/// `BigRational`. The representation is canonical, so derived equality and
/// hashing are value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Q {
    Small(Ratio<i64>),
    Big(BigRational),
}

fn big_of(r: &Ratio<i64>) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn from_small(r: Ratio<i64>) -> Q {
    // i64::MIN cannot be negated; keep it out of the fast path
    if *r.numer() == i64::MIN || *r.denom() == i64::MIN {
        Q::Big(big_of(&r))
    } else {
        Q::Small(r)
    }
}

fn from_big(r: BigRational) -> Q {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Q::Small(Ratio::new_raw(n, d)),
        _ => Q::Big(r),
    }
}

impl Q {
    pub fn zero() -> Q {
        Q::Small(Ratio::zero())
    }

    pub fn one() -> Q {
        Q::Small(Ratio::one())
    }

    pub fn from_int(n: i64) -> Q {
        from_small(Ratio::from_integer(n))
    }

    pub fn new(n: i64, d: i64) -> Q {
        assert!(d != 0, "zero denominator");
        from_big(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Q::Small(r) => r.is_zero(),
            Q::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Q::Small(r) => r.is_one(),
            Q::Big(_) => false,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Q::Small(r) => r.is_negative(),
            Q::Big(r) => r.is_negative(),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(r) => big_of(r),
            Q::Big(r) => r.clone(),
        }
    }

    pub fn recip(&self) -> Q {
        assert!(!self.is_zero(), "reciprocal of zero");
        match self {
            Q::Small(r) => from_small(r.recip()),
            Q::Big(r) => from_big(r.recip()),
        }
    }

    pub fn is_big(&self) -> bool {
        matches!(self, Q::Big(_))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a Q> for &'a Q {
            type Output = Q;
            fn $m(self, rhs: &'a Q) -> Q {
                if let (Q::Small(a), Q::Small(b)) = (self, rhs) {
                    if let Some(r) = a.$checked(b) {
                        return from_small(r);
                    }
                }
                from_big(self.to_big().$m(rhs.to_big()))
            }
        }
        impl $tr for Q {
            type Output = Q;
            fn $m(self, rhs: Q) -> Q {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<'a> Div<&'a Q> for &'a Q {
    type Output = Q;
    fn div(self, rhs: &'a Q) -> Q {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Q::Small(a), Q::Small(b)) = (self, rhs) {
            if let Some(r) = a.checked_div(b) {
                return from_small(r);
            }
        }
        from_big(self.to_big() / rhs.to_big())
    }
}

impl Div for Q {
    type Output = Q;
    fn div(self, rhs: Q) -> Q {
        &self / &rhs
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        match self {
            Q::Small(r) => Q::Small(-r),
            Q::Big(r) => from_big(-r),
        }
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        -&self
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Q {
        Q::from_int(n)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(r) => write!(f, "{}", r),
            Q::Big(r) => write!(f, "{}", r),
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Q {
    type Err = String;
    fn from_str(s: &str) -> Result<Q, String> {
        let s = s.trim();
        let r = match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
                let d = BigInt::from_str(d.trim()).map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
                if d.is_zero() {
                    return Err(format!("zero denominator in {s:?}"));
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(
                BigInt::from_str(s).map_err(|e| format!("bad integer {s:?}: {e}"))?,
            ),
        };
        Ok(from_big(r))
    }
}

impl serde::Serialize for Q {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Q {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        Q::from_str(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Q::from_int(i64::MAX);
        let sum = &big + &big;
        assert!(sum.is_big());
        let back = &sum - &big;
        assert_eq!(back, big);
        assert!(!back.is_big());
    }

    #[test]
    fn min_value_never_small() {
        let m = Q::from_int(i64::MIN);
        assert!(m.is_big());
        assert_eq!(-(-m.clone()), m);
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "-3", "7/2", "-12/8", "123456789012345678901234567890/7"] {
            let q: Q = s.parse().unwrap();
            let again: Q = q.to_string().parse().unwrap();
            assert_eq!(q, again);
        }
        assert_eq!("-12/8".parse::<Q>().unwrap(), Q::new(-3, 2));
        assert!("1/0".parse::<Q>().is_err());
    }

    #[test]
    fn field_ops() {
        let a = Q::new(3, 4);
        let b = Q::new(-5, 6);
        assert_eq!(&a + &b, Q::new(-1, 12));
        assert_eq!(&a * &b, Q::new(-5, 8));
        assert_eq!(&a / &b, Q::new(-9, 10));
        assert_eq!(&(&a / &b) * &b, a);
    }
}
