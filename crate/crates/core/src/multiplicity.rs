//! Edge multiplicities in `ℕ ∪ {ω}`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Number of parallel edges between two vertices: a natural number or `ω`.
///
/// `ω` is how an infinite emitter is written down as finite data. Ordering puts
/// every finite value below `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Finite(u64),
    Omega,
}

pub use Multiplicity::Omega;

impl Multiplicity {
    pub const ZERO: Multiplicity = Multiplicity::Finite(0);
    pub const ONE: Multiplicity = Multiplicity::Finite(1);

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn is_omega(self) -> bool {
        self == Omega
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Multiplicity::Finite(n) => Some(n),
            Omega => None,
        }
    }

    /// `min(self, cap)` as a plain count, with `ω` mapped to `cap`.
    pub fn capped(self, cap: u64) -> u64 {
        match self {
            Multiplicity::Finite(n) => n.min(cap),
            Omega => cap,
        }
    }
}

impl Default for Multiplicity {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<u64> for Multiplicity {
    fn from(n: u64) -> Self {
        Multiplicity::Finite(n)
    }
}

impl PartialOrd for Multiplicity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Multiplicity {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => a.cmp(b),
            (Multiplicity::Finite(_), Omega) => Ordering::Less,
            (Omega, Multiplicity::Finite(_)) => Ordering::Greater,
            (Omega, Omega) => Ordering::Equal,
        }
    }
}

impl Add for Multiplicity {
    type Output = Multiplicity;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => {
                Multiplicity::Finite(a.checked_add(b).expect("multiplicity overflow"))
            }
            _ => Omega,
        }
    }
}

impl Mul for Multiplicity {
    type Output = Multiplicity;

    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => {
                Multiplicity::Finite(a.checked_mul(b).expect("multiplicity overflow"))
            }
            // 0·ω = 0
            (Multiplicity::Finite(0), Omega) | (Omega, Multiplicity::Finite(0)) => Self::ZERO,
            _ => Omega,
        }
    }
}

impl Sum for Multiplicity {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, m| acc + m)
    }
}

impl<'a> Sum<&'a Multiplicity> for Multiplicity {
    fn sum<I: Iterator<Item = &'a Multiplicity>>(iter: I) -> Self {
        iter.copied().sum()
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Omega => f.write_str("inf"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(n) => serializer.serialize_u64(*n),
            Omega => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Multiplicity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct MultVisitor;

        impl Visitor<'_> for MultVisitor {
            type Value = Multiplicity;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Multiplicity, E> {
                Ok(Multiplicity::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Multiplicity, E> {
                u64::try_from(v)
                    .map(Multiplicity::Finite)
                    .map_err(|_| E::custom(format!("negative multiplicity {v}")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Multiplicity, E> {
                match v {
                    "inf" | "ω" | "omega" => Ok(Omega),
                    other => other
                        .parse::<u64>()
                        .map(Multiplicity::Finite)
                        .map_err(|_| E::custom(format!("bad multiplicity {other:?}"))),
                }
            }
        }

        deserializer.deserialize_any(MultVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn universe() -> Vec<Multiplicity> {
        (0..=10).map(Multiplicity::Finite).chain([Omega]).collect()
    }

    #[test]
    fn arithmetic_table() {
        for a in universe() {
            for b in universe() {
                let sum = a + b;
                let prod = a * b;
                match (a, b) {
                    (Multiplicity::Finite(x), Multiplicity::Finite(y)) => {
                        assert_eq!(sum, Multiplicity::Finite(x + y));
                        assert_eq!(prod, Multiplicity::Finite(x * y));
                    }
                    _ => {
                        assert_eq!(sum, Omega, "{a} + {b}");
                        if a.is_zero() || b.is_zero() {
                            assert_eq!(prod, Multiplicity::ZERO, "{a} * {b}");
                        } else {
                            assert_eq!(prod, Omega, "{a} * {b}");
                        }
                    }
                }
                assert_eq!(a + b, b + a);
                assert_eq!(a * b, b * a);
                for c in universe() {
                    assert_eq!((a + b) + c, a + (b + c));
                    assert_eq!((a * b) * c, a * (b * c));
                }
            }
        }
    }

    #[test]
    fn ordering_puts_omega_on_top() {
        assert!(Multiplicity::Finite(u64::MAX) < Omega);
        assert_eq!(universe().into_iter().max(), Some(Omega));
    }

    #[test]
    fn serde_tokens() {
        let v: Vec<Multiplicity> = serde_json::from_str(r#"[3, "inf", "2"]"#).unwrap();
        assert_eq!(v, vec![3.into(), Omega, 2.into()]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[3,"inf",2]"#);
        assert!(serde_json::from_str::<Multiplicity>("-1").is_err());
        assert!(serde_json::from_str::<Multiplicity>("\"lots\"").is_err());
    }
}
