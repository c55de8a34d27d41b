use std::fmt;
use std::ops::Add;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A degree of disbelief: a nonnegative integer, or `INFINITY` for an impossible event.
///
/// Addition saturates into `INFINITY` (`INFINITY + k = INFINITY`), and the derived
/// ordering places `INFINITY` above every finite rank, so `min` behaves as expected.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Kappa(u32);

impl Kappa {
    pub const ZERO: Kappa = Kappa(0);
    pub const ONE: Kappa = Kappa(1);
    pub const INFINITY: Kappa = Kappa(u32::MAX);
    /// Largest representable finite rank.
    pub const MAX_FINITE: u32 = u32::MAX - 1;

    pub fn finite(rank: u32) -> Kappa {
        Kappa(rank.min(Self::MAX_FINITE))
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn is_infinite(self) -> bool {
        self == Self::INFINITY
    }

    pub fn is_finite(self) -> bool {
        !self.is_infinite()
    }

    /// The finite rank, or `None` for `INFINITY`.
    pub fn rank(self) -> Option<u32> {
        self.is_finite().then_some(self.0)
    }

    /// `self - other` for conditioning: `κ(x|y) = κ(x ∧ y) - κ(y)`.
    ///
    /// Returns `None` when `other` is `INFINITY` (conditioning on an impossible event)
    /// or when `other > self`.
    pub fn checked_sub(self, other: Kappa) -> Option<Kappa> {
        if other.is_infinite() {
            return None;
        }
        if self.is_infinite() {
            return Some(Self::INFINITY);
        }
        self.0.checked_sub(other.0).map(Kappa)
    }

    /// Shift a rank down by a finite amount, leaving `INFINITY` in place.
    pub fn shift_down(self, by: u32) -> Kappa {
        if self.is_infinite() {
            self
        } else {
            Kappa(self.0.saturating_sub(by))
        }
    }
}

impl Add for Kappa {
    type Output = Kappa;

    fn add(self, rhs: Kappa) -> Kappa {
        if self.is_infinite() || rhs.is_infinite() {
            Kappa::INFINITY
        } else {
            Kappa::finite(self.0.saturating_add(rhs.0))
        }
    }
}

impl std::iter::Sum for Kappa {
    fn sum<I: Iterator<Item = Kappa>>(iter: I) -> Kappa {
        iter.fold(Kappa::ZERO, Add::add)
    }
}

impl From<u32> for Kappa {
    fn from(rank: u32) -> Self {
        Kappa::finite(rank)
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rank() {
            Some(rank) => write!(f, "{rank}"),
            None => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "κ{self}")
    }
}

impl std::str::FromStr for Kappa {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "INFINITY" | "infinity" | "Infinity" => Ok(Kappa::INFINITY),
            _ => s
                .parse::<u32>()
                .ok()
                .filter(|rank| *rank <= Kappa::MAX_FINITE)
                .map(Kappa)
                .ok_or_else(|| format!("`{s}` is not a kappa rank")),
        }
    }
}

impl Serialize for Kappa {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.rank() {
            Some(rank) => serializer.serialize_u32(rank),
            None => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Kappa {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct KappaVisitor;

        impl Visitor<'_> for KappaVisitor {
            type Value = Kappa;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Kappa, E> {
                u32::try_from(v)
                    .ok()
                    .filter(|rank| *rank <= Kappa::MAX_FINITE)
                    .map(Kappa)
                    .ok_or_else(|| E::custom(format!("kappa rank {v} out of range")))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Kappa, E> {
                if v < 0 {
                    return Err(E::custom(format!("kappa rank {v} is negative")));
                }
                self.visit_u64(v as u64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Kappa, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(KappaVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(Kappa::INFINITY + Kappa::finite(3), Kappa::INFINITY);
        assert_eq!(Kappa::finite(2) + Kappa::finite(3), Kappa::finite(5));
    }

    #[test]
    fn min_prefers_finite() {
        assert_eq!(Kappa::INFINITY.min(Kappa::finite(7)), Kappa::finite(7));
        assert!(Kappa::finite(Kappa::MAX_FINITE) < Kappa::INFINITY);
    }

    #[test]
    fn conditioning_subtraction() {
        assert_eq!(Kappa::finite(3).checked_sub(Kappa::ONE), Some(Kappa::finite(2)));
        assert_eq!(Kappa::INFINITY.checked_sub(Kappa::ONE), Some(Kappa::INFINITY));
        assert_eq!(Kappa::ONE.checked_sub(Kappa::INFINITY), None);
        assert_eq!(Kappa::INFINITY.checked_sub(Kappa::INFINITY), None);
    }

    #[test]
    fn json_forms() {
        let parsed: Vec<Kappa> = serde_json::from_str(r#"[0, 4, "inf", "INFINITY"]"#).unwrap();
        assert_eq!(parsed, vec![Kappa::ZERO, Kappa::finite(4), Kappa::INFINITY, Kappa::INFINITY]);
        assert_eq!(serde_json::to_string(&parsed).unwrap(), r#"[0,4,"inf","inf"]"#);
        assert!(serde_json::from_str::<Kappa>("-1").is_err());
        assert!(serde_json::from_str::<Kappa>("1.5").is_err());
    }
}
