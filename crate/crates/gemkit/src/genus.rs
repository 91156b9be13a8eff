//! Exact half-integer values for regular genus computations.
//!
//! The genus of the surface into which a graph embeds regularly is an
//! integer for bipartite graphs (orientable surfaces) and may be a
//! half-integer for non-bipartite ones (half the non-orientable genus of the
//! supporting surface).  [`GenusValue`] stores twice the value, so all
//! arithmetic stays in `i64` and no rounding can occur.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

/// A rational number with denominator 1 or 2, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GenusValue {
    twice: i64,
}

impl GenusValue {
    pub const ZERO: GenusValue = GenusValue { twice: 0 };

    /// Builds a value from twice its magnitude: `from_twice(5)` is `5/2`.
    pub fn from_twice(twice: i64) -> Self {
        GenusValue { twice }
    }

    /// Builds an integer value.
    pub fn integer(value: i64) -> Self {
        GenusValue { twice: 2 * value }
    }

    /// Twice the value; always exact.
    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integral(self) -> bool {
        self.twice % 2 == 0
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(self) -> Option<i64> {
        if self.is_integral() {
            Some(self.twice / 2)
        } else {
            None
        }
    }
}

impl Add for GenusValue {
    type Output = GenusValue;
    fn add(self, rhs: GenusValue) -> GenusValue {
        GenusValue { twice: self.twice + rhs.twice }
    }
}

impl AddAssign for GenusValue {
    fn add_assign(&mut self, rhs: GenusValue) {
        self.twice += rhs.twice;
    }
}

impl Sub for GenusValue {
    type Output = GenusValue;
    fn sub(self, rhs: GenusValue) -> GenusValue {
        GenusValue { twice: self.twice - rhs.twice }
    }
}

impl Neg for GenusValue {
    type Output = GenusValue;
    fn neg(self) -> GenusValue {
        GenusValue { twice: -self.twice }
    }
}

impl Mul<i64> for GenusValue {
    type Output = GenusValue;
    fn mul(self, rhs: i64) -> GenusValue {
        GenusValue { twice: self.twice * rhs }
    }
}

impl Sum for GenusValue {
    fn sum<I: Iterator<Item = GenusValue>>(iter: I) -> GenusValue {
        iter.fold(GenusValue::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for GenusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

// `Debug` mirrors `Display`; the twice-encoding is an implementation detail.
impl fmt::Debug for GenusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GenusValue {
    type Err = String;

    /// Accepts `"3"` or `"5/2"`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Some(head) = s.strip_suffix("/2") {
            let twice: i64 = head.trim().parse().map_err(|_| format!("bad genus value `{s}`"))?;
            if twice % 2 == 0 {
                return Err(format!("non-reduced half-integer `{s}`"));
            }
            Ok(GenusValue { twice })
        } else {
            let value: i64 = s.trim().parse().map_err(|_| format!("bad genus value `{s}`"))?;
            Ok(GenusValue::integer(value))
        }
    }
}

impl Serialize for GenusValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GenusValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        raw.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_and_half_values_round_trip_through_strings() {
        for twice in [-5i64, -4, -1, 0, 1, 2, 7, 88] {
            let v = GenusValue::from_twice(twice);
            let back: GenusValue = v.to_string().parse().unwrap();
            assert_eq!(v, back, "round trip of {v}");
        }
        assert_eq!(GenusValue::integer(3).to_string(), "3");
        assert_eq!(GenusValue::from_twice(5).to_string(), "5/2");
    }

    #[test]
    fn as_integer_only_for_integral_values() {
        assert_eq!(GenusValue::integer(4).as_integer(), Some(4));
        assert_eq!(GenusValue::from_twice(9).as_integer(), None);
    }

    #[test]
    fn rejects_unreduced_halves() {
        assert!("4/2".parse::<GenusValue>().is_err());
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = GenusValue::from_twice(3); // 3/2
        let b = GenusValue::integer(2);
        assert_eq!((a + b).twice(), 7);
        assert_eq!((b - a).twice(), 1);
        assert_eq!((a * 4).twice(), 12);
        assert_eq!([a, b, a].into_iter().sum::<GenusValue>().twice(), 10);
    }
}
