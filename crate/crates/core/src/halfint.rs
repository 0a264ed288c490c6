//! Exact half-integer arithmetic for pseudospin quantum numbers.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A half-integer stored as twice its value, so `j` and `m` arithmetic stays exact.
///
/// Serializes as the exact string spelling, "2" or "3/2".
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HalfInt(i32);

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        HalfInt::parse(&s).ok_or_else(|| D::Error::custom(format!("bad half-integer '{s}'")))
    }
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    /// Construct from twice the value: `from_twice(3)` is 3/2.
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(v: i32) -> Self {
        HalfInt(2 * v)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// `2j + 1`, the multiplet dimension, when `self` is a non-negative `j`.
    pub fn multiplet_dim(self) -> usize {
        debug_assert!(self.0 >= 0);
        (self.0 + 1) as usize
    }

    /// Parse "3/2", "1.5" or "2" style spellings.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().ok()?;
            let den: i32 = den.trim().parse().ok()?;
            if den == 2 {
                return Some(HalfInt(num));
            }
            if den == 1 {
                return Some(HalfInt::from_int(num));
            }
            return None;
        }
        if let Ok(v) = s.parse::<i32>() {
            return Some(HalfInt::from_int(v));
        }
        let v: f64 = s.parse().ok()?;
        let twice = (2.0 * v).round();
        if (2.0 * v - twice).abs() < 1e-9 {
            Some(HalfInt(twice as i32))
        } else {
            None
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}
