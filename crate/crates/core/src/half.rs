use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A non-negative multiple of one half, stored as twice its value.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct HalfIntegral {
    doubled: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "not a half-integer: {0:?} (expected \"k/2\", an integer, or a decimal ending in .0 or .5)"
)]
pub struct ParseHalfError(pub String);

impl HalfIntegral {
    pub const ZERO: HalfIntegral = HalfIntegral { doubled: 0 };

    pub const fn from_doubled(doubled: u64) -> Self {
        HalfIntegral { doubled }
    }

    pub const fn from_integer(k: u64) -> Self {
        HalfIntegral { doubled: 2 * k }
    }

    pub const fn doubled(self) -> u64 {
        self.doubled
    }

    pub const fn is_integer(self) -> bool {
        self.doubled.is_multiple_of(2)
    }

    pub const fn floor(self) -> u64 {
        self.doubled / 2
    }

    pub const fn ceil(self) -> u64 {
        self.doubled.div_ceil(2)
    }

    pub fn to_f64(self) -> f64 {
        self.doubled as f64 / 2.0
    }

    /// `self + 1/2`.
    pub const fn next(self) -> Self {
        HalfIntegral {
            doubled: self.doubled + 1,
        }
    }
}

impl fmt::Display for HalfIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

impl FromStr for HalfIntegral {
    type Err = ParseHalfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseHalfError(s.to_string());
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            if den != "2" {
                return Err(err());
            }
            let k: u64 = parse_digits(num).ok_or_else(err)?;
            return Ok(HalfIntegral::from_doubled(k));
        }
        if let Some((whole, frac)) = t.split_once('.') {
            let w: u64 = parse_digits(whole).ok_or_else(err)?;
            let half = match frac {
                "0" => 0,
                "5" => 1,
                _ => return Err(err()),
            };
            return Ok(HalfIntegral::from_doubled(2 * w + half));
        }
        let k: u64 = parse_digits(t).ok_or_else(err)?;
        Ok(HalfIntegral::from_integer(k))
    }
}

fn parse_digits(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let h: HalfIntegral = "7/2".parse().unwrap();
        assert_eq!(h.doubled(), 7);
        assert_eq!(h.to_string(), "7/2");
        assert_eq!("3.5".parse::<HalfIntegral>().unwrap(), h);
        assert_eq!("4.0".parse::<HalfIntegral>().unwrap().to_string(), "4");
        assert_eq!("2".parse::<HalfIntegral>().unwrap().doubled(), 4);
        for bad in ["3.25", "7/3", "-1/2", "x", "", "1.", ".5", "3.50"] {
            assert!(bad.parse::<HalfIntegral>().is_err(), "{bad}");
        }
    }

    #[test]
    fn floor_ceil() {
        let h = HalfIntegral::from_doubled(5);
        assert_eq!((h.floor(), h.ceil(), h.is_integer()), (2, 3, false));
        let k = HalfIntegral::from_doubled(6);
        assert_eq!((k.floor(), k.ceil(), k.is_integer()), (3, 3, true));
        assert_eq!(h.next(), k);
    }
}
