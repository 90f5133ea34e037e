//! Exact half-integer quantities.
//!
//! Gromov products, slimness constants and internal-point positions in a
//! unit-edge metric graph all live in `½ℤ`. [`Half`] stores twice the value
//! so arithmetic stays in integers; it serializes as a plain JSON number.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Half(i64);

impl Half {
    pub const ZERO: Half = Half(0);

    /// Builds from a doubled value, e.g. `Half::from_twice(3)` is 1.5.
    pub const fn from_twice(twice: i64) -> Half {
        Half(twice)
    }

    pub const fn from_int(v: i64) -> Half {
        Half(2 * v)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Largest integer not above the value.
    pub fn floor(self) -> i64 {
        self.0.div_euclid(2)
    }

    pub fn ceil(self) -> i64 {
        -(-self.0).div_euclid(2)
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, rhs: Half) -> Half {
        Half(self.0 + rhs.0)
    }
}

impl Mul<i64> for Half {
    type Output = Half;
    fn mul(self, rhs: i64) -> Half {
        Half(self.0 * rhs)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.floor())
        }
    }
}

impl Serialize for Half {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_integer() {
            s.serialize_i64(self.0 / 2)
        } else {
            s.serialize_f64(self.as_f64())
        }
    }
}

impl<'de> Deserialize<'de> for Half {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Half, D::Error> {
        let v = f64::deserialize(d)?;
        let twice = (v * 2.0).round();
        if (twice - v * 2.0).abs() > 1e-9 {
            return Err(serde::de::Error::custom(format!("{v} is not a half-integer")));
        }
        Ok(Half(twice as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_and_display() {
        let h = Half::from_twice(7);
        assert_eq!(h.floor(), 3);
        assert_eq!(h.ceil(), 4);
        assert_eq!(h.to_string(), "3.5");
        assert_eq!(Half::from_int(2).to_string(), "2");
        assert_eq!(Half::from_twice(-1).floor(), -1);
    }

    #[test]
    fn json_round_trip() {
        let v = vec![Half::from_twice(3), Half::from_int(4)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[1.5,4]");
        let back: Vec<Half> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<Half>("0.25").is_err());
    }
}
