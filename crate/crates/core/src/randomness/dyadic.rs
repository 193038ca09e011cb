use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::Nat;

/// `numerator / 2^exponent` in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: Nat,
    exponent: u64,
}

impl DyadicRational {
    pub fn new(numerator: Nat, exponent: u64) -> Self {
        if numerator.is_zero() {
            return DyadicRational {
                numerator,
                exponent: 0,
            };
        }
        let twos = numerator.trailing_zeros().unwrap_or(0).min(exponent);
        DyadicRational {
            numerator: numerator >> twos,
            exponent: exponent - twos,
        }
    }

    pub fn one() -> Self {
        Self::new(Nat::one(), 0)
    }

    pub fn zero() -> Self {
        Self::new(Nat::zero(), 0)
    }

    /// `2^-e`.
    pub fn half_pow(e: u64) -> Self {
        Self::new(Nat::one(), e)
    }

    pub fn numerator(&self) -> &Nat {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Nearest `f64`; for display and statistics only.
    pub fn to_f64(&self) -> f64 {
        let num = self.numerator.to_f64().unwrap_or(f64::INFINITY);
        num * 2f64.powi(-(self.exponent.min(i32::MAX as u64) as i32))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    num: serde_json::Value,
    exp: u64,
}

impl Serialize for DyadicRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let num = match self.numerator.to_u64() {
            Some(n) => serde_json::Value::from(n),
            None => serde_json::Value::from(self.numerator.to_string()),
        };
        Wire {
            num,
            exp: self.exponent,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DyadicRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = Wire::deserialize(deserializer)?;
        let num = match &wire.num {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(Nat::from)
                .ok_or_else(|| de::Error::custom("numerator must be a natural number"))?,
            serde_json::Value::String(s) => s.parse().map_err(de::Error::custom)?,
            _ => return Err(de::Error::custom("numerator must be a number or string")),
        };
        Ok(DyadicRational::new(num, wire.exp))
    }
}

impl std::ops::Mul<u32> for DyadicRational {
    type Output = DyadicRational;

    fn mul(self, rhs: u32) -> DyadicRational {
        DyadicRational::new(self.numerator * rhs, self.exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let d = DyadicRational::new(Nat::from(12u32), 5);
        assert_eq!(d, DyadicRational::new(Nat::from(3u32), 3));
        assert_eq!(
            DyadicRational::new(Nat::from(8u32), 3),
            DyadicRational::one()
        );
        assert_eq!(DyadicRational::new(Nat::zero(), 9).exponent(), 0);
    }

    #[test]
    fn wire_format() {
        let d = DyadicRational::half_pow(3);
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"num":1,"exp":3}"#);
        let back: DyadicRational = serde_json::from_str(r#"{"num":6,"exp":4}"#).unwrap();
        assert_eq!(back, DyadicRational::half_pow(3) * 3u32);
    }
}
