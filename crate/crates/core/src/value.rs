use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact non-negative rational Hurwitz number, printed as `p` or `p/q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HurwitzValue(pub BigRational);

impl HurwitzValue {
    pub fn zero() -> Self {
        HurwitzValue(BigRational::zero())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        HurwitzValue(BigRational::from_integer(n.into()))
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        HurwitzValue(BigRational::new(num.into(), den.into()))
    }

    /// `count / d!`.
    pub fn from_count(count: &BigUint, d: u32) -> Self {
        let fact: BigUint = (1..=d).map(BigUint::from).product();
        HurwitzValue(BigRational::new(
            BigInt::from(count.clone()),
            BigInt::from(fact),
        ))
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    /// Parity of an integral value; `None` for proper fractions.
    pub fn parity(&self) -> Option<u8> {
        self.to_integer()
            .map(|n| if (n % 2u8).is_zero() { 0 } else { 1 })
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl std::ops::Add for HurwitzValue {
    type Output = HurwitzValue;
    fn add(self, rhs: Self) -> Self {
        HurwitzValue(self.0 + rhs.0)
    }
}

impl std::iter::Sum for HurwitzValue {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(HurwitzValue::zero(), |a, b| a + b)
    }
}

impl fmt::Display for HurwitzValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for HurwitzValue {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: BigInt = n.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
        let d: BigInt = d.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("{s:?}: zero denominator"));
        }
        Ok(HurwitzValue(BigRational::new(n, d)))
    }
}

impl Serialize for HurwitzValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HurwitzValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_and_parses() {
        let v = HurwitzValue::ratio(2, 4);
        assert_eq!(v.to_string(), "1/2");
        assert_eq!("1/2".parse::<HurwitzValue>().unwrap(), v);
        assert_eq!(HurwitzValue::from_integer(4).to_string(), "4");
        assert_eq!(HurwitzValue::from_count(&BigUint::from(24u32), 3).to_string(), "4");
        assert!("1/0".parse::<HurwitzValue>().is_err());
    }

    #[test]
    fn parity_of_integers_only() {
        assert_eq!(HurwitzValue::from_integer(3).parity(), Some(1));
        assert_eq!(HurwitzValue::ratio(1, 2).parity(), None);
    }
}
