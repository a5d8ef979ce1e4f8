use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational parameter. Decimal inputs such as `0.1` are stored as
/// the rational they denote (`1/10`), never through binary floating point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(Rational);

impl Exact {
    pub fn new(num: i64, den: i64) -> Exact {
        Exact(Rational::from((num, den)))
    }

    pub fn int(v: i64) -> Exact {
        Exact(Rational::from(v))
    }

    pub fn from_rational(q: Rational) -> Exact {
        Exact(q)
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.cmp0() == std::cmp::Ordering::Equal
    }

    pub fn is_positive(&self) -> bool {
        self.0.cmp0() == std::cmp::Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.0.cmp0() == std::cmp::Ordering::Less
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    /// Parses `-2.5`, `1e-6`, `3/7` or `12`.
    pub fn parse(s: &str) -> Result<Exact> {
        let t = s.trim();
        let bad = || Error::Parse(s.to_string());
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n = Exact::parse(n)?;
            let d = Exact::parse(d)?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Exact(n.0 / d.0));
        }
        let (mantissa, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let all = format!("{int_part}{frac_part}");
        let mut num = Integer::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
        if neg {
            num = -num;
        }
        let scale = exp - frac_part.len() as i32;
        let pow10 = |e: u32| Integer::from(Integer::u_pow_u(10, e));
        let q = if scale >= 0 {
            Rational::from(num * pow10(scale as u32))
        } else {
            Rational::from((num, pow10((-scale) as u32)))
        };
        Ok(Exact(q))
    }
}

impl From<i64> for Exact {
    fn from(v: i64) -> Exact {
        Exact::int(v)
    }
}

impl FromStr for Exact {
    type Err = Error;
    fn from_str(s: &str) -> Result<Exact> {
        Exact::parse(s)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Exact, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Text(String),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Int(i) => i.to_string(),
            // Shortest round-trip formatting recovers the decimal the user wrote.
            Raw::Float(x) => format!("{x:?}"),
            Raw::Text(s) => s,
        };
        Exact::parse(&text).map_err(serde::de::Error::custom)
    }
}


#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn rationals_print_in_lowest_terms(p in -500i64..500, q in 1i64..500) {
            let e = Exact::new(p, q);
            prop_assert_eq!(Exact::parse(&e.to_string()).unwrap(), e);
        }
    }
}
