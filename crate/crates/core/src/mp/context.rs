use serde::{Deserialize, Serialize};

use super::{Exact, Real};
use crate::error::{Error, Result};

/// Working precision: `digits` significant decimal digits plus `guard`
/// extra digits carried internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub digits: u32,
    pub guard: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { digits: 250, guard: 30 }
    }
}

impl PrecisionContext {
    pub const MIN_DIGITS: u32 = 50;

    pub fn new(digits: u32, guard: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Domain(format!(
                "precision of {digits} digits is below the minimum of {}",
                Self::MIN_DIGITS
            )));
        }
        Ok(PrecisionContext { digits, guard })
    }

    /// Binary precision used for every `Real` created from this context.
    pub fn bits(&self) -> u32 {
        (((self.digits + self.guard) as f64) * std::f64::consts::LOG2_10).ceil() as u32
    }

    /// Raises the digit count so that degree-`n` work keeps full accuracy
    /// despite Hankel ill-conditioning.
    pub fn for_degree(&self, n: usize) -> Self {
        let need = 12 * n as u32 + 100;
        PrecisionContext { digits: self.digits.max(need), guard: self.guard }
    }

    pub fn with_extra_digits(&self, extra: u32) -> Self {
        PrecisionContext { digits: self.digits + extra, guard: self.guard }
    }

    pub fn real(&self, v: f64) -> Real {
        Real::from_f64(self.bits(), v)
    }

    pub fn int(&self, v: i64) -> Real {
        Real::from_i64(self.bits(), v)
    }

    pub fn exact(&self, q: &Exact) -> Real {
        Real::from_exact(self.bits(), q)
    }

    pub fn parse(&self, s: &str) -> Result<Real> {
        Real::parse(self.bits(), s)
    }

    pub fn zero(&self) -> Real {
        self.int(0)
    }

    pub fn one(&self) -> Real {
        self.int(1)
    }

    pub fn pi(&self) -> Real {
        Real::pi(self.bits())
    }

    /// `10^e` at working precision.
    pub fn pow10(&self, e: i32) -> Real {
        self.int(10).powi(e)
    }

    /// Target relative accuracy, `10^-digits`.
    pub fn eps(&self) -> Real {
        self.pow10(-(self.digits as i32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_cover_digits_and_guard() {
        let ctx = PrecisionContext::default();
        assert!(ctx.bits() as f64 >= 280.0 * std::f64::consts::LOG2_10);
        assert!(PrecisionContext::new(20, 10).is_err());
    }

    #[test]
    fn degree_raise() {
        let ctx = PrecisionContext::default();
        assert_eq!(ctx.for_degree(10).digits, 250);
        assert_eq!(ctx.for_degree(60).digits, 820);
    }
}
