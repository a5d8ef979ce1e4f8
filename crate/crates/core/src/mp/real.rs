use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::Exact;
use crate::error::{Error, Result};

/// An MPFR float. Binary operations run at the larger operand precision.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Real(pub(crate) Float);

impl Real {
    pub fn from_f64(bits: u32, v: f64) -> Real {
        Real(Float::with_val(bits, v))
    }

    pub fn from_i64(bits: u32, v: i64) -> Real {
        Real(Float::with_val(bits, v))
    }

    pub fn from_exact(bits: u32, q: &Exact) -> Real {
        Real(Float::with_val(bits, q.as_rational()))
    }

    pub fn from_float(f: Float) -> Real {
        Real(f)
    }

    pub fn parse(bits: u32, s: &str) -> Result<Real> {
        let p = Float::parse(s.trim()).map_err(|_| Error::Parse(s.to_string()))?;
        Ok(Real(Float::with_val(bits, p)))
    }

    pub fn pi(bits: u32) -> Real {
        Real(Float::with_val(bits, Constant::Pi))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn with_prec(&self, bits: u32) -> Real {
        Real(Float::with_val(bits, &self.0))
    }

    pub fn lift_f64(&self, v: f64) -> Real {
        Real::from_f64(self.prec(), v)
    }

    pub fn lift_int(&self, v: i64) -> Real {
        Real::from_i64(self.prec(), v)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn abs(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.abs_ref()))
    }

    pub fn sqrt(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.sqrt_ref()))
    }

    pub fn exp(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.exp_ref()))
    }

    pub fn ln(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.ln_ref()))
    }

    pub fn sinh(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.sinh_ref()))
    }

    pub fn cosh(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.cosh_ref()))
    }

    pub fn sin(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.sin_ref()))
    }

    pub fn recip(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.recip_ref()))
    }

    pub fn powi(&self, e: i32) -> Real {
        Real(Float::with_val(self.prec(), (&self.0).pow(e)))
    }

    pub fn pow(&self, e: &Real) -> Real {
        Real(Float::with_val(self.prec().max(e.prec()), (&self.0).pow(&e.0)))
    }

    pub fn gamma(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.gamma_ref()))
    }

    /// `ln Γ(x)` for `x > 0`.
    pub fn ln_gamma(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.ln_gamma_ref()))
    }

    pub fn zeta(&self) -> Real {
        Real(Float::with_val(self.prec(), self.0.zeta_ref()))
    }

    pub fn max(&self, other: &Real) -> Real {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn floor_i64(&self) -> i64 {
        let f = Float::with_val(self.prec(), self.0.floor_ref());
        f.to_integer().and_then(|i| i.to_i64()).unwrap_or(i64::MAX)
    }

    /// Scientific notation with `sig` significant digits.
    pub fn to_sci(&self, sig: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        if !self.0.is_finite() {
            return self.0.to_string();
        }
        self.0.to_string_radix(10, Some(sig.max(1)))
    }

    pub fn cmp_abs(&self, other: &Real) -> Ordering {
        self.0.cmp_abs(&other.0).unwrap_or(Ordering::Equal)
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_sci(sig))
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $tra:ident, $ma:ident, $op:tt) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                Real(Float::with_val(self.prec().max(rhs.prec()), &self.0 $op &rhs.0))
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self $op &rhs
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(mut self, rhs: &Real) -> Real {
                if self.prec() >= rhs.prec() {
                    self.0.$ma(&rhs.0);
                    self
                } else {
                    &self $op rhs
                }
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self $op &rhs
            }
        }
        impl $tr<i32> for &Real {
            type Output = Real;
            fn $m(self, rhs: i32) -> Real {
                Real(Float::with_val(self.prec(), &self.0 $op rhs))
            }
        }
        impl $tr<i32> for Real {
            type Output = Real;
            fn $m(mut self, rhs: i32) -> Real {
                self.0.$ma(rhs);
                self
            }
        }
        impl $tra<&Real> for Real {
            fn $ma(&mut self, rhs: &Real) {
                if self.prec() < rhs.prec() {
                    self.0.set_prec(rhs.prec());
                }
                self.0.$ma(&rhs.0);
            }
        }
        impl $tra<Real> for Real {
            fn $ma(&mut self, rhs: Real) {
                self.$ma(&rhs);
            }
        }
    };
}

real_binop!(Add, add, AddAssign, add_assign, +);
real_binop!(Sub, sub, SubAssign, sub_assign, -);
real_binop!(Mul, mul, MulAssign, mul_assign, *);

impl Div<&Real> for &Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        Real(Float::with_val(self.prec().max(rhs.prec()), &self.0 / &rhs.0))
    }
}
impl Div<Real> for &Real {
    type Output = Real;
    fn div(self, rhs: Real) -> Real {
        self / &rhs
    }
}
impl Div<&Real> for Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        &self / rhs
    }
}
impl Div<Real> for Real {
    type Output = Real;
    fn div(self, rhs: Real) -> Real {
        &self / &rhs
    }
}
impl Div<i32> for &Real {
    type Output = Real;
    fn div(self, rhs: i32) -> Real {
        Real(Float::with_val(self.prec(), &self.0 / rhs))
    }
}
impl Div<i32> for Real {
    type Output = Real;
    fn div(self, rhs: i32) -> Real {
        &self / rhs
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}
impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(Float::with_val(self.prec(), -&self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_precision_promotes() {
        let a = Real::from_i64(100, 1);
        let b = Real::from_i64(400, 3);
        let c = &a / &b;
        assert_eq!(c.prec(), 400);
        let back = c * 3;
        assert!((back - &a).abs().to_f64() < 1e-110);
    }

    #[test]
    fn elementary_functions() {
        let x = Real::from_i64(300, 2);
        assert!((x.sqrt().powi(2) - &x).abs().to_f64() < 1e-85);
        assert!((x.ln().exp() - &x).abs().to_f64() < 1e-85);
        let half = Real::from_f64(300, 0.5);
        let g = half.gamma();
        assert!((g.powi(2) - Real::pi(300)).abs().to_f64() < 1e-85);
    }
}
