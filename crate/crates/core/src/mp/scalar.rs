use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{Exact, Real};

/// Field operations shared by `f64`, `Real` and `Dual2<T>`, so the same
/// formula code runs in double precision, multiprecision, or with
/// derivative propagation. Constants are embedded relative to an existing
/// value, which carries the precision.
pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lift_f64(&self, v: f64) -> Self;
    fn lift_exact(&self, q: &Exact) -> Self;
    fn lift_real(&self, r: &Real) -> Self;
    fn value_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn abs(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn lift_int(&self, v: i64) -> Self {
        self.lift_f64(v as f64)
    }

    fn zero(&self) -> Self {
        self.lift_int(0)
    }

    fn one(&self) -> Self {
        self.lift_int(1)
    }

    fn recip(&self) -> Self {
        self.one() / self.clone()
    }

    fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn scale(&self, k: i64) -> Self {
        self.clone() * self.lift_int(k)
    }
}

impl Scalar for f64 {
    fn lift_f64(&self, v: f64) -> f64 {
        v
    }
    fn lift_exact(&self, q: &Exact) -> f64 {
        q.to_f64()
    }
    fn lift_real(&self, r: &Real) -> f64 {
        r.to_f64()
    }
    fn value_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> f64 {
        f64::sqrt(*self)
    }
    fn exp(&self) -> f64 {
        f64::exp(*self)
    }
    fn ln(&self) -> f64 {
        f64::ln(*self)
    }
    fn abs(&self) -> f64 {
        f64::abs(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn powi(&self, n: i32) -> f64 {
        f64::powi(*self, n)
    }
}

impl Scalar for Real {
    fn lift_f64(&self, v: f64) -> Real {
        Real::lift_f64(self, v)
    }
    fn lift_int(&self, v: i64) -> Real {
        Real::lift_int(self, v)
    }
    fn lift_exact(&self, q: &Exact) -> Real {
        Real::from_exact(self.prec(), q)
    }
    fn lift_real(&self, r: &Real) -> Real {
        r.with_prec(self.prec())
    }
    fn value_f64(&self) -> f64 {
        self.to_f64()
    }
    fn sqrt(&self) -> Real {
        Real::sqrt(self)
    }
    fn exp(&self) -> Real {
        Real::exp(self)
    }
    fn ln(&self) -> Real {
        Real::ln(self)
    }
    fn abs(&self) -> Real {
        Real::abs(self)
    }
    fn is_zero(&self) -> bool {
        Real::is_zero(self)
    }
    fn recip(&self) -> Real {
        Real::recip(self)
    }
    fn powi(&self, n: i32) -> Real {
        Real::powi(self, n)
    }
}
