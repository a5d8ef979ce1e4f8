use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{Exact, Real, Scalar};

/// Second-order forward-mode dual number `v + d1 ε + d2 ε²/2`, carrying a
/// value with its first and second derivative along one direction.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual2<T> {
    pub v: T,
    pub d1: T,
    pub d2: T,
}

impl<T: Scalar> Dual2<T> {
    pub fn new(v: T, d1: T, d2: T) -> Self {
        Dual2 { v, d1, d2 }
    }

    /// The independent variable: derivative 1, second derivative 0.
    pub fn variable(v: T) -> Self {
        let d1 = v.one();
        let d2 = v.zero();
        Dual2 { v, d1, d2 }
    }

    pub fn constant(v: T) -> Self {
        let z = v.zero();
        Dual2 { v, d1: z.clone(), d2: z }
    }

    /// Applies `f` given `f(v)`, `f'(v)` and `f''(v)`.
    fn chain(&self, f0: T, f1: T, f2: T) -> Self {
        Dual2 {
            d1: f1.clone() * self.d1.clone(),
            d2: f2 * self.d1.clone() * self.d1.clone() + f1 * self.d2.clone(),
            v: f0,
        }
    }
}

impl<T: Scalar> Add for Dual2<T> {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Dual2 { v: self.v + r.v, d1: self.d1 + r.d1, d2: self.d2 + r.d2 }
    }
}

impl<T: Scalar> Sub for Dual2<T> {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Dual2 { v: self.v - r.v, d1: self.d1 - r.d1, d2: self.d2 - r.d2 }
    }
}

impl<T: Scalar> Mul for Dual2<T> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let two = self.v.lift_int(2);
        Dual2 {
            d2: self.v.clone() * r.d2.clone() + two * self.d1.clone() * r.d1.clone() + self.d2 * r.v.clone(),
            d1: self.v.clone() * r.d1 + self.d1 * r.v.clone(),
            v: self.v * r.v,
        }
    }
}

impl<T: Scalar> Div for Dual2<T> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, r: Self) -> Self {
        self * r.recip()
    }
}

impl<T: Scalar> Neg for Dual2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual2 { v: -self.v, d1: -self.d1, d2: -self.d2 }
    }
}

impl<T: Scalar> Scalar for Dual2<T> {
    fn lift_f64(&self, v: f64) -> Self {
        Dual2::constant(self.v.lift_f64(v))
    }
    fn lift_int(&self, v: i64) -> Self {
        Dual2::constant(self.v.lift_int(v))
    }
    fn lift_exact(&self, q: &Exact) -> Self {
        Dual2::constant(self.v.lift_exact(q))
    }
    fn lift_real(&self, r: &Real) -> Self {
        Dual2::constant(self.v.lift_real(r))
    }
    fn value_f64(&self) -> f64 {
        self.v.value_f64()
    }
    fn sqrt(&self) -> Self {
        let s = self.v.sqrt();
        let f1 = (s.clone() * s.lift_int(2)).recip();
        let f2 = -(f1.clone() / (self.v.clone() * self.v.lift_int(2)));
        self.chain(s, f1, f2)
    }
    fn exp(&self) -> Self {
        let e = self.v.exp();
        self.chain(e.clone(), e.clone(), e)
    }
    fn ln(&self) -> Self {
        let r = self.v.recip();
        let f2 = -(r.clone() * r.clone());
        self.chain(self.v.ln(), r, f2)
    }
    fn abs(&self) -> Self {
        if self.v.value_f64() < 0.0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero() && self.d1.is_zero() && self.d2.is_zero()
    }
    fn recip(&self) -> Self {
        let r = self.v.recip();
        let r2 = r.clone() * r.clone();
        let f2 = r2.clone() * r.clone() * r.lift_int(2);
        self.chain(r, -r2, f2)
    }
    fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return self.one();
        }
        let p = self.v.powi(n - 2);
        let f2 = p.clone() * p.lift_int(n as i64 * (n as i64 - 1));
        let f1 = p.clone() * self.v.clone() * p.lift_int(n as i64);
        let f0 = p * self.v.clone() * self.v.clone();
        self.chain(f0, f1, f2)
    }
}


#[cfg(test)]
mod properties {
    use super::*;
    use crate::mp::Scalar;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn powers_carry_derivatives(x in 0.1f64..3.0, k in 2i32..9) {
            let d = Dual2::variable(x).powi(k);
            let kf = k as f64;
            prop_assert!((d.d1 - kf * x.powi(k - 1)).abs() <= 1e-10 * d.d1.abs());
            prop_assert!((d.d2 - kf * (kf - 1.0) * x.powi(k - 2)).abs() <= 1e-10 * d.d2.abs());
        }
    }
}
