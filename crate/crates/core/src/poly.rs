//! Dense univariate polynomials and rational functions over any `Scalar`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::mp::{Real, Scalar};

/// Polynomial with ascending coefficients. Always holds at least one
/// coefficient so constants can be lifted from it.
#[derive(Clone, Debug)]
pub struct Poly<T> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs a coefficient");
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Poly { coeffs: vec![c] }
    }

    /// The monomial `x`, with precision taken from `like`.
    pub fn x(like: &T) -> Self {
        Poly { coeffs: vec![like.zero(), like.one()] }
    }

    /// `x - r`.
    pub fn linear_root(r: &T) -> Self {
        Poly { coeffs: vec![-r.clone(), r.one()] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Degree after discarding leading coefficients below `tol` in magnitude.
    pub fn degree_tol(&self, tol: f64) -> usize {
        let mut d = self.coeffs.len() - 1;
        while d > 0 && self.coeffs[d].value_f64().abs() <= tol {
            d -= 1;
        }
        d
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.coeffs[0].zero())
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = self.coeffs.last().unwrap().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Poly::constant(self.coeffs[0].zero());
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::constant(self.coeffs[0].one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Converts coefficients to another scalar type.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl Poly<Real> {
    /// Evaluates with coefficients lifted into the scalar type of `x`.
    pub fn eval_lift<X: Scalar>(&self, x: &X) -> X {
        let mut acc = x.lift_real(self.coeffs.last().unwrap());
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * x.clone() + x.lift_real(c);
        }
        acc
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, r: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(r.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + r.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, r: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(r.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - r.coeff(k)).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, r: &Poly<T>) -> Poly<T> {
        let zero = self.coeffs[0].zero();
        let mut out = vec![zero; self.coeffs.len() + r.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in r.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

/// Quotient of two polynomials, kept unreduced.
#[derive(Clone, Debug)]
pub struct RationalFn<T> {
    pub num: Poly<T>,
    pub den: Poly<T>,
}

impl<T: Scalar> RationalFn<T> {
    pub fn new(num: Poly<T>, den: Poly<T>) -> Self {
        RationalFn { num, den }
    }

    pub fn poly(p: Poly<T>) -> Self {
        let one = p.coeffs[0].one();
        RationalFn { num: p, den: Poly::constant(one) }
    }

    pub fn constant(c: T) -> Self {
        RationalFn::poly(Poly::constant(c))
    }

    pub fn eval(&self, x: &T) -> T {
        self.num.eval(x) / self.den.eval(x)
    }

    pub fn scale(&self, s: &T) -> Self {
        RationalFn { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn recip(&self) -> Self {
        RationalFn { num: self.den.clone(), den: self.num.clone() }
    }

    pub fn derivative(&self) -> Self {
        let n1 = &self.num.derivative() * &self.den;
        let n2 = &self.num * &self.den.derivative();
        RationalFn { num: &n1 - &n2, den: &self.den * &self.den }
    }
}

impl RationalFn<Real> {
    pub fn eval_lift<X: Scalar>(&self, x: &X) -> X {
        self.num.eval_lift(x) / self.den.eval_lift(x)
    }

    /// Newton estimate `|den(x)/den'(x)|` of the distance to the nearest
    /// denominator root. Underestimates the distance to multiple roots.
    pub fn pole_distance(&self, x: &Real) -> Real {
        let d = self.den.eval(x);
        let dd = self.den.derivative().eval(x);
        if d.is_zero() {
            return d;
        }
        if dd.is_zero() {
            return x.lift_f64(f64::INFINITY);
        }
        (d / dd).abs()
    }
}

impl<T: Scalar> Add for &RationalFn<T> {
    type Output = RationalFn<T>;
    fn add(self, r: &RationalFn<T>) -> RationalFn<T> {
        if self.den.degree() == 0 && r.den.degree() == 0 {
            let a = self.num.scale(&r.den.coeffs[0]);
            let b = r.num.scale(&self.den.coeffs[0]);
            return RationalFn { num: &a + &b, den: &self.den * &r.den };
        }
        RationalFn {
            num: &(&self.num * &r.den) + &(&r.num * &self.den),
            den: &self.den * &r.den,
        }
    }
}

impl<T: Scalar> Sub for &RationalFn<T> {
    type Output = RationalFn<T>;
    fn sub(self, r: &RationalFn<T>) -> RationalFn<T> {
        self + &-r
    }
}

impl<T: Scalar> Mul for &RationalFn<T> {
    type Output = RationalFn<T>;
    fn mul(self, r: &RationalFn<T>) -> RationalFn<T> {
        RationalFn { num: &self.num * &r.num, den: &self.den * &r.den }
    }
}

impl<T: Scalar> Neg for &RationalFn<T> {
    type Output = RationalFn<T>;
    fn neg(self) -> RationalFn<T> {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::Dual2;

    #[test]
    fn arithmetic_and_derivatives() {
        let x = Poly::x(&1.0_f64);
        let p = &(&x * &x) - &Poly::constant(2.0);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.eval(&3.0), 7.0);
        assert_eq!(p.derivative().eval(&3.0), 6.0);
        let r = RationalFn::new(Poly::constant(1.0), x.clone());
        let s = &r + &RationalFn::poly(x.clone());
        assert!((s.eval(&2.0) - 2.5).abs() < 1e-15);
        assert!((s.derivative().eval(&2.0) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn dual_evaluation_gives_derivatives() {
        let p = Poly::new(vec![1.0, -3.0, 0.0, 2.0]);
        let y = p.map(|c| Dual2::constant(*c)).eval(&Dual2::variable(1.5));
        let d = p.derivative();
        assert!((y.d1 - d.eval(&1.5)).abs() < 1e-14);
        assert!((y.d2 - d.derivative().eval(&1.5)).abs() < 1e-14);
    }

    #[test]
    fn pole_distance_estimate() {
        let x = Poly::x(&Real::from_i64(128, 0));
        let den = &x - &Poly::constant(Real::from_i64(128, 1));
        let r = RationalFn::new(Poly::constant(Real::from_i64(128, 1)), den);
        let d = r.pole_distance(&Real::from_f64(128, 1.25));
        assert!((d.to_f64() - 0.25).abs() < 1e-30);
    }
}
