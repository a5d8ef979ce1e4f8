//! Second-order linear ODEs with rational coefficients.

mod finite;
mod heun;

pub use finite::{
    df_ode, gj_ode, jc_beta, jc_ode, jc_r_small, jc_r_small_expanded, spg_ode, AuxiliaryQuantities, DfBracket,
    DfExponent, DfReading, SpgReading,
};
pub use heun::{
    gj_eta_from_aux, heun_limit_convergence, heun_limit_residual, limit_ode, map_consistency, DfMap, EtaPower, GjEta, HeunConvergence, HeunLimit, LimitCase, LimitReading,
};

use serde_json::json;

use crate::error::{Error, Result};
use crate::mp::{Dual2, PrecisionContext, Real, Scalar};
use crate::poly::{Poly, RationalFn};
use crate::rk45::{self, Rk45Options};

/// Sample points away from every finite singularity used in this crate.
pub const GENERIC_X: [f64; 10] = [0.37, 0.61, 0.883, 1.13, 1.42, -0.53, -0.97, 1.71, 2.05, -1.29];

/// Absolute and normalized size of an ODE residual at one point.
#[derive(Clone, Debug)]
pub struct Residual {
    pub absolute: Real,
    /// `absolute / max(|term|)` over the three terms.
    pub normalized: Real,
}

impl Residual {
    fn from_terms(a: Real, b: Real, c: Real) -> Residual {
        let scale = a.abs().max(&b.abs()).max(&c.abs());
        let absolute = (&a + &b + &c).abs();
        let normalized = if scale.is_zero() { absolute.clone() } else { &absolute / &scale };
        Residual { absolute, normalized }
    }
}

/// `f'' + p(x) f' + q(x) f = 0`.
#[derive(Clone, Debug)]
pub struct RationalODE2 {
    pub p: RationalFn<Real>,
    pub q: RationalFn<Real>,
    pub label: String,
    pub ctx: PrecisionContext,
}

impl RationalODE2 {
    pub fn new(p: RationalFn<Real>, q: RationalFn<Real>, label: impl Into<String>, ctx: &PrecisionContext) -> Result<Self> {
        let zero_den = |r: &RationalFn<Real>| r.den.coeffs.iter().all(|c| c.is_zero());
        if zero_den(&p) || zero_den(&q) {
            return Err(Error::Domain("denominator vanishes identically".into()));
        }
        Ok(RationalODE2 { p, q, label: label.into(), ctx: *ctx })
    }

    fn check_pole(&self, x: &Real) -> Result<()> {
        let thr = self.ctx.pow10(-(self.ctx.digits as i32) / 4);
        for r in [&self.p, &self.q] {
            let d = r.pole_distance(x);
            if d < thr {
                return Err(Error::PoleProximity { x: x.to_sci(17), distance: d.to_sci(5) });
            }
        }
        Ok(())
    }

    /// `(p(x), q(x))`, rejecting points within `10^{-digits/4}` of a pole.
    pub fn coefficients(&self, x: &Real) -> Result<(Real, Real)> {
        self.check_pole(x)?;
        Ok((self.p.eval(x), self.q.eval(x)))
    }

    /// Coefficients in any scalar type, without the pole check.
    pub fn coefficients_at<X: Scalar>(&self, x: &X) -> (X, X) {
        (self.p.eval_lift(x), self.q.eval_lift(x))
    }

    pub fn residual(&self, f: &Real, f1: &Real, f2: &Real, x: &Real) -> Result<Residual> {
        let (p, q) = self.coefficients(x)?;
        Ok(Residual::from_terms(f2.clone(), p * f1, q * f))
    }

    /// Residual of a function given by a closure returning `(f, f', f'')`.
    pub fn residual_of(&self, f: impl Fn(&Real) -> (Real, Real, Real), x: &Real) -> Result<Residual> {
        let (v, d1, d2) = f(x);
        self.residual(&v, &d1, &d2, x)
    }

    /// Largest normalized residual over `xs`.
    pub fn max_normalized(&self, f: impl Fn(&Real) -> (Real, Real, Real), xs: &[f64]) -> Result<Real> {
        let mut worst = self.ctx.zero();
        for &x in xs {
            let r = self.residual_of(&f, &self.ctx.real(x))?;
            worst = worst.max(&r.normalized);
        }
        Ok(worst)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs = |p: &Poly<Real>| p.coeffs.iter().map(|c| c.to_sci(40)).collect::<Vec<_>>();
        json!({
            "label": self.label,
            "p": { "num": coeffs(&self.p.num), "den": coeffs(&self.p.den) },
            "q": { "num": coeffs(&self.q.num), "den": coeffs(&self.q.den) },
        })
    }
}

/// Heun-class operator `σ ∂² + τ ∂ + η` with polynomial coefficients.
#[derive(Clone, Debug)]
pub struct SigmaTauEta<T = Real> {
    pub sigma: Poly<T>,
    pub tau: Poly<T>,
    pub eta: Poly<T>,
    /// How the coefficients depend on the deformation parameter.
    pub time_param: String,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct DegreeReport {
    pub sigma: usize,
    pub tau: usize,
    pub sigma_eta: usize,
    /// `deg σ ≤ 2` and `deg ση ≤ 3`.
    pub case_b: bool,
    /// `deg σ ≤ 3`, `deg τ ≤ 2`, `deg ση ≤ 4`.
    pub heun_class: bool,
}

impl<T: Scalar> SigmaTauEta<T> {
    pub fn new(sigma: Poly<T>, tau: Poly<T>, eta: Poly<T>, time_param: impl Into<String>) -> Result<Self> {
        if sigma.coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::Domain("σ vanishes identically".into()));
        }
        Ok(SigmaTauEta { sigma, tau, eta, time_param: time_param.into() })
    }

    pub fn degrees(&self) -> DegreeReport {
        let (s, t) = (self.sigma.degree(), self.tau.degree());
        let se = (&self.sigma * &self.eta).degree();
        DegreeReport { sigma: s, tau: t, sigma_eta: se, case_b: s <= 2 && se <= 3, heun_class: s <= 3 && t <= 2 && se <= 4 }
    }

    /// The three terms `σf''`, `τf'`, `ηf` at `x`.
    pub fn terms(&self, f: &T, f1: &T, f2: &T, x: &T) -> (T, T, T) {
        (
            self.sigma.eval(x) * f2.clone(),
            self.tau.eval(x) * f1.clone(),
            self.eta.eval(x) * f.clone(),
        )
    }
}

impl SigmaTauEta<Real> {
    pub fn residual(&self, f: &Real, f1: &Real, f2: &Real, x: &Real) -> Residual {
        let (a, b, c) = self.terms(f, f1, f2, x);
        Residual::from_terms(a, b, c)
    }

    /// The same operator divided by σ.
    pub fn to_ode(&self, ctx: &PrecisionContext) -> Result<RationalODE2> {
        RationalODE2::new(
            RationalFn::new(self.tau.clone(), self.sigma.clone()),
            RationalFn::new(self.eta.clone(), self.sigma.clone()),
            self.time_param.clone(),
            ctx,
        )
    }
}

/// Sign in front of `αβ/(αβx − q)` in the equation for the weighted
/// derivative of a Heun function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeformedSign {
    Plus,
    Minus,
}

/// `y'' + (γ/x + δ/(x−1) + ε/(x−a)) y' + (αβx − q)/(x(x−1)(x−a)) y = 0`.
#[derive(Clone, Debug)]
pub struct HeunGeneral {
    pub gamma: Real,
    pub delta: Real,
    pub epsilon: Real,
    pub alpha: Real,
    pub beta: Real,
    pub q: Real,
    pub a: Real,
    pub ctx: PrecisionContext,
}

impl HeunGeneral {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        gamma: Real,
        delta: Real,
        epsilon: Real,
        alpha: Real,
        beta: Real,
        q: Real,
        a: Real,
        ctx: &PrecisionContext,
    ) -> Result<Self> {
        let fuchs = (&gamma + &delta + &epsilon - &alpha - &beta - 1i32).abs();
        let tol = ctx.pow10(-(ctx.digits as i32) + ctx.guard as i32);
        if fuchs > tol {
            return Err(Error::Domain(format!("Fuchs relation violated by {}", fuchs.to_sci(5))));
        }
        if a.is_zero() || (&a - 1i32).is_zero() {
            return Err(Error::Domain("singular point a must differ from 0 and 1".into()));
        }
        Ok(HeunGeneral { gamma, delta, epsilon, alpha, beta, q, a, ctx: *ctx })
    }

    /// Exponent parameters chosen from the other five via the Fuchs relation.
    pub fn with_epsilon_from_fuchs(
        gamma: Real,
        delta: Real,
        alpha: Real,
        beta: Real,
        q: Real,
        a: Real,
        ctx: &PrecisionContext,
    ) -> Result<Self> {
        let epsilon = &alpha + &beta + 1i32 - &gamma - &delta;
        HeunGeneral::new(gamma, delta, epsilon, alpha, beta, q, a, ctx)
    }

    fn x(&self) -> Poly<Real> {
        Poly::x(&self.ctx.one())
    }

    fn core_den(&self) -> Poly<Real> {
        let one = self.ctx.one();
        let x = self.x();
        &(&x * &Poly::linear_root(&one)) * &Poly::linear_root(&self.a)
    }

    fn accessory(&self) -> Poly<Real> {
        Poly::new(vec![-self.q.clone(), &self.alpha * &self.beta])
    }

    pub fn ode(&self) -> Result<RationalODE2> {
        let one = self.ctx.one();
        let x = self.x();
        let xm1 = Poly::linear_root(&one);
        let xma = Poly::linear_root(&self.a);
        let num = &(&(&xm1 * &xma).scale(&self.gamma) + &(&x * &xma).scale(&self.delta))
            + &(&x * &xm1).scale(&self.epsilon);
        let p = RationalFn::new(num, self.core_den());
        let q = RationalFn::new(self.accessory(), self.core_den());
        RationalODE2::new(p, q, "general Heun", &self.ctx)
    }

    /// Position `q/(αβ)` of the additional singularity.
    pub fn extra_singularity(&self) -> Result<Real> {
        let ab = &self.alpha * &self.beta;
        if ab.is_zero() {
            return Err(Error::Domain("αβ = 0: no additional singularity".into()));
        }
        Ok(&self.q / &ab)
    }

    /// Equation satisfied by `v = x^γ (x−1)^δ (x−a)^ε y'`.
    pub fn deformed_derivative(&self, sign: DeformedSign) -> Result<RationalODE2> {
        let ab = &self.alpha * &self.beta;
        if ab.is_zero() {
            return Err(Error::Domain("αβ = 0".into()));
        }
        let one = self.ctx.one();
        let x = self.x();
        let xm1 = Poly::linear_root(&one);
        let xma = Poly::linear_root(&self.a);
        let acc = self.accessory();
        let g = &one - &self.gamma;
        let d = &one - &self.delta;
        let e = &one - &self.epsilon;
        let three = &(&(&xm1 * &xma).scale(&g) + &(&x * &xma).scale(&d)) + &(&x * &xm1).scale(&e);
        let s = match sign {
            DeformedSign::Plus => ab.clone(),
            DeformedSign::Minus => -ab.clone(),
        };
        let num = &(&three * &acc) + &self.core_den().scale(&s);
        let p = RationalFn::new(num, &self.core_den() * &acc);
        let q = RationalFn::new(acc, self.core_den());
        let label = match sign {
            DeformedSign::Plus => "deformed Heun (+)",
            DeformedSign::Minus => "deformed Heun (−)",
        };
        RationalODE2::new(p, q, label, &self.ctx)
    }

    /// Integrates the Heun equation in double precision from `(x0, y0, y0')`
    /// through `xs`, forms `v` and its derivatives at each point and returns
    /// the largest normalized residual of the deformed equation.
    pub fn derivative_map_residual(
        &self,
        sign: DeformedSign,
        x0: f64,
        y0: [f64; 2],
        xs: &[f64],
        tol: f64,
    ) -> Result<f64> {
        let heun = self.ode()?;
        let deformed = self.deformed_derivative(sign)?;
        let rhs = |x: f64, y: &[f64], dy: &mut [f64]| {
            let (p, q) = heun.coefficients_at(&x);
            dy[0] = y[1];
            dy[1] = -p * y[1] - q * y[0];
            Ok(())
        };
        let samples = rk45::integrate(rhs, x0, &y0, xs, Rk45Options::tol(tol))?;
        let mut worst = 0.0f64;
        for &x in xs {
            let s = samples.iter().rev().find(|s| s.t == x).expect("stop sample");
            let (y, yp) = (s.y[0], s.y[1]);
            let (p, _) = heun.coefficients_at(&x);
            let qd = heun.q.eval_lift(&Dual2::variable(x));
            // v/W with W'/W = p: v' = -W q y, v'' = -W (p q y + q' y + q y').
            let v = yp;
            let v1 = -qd.v * y;
            let v2 = -(p * qd.v * y + qd.d1 * y + qd.v * yp);
            let (pv, qv) = deformed.coefficients_at(&x);
            let terms = [v2, pv * v1, qv * v];
            let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
            let r = (terms[0] + terms[1] + terms[2]).abs();
            worst = worst.max(if scale > 0.0 { r / scale } else { r });
        }
        Ok(worst)
    }
}
