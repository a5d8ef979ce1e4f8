//! Isomonodromic deformation of Heun-class operators: gauge conditions,
//! Hamiltonians, the deformed equation and its compatibility system.

mod flow;

pub use flow::{hamilton_flow, hamilton_flow_stops, reversibility_error, FlowPoint, Trajectory, POLE_THRESHOLD};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::linode::{HeunLimit, SigmaTauEta};
use crate::mp::{Dual2, PrecisionContext, Real, Scalar};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    A,
    B,
}

/// Closed forms of the gauge function `m(t)`.
#[derive(Clone, Debug, PartialEq)]
pub enum GaugeForm {
    Constant(Real),
    InverseT,
    /// `1/(t(t−1))`.
    InverseTTMinusOne,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gauge {
    pub form: GaugeForm,
    pub scale: Real,
}

impl Gauge {
    /// The gauge under which the family's operator is isomonodromic.
    pub fn for_family(family: Family, ctx: &PrecisionContext) -> Gauge {
        let form = match family {
            Family::Spg => GaugeForm::InverseT,
            Family::Df => GaugeForm::Constant(-(ctx.int(2).sqrt()) / 2i32),
            Family::Gj => GaugeForm::Constant(ctx.int(2).sqrt()),
            Family::Jc => GaugeForm::InverseTTMinusOne,
        };
        Gauge { form, scale: ctx.one() }
    }

    pub fn scaled(&self, k: &Real) -> Gauge {
        Gauge { form: self.form.clone(), scale: &self.scale * k }
    }

    pub fn m<X: Scalar>(&self, t: &X) -> X {
        let base = match &self.form {
            GaugeForm::Constant(c) => t.lift_real(c),
            GaugeForm::InverseT => t.recip(),
            GaugeForm::InverseTTMinusOne => (t.clone() * (t.clone() - t.one())).recip(),
        };
        base * t.lift_real(&self.scale)
    }

    /// Times at which `m` is singular.
    pub fn singular_times(&self) -> Vec<f64> {
        match self.form {
            GaugeForm::Constant(_) => vec![],
            GaugeForm::InverseT => vec![0.0],
            GaugeForm::InverseTTMinusOne => vec![0.0, 1.0],
        }
    }

    pub fn describe(&self) -> String {
        let base = match &self.form {
            GaugeForm::Constant(c) => c.to_sci(17),
            GaugeForm::InverseT => "1/t".into(),
            GaugeForm::InverseTTMinusOne => "1/(t(t-1))".into(),
        };
        if (&self.scale - 1i32).is_zero() {
            base
        } else {
            format!("{} * {}", self.scale.to_sci(17), base)
        }
    }
}

/// `σ = (x − s) ρ` by synthetic division; the remainder `σ(s)` is returned too.
pub fn split_root<X: Scalar>(sigma: &Poly<X>, s: &X) -> (Poly<X>, X) {
    let c = &sigma.coeffs;
    let d = c.len() - 1;
    if d == 0 {
        return (Poly::constant(s.zero()), c[0].clone());
    }
    let mut q = vec![s.zero(); d];
    let mut acc = c[d].clone();
    for k in (0..d).rev() {
        q[k] = acc.clone();
        acc = acc * s.clone() + c[k].clone();
    }
    (Poly::new(q), acc)
}

/// Non-autonomous Hamiltonian `H(t, λ, μ)` evaluated in any scalar type.
pub trait HamiltonianSystem {
    fn h<X: Scalar>(&self, t: &X, lam: &X, mu: &X) -> X;

    fn dh_dmu<X: Scalar>(&self, t: &X, lam: &X, mu: &X) -> X {
        self.h(&Dual2::constant(t.clone()), &Dual2::constant(lam.clone()), &Dual2::variable(mu.clone())).d1
    }

    fn dh_dlambda<X: Scalar>(&self, t: &X, lam: &X, mu: &X) -> X {
        self.h(&Dual2::constant(t.clone()), &Dual2::variable(lam.clone()), &Dual2::constant(mu.clone())).d1
    }

    /// `λ̈` along the flow, from the total `t`-derivative of `∂H/∂μ`.
    fn lambda_ddot<X: Scalar>(&self, t: &X, lam: &X, mu: &X) -> X {
        let ld = self.dh_dmu(t, lam, mu);
        let md = -self.dh_dlambda(t, lam, mu);
        let z = t.zero();
        let tt = Dual2::new(t.clone(), t.one(), z.clone());
        let ll = Dual2::new(lam.clone(), ld, z.clone());
        let mm = Dual2::new(mu.clone(), md, z);
        self.dh_dmu(&tt, &ll, &mm).d1
    }

    /// Times the flow must not cross.
    fn singular_times(&self) -> Vec<f64> {
        vec![]
    }
}

/// A family's Hamiltonian: `H = m(η(λ) + c(λ)μ + σ(λ)μ²)` with
/// `c = τ − σ'` (case B) or `c = τ − (λ−s)ρ'` (case A, `s = t`).
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    pub limit: HeunLimit,
    pub case: CaseTag,
    pub gauge: Gauge,
}

impl Hamiltonian {
    pub fn new(limit: HeunLimit, case: CaseTag, gauge: Gauge) -> Self {
        Hamiltonian { limit, case, gauge }
    }

    pub fn for_family(family: Family, n: usize, alpha: Real, ctx: &PrecisionContext) -> Self {
        let case = if family == Family::Jc { CaseTag::A } else { CaseTag::B };
        Hamiltonian::new(HeunLimit::new(family, n, alpha), case, Gauge::for_family(family, ctx))
    }

    /// Verifies the gauge conditions and builds the Hamiltonian only if they hold.
    pub fn checked(limit: HeunLimit, case: CaseTag, gauge: Gauge, t: &Real, ctx: &PrecisionContext) -> Result<Self> {
        let report = match case {
            CaseTag::B => check_case_b(&limit, &gauge, t, ctx)?,
            CaseTag::A => check_case_a(&limit, &gauge, t, T2Reading::MBoth, ctx)?,
        };
        if !report.passed {
            return Err(Error::CaseCheckFailed(format!("case {:?} with m = {}", case, gauge.describe())));
        }
        Ok(Hamiltonian::new(limit, case, gauge))
    }

    /// Coefficients `(c0, c1, c2)` of `H = c0 + c1 μ + c2 μ²`.
    pub fn coefficients<X: Scalar>(&self, t: &X, lam: &X) -> (X, X, X) {
        let op = self.limit.at(t);
        let m = self.gauge.m(t);
        let c1 = match self.case {
            CaseTag::B => op.tau.eval(lam) - op.sigma.derivative().eval(lam),
            CaseTag::A => {
                let (rho, _) = split_root(&op.sigma, t);
                op.tau.eval(lam) - (lam.clone() - t.clone()) * rho.derivative().eval(lam)
            }
        };
        (m.clone() * op.eta.eval(lam), m.clone() * c1, m * op.sigma.eval(lam))
    }

    /// The unique `μ` with `∂H/∂μ = λ̇`.
    pub fn mu_from_lambda_dot<X: Scalar>(&self, t: &X, lam: &X, lambda_dot: &X) -> Result<X> {
        let (_, c1, c2) = self.coefficients(t, lam);
        if c2.is_zero() {
            return Err(Error::Domain("σ(λ) = 0: μ is not determined by λ̇".into()));
        }
        Ok((lambda_dot.clone() - c1) / (c2.lift_int(2) * c2))
    }
}

impl HamiltonianSystem for Hamiltonian {
    fn h<X: Scalar>(&self, t: &X, lam: &X, mu: &X) -> X {
        let (c0, c1, c2) = self.coefficients(t, lam);
        c0 + c1 * mu.clone() + c2 * mu.clone() * mu.clone()
    }

    fn dh_dmu<X: Scalar>(&self, t: &X, lam: &X, mu: &X) -> X {
        let (_, c1, c2) = self.coefficients(t, lam);
        c1 + c2.lift_int(2) * c2 * mu.clone()
    }

    fn singular_times(&self) -> Vec<f64> {
        self.gauge.singular_times()
    }
}

/// Largest normalized discrepancy of one identity over the check grid.
#[derive(Clone, Debug)]
pub struct IdentityResidual {
    pub name: String,
    pub max_residual: Real,
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case: CaseTag,
    pub gauge: String,
    pub identities: Vec<IdentityResidual>,
    pub threshold: Real,
    pub passed: bool,
}

impl CaseReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "case": format!("{:?}", self.case),
            "m": self.gauge,
            "threshold": self.threshold.to_sci(3),
            "passed": self.passed,
            "identities": self.identities.iter().map(|i| json!({
                "name": i.name, "max_residual": i.max_residual.to_sci(5),
            })).collect::<Vec<_>>(),
        })
    }
}

pub const GRID_X: [f64; 7] = [0.23, 0.61, 1.37, 2.11, -0.73, 3.3, -1.9];
pub const GRID_LAMBDA: [f64; 7] = [0.41, 0.97, 1.73, -0.57, 2.6, -1.4, 0.13];

fn rel_gap(a: &Real, b: &Real) -> Real {
    let s = a.abs().max(&b.abs()).max(&a.one());
    (a - b).abs() / s
}

fn finish(case: CaseTag, gauge: &Gauge, identities: Vec<IdentityResidual>, ctx: &PrecisionContext) -> CaseReport {
    let threshold = ctx.pow10(-(ctx.digits as i32) + 60);
    let passed = identities.iter().all(|i| i.max_residual < threshold);
    CaseReport { case, gauge: gauge.describe(), identities, threshold, passed }
}

/// `(value, ∂_t)` of a polynomial coefficient family at `x`.
fn with_dot(p: &Poly<Dual2<Real>>, x: &Real) -> (Real, Real) {
    let v = p.eval(&Dual2::constant(x.clone()));
    (v.v, v.d1)
}

fn op_at_t(limit: &HeunLimit, t: &Real) -> SigmaTauEta<Dual2<Real>> {
    limit.at(&Dual2::variable(t.clone()))
}

/// Case B conditions `τ̇/σ = m τ''/2` and `η̇(x) − η̇(λ) = m (ση)'''/6 (x−λ)`.
pub fn check_case_b(limit: &HeunLimit, gauge: &Gauge, t: &Real, ctx: &PrecisionContext) -> Result<CaseReport> {
    let t = t.with_prec(ctx.bits());
    let op = op_at_t(limit, &t);
    let plain = limit.at(&t);
    let deg = plain.degrees();
    if !deg.case_b {
        return Err(Error::Domain(format!(
            "case B needs deg σ ≤ 2 and deg ση ≤ 3, found {} and {}",
            deg.sigma, deg.sigma_eta
        )));
    }
    if op.sigma.coeffs.iter().any(|c| !c.d1.is_zero()) {
        return Err(Error::Domain("case B needs σ independent of t".into()));
    }
    let m = gauge.m(&t);
    let tau2 = plain.tau.derivative().derivative();
    let se3 = (&plain.sigma * &plain.eta).derivative().derivative().derivative();
    let mut r1 = ctx.zero();
    let mut r2 = ctx.zero();
    for &xf in &GRID_X {
        let x = ctx.real(xf);
        let (_, tau_dot) = with_dot(&op.tau, &x);
        let lhs = tau_dot / plain.sigma.eval(&x);
        let rhs = &m * tau2.eval(&x) / 2i32;
        r1 = r1.max(&rel_gap(&lhs, &rhs));
        for &lf in &GRID_LAMBDA {
            let lam = ctx.real(lf);
            let lhs = with_dot(&op.eta, &x).1 - with_dot(&op.eta, &lam).1;
            let rhs = &m * se3.eval(&x) / 6i32 * (&x - &lam);
            r2 = r2.max(&rel_gap(&lhs, &rhs));
        }
    }
    let ids = vec![
        IdentityResidual { name: "tau_dot_over_sigma".into(), max_residual: r1 },
        IdentityResidual { name: "eta_dot_difference".into(), max_residual: r2 },
    ];
    Ok(finish(CaseTag::B, gauge, ids, ctx))
}

/// Which terms of the second case-A condition the factor `m` multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum T2Reading {
    /// `m` on the first bracket only.
    MFirstOnly,
    /// `m` on both the bracket and the `(λ−s)/(x−λ)²` term.
    MBoth,
}

/// Case A conditions for `σ = (x − s)ρ` with `s = t`.
pub fn check_case_a(
    limit: &HeunLimit,
    gauge: &Gauge,
    t: &Real,
    reading: T2Reading,
    ctx: &PrecisionContext,
) -> Result<CaseReport> {
    let t = t.with_prec(ctx.bits());
    let td = Dual2::variable(t.clone());
    let op = limit.at(&td);
    let plain = limit.at(&t);
    let (rho_d, rem) = split_root(&op.sigma, &td);
    if !rem.v.is_zero() && rem.v.abs() > ctx.pow10(-(ctx.digits as i32)) {
        return Err(Error::Domain("σ(s) ≠ 0".into()));
    }
    let rho = rho_d.map(|c| c.v.clone());
    if rho.degree() > 2 {
        return Err(Error::Domain("deg ρ > 2".into()));
    }
    let s = &t;
    let m = gauge.m(&t);
    let eta1 = plain.eta.derivative();
    let rho_eta = &rho * &plain.eta;
    let rho_eta1 = rho_eta.derivative();
    // ∂_t(τ/σ) at fixed x, as a dual quotient.
    let tau_over_sigma_dot = |x: &Real| {
        let xd = Dual2::constant(x.clone());
        (op.tau.eval(&xd) / op.sigma.eval(&xd)).d1
    };
    let sigma_log_dot = |x: &Real| {
        let (v, d) = with_dot(&op.sigma, x);
        d / v
    };
    let tau_s = plain.tau.eval(s);
    let rho_s = rho.eval(s);
    let mut r1 = ctx.zero();
    let mut r2 = ctx.zero();
    let mut r3 = ctx.zero();
    for &xf in &GRID_X {
        let x = ctx.real(xf);
        let xs = &x - s;
        let rhs1 = &m * &tau_s / (&xs * &xs);
        r1 = r1.max(&rel_gap(&tau_over_sigma_dot(&x), &rhs1));
        let eta_x = plain.eta.eval(&x);
        let (_, eta_dot_x) = with_dot(&op.eta, &x);
        for &lf in &GRID_LAMBDA {
            let lam = ctx.real(lf);
            let ls = &lam - s;
            let xl = &x - &lam;
            let eta_l = plain.eta.eval(&lam);
            let (_, eta_dot_l) = with_dot(&op.eta, &lam);
            let de = &eta_x - &eta_l;
            let lhs2 = sigma_log_dot(&x) * &de - &eta_dot_x + &eta_dot_l;
            let first = &de * &ls * rho.eval(&x) / (&xl * &xs) - eta1.eval(&lam) * rho.eval(&lam);
            let second = &ls / (&xl * &xl)
                * (rho_eta.eval(&x) * 2i32 - rho_eta.eval(&lam) * 2i32 - (rho_eta1.eval(&x) + rho_eta1.eval(&lam)) * &xl);
            let rhs2 = match reading {
                T2Reading::MFirstOnly => &m * first + second,
                T2Reading::MBoth => &m * (first + second),
            };
            r2 = r2.max(&rel_gap(&lhs2, &rhs2));
            let lhs3 = sigma_log_dot(&x) - sigma_log_dot(&lam);
            let rhs3 = &m * &rho_s * &xl / (&xs * &ls);
            r3 = r3.max(&rel_gap(&lhs3, &rhs3));
        }
    }
    let ids = vec![
        IdentityResidual { name: "T1".into(), max_residual: r1 },
        IdentityResidual { name: format!("T2 ({reading:?})"), max_residual: r2 },
        IdentityResidual { name: "T3".into(), max_residual: r3 },
    ];
    Ok(finish(CaseTag::A, gauge, ids, ctx))
}

/// Which `σ` appears in the `μ²` term of `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QConvention {
    /// `−μ²σ(λ)`.
    SigmaLambda,
    /// `−μ²σ(x)`.
    SigmaX,
}

/// `φ'' + p φ' + q φ = 0` with an apparent singularity at `λ`, plus the
/// compatibility pair `(a, b)` of the deformation.
#[derive(Clone, Debug)]
pub struct DeformedEquation {
    pub hamiltonian: Hamiltonian,
    pub convention: QConvention,
    /// Flips the sign of `a`.
    pub negate_a: bool,
}

/// Residuals of the two compatibility conditions at one point.
#[derive(Clone, Debug)]
pub struct CompatResidual {
    pub r1: Real,
    pub r2: Real,
}

impl DeformedEquation {
    pub fn new(hamiltonian: Hamiltonian, convention: QConvention) -> Self {
        DeformedEquation { hamiltonian, convention, negate_a: false }
    }

    pub fn with_negated_a(self) -> Self {
        DeformedEquation { negate_a: true, ..self }
    }

    /// `(p, q, a, b)` at `x` for the state `(t, λ, μ)`.
    pub fn pqab<X: Scalar>(&self, t: &X, lam: &X, mu: &X, x: &X) -> (X, X, X, X) {
        let h = &self.hamiltonian;
        let op = h.limit.at(t);
        let m = h.gauge.m(t);
        let sx = op.sigma.eval(x);
        let sl = op.sigma.eval(lam);
        let xl = x.clone() - lam.clone();
        let p = op.tau.eval(x) / sx.clone() - xl.recip();
        let c1 = op.tau.eval(lam) - op.sigma.derivative().eval(lam);
        let sq = match self.convention {
            QConvention::SigmaLambda => sl.clone(),
            QConvention::SigmaX => sx.clone(),
        };
        let q = (op.eta.eval(x) - op.eta.eval(lam) - mu.clone() * c1 - mu.clone() * mu.clone() * sq
            + mu.clone() * sl.clone() / xl.clone())
            / sx.clone();
        let (a, b) = match h.case {
            CaseTag::B => (m.clone() * sx / xl.clone(), -(m * sl * mu.clone()) / xl),
            CaseTag::A => {
                let (rho, _) = split_root(&op.sigma, t);
                let ls = lam.clone() - t.clone();
                (
                    m.clone() * ls.clone() * rho.eval(x) / xl.clone(),
                    -(m * ls * rho.eval(lam) * mu.clone()) / xl,
                )
            }
        };
        let a = if self.negate_a { -a } else { a };
        (p, q, a, b)
    }

    /// Residuals of `ṗ − ap' + 2b' − pa' + a''` and
    /// `q̇ + pb' − 2qa' − q'a + b''` at `(t, x)`, with `λ̇, μ̇` given.
    pub fn residual_with_rates(&self, t: &Real, lam: &Real, mu: &Real, rates: (&Real, &Real), x: &Real) -> CompatResidual {
        let c = |v: &Real| Dual2::constant(v.clone());
        let (px, qx, ax, bx) = self.pqab(&c(t), &c(lam), &c(mu), &Dual2::variable(x.clone()));
        let z = t.zero();
        let tt = Dual2::new(t.clone(), t.one(), z.clone());
        let ll = Dual2::new(lam.clone(), rates.0.clone(), z.clone());
        let mm = Dual2::new(mu.clone(), rates.1.clone(), z);
        let (pt, qt, _, _) = self.pqab(&tt, &ll, &mm, &c(x));
        let r1 = pt.d1 - &ax.v * &px.d1 + bx.d1.clone() * 2i32 - &px.v * &ax.d1 + &ax.d2;
        let r2 = qt.d1 + &px.v * &bx.d1 - &qx.v * &ax.d1 * 2i32 - &qx.d1 * &ax.v + &bx.d2;
        CompatResidual { r1, r2 }
    }

    /// Residuals with `λ̇, μ̇` from the Hamilton equations.
    pub fn residual(&self, t: &Real, lam: &Real, mu: &Real, x: &Real) -> CompatResidual {
        let ld = self.hamiltonian.dh_dmu(t, lam, mu);
        let md = -self.hamiltonian.dh_dlambda(t, lam, mu);
        self.residual_with_rates(t, lam, mu, (&ld, &md), x)
    }

    /// Residuals with the singularity held fixed.
    pub fn residual_frozen(&self, t: &Real, lam: &Real, mu: &Real, x: &Real) -> CompatResidual {
        let z = t.zero();
        self.residual_with_rates(t, lam, mu, (&z, &z), x)
    }
}
