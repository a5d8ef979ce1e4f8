//! Large-n Heun-class limits and their convergence against exact polynomials.

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::{RationalODE2, SigmaTauEta};
use crate::error::Result;
use crate::family::Family;
use crate::moments::moment_table;
use crate::mp::{Dual2, Exact, PrecisionContext, Real, Scalar};
use crate::orthopoly::{build_recurrence, RecurrenceTable};
use crate::poly::{Poly, RationalFn};
use crate::weights::WeightSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaPower {
    ThreeHalves,
    TwoThirds,
}

/// Constant term `4√root n^power / 9` of the GJ limit operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GjEta {
    pub root: u32,
    pub power: EtaPower,
}

impl GjEta {
    /// `4√3 n^{3/2}/9`.
    pub const DISPLAYED: GjEta = GjEta { root: 3, power: EtaPower::ThreeHalves };
    pub const ALL: [GjEta; 4] = [
        GjEta { root: 3, power: EtaPower::ThreeHalves },
        GjEta { root: 3, power: EtaPower::TwoThirds },
        GjEta { root: 6, power: EtaPower::ThreeHalves },
        GjEta { root: 6, power: EtaPower::TwoThirds },
    ];

    pub fn value<X: Scalar>(&self, n: usize, like: &X) -> X {
        let nn = like.lift_int(n as i64);
        let p = match self.power {
            EtaPower::ThreeHalves => nn.clone() * nn.sqrt(),
            EtaPower::TwoThirds => (nn.ln() * like.lift_int(2) / like.lift_int(3)).exp(),
        };
        like.lift_int(4) * like.lift_int(self.root as i64).sqrt() * p / like.lift_int(9)
    }
}

/// Change of variables taking the DF limit equation to the Heun variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DfMap {
    /// `u(x) = P(2^{1/2} x^{1/2})`.
    Displayed,
    /// `u(x) = P(2^{-1/4} x^{1/2})`.
    QuarterRoot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitReading {
    /// Constant of the GJ Heun operator.
    pub gj_eta: GjEta,
    /// Coefficient of `1/(x−t)` in the GJ limit equation, `4√root n^power/9`.
    pub gj_qhat: GjEta,
    pub df_map: DfMap,
}

impl LimitReading {
    pub const GJ_QHAT_DISPLAYED: GjEta = GjEta { root: 6, power: EtaPower::TwoThirds };
}

impl Default for LimitReading {
    fn default() -> Self {
        LimitReading { gj_eta: GjEta::DISPLAYED, gj_qhat: LimitReading::GJ_QHAT_DISPLAYED, df_map: DfMap::Displayed }
    }
}

/// A family's limit operator at fixed `n` and `α`, as a function of the
/// deformation parameter.
#[derive(Clone, Debug)]
pub struct HeunLimit {
    pub family: Family,
    pub n: usize,
    pub alpha: Real,
    pub gj_eta: GjEta,
}

impl HeunLimit {
    pub fn new(family: Family, n: usize, alpha: Real) -> Self {
        HeunLimit { family, n, alpha, gj_eta: GjEta::DISPLAYED }
    }

    pub fn with_gj_eta(mut self, eta: GjEta) -> Self {
        self.gj_eta = eta;
        self
    }

    /// `(σ, τ, η)` at deformation parameter `t` (`t̂ = a²` for JC).
    pub fn at<X: Scalar>(&self, t: &X) -> SigmaTauEta<X> {
        let c = |v: f64| t.lift_f64(v);
        let al = t.lift_real(&self.alpha);
        let r2 = c(2.0).sqrt();
        let n = t.lift_int(self.n as i64);
        let z = c(0.0);
        let (sigma, tau, eta, label) = match self.family {
            Family::Spg => (
                Poly::new(vec![z.clone(), z.clone(), c(1.0)]),
                Poly::new(vec![r2.clone(), (al.clone() + c(1.0)) / c(2.0), -(r2.clone() * t.clone()) / c(2.0)]),
                Poly::new(vec![z, r2 * t.clone() * (n * c(2.0) + al) / c(8.0)]),
                "t with n, α fixed",
            ),
            Family::Df => (
                Poly::new(vec![z.clone(), c(1.0)]),
                Poly::new(vec![al + c(1.0), r2 * t.clone() / c(2.0), c(-1.0)]),
                Poly::constant(c(6.0).sqrt() * n.clone() * n.sqrt() / c(9.0)),
                "t",
            ),
            Family::Gj => (
                Poly::new(vec![z.clone(), c(1.0)]),
                Poly::new(vec![c(1.0), -(r2 * t.clone()), c(-1.0)]),
                Poly::constant(self.gj_eta.value(self.n, t)),
                "t",
            ),
            Family::Jc => {
                let one = c(1.0);
                let sigma = Poly::new(vec![z.clone(), t.clone(), -(one.clone() + t.clone()), one.clone()]);
                let tau = Poly::new(vec![
                    -(t.clone() / c(2.0)),
                    (one.clone() + t.clone()) / c(2.0) - (one.clone() + al.clone()) * t.clone() - one,
                    al.clone() + c(1.5),
                ]);
                let k = n.clone() * (n.clone() + al * c(2.0) + c(1.0));
                let eta = Poly::new(vec![-(n * t.sqrt()) / c(4.0), -k / c(4.0)]);
                (sigma, tau, eta, "t = a²")
            }
        };
        SigmaTauEta { sigma, tau, eta, time_param: label.to_string() }
    }
}

/// Parameters of one convergence experiment. `param` is `κ = t(2n+α)` for
/// SPG, `t` for DF and GJ, and `a` for JC. For DF, `alpha` is the Heun
/// parameter and the weight exponent is `2α+1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitCase {
    pub family: Family,
    pub alpha: Exact,
    pub param: Exact,
}

impl LimitCase {
    pub fn standard(family: Family) -> Self {
        let (alpha, param) = match family {
            Family::Spg => (Exact::int(1), Exact::int(1)),
            Family::Df => (Exact::int(1), Exact::int(1)),
            Family::Gj => (Exact::int(0), Exact::new(1, 2)),
            Family::Jc => (Exact::int(1), Exact::new(1, 2)),
        };
        LimitCase { family, alpha, param }
    }

    fn spg_t(&self, n: usize) -> Exact {
        let den = Rational::from(2 * n as i64) + self.alpha.as_rational();
        Exact::from_rational(self.param.as_rational() / den)
    }

    pub fn weight(&self, n: usize) -> Result<WeightSpec> {
        match self.family {
            Family::Spg => WeightSpec::spg(self.alpha.clone(), self.spg_t(n)),
            Family::Df => {
                let w = Rational::from(self.alpha.as_rational() * 2u32) + 1u32;
                WeightSpec::df(Exact::from_rational(w), self.param.clone())
            }
            Family::Gj => WeightSpec::gj(Exact::int(1), Exact::int(1), self.param.clone()),
            Family::Jc => WeightSpec::jc(self.alpha.clone(), self.param.clone()),
        }
    }

    /// Deformation parameter of the limit operator at degree `n`.
    pub fn time(&self, n: usize, ctx: &PrecisionContext) -> Real {
        match self.family {
            Family::Spg => ctx.exact(&self.spg_t(n)),
            Family::Df | Family::Gj => ctx.exact(&self.param),
            Family::Jc => {
                let a = ctx.exact(&self.param);
                &a * &a
            }
        }
    }

    /// Argument of `P_n` as a function of the Heun variable.
    pub fn map<X: Scalar>(&self, x: &X, time: &Real, reading: &LimitReading) -> X {
        let c = |v: f64| x.lift_f64(v);
        let t = x.lift_real(time);
        match self.family {
            Family::Spg => (c(2.0).sqrt().sqrt().recip()) * (t * x.clone()).sqrt(),
            Family::Df => match reading.df_map {
                DfMap::Displayed => (c(2.0) * x.clone()).sqrt(),
                DfMap::QuarterRoot => (x.clone() / c(2.0).sqrt()).sqrt(),
            },
            Family::Gj => x.clone() / c(2.0).sqrt() + t,
            Family::Jc => x.sqrt(),
        }
    }

    pub fn sample_x(&self) -> Vec<f64> {
        match self.family {
            Family::Jc => vec![0.3, 0.45, 0.6, 0.75, 0.9],
            _ => vec![0.35, 0.8, 1.3, 1.9, 2.6],
        }
    }

    pub fn limit(&self, n: usize, ctx: &PrecisionContext) -> HeunLimit {
        HeunLimit::new(self.family, n, ctx.exact(&self.alpha))
    }

    /// Exact recurrence table up to degree `n`.
    pub fn polynomials(&self, n: usize, ctx: &PrecisionContext) -> Result<RecurrenceTable> {
        let w = self.weight(n)?;
        let m = moment_table(&w, n + 1, ctx)?;
        build_recurrence(&m, n, ctx)
    }
}

/// The large-n equation for `P̂_n` in the original variable, before the
/// change of variables to Heun form.
pub fn limit_ode(case: &LimitCase, n: usize, reading: &LimitReading, ctx: &PrecisionContext) -> Result<RationalODE2> {
    let one = ctx.one();
    let x = Poly::x(&one);
    let k = |v: Real| Poly::constant(v);
    let x2 = &x * &x;
    let al = ctx.exact(&case.alpha);
    let nn = ctx.int(n as i64);
    let (p, q) = match case.family {
        Family::Spg => {
            let t = case.time(n, ctx);
            let num = Poly::new(vec![t * 2i32, ctx.zero(), al.clone(), ctx.zero(), ctx.int(-2)]);
            (RationalFn::new(num, &x2 * &x), RationalFn::constant(nn * 2i32 + &al))
        }
        Family::Df => {
            let t = case.time(n, ctx);
            let num = Poly::new(vec![al * 2i32 + 1i32, ctx.zero(), t * 2i32, ctx.zero(), ctx.int(-4)]);
            let q = (nn * 4i32 / 3i32).pow(&ctx.real(1.5));
            (RationalFn::new(num, x.clone()), RationalFn::constant(q))
        }
        Family::Gj => {
            let t = case.time(n, ctx);
            let xt = Poly::linear_root(&t);
            let p = &RationalFn::new(k(one.clone()), xt.clone()) - &RationalFn::poly(x.scale(&ctx.int(2)));
            (p, RationalFn::new(k(reading.gj_qhat.value(n, &one)), xt))
        }
        Family::Jc => {
            let a = ctx.exact(&case.param);
            let x2m1 = &x2 - &k(one.clone());
            let x2ma2 = &x2 - &k(&a * &a);
            let p = &(&RationalFn::new(x.scale(&ctx.int(2)), x2ma2.clone())
                + &RationalFn::new(x.scale(&(al.clone() * 2i32 + 2i32)), x2m1.clone()))
                - &RationalFn::new(k(ctx.int(2)), x.clone());
            let num = &x2.scale(&(&nn * (al * 2i32 + &nn + 1i32))) + &k(&nn * &a);
            (p, RationalFn::new(-&num, &x2m1 * &x2ma2))
        }
    };
    RationalODE2::new(p, q, format!("{} limit n={n}", case.family), ctx)
}

/// Checks that `u = P̂(g(x))` carries the limit equation exactly onto the
/// Heun operator: `σg'' + τg' = σg'²T̂(g)` and `η = σg'²Q̂(g)`. Returns the
/// largest relative mismatch over the sample points.
pub fn map_consistency(case: &LimitCase, n: usize, reading: &LimitReading, ctx: &PrecisionContext) -> Result<f64> {
    let lim = limit_ode(case, n, reading, ctx)?;
    let time = case.time(n, ctx);
    let op = case.limit(n, ctx).with_gj_eta(reading.gj_eta).at(&time);
    let rel = |a: &Real, b: &Real| {
        let s = a.abs().max(&b.abs());
        if s.is_zero() {
            0.0
        } else {
            ((a - b).abs() / s).to_f64()
        }
    };
    let mut worst = 0.0f64;
    for x in case.sample_x() {
        let xr = ctx.real(x);
        let g = case.map(&Dual2::variable(xr.clone()), &time, reading);
        let (th, qh) = lim.coefficients(&g.v)?;
        let s = op.sigma.eval(&xr);
        let sg2 = &s * &g.d1 * &g.d1;
        let lhs1 = &s * &g.d2 + op.tau.eval(&xr) * &g.d1;
        worst = worst.max(rel(&lhs1, &(&sg2 * &th)));
        worst = worst.max(rel(&op.eta.eval(&xr), &(&sg2 * &qh)));
    }
    Ok(worst)
}

/// Coefficient of `1/(x−t)` in the GJ `Q_n` with the large-n `R_n`,
/// divided by `√2` and by `n^{3/2}`: the constant the Heun operator
/// inherits under `x ↦ x/√2 + t`.
pub fn gj_eta_from_aux(n: usize, t: &Real, ctx: &PrecisionContext) -> Real {
    let aux = super::AuxiliaryQuantities::gj_asymptotic(n, t, ctx);
    let (r, rp) = (&aux.rn, &aux.rn_prime);
    let kk = rp * rp - r.clone().powi(4) + t.clone() * 4i32 * r.clone().powi(3)
        + (ctx.int(8 * n as i64) - t.clone() * t * 4i32) * r * r;
    let nn = ctx.int(n as i64);
    kk / (r.clone() * 8i32) / ctx.int(2).sqrt() / (&nn * nn.sqrt())
}

/// Largest normalized residual of the limit operator applied to
/// `u(x) = P_n(g(x))` over the case's sample points.
pub fn heun_limit_residual(case: &LimitCase, n: usize, reading: &LimitReading, ctx: &PrecisionContext) -> Result<f64> {
    let ctx = ctx.for_degree(n);
    let rec = case.polynomials(n, &ctx)?;
    let time = case.time(n, &ctx);
    let op = case.limit(n, &ctx).with_gj_eta(reading.gj_eta).at(&time);
    let mut worst = 0.0f64;
    for x in case.sample_x() {
        let xr = ctx.real(x);
        let g = case.map(&Dual2::variable(xr.clone()), &time, reading);
        let u = rec.eval_poly_at(n, &g);
        let r = op.residual(&u.v, &u.d1, &u.d2, &xr);
        worst = worst.max(r.normalized.to_f64());
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct HeunConvergence {
    pub family: Family,
    pub reading: LimitReading,
    pub n_small: usize,
    pub n_large: usize,
    pub residual_small: f64,
    pub residual_large: f64,
    pub ratio: f64,
    /// `ratio ≥ 4`.
    pub passed: bool,
}

pub fn heun_limit_convergence(
    case: &LimitCase,
    reading: &LimitReading,
    n_small: usize,
    n_large: usize,
    ctx: &PrecisionContext,
) -> Result<HeunConvergence> {
    let a = heun_limit_residual(case, n_small, reading, ctx)?;
    let b = heun_limit_residual(case, n_large, reading, ctx)?;
    let ratio = a / b;
    Ok(HeunConvergence {
        family: case.family,
        reading: *reading,
        n_small,
        n_large,
        residual_small: a,
        residual_large: b,
        ratio,
        passed: ratio >= 4.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(60, 20).unwrap()
    }

    #[test]
    fn spg_operator_coefficients() {
        let c = ctx();
        let t = c.real(0.1);
        let op = HeunLimit::new(Family::Spg, 5, c.int(1)).at(&t);
        let r2 = c.int(2).sqrt();
        assert_eq!(op.sigma.degree(), 2);
        assert!((op.tau.coeff(0) - &r2).abs() < c.pow10(-55));
        assert!((op.tau.coeff(1) - c.int(1)).abs() < c.pow10(-55));
        assert!((op.tau.coeff(2) + &r2 * &t / 2i32).abs() < c.pow10(-55));
        assert!((op.eta.coeff(1) - &r2 * &t * 11i32 / 8i32).abs() < c.pow10(-55));
        assert!(op.degrees().case_b);
    }

    #[test]
    fn jc_exponents_at_singular_points() {
        // Residue of τ/σ at each finite singularity is 1 − (second exponent).
        let c = ctx();
        let al = c.real(0.7);
        let t = c.real(0.3);
        let op = HeunLimit::new(Family::Jc, 4, al.clone()).at(&t);
        let residue = |p: &Real| {
            let ds = op.sigma.derivative().eval(p);
            op.tau.eval(p) / ds
        };
        let close = |a: Real, b: Real| assert!((a - b).abs() < c.pow10(-50));
        close(residue(&c.zero()), c.real(-0.5));
        close(residue(&c.one()), &al + 1i32);
        close(residue(&t), c.one());
        let d = op.degrees();
        assert_eq!(d.sigma, 3);
        assert!(d.heun_class);
    }

    #[test]
    fn gj_eta_readings() {
        let c = ctx();
        let v = GjEta::DISPLAYED.value(16, &c.one());
        let expect = c.int(4) * c.int(3).sqrt() * c.int(64) / 9i32;
        assert!((v - expect).abs() < c.pow10(-50));
        let w = GjEta { root: 6, power: EtaPower::TwoThirds }.value(8, &c.one());
        let expect = c.int(4) * c.int(6).sqrt() * c.int(4) / 9i32;
        assert!((w - expect).abs() < c.pow10(-50));
    }

    #[test]
    fn case_b_degree_constraint_holds_for_confluent_families() {
        let c = ctx();
        for f in [Family::Spg, Family::Df, Family::Gj] {
            let d = HeunLimit::new(f, 6, c.int(1)).at(&c.real(0.4)).degrees();
            assert!(d.case_b, "{f}");
        }
    }

    #[test]
    fn maps_carry_limit_equations_onto_heun_form() {
        let c = PrecisionContext::new(50, 20).unwrap();
        let fixed = LimitReading {
            gj_eta: GjEta::DISPLAYED,
            gj_qhat: GjEta { root: 6, power: EtaPower::ThreeHalves },
            df_map: DfMap::QuarterRoot,
        };
        for f in Family::ALL {
            let m = map_consistency(&LimitCase::standard(f), 12, &fixed, &c).unwrap();
            assert!(m < 1e-40, "{f}: {m}");
        }
        let shown = map_consistency(&LimitCase::standard(Family::Df), 12, &LimitReading::default(), &c).unwrap();
        assert!(shown > 1e-2);
    }

    #[test]
    fn gj_constant_from_auxiliary_asymptotics() {
        let c = PrecisionContext::new(50, 20).unwrap();
        let v = gj_eta_from_aux(100_000_000, &c.real(0.5), &c);
        let expect = c.int(4) * c.int(3).sqrt() / 9i32;
        assert!(((v - &expect) / expect).abs() < c.real(1e-3));
    }

    #[test]
    fn jc_limit_converges() {
        let c = PrecisionContext::new(50, 20).unwrap();
        let case = LimitCase::standard(Family::Jc);
        let r = heun_limit_convergence(&case, &LimitReading::default(), 8, 32, &c).unwrap();
        assert!(r.residual_large < r.residual_small);
    }
}
