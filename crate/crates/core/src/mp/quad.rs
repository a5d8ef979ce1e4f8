//! Double-exponential quadrature: tanh-sinh on finite intervals, exp-sinh on
//! `[a, ∞)` and sinh-sinh on the real line. Levels halve the step until two
//! successive estimates agree to the working tolerance.

use super::{PrecisionContext, Real};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Domain {
    Finite(Real, Real),
    /// `[a, ∞)`.
    Upper(Real),
    Whole,
}

/// A quadrature node. `left` is `x - a` and `right` is `b - x`, both computed
/// without cancellation so integrands singular at an endpoint keep full
/// relative accuracy. On the whole line `left` equals `x`.
#[derive(Clone, Debug)]
pub struct Abscissa {
    pub x: Real,
    pub left: Real,
    pub right: Option<Real>,
}

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Real,
    pub error: Real,
    pub levels: u32,
    pub evaluations: usize,
}

const MAX_LEVEL: u32 = 14;
const U_MAX: f64 = 9.0;

struct Transform {
    domain: Domain,
    bits: u32,
    half_pi: Real,
}

impl Transform {
    /// Node and Jacobian at parameter `u`; `None` once the node collapses
    /// onto an endpoint at working precision.
    fn node(&self, eu: &Real) -> Option<(Abscissa, Real)> {
        let emu = eu.recip();
        let sinh_u = (eu - &emu) / 2;
        let cosh_u = (eu + &emu) / 2;
        let v = &self.half_pi * &sinh_u;
        let dv = &self.half_pi * &cosh_u;
        match &self.domain {
            Domain::Finite(a, b) => {
                let d = (b - a) / 2;
                let e = (v.abs() * -2).exp();
                let onep = e.lift_int(1) + &e;
                let near = &d * &e * 2 / &onep;
                let far = &d * 2 - &near;
                let w = d * dv * e * 4 / (&onep * &onep);
                if near.is_zero() || w.is_zero() {
                    return None;
                }
                let (left, right) = if v.is_negative() { (near, far) } else { (far, near) };
                let x = a + &left;
                Some((Abscissa { x, left, right: Some(right) }, w))
            }
            Domain::Upper(a) => {
                let ev = v.exp();
                if ev.is_zero() || !ev.is_finite() {
                    return None;
                }
                let w = &dv * &ev;
                Some((Abscissa { x: a + &ev, left: ev, right: None }, w))
            }
            Domain::Whole => {
                let ev = v.exp();
                if !ev.is_finite() || ev.is_zero() {
                    return None;
                }
                let iev = ev.recip();
                let x = (&ev - &iev) / 2;
                let w = dv * ((&ev + &iev) / 2);
                Some((Abscissa { left: x.clone(), x, right: None }, w))
            }
        }
    }
}

/// Integrates a scalar function of `x`.
pub fn integrate<F>(f: F, domain: Domain, ctx: &PrecisionContext) -> Result<QuadResult>
where
    F: Fn(&Real) -> Real,
{
    integrate_nodes(|n: &Abscissa| f(&n.x), domain, ctx)
}

/// Integrates a scalar function that may use the endpoint distances.
pub fn integrate_nodes<F>(f: F, domain: Domain, ctx: &PrecisionContext) -> Result<QuadResult>
where
    F: Fn(&Abscissa) -> Real,
{
    let mut out = integrate_vec(
        |n: &Abscissa, acc: &mut [Real]| acc[0] = f(n),
        1,
        domain,
        ctx,
    )?;
    Ok(out.remove(0))
}

/// Integrates `m` functions that share their nodes; `f` fills one value per
/// component.
pub fn integrate_vec<F>(f: F, m: usize, domain: Domain, ctx: &PrecisionContext) -> Result<Vec<QuadResult>>
where
    F: Fn(&Abscissa, &mut [Real]),
{
    if let Domain::Finite(a, b) = &domain {
        if a >= b {
            return Err(Error::Domain(format!("empty interval [{a}, {b}]")));
        }
    }
    let bits = ctx.bits() + 32;
    let tr = Transform { domain, bits, half_pi: Real::pi(bits) / 2 };
    let negligible = ctx.pow10(-((ctx.digits + ctx.guard) as i32 + 5));

    let zero = Real::from_i64(tr.bits, 0);
    let mut sums = vec![zero.clone(); m];
    let mut buf = vec![zero.clone(); m];
    let mut evaluations = 0usize;

    let mut h = Real::from_f64(tr.bits, 0.5);
    let mut last_err = f64::INFINITY;

    let log_tol = -((ctx.digits + ctx.guard / 2) as f64);
    let mut history: Vec<Vec<Real>> = Vec::new();

    for level in 0..=MAX_LEVEL {
        let step = if level == 0 { 1 } else { 2 };
        if level == 0 {
            if let Some((node, w)) = tr.node(&Real::from_i64(tr.bits, 1)) {
                f(&node, &mut buf);
                evaluations += 1;
                for (s, v) in sums.iter_mut().zip(&buf) {
                    *s += &w * v;
                }
            }
        }
        for sign in [1i32, -1] {
            // e^u advances by a constant factor along a sweep.
            let mut eu = (&h * sign).exp();
            let ratio = (&h * (sign * step)).exp();
            let mut u = h.to_f64();
            let mut quiet = 0;
            while u <= U_MAX {
                let Some((node, w)) = tr.node(&eu) else { break };
                f(&node, &mut buf);
                evaluations += 1;
                let mut small = true;
                for (s, v) in sums.iter_mut().zip(&buf) {
                    let term = &w * v;
                    if term.is_finite() && !term.is_zero() && term.abs() > s.abs() * &negligible {
                        small = false;
                    }
                    if term.is_finite() {
                        *s += term;
                    }
                }
                quiet = if small { quiet + 1 } else { 0 };
                if quiet >= 4 {
                    break;
                }
                eu *= &ratio;
                u += h.to_f64() * step as f64;
            }
        }
        let current: Vec<Real> = sums.iter().map(|s| s * &h).collect();
        if let Some(p) = history.last() {
            // Successive differences shrink roughly quadratically, so the
            // error of the newest estimate is predicted from the last two.
            let mut worst = f64::NEG_INFINITY;
            for (i, c) in current.iter().enumerate() {
                let d1 = log10_rel(c, &p[i]);
                let est = match history.len() {
                    1 => d1,
                    _ => {
                        let d2 = log10_rel(c, &history[history.len() - 2][i]);
                        if d1 == f64::NEG_INFINITY {
                            d1
                        } else if d2 < 0.0 && d1 < d2 {
                            (d1 * d1 / d2).max(1.5 * d1)
                        } else {
                            d1
                        }
                    }
                };
                worst = worst.max(est);
            }
            last_err = worst;
            if worst <= log_tol {
                return Ok(current
                    .into_iter()
                    .zip(p)
                    .map(|(value, q)| QuadResult {
                        error: (&value - q).abs(),
                        value: value.with_prec(ctx.bits()),
                        levels: level,
                        evaluations,
                    })
                    .collect());
            }
        }
        history.push(current);
        h = h / 2;
    }
    Err(Error::NonConvergence { levels: MAX_LEVEL, estimate: format!("1e{last_err:.0}") })
}

/// `log10 |a - b| / |a|`, or the absolute difference when `a = 0`.
fn log10_rel(a: &Real, b: &Real) -> f64 {
    let diff = (a - b).abs();
    if diff.is_zero() {
        return f64::NEG_INFINITY;
    }
    let r = if a.is_zero() { diff } else { diff / a.abs() };
    r.ln().to_f64() / std::f64::consts::LN_10
}
