use serde::Serialize;

use super::HamiltonianSystem;
use crate::error::{Error, Result};
use crate::rk45::{self, Rk45Options};

/// `|λ|` or `|μ|` beyond this is treated as a pole of the trajectory.
pub const POLE_THRESHOLD: f64 = 1e8;

#[derive(Clone, Debug, Serialize)]
pub struct FlowPoint {
    pub t: f64,
    pub lambda: f64,
    pub mu: f64,
    pub lambda_dot: f64,
    pub lambda_ddot: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub tol: f64,
    pub points: Vec<FlowPoint>,
}

impl Trajectory {
    pub fn last(&self) -> &FlowPoint {
        self.points.last().expect("trajectory has its initial point")
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "lambda", "mu", "lambda_dot", "lambda_ddot"])?;
        for p in &self.points {
            w.write_record([p.t, p.lambda, p.mu, p.lambda_dot, p.lambda_ddot].map(|v| format!("{v:.17e}")))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_window<H: HamiltonianSystem>(h: &H, t0: f64, stops: &[f64]) -> Result<()> {
    let (lo, hi) = stops.iter().fold((t0, t0), |(a, b), &s| (a.min(s), b.max(s)));
    for s in h.singular_times() {
        if s >= lo && s <= hi {
            return Err(Error::Domain(format!("flow window [{lo}, {hi}] contains the singular time {s}")));
        }
    }
    Ok(())
}

/// Integrates the Hamilton equations through each of `stops`.
pub fn hamilton_flow_stops<H: HamiltonianSystem>(
    h: &H,
    t0: f64,
    lambda0: f64,
    mu0: f64,
    stops: &[f64],
    tol: f64,
) -> Result<Trajectory> {
    check_window(h, t0, stops)?;
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        if !(y[0].abs() < POLE_THRESHOLD && y[1].abs() < POLE_THRESHOLD) {
            return Err(Error::FlowPole { t });
        }
        dy[0] = h.dh_dmu(&t, &y[0], &y[1]);
        dy[1] = -h.dh_dlambda(&t, &y[0], &y[1]);
        Ok(())
    };
    let samples = rk45::integrate(rhs, t0, &[lambda0, mu0], stops, Rk45Options::tol(tol))?;
    let points = samples
        .into_iter()
        .map(|s| {
            let (l, m) = (s.y[0], s.y[1]);
            FlowPoint {
                t: s.t,
                lambda: l,
                mu: m,
                lambda_dot: h.dh_dmu(&s.t, &l, &m),
                lambda_ddot: h.lambda_ddot(&s.t, &l, &m),
            }
        })
        .collect();
    Ok(Trajectory { tol, points })
}

pub fn hamilton_flow<H: HamiltonianSystem>(h: &H, t0: f64, lambda0: f64, mu0: f64, t1: f64, tol: f64) -> Result<Trajectory> {
    hamilton_flow_stops(h, t0, lambda0, mu0, &[t1], tol)
}

/// Distance from `(λ0, μ0)` after flowing to `t1` and back to `t0`.
pub fn reversibility_error<H: HamiltonianSystem>(h: &H, t0: f64, lambda0: f64, mu0: f64, t1: f64, tol: f64) -> Result<f64> {
    let fwd = hamilton_flow(h, t0, lambda0, mu0, t1, tol)?;
    let end = fwd.last();
    let back = hamilton_flow(h, t1, end.lambda, end.mu, t0, tol)?;
    let b = back.last();
    Ok((b.lambda - lambda0).abs().max((b.mu - mu0).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Family;
    use crate::isomono::Hamiltonian;
    use crate::mp::{PrecisionContext, Scalar};

    struct Oscillator;

    impl HamiltonianSystem for Oscillator {
        fn h<X: Scalar>(&self, _t: &X, lam: &X, mu: &X) -> X {
            (lam.clone() * lam.clone() + mu.clone() * mu.clone() * lam.lift_int(3)) / lam.lift_int(2)
                + lam.clone() * lam.clone() * lam.clone() * mu.clone() / lam.lift_int(10)
        }
    }

    #[test]
    fn autonomous_energy_conserved() {
        let tol = 1e-11;
        let tr = hamilton_flow(&Oscillator, 0.0, 0.4, 0.2, 3.0, tol).unwrap();
        let h0 = Oscillator.h(&0.0, &0.4, &0.2);
        for p in &tr.points {
            assert!((Oscillator.h(&p.t, &p.lambda, &p.mu) - h0).abs() < 100.0 * tol);
        }
    }

    #[test]
    fn spg_flow_checks() {
        let ctx = PrecisionContext::new(50, 10).unwrap();
        let h = Hamiltonian::for_family(Family::Spg, 3, ctx.int(1), &ctx);
        let tol = 1e-12;
        let tr = hamilton_flow(&h, 1.0, 1.0, 0.0, 1.3, tol).unwrap();
        assert!(tr.points.len() > 3);
        let end = tr.last();
        assert!((end.t - 1.3).abs() < 1e-15);
        // λ̈ against a difference quotient of λ̇ over the accepted steps.
        for w in tr.points.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let fd = (b.lambda_dot - a.lambda_dot) / (b.t - a.t);
            let mid = 0.5 * (a.lambda_ddot + b.lambda_ddot);
            assert!((fd - mid).abs() < 1e-3 * (1.0 + mid.abs()));
        }
        let rev = reversibility_error(&h, 1.0, 1.0, 0.0, 1.3, tol).unwrap();
        assert!(rev < 10.0 * tol * 100.0, "{rev}");
    }

    #[test]
    fn window_through_singular_time_rejected() {
        let ctx = PrecisionContext::new(50, 10).unwrap();
        let h = Hamiltonian::for_family(Family::Spg, 3, ctx.int(1), &ctx);
        assert!(matches!(hamilton_flow(&h, 0.5, 1.0, 0.0, -0.5, 1e-8), Err(Error::Domain(_))));
    }
}
