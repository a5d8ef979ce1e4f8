//! Adaptive Dormand-Prince 5(4) integration in double precision.

use crate::error::{Error, Result};

/// One accepted step of an integration.
#[derive(Clone, Debug)]
pub struct Sample {
    pub t: f64,
    pub y: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct Rk45Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Rk45Options {
    pub fn tol(tol: f64) -> Self {
        Rk45Options { rtol: tol, atol: tol, max_steps: 2_000_000 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `t0` through each of `stops` in turn
/// (monotone in the direction of travel), returning every accepted step.
/// The state at each stop is always among the samples. `f` may fail, e.g.
/// on approaching a pole, which aborts the integration.
pub fn integrate<F>(mut f: F, t0: f64, y0: &[f64], stops: &[f64], opts: Rk45Options) -> Result<Vec<Sample>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let dim = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut out = vec![Sample { t, y: y.clone() }];
    let Some(&last) = stops.last() else { return Ok(out) };
    let dir = if last >= t0 { 1.0 } else { -1.0 };
    let mut h = 1e-3 * (last - t0).abs().max(1e-8) * dir;
    let mut k = vec![vec![0.0; dim]; 7];
    let mut tmp = vec![0.0; dim];
    let mut ynew = vec![0.0; dim];
    let mut steps = 0usize;
    f(t, &y, &mut k[0])?;
    for &stop in stops {
        while (stop - t) * dir > 0.0 {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::StepUnderflow { t });
            }
            let mut hit = false;
            if (t + h - stop) * dir >= 0.0 {
                h = stop - t;
                hit = true;
            }
            for s in 1..7 {
                for i in 0..dim {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += h * A[s][j] * kj[i];
                    }
                    tmp[i] = acc;
                }
                let (_, tail) = k.split_at_mut(s);
                f(t + C[s] * h, &tmp, &mut tail[0])?;
            }
            let mut err = 0.0f64;
            for i in 0..dim {
                let mut y5 = y[i];
                let mut y4 = y[i];
                for s in 0..7 {
                    y5 += h * B5[s] * k[s][i];
                    y4 += h * B4[s] * k[s][i];
                }
                ynew[i] = y5;
                let sc = opts.atol + opts.rtol * y[i].abs().max(y5.abs());
                err = err.max(((y5 - y4) / sc).abs());
            }
            if !err.is_finite() {
                h *= 0.2;
                if h.abs() < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::StepUnderflow { t });
                }
                continue;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                t = if hit { stop } else { t + h };
                y.copy_from_slice(&ynew);
                // FSAL: the last stage is the derivative at the new point.
                k.swap(0, 6);
                out.push(Sample { t, y: y.clone() });
            }
            h *= factor;
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepUnderflow { t });
            }
        }
    }
    Ok(out)
}

/// State at the final stop of [`integrate`].
pub fn integrate_to<F>(f: F, t0: f64, y0: &[f64], t1: f64, opts: Rk45Options) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let samples = integrate(f, t0, y0, &[t1], opts)?;
    Ok(samples.last().map(|s| s.y.clone()).unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let y = integrate_to(
            |_, y, dy| {
                dy[0] = -y[0];
                Ok(())
            },
            0.0,
            &[1.0],
            2.0,
            Rk45Options::tol(1e-12),
        )
        .unwrap();
        assert!((y[0] - (-2.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn harmonic_oscillator_backwards_with_stops() {
        let f = |_: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[0];
            Ok(())
        };
        let samples =
            integrate(f, 1.0, &[1.0f64.sin(), 1.0f64.cos()], &[0.5, 0.0], Rk45Options::tol(1e-11)).unwrap();
        assert!(samples.iter().any(|s| s.t == 0.5));
        let end = samples.last().unwrap();
        assert_eq!(end.t, 0.0);
        assert!(end.y[0].abs() < 1e-10 && (end.y[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn failing_rhs_aborts() {
        let r = integrate_to(
            |t, _, _| if t > 0.5 { Err(Error::FlowPole { t }) } else { Ok(()) },
            0.0,
            &[0.0],
            1.0,
            Rk45Options::tol(1e-8),
        );
        assert!(matches!(r, Err(Error::FlowPole { .. })));
    }
}
