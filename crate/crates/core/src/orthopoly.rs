//! Hankel determinants, recurrence coefficients and monic orthogonal
//! polynomials from a moment sequence.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::MomentTable;
use crate::mp::{Dual2, PrecisionContext, Real, Scalar};

/// Output of the triangular factorisation of `(μ_{i+j})`.
///
/// `h[n]` for `n ≤ N`, `d[n] = D_n` for `n ≤ N + 1` (`D_0 = 1`),
/// `alpha[n]` for `n < N`, `beta[n]` for `n ≤ N` with `β_0 = 0`, and
/// `coeffs[n]` the ascending coefficients of the monic `P_n`.
#[derive(Clone, Debug)]
pub struct RecurrenceTable {
    pub n_max: usize,
    pub h: Vec<Real>,
    pub d: Vec<Real>,
    pub alpha: Vec<Real>,
    pub beta: Vec<Real>,
    pub coeffs: Vec<Vec<Real>>,
    pub ctx: PrecisionContext,
}

/// Factorises the moment matrix: row `n` of the inverse unit-lower factor
/// is `P_n` and the pivots are the norms `h_n`.
pub fn build_recurrence(m: &MomentTable, n_max: usize, ctx: &PrecisionContext) -> Result<RecurrenceTable> {
    build_from_moments(&m.entries, n_max, ctx)
}

pub fn build_from_moments(mu: &[Real], n_max: usize, ctx: &PrecisionContext) -> Result<RecurrenceTable> {
    if mu.len() < 2 * n_max + 1 {
        return Err(Error::Domain(format!(
            "need {} moments for n_max = {n_max}, have {}",
            2 * n_max + 1,
            mu.len()
        )));
    }
    let bits = ctx.bits();
    let mu: Vec<Real> = mu.iter().map(|v| v.with_prec(bits)).collect();
    let floor = ctx.pow10(-((ctx.digits + ctx.guard) as i32));
    let mut coeffs: Vec<Vec<Real>> = Vec::with_capacity(n_max + 1);
    let mut h: Vec<Real> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        // P_n = x^n - Σ_{j<n} (<x^n, P_j>/h_j) P_j
        let mut row = vec![ctx.zero(); n + 1];
        row[n] = ctx.one();
        for j in 0..n {
            let inner = coeffs[j].iter().enumerate().fold(ctx.zero(), |acc, (i, c)| acc + c * &mu[n + i]);
            let l = inner / &h[j];
            for (i, c) in coeffs[j].iter().enumerate() {
                row[i] -= &l * c;
            }
        }
        let hn = row.iter().enumerate().fold(ctx.zero(), |acc, (i, c)| acc + c * &mu[n + i]);
        if !(hn > &mu[2 * n] * &floor) {
            return Err(Error::Positivity { index: n });
        }
        h.push(hn);
        coeffs.push(row);
    }
    let mut d = vec![ctx.one()];
    for hn in &h {
        let next = d.last().unwrap() * hn;
        d.push(next);
    }
    let mut beta = vec![ctx.zero()];
    for n in 1..=n_max {
        beta.push(&h[n] / &h[n - 1]);
    }
    // P_n = x^n + c_{n,n-1} x^{n-1} + …, α_n = c_{n,n-1} - c_{n+1,n}
    let sub = |n: usize| if n == 0 { ctx.zero() } else { coeffs[n][n - 1].clone() };
    let alpha = (0..n_max).map(|n| sub(n) - sub(n + 1)).collect();
    Ok(RecurrenceTable { n_max, h, d, alpha, beta, coeffs, ctx: *ctx })
}

/// Leading principal minors `D_1 … D_{n}` of `(μ_{i+j})`, each by an
/// independent partial-pivot LU factorisation.
pub fn hankel_determinants_lu(mu: &[Real], n: usize, ctx: &PrecisionContext) -> Vec<Real> {
    let bits = ctx.bits();
    (1..=n)
        .map(|size| {
            let mut a: Vec<Vec<Real>> =
                (0..size).map(|i| (0..size).map(|j| mu[i + j].with_prec(bits)).collect()).collect();
            let mut det = ctx.one();
            for col in 0..size {
                let piv = (col..size).max_by(|&p, &q| a[p][col].cmp_abs(&a[q][col])).unwrap();
                if piv != col {
                    a.swap(piv, col);
                    det = -det;
                }
                let p = a[col][col].clone();
                det *= &p;
                if p.is_zero() {
                    return det;
                }
                for r in col + 1..size {
                    let f = &a[r][col] / &p;
                    for c in col..size {
                        let v = &f * &a[col][c];
                        a[r][c] -= v;
                    }
                }
            }
            det
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    /// `max_n |β_n - D_{n-1}D_{n+1}/D_n²| / β_n` with LU determinants.
    pub beta_vs_determinants: f64,
    /// `max_n |D_n(h-product) - D_n(LU)| / D_n`.
    pub product_vs_lu: f64,
    pub checked_up_to: usize,
}

impl RecurrenceTable {
    /// Compares the factorisation with independent LU determinants up to
    /// `n_check` (clamped to `n_max`).
    pub fn cross_check(&self, mu: &[Real], n_check: usize) -> ConsistencyReport {
        let n_check = n_check.min(self.n_max);
        let lu = hankel_determinants_lu(mu, n_check + 1, &self.ctx);
        let det = |n: usize| if n == 0 { self.ctx.one() } else { lu[n - 1].clone() };
        let mut worst_beta = 0f64;
        let mut worst_d = 0f64;
        for n in 1..=n_check {
            let ratio = det(n - 1) * det(n + 1) / (det(n) * det(n));
            let r = ((&self.beta[n] - ratio).abs() / &self.beta[n]).to_f64();
            worst_beta = worst_beta.max(r);
        }
        for n in 1..=n_check + 1 {
            let r = ((&self.d[n] - det(n)).abs() / &self.d[n]).to_f64();
            worst_d = worst_d.max(r);
        }
        ConsistencyReport { beta_vs_determinants: worst_beta, product_vs_lu: worst_d, checked_up_to: n_check }
    }

    /// `(P_n(x), P_n'(x), P_n''(x))`.
    pub fn eval_poly(&self, n: usize, x: &Real) -> (Real, Real, Real) {
        let d = self.eval_poly_at(n, &Dual2::variable(x.with_prec(self.ctx.bits())));
        (d.v, d.d1, d.d2)
    }

    /// `P_n` evaluated in any scalar type, coefficients lifted from `x`.
    pub fn eval_poly_at<X: Scalar>(&self, n: usize, x: &X) -> X {
        let row = &self.coeffs[n];
        let mut acc = x.lift_real(row.last().unwrap());
        for c in row.iter().rev().skip(1) {
            acc = acc * x.clone() + x.lift_real(c);
        }
        acc
    }

    /// `x P_n - P_{n+1} - α_n P_n - β_n P_{n-1}` at `x`, for `n < n_max`.
    pub fn recurrence_residual(&self, n: usize, x: &Real) -> Real {
        let p = |k: usize| self.eval_poly(k, x).0;
        let prev = if n == 0 { self.ctx.zero() } else { p(n - 1) };
        x * p(n) - p(n + 1) - &self.alpha[n] * p(n) - &self.beta[n] * prev
    }

    /// `|Σ c_i c_j μ - h_i δ_ij| / sqrt(h_i h_j)` through the exact bilinear
    /// form on the moments.
    pub fn orthogonality_residual(&self, mu: &[Real], i: usize, j: usize) -> Real {
        let mut acc = self.ctx.zero();
        for (a, ca) in self.coeffs[i].iter().enumerate() {
            for (b, cb) in self.coeffs[j].iter().enumerate() {
                acc += ca * cb * &mu[a + b];
            }
        }
        if i == j {
            acc -= &self.h[i];
        }
        acc.abs() / (&self.h[i] * &self.h[j]).sqrt()
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W, extra: Option<(&str, &dyn Fn(usize) -> Real)>) -> Result<()> {
        let mut wr = csv::Writer::from_writer(out);
        let mut header = vec!["n", "h", "D", "alpha", "beta"];
        if let Some((name, _)) = extra {
            header.push(name);
        }
        wr.write_record(&header)?;
        let sig = self.ctx.digits as usize;
        for n in 0..=self.n_max {
            let alpha = self.alpha.get(n).map(|a| a.to_sci(sig)).unwrap_or_default();
            let mut rec = vec![
                n.to_string(),
                self.h[n].to_sci(sig),
                self.d[n].to_sci(sig),
                alpha,
                self.beta[n].to_sci(sig),
            ];
            if let Some((_, f)) = extra {
                rec.push(f(n).to_sci(sig));
            }
            wr.write_record(&rec)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let sig = self.ctx.digits as usize;
        let s = |v: &[Real]| v.iter().map(|x| x.to_sci(sig)).collect::<Vec<_>>();
        serde_json::json!({
            "n_max": self.n_max,
            "digits": self.ctx.digits,
            "guard": self.ctx.guard,
            "h": s(&self.h),
            "D": s(&self.d),
            "alpha": s(&self.alpha),
            "beta": s(&self.beta),
            "poly_coeffs": self.coeffs.iter().map(|r| s(r)).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::moment_table;
    use crate::mp::Exact;
    use crate::weights::WeightSpec;

    fn q(s: &str) -> Exact {
        Exact::parse(s).unwrap()
    }

    #[test]
    fn small_determinants() {
        let c = PrecisionContext::new(60, 10).unwrap();
        let mu: Vec<Real> = [3, 1, 4, 1, 9].iter().map(|&v| c.int(v)).collect();
        let t = build_from_moments(&mu, 2, &c).unwrap();
        assert_eq!(t.d[1].to_f64(), 3.0);
        assert!((t.d[2].to_f64() - 11.0).abs() < 1e-50);
        let lu = hankel_determinants_lu(&mu, 3, &c);
        assert!((&lu[2] - &t.d[3]).abs().to_f64() < 1e-50);
    }

    #[test]
    fn gaussian_beta_one() {
        let c = PrecisionContext::new(60, 10).unwrap();
        let w = WeightSpec::gj(q("1"), q("0"), q("0")).unwrap();
        let m = moment_table(&w, 4, &c).unwrap();
        let t = build_recurrence(&m, 4, &c).unwrap();
        for n in 1..=4 {
            assert!((t.beta[n].to_f64() - n as f64 / 2.0).abs() < 1e-50);
        }
        for a in &t.alpha {
            assert!(a.is_zero() || a.abs().to_f64() < 1e-60);
        }
    }

    #[test]
    fn evaluation_and_recurrence() {
        let c = PrecisionContext::new(80, 20).unwrap();
        let w = WeightSpec::gj(q("1"), q("1"), q("1/3")).unwrap();
        let m = moment_table(&w, 6, &c).unwrap();
        let t = build_recurrence(&m, 6, &c).unwrap();
        let (p0, d0, dd0) = t.eval_poly(0, &c.real(0.3));
        assert_eq!((p0.to_f64(), d0.to_f64(), dd0.to_f64()), (1.0, 0.0, 0.0));
        let (p1, d1, _) = t.eval_poly(1, &c.real(0.3));
        assert!((p1 - (c.real(0.3) - &t.alpha[0])).abs().to_f64() < 1e-80);
        assert_eq!(d1.to_f64(), 1.0);
        for k in 0..5 {
            let x = c.real(-1.3 + 0.7 * k as f64);
            assert!(t.recurrence_residual(k, &x).abs().to_f64() < 1e-70);
        }
        for i in 0..=6 {
            for j in 0..=6 {
                assert!(t.orthogonality_residual(&m.entries, i, j).to_f64() < 1e-60);
            }
        }
        let report = t.cross_check(&m.entries, 5);
        assert!(report.beta_vs_determinants < 1e-60);
        assert!(report.product_vs_lu < 1e-60);
    }

    #[test]
    fn positivity_failure_reports_index() {
        let c = PrecisionContext::new(60, 10).unwrap();
        let mu: Vec<Real> = [1, 0, 1, 0, 1].iter().map(|&v| c.int(v)).collect();
        match build_from_moments(&mu, 2, &c) {
            Err(Error::Positivity { index }) => assert_eq!(index, 2),
            other => panic!("expected positivity failure, got {other:?}"),
        }
    }
}
