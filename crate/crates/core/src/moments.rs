//! Moment sequences `μ_k = ∫ x^k w(x) dx` with closed forms where known and
//! double-exponential quadrature everywhere as the reference.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mp::quad::{integrate, integrate_vec, Domain};
use crate::mp::special::{bessel_k_sequence, inc_beta, inc_gamma_lower, inc_gamma_upper};
use crate::mp::{PrecisionContext, Real};
use crate::weights::WeightSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Quadrature => "quadrature",
        }
    }
}

#[derive(Clone, Debug)]
pub struct MomentValue {
    pub value: Real,
    pub method: Method,
}

/// A single moment, by closed form when the family has one.
pub fn moment(w: &WeightSpec, k: usize, ctx: &PrecisionContext) -> Result<MomentValue> {
    match closed_form(w, k, 1, ctx)? {
        Some(mut v) => Ok(MomentValue { value: v.remove(0), method: Method::ClosedForm }),
        None => Ok(MomentValue { value: moment_quadrature(w, k, ctx)?, method: Method::Quadrature }),
    }
}

/// The SPG moment `2 t^{(α+m+1)/4} K_{(α+m+1)/2}(2√t)` for even `m`.
pub fn spg_bessel_moment(alpha: &Real, t: &Real, m: usize, ctx: &PrecisionContext) -> Result<Real> {
    if m % 2 == 1 {
        return Ok(ctx.zero());
    }
    let nu = (alpha + (m as i32 + 1)) / 2;
    let k = bessel_k_sequence(&nu, &(t.sqrt() * 2), 1, ctx)?.remove(0);
    Ok(t.pow(&(&nu / 2)) * k * 2)
}

/// Closed forms for `μ_{k}, μ_{k+1}, …` (`count` entries), or `None` when the
/// family has none at these parameters.
fn closed_form(w: &WeightSpec, k0: usize, count: usize, ctx: &PrecisionContext) -> Result<Option<Vec<Real>>> {
    let zero = ctx.zero();
    let ks = k0..k0 + count;
    match w {
        WeightSpec::Spg { alpha, t } => {
            let (alpha, t) = (ctx.exact(alpha), ctx.exact(t));
            Ok(Some(spg_even_sequence(&alpha, &t, ks, ctx)?))
        }
        WeightSpec::SpgHardEdge { alpha, t, s } => {
            let (alpha, t, s) = (ctx.exact(alpha), ctx.exact(t), ctx.exact(s));
            if s.is_zero() && !t.is_zero() {
                return Ok(Some(spg_even_sequence(&alpha, &t, ks, ctx)?));
            }
            if !t.is_zero() {
                return Ok(None);
            }
            let mut out = Vec::with_capacity(count);
            for k in ks {
                if k % 2 == 1 {
                    out.push(zero.clone());
                } else {
                    let a = (&alpha + (k as i32 + 1)) / 2;
                    out.push(inc_gamma_upper(&a, &s, ctx)?);
                }
            }
            Ok(Some(out))
        }
        WeightSpec::Df { .. } => Ok(None),
        WeightSpec::Gj { a_coef, b_coef, t } => {
            let (ac, bc, t) = (ctx.exact(a_coef), ctx.exact(b_coef), ctx.exact(t));
            let t2 = &t * &t;
            let mut out = Vec::with_capacity(count);
            for k in ks {
                let a = ctx.int(k as i64 + 1) / 2;
                let full = a.gamma();
                let even = if k % 2 == 0 { full.clone() } else { zero.clone() };
                let tail = if t.is_negative() {
                    let low = inc_gamma_lower(&a, &t2, ctx)? / 2;
                    let signed = if k % 2 == 0 { low } else { -low };
                    signed + &full / 2
                } else {
                    inc_gamma_upper(&a, &t2, ctx)? / 2
                };
                out.push(&ac * even + &bc * tail);
            }
            Ok(Some(out))
        }
        WeightSpec::Jc { alpha, a } => {
            let (alpha, a) = (ctx.exact(alpha), ctx.exact(a));
            let x = ctx.one() - &a * &a;
            let mut out = Vec::with_capacity(count);
            for k in ks {
                if k % 2 == 1 {
                    out.push(zero.clone());
                } else {
                    let p = ctx.int(k as i64 + 1) / 2;
                    out.push(inc_beta(&x, &(&alpha + 1), &p, ctx)?);
                }
            }
            Ok(Some(out))
        }
    }
}

fn spg_even_sequence(alpha: &Real, t: &Real, ks: std::ops::Range<usize>, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    let zero = ctx.zero();
    let first_even = ks.start + ks.start % 2;
    let evens: Vec<usize> = (first_even..ks.end).step_by(2).collect();
    let nu0 = (alpha + (first_even as i32 + 1)) / 2;
    let ks_bessel = bessel_k_sequence(&nu0, &(t.sqrt() * 2), evens.len(), ctx)?;
    let mut out = Vec::with_capacity(ks.len());
    let mut it = ks_bessel.into_iter();
    for k in ks {
        if k % 2 == 1 {
            out.push(zero.clone());
        } else {
            let nu = (alpha + (k as i32 + 1)) / 2;
            out.push(t.pow(&(&nu / 2)) * it.next().unwrap() * 2);
        }
    }
    Ok(out)
}

/// Location of the maximum of `x^p e^{-φ(x)}` on the half line, used to
/// split the quadrature.
fn radial_peak(w: &WeightSpec, p: &Real, ctx: &PrecisionContext) -> Real {
    let sixteen = ctx.int(16);
    match w {
        WeightSpec::Spg { t, .. } | WeightSpec::SpgHardEdge { t, .. } => {
            let t = ctx.exact(t);
            ((p + (p * p + sixteen * t).sqrt()) / 4).sqrt()
        }
        WeightSpec::Df { t, .. } => {
            let t = ctx.exact(t);
            ((&t * 2 + (&t * &t * 4 + sixteen * p).sqrt()) / 8).sqrt()
        }
        _ => ((p + 1) / 2).sqrt(),
    }
}

/// `∫_lo^∞ f`, split at `peak` when it lies above `lo`.
fn half_line_vec<F>(f: F, m: usize, lo: &Real, peak: &Real, ctx: &PrecisionContext) -> Result<Vec<Real>>
where
    F: Fn(&Real, &mut [Real]),
{
    let tail_from = if peak > lo { peak.clone() } else { lo.clone() };
    let mut total: Vec<Real> = integrate_vec(|n, acc| f(&n.x, acc), m, Domain::Upper(tail_from.clone()), ctx)?
        .into_iter()
        .map(|r| r.value)
        .collect();
    if peak > lo {
        let head = integrate_vec(|n, acc| f(&n.x, acc), m, Domain::Finite(lo.clone(), tail_from), ctx)?;
        for (t, h) in total.iter_mut().zip(head) {
            *t += h.value;
        }
    }
    Ok(total)
}

/// Even moments `μ_{2j}`, `j = 0..count`, of an even radial weight by one
/// shared quadrature pass: `2 ∫_lo^∞ x^{2j} w(x) dx`.
fn even_radial_quadrature(w: &WeightSpec, count: usize, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    let c = ctx.with_extra_digits(5);
    let (alpha, lo) = match w {
        WeightSpec::Spg { alpha, .. } | WeightSpec::Df { alpha, .. } => (c.exact(alpha), c.zero()),
        WeightSpec::SpgHardEdge { alpha, s, .. } => (c.exact(alpha), c.exact(s).sqrt()),
        _ => return Err(Error::InvalidFamily(format!("{} is not an even radial weight", w.family()))),
    };
    let mid = 2 * (count / 2);
    let peak = radial_peak(w, &(&alpha + mid as i32), &c);
    let vals = half_line_vec(
        |x, acc| {
            let mut v = w.evaluate(x, &c) * 2;
            let x2 = x * x;
            for slot in acc.iter_mut() {
                *slot = v.clone();
                v *= &x2;
            }
        },
        count,
        &lo,
        &peak,
        &c,
    )?;
    Ok(vals.into_iter().map(|v| v.with_prec(ctx.bits())).collect())
}

/// A single moment by quadrature, independent of any closed form.
pub fn moment_quadrature(w: &WeightSpec, k: usize, ctx: &PrecisionContext) -> Result<Real> {
    let c = ctx.with_extra_digits(5);
    let out = match w {
        WeightSpec::Spg { .. } | WeightSpec::Df { .. } | WeightSpec::SpgHardEdge { .. } => {
            if k % 2 == 1 {
                return Ok(ctx.zero());
            }
            let (alpha, lo) = match w {
                WeightSpec::SpgHardEdge { alpha, s, .. } => (c.exact(alpha), c.exact(s).sqrt()),
                WeightSpec::Spg { alpha, .. } | WeightSpec::Df { alpha, .. } => (c.exact(alpha), c.zero()),
                _ => unreachable!(),
            };
            let peak = radial_peak(w, &(&alpha + k as i32), &c);
            half_line_vec(
                |x, acc| acc[0] = w.evaluate(x, &c) * x.powi(k as i32) * 2,
                1,
                &lo,
                &peak,
                &c,
            )?
            .remove(0)
        }
        WeightSpec::Gj { a_coef, b_coef, t } => {
            let (ac, bc, t) = (c.exact(a_coef), c.exact(b_coef), c.exact(t));
            let kk = k as i32;
            // ∫_{-∞}^t = ∫_{-t}^∞ with x → -x
            let left = integrate(|u| (-(u * u)).exp() * (-u.clone()).powi(kk), Domain::Upper(-t.clone()), &c)?.value;
            let right = integrate(|x| (-(x * x)).exp() * x.powi(kk), Domain::Upper(t), &c)?.value;
            &ac * left + (&ac + &bc) * right
        }
        WeightSpec::Jc { alpha, a } => {
            if k % 2 == 1 {
                return Ok(ctx.zero());
            }
            let (alpha, a) = (c.exact(alpha), c.exact(a));
            let one = c.one();
            crate::mp::quad::integrate_nodes(
                |n| {
                    let r = n.right.as_ref().unwrap();
                    n.x.powi(k as i32) * (r * (&one + &n.x)).pow(&alpha) * 2
                },
                Domain::Finite(a, one.clone()),
                &c,
            )?
            .value
        }
    };
    Ok(out.with_prec(ctx.bits()))
}

/// `μ_0 … μ_{2N}` for one weight.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub weight: WeightSpec,
    pub entries: Vec<Real>,
    pub methods: Vec<Method>,
    pub ctx: PrecisionContext,
}

/// One row of a cross-check between a closed form and quadrature.
#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub k: usize,
    pub relative_difference: f64,
}

impl MomentTable {
    /// Largest `N` such that `μ_{2N}` is present.
    pub fn n(&self) -> usize {
        (self.entries.len() - 1) / 2
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(out);
        wr.write_record(["k", "value", "method"])?;
        for (k, (v, m)) in self.entries.iter().zip(&self.methods).enumerate() {
            wr.write_record([k.to_string(), v.to_sci(self.ctx.digits as usize), m.as_str().to_string()])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<_> = self
            .entries
            .iter()
            .zip(&self.methods)
            .enumerate()
            .map(|(k, (v, m))| serde_json::json!({"k": k, "value": v.to_sci(self.ctx.digits as usize), "method": m}))
            .collect();
        serde_json::json!({
            "weight": self.weight,
            "digits": self.ctx.digits,
            "guard": self.ctx.guard,
            "entries": entries,
        })
    }
}

/// Builds `μ_0 … μ_{2N}`. Closed-form entries are checked against
/// quadrature at `k ∈ {0, 1, 2, N, 2N}`; a relative mismatch above
/// `10^{-digits/2}` is a consistency error.
pub fn moment_table(w: &WeightSpec, n: usize, ctx: &PrecisionContext) -> Result<MomentTable> {
    let len = 2 * n + 1;
    let (entries, methods) = match closed_form(w, 0, len, ctx)? {
        Some(v) => (v, vec![Method::ClosedForm; len]),
        None => {
            let evens = even_radial_quadrature(w, n + 1, ctx)?;
            let mut v = Vec::with_capacity(len);
            for (j, e) in evens.into_iter().enumerate() {
                v.push(e);
                if j < n {
                    v.push(ctx.zero());
                }
            }
            (v, vec![Method::Quadrature; len])
        }
    };
    let table = MomentTable { weight: w.clone(), entries, methods, ctx: *ctx };
    if table.methods[0] == Method::ClosedForm {
        let checks = cross_check(&table)?;
        let tol = 10f64.powf(-(ctx.digits as f64) / 2.0);
        if let Some(bad) = checks.iter().find(|c| !(c.relative_difference <= tol)) {
            return Err(Error::Consistency(format!(
                "closed-form moment k={} differs from quadrature by {:e}",
                bad.k, bad.relative_difference
            )));
        }
    }
    if !(table.entries[0].to_f64() > 0.0) {
        return Err(Error::Consistency("μ_0 is not positive".into()));
    }
    Ok(table)
}

/// Relative differences between table entries and independent quadrature at
/// `k ∈ {0, 1, 2, N, 2N}`.
pub fn cross_check(table: &MomentTable) -> Result<Vec<CrossCheck>> {
    let n = table.n();
    // Agreement is required to half the working digits only.
    let qctx = PrecisionContext {
        digits: (table.ctx.digits / 2 + 20).max(PrecisionContext::MIN_DIGITS),
        guard: table.ctx.guard,
    };
    let mut ks = vec![0, 1, 2, n, 2 * n];
    ks.retain(|&k| k < table.entries.len());
    ks.sort_unstable();
    ks.dedup();
    let mut out = Vec::new();
    for k in ks {
        let q = moment_quadrature(&table.weight, k, &qctx)?;
        let v = &table.entries[k].with_prec(qctx.bits());
        let diff = (&q - v).abs();
        let scale = q.abs().max(&v.abs());
        let rel = if scale.is_zero() { 0.0 } else { (diff / scale).to_f64() };
        out.push(CrossCheck { k, relative_difference: rel });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::Exact;

    fn q(s: &str) -> Exact {
        Exact::parse(s).unwrap()
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(60, 15).unwrap()
    }

    fn rel(a: &Real, b: &Real) -> f64 {
        ((a - b).abs() / b.abs()).to_f64()
    }

    #[test]
    fn odd_moments_of_even_weights_vanish() {
        let c = ctx();
        for w in [
            WeightSpec::spg(q("1"), q("1/10")).unwrap(),
            WeightSpec::df(q("1"), q("1")).unwrap(),
            WeightSpec::jc(q("1"), q("1/2")).unwrap(),
        ] {
            let t = moment_table(&w, 2, &c).unwrap();
            assert!(t.entries[1].is_zero() && t.entries[3].is_zero());
        }
    }

    #[test]
    fn gaussian_moment() {
        let c = ctx();
        let w = WeightSpec::gj(q("1"), q("0"), q("0")).unwrap();
        let m = moment(&w, 0, &c).unwrap();
        assert!(rel(&m.value, &c.pi().sqrt()) < 1e-58);
    }

    #[test]
    fn spg_bessel_against_quadrature() {
        let c = ctx();
        let w = WeightSpec::spg(q("1"), q("1")).unwrap();
        let m = moment(&w, 0, &c).unwrap();
        let qv = moment_quadrature(&w, 0, &c).unwrap();
        assert_eq!(m.method, Method::ClosedForm);
        assert!(rel(&m.value, &qv) < 1e-58);
    }

    #[test]
    fn jc_small_gap_limit() {
        let c = ctx();
        let w = WeightSpec::jc(q("1"), q("1e-6")).unwrap();
        let m = moment(&w, 0, &c).unwrap();
        assert!((m.value.to_f64() - 4.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn df_two_ways() {
        let c = ctx();
        let w = WeightSpec::df(q("1"), q("0")).unwrap();
        let t = moment_table(&w, 1, &c).unwrap();
        let exact = c.real(0.5).gamma() / 2;
        assert!(rel(&t.entries[0], &exact) < 1e-58);
        let single = moment_quadrature(&w, 2, &c).unwrap();
        assert!(rel(&t.entries[2], &single) < 1e-58);
    }

    #[test]
    fn df_series_oracle() {
        // μ_k = ½ Σ_j t^j/j! Γ((α+k+2j+1)/4)
        let c = ctx();
        let w = WeightSpec::df(q("1"), q("3/2")).unwrap();
        let t = moment_table(&w, 3, &c).unwrap();
        for k in [0usize, 2, 6] {
            let tt = c.real(1.5);
            let mut sum = c.zero();
            let mut pw = c.one();
            for j in 0..400i32 {
                if j > 0 {
                    pw = pw * &tt / j;
                }
                sum += &pw * (c.int((2 + k as i32 + 2 * j) as i64) / 4).gamma();
            }
            assert!(rel(&t.entries[k], &(sum / 2)) < 1e-55, "k = {k}");
        }
    }

    #[test]
    fn gj_closed_forms_both_signs_of_t() {
        let c = ctx();
        for ts in ["1/2", "-3/4", "0"] {
            let w = WeightSpec::gj(q("1"), q("2"), q(ts)).unwrap();
            let t = moment_table(&w, 3, &c).unwrap();
            for ch in cross_check(&t).unwrap() {
                assert!(ch.relative_difference < 1e-55, "t = {ts}, k = {}", ch.k);
            }
            for k in [3usize, 5] {
                let qv = moment_quadrature(&w, k, &c).unwrap();
                assert!(rel(&t.entries[k], &qv) < 1e-55);
            }
        }
    }

    #[test]
    fn hard_edge_closed_forms() {
        let c = ctx();
        let w = WeightSpec::spg_hard_edge(q("1"), q("0"), q("3/10")).unwrap();
        let t = moment_table(&w, 2, &c).unwrap();
        assert_eq!(t.methods[0], Method::ClosedForm);
        let w2 = WeightSpec::spg_hard_edge(q("1"), q("1/5"), q("3/10")).unwrap();
        let t2 = moment_table(&w2, 2, &c).unwrap();
        assert_eq!(t2.methods[0], Method::Quadrature);
        let single = moment_quadrature(&w2, 4, &c).unwrap();
        assert!(rel(&t2.entries[4], &single) < 1e-55);
    }

    #[test]
    fn csv_and_json_shapes() {
        let c = ctx();
        let w = WeightSpec::spg(q("1"), q("1/10")).unwrap();
        let t = moment_table(&w, 1, &c).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("k,value,method\n0,"));
        assert_eq!(s.lines().count(), 4);
        let j = t.to_json();
        assert_eq!(j["entries"].as_array().unwrap().len(), 3);
        assert_eq!(j["weight"]["family"], "spg");
    }
}
