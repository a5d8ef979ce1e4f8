//! Finite-n ODEs for the monic orthogonal polynomials of each family.

use serde::{Deserialize, Serialize};

use super::RationalODE2;
use crate::error::{Error, Result};
use crate::mp::{PrecisionContext, Real};
use crate::poly::{Poly, RationalFn};

/// Readings of the second line of the SPG `Q_n` display, which ends in a
/// stray factor 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpgReading {
    DropStray8,
    KeepStray8,
}

/// What the `2α+1` in the DF coefficients refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DfExponent {
    /// `2α+1` with `α` the weight exponent `|x|^α`.
    Printed,
    /// `2α+1` replaced by the weight exponent itself.
    WeightShifted,
}

/// Placement of the `(2α+1)[1−(−1)^n]` terms around the unbalanced bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DfBracket {
    /// `− (8β_n x² + c S)/D + c S (t − 1/(2x²))`.
    AsDisplayed,
    /// `− 8β_n x²/D − c S + c S (t − 1/(2x²))`.
    SplitNumerator,
    /// `− (8β_n x² + c S (1 + t − 1/(2x²)))/D`.
    MergedTail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfReading {
    pub exponent: DfExponent,
    pub bracket: DfBracket,
}

impl DfReading {
    pub const ALL: [DfReading; 6] = [
        DfReading { exponent: DfExponent::Printed, bracket: DfBracket::AsDisplayed },
        DfReading { exponent: DfExponent::Printed, bracket: DfBracket::SplitNumerator },
        DfReading { exponent: DfExponent::Printed, bracket: DfBracket::MergedTail },
        DfReading { exponent: DfExponent::WeightShifted, bracket: DfBracket::AsDisplayed },
        DfReading { exponent: DfExponent::WeightShifted, bracket: DfBracket::SplitNumerator },
        DfReading { exponent: DfExponent::WeightShifted, bracket: DfBracket::MergedTail },
    ];
}

fn parity(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// SPG ODE for `P_n`, weight `|x|^α exp(−x² − t/x²)`, from `β_{n−1}, β_n, β_{n+1}`.
pub fn spg_ode(
    n: usize,
    alpha: &Real,
    t: &Real,
    betas: [&Real; 3],
    reading: SpgReading,
    ctx: &PrecisionContext,
) -> Result<RationalODE2> {
    let [bp, bn, bn1] = betas;
    let one = ctx.one();
    let x = Poly::x(&one);
    let k = |v: Real| Poly::constant(v);
    let x2 = &x * &x;
    let x3 = &x2 * &x;
    let x4 = &x2 * &x2;
    let nn = ctx.int(n as i64);
    let e = bn.clone() * 2i32 + bn1.clone() * 2i32 - alpha - &nn * 2i32 - 1i32;
    let s = ctx.int(1 - parity(n));
    let sp = ctx.int(1 + parity(n));
    let a = bn.clone() * 2i32 - &nn;
    let d = &x2.scale(&ctx.int(2)) + &k(e.clone());
    let d2 = &x2.scale(&ctx.int(2)) + &k(bp.clone() * 2i32 + bn.clone() * 2i32 - alpha - &nn * 2i32 + 1i32);
    let np = &x2.scale(&a) + &k(&s * t);

    let t_num = &(&(&x2.scale(&(e.clone() * 2i32)) - &(&x4 * &d).scale(&ctx.int(2))) + &d.scale(&(t.clone() * 2i32)))
        + &(&x2 * &d).scale(alpha);
    let t_den = &x3 * &d;

    let factor = match reading {
        SpgReading::DropStray8 => ctx.one(),
        SpgReading::KeepStray8 => ctx.int(8),
    };
    let bracket = &(&x4.scale(&ctx.int(2)) + &x2.scale(&(&a - alpha))) - &k(&sp * t);
    let q_num = &(&(&(&(&x4 * &d).scale(&-a.clone()) - &(&x2 * &d).scale(&(&s * t * 3i32)))
        + &(&np * &x2).scale(&(e * 2i32)))
        - &(&(&bracket * &np) * &d).scale(&factor))
        + &(&(&(&d * &d2) * &x2) * &d).scale(bn);
    let q_den = &(&x3 * &x3) * &d;
    let label = match reading {
        SpgReading::DropStray8 => format!("spg n={n}"),
        SpgReading::KeepStray8 => format!("spg n={n} (stray 8 kept)"),
    };
    RationalODE2::new(RationalFn::new(t_num, t_den), RationalFn::new(q_num, q_den), label, ctx)
}

/// DF ODE for `P_n`, weight `|x|^α exp(−x⁴ + t x²)`, with `α` the weight exponent.
pub fn df_ode(
    n: usize,
    alpha: &Real,
    t: &Real,
    betas: [&Real; 3],
    reading: DfReading,
    ctx: &PrecisionContext,
) -> Result<RationalODE2> {
    let [bp, bn, bn1] = betas;
    let one = ctx.one();
    let x = Poly::x(&one);
    let k = |v: Real| Poly::constant(v);
    let x2 = &x * &x;
    let x4 = &x2 * &x2;
    let half_t = t / 2i32;
    let c = match reading.exponent {
        DfExponent::Printed => alpha.clone() * 2i32 + 1i32,
        DfExponent::WeightShifted => alpha.clone(),
    };
    let d = &x2 + &k(bn + bn1 - &half_t);
    // T = [(-4x^3 + 2tx) x D + c D - 2x^2] / (x D)
    let cubic = Poly::new(vec![ctx.zero(), t.clone() * 2i32, ctx.zero(), ctx.int(-4)]);
    let t_num = &(&(&(&cubic * &x) * &d) + &d.scale(&c)) - &x2.scale(&ctx.int(2));
    let t_den = &x * &d;

    let kk = bn.clone() * 4i32
        + bn.clone() * 16i32 * (bn + bn1 - &half_t) * (bn + bp - &half_t)
        + &c * bn * (4 * parity(n)) as i32;
    let cs = &c * ctx.int(1 - parity(n));
    let base = &x2.scale(&ctx.int(4 * n as i64)) + &k(kk);
    let two_x2_d = (&x2 * &d).scale(&ctx.int(2));
    let q_num = match reading.bracket {
        DfBracket::AsDisplayed => {
            let poly = &base + &k(&cs * t);
            &(&(&poly * &two_x2_d) - &(&x2 * &(&x2.scale(&(bn.clone() * 8i32)) + &k(cs.clone()))).scale(&ctx.int(2)))
                - &d.scale(&cs)
        }
        DfBracket::SplitNumerator => {
            let poly = &(&base - &k(cs.clone())) + &k(&cs * t);
            &(&(&poly * &two_x2_d) - &x4.scale(&(bn.clone() * 16i32))) - &d.scale(&cs)
        }
        DfBracket::MergedTail => {
            let tail = &cs * (t + 1i32) * 2i32;
            &(&(&(&base * &two_x2_d) - &x4.scale(&(bn.clone() * 16i32))) - &x2.scale(&tail)) + &k(cs.clone())
        }
    };
    let q_den = two_x2_d;
    RationalODE2::new(
        RationalFn::new(t_num, t_den),
        RationalFn::new(q_num, q_den),
        format!("df n={n} {:?}/{:?}", reading.exponent, reading.bracket),
        ctx,
    )
}

/// `R_n`, `R_n'` and, for JC, the derived `r_n` and `β_n`.
#[derive(Clone, Debug)]
pub struct AuxiliaryQuantities {
    pub rn: Real,
    pub rn_prime: Real,
    pub r_small: Option<Real>,
    pub beta_n: Option<Real>,
}

impl AuxiliaryQuantities {
    pub fn gj(rn: Real, rn_prime: Real) -> Self {
        AuxiliaryQuantities { rn, rn_prime, r_small: None, beta_n: None }
    }

    pub fn jc(n: usize, alpha: &Real, a: &Real, rn: Real, rn_prime: Real) -> Result<Self> {
        let r = jc_r_small(n, alpha, a, &rn, &rn_prime)?;
        let b = jc_beta(n, alpha, a, &rn, &r)?;
        Ok(AuxiliaryQuantities { rn, rn_prime, r_small: Some(r), beta_n: Some(b) })
    }

    /// Large-n form `R_n(t) = 2√(6n)/3 + 4t/3`, with `R_n' = 4/3`.
    pub fn gj_asymptotic(n: usize, t: &Real, ctx: &PrecisionContext) -> Self {
        let rn = (ctx.int(6 * n as i64)).sqrt() * 2i32 / 3i32 + t.clone() * 4i32 / 3i32;
        AuxiliaryQuantities::gj(rn, ctx.int(4) / 3i32)
    }

    /// Large-n form `R_n(a) = (2an + 2αa + a + 1)/(1 − a²)` and its `a`-derivative.
    pub fn jc_asymptotic(n: usize, alpha: &Real, a: &Real, ctx: &PrecisionContext) -> Result<Self> {
        let l = alpha.clone() * 2i32 + (2 * n as i32 + 1);
        let den = -(a * a) + 1i32;
        let num = a * &l + 1i32;
        let rn = &num / &den;
        let rn_prime = (&l * &den + a.clone() * 2i32 * &num) / (&den * &den);
        let _ = ctx;
        AuxiliaryQuantities::jc(n, alpha, a, rn, rn_prime)
    }
}

fn nonzero(v: Real, what: &str) -> Result<Real> {
    if v.is_zero() {
        Err(Error::Domain(format!("{what} vanishes")))
    } else {
        Ok(v)
    }
}

/// `r_n(a)` from `R_n(a)` and `R_n'(a)`, term by term as displayed.
pub fn jc_r_small(n: usize, alpha: &Real, a: &Real, rn: &Real, rn_prime: &Real) -> Result<Real> {
    let a2m1 = a * a - 1i32;
    let an = alpha + n as i32;
    let num = a * (-(&a2m1 * rn_prime) + &a2m1 * rn * rn + a.clone() * 2i32 * &an * rn);
    let den = (&a2m1 * rn + a * (alpha.clone() * 2i32 + (2 * n as i32 + 1))) * 2i32;
    Ok(num / nonzero(den, "r_n denominator")?)
}

/// `r_n(a)` with numerator and denominator regrouped.
pub fn jc_r_small_expanded(n: usize, alpha: &Real, a: &Real, rn: &Real, rn_prime: &Real) -> Result<Real> {
    let a2 = a * a;
    let num = &a2 * a * (rn * rn - rn_prime) - a * (rn * rn - rn_prime)
        + &a2 * rn * (alpha.clone() * 2i32 + 2 * n as i32);
    let den = &a2 * rn * 2i32 - rn.clone() * 2i32 + a * (alpha.clone() * 4i32 + (4 * n as i32 + 2));
    Ok(num / nonzero(den, "r_n denominator")?)
}

/// `β_n(a)` from `R_n(a)` and `r_n(a)`.
pub fn jc_beta(n: usize, alpha: &Real, a: &Real, rn: &Real, r: &Real) -> Result<Real> {
    let l = alpha.clone() * 2i32 + (2 * n as i32 + 1);
    let first = (r + n as i32) * (r + alpha.clone() * 2i32 + n as i32) / nonzero(a * rn + &l, "aR_n + 2α + 2n + 1")?;
    let second = a * r * r / nonzero(rn.clone(), "R_n")?;
    Ok((first - second) / nonzero(alpha.clone() * 2i32 + (2 * n as i32 - 1), "2n + 2α − 1")?)
}

/// GJ ODE for `P_n`, weight `exp(−x²)(A + Bθ(x−t))`, in terms of `R_n(t)`.
pub fn gj_ode(n: usize, t: &Real, aux: &AuxiliaryQuantities, ctx: &PrecisionContext) -> Result<RationalODE2> {
    let r = &aux.rn;
    let rp = &aux.rn_prime;
    if r.is_zero() {
        return Err(Error::Domain("R_n vanishes".into()));
    }
    let one = ctx.one();
    let x = Poly::x(&one);
    let k = |v: Real| Poly::constant(v);
    let xt = Poly::linear_root(t);
    let lin = &xt.scale(&ctx.int(2)) + &k(r.clone());
    let xt2 = &xt * &xt;
    let m = rp - r * r + t.clone() * 2i32 * r;
    let kk = rp * rp - r.clone().powi(4) + t.clone() * 4i32 * r.clone().powi(3)
        + (ctx.int(8 * n as i64) - t.clone() * t * 4i32) * r * r;

    let p = &RationalFn::new(k(r.clone()), &xt * &lin) - &RationalFn::poly(x.scale(&ctx.int(2)));
    let q = &(&(&RationalFn::constant(ctx.int(2 * n as i64))
        - &RationalFn::new(k(m.clone()), xt2.scale(&ctx.int(4))))
        + &RationalFn::new(k(r * &m), &xt2.scale(&ctx.int(4)) * &lin))
        + &RationalFn::new(k(kk), xt.scale(&(r.clone() * 8i32)));
    RationalODE2::new(p, q, format!("gj n={n}"), ctx)
}

/// JC ODE for `P_n`, weight `(1−x²)^α` on `a ≤ |x| ≤ 1`, in terms of
/// `R_n(a)`, `R_n'(a)`.
pub fn jc_ode(n: usize, alpha: &Real, a: &Real, aux: &AuxiliaryQuantities, ctx: &PrecisionContext) -> Result<RationalODE2> {
    let rn = &aux.rn;
    let r = match &aux.r_small {
        Some(r) => r.clone(),
        None => jc_r_small(n, alpha, a, rn, &aux.rn_prime)?,
    };
    let beta = match &aux.beta_n {
        Some(b) => b.clone(),
        None => jc_beta(n, alpha, a, rn, &r)?,
    };
    let one = ctx.one();
    let x = Poly::x(&one);
    let k = |v: Real| Poly::constant(v);
    let x2 = &x * &x;
    let a2 = a * a;
    let l = alpha.clone() * 2i32 + (2 * n as i32 + 1);
    let nr = ctx.int(n as i64);
    let an = alpha + n as i32;
    let x2m1 = &x2 - &k(one.clone());
    let x2ma2 = &x2 - &k(a2.clone());
    let a2mx2 = -&x2ma2;
    let ar = a * (&a2 - 1i32) * rn;

    // (a − a³)R − (a² − x²)L, the denominator in T_n.
    let dt = &k(-ar.clone()) - &a2mx2.scale(&l);
    let p = &(&RationalFn::new(x.scale(&(alpha.clone() * 2i32 + 2i32)), x2m1.clone())
        + &RationalFn::new(x.scale(&ctx.int(2)), x2ma2.clone()))
        - &RationalFn::new(x.scale(&(l.clone() * 2i32)), dt);

    let inner = &a2mx2.scale(&l) + &k(ar.clone());
    let q1 = RationalFn::new(
        (&(&x2 + &k(a2.clone())).scale(&l) + &k(ar.clone())).scale(&((-&a2 + 1i32) * &r)),
        &(&x2m1 * &a2mx2) * &inner,
    );
    let q2 = RationalFn::new(
        (&(&a2mx2 * &a2mx2).scale(&l) + &(&k(a2.clone()) - &x2.scale(&ctx.int(3))).scale(&ar)).scale(&nr),
        &(&x2m1 * &x2ma2) * &(&k(-ar.clone()) + &x2ma2.scale(&l)),
    );
    let q3_num = &a2mx2.scale(&(&nr * &nr + alpha.clone() * 2i32 * &nr))
        + &k((&a2 - 1i32) * 2i32 * &an * &r + ((&an * &an) - 1i32) * 4i32 * &beta - &nr * (alpha.clone() * 2i32 + &nr));
    let q3 = RationalFn::new(q3_num, &x2ma2 * &x2m1);
    let q = &(&q1 - &q2) + &q3;
    RationalODE2::new(p, q, format!("jc n={n}"), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linode::GENERIC_X;
    use crate::moments::moment_table;
    use crate::mp::Exact;
    use crate::orthopoly::build_recurrence;
    use crate::weights::WeightSpec;

    fn table(w: &WeightSpec, n: usize, ctx: &PrecisionContext) -> crate::orthopoly::RecurrenceTable {
        let m = moment_table(w, n + 2, ctx).unwrap();
        build_recurrence(&m, n + 1, ctx).unwrap()
    }

    fn worst(ode: &RationalODE2, rec: &crate::orthopoly::RecurrenceTable, n: usize) -> Real {
        ode.max_normalized(|x| rec.eval_poly(n, x), &GENERIC_X).unwrap()
    }

    #[test]
    fn spg_reading_adjudicated() {
        let ctx = PrecisionContext::new(120, 20).unwrap();
        let w = WeightSpec::spg(Exact::int(1), Exact::parse("1/10").unwrap()).unwrap();
        let rec = table(&w, 6, &ctx);
        let (al, t) = (ctx.int(1), ctx.exact(&Exact::new(1, 10)));
        for n in [5usize, 6] {
            let b = [&rec.beta[n - 1], &rec.beta[n], &rec.beta[n + 1]];
            let good = spg_ode(n, &al, &t, b, SpgReading::DropStray8, &ctx).unwrap();
            let bad = spg_ode(n, &al, &t, b, SpgReading::KeepStray8, &ctx).unwrap();
            assert!(worst(&good, &rec, n) < ctx.pow10(-30));
            assert!(worst(&bad, &rec, n) > ctx.real(1e-2));
        }
    }

    #[test]
    fn df_reading_adjudicated() {
        let ctx = PrecisionContext::new(120, 20).unwrap();
        let w = WeightSpec::df(Exact::int(1), Exact::int(1)).unwrap();
        let rec = table(&w, 7, &ctx);
        let (al, t) = (ctx.int(1), ctx.int(1));
        for n in [6usize, 7] {
            let b = [&rec.beta[n - 1], &rec.beta[n], &rec.beta[n + 1]];
            for reading in DfReading::ALL {
                let r = worst(&df_ode(n, &al, &t, b, reading, &ctx).unwrap(), &rec, n);
                let expect_ok = reading.exponent == DfExponent::WeightShifted
                    && (n % 2 == 0 || reading.bracket == DfBracket::AsDisplayed);
                assert_eq!(r < ctx.pow10(-30), expect_ok, "{reading:?} n={n}: {r}");
                if reading.exponent == DfExponent::Printed {
                    assert!(r > ctx.real(1e-2));
                }
            }
        }
    }

    #[test]
    fn df_first_polynomial() {
        let ctx = PrecisionContext::new(80, 20).unwrap();
        let w = WeightSpec::df(Exact::int(1), Exact::int(1)).unwrap();
        let rec = table(&w, 2, &ctx);
        let b = [&rec.beta[0], &rec.beta[1], &rec.beta[2]];
        let reading = DfReading { exponent: DfExponent::WeightShifted, bracket: DfBracket::AsDisplayed };
        let ode = df_ode(1, &ctx.int(1), &ctx.int(1), b, reading, &ctx).unwrap();
        let one = ctx.one();
        let z = ctx.zero();
        for &x in &GENERIC_X {
            let xr = ctx.real(x);
            let r = ode.residual(&xr, &one, &z, &xr).unwrap();
            assert!(r.normalized < ctx.pow10(-50));
        }
    }

    #[test]
    fn spg_t_approaches_limit() {
        let ctx = PrecisionContext::new(200, 20).unwrap();
        let w = WeightSpec::spg(Exact::int(1), Exact::parse("1/10").unwrap()).unwrap();
        let rec = table(&w, 40, &ctx);
        let (al, t) = (ctx.int(1), ctx.exact(&Exact::new(1, 10)));
        let x = ctx.real(0.9);
        let gap = |n: usize| {
            let ode = spg_ode(n, &al, &t, [&rec.beta[n - 1], &rec.beta[n], &rec.beta[n + 1]], SpgReading::DropStray8, &ctx)
                .unwrap();
            let (p, _) = ode.coefficients(&x).unwrap();
            (p + x.clone() * 2i32 - t.clone() * 2i32 / x.clone().powi(3) - &al / &x).abs()
        };
        assert!(gap(40) < gap(10));
    }

    #[test]
    fn jc_asymptotic_coefficients_finite() {
        let ctx = PrecisionContext::new(60, 20).unwrap();
        let (al, a) = (ctx.int(1), ctx.real(0.5));
        let aux = AuxiliaryQuantities::jc_asymptotic(10, &al, &a, &ctx).unwrap();
        let ode = jc_ode(10, &al, &a, &aux, &ctx).unwrap();
        for x in [0.55, 0.7, 0.85, 0.95] {
            let (p, q) = ode.coefficients(&ctx.real(x)).unwrap();
            assert!(p.is_finite() && q.is_finite());
        }
    }

    #[test]
    fn jc_r_small_two_ways() {
        let ctx = PrecisionContext::new(60, 20).unwrap();
        let (al, a) = (ctx.real(1.5), ctx.real(0.4));
        let (r, rp) = (ctx.real(2.7), ctx.real(-1.3));
        let d = jc_r_small(7, &al, &a, &r, &rp).unwrap() - jc_r_small_expanded(7, &al, &a, &r, &rp).unwrap();
        assert!(d.abs() < ctx.pow10(-55));
    }

    #[test]
    fn gj_t_tends_to_limit() {
        let ctx = PrecisionContext::new(60, 20).unwrap();
        let t = ctx.real(0.5);
        let x = ctx.real(1.3);
        let limit = ctx.one() / (&x - &t) - x.clone() * 2i32;
        let gap = |n: usize| {
            let ode = gj_ode(n, &t, &AuxiliaryQuantities::gj_asymptotic(n, &t, &ctx), &ctx).unwrap();
            (ode.coefficients(&x).unwrap().0 - &limit).abs()
        };
        assert!(gap(10_000) < gap(100));
        assert!(gap(10_000) < ctx.real(0.05));
    }
}
