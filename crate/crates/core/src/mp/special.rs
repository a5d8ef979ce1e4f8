//! Special functions at arbitrary precision: modified Bessel K, the Barnes
//! G-function, incomplete gamma and incomplete beta.

use rug::float::Constant;
use rug::Float;

use super::quad::{integrate, integrate_nodes, Domain};
use super::{PrecisionContext, Real};
use crate::error::{Error, Result};

fn ctx_plus(ctx: &PrecisionContext, extra: u32) -> PrecisionContext {
    PrecisionContext { digits: ctx.digits + extra, guard: ctx.guard }
}

fn euler_gamma(bits: u32) -> Real {
    Real::from_float(Float::with_val(bits, Constant::Euler))
}

/// Modified Bessel function of the second kind `K_ν(x)`, real order, `x > 0`.
pub fn bessel_k(nu: &Real, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if !(x.to_f64() > 0.0) {
        return Err(Error::Domain(format!("besselK requires x > 0, got {x}")));
    }
    let nu = nu.abs();
    let out = if x.to_f64() >= 10.0 {
        bessel_k_integral(&nu, x, ctx)?
    } else {
        bessel_k_series(&nu, x, ctx)?
    };
    Ok(out.with_prec(ctx.bits()))
}

/// `K_{ν+j}(x)` for `j = 0..count` by upward recurrence from the first two
/// orders, which is stable for `K`.
pub fn bessel_k_sequence(nu: &Real, x: &Real, count: usize, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let c = ctx_plus(ctx, 5);
    let x = x.with_prec(c.bits());
    let nu = nu.with_prec(c.bits());
    let mut out = vec![bessel_k(&nu, &x, &c)?];
    if count > 1 {
        out.push(bessel_k(&(&nu + 1), &x, &c)?);
    }
    for j in 2..count {
        let order = &nu + (j as i32 - 1);
        let next = &out[j - 2] + &order * 2 / &x * &out[j - 1];
        out.push(next);
    }
    Ok(out.into_iter().map(|v| v.with_prec(ctx.bits())).collect())
}

/// `K_ν(x) = ∫_0^∞ e^{-x cosh u} cosh(νu) du`, evaluated as
/// `e^{-x} ∫ e^{-2x sinh²(u/2)} cosh(νu) du`.
pub fn bessel_k_integral(nu: &Real, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let c = ctx_plus(ctx, 10);
    let x = x.with_prec(c.bits());
    let nu = nu.with_prec(c.bits());
    let r = integrate(
        |u| {
            let s = (u / 2).sinh();
            (-(&x * &s * &s * 2)).exp() * (&nu * u).cosh()
        },
        Domain::Upper(c.zero()),
        &c,
    )?;
    Ok(r.value * (-x).exp())
}

fn bessel_k_series(nu: &Real, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let n = nu.floor_i64();
    let mu = nu - &nu.lift_int(n);
    let x64 = x.to_f64();
    // Cancellation between growing and decaying parts costs about 2x/ln 10 digits.
    let mut extra = (2.0 * x64 / std::f64::consts::LN_10).ceil() as u32 + 20;
    let frac = mu.to_f64();
    let half = (frac - 0.5).abs() < 1e-300 && (&mu * 2 - mu.lift_int(1)).is_zero();
    if !mu.is_zero() && !half {
        let near = frac.min(1.0 - frac).max(1e-300);
        extra += (-near.log10()).ceil().max(0.0) as u32;
    }
    let c = ctx_plus(ctx, extra);
    let bits = c.bits();
    let x = x.with_prec(bits);
    let mu = mu.with_prec(bits);

    let (k0, k1) = if mu.is_zero() {
        (k0_series(&x, &c), k1_series(&x, &c))
    } else if half {
        let k = (c.pi() / (&x * 2)).sqrt() * (-x.clone()).exp();
        let k1 = &k * (x.lift_int(1) + x.recip());
        (k, k1)
    } else {
        let pi = c.pi();
        let s = (&pi * &mu).sin();
        let i_neg = bessel_i_series(&-mu.clone(), &x, &c);
        let i_pos = bessel_i_series(&mu, &x, &c);
        let mu1 = &mu + 1;
        let i_neg1 = bessel_i_series(&-mu1.clone(), &x, &c);
        let i_pos1 = bessel_i_series(&mu1, &x, &c);
        let k = &pi / 2 * (i_neg - i_pos) / &s;
        let k1 = &pi / 2 * (i_pos1 - i_neg1) / &s;
        (k, k1)
    };
    if n == 0 {
        return Ok(k0);
    }
    let mut prev = k0;
    let mut cur = k1;
    for j in 1..n {
        let order = &mu + j as i32;
        let next = prev + &order * 2 / &x * &cur;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `I_ν(x) = Σ (x/2)^{2k+ν} / (k! Γ(k+ν+1))` for real order; the reciprocal
/// gamma vanishes at nonpositive integers.
fn bessel_i_series(nu: &Real, x: &Real, c: &PrecisionContext) -> Real {
    let hx = x / 2;
    let q = &hx * &hx;
    let eps = c.pow10(-((c.digits + c.guard) as i32));
    let g = rgamma(&(nu + 1));
    let mut term = hx.pow(nu) * g;
    let mut sum = term.clone();
    let mut k = 1i32;
    loop {
        term = term * &q / (nu + k) / k;
        sum += &term;
        if term.abs() <= sum.abs() * &eps && k > 2 {
            break;
        }
        k += 1;
    }
    sum
}

fn rgamma(z: &Real) -> Real {
    let zf = z.to_f64();
    if zf <= 0.0 && zf == zf.round() && (z - &z.lift_int(zf as i64)).is_zero() {
        return z.lift_int(0);
    }
    z.gamma().recip()
}

fn k0_series(x: &Real, c: &PrecisionContext) -> Real {
    let bits = c.bits();
    let q = x * x / 4;
    let eps = c.pow10(-((c.digits + c.guard) as i32));
    let lead = -((x / 2).ln() + euler_gamma(bits));
    let mut term = Real::from_i64(bits, 1);
    let mut harmonic = Real::from_i64(bits, 0);
    let mut sum = lead.clone();
    let mut k = 1i32;
    loop {
        term = term * &q / (k * k);
        harmonic += Real::from_i64(bits, 1) / k;
        let t = &term * (&lead + &harmonic);
        sum += &t;
        if t.abs() <= sum.abs() * &eps && k > 2 {
            break;
        }
        k += 1;
    }
    sum
}

fn k1_series(x: &Real, c: &PrecisionContext) -> Real {
    let bits = c.bits();
    let q = x * x / 4;
    let eps = c.pow10(-((c.digits + c.guard) as i32));
    let lnh = (x / 2).ln();
    let g = euler_gamma(bits);
    // K1 = 1/x + Σ_k (x/2)^{2k+1}/(k!(k+1)!) [ln(x/2) - (ψ(k+1)+ψ(k+2))/2]
    let mut psi_a = -g.clone();
    let mut psi_b = Real::from_i64(bits, 1) - &g;
    let mut term = x / 2;
    let mut sum = x.recip() + &term * (&lnh - (&psi_a + &psi_b) / 2);
    let mut k = 1i32;
    loop {
        term = term * &q / (k * (k + 1));
        psi_a += Real::from_i64(bits, 1) / k;
        psi_b += Real::from_i64(bits, 1) / (k + 1);
        let t = &term * (&lnh - (&psi_a + &psi_b) / 2);
        sum += &t;
        if t.abs() <= sum.abs() * &eps && k > 2 {
            break;
        }
        k += 1;
    }
    sum
}

/// `ln G(z)` for the Barnes G-function, `z > 0`.
pub fn ln_barnes_g(z: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if !(z.to_f64() > 0.0) {
        return Err(Error::Domain(format!("lnBarnesG requires z > 0, got {z}")));
    }
    let c = ctx_plus(ctx, 10);
    let bits = c.bits();
    let z = z.with_prec(bits);
    let n = z.floor_i64();
    let w = &z - &z.lift_int(n);
    if w.is_zero() {
        // ln G(n) = Σ_{k=1}^{n-2} ln k!
        let mut acc = c.zero();
        for k in 2..(n - 1).max(2) {
            acc += c.int(k + 1).ln_gamma();
        }
        return Ok(acc.with_prec(ctx.bits()));
    }
    // z = 1 + w + m with w ∈ (0,1): ln G(1+w) by the integral formula.
    let lg1w = {
        let inner = integrate(|x| (x + 1).ln_gamma(), Domain::Finite(c.zero(), w.clone()), &c)?.value;
        let two_pi = c.pi() * 2;
        &w / 2 * two_pi.ln() - &w * (&w + 1) / 2 + &w * (&w + 1).ln_gamma() - inner
    };
    let mut acc = lg1w;
    if n == 0 {
        acc -= w.ln_gamma();
    } else {
        for j in 1..n {
            acc += (&w + j as i32).ln_gamma();
        }
    }
    Ok(acc.with_prec(ctx.bits()))
}

/// Upper incomplete gamma `Γ(a, x)`, `x ≥ 0`, computed by MPFR.
pub fn inc_gamma_upper(a: &Real, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if x.is_negative() {
        return Err(Error::Domain(format!("incGammaUpper requires x >= 0, got {x}")));
    }
    let bits = ctx.bits() + 32;
    let a = a.with_prec(bits);
    let x = x.with_prec(bits);
    let v = Float::with_val(bits, a.float().gamma_inc_ref(x.float()));
    Ok(Real::from_float(v).with_prec(ctx.bits()))
}

/// Lower incomplete gamma `γ(a, x) = x^a e^{-x} Σ x^k / (a)_{k+1}`, `a > 0`.
pub fn inc_gamma_lower(a: &Real, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if x.is_negative() || !(a.to_f64() > 0.0) {
        return Err(Error::Domain("incGammaLower requires a > 0 and x >= 0".into()));
    }
    if x.is_zero() {
        return Ok(ctx.zero());
    }
    let c = ctx_plus(ctx, 10);
    let a = a.with_prec(c.bits());
    let x = x.with_prec(c.bits());
    let eps = c.pow10(-((c.digits + c.guard) as i32));
    let mut term = a.recip();
    let mut sum = term.clone();
    let mut k = 1i32;
    loop {
        term = term * &x / (&a + k);
        sum += &term;
        if term.abs() <= sum.abs() * &eps && k > 2 {
            break;
        }
        k += 1;
    }
    Ok((sum * x.pow(&a) * (-x).exp()).with_prec(ctx.bits()))
}

/// Complete beta function.
pub fn beta(a: &Real, b: &Real) -> Real {
    (a.ln_gamma() + b.ln_gamma() - (a + b).ln_gamma()).exp()
}

/// Incomplete beta `B(x; a, b) = ∫_0^x y^{a-1}(1-y)^{b-1} dy`, `0 ≤ x ≤ 1`.
pub fn inc_beta(x: &Real, a: &Real, b: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if x.is_negative() || x.to_f64() > 1.0 || !(a.to_f64() > 0.0) || !(b.to_f64() > 0.0) {
        return Err(Error::Domain("incBeta requires 0 <= x <= 1 and a, b > 0".into()));
    }
    let c = ctx_plus(ctx, 10);
    let bits = c.bits();
    let (x, a, b) = (x.with_prec(bits), a.with_prec(bits), b.with_prec(bits));
    let one = c.one();
    if x.to_f64() <= 0.5 {
        Ok(inc_beta_series(&x, &a, &b, &c).with_prec(ctx.bits()))
    } else {
        let y = &one - &x;
        let tail = inc_beta_series(&y, &b, &a, &c);
        Ok((beta(&a, &b) - tail).with_prec(ctx.bits()))
    }
}

/// `x^a (1-x)^b / a · Σ (a+b)_n/(a+1)_n x^n`.
fn inc_beta_series(x: &Real, a: &Real, b: &Real, c: &PrecisionContext) -> Real {
    if x.is_zero() {
        return c.zero();
    }
    let eps = c.pow10(-((c.digits + c.guard) as i32));
    let ab = a + b;
    let a1 = a + 1;
    let mut term = c.one();
    let mut sum = term.clone();
    let mut n = 0i32;
    loop {
        term = term * (&ab + n) / (&a1 + n) * x;
        sum += &term;
        n += 1;
        if term.abs() <= sum.abs() * &eps && n > 2 {
            break;
        }
    }
    let one = c.one();
    sum * x.pow(a) * (&one - x).pow(b) / a
}

/// `B(x; a, b)` by direct quadrature, used as an independent check.
pub fn inc_beta_quad(x: &Real, a: &Real, b: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let am1 = a - 1;
    let bm1 = b - 1;
    let one = ctx.one();
    let r = integrate_nodes(
        |n| n.left.pow(&am1) * (&one - &n.x).pow(&bm1),
        Domain::Finite(ctx.zero(), x.clone()),
        ctx,
    )?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(80, 20).unwrap()
    }

    fn close(a: &Real, b: &Real, digits: i32) -> bool {
        let scale = a.abs().max(&b.abs());
        ((a - b).abs() / scale).to_f64() < 10f64.powi(-digits)
    }

    #[test]
    fn bessel_half_integer_closed_form() {
        let c = ctx();
        for xv in [0.3, 2.0, 7.5, 12.0] {
            let x = c.real(xv);
            let k52 = bessel_k(&c.real(2.5), &x, &c).unwrap();
            // K_{5/2}(x) = sqrt(π/2x) e^{-x} (1 + 3/x + 3/x²)
            let exact = (c.pi() / (&x * 2)).sqrt() * (-x.clone()).exp() * (c.one() + x.recip() * 3 + x.powi(-2) * 3);
            assert!(close(&k52, &exact, 75), "x = {xv}");
        }
    }

    #[test]
    fn bessel_series_matches_integral() {
        let c = ctx();
        for (nu, xv) in [(0.0, 0.5), (1.0, 3.0), (3.0, 9.5), (0.3, 1.0), (7.7, 4.0), (12.25, 0.02), (0.999, 2.0)] {
            let nu = c.real(nu);
            let x = c.real(xv);
            let s = bessel_k_series(&nu, &x, &c).unwrap();
            let i = bessel_k_integral(&nu, &x, &c).unwrap();
            assert!(close(&s, &i, 75), "nu = {nu}, x = {xv}");
        }
    }

    #[test]
    fn barnes_g_special_values() {
        let c = ctx();
        assert!(ln_barnes_g(&c.real(1.0), &c).unwrap().is_zero());
        assert!(ln_barnes_g(&c.real(2.0), &c).unwrap().is_zero());
        // G(5) = 1!·2!·3! = 12
        assert!(close(&ln_barnes_g(&c.real(5.0), &c).unwrap(), &c.int(12).ln(), 78));
        // G(z+1) = Γ(z) G(z)
        let z = c.real(2.3);
        let lhs = ln_barnes_g(&(&z + 1), &c).unwrap();
        let rhs = z.ln_gamma() + ln_barnes_g(&z, &c).unwrap();
        assert!(close(&lhs, &rhs, 75));
    }

    #[test]
    fn incomplete_gamma_split() {
        let c = ctx();
        let a = c.real(3.5);
        let x = c.real(2.25);
        let up = inc_gamma_upper(&a, &x, &c).unwrap();
        let low = inc_gamma_lower(&a, &x, &c).unwrap();
        assert!(close(&(up + low), &a.gamma(), 78));
    }

    #[test]
    fn incomplete_beta_series_vs_quadrature() {
        let c = ctx();
        for (xv, av, bv) in [(0.25, 1.5, 2.0), (0.8, 3.0, 0.5), (0.5, 0.5, 0.5)] {
            let (x, a, b) = (c.real(xv), c.real(av), c.real(bv));
            let s = inc_beta(&x, &a, &b, &c).unwrap();
            let q = inc_beta_quad(&x, &a, &b, &c).unwrap();
            assert!(close(&s, &q, 75), "x = {xv}");
        }
        let one = c.one();
        let full = inc_beta(&one, &c.real(2.0), &c.real(3.0), &c).unwrap();
        assert!(close(&full, &(c.one() / 12), 78));
    }

    /// `ln A` for Glaisher's constant from the Euler-Maclaurin expansion of
    /// `Σ k ln k`, with Bernoulli numbers from ζ(2j).
    fn ln_glaisher(c: &PrecisionContext, n: i64, terms: i64) -> Real {
        let nn = c.int(n);
        let mut h = c.zero();
        for k in 2..=n {
            h += c.int(k) * c.int(k).ln();
        }
        let two_pi = c.pi() * 2;
        let mut corr = c.zero();
        for j in 2..=terms {
            let m = 2 * j;
            let zeta = c.int(m).zeta();
            let fact = c.int(m + 1).gamma();
            let sign = if j % 2 == 0 { -1 } else { 1 };
            let b2j = zeta * fact * 2 * sign / two_pi.powi(m as i32);
            corr += b2j / c.int(m * (m - 1) * (m - 2)) * nn.powi((2 - m) as i32);
        }
        h - (&nn * &nn / 2 + &nn / 2 + c.one() / 12) * nn.ln() + &nn * &nn / 4 + corr
    }

    #[test]
    fn barnes_g_half_against_glaisher() {
        let c = ctx();
        let ln_a = ln_glaisher(&c, 40, 60);
        assert!((ln_a.exp().to_f64() - 1.2824271291006226).abs() < 1e-15);
        let expected = c.int(2).ln() / 24 + c.one() / 8 - c.pi().ln() / 4 - &ln_a * 3 / 2;
        let got = ln_barnes_g(&c.real(0.5), &c).unwrap();
        assert!(close(&got, &expected, 75));
    }
}
