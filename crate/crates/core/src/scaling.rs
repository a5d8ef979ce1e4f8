//! Double scaling of the hard-edge SPG Hankel determinant: the even/odd
//! Laguerre factorisation, scaled ratios, the Barnes-G constant block and
//! the three asymptotic expansions of `ln Δ`.

use rug::Rational;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::moments::moment_table;
use crate::mp::special::ln_barnes_g;
use crate::mp::{Exact, PrecisionContext, Real};
use crate::orthopoly::{build_from_moments, hankel_determinants_lu, RecurrenceTable};
use crate::weights::WeightSpec;

/// Parameters of one scaled determinant `D_{2n}(s/(4n), t/(2n+1+α))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingSpec {
    pub n: usize,
    pub s: Exact,
    pub t: Exact,
    pub alpha: Exact,
}

impl ScalingSpec {
    pub fn new(n: usize, s: Exact, t: Exact, alpha: Exact) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("scaling requires n >= 1".into()));
        }
        if s.is_negative() || t.is_negative() || !alpha.is_positive() {
            return Err(Error::Domain("scaling requires s, t >= 0 and alpha > 0".into()));
        }
        Ok(ScalingSpec { n, s, t, alpha })
    }

    /// `(s/(4n), t/(2n+1+α))`.
    pub fn scaled(&self) -> (Exact, Exact) {
        let n = self.n as i64;
        let s = self.s.as_rational() / Rational::from(4 * n);
        let den = self.alpha.as_rational() + Rational::from(2 * n + 1);
        let t = self.t.as_rational() / den;
        (Exact::from_rational(s), Exact::from_rational(t))
    }
}

/// The two Laguerre-type systems `x^λ e^{−x−t/x}` on `[s, ∞)` with
/// `λ = (α−1)/2` (`minus`) and `λ = (α+1)/2` (`plus`).
#[derive(Clone, Debug)]
pub struct SideTables {
    pub minus: RecurrenceTable,
    pub plus: RecurrenceTable,
    /// Even moments `μ_{2j}` of the full weight.
    pub even_moments: Vec<Real>,
}

fn hard_edge(alpha: &Exact, s: &Exact, t: &Exact) -> Result<WeightSpec> {
    WeightSpec::spg_hard_edge(alpha.clone(), t.clone(), s.clone())
}

/// Full-weight moments `μ_0 … μ_{2m}` (odd ones zero) of `|x|^α e^{−x²−t/x²}θ(x²−s)`.
fn full_moments(alpha: &Exact, s: &Exact, t: &Exact, m: usize, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    Ok(moment_table(&hard_edge(alpha, s, t)?, m, ctx)?.entries)
}

pub fn laguerre_side_tables(alpha: &Exact, s: &Exact, t: &Exact, n_max: usize, ctx: &PrecisionContext) -> Result<SideTables> {
    let mu = full_moments(alpha, s, t, 2 * n_max + 1, ctx)?;
    let even: Vec<Real> = mu.iter().step_by(2).cloned().collect();
    let minus = build_from_moments(&even[..2 * n_max + 1], n_max, ctx)?;
    let plus = build_from_moments(&even[1..2 * n_max + 2], n_max, ctx)?;
    Ok(SideTables { minus, plus, even_moments: even })
}

/// Classical Laguerre norm `h̃_m = Γ(m+1)Γ(m+λ+1)` at `s = t = 0`.
pub fn laguerre_norm(m: usize, lambda: &Real) -> Real {
    lambda.lift_int(m as i64 + 1).gamma() * (lambda.clone() + (m as i32 + 1)).gamma()
}

/// `ln D̃_n(0, 0, λ) = Σ_{k<n} ln Γ(k+1) + ln Γ(k+λ+1)`.
pub fn ln_laguerre_hankel(n: usize, lambda: &Real) -> Real {
    (0..n).fold(lambda.lift_int(0), |acc, k| {
        acc + lambda.lift_int(k as i64 + 1).ln_gamma() + (lambda.clone() + (k as i32 + 1)).ln_gamma()
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationCheck {
    pub n: usize,
    /// `|D_{2n} − D̃_n^{(+)} D̃_n^{(−)}| / D_{2n}`.
    pub even: f64,
    /// `|D_{2n+1} − D̃_n^{(+)} D̃_{n+1}^{(−)}| / D_{2n+1}`.
    pub odd: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Compares the full Hankel determinants, by direct LU, with the products
/// of the two side determinants.
pub fn factorization_check(alpha: &Exact, s: &Exact, t: &Exact, n: usize, ctx: &PrecisionContext) -> Result<FactorizationCheck> {
    let mu = full_moments(alpha, s, t, 2 * n + 1, ctx)?;
    let full = hankel_determinants_lu(&mu, 2 * n + 1, ctx);
    let even: Vec<Real> = mu.iter().step_by(2).cloned().collect();
    let minus = hankel_determinants_lu(&even, n + 1, ctx);
    let plus = hankel_determinants_lu(&even[1..], n, ctx);
    let rel = |a: &Real, b: &Real| ((a.clone() - b) / a).abs().to_f64();
    let d_even = &full[2 * n - 1];
    let d_odd = &full[2 * n];
    let e = rel(d_even, &(plus[n - 1].clone() * &minus[n - 1]));
    let o = rel(d_odd, &(plus[n - 1].clone() * &minus[n]));
    let threshold = 10f64.powf(-(ctx.digits as f64) / 2.0);
    Ok(FactorizationCheck { n, even: e, odd: o, threshold, passed: e < threshold && o < threshold })
}

/// `C = ln G(λ+1) − (λ/2) ln 2π + λt/(2s)`.
pub fn c_term(s: &Real, t: &Real, lambda: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if s.is_zero() {
        return Err(Error::Domain("the C block requires s > 0".into()));
    }
    let two_pi = ctx.pi() * 2;
    Ok(ln_barnes_g(&(lambda.clone() + 1), ctx)? - lambda.clone() / 2 * two_pi.ln() + lambda.clone() * t / (s.clone() * 2))
}

/// Constant part of the two-λ sum: `ln[G((α+3)/2) G((α+1)/2)] − (α/2) ln 2π`.
pub fn barnes_block(alpha: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let two_pi = ctx.pi() * 2;
    Ok(ln_barnes_g(&((alpha.clone() + 3) / 2), ctx)? + ln_barnes_g(&((alpha.clone() + 1) / 2), ctx)?
        - alpha.clone() / 2 * two_pi.ln())
}

/// The two-λ sum in closed form: `barnes_block + αt/(2s)`.
pub fn c_term_sum(alpha: &Real, s: &Real, t: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if s.is_zero() {
        return Err(Error::Domain("the C block requires s > 0".into()));
    }
    Ok(barnes_block(alpha, ctx)? + alpha.clone() * t / (s.clone() * 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Regime {
    LargeS,
    SmallS,
    LargeT,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::LargeS, Regime::SmallS, Regime::LargeT];

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::LargeS => "largeS",
            Regime::SmallS => "smallS",
            Regime::LargeT => "largeT",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Regime> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "larges" => Ok(Regime::LargeS),
            "smalls" => Ok(Regime::SmallS),
            "larget" => Ok(Regime::LargeT),
            _ => Err(Error::Config(format!("unknown regime {s:?}"))),
        }
    }
}

/// Exponent of the `λ³/24 + 3λ/128 + t/8` term in the single-λ large-s block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockExponent {
    /// `s^{−3/2}`.
    MinusThreeHalves,
    /// `s^{−2/3}`.
    MinusTwoThirds,
}

/// `c · s^p · t^q · (ln s)^[log]`.
#[derive(Clone, Debug)]
pub struct Monomial {
    pub coeff: Real,
    pub s_pow: Exact,
    pub t_pow: i32,
    pub log: bool,
}

impl Monomial {
    pub fn key(&self) -> (Exact, i32, bool) {
        (self.s_pow.clone(), self.t_pow, self.log)
    }

    /// `Some(k)` when the power of `s` is `k/2`.
    pub fn half_power(&self) -> Option<i32> {
        let twice = Rational::from(self.s_pow.as_rational() * 2u32);
        twice.is_integer().then(|| twice.numer().to_i32().unwrap_or(i32::MAX))
    }

    pub fn label(&self) -> String {
        let mut out = String::new();
        if self.log {
            out.push_str("ln s");
        } else if !self.s_pow.is_zero() {
            out.push_str(&format!("s^({})", self.s_pow));
        }
        if self.t_pow != 0 {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&format!("t^({})", self.t_pow));
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    pub fn eval(&self, s: &Real, t: &Real, ctx: &PrecisionContext) -> Real {
        let mut v = self.coeff.clone() * s.pow(&ctx.exact(&self.s_pow)) * t.powi(self.t_pow);
        if self.log {
            v *= s.ln();
        }
        v
    }
}

/// A truncated expansion: constant block plus finitely many monomials.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub regime: Regime,
    pub constant: Real,
    pub terms: Vec<Monomial>,
}

fn mono(coeff: Real, num: i64, den: i64, t_pow: i32, log: bool) -> Monomial {
    Monomial { coeff, s_pow: Exact::new(num, den), t_pow, log }
}

/// Monomials of the single-λ expansion of `ln Δ(s, t, λ)` without its C block.
fn lambda_block(regime: Regime, l: &Real, exponent: BlockExponent, ctx: &PrecisionContext) -> Vec<Monomial> {
    let q = |n: i64, d: i64| ctx.exact(&Exact::new(n, d));
    let l2 = l.clone() * l;
    let l3 = l2.clone() * l;
    let log_c = (ctx.one() - l2.clone() * 4) / 16;
    match regime {
        Regime::LargeS => {
            let (pn, pd) = match exponent {
                BlockExponent::MinusThreeHalves => (-3, 2),
                BlockExponent::MinusTwoThirds => (-2, 3),
            };
            vec![
                mono(q(-1, 4), 1, 1, 0, false),
                mono(l.clone(), 1, 2, 0, false),
                mono(-(l2.clone() / 4), 0, 1, 0, true),
                mono(l.clone() / 8, -1, 2, 0, false),
                mono(q(-1, 1), -1, 2, 1, false),
                mono(l2.clone() / 16, -1, 1, 0, false),
                mono(l3.clone() / 24 + l.clone() * 3 / 128, pn, pd, 0, false),
                mono(q(1, 8), pn, pd, 1, false),
                mono(l2.clone() * &l2 / 32 + l2.clone() * 9 / 128, -2, 1, 0, false),
                mono(l.clone() / 8, -2, 1, 1, false),
            ]
        }
        Regime::SmallS => vec![
            mono(q(-1, 1), -1, 2, 1, false),
            mono(log_c, 0, 1, 0, true),
            mono(l.clone(), 1, 2, 0, false),
            mono(q(-1, 4), 1, 1, 0, false),
            mono(q(1, 8), 3, 2, -1, false),
            mono(-(l.clone() / 8), 5, 2, -2, false),
            mono(q(1, 16), 3, 1, -2, false),
            mono(l2.clone() / 8 - q(27, 128), 7, 2, -3, false),
            mono(-(l.clone() / 8), 4, 1, -3, false),
        ],
        Regime::LargeT => vec![
            mono(q(-1, 1), -1, 2, 1, false),
            mono(q(-1, 4), 1, 1, 0, false),
            mono(l.clone(), 1, 2, 0, false),
            mono(log_c, 0, 1, 0, true),
            mono(q(1, 8), 3, 2, -1, false),
            mono(-(l.clone() / 8), 5, 2, -2, false),
            mono(q(1, 16), 3, 1, -2, false),
            mono(q(1, 24), 9, 2, -3, false),
            mono(-(l.clone() / 8), 4, 1, -3, false),
            mono((l2.clone() * 3 - q(81, 16)) / 24, 7, 2, -3, false),
            mono(q(1, 32), 6, 1, -4, false),
            mono(-(l.clone() / 8), 11, 2, -4, false),
            mono((l2.clone() * 6 - q(27, 2)) / 32, 5, 1, -4, false),
            mono((-(l3.clone() * 4) + l.clone() * 99 / 4) / 32, 9, 2, -4, false),
        ],
    }
}

fn merge(terms: Vec<Monomial>) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    for m in terms {
        if let Some(e) = out.iter_mut().find(|e| e.key() == m.key()) {
            e.coeff += m.coeff;
        } else {
            out.push(m);
        }
    }
    out
}

impl Expansion {
    /// The expansion as stated for `ln Δ₁ = ln Δ₂`, with any C symbol read
    /// as the two-λ sum.
    pub fn printed(regime: Regime, alpha: &Real, ctx: &PrecisionContext) -> Result<Expansion> {
        let a = alpha.clone();
        let a2 = a.clone() * &a;
        let q = |n: i64, d: i64| ctx.exact(&Exact::new(n, d));
        let c_mono = mono(a.clone() / 2, -1, 1, 1, false);
        let terms = match regime {
            Regime::LargeS => vec![
                mono(q(-1, 2), 1, 1, 0, false),
                mono(a.clone(), 1, 2, 0, false),
                mono(-(a2.clone() + 1) / 8, 0, 1, 0, true),
                mono(a.clone() / 8, -1, 2, 0, false),
                mono(q(-2, 1), -1, 2, 1, false),
                mono((a2.clone() + 1) / 32, -1, 1, 0, false),
                mono(a.clone() / 2, -1, 1, 1, false),
                mono(a2.clone() * &a / 96 + a.clone() * 7 / 128, -3, 2, 0, false),
                mono(q(1, 4), -3, 2, 1, false),
                mono(a2.clone() * &a2 / 256 + a2.clone() * 15 / 256 + q(5, 128), -2, 1, 0, false),
                mono(a.clone() / 8, -2, 1, 1, false),
            ],
            Regime::SmallS => vec![
                c_mono,
                mono(q(-2, 1), -1, 2, 1, false),
                mono(a2.clone() / 8, 0, 1, 0, true),
                mono(a.clone(), 1, 2, 0, false),
                mono(q(-1, 2), 1, 1, 0, false),
                mono(q(1, 4), 3, 2, -1, false),
                mono(-(a.clone() / 8), 5, 2, -2, false),
                mono(q(1, 8), 3, 1, -2, false),
                mono(a2.clone() / 8 - q(23, 128), 7, 2, -3, false),
                mono(-(a.clone() / 8), 4, 1, -3, false),
            ],
            Regime::LargeT => vec![
                c_mono,
                mono(q(-2, 1), -1, 2, 1, false),
                mono(q(-1, 2), 1, 1, 0, false),
                mono(a.clone(), 1, 2, 0, false),
                mono(-(a2.clone() / 8), 0, 1, 0, true),
                mono(q(1, 4), 3, 2, -1, false),
                mono(q(1, 8), 3, 1, -2, false),
                mono(-(a.clone() / 8), 5, 2, -2, false),
                mono(q(16, 192), 9, 2, -3, false),
                mono(-(a.clone() * 24 / 192), 4, 1, -3, false),
                mono((a2.clone() * 12 - 69) / 192, 7, 2, -3, false),
                mono(q(8, 128), 6, 1, -4, false),
                mono(-(a.clone() * 16 / 128), 11, 2, -4, false),
                mono((a2.clone() * 12 - 96) / 128, 5, 1, -4, false),
                mono((-(a2.clone() * &a * 4) + a.clone() * 87) / 128, 9, 2, -4, false),
            ],
        };
        Ok(Expansion { regime, constant: barnes_block(alpha, ctx)?, terms })
    }

    /// Sum of the two single-λ expansions at `λ = (α±1)/2`, each with its
    /// own C block.
    pub fn recomputed(regime: Regime, alpha: &Real, exponent: BlockExponent, ctx: &PrecisionContext) -> Result<Expansion> {
        let mut terms = Vec::new();
        let mut constant = ctx.zero();
        let two_pi = ctx.pi() * 2;
        for sign in [-1, 1] {
            let l = (alpha.clone() + sign) / 2;
            constant += ln_barnes_g(&(l.clone() + 1), ctx)? - l.clone() / 2 * two_pi.ln();
            terms.push(mono(l.clone() / 2, -1, 1, 1, false));
            terms.extend(lambda_block(regime, &l, exponent, ctx));
        }
        Ok(Expansion { regime, constant, terms: merge(terms) })
    }

    pub fn eval(&self, s: &Real, t: &Real, ctx: &PrecisionContext) -> Real {
        self.terms.iter().fold(self.constant.clone(), |acc, m| acc + m.eval(s, t, ctx))
    }

    /// Values grouped by the power of `s` (or of `t` in the large-t regime),
    /// in order of decreasing size within the regime.
    pub fn grouped(&self, s: &Real, t: &Real, ctx: &PrecisionContext) -> Vec<(String, Real)> {
        let mut groups: Vec<(f64, String, Real)> = Vec::new();
        for m in &self.terms {
            let (key, label) = match self.regime {
                Regime::LargeT => (-(m.t_pow as f64), format!("t^({})", m.t_pow)),
                _ => {
                    let p = m.s_pow.to_f64();
                    let sort = if m.log { 1e-9 } else { p };
                    let label = if m.log { "ln s".to_string() } else { format!("s^({})", m.s_pow) };
                    (if self.regime == Regime::LargeS { -sort } else { sort }, label)
                }
            };
            let v = m.eval(s, t, ctx);
            if let Some(g) = groups.iter_mut().find(|g| g.1 == label) {
                g.2 += v;
            } else {
                groups.push((key, label, v));
            }
        }
        groups.sort_by(|a, b| a.0.total_cmp(&b.0));
        groups.into_iter().map(|(_, l, v)| (l, v)).collect()
    }

    pub fn regime_warning(&self, s: f64, t: f64) -> Option<String> {
        let bad = match self.regime {
            Regime::LargeS => s < 10.0,
            Regime::SmallS => s > 0.1,
            Regime::LargeT => t < 10.0,
        };
        bad.then(|| format!("(s, t) = ({s}, {t}) is outside the {} regime", self.regime.as_str()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TermComparison {
    pub term: String,
    pub printed: String,
    pub recomputed: String,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    pub regime: Regime,
    pub alpha: String,
    pub s: String,
    pub t: String,
    pub constant: String,
    pub terms: Vec<(String, String)>,
    pub printed_total: String,
    pub recomputed_total: String,
    pub comparisons: Vec<TermComparison>,
    pub warning: Option<String>,
}

impl ExpansionReport {
    pub fn discrepancies(&self) -> Vec<&TermComparison> {
        self.comparisons.iter().filter(|c| !c.agree).collect()
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["term", "printed", "recomputed", "agree"])?;
        for c in &self.comparisons {
            w.write_record([c.term.as_str(), &c.printed, &c.recomputed, if c.agree { "true" } else { "false" }])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Coefficient-by-coefficient comparison of two expansions.
pub fn compare(printed: &Expansion, recomputed: &Expansion, ctx: &PrecisionContext) -> Vec<TermComparison> {
    let tol = ctx.pow10(-(ctx.digits as i32) / 2);
    let mut keys: Vec<(Exact, i32, bool)> = printed.terms.iter().map(Monomial::key).collect();
    for m in &recomputed.terms {
        if !keys.contains(&m.key()) {
            keys.push(m.key());
        }
    }
    let find = |e: &Expansion, k: &(Exact, i32, bool)| {
        e.terms.iter().filter(|m| &m.key() == k).fold(ctx.zero(), |acc, m| acc + &m.coeff)
    };
    let mut out: Vec<TermComparison> = keys
        .iter()
        .map(|k| {
            let (p, r) = (find(printed, k), find(recomputed, k));
            let scale = p.abs().max(&r.abs()).max(&ctx.one());
            let agree = (p.clone() - &r).abs() <= tol.clone() * scale;
            let label = Monomial { coeff: ctx.one(), s_pow: k.0.clone(), t_pow: k.1, log: k.2 }.label();
            TermComparison { term: label, printed: p.to_sci(20), recomputed: r.to_sci(20), agree }
        })
        .collect();
    let (pc, rc) = (&printed.constant, &recomputed.constant);
    out.insert(
        0,
        TermComparison {
            term: "constant".into(),
            printed: pc.to_sci(20),
            recomputed: rc.to_sci(20),
            agree: (pc.clone() - rc).abs() <= tol * pc.abs().max(&ctx.one()),
        },
    );
    out
}

/// Evaluates the printed expansion term by term alongside the recomputed sum.
pub fn ln_delta_expansion(regime: Regime, alpha: &Real, s: &Real, t: &Real, ctx: &PrecisionContext) -> Result<ExpansionReport> {
    if !(s.to_f64() > 0.0) {
        return Err(Error::Domain("the expansions require s > 0".into()));
    }
    let printed = Expansion::printed(regime, alpha, ctx)?;
    let recomputed = Expansion::recomputed(regime, alpha, BlockExponent::MinusThreeHalves, ctx)?;
    let comparisons = compare(&printed, &recomputed, ctx);
    Ok(ExpansionReport {
        regime,
        alpha: alpha.to_sci(20),
        s: s.to_sci(20),
        t: t.to_sci(20),
        constant: printed.constant.to_sci(20),
        terms: printed.grouped(s, t, ctx).into_iter().map(|(l, v)| (l, v.to_sci(20))).collect(),
        printed_total: printed.eval(s, t, ctx).to_sci(20),
        recomputed_total: recomputed.eval(s, t, ctx).to_sci(20),
        comparisons,
        warning: printed.regime_warning(s.to_f64(), t.to_f64()),
    })
}

/// Largest `|term_{k+1}/term_k|` over consecutive grouped terms.
pub fn max_term_ratio(e: &Expansion, s: &Real, t: &Real, ctx: &PrecisionContext) -> f64 {
    let g = e.grouped(s, t, ctx);
    g.windows(2).map(|w| (w[1].1.clone() / &w[0].1).abs().to_f64()).fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    /// `D_{2n}`.
    Even,
    /// `D_{2n+1}`.
    Odd,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericDelta {
    pub n: usize,
    pub parity: Parity,
    pub ln_ratio: f64,
    /// `ln D(0,0)` from Gamma products and from the moment table.
    pub ln_d00_closed: f64,
    pub ln_d00_moments: f64,
    pub d00_rel_diff: f64,
}

/// `ln[D(s/(4n), t/(2n+1+α)) / D(0,0)]` for `D_{2n}` or `D_{2n+1}`.
pub fn numeric_delta(spec: &ScalingSpec, parity: Parity, ctx: &PrecisionContext) -> Result<NumericDelta> {
    let n = spec.n;
    let size = match parity {
        Parity::Even => 2 * n,
        Parity::Odd => 2 * n + 1,
    };
    let (s1, t1) = spec.scaled();
    let ln_d = |s: &Exact, t: &Exact| -> Result<Real> {
        let mu = full_moments(&spec.alpha, s, t, size, ctx)?;
        let rec = build_from_moments(&mu, size, ctx)?;
        Ok(rec.d[size].ln())
    };
    let num = ln_d(&s1, &t1)?;
    let zero = Exact::int(0);
    let d00 = ln_d(&zero, &zero)?;
    let a = ctx.exact(&spec.alpha);
    let (lm, lp) = ((a.clone() - 1) / 2, (a + 1) / 2);
    let closed = match parity {
        Parity::Even => ln_laguerre_hankel(n, &lp) + ln_laguerre_hankel(n, &lm),
        Parity::Odd => ln_laguerre_hankel(n, &lp) + ln_laguerre_hankel(n + 1, &lm),
    };
    let diff = ((d00.clone() - &closed) / closed.abs().max(&ctx.one())).abs().to_f64();
    Ok(NumericDelta {
        n,
        parity,
        ln_ratio: (num - &closed).to_f64(),
        ln_d00_closed: closed.to_f64(),
        ln_d00_moments: d00.to_f64(),
        d00_rel_diff: diff,
    })
}

/// `ln Δ` over several `n`, with both parities, for plotting.
pub fn delta_trend(alpha: &Exact, s: &Exact, t: &Exact, ns: &[usize], ctx: &PrecisionContext) -> Result<Vec<(NumericDelta, NumericDelta)>> {
    ns.iter()
        .map(|&n| {
            let spec = ScalingSpec::new(n, s.clone(), t.clone(), alpha.clone())?;
            let c = ctx.for_degree(2 * n + 1);
            Ok((numeric_delta(&spec, Parity::Even, &c)?, numeric_delta(&spec, Parity::Odd, &c)?))
        })
        .collect()
}

pub fn write_trend_csv<W: std::io::Write>(rows: &[(NumericDelta, NumericDelta)], expansion: Option<f64>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "ln_delta_even", "ln_delta_odd", "expansion"])?;
    for (e, o) in rows {
        let exp = expansion.map(|v| format!("{v:.15e}")).unwrap_or_default();
        w.write_record([e.n.to_string(), format!("{:.15e}", e.ln_ratio), format!("{:.15e}", o.ln_ratio), exp])?;
    }
    w.flush()?;
    Ok(())
}

pub fn trend_json(rows: &[(NumericDelta, NumericDelta)]) -> serde_json::Value {
    json!(rows.iter().map(|(e, o)| json!({"n": e.n, "even": e, "odd": o})).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(60, 20).unwrap()
    }

    #[test]
    fn side_tables_reduce_to_laguerre() {
        let c = ctx();
        let z = Exact::int(0);
        let tabs = laguerre_side_tables(&Exact::int(1), &z, &z, 4, &c).unwrap();
        for (tab, lam) in [(&tabs.minus, c.zero()), (&tabs.plus, c.one())] {
            for m in 0..=4 {
                let want = laguerre_norm(m, &lam);
                assert!(((tab.h[m].clone() - &want) / &want).abs().to_f64() < 1e-50);
            }
        }
    }

    #[test]
    fn norms_split_by_parity() {
        let c = ctx();
        let (a, s, t) = (Exact::int(1), Exact::new(1, 5), Exact::new(3, 10));
        let tabs = laguerre_side_tables(&a, &s, &t, 4, &c).unwrap();
        let mu = full_moments(&a, &s, &t, 10, &c).unwrap();
        let full = build_from_moments(&mu, 9, &c).unwrap();
        for m in 0..=4 {
            let e = ((full.h[2 * m].clone() - &tabs.minus.h[m]) / &full.h[2 * m]).abs().to_f64();
            let o = ((full.h[2 * m + 1].clone() - &tabs.plus.h[m]) / &full.h[2 * m + 1]).abs().to_f64();
            assert!(e < 1e-40 && o < 1e-40, "{m}: {e:e} {o:e}");
        }
    }

    #[test]
    fn factorization_small_n() {
        let c = ctx();
        for (s, t) in [(Exact::new(1, 5), Exact::new(3, 10)), (Exact::int(0), Exact::new(3, 10))] {
            for n in 1..=3 {
                let r = factorization_check(&Exact::int(1), &s, &t, n, &c).unwrap();
                assert!(r.passed, "{r:?}");
            }
        }
    }

    #[test]
    fn c_block_identities() {
        let c = ctx();
        let (s, t) = (c.real(2.5), c.real(0.7));
        assert!(c_term(&s, &t, &c.zero(), &c).unwrap().abs().to_f64() < 1e-55);
        assert!(c_term(&c.zero(), &t, &c.one(), &c).is_err());
        for a in [c.int(1), c.real(0.3), c.int(2)] {
            let lm = (a.clone() - 1) / 2;
            let lp = (a.clone() + 1) / 2;
            let lhs = c_term(&s, &t, &lm, &c).unwrap() + c_term(&s, &t, &lp, &c).unwrap();
            let rhs = c_term_sum(&a, &s, &t, &c).unwrap();
            assert!((lhs - rhs).abs().to_f64() < 1e-50);
        }
        let b = barnes_block(&c.int(1), &c).unwrap();
        let want = -(c.pi() * 2).ln() / 2;
        assert!((b - want).abs().to_f64() < 1e-50);
    }

    #[test]
    fn large_s_recomputation_matches() {
        let c = ctx();
        let a = c.real(1.7);
        let p = Expansion::printed(Regime::LargeS, &a, &c).unwrap();
        let r = Expansion::recomputed(Regime::LargeS, &a, BlockExponent::MinusThreeHalves, &c).unwrap();
        assert!(compare(&p, &r, &c).iter().all(|t| t.agree));
        let lit = Expansion::recomputed(Regime::LargeS, &a, BlockExponent::MinusTwoThirds, &c).unwrap();
        assert!(compare(&p, &lit, &c).iter().any(|t| !t.agree));
    }

    #[test]
    fn small_s_discrepancies() {
        let c = ctx();
        let r = ln_delta_expansion(Regime::SmallS, &c.int(1), &c.real(0.01), &c.int(1), &c).unwrap();
        let bad: Vec<&str> = r.discrepancies().iter().map(|d| d.term.as_str()).collect();
        assert_eq!(bad, vec!["ln s", "s^(7/2) t^(-3)"]);
        let r = ln_delta_expansion(Regime::LargeT, &c.int(1), &c.int(2), &c.int(50), &c).unwrap();
        assert!(r.discrepancies().is_empty());
    }

    #[test]
    fn large_s_terms_decay() {
        let c = ctx();
        let p = Expansion::printed(Regime::LargeS, &c.int(1), &c).unwrap();
        assert!(max_term_ratio(&p, &c.int(1000), &c.int(1), &c) < 0.5);
        assert_eq!(p.grouped(&c.int(1000), &c.int(1), &c)[0].0, "s^(1)");
    }

    #[test]
    fn unscaled_delta_is_one() {
        let c = ctx();
        let z = Exact::int(0);
        let spec = ScalingSpec::new(2, z.clone(), z, Exact::int(1)).unwrap();
        let d = numeric_delta(&spec, Parity::Even, &c).unwrap();
        assert!(d.ln_ratio.abs() < 1e-14 && d.d00_rel_diff < 1e-40);
    }
}
