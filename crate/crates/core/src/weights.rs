//! The five weight families and their log-potentials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mp::{Exact, PrecisionContext, Real};

/// Weight family with exact parameters.
///
/// * `Spg`: `|x|^α e^{-x² - t/x²}` on ℝ, α > 0, t > 0.
/// * `Df`: `|x|^α e^{-x⁴ + t x²}` on ℝ, α > 0, t real.
/// * `Gj`: `e^{-x²}(A + B θ(x - t))` on ℝ, A ≥ 0, A + B ≥ 0.
/// * `Jc`: `(1 - x²)^α` on `[-1,-a] ∪ [a,1]`, α > 0, 0 < a < 1.
/// * `SpgHardEdge`: `|x|^α e^{-x² - t/x²} θ(x² - s)`, α > 0, t, s ≥ 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case", try_from = "RawWeight")]
pub enum WeightSpec {
    Spg { alpha: Exact, t: Exact },
    Df { alpha: Exact, t: Exact },
    Gj {
        #[serde(rename = "A")]
        a_coef: Exact,
        #[serde(rename = "B")]
        b_coef: Exact,
        t: Exact,
    },
    Jc { alpha: Exact, a: Exact },
    SpgHardEdge { alpha: Exact, t: Exact, s: Exact },
}

#[derive(Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
enum RawWeight {
    Spg { alpha: Exact, t: Exact },
    Df { alpha: Exact, t: Exact },
    Gj {
        #[serde(rename = "A")]
        a_coef: Exact,
        #[serde(rename = "B")]
        b_coef: Exact,
        t: Exact,
    },
    Jc { alpha: Exact, a: Exact },
    SpgHardEdge { alpha: Exact, t: Exact, s: Exact },
}

impl TryFrom<RawWeight> for WeightSpec {
    type Error = Error;
    fn try_from(r: RawWeight) -> Result<WeightSpec> {
        match r {
            RawWeight::Spg { alpha, t } => WeightSpec::spg(alpha, t),
            RawWeight::Df { alpha, t } => WeightSpec::df(alpha, t),
            RawWeight::Gj { a_coef, b_coef, t } => WeightSpec::gj(a_coef, b_coef, t),
            RawWeight::Jc { alpha, a } => WeightSpec::jc(alpha, a),
            RawWeight::SpgHardEdge { alpha, t, s } => WeightSpec::spg_hard_edge(alpha, t, s),
        }
    }
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(what.to_string()))
    }
}

impl WeightSpec {
    pub fn spg(alpha: Exact, t: Exact) -> Result<Self> {
        require(alpha.is_positive(), "SPG requires alpha > 0")?;
        require(t.is_positive(), "SPG requires t > 0")?;
        Ok(WeightSpec::Spg { alpha, t })
    }

    pub fn df(alpha: Exact, t: Exact) -> Result<Self> {
        require(alpha.is_positive(), "DF requires alpha > 0")?;
        Ok(WeightSpec::Df { alpha, t })
    }

    pub fn gj(a_coef: Exact, b_coef: Exact, t: Exact) -> Result<Self> {
        require(!a_coef.is_negative(), "GJ requires A >= 0")?;
        let total = a_coef.as_rational().clone() + b_coef.as_rational();
        require(total >= 0, "GJ requires A + B >= 0")?;
        require(!(a_coef.is_zero() && b_coef.is_zero()), "GJ requires a nonzero weight")?;
        Ok(WeightSpec::Gj { a_coef, b_coef, t })
    }

    pub fn jc(alpha: Exact, a: Exact) -> Result<Self> {
        require(alpha.is_positive(), "JC requires alpha > 0")?;
        require(a.is_positive() && a < Exact::int(1), "JC requires 0 < a < 1")?;
        Ok(WeightSpec::Jc { alpha, a })
    }

    pub fn spg_hard_edge(alpha: Exact, t: Exact, s: Exact) -> Result<Self> {
        require(alpha.is_positive(), "SPGHardEdge requires alpha > 0")?;
        require(!t.is_negative(), "SPGHardEdge requires t >= 0")?;
        require(!s.is_negative(), "SPGHardEdge requires s >= 0")?;
        Ok(WeightSpec::SpgHardEdge { alpha, t, s })
    }

    /// Builds a weight from a family name and a parameter lookup, as used by
    /// the command line.
    pub fn from_parts(family: &str, get: impl Fn(&str) -> Option<Exact>) -> Result<Self> {
        let need = |k: &str| get(k).ok_or_else(|| Error::Config(format!("family {family} needs --{k}")));
        match family.to_ascii_lowercase().as_str() {
            "spg" => WeightSpec::spg(need("alpha")?, need("t")?),
            "df" => WeightSpec::df(need("alpha")?, need("t")?),
            "gj" => WeightSpec::gj(need("A")?, need("B")?, need("t")?),
            "jc" => WeightSpec::jc(need("alpha")?, need("a")?),
            "spg_hard_edge" | "spghardedge" | "hard-edge" => {
                WeightSpec::spg_hard_edge(need("alpha")?, need("t")?, need("s")?)
            }
            other => Err(Error::InvalidFamily(other.to_string())),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            WeightSpec::Spg { .. } => "spg",
            WeightSpec::Df { .. } => "df",
            WeightSpec::Gj { .. } => "gj",
            WeightSpec::Jc { .. } => "jc",
            WeightSpec::SpgHardEdge { .. } => "spg_hard_edge",
        }
    }

    pub fn is_even(&self) -> bool {
        !matches!(self, WeightSpec::Gj { .. })
    }

    /// Remarks about parameters that are accepted but lie outside the range
    /// for which the finite-n results are stated.
    pub fn domain_notes(&self) -> Vec<String> {
        match self {
            WeightSpec::Df { t, .. } if !t.is_positive() => {
                vec!["t <= 0 is outside the domain where the DF results are stated".to_string()]
            }
            _ => Vec::new(),
        }
    }

    pub fn evaluate(&self, x: &Real, ctx: &PrecisionContext) -> Real {
        fn abs_pow(x: &Real, e: &Exact, ctx: &PrecisionContext) -> Real {
            if e.is_integer() {
                x.abs().powi(e.to_f64() as i32)
            } else {
                x.abs().pow(&ctx.exact(e))
            }
        }
        let zero = ctx.zero();
        let x = x.with_prec(ctx.bits());
        let x2 = &x * &x;
        match self {
            WeightSpec::Spg { alpha, t } => {
                if x.is_zero() {
                    return zero;
                }
                abs_pow(&x, alpha, ctx) * (-(&x2 + ctx.exact(t) / &x2)).exp()
            }
            WeightSpec::Df { alpha, t } => {
                if x.is_zero() {
                    return zero;
                }
                abs_pow(&x, alpha, ctx) * (-(&x2 * &x2) + ctx.exact(t) * &x2).exp()
            }
            WeightSpec::Gj { a_coef, b_coef, t } => {
                let jump = if x > ctx.exact(t) { ctx.exact(b_coef) } else { zero };
                (-x2).exp() * (ctx.exact(a_coef) + jump)
            }
            WeightSpec::Jc { alpha, a } => {
                let ax = x.abs();
                if ax < ctx.exact(a) || ax > ctx.one() {
                    return zero;
                }
                (ctx.one() - x2).pow(&ctx.exact(alpha))
            }
            WeightSpec::SpgHardEdge { alpha, t, s } => {
                if x2 < ctx.exact(s) || x.is_zero() {
                    return zero;
                }
                let tt = ctx.exact(t);
                let core = if tt.is_zero() { x2.clone() } else { &x2 + tt / &x2 };
                abs_pow(&x, alpha, ctx) * (-core).exp()
            }
        }
    }

    /// `v(x) = -ln w(x)`, defined where `w(x) > 0`.
    pub fn potential(&self, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
        let w = self.evaluate(x, ctx);
        if w.is_zero() {
            return Err(Error::Domain(format!("weight vanishes at x = {x}")));
        }
        Ok(-w.ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Exact {
        Exact::parse(s).unwrap()
    }

    #[test]
    fn construction_enforces_domains() {
        assert!(WeightSpec::spg(q("1"), q("0")).is_err());
        assert!(WeightSpec::spg(q("0"), q("1")).is_err());
        assert!(WeightSpec::df(q("1"), q("-1")).is_ok());
        assert!(WeightSpec::gj(q("1"), q("-2"), q("0")).is_err());
        assert!(WeightSpec::gj(q("1"), q("-1"), q("0")).is_ok());
        assert!(WeightSpec::jc(q("1"), q("1")).is_err());
        assert!(WeightSpec::spg_hard_edge(q("1"), q("0"), q("0")).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let w = WeightSpec::gj(q("1"), q("1/2"), q("-0.25")).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"family":"gj","params":{"A":"1","B":"1/2","t":"-1/4"}}"#);
        let back: WeightSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        let bad = r#"{"family":"jc","params":{"alpha":1,"a":2}}"#;
        assert!(serde_json::from_str::<WeightSpec>(bad).is_err());
        let num: WeightSpec = serde_json::from_str(r#"{"family":"spg","params":{"alpha":1,"t":0.1}}"#).unwrap();
        assert_eq!(num, WeightSpec::spg(q("1"), q("1/10")).unwrap());
    }

    #[test]
    fn sample_values() {
        let ctx = PrecisionContext::new(60, 10).unwrap();
        let one = ctx.one();
        let spg = WeightSpec::spg(q("2"), q("1")).unwrap();
        assert!((spg.evaluate(&one, &ctx) - ctx.int(-2).exp()).abs() < ctx.eps());
        let gj = WeightSpec::gj(q("1"), q("0"), q("0")).unwrap();
        let x = ctx.real(0.75);
        assert!((gj.evaluate(&x, &ctx) - (-(&x * &x)).exp()).abs() < ctx.eps());
        let jc = WeightSpec::jc(q("1"), q("1/2")).unwrap();
        assert!(jc.evaluate(&ctx.zero(), &ctx).is_zero());
        let jc2 = WeightSpec::jc(q("2"), q("1/2")).unwrap();
        let v = jc2.potential(&ctx.real(0.75), &ctx).unwrap();
        assert!((v + (ctx.int(7) / 16).ln() * 2).abs() < ctx.eps());
        let df = WeightSpec::df(q("1"), q("0")).unwrap();
        assert!(df.potential(&ctx.zero(), &ctx).is_err());
        assert_eq!(df.domain_notes().len(), 1);
    }

    #[test]
    fn gj_jump_takes_left_value() {
        let ctx = PrecisionContext::new(60, 10).unwrap();
        let gj = WeightSpec::gj(q("1"), q("1"), q("1/2")).unwrap();
        let at = gj.evaluate(&ctx.real(0.5), &ctx);
        assert!((at - (-ctx.real(0.25)).exp()).abs() < ctx.eps());
    }
}
