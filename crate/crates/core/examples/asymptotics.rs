//! Expansions of the log determinant ratio in three regimes, the printed
//! coefficients against the recomputed ones, and a short numeric trend.

use opheun::mp::{Exact, PrecisionContext};
use opheun::scaling::{compare, delta_trend, factorization_check, BlockExponent, Expansion, Regime};

fn main() -> opheun::Result<()> {
    let ctx = PrecisionContext::new(80, 20)?;
    let alpha = ctx.int(1);
    for r in Regime::ALL {
        let printed = Expansion::printed(r, &alpha, &ctx)?;
        let recomputed = Expansion::recomputed(r, &alpha, BlockExponent::MinusThreeHalves, &ctx)?;
        println!("{}", r.as_str());
        for c in compare(&printed, &recomputed, &ctx).iter().filter(|c| !c.agree) {
            println!("    {}: printed {}, recomputed {}", c.term, c.printed, c.recomputed);
        }
    }
    let q = |s: &str| Exact::parse(s).unwrap();
    for n in 1..=3 {
        let f = factorization_check(&q("1"), &q("1/5"), &q("3/10"), n, &ctx)?;
        println!("factorisation n={n}: even {:.1e}, odd {:.1e}", f.even, f.odd);
    }
    let target = Expansion::printed(Regime::LargeS, &alpha, &ctx)?.eval(&ctx.int(100), &ctx.real(0.5), &ctx);
    for (even, odd) in delta_trend(&q("1"), &q("100"), &q("1/2"), &[4, 6], &ctx)? {
        println!("n = {}: ln ratio even {:.4}, odd {:.4}, expansion {:.4}", even.n, even.ln_ratio, odd.ln_ratio, target.to_f64());
    }
    Ok(())
}
