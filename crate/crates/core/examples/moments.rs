//! Moments of the four weight families, with the method that produced each.

use opheun::moments::{cross_check, moment, moment_table};
use opheun::mp::{Exact, PrecisionContext};
use opheun::weights::WeightSpec;

fn main() -> opheun::Result<()> {
    let ctx = PrecisionContext::new(60, 20)?;
    let q = |s: &str| Exact::parse(s).unwrap();
    let weights = [
        WeightSpec::spg(q("1"), q("0.1"))?,
        WeightSpec::df(q("1"), q("1"))?,
        WeightSpec::gj(q("1"), q("0"), q("0"))?,
        WeightSpec::jc(q("1"), q("1/2"))?,
    ];
    for w in &weights {
        println!("{}", w.family());
        for k in [0, 2, 4] {
            let m = moment(w, k, &ctx)?;
            println!("  mu_{k} = {}  ({})", m.value.to_sci(30), m.method.as_str());
        }
        let table = moment_table(w, 4, &ctx)?;
        let worst = cross_check(&table)?.iter().map(|c| c.relative_difference).fold(0.0, f64::max);
        println!("  closed form vs quadrature, worst relative difference {worst:.1e}");
    }
    Ok(())
}
