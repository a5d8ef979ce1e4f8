//! Recurrence coefficients for the semi-classical Laguerre weight and the
//! approach of 4β_n/(2n+α) to one.

use opheun::moments::moment_table;
use opheun::mp::{Exact, PrecisionContext};
use opheun::orthopoly::build_recurrence;
use opheun::weights::WeightSpec;

fn main() -> opheun::Result<()> {
    let n = 40;
    let ctx = PrecisionContext::new(60, 20)?.for_degree(n);
    let w = WeightSpec::spg(Exact::int(1), Exact::parse("0.1")?)?;
    let table = moment_table(&w, n + 1, &ctx)?;
    let rec = build_recurrence(&table, n, &ctx)?;
    for k in [1, 5, 10, 20, 30, 40] {
        let ratio = rec.beta[k].to_f64() * 4.0 / (2.0 * k as f64 + 1.0);
        println!("n = {k:>2}  beta = {:>12.8}  4beta/(2n+1) = {ratio:.6}", rec.beta[k].to_f64());
    }
    let report = rec.cross_check(&table.entries, 30);
    println!("beta vs Hankel ratio, worst relative error {:.1e}", report.beta_vs_determinants);
    println!("orthogonality <P_3, P_7> / sqrt(h_3 h_7) = {:.1e}", rec.orthogonality_residual(&table.entries, 3, 7).to_f64());
    Ok(())
}
