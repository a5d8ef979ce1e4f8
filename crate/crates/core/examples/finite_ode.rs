//! The second-order ODE satisfied by P_n at finite n, checked against the
//! exact polynomial under both readings of the SPG coefficient.

use opheun::linode::{spg_ode, SpgReading, GENERIC_X};
use opheun::moments::moment_table;
use opheun::mp::{Exact, PrecisionContext};
use opheun::orthopoly::build_recurrence;
use opheun::weights::WeightSpec;

fn main() -> opheun::Result<()> {
    let ctx = PrecisionContext::new(120, 20)?;
    let (alpha, t) = (Exact::int(1), Exact::parse("1/10")?);
    let w = WeightSpec::spg(alpha.clone(), t.clone())?;
    let n = 6;
    let rec = build_recurrence(&moment_table(&w, n + 2, &ctx)?, n + 1, &ctx)?;
    let b = [&rec.beta[n - 1], &rec.beta[n], &rec.beta[n + 1]];
    for reading in [SpgReading::DropStray8, SpgReading::KeepStray8] {
        let ode = spg_ode(n, &ctx.exact(&alpha), &ctx.exact(&t), b, reading, &ctx)?;
        let r = ode.max_normalized(|x| rec.eval_poly(n, x), &GENERIC_X)?;
        println!("{reading:?}: max normalized residual {}", r.to_sci(3));
    }
    Ok(())
}
