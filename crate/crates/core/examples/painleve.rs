//! Certifies which Painlevé equation each family's flow satisfies.

use opheun::mp::PrecisionContext;
use opheun::painleve::{certify, tol_scaling, FlowConfig};
use opheun::Family;

fn main() -> opheun::Result<()> {
    let ctx = PrecisionContext::new(50, 10)?;
    let cases = [(Family::Spg, 3, 1.0), (Family::Df, 4, 0.5), (Family::Gj, 3, 0.0), (Family::Jc, 3, 1.0)];
    for (f, n, a) in cases {
        let alpha = ctx.real(a);
        let cfg = FlowConfig::generic(f, 0, 1e-12);
        let r = certify(f, n, &alpha, &cfg, &ctx)?;
        println!("{f}: {} (residual {:.1e}, verdict {})", r.certified, r.max_residual, if r.verdict { "pass" } else { "fail" });
        for c in &r.candidates {
            println!("    {:<55} {:.2e}", c.label, c.max_residual);
        }
        let (hi, lo) = tol_scaling(f, n, &alpha, &cfg, 1e-10, 1e-12, &ctx)?;
        println!("    deviation {hi:.1e} at tol 1e-10, {lo:.1e} at tol 1e-12");
    }
    Ok(())
}
