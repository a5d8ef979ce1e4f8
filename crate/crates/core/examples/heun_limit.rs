//! Large-n limits of the finite ODEs: residual of the rescaled exact
//! polynomials in the limiting Heun-type equation at two degrees.

use opheun::linode::{heun_limit_convergence, DfMap, EtaPower, GjEta, LimitCase, LimitReading};
use opheun::mp::PrecisionContext;
use opheun::Family;

fn main() -> opheun::Result<()> {
    let ctx = PrecisionContext::new(50, 20)?;
    let reading = LimitReading {
        gj_eta: GjEta::DISPLAYED,
        gj_qhat: GjEta { root: 6, power: EtaPower::ThreeHalves },
        df_map: DfMap::QuarterRoot,
    };
    for f in Family::ALL {
        let r = heun_limit_convergence(&LimitCase::standard(f), &reading, 8, 32, &ctx)?;
        println!(
            "{f}: residual {:.3e} at n=8, {:.3e} at n=32, ratio {:.2} ({})",
            r.residual_small,
            r.residual_large,
            r.ratio,
            if r.passed { "converging" } else { "not converging" }
        );
    }
    Ok(())
}
