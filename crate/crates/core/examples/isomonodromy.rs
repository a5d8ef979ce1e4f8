//! Gauge identities of the Hamiltonian structure for each family, and the
//! Hamiltonian flow from one starting point.

use opheun::isomono::{check_case_a, check_case_b, hamilton_flow, CaseTag, Hamiltonian, T2Reading};
use opheun::mp::PrecisionContext;
use opheun::Family;

fn main() -> opheun::Result<()> {
    let ctx = PrecisionContext::new(100, 20)?;
    let t = ctx.real(0.37);
    for f in Family::ALL {
        let h = Hamiltonian::for_family(f, 5, ctx.real(0.75), &ctx);
        for scale in [1.0, 2.0] {
            let g = h.gauge.scaled(&ctx.real(scale));
            let rep = match h.case {
                CaseTag::B => check_case_b(&h.limit, &g, &t, &ctx)?,
                CaseTag::A => check_case_a(&h.limit, &g, &t, T2Reading::MBoth, &ctx)?,
            };
            println!("{f} case {:?}, gauge x{scale}: passed = {}", h.case, rep.passed);
        }
    }
    let h = Hamiltonian::for_family(Family::Spg, 3, ctx.int(1), &ctx);
    let traj = hamilton_flow(&h, 1.0, 1.0, 0.0, 2.0, 1e-12)?;
    let end = traj.last();
    println!("spg flow: {} steps, lambda(2) = {:.12}, mu(2) = {:.12}", traj.points.len(), end.lambda, end.mu);
    Ok(())
}
