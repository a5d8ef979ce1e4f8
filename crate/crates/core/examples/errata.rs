//! Suspect formulas, the readings tried and the one each oracle selects.

use opheun::errata::collect;
use opheun::mp::PrecisionContext;

fn main() -> opheun::Result<()> {
    let ctx = PrecisionContext::new(120, 20)?;
    for e in collect(&ctx)? {
        println!("{:<26} {:?}: {}", e.id, e.status, e.selected);
        for v in &e.variants {
            match v.value {
                Some(x) => println!("    {:<50} {x:.2e}", v.reading),
                None => println!("    {}", v.reading),
            }
        }
    }
    Ok(())
}
