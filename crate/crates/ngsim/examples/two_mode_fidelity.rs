//! Best Gaussian approximation of |1,1>: the reference parameters and a
//! seeded multi-start search.

use ngsim::apps::{optimize_fidelity, two_mode_fidelity, two_mode_fidelity_oracle, OptimizerConfig, TwoModeParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = TwoModeParams::REFERENCE;
    println!("reference: {:.8} (oracle {:.8})", two_mode_fidelity(&p)?, two_mode_fidelity_oracle(&p, None)?);
    println!("product of single-mode optima: {:.8}", 0.47789f64.powi(2));
    let restarts = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(32);
    let r = optimize_fidelity(&OptimizerConfig { restarts, budget: 625 * restarts, ..Default::default() })?;
    println!("search: {:.8} after {} evaluations, oracle {:.8}", r.fidelity, r.evaluations, r.oracle_fidelity);
    println!("{:?}", r.params);
    Ok(())
}
