//! Sparsifying a cat state: the number of sampled terms, the distance to the
//! original and the tail bound on large deviations.

use ngsim::linalg::c;
use ngsim::simulator::{hoeffding_tail_check, sparsify, SparsifyPlan};
use ngsim::states::cat_state;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cat = cat_state(c(1.0, 0.0), true)?;
    let gram = cat.gram()?;
    for delta in [0.3, 0.1, 0.05] {
        let plan = SparsifyPlan::new(&cat, delta, 0)?;
        let runs = 100;
        let mut mean = 0.0;
        for s in 0..runs {
            let sp = sparsify(&cat, &SparsifyPlan { seed: s, ..plan.clone() })?;
            let (nn, cross) = sp.exact_norms(&cat, &gram)?;
            mean += (1.0 + nn - 2.0 * cross.re) / runs as f64;
        }
        println!("delta {delta}: k = {}, mean ||psi - Omega||^2 = {mean:.5} (bound {:.5})", plan.k, delta * delta);
    }
    // the bound only bites once delta^2 exceeds 8 F ln 2
    let t = hoeffding_tail_check(&cat, 2.5, 2000, None, 5)?;
    println!(
        "tail: {} of {} draws deviate, frequency {:.4} vs bound {:.4} (F = {:.3})",
        t.failures, t.trials, t.frequency, t.bound, t.fidelity
    );
    Ok(())
}
