//! Monte Carlo norm estimation over a coherent-state ensemble and the
//! sparsified Born rule built on it.

use ngsim::linalg::c;
use ngsim::simulator::{approx_born, exact_born, fast_norm, ApproxParams, NormParams};
use ngsim::states::{cat_state, gkp_state, TAIL_TOL};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cat = cat_state(c(1.0, 0.0), true)?.scaled(c(2.0, 0.0));
    let e = fast_norm(&cat, &NormParams::new(0.1, 0.05, 1))?;
    let (lo, hi) = e.band();
    println!(
        "cat: exact {:.6}, estimate {:.6}, band [{lo:.6}, {hi:.6}], N = {}, {} samples, {} amplitude evaluations",
        cat.norm_sqr()?,
        e.eta,
        e.ensemble_n,
        e.samples,
        e.counters.amplitude_evals
    );

    let gkp = gkp_state(2, 0, 0.3, 0.3, 5, TAIL_TOL)?.state;
    let x = [c(0.0, 0.3)];
    let exact = exact_born(&gkp, &[0], &x)?;
    let p = ApproxParams { delta: 0.05, norm: NormParams::new(0.1, 0.05, 9) };
    let approx = approx_born(&gkp, &[0], &x, &p)?;
    println!("gkp density at {}: exact {:.6}", x[0], exact.value);
    println!(
        "  sparsified {:.6}, band [{:.6}, {:.6}] at confidence {:.2}",
        approx.value, approx.band.0, approx.band.1, approx.confidence
    );
    Ok(())
}
