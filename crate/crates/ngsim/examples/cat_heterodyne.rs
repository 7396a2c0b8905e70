//! Exact heterodyne densities of a cat state after a beam splitter, with
//! sequential conditioning, checked against the Fock oracle.

use ngsim::fock::oracle_born;
use ngsim::gates::Gate;
use ngsim::linalg::c;
use ngsim::simulator::{condition, evolve, exact_born};
use ngsim::states::{cat_state, Superposition};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cat = cat_state(c(1.5, 0.0), true)?.tensor(&Superposition::vacuum(1));
    let circuit = [Gate::BeamSplitter { m1: 0, m2: 1, theta: std::f64::consts::FRAC_PI_4, phi: 0.0 }];
    let psi = evolve(&cat, &circuit)?;

    let fock = {
        let mut v = cat.to_fock(&psi.oracle_cutoffs(&[])?)?;
        v.apply_gates(&circuit)?;
        v
    };
    for x in [[c(0.0, 0.0), c(0.0, 0.0)], [c(1.0, 0.2), c(-1.0, 0.1)], [c(1.0, 0.0), c(1.0, 0.0)]] {
        let b = exact_born(&psi, &[0, 1], &x)?;
        println!("p({:.1}, {:.1}) = {:.12}  oracle {:.12}", x[0], x[1], b.value, oracle_born(&fock, &[0, 1], &x)?);
    }
    let y = c(0.8, 0.0);
    let marginal = exact_born(&psi, &[1], &[y])?;
    let (post, w) = condition(&psi, &[1], &[y])?;
    println!("mode 1 at {y}: density {:.12}, unnormalised weight {w:.6e}", marginal.value);
    println!("conditioned state keeps rank {} (was {})", post.rank(), psi.rank());
    let inner = exact_born(&post, &[0], &[c(0.8, 0.0)])?;
    println!("then mode 0 at 0.8: {:.12}", inner.value);
    Ok(())
}
