//! Phase-sensitive overlaps of pure Gaussian states, checked against the
//! truncated Fock oracle.

use ngsim::fock::{auto_cutoffs, oracle_overlap, oracle_state};
use ngsim::gates::Gate;
use ngsim::linalg::c;
use ngsim::phase::{overlap, stellar_overlap, GaussianPure};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = vec![
        Gate::Squeeze { mode: 0, r: 0.8, phi: 0.4 },
        Gate::Squeeze { mode: 1, r: 0.3, phi: 2.0 },
        Gate::BeamSplitter { m1: 0, m2: 1, theta: 0.6, phi: 0.1 },
        Gate::Displace { mode: 0, alpha: c(0.7, -0.4) },
    ];
    let b = vec![
        Gate::Displace { mode: 1, alpha: c(-0.2, 0.9) },
        Gate::Squeeze { mode: 0, r: 0.5, phi: -1.0 },
        Gate::BeamSplitter { m1: 0, m2: 1, theta: 1.1, phi: 0.7 },
    ];
    let (ga, gb) = (GaussianPure::from_gates(2, &a)?, GaussianPure::from_gates(2, &b)?);
    println!("vacuum amplitude <0|a>  {:.12}", ga.ref_overlap());
    println!("triple product  <a|b>   {:.12}", overlap(&ga, &gb)?);
    println!("stellar         <a|b>   {:.12}", stellar_overlap(&ga, &gb)?);

    let cut: Vec<usize> = auto_cutoffs(2, &a, 1e-18).into_iter().zip(auto_cutoffs(2, &b, 1e-18)).map(|(x, y)| x.max(y)).collect();
    let o = oracle_overlap(&oracle_state(2, &a, &cut)?, &oracle_state(2, &b, &cut)?)?;
    println!("Fock oracle     <a|b>   {o:.12}  (cutoffs {cut:?})");
    println!("<1,1|a> = {:.12}", ga.fock_amplitude(&[1, 1]));
    Ok(())
}
