//! |1> as a ring of rotated squeezed coherent states: extent, witness and the
//! rank needed for a given precision.

use ngsim::states::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(DEFAULT_RING);
    let seed = optimal_seed_gates();
    let f = ngsim::phase::GaussianPure::from_gates(1, &seed)?.fock_amplitude(&[1]).norm_sqr();
    let sup = fock1_ring(&seed, ring)?;
    let m = measures(&sup)?;
    println!("seed fidelity |<1|G>|^2 = {f:.6}");
    println!("ring of {ring}: rank {}, l1 {:.8}, extent bound {:.8} (closed form {:.8})", m.rank, m.l1, m.extent_upper, fock1_extent());
    println!("<1|psi> = {:.12}, <n> = {:.10}", sup.fock_amplitude(&[1]) / m.norm, sup.mean_photons()? / m.norm.powi(2));
    let w = witness_check(&sup, &FockWitness { occ: vec![1], scale: 1.0 / f });
    println!("witness values equal: {} (spread {:.1e})", w.equal, w.spread);
    for delta in [0.1, 0.01] {
        println!("delta = {delta}: {:.0} terms suffice", m.approx_rank_bound(delta).ceil());
    }
    let coh = fock1_ring(&coherent_seed_gates(), ring)?;
    println!("coherent-state ring: l1^2 = {:.10} (e = {:.10})", coh.l1().powi(2), std::f64::consts::E);
    Ok(())
}
