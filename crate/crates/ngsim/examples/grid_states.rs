//! GKP and grid states as Gaussian superpositions, and the breeding table.

use ngsim::apps::report_table;
use ngsim::states::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = gkp_state(2, 0, 0.3, 0.3, 5, TAIL_TOL)?;
    let m = measures(&g.state)?;
    println!("qubit GKP, Delta = 0.3: rank {}, tail {:.1e}, extent bound {:.4}, <n> = {:.3}", m.rank, g.tail, m.extent_upper, g.state.mean_photons()? / m.norm.powi(2));
    let s = grid_sensor(0.2, None)?;
    println!("grid sensor, Delta = 0.2: rank {}, tail {:.1e}", s.state.rank(), s.tail);
    println!("delta  naive     tabulated  n(tabulated)  n(naive)");
    for r in report_table(&BREEDING_TABLE.iter().map(|r| r.0).collect::<Vec<_>>())? {
        println!(
            "{:<6} {:<9.4} {:<10} {:<13} {}",
            r.delta,
            r.naive_extent,
            r.table_extent.unwrap_or(f64::NAN),
            r.breeding_from_table.unwrap_or(0),
            r.breeding_from_naive
        );
    }
    Ok(())
}
