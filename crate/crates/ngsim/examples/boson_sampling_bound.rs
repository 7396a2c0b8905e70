//! Gaussian-rank cost of M single photons against the e^M permanent bound.
//! Prints CSV.

fn main() {
    let m = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    print!("{}", ngsim::apps::boson_sampling_csv(m));
}
