#![allow(dead_code)]

use ngsim::gates::Gate;
use ngsim::linalg::{c, C64};
use rand::Rng;
use std::f64::consts::{PI, TAU};

pub fn polar(rng: &mut impl Rng, max: f64) -> C64 {
    C64::from_polar(rng.random_range(0.0..max), rng.random_range(0.0..TAU))
}

/// Squeezers, a mixing layer and displacements: a generic pure Gaussian state.
pub fn random_state_gates(rng: &mut impl Rng, n: usize, r_max: f64, alpha_max: f64) -> Vec<Gate> {
    let mut g = Vec::new();
    for k in 0..n {
        g.push(Gate::Squeeze { mode: k, r: rng.random_range(0.0..r_max), phi: rng.random_range(0.0..TAU) });
    }
    if n == 2 {
        g.push(Gate::BeamSplitter { m1: 0, m2: 1, theta: rng.random_range(0.0..PI), phi: rng.random_range(0.0..TAU) });
    }
    for k in 0..n {
        g.push(Gate::Phase { mode: k, theta: rng.random_range(0.0..TAU) });
        g.push(Gate::Displace { mode: k, alpha: polar(rng, alpha_max) });
    }
    g
}

/// Random circuit layer mix with bounded squeezing and displacement.
pub fn random_circuit(rng: &mut impl Rng, n: usize, depth: usize, r_max: f64, alpha_max: f64) -> Vec<Gate> {
    (0..depth)
        .map(|_| {
            let k = rng.random_range(0..n);
            match rng.random_range(0..if n > 1 { 4 } else { 3 }) {
                0 => Gate::Squeeze { mode: k, r: rng.random_range(0.0..r_max), phi: rng.random_range(0.0..TAU) },
                1 => Gate::Phase { mode: k, theta: rng.random_range(0.0..TAU) },
                2 => Gate::Displace { mode: k, alpha: polar(rng, alpha_max) },
                _ => Gate::BeamSplitter { m1: 0, m2: 1, theta: rng.random_range(0.0..PI), phi: rng.random_range(0.0..TAU) },
            }
        })
        .collect()
}

pub fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

pub fn zero() -> C64 {
    c(0.0, 0.0)
}
