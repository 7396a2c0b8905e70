//! Application-level computations: the two-mode |1,1> fidelity search, the
//! grid-state breeding table and the boson-sampling cost comparison.

use std::sync::atomic::{AtomicUsize, Ordering};

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{auto_cutoffs, oracle_state};
use crate::gates::Gate;
use crate::linalg::*;
use crate::phase::GaussianPure;
use crate::states::{boson_sampling_bound, breeding_lower_bound, grid_naive_extent, BREEDING_TABLE};

/// U(phi, xi) S(r1 e^{i theta1}) (x) S(r2 e^{i theta2}) D(alpha1) (x) D(alpha2)|00>,
/// with U the beam splitter of angle xi/2 and phase phi.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwoModeParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub r1: f64,
    pub theta1: f64,
    pub r2: f64,
    pub theta2: f64,
    pub phi: f64,
    pub xi: f64,
}

impl TwoModeParams {
    /// Known parameter set with fidelity 1/4.
    pub const REFERENCE: TwoModeParams = TwoModeParams {
        alpha1: 0.0,
        alpha2: 0.0,
        r1: 0.8814,
        theta1: 0.609,
        r2: 0.8814,
        theta2: 1.107,
        phi: -1.322,
        xi: 1.571,
    };

    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.alpha1, self.alpha2, self.r1, self.theta1, self.r2, self.theta2, self.phi, self.xi]
    }

    pub fn from_slice(v: &[f64]) -> Self {
        Self { alpha1: v[0], alpha2: v[1], r1: v[2], theta1: v[3], r2: v[4], theta2: v[5], phi: v[6], xi: v[7] }
    }

    pub fn gates(&self) -> Vec<Gate> {
        vec![
            Gate::Displace { mode: 0, alpha: c(self.alpha1, 0.0) },
            Gate::Displace { mode: 1, alpha: c(self.alpha2, 0.0) },
            Gate::Squeeze { mode: 0, r: self.r1, phi: self.theta1 },
            Gate::Squeeze { mode: 1, r: self.r2, phi: self.theta2 },
            Gate::BeamSplitter { m1: 0, m2: 1, theta: self.xi / 2.0, phi: self.phi },
        ]
    }
}

/// |<1,1|G'>|^2 through the stellar Hermite recursion.
pub fn two_mode_fidelity(p: &TwoModeParams) -> Result<f64> {
    Ok(GaussianPure::from_gates(2, &p.gates())?.fock_amplitude(&[1, 1]).norm_sqr())
}

/// The same fidelity from the truncated Fock oracle; cutoffs are chosen
/// automatically unless given.
pub fn two_mode_fidelity_oracle(p: &TwoModeParams, cutoff: Option<usize>) -> Result<f64> {
    let gates = p.gates();
    let cut = match cutoff {
        Some(k) => vec![k, k],
        None => auto_cutoffs(2, &gates, 1e-18),
    };
    let v = oracle_state(2, &gates, &cut)?;
    Ok(v.amplitude(&[1, 1])?.norm_sqr())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub lower: [f64; 8],
    pub upper: [f64; 8],
    pub restarts: usize,
    /// Total objective evaluations over all restarts.
    pub budget: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        let tau = std::f64::consts::TAU;
        Self {
            lower: [-2.0, -2.0, 0.0, 0.0, 0.0, 0.0, -tau / 2.0, 0.0],
            upper: [2.0, 2.0, 2.0, tau, 2.0, tau, tau / 2.0, std::f64::consts::PI],
            restarts: 32,
            budget: 20_000,
            tolerance: 1e-10,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizeResult {
    pub params: TwoModeParams,
    pub fidelity: f64,
    pub oracle_fidelity: f64,
    pub evaluations: usize,
    pub restarts: usize,
}

struct Objective<'a> {
    cfg: &'a OptimizerConfig,
    evals: &'a AtomicUsize,
}

impl Objective<'_> {
    fn clip(&self, p: &[f64]) -> Vec<f64> {
        p.iter().enumerate().map(|(i, x)| x.clamp(self.cfg.lower[i], self.cfg.upper[i])).collect()
    }
}

impl CostFunction for Objective<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        self.evals.fetch_add(1, Ordering::Relaxed);
        let q = self.clip(p);
        // penalise leaving the box so the simplex walks back in
        let out: f64 = p.iter().zip(&q).map(|(a, b)| (a - b).powi(2)).sum();
        let f = two_mode_fidelity(&TwoModeParams::from_slice(&q)).unwrap_or(0.0);
        Ok(-f + out)
    }
}

/// Seeded multi-start Nelder-Mead maximising |<1,1|G'>|^2 in the box.
pub fn optimize_fidelity(cfg: &OptimizerConfig) -> Result<OptimizeResult> {
    if cfg.restarts == 0 || cfg.lower.iter().zip(&cfg.upper).any(|(l, u)| !(l.is_finite() && u.is_finite() && l < u)) {
        return Err(Error::Invalid("optimizer needs finite bounds with lower < upper and restarts >= 1".into()));
    }
    let evals = AtomicUsize::new(0);
    let per = (cfg.budget / cfg.restarts).max(20);
    let runs: Vec<(Vec<f64>, f64)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r as u64);
            let start: Vec<f64> = (0..8).map(|i| rng.random_range(cfg.lower[i]..cfg.upper[i])).collect();
            let mut simplex = vec![start.clone()];
            for i in 0..8 {
                let mut v = start.clone();
                v[i] += 0.1 * (cfg.upper[i] - cfg.lower[i]);
                simplex.push(v);
            }
            let obj = Objective { cfg, evals: &evals };
            let solver = NelderMead::new(simplex)
                .with_sd_tolerance(cfg.tolerance)
                .map_err(|e| Error::Numerical(e.to_string()))?;
            // roughly one evaluation per iteration plus the initial simplex
            let res = Executor::new(obj, solver)
                .configure(|s| s.max_iters((per - 9) as u64))
                .run()
                .map_err(|e| Error::Numerical(e.to_string()))?;
            let st = res.state();
            let best = st.get_best_param().cloned().unwrap_or(start);
            Ok((Objective { cfg, evals: &evals }.clip(&best), -st.get_best_cost()))
        })
        .collect::<Result<_>>()?;
    let (best, f) = runs.into_iter().fold((vec![], f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc });
    let params = TwoModeParams::from_slice(&best);
    let fidelity = two_mode_fidelity(&params)?;
    let oracle_fidelity = two_mode_fidelity_oracle(&params, None)?;
    debug_assert!((fidelity - f).abs() < 1e-9);
    Ok(OptimizeResult { params, fidelity, oracle_fidelity, evaluations: evals.into_inner(), restarts: cfg.restarts })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub delta: f64,
    /// (sum |c|)^2 / sum |c|^2 of the grid-sensor envelope.
    pub naive_extent: f64,
    /// Tabulated extent, when the row is in `BREEDING_TABLE`.
    pub table_extent: Option<f64>,
    pub table_n: Option<u64>,
    /// ceil(xi / 2) from the tabulated extent.
    pub breeding_from_table: Option<u64>,
    /// ceil(xi / 2) from the naive extent.
    pub breeding_from_naive: u64,
}

/// Breeding table for the given Delta values. The naive extents come out
/// close to sqrt2 / Delta, roughly twice the tabulated column.
pub fn report_table(deltas: &[f64]) -> Result<Vec<TableRow>> {
    deltas
        .iter()
        .map(|&d| {
            if !(d > 0.0) {
                return Err(Error::Invalid("Delta must be positive".into()));
            }
            let naive = grid_naive_extent(d);
            let row = BREEDING_TABLE.iter().find(|r| (r.0 - d).abs() < 1e-12);
            Ok(TableRow {
                delta: d,
                naive_extent: naive,
                table_extent: row.map(|r| r.1),
                table_n: row.map(|r| r.2),
                breeding_from_table: row.map(|r| breeding_lower_bound(r.1)).transpose()?,
                breeding_from_naive: breeding_lower_bound(naive.max(1.0))?,
            })
        })
        .collect()
}

/// (M, (4e/(3 sqrt3))^M, e^M) for M = 1..=m_max.
pub fn boson_sampling_rows(m_max: u32) -> Vec<(u32, f64, f64)> {
    (1..=m_max).map(|m| {
        let (b, e) = boson_sampling_bound(m);
        (m, b, e)
    }).collect()
}

pub fn boson_sampling_csv(m_max: u32) -> String {
    let mut s = String::from("m,bound,exp_m\n");
    for (m, b, e) in boson_sampling_rows(m_max) {
        s.push_str(&format!("{m},{b:.12e},{e:.12e}\n"));
    }
    s
}
