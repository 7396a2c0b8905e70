//! Versioned JSON circuit programs and the result documents they produce.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "modes": 1,
//!   "seed": 7,
//!   "initial": {"kind": "cat", "alpha": 1.0, "parity": "even"},
//!   "ops": [{"op": "displace", "mode": 0, "alpha": [0.1, -0.2]}],
//!   "task": {"kind": "exact_born", "modes": [0], "outcome": [0.0]}
//! }
//! ```
//!
//! Complex numbers are written as a real number or a `[re, im]` pair.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::apps::{boson_sampling_rows, optimize_fidelity, report_table, OptimizerConfig};
use crate::error::Error;
use crate::gates::Gate;
use crate::linalg::*;
use crate::simulator::{
    approx_born, condition, evolve, exact_born, fast_norm, ApproxParams, BornEstimate, Counters, NormParams,
};
use crate::states::{
    breeding_lower_bound, cat_state, coherent_seed_gates, fock1_ring, gkp_state, grid_sensor, measures,
    optimal_seed_gates, rotational_code, Superposition, DEFAULT_RING, BREEDING_TABLE, TAIL_TOL,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ProgramError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid field `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error(transparent)]
    Sim(#[from] Error),
}

impl ProgramError {
    /// Process exit code: 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            ProgramError::Parse { .. } | ProgramError::Validation { .. } => 2,
            ProgramError::Sim(e) if e.is_validation() => 2,
            ProgramError::Sim(_) => 3,
        }
    }
}

fn invalid(field: &str, message: impl Into<String>) -> ProgramError {
    ProgramError::Validation { field: field.into(), message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cx {
    Real(f64),
    Pair([f64; 2]),
}

impl Cx {
    pub fn value(self) -> C64 {
        match self {
            Cx::Real(x) => c(x, 0.0),
            Cx::Pair([a, b]) => c(a, b),
        }
    }
}

impl From<C64> for Cx {
    fn from(z: C64) -> Self {
        Cx::Pair([z.re, z.im])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    #[default]
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RingSeed {
    #[default]
    Optimal,
    Coherent,
}

/// Initial state; library states occupy mode 0 and the rest start in vacuum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    Vacuum,
    Coherent { alpha: Vec<Cx> },
    Squeezed { r: f64, #[serde(default)] phi: f64 },
    Cat { alpha: Cx, #[serde(default)] parity: Parity },
    Rotational { order: usize, mu: usize, alpha: Cx },
    Gkp { d: usize, mu: usize, kappa: f64, delta: f64, s_max: usize, tail_tol: Option<f64> },
    Grid { delta: f64, t_max: Option<i64> },
    Fock1Ring { ring: Option<usize>, #[serde(default)] seed: RingSeed },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Op {
    Displace { mode: usize, alpha: Cx },
    Squeeze { mode: usize, r: f64, #[serde(default)] phi: f64 },
    Phase { mode: usize, theta: f64 },
    Beamsplitter { m1: usize, m2: usize, theta: f64, #[serde(default)] phi: f64 },
    /// Row-major 2n x 2n symplectic matrix and optional displacement.
    Symplectic { s: Vec<Vec<f64>>, d: Option<Vec<f64>> },
    Channel { kind: String },
    Condition { modes: Vec<usize>, outcome: Vec<Cx> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    ExactBorn { modes: Vec<usize>, outcome: Vec<Cx> },
    ApproxBorn {
        modes: Vec<usize>,
        outcome: Vec<Cx>,
        delta: f64,
        epsilon: f64,
        pfail: f64,
        ensemble_n: Option<f64>,
    },
    Norm { epsilon: f64, pfail: f64, ensemble_n: Option<f64> },
    Extent { approx_delta: Option<f64> },
    BreedBound { xi: f64 },
    BsBound { m: u32 },
    OptimizeFidelity { restarts: Option<usize>, budget: Option<usize> },
    Table1 { deltas: Option<Vec<f64>> },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::ExactBorn { .. } => "exact_born",
            Task::ApproxBorn { .. } => "approx_born",
            Task::Norm { .. } => "norm",
            Task::Extent { .. } => "extent",
            Task::BreedBound { .. } => "breed_bound",
            Task::BsBound { .. } => "bs_bound",
            Task::OptimizeFidelity { .. } => "optimize_fidelity",
            Task::Table1 { .. } => "table1",
        }
    }
}

fn default_modes() -> usize {
    1
}
fn default_initial() -> InitialState {
    InitialState::Vacuum
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Program {
    pub schema_version: u32,
    #[serde(default = "default_modes")]
    pub modes: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_initial")]
    pub initial: InitialState,
    #[serde(default)]
    pub ops: Vec<Op>,
    pub task: Task,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultCounters {
    pub amplitude_evals: u64,
    pub samples: u64,
}

impl From<Counters> for ResultCounters {
    fn from(c: Counters) -> Self {
        Self { amplitude_evals: c.amplitude_evals, samples: c.samples }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub schema_version: u32,
    pub task: String,
    pub inputs: Value,
    pub value: Value,
    pub error_band: Option<[f64; 2]>,
    pub counters: ResultCounters,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl ResultDoc {
    /// One header line and one data line.
    pub fn to_csv(&self) -> String {
        let v = match &self.value {
            Value::Number(n) => n.to_string(),
            other => format!("\"{}\"", other.to_string().replace('"', "\"\"")),
        };
        let (lo, hi) = self.error_band.map(|b| (b[0].to_string(), b[1].to_string())).unwrap_or_default();
        format!(
            "task,value,error_lo,error_hi,amplitude_evals,samples,seed,schema_version\n{},{},{},{},{},{},{},{}\n",
            self.task, v, lo, hi, self.counters.amplitude_evals, self.counters.samples, self.seed, self.schema_version
        )
    }
}

pub fn parse_program(text: &str) -> Result<Program, ProgramError> {
    let p: Program = serde_json::from_str(text).map_err(|e| ProgramError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if p.schema_version != SCHEMA_VERSION {
        return Err(invalid("schema_version", format!("unsupported version {}", p.schema_version)));
    }
    Ok(p)
}

pub fn parse_result(text: &str) -> Result<ResultDoc, ProgramError> {
    serde_json::from_str(text).map_err(|e| ProgramError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

fn check_mode(field: &str, m: usize, n: usize) -> Result<(), ProgramError> {
    if m >= n {
        return Err(invalid(field, format!("mode {m} out of range for {n} modes")));
    }
    Ok(())
}

fn initial_state(p: &Program) -> Result<Superposition, ProgramError> {
    let n = p.modes;
    if n == 0 {
        return Err(invalid("modes", "need at least one mode"));
    }
    let lib = |s: Superposition| if n > 1 { s.tensor(&Superposition::vacuum(n - 1)) } else { s };
    let st = match &p.initial {
        InitialState::Vacuum => Superposition::vacuum(n),
        InitialState::Coherent { alpha } => {
            if alpha.len() != n {
                return Err(invalid("initial.alpha", "one amplitude per mode"));
            }
            let gates = alpha.iter().enumerate().map(|(k, a)| Gate::Displace { mode: k, alpha: a.value() }).collect();
            Superposition::from_gates(n, vec![(c(1.0, 0.0), gates)])?
        }
        InitialState::Squeezed { r, phi } => {
            let gates = (0..n).map(|k| Gate::Squeeze { mode: k, r: *r, phi: *phi }).collect();
            Superposition::from_gates(n, vec![(c(1.0, 0.0), gates)])?
        }
        InitialState::Cat { alpha, parity } => lib(cat_state(alpha.value(), *parity == Parity::Even)?),
        InitialState::Rotational { order, mu, alpha } => lib(rotational_code(*order, *mu, alpha.value())?),
        InitialState::Gkp { d, mu, kappa, delta, s_max, tail_tol } => {
            lib(gkp_state(*d, *mu, *kappa, *delta, *s_max, tail_tol.unwrap_or(TAIL_TOL))?.state)
        }
        InitialState::Grid { delta, t_max } => lib(grid_sensor(*delta, *t_max)?.state),
        InitialState::Fock1Ring { ring, seed } => {
            let g = match seed {
                RingSeed::Optimal => optimal_seed_gates(),
                RingSeed::Coherent => coherent_seed_gates(),
            };
            lib(fock1_ring(&g, ring.unwrap_or(DEFAULT_RING))?)
        }
    };
    Ok(st)
}

fn op_gate(op: &Op, n: usize, idx: usize) -> Result<Option<Gate>, ProgramError> {
    let f = |name: &str| format!("ops[{idx}].{name}");
    let g = match op {
        Op::Displace { mode, alpha } => {
            check_mode(&f("mode"), *mode, n)?;
            Gate::Displace { mode: *mode, alpha: alpha.value() }
        }
        Op::Squeeze { mode, r, phi } => {
            check_mode(&f("mode"), *mode, n)?;
            Gate::Squeeze { mode: *mode, r: *r, phi: *phi }
        }
        Op::Phase { mode, theta } => {
            check_mode(&f("mode"), *mode, n)?;
            Gate::Phase { mode: *mode, theta: *theta }
        }
        Op::Beamsplitter { m1, m2, theta, phi } => {
            check_mode(&f("m1"), *m1, n)?;
            check_mode(&f("m2"), *m2, n)?;
            if m1 == m2 {
                return Err(invalid(&f("m2"), "beam splitter needs two distinct modes"));
            }
            Gate::BeamSplitter { m1: *m1, m2: *m2, theta: *theta, phi: *phi }
        }
        Op::Symplectic { s, d } => {
            if s.len() != 2 * n || s.iter().any(|r| r.len() != 2 * n) {
                return Err(invalid(&f("s"), format!("expected a {0} x {0} matrix", 2 * n)));
            }
            let sm = RMat::from_fn(2 * n, 2 * n, |i, j| s[i][j]);
            let dv = match d {
                Some(d) if d.len() == 2 * n => RVec::from_column_slice(d),
                Some(_) => return Err(invalid(&f("d"), "displacement length must be 2n")),
                None => RVec::zeros(2 * n),
            };
            crate::gaussian::check_symplectic(&sm).map_err(|e| invalid(&f("s"), e.to_string()))?;
            Gate::Symplectic { s: sm, d: dv }
        }
        Op::Channel { kind } => {
            return Err(invalid(
                &f("kind"),
                format!("channel `{kind}` would make the state mixed; programs evolve pure superpositions only"),
            ))
        }
        Op::Condition { .. } => return Ok(None),
    };
    Ok(Some(g))
}

fn born_doc(b: &BornEstimate) -> (Value, Option<[f64; 2]>, ResultCounters, Value) {
    let band = if b.band.0 == b.band.1 { None } else { Some([b.band.0, b.band.1]) };
    let details = json!({
        "method": b.method,
        "quadrature_density": b.quadrature_density,
        "numerator": b.numerator,
        "norm_sqr": b.norm_sqr,
        "confidence": b.confidence,
        "clamped": b.counters.clamped,
    });
    (json!(b.value), band, b.counters.into(), details)
}

fn outcome(modes: &[usize], outcome: &[Cx], n: usize) -> Result<Vec<C64>, ProgramError> {
    if modes.len() != outcome.len() || modes.is_empty() {
        return Err(invalid("task.outcome", "one outcome per measured mode"));
    }
    for &m in modes {
        check_mode("task.modes", m, n)?;
    }
    Ok(outcome.iter().map(|x| x.value()).collect())
}

/// The program's initial state, before any ops.
pub fn initial_superposition(p: &Program) -> Result<Superposition, ProgramError> {
    initial_state(p)
}

/// Runs a parsed program.
pub fn run(p: &Program) -> Result<ResultDoc, ProgramError> {
    let needs_state = !matches!(
        p.task,
        Task::BreedBound { .. } | Task::BsBound { .. } | Task::OptimizeFidelity { .. } | Task::Table1 { .. }
    );
    let mut st = None;
    let mut n = p.modes;
    if needs_state {
        let mut s = initial_state(p)?;
        let mut pending = Vec::new();
        for (i, op) in p.ops.iter().enumerate() {
            match op {
                Op::Condition { modes, outcome: out } => {
                    s = evolve(&s, &pending)?;
                    pending.clear();
                    let x = outcome(modes, out, n).map_err(|_| invalid(&format!("ops[{i}].outcome"), "bad outcome"))?;
                    if modes.len() >= n {
                        return Err(invalid(&format!("ops[{i}].modes"), "at least one mode must stay unmeasured"));
                    }
                    s = condition(&s, modes, &x)?.0;
                    n -= modes.len();
                }
                other => {
                    if let Some(g) = op_gate(other, n, i)? {
                        pending.push(g);
                    }
                }
            }
        }
        st = Some(evolve(&s, &pending)?);
    } else if !p.ops.is_empty() {
        return Err(invalid("ops", format!("task {} takes no circuit", p.task.name())));
    }
    let inputs = serde_json::to_value(p).expect("program serialises");
    let zero = ResultCounters { amplitude_evals: 0, samples: 0 };
    let (value, error_band, counters, details) = match &p.task {
        Task::ExactBorn { modes, outcome: out } => {
            let s = st.as_ref().unwrap();
            born_doc(&exact_born(s, modes, &outcome(modes, out, n)?)?)
        }
        Task::ApproxBorn { modes, outcome: out, delta, epsilon, pfail, ensemble_n } => {
            let s = st.as_ref().unwrap();
            let mut np = NormParams::new(*epsilon, *pfail, p.seed);
            np.ensemble_n = *ensemble_n;
            born_doc(&approx_born(s, modes, &outcome(modes, out, n)?, &ApproxParams { delta: *delta, norm: np })?)
        }
        Task::Norm { epsilon, pfail, ensemble_n } => {
            let s = st.as_ref().unwrap();
            let mut np = NormParams::new(*epsilon, *pfail, p.seed);
            np.ensemble_n = *ensemble_n;
            let e = fast_norm(s, &np)?;
            let (lo, hi) = e.band();
            let details = json!({
                "ensemble_n": e.ensemble_n,
                "delta_bias": e.delta_bias,
                "photon_bound": e.photon_bound,
                "samples": e.samples,
            });
            (json!(e.eta), Some([lo, hi]), e.counters.into(), details)
        }
        Task::Extent { approx_delta } => {
            let s = st.as_ref().unwrap();
            let m = measures(s)?;
            let k = s.rank() as u64;
            let details = json!({
                "rank": m.rank,
                "l1": m.l1,
                "norm": m.norm,
                "approx_rank_bound": approx_delta.map(|d| m.approx_rank_bound(d)),
            });
            (json!(m.extent_upper), None, ResultCounters { amplitude_evals: k * k, samples: 0 }, details)
        }
        Task::BreedBound { xi } => {
            let b = breeding_lower_bound(*xi).map_err(|e| invalid("task.xi", e.to_string()))?;
            (json!(b), None, zero, Value::Null)
        }
        Task::BsBound { m } => {
            let rows: Vec<Value> =
                boson_sampling_rows(*m).into_iter().map(|(m, b, e)| json!({"m": m, "bound": b, "exp_m": e})).collect();
            let (b, e) = crate::states::boson_sampling_bound(*m);
            (json!(b), None, zero, json!({"exp_m": e, "rows": rows}))
        }
        Task::OptimizeFidelity { restarts, budget } => {
            let d = OptimizerConfig::default();
            let cfg = OptimizerConfig {
                restarts: restarts.unwrap_or(d.restarts),
                budget: budget.unwrap_or(d.budget),
                seed: p.seed,
                ..d
            };
            let r = optimize_fidelity(&cfg)?;
            let details = json!({
                "params": r.params,
                "oracle_fidelity": r.oracle_fidelity,
                "restarts": r.restarts,
            });
            (json!(r.fidelity), None, ResultCounters { amplitude_evals: r.evaluations as u64, samples: 0 }, details)
        }
        Task::Table1 { deltas } => {
            let ds: Vec<f64> = deltas.clone().unwrap_or_else(|| BREEDING_TABLE.iter().map(|r| r.0).collect());
            let rows = report_table(&ds).map_err(|e| invalid("task.deltas", e.to_string()))?;
            (serde_json::to_value(&rows).expect("rows serialise"), None, zero, Value::Null)
        }
    };
    Ok(ResultDoc {
        schema_version: SCHEMA_VERSION,
        task: p.task.name().into(),
        inputs,
        value,
        error_band,
        counters,
        seed: p.seed,
        details,
    })
}

/// Parses and runs program text.
pub fn run_text(text: &str) -> Result<ResultDoc, ProgramError> {
    run(&parse_program(text)?)
}
