//! Evolution, conditioning and Born probabilities of Gaussian superpositions.
//!
//! Two estimators: [`exact_born`] uses the full Gram matrix (quadratic in the
//! rank), [`approx_born`] sparsifies the state and estimates norms from random
//! coherent-state overlaps (linear in the rank).
//!
//! Heterodyne densities are reported with respect to d^2 alpha, i.e. the POVM
//! |alpha><alpha| / pi per mode. Multiply by 2^{-k} for the density in the
//! quadrature outcome r = sqrt2 (Re alpha, Im alpha) used by
//! [`crate::gaussian::generaldyne_density`].

use std::f64::consts::PI;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::{GaussOp, Gate};
use crate::linalg::*;
use crate::phase::{condition_heterodyne, propagate};
use crate::states::{quadratic_norm, Superposition, WeightedGaussian};

/// Densities this far below zero are treated as rounding and clamped.
pub const NEG_CLAMP: f64 = -1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub amplitude_evals: u64,
    pub samples: u64,
    pub clamped: u64,
}

impl Counters {
    fn add(&mut self, o: &Counters) {
        self.amplitude_evals += o.amplitude_evals;
        self.samples += o.samples;
        self.clamped += o.clamped;
    }
}

fn gram_evals(k: usize) -> u64 {
    (k * k) as u64
}

/// Applies `gates` to every term; coefficients are untouched.
pub fn evolve(sup: &Superposition, gates: &[Gate]) -> Result<Superposition> {
    let n = sup.modes();
    for g in gates {
        g.validate(n)?;
    }
    let ops: Vec<GaussOp> = gates.iter().map(|g| g.op(n)).collect();
    let terms = sup
        .terms()
        .par_iter()
        .map(|t| {
            let mut g = t.term.clone();
            for op in &ops {
                g = propagate(&g, op)?;
            }
            let prep = t.prep.as_ref().map(|p| p.iter().chain(gates).cloned().collect());
            Ok(WeightedGaussian { coeff: t.coeff, term: g, prep })
        })
        .collect::<Result<Vec<_>>>()?;
    Superposition::new(terms)
}

/// Applies one Gaussian unitary to every term.
pub fn evolve_op(sup: &Superposition, op: &GaussOp) -> Result<Superposition> {
    let terms = sup
        .terms()
        .par_iter()
        .map(|t| Ok(WeightedGaussian { coeff: t.coeff, term: propagate(&t.term, op)?, prep: None }))
        .collect::<Result<Vec<_>>>()?;
    Superposition::new(terms)
}

/// Heterodyne outcome `x` on `measured`: returns <x|_B psi as a superposition
/// on the other modes (unnormalised, coefficient c_k times the norm of the
/// projected term) and its squared norm.
pub fn condition(sup: &Superposition, measured: &[usize], x: &[C64]) -> Result<(Superposition, f64)> {
    let out = project(sup, measured, x)?;
    let w = out.norm_sqr()?;
    Ok((out, w))
}

/// <x|_B psi term by term, without the quadratic-cost norm.
pub fn project(sup: &Superposition, measured: &[usize], x: &[C64]) -> Result<Superposition> {
    let terms = sup
        .terms()
        .par_iter()
        .map(|t| {
            let (ln, g) = condition_heterodyne(&t.term, measured, x)?;
            Ok(WeightedGaussian { coeff: t.coeff * ln.exp(), term: g, prep: None })
        })
        .collect::<Result<Vec<_>>>()?;
    Superposition::new(terms)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Method {
    Exact,
    Sparsified,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BornEstimate {
    /// Density with respect to d^2 alpha on the measured modes.
    pub value: f64,
    /// The same density with respect to the quadrature outcome.
    pub quadrature_density: f64,
    pub method: Method,
    pub numerator: f64,
    pub norm_sqr: f64,
    /// Interval that holds the true value with the stated confidence
    /// (a point for the exact method).
    pub band: (f64, f64),
    pub confidence: f64,
    pub counters: Counters,
}

fn check_outcome(sup: &Superposition, measured: &[usize], x: &[C64]) -> Result<()> {
    if measured.is_empty() || measured.len() != x.len() {
        return Err(Error::Dimension("one outcome per measured mode".into()));
    }
    for (i, &m) in measured.iter().enumerate() {
        if m >= sup.modes() || measured[..i].contains(&m) {
            return Err(Error::Invalid(format!("bad measured mode {m}")));
        }
    }
    Ok(())
}

fn clamp(v: f64, counters: &mut Counters) -> Result<f64> {
    if v < NEG_CLAMP {
        return Err(Error::Numerical(format!("negative probability {v:.3e}")));
    }
    if v < 0.0 {
        counters.clamped += 1;
        return Ok(0.0);
    }
    Ok(v)
}

/// Exact heterodyne density through the Gram matrix.
pub fn exact_born(sup: &Superposition, measured: &[usize], x: &[C64]) -> Result<BornEstimate> {
    check_outcome(sup, measured, x)?;
    let mut counters = Counters::default();
    let k = measured.len();
    let numerator = if k == sup.modes() {
        // reorder the outcome into mode order
        let mut full = vec![c(0.0, 0.0); k];
        for (&m, &v) in measured.iter().zip(x) {
            full[m] = v;
        }
        counters.amplitude_evals += sup.rank() as u64;
        sup.coherent_amplitude(&full).norm_sqr()
    } else {
        let (_, w) = condition(sup, measured, x)?;
        counters.amplitude_evals += (sup.rank() + sup.rank() * sup.rank()) as u64;
        w
    };
    let norm_sqr = sup.norm_sqr()?;
    counters.amplitude_evals += gram_evals(sup.rank());
    let value = clamp(numerator / (PI.powi(k as i32) * norm_sqr), &mut counters)?;
    Ok(BornEstimate {
        value,
        quadrature_density: value / 2f64.powi(k as i32),
        method: Method::Exact,
        numerator,
        norm_sqr,
        band: (value, value),
        confidence: 1.0,
        counters,
    })
}

// ---------------------------------------------------------------- sparsification

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparsifyPlan {
    pub delta: f64,
    pub k: usize,
    pub seed: u64,
}

impl SparsifyPlan {
    /// k = ceil((l1 / delta)^2).
    pub fn new(sup: &Superposition, delta: f64, seed: u64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::Invalid("delta must be positive".into()));
        }
        let k = ((sup.l1() / delta).powi(2)).ceil().max(1.0) as usize;
        Ok(Self { delta, k, seed })
    }
}

#[derive(Clone, Debug)]
pub struct Sparsified {
    /// The random state Omega. Repeated draws of the same term are merged, so
    /// a term drawn m times carries coefficient m l1 / k.
    pub omega: Superposition,
    /// Index of the source term of each entry of `omega`.
    pub source: Vec<usize>,
    pub multiplicity: Vec<usize>,
    pub k: usize,
}

impl Sparsified {
    /// ||Omega||^2 and <psi|Omega> from the Gram matrix of the source state.
    pub fn exact_norms(&self, sup: &Superposition, gram: &CMat) -> Result<(f64, C64)> {
        let r = sup.rank();
        let mut w = CVec::zeros(r);
        for (e, &i) in self.source.iter().enumerate() {
            w[i] += self.omega.terms()[e].coeff * C64::from_polar(1.0, sup.terms()[i].coeff.arg());
        }
        let norm = quadratic_norm(gram, &w)?;
        let cross = (sup.coeffs().adjoint() * gram * &w)[(0, 0)];
        Ok((norm, cross))
    }
}

/// Draws k terms with probability |c_i| / l1 and folds the phase of c_i into
/// the term.
pub fn sparsify(sup: &Superposition, plan: &SparsifyPlan) -> Result<Sparsified> {
    let weights: Vec<f64> = sup.terms().iter().map(|t| t.coeff.norm()).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| Error::Invalid(format!("bad coefficients: {e}")))?;
    let mut rng = ChaCha20Rng::seed_from_u64(plan.seed);
    let mut counts = vec![0usize; sup.rank()];
    for _ in 0..plan.k {
        counts[dist.sample(&mut rng)] += 1;
    }
    let unit = sup.l1() / plan.k as f64;
    let mut terms = Vec::new();
    let mut source = Vec::new();
    let mut multiplicity = Vec::new();
    for (i, &m) in counts.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let t = &sup.terms()[i];
        let phase = t.coeff.arg();
        let prep = t.prep.as_ref().map(|p| {
            let mut p = p.clone();
            p.push(Gate::GlobalPhase { theta: phase });
            p
        });
        terms.push(WeightedGaussian { coeff: c(unit * m as f64, 0.0), term: t.term.with_phase(phase), prep });
        source.push(i);
        multiplicity.push(m);
    }
    Ok(Sparsified { omega: Superposition::new(terms)?, source, multiplicity, k: plan.k })
}

// ---------------------------------------------------------------- fast norm

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormParams {
    pub epsilon: f64,
    pub p_fail: f64,
    /// Ensemble width N; defaults to max(20, 10 N_photon).
    pub ensemble_n: Option<f64>,
    /// Bound on <n> + modes; computed exactly (quadratic cost) if absent.
    pub photon_bound: Option<f64>,
    pub seed: u64,
}

impl NormParams {
    pub fn new(epsilon: f64, p_fail: f64, seed: u64) -> Self {
        Self { epsilon, p_fail, ensemble_n: None, photon_bound: None, seed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormEstimate {
    pub eta: f64,
    pub samples: usize,
    pub ensemble_n: f64,
    pub epsilon: f64,
    pub p_fail: f64,
    /// N_photon / N: relative bias bound of the estimator mean.
    pub delta_bias: f64,
    pub photon_bound: f64,
    pub seed: u64,
    pub counters: Counters,
}

impl NormEstimate {
    /// Interval for ||Omega||^2 implied by eta in (1 +- (eps + delta_bias)) ||Omega||^2.
    pub fn band(&self) -> (f64, f64) {
        let r = self.epsilon + self.delta_bias;
        let hi = if r < 1.0 { self.eta / (1.0 - r) } else { f64::INFINITY };
        (self.eta / (1.0 + r), hi)
    }
}

/// L = ceil((2^{-n} N^n + delta pi^n) / pi^n / (eps^2 p_f)).
pub fn sample_count(modes: usize, ensemble_n: f64, delta_bias: f64, epsilon: f64, p_fail: f64) -> usize {
    let pn = PI.powi(modes as i32);
    let var = (ensemble_n / 2.0).powi(modes as i32) + delta_bias * pn;
    (var / pn / (epsilon * epsilon * p_fail)).ceil() as usize
}

fn sample_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Monte-Carlo estimate of ||Omega||^2 from coherent states drawn with density
/// e^{-|xi|^2/N} / (pi N)^n; X = N^n |<xi|Omega>|^2 has mean within the bias
/// bound of ||Omega||^2. Cost is one amplitude per term per sample.
pub fn fast_norm(sup: &Superposition, p: &NormParams) -> Result<NormEstimate> {
    if !(p.epsilon > 0.0 && p.epsilon < 1.0 && p.p_fail > 0.0 && p.p_fail < 1.0) {
        return Err(Error::Invalid("epsilon and p_fail must lie in (0, 1)".into()));
    }
    let n = sup.modes();
    let photon_bound = match p.photon_bound {
        Some(b) => b,
        None => sup.mean_photons()? + n as f64,
    };
    let ensemble_n = p.ensemble_n.unwrap_or((10.0 * photon_bound).max(20.0));
    if !(ensemble_n > 0.0) {
        return Err(Error::Invalid("ensemble width must be positive".into()));
    }
    let delta_bias = photon_bound / ensemble_n;
    let samples = sample_count(n, ensemble_n, delta_bias, p.epsilon, p.p_fail);
    let sd = (ensemble_n / 2.0).sqrt();
    let scale = ensemble_n.powi(n as i32);
    let xs: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(p.seed, i as u64);
            let xi: Vec<C64> = (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    c(re * sd, im * sd)
                })
                .collect();
            scale * sup.coherent_amplitude(&xi).norm_sqr()
        })
        .collect();
    let eta = xs.iter().sum::<f64>() / samples as f64;
    let counters = Counters { amplitude_evals: (samples * sup.rank()) as u64, samples: samples as u64, clamped: 0 };
    Ok(NormEstimate {
        eta,
        samples,
        ensemble_n,
        epsilon: p.epsilon,
        p_fail: p.p_fail,
        delta_bias,
        photon_bound,
        seed: p.seed,
        counters,
    })
}

// ---------------------------------------------------------------- approximate Born

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxParams {
    pub delta: f64,
    pub norm: NormParams,
}

/// Sparsify, estimate the norm, then evaluate the numerator on the sparse
/// state. The band combines the sparsification error ||psi - Omega|| <=
/// delta / sqrt(p_f) (Markov) with the norm-estimate band; the value lies in
/// it with probability at least 1 - 2 p_f for a normalised input.
pub fn approx_born(sup: &Superposition, measured: &[usize], x: &[C64], p: &ApproxParams) -> Result<BornEstimate> {
    check_outcome(sup, measured, x)?;
    let k = measured.len();
    let plan = SparsifyPlan::new(sup, p.delta, p.norm.seed)?;
    let sp = sparsify(sup, &plan)?;
    let omega = &sp.omega;
    let mut counters = Counters::default();
    let mut np = p.norm.clone();
    np.seed = p.norm.seed.wrapping_add(1);
    let est = fast_norm(omega, &np)?;
    counters.add(&est.counters);
    let (num, num_band) = if k == sup.modes() {
        let mut full = vec![c(0.0, 0.0); k];
        for (&m, &v) in measured.iter().zip(x) {
            full[m] = v;
        }
        counters.amplitude_evals += omega.rank() as u64;
        let a = omega.coherent_amplitude(&full).norm_sqr();
        (a, (a, a))
    } else {
        let cond = project(omega, measured, x)?;
        counters.amplitude_evals += omega.rank() as u64;
        let mut np2 = p.norm.clone();
        np2.seed = p.norm.seed.wrapping_add(2);
        let e2 = fast_norm(&cond, &np2)?;
        counters.add(&e2.counters);
        (e2.eta, e2.band())
    };
    let pk = PI.powi(k as i32);
    let value = clamp(num / (pk * est.eta), &mut counters)?;
    let d = p.delta / p.norm.p_fail.sqrt();
    let (nlo, nhi) = est.band();
    let (alo, ahi) = (num_band.0.max(0.0).sqrt(), num_band.1.sqrt());
    let lo_norm = (nlo.sqrt() - d).max(0.0).powi(2);
    let hi_norm = (nhi.sqrt() + d).powi(2);
    let lo = (alo - d).max(0.0).powi(2) / (pk * hi_norm);
    let hi = if lo_norm > 0.0 { (ahi + d).powi(2) / (pk * lo_norm) } else { f64::INFINITY };
    Ok(BornEstimate {
        value,
        quadrature_density: value / 2f64.powi(k as i32),
        method: Method::Sparsified,
        numerator: num,
        norm_sqr: est.eta,
        band: (lo, hi),
        confidence: (1.0 - 2.0 * p.norm.p_fail - if k == sup.modes() { 0.0 } else { p.norm.p_fail }).max(0.0),
        counters,
    })
}

// ---------------------------------------------------------------- tail check

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailReport {
    pub k: usize,
    pub trials: usize,
    pub failures: usize,
    pub frequency: f64,
    pub bound: f64,
    pub slack: f64,
    pub fidelity: f64,
    pub pass: bool,
}

/// Frequency of ||psi - Omega||^2 > <Omega|Omega> - 1 + delta^2 against
/// 2 exp(-delta^2 / (8 F)). `fidelity` defaults to max_i |<psi|G_i>|^2.
pub fn hoeffding_tail_check(
    sup: &Superposition,
    delta: f64,
    trials: usize,
    fidelity: Option<f64>,
    seed: u64,
) -> Result<TailReport> {
    let (psi, _) = sup.normalized()?;
    let gram = psi.gram()?;
    let cs = psi.coeffs();
    let f = match fidelity {
        Some(f) => f,
        None => {
            let row = gram.adjoint() * &cs;
            row.iter().map(|x| x.norm_sqr()).fold(0.0, f64::max)
        }
    };
    let plan = SparsifyPlan::new(&psi, delta, seed)?;
    let mut failures = 0;
    for t in 0..trials {
        let sp = sparsify(&psi, &SparsifyPlan { seed: seed.wrapping_add(t as u64), ..plan.clone() })?;
        let (nn, cross) = sp.exact_norms(&psi, &gram)?;
        let dist = 1.0 + nn - 2.0 * cross.re;
        if dist > nn - 1.0 + delta * delta {
            failures += 1;
        }
    }
    let bound = (2.0 * (-delta * delta / (8.0 * f)).exp()).min(1.0);
    let frequency = failures as f64 / trials.max(1) as f64;
    let slack = 3.0 * (bound * (1.0 - bound) / trials.max(1) as f64).sqrt() + 1.0 / trials.max(1) as f64;
    Ok(TailReport { k: plan.k, trials, failures, frequency, bound, slack, fidelity: f, pass: frequency <= bound + slack })
}

/// C = l1 sum_i |c_i| |<psi|G_i>|^2 and the critical precision 8 (C - 1) / l1^2
/// of the renormalised-ensemble sampling variant (not implemented).
pub fn critical_precision(sup: &Superposition) -> Result<(f64, f64)> {
    let (psi, _) = sup.normalized()?;
    let gram = psi.gram()?;
    let cs = psi.coeffs();
    let row = gram.adjoint() * &cs;
    let l1 = psi.l1();
    let cc = l1 * cs.iter().zip(row.iter()).map(|(c, o)| c.norm() * o.norm_sqr()).sum::<f64>();
    Ok((cc, 8.0 * (cc - 1.0) / (l1 * l1)))
}

/// Picks member j of a mixed-state ensemble with probability p_j.
pub fn sample_ensemble_member<'a>(ensemble: &'a [(f64, Superposition)], seed: u64) -> Result<&'a Superposition> {
    let total: f64 = ensemble.iter().map(|(p, _)| p).sum();
    if ensemble.is_empty() || (total - 1.0).abs() > 1e-12 || ensemble.iter().any(|(p, _)| !(*p >= 0.0)) {
        return Err(Error::Invalid("ensemble probabilities must be non-negative and sum to 1".into()));
    }
    let dist = WeightedIndex::new(ensemble.iter().map(|(p, _)| *p))
        .map_err(|e| Error::Invalid(format!("bad ensemble: {e}")))?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    Ok(&ensemble[dist.sample(&mut rng)].1)
}
