//! Superpositions of pure Gaussian states and the library of decompositions.
//!
//! A [`Superposition`] is sum_k c_k |G_k> with every |G_k> normalised and the
//! relative phases carried by the vacuum amplitudes of the terms. Terms built
//! from gate lists remember them so the Fock oracle can rebuild the state
//! independently.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{self, FockVector};
use crate::gates::Gate;
use crate::phase::{log_stellar_overlap, number_moments, GaussianPure};
use crate::linalg::*;

/// Relative l1 mass allowed in the dropped tail of GKP and grid envelopes.
pub const TAIL_TOL: f64 = 1e-8;
/// Tolerance on equal witness values.
pub const TAU_WIT: f64 = 1e-9;
/// Ring size for the Fock-1 decomposition.
pub const DEFAULT_RING: usize = 16;

#[derive(Clone, Debug)]
pub struct WeightedGaussian {
    pub coeff: C64,
    pub term: GaussianPure,
    /// Gates that prepare `term` from the vacuum, when known.
    pub prep: Option<Vec<Gate>>,
}

impl WeightedGaussian {
    pub fn from_gates(coeff: C64, n: usize, gates: Vec<Gate>) -> Result<Self> {
        let term = GaussianPure::from_gates(n, &gates)?;
        Ok(Self { coeff, term, prep: Some(gates) })
    }
}

#[derive(Clone, Debug)]
pub struct Superposition {
    terms: Vec<WeightedGaussian>,
    modes: usize,
    l1: f64,
}

impl Superposition {
    pub fn new(terms: Vec<WeightedGaussian>) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Invalid("superposition needs at least one term".into()))?;
        let modes = first.term.modes();
        for t in &terms {
            if t.term.modes() != modes {
                return Err(Error::Dimension("all terms must act on the same modes".into()));
            }
            if !t.coeff.re.is_finite() || !t.coeff.im.is_finite() {
                return Err(Error::Invalid("non-finite coefficient".into()));
            }
        }
        let l1 = terms.iter().map(|t| t.coeff.norm()).sum();
        Ok(Self { terms, modes, l1 })
    }

    pub fn single(g: GaussianPure) -> Self {
        Self::new(vec![WeightedGaussian { coeff: c(1.0, 0.0), term: g, prep: None }]).expect("one term")
    }

    pub fn vacuum(n: usize) -> Self {
        Self::from_gates(n, vec![(c(1.0, 0.0), vec![])]).expect("vacuum")
    }

    /// Terms given as (coefficient, preparation gates).
    pub fn from_gates(n: usize, terms: Vec<(C64, Vec<Gate>)>) -> Result<Self> {
        Self::new(terms.into_iter().map(|(w, g)| WeightedGaussian::from_gates(w, n, g)).collect::<Result<_>>()?)
    }

    pub fn terms(&self) -> &[WeightedGaussian] {
        &self.terms
    }
    pub fn modes(&self) -> usize {
        self.modes
    }
    /// Number of terms.
    pub fn rank(&self) -> usize {
        self.terms.len()
    }
    /// Sum of |c_k|.
    pub fn l1(&self) -> f64 {
        self.l1
    }
    pub fn coeffs(&self) -> CVec {
        CVec::from_iterator(self.rank(), self.terms.iter().map(|t| t.coeff))
    }

    /// The same vector times `w`.
    pub fn scaled(&self, w: C64) -> Self {
        let terms = self.terms.iter().map(|t| WeightedGaussian { coeff: t.coeff * w, ..t.clone() }).collect();
        Self::new(terms).expect("scaling keeps validity")
    }

    /// Gram matrix <G_i|G_j>, rows computed in parallel.
    pub fn gram(&self) -> Result<CMat> {
        let n = self.rank();
        let rows: Vec<Vec<C64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Ok(c(1.0, 0.0))
                        } else {
                            log_stellar_overlap(&self.terms[i].term, &self.terms[j].term).map(|l| l.exp())
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(CMat::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// <psi|psi> = c^dag Gram c.
    pub fn norm_sqr(&self) -> Result<f64> {
        let g = self.gram()?;
        quadratic_norm(&g, &self.coeffs())
    }

    /// Unit-norm copy and the norm that was divided out.
    pub fn normalized(&self) -> Result<(Self, f64)> {
        let nrm = self.norm_sqr()?.sqrt();
        Ok((self.scaled(c(1.0 / nrm, 0.0)), nrm))
    }

    /// <alpha|psi> for a coherent state, from one amplitude per term.
    pub fn coherent_amplitude(&self, alpha: &[C64]) -> C64 {
        self.terms.iter().map(|t| t.coeff * t.term.log_coherent_amplitude(alpha).exp()).sum()
    }

    pub fn fock_amplitude(&self, occ: &[usize]) -> C64 {
        self.terms.iter().map(|t| t.coeff * t.term.fock_amplitude(occ)).sum()
    }

    /// <psi|G> for a normalised Gaussian state.
    pub fn overlap_with(&self, g: &GaussianPure) -> Result<C64> {
        self.terms
            .iter()
            .map(|t| log_stellar_overlap(&t.term, g).map(|l| t.coeff.conj() * l.exp()))
            .sum()
    }

    /// <psi|n|psi> / <psi|psi>, total photon number over all modes.
    pub fn mean_photons(&self) -> Result<f64> {
        let k = self.rank();
        let cs = self.coeffs();
        let pairs: Vec<C64> = (0..k)
            .into_par_iter()
            .map(|i| {
                let mut acc = c(0.0, 0.0);
                for j in 0..k {
                    let m: C64 = number_moments(&self.terms[i].term, &self.terms[j].term)?.iter().sum();
                    acc += cs[i].conj() * cs[j] * m;
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        let num: C64 = pairs.iter().sum();
        Ok(num.re / self.norm_sqr()?)
    }

    pub fn tensor(&self, other: &Superposition) -> Superposition {
        let n1 = self.modes;
        let mut terms = Vec::with_capacity(self.rank() * other.rank());
        for a in &self.terms {
            for b in &other.terms {
                let prep = match (&a.prep, &b.prep) {
                    (Some(x), Some(y)) => {
                        let mut g = x.clone();
                        g.extend(y.iter().map(|gate| shift_gate(gate, n1)));
                        Some(g)
                    }
                    _ => None,
                };
                terms.push(WeightedGaussian { coeff: a.coeff * b.coeff, term: a.term.tensor(&b.term), prep });
            }
        }
        Superposition::new(terms).expect("tensor of valid superpositions")
    }

    /// Cutoffs for the oracle, large enough for every term prepared by its
    /// gates followed by `extra`.
    pub fn oracle_cutoffs(&self, extra: &[Gate]) -> Result<Vec<usize>> {
        let mut cut = vec![0usize; self.modes];
        for t in &self.terms {
            let prep = t.prep.as_ref().ok_or_else(|| Error::Invalid("term has no preparation gates".into()))?;
            let mut all = prep.clone();
            all.extend_from_slice(extra);
            for (c, k) in cut.iter_mut().zip(fock::auto_cutoffs(self.modes, &all, 1e-18)) {
                *c = (*c).max(k);
            }
        }
        Ok(cut)
    }

    /// Brute-force Fock vector sum_k c_k |G_k>, each term built from its gates.
    pub fn to_fock(&self, cutoffs: &[usize]) -> Result<FockVector> {
        let mut v = FockVector::zeros(cutoffs);
        for t in &self.terms {
            let prep = t.prep.as_ref().ok_or_else(|| Error::Invalid("term has no preparation gates".into()))?;
            let g = fock::oracle_state(self.modes, prep, cutoffs)?;
            v.axpy(t.coeff, &g)?;
        }
        Ok(v)
    }
}

fn shift_gate(g: &Gate, off: usize) -> Gate {
    match g {
        Gate::Displace { mode, alpha } => Gate::Displace { mode: mode + off, alpha: *alpha },
        Gate::Squeeze { mode, r, phi } => Gate::Squeeze { mode: mode + off, r: *r, phi: *phi },
        Gate::Phase { mode, theta } => Gate::Phase { mode: mode + off, theta: *theta },
        Gate::BeamSplitter { m1, m2, theta, phi } => {
            Gate::BeamSplitter { m1: m1 + off, m2: m2 + off, theta: *theta, phi: *phi }
        }
        Gate::Passive { modes, u } => Gate::Passive { modes: modes.iter().map(|m| m + off).collect(), u: u.clone() },
        Gate::Symplectic { .. } => panic!("register-wide symplectic gates cannot be shifted"),
        Gate::GlobalPhase { theta } => Gate::GlobalPhase { theta: *theta },
    }
}

/// c^dag G c, rejecting Gram matrices that are numerically not PSD on c.
pub fn quadratic_norm(gram: &CMat, cs: &CVec) -> Result<f64> {
    let v = (cs.adjoint() * gram * cs)[(0, 0)];
    let scale: f64 = cs.iter().map(|x| x.norm()).sum::<f64>().powi(2);
    if v.re < -1e-10 * scale.max(1.0) || v.im.abs() > 1e-8 * scale.max(1.0) {
        return Err(Error::Numerical(format!("Gram form is not positive: {v}")));
    }
    Ok(v.re.max(0.0))
}

// ---------------------------------------------------------------- library

/// Seed |alpha = sqrt(2/3), xi = ln sqrt3> of the optimal Fock-1 ring.
pub fn optimal_seed_gates() -> Vec<Gate> {
    vec![
        Gate::Squeeze { mode: 0, r: 3f64.sqrt().ln(), phi: 0.0 },
        Gate::Displace { mode: 0, alpha: c((2.0f64 / 3.0).sqrt(), 0.0) },
    ]
}

/// Seed |alpha = 1> of the coherent Fock-1 ring.
pub fn coherent_seed_gates() -> Vec<Gate> {
    vec![Gate::Displace { mode: 0, alpha: c(1.0, 0.0) }]
}

/// |1> projected out of a single-mode seed by averaging 2N phase rotations:
/// sum_m e^{-i pi m/N} R(pi m/N)|seed> / (2N <1|seed>).
///
/// Fock components 2N+1, 4N+1, ... of the seed survive; they shrink quickly
/// with N for the seeds used here.
pub fn fock1_ring(seed: &[Gate], ring: usize) -> Result<Superposition> {
    if ring < 2 {
        return Err(Error::Invalid("ring size must be at least 2".into()));
    }
    let g = GaussianPure::from_gates(1, seed)?;
    let one = g.fock_amplitude(&[1]);
    if one.norm() < 1e-12 {
        return Err(Error::Invalid("seed has no single-photon component".into()));
    }
    let terms = (0..2 * ring)
        .map(|m| {
            let th = PI * m as f64 / ring as f64;
            let mut gates = seed.to_vec();
            gates.push(Gate::Phase { mode: 0, theta: th });
            (C64::from_polar(1.0, -th) / (one * 2.0 * ring as f64), gates)
        })
        .collect();
    Superposition::from_gates(1, terms)
}

/// Even (`even = true`) or odd cat state, normalised in closed form.
pub fn cat_state(alpha: C64, even: bool) -> Result<Superposition> {
    let sign = if even { 1.0 } else { -1.0 };
    let nrm = 2.0 * (1.0 + sign * (-2.0 * alpha.norm_sqr()).exp());
    if nrm <= 0.0 {
        return Err(Error::Invalid("odd cat with alpha = 0 has zero norm".into()));
    }
    let w = 1.0 / nrm.sqrt();
    Superposition::from_gates(
        1,
        vec![
            (c(w, 0.0), vec![Gate::Displace { mode: 0, alpha }]),
            (c(sign * w, 0.0), vec![Gate::Displace { mode: 0, alpha: -alpha }]),
        ],
    )
}

/// Rotation-symmetric code word mu: sum_m (-1)^{mu m} |e^{i pi m/M} alpha>
/// over 2M points, normalised through the Gram matrix.
pub fn rotational_code(order: usize, mu: usize, alpha: C64) -> Result<Superposition> {
    if order < 1 || mu > 1 {
        return Err(Error::Invalid("need M >= 1 and mu in {0, 1}".into()));
    }
    let terms = (0..2 * order)
        .map(|m| {
            let sign = if mu * m % 2 == 1 { -1.0 } else { 1.0 };
            let a = alpha * C64::from_polar(1.0, PI * m as f64 / order as f64);
            (c(sign, 0.0), vec![Gate::Displace { mode: 0, alpha: a }])
        })
        .collect();
    Ok(Superposition::from_gates(1, terms)?.normalized()?.0)
}

/// Finite-energy GKP code word and the relative l1 mass of the dropped tail.
#[derive(Clone, Debug)]
pub struct Truncated {
    pub state: Superposition,
    pub tail: f64,
}

fn envelope_tail(kept: f64, weight: impl Fn(i64) -> f64, from: i64) -> f64 {
    let mut tail = 0.0;
    let mut s = from;
    loop {
        let w = weight(s) + weight(-s);
        tail += w;
        if w <= 1e-300 || w < 1e-18 * tail {
            break;
        }
        s += 1;
    }
    tail / kept
}

/// sum_s e^{-kappa^2 alpha_d^2 (ds+mu)^2 / 2} D(alpha_d (ds+mu)) S(-ln Delta)|0>
/// for |s| <= s_max, alpha_d = sqrt(2 pi / d), normalised by the Gram matrix.
pub fn gkp_state(d: usize, mu: usize, kappa: f64, delta: f64, s_max: usize, tail_tol: f64) -> Result<Truncated> {
    if d < 2 || mu >= d || !(kappa > 0.0) || !(delta > 0.0) {
        return Err(Error::Invalid("need d >= 2, 0 <= mu < d, kappa > 0, Delta > 0".into()));
    }
    let ad = (2.0 * PI / d as f64).sqrt();
    let x = |s: i64| ad * (d as f64 * s as f64 + mu as f64);
    let weight = |s: i64| (-0.5 * kappa * kappa * x(s) * x(s)).exp();
    let sm = s_max as i64;
    let kept: f64 = (-sm..=sm).map(weight).sum();
    let tail = envelope_tail(kept, weight, sm + 1);
    if tail > tail_tol {
        return Err(Error::Invalid(format!("s_max = {s_max} leaves tail mass {tail:.3e} above {tail_tol:.1e}")));
    }
    let r = -delta.ln();
    let terms = (-sm..=sm)
        .map(|s| {
            (
                c(weight(s), 0.0),
                vec![Gate::Squeeze { mode: 0, r, phi: 0.0 }, Gate::Displace { mode: 0, alpha: c(x(s), 0.0) }],
            )
        })
        .collect();
    let state = Superposition::from_gates(1, terms)?.normalized()?.0;
    Ok(Truncated { state, tail })
}

/// Grid-sensor envelope weights e^{-pi Delta^2 t^2}.
pub fn grid_weight(delta: f64, t: i64) -> f64 {
    (-PI * delta * delta * (t * t) as f64).exp()
}

/// Smallest t_max whose dropped envelope mass is below `tail_tol`.
pub fn grid_t_max(delta: f64, tail_tol: f64) -> i64 {
    let mut t = 0;
    loop {
        let kept: f64 = (-t..=t).map(|s| grid_weight(delta, s)).sum();
        if envelope_tail(kept, |s| grid_weight(delta, s), t + 1) <= tail_tol {
            return t;
        }
        t += 1;
    }
}

/// sum_t e^{-pi Delta^2 t^2} D(t sqrt(pi/2)) S(-ln Delta)|0> for |t| <= t_max,
/// normalised by the Gram matrix. The squeezer leaves q-variance Delta^2.
pub fn grid_sensor(delta: f64, t_max: Option<i64>) -> Result<Truncated> {
    if !(delta > 0.0) {
        return Err(Error::Invalid("Delta must be positive".into()));
    }
    let tm = t_max.unwrap_or_else(|| grid_t_max(delta, TAIL_TOL));
    if tm < 0 {
        return Err(Error::Invalid("t_max must be non-negative".into()));
    }
    let kept: f64 = (-tm..=tm).map(|s| grid_weight(delta, s)).sum();
    let tail = envelope_tail(kept, |s| grid_weight(delta, s), tm + 1);
    let r = -delta.ln();
    let step = (PI / 2.0).sqrt();
    let terms = (-tm..=tm)
        .map(|t| {
            (
                c(grid_weight(delta, t), 0.0),
                vec![Gate::Squeeze { mode: 0, r, phi: 0.0 }, Gate::Displace { mode: 0, alpha: c(t as f64 * step, 0.0) }],
            )
        })
        .collect();
    let state = Superposition::from_gates(1, terms)?.normalized()?.0;
    Ok(Truncated { state, tail })
}

/// (sum |c|)^2 / sum |c|^2 of the raw envelope weights, ignoring overlaps.
pub fn naive_extent(weights: &[f64]) -> f64 {
    let l1: f64 = weights.iter().map(|w| w.abs()).sum();
    let l2: f64 = weights.iter().map(|w| w * w).sum();
    l1 * l1 / l2
}

/// Naive extent of the grid-sensor weights at the automatic t_max.
pub fn grid_naive_extent(delta: f64) -> f64 {
    let tm = grid_t_max(delta, TAIL_TOL);
    let w: Vec<f64> = (-tm..=tm).map(|t| grid_weight(delta, t)).collect();
    naive_extent(&w)
}

// ---------------------------------------------------------------- measures

#[derive(Clone, Debug, PartialEq)]
pub struct ExtentReport {
    pub rank: usize,
    pub l1: f64,
    pub norm: f64,
    /// (sum |c|)^2 after dividing the coefficients by the exact norm.
    pub extent_upper: f64,
}

impl ExtentReport {
    /// 1 + extent / delta^2 terms suffice for a delta-approximation.
    pub fn approx_rank_bound(&self, delta: f64) -> f64 {
        1.0 + self.extent_upper / (delta * delta)
    }
}

pub fn measures(sup: &Superposition) -> Result<ExtentReport> {
    let norm = sup.norm_sqr()?.sqrt();
    if norm <= 0.0 {
        return Err(Error::Numerical("superposition has zero norm".into()));
    }
    let extent_upper = if sup.rank() == 1 { 1.0 } else { (sup.l1() / norm).powi(2) };
    Ok(ExtentReport { rank: sup.rank(), l1: sup.l1(), norm, extent_upper })
}

/// A scaled Fock projector scale * |occ><occ|.
#[derive(Clone, Debug, PartialEq)]
pub struct FockWitness {
    pub occ: Vec<usize>,
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    /// <G_k|W|G_k> per term.
    pub values: Vec<f64>,
    pub spread: f64,
    pub equal: bool,
}

pub fn witness_check(sup: &Superposition, w: &FockWitness) -> WitnessReport {
    let values: Vec<f64> = sup.terms().iter().map(|t| w.scale * t.term.fock_amplitude(&w.occ).norm_sqr()).collect();
    let hi = values.iter().cloned().fold(f64::MIN, f64::max);
    let lo = values.iter().cloned().fold(f64::MAX, f64::min);
    WitnessReport { spread: hi - lo, equal: hi - lo <= TAU_WIT, values }
}

// ---------------------------------------------------------------- applications

/// Number of breeding rounds n = ceil(xi / 2).
pub fn breeding_lower_bound(xi: f64) -> Result<u64> {
    if !(xi >= 1.0) {
        return Err(Error::Invalid("grid extent must be at least 1".into()));
    }
    Ok((xi / 2.0).ceil() as u64)
}

/// 4e / (3 sqrt 3), the extent of the single-photon state.
pub fn fock1_extent() -> f64 {
    4.0 * std::f64::consts::E / (3.0 * 3f64.sqrt())
}

/// (bound, e^M) for M single photons in a boson-sampling input.
pub fn boson_sampling_bound(m: u32) -> (f64, f64) {
    (fock1_extent().powi(m as i32), (m as f64).exp())
}

/// Reference grid-state table: (Delta, extent xi, breeding rounds n).
pub const BREEDING_TABLE: [(f64, f64, u64); 6] =
    [(0.3, 2.797, 2), (0.2, 3.969, 2), (0.1, 7.496, 4), (0.05, 14.562, 8), (0.025, 28.701, 15), (0.01, 71.126, 36)];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::oracle_overlap;
    use std::f64::consts::E;

    #[test]
    fn optimal_seed_single_photon_fidelity() {
        let g = GaussianPure::from_gates(1, &optimal_seed_gates()).unwrap();
        let f = g.fock_amplitude(&[1]).norm_sqr();
        assert!((f - 0.47789).abs() < 1e-4, "{f}");
        assert!((1.0 / f - fock1_extent()).abs() < 1e-9);
    }

    #[test]
    fn coherent_ring_l1() {
        let s = fock1_ring(&coherent_seed_gates(), DEFAULT_RING).unwrap();
        assert!((s.l1() * s.l1() - E).abs() < 1e-9);
        assert_eq!(s.rank(), 32);
    }

    #[test]
    fn ring_approaches_single_photon() {
        let s = fock1_ring(&optimal_seed_gates(), DEFAULT_RING).unwrap();
        let v = s.to_fock(&[60]).unwrap();
        let f = v.amplitude(&[1]).unwrap().norm_sqr() / v.norm_sqr();
        assert!(f > 1.0 - 1e-6, "{f}");
        let m = measures(&s).unwrap();
        assert!((m.extent_upper - fock1_extent()).abs() < 1e-6, "{}", m.extent_upper);
    }

    #[test]
    fn cat_norm_and_extent() {
        let s = cat_state(c(1.0, 0.0), true).unwrap();
        assert!((s.norm_sqr().unwrap() - 1.0).abs() < 1e-13);
        let m = measures(&s).unwrap();
        assert!((m.extent_upper - 2.0 / (1.0 + (-2.0f64).exp())).abs() < 1e-12);
        let vac = cat_state(c(0.0, 0.0), true).unwrap();
        assert!((vac.norm_sqr().unwrap() - 1.0).abs() < 1e-13);
        let big = cat_state(c(6.0, 0.0), true).unwrap();
        assert!((big.l1().powi(2) - 2.0).abs() < 1e-12);
        assert!(cat_state(c(0.0, 0.0), false).is_err());
    }

    #[test]
    fn gram_matches_oracle() {
        let s = cat_state(c(0.8, 0.3), false).unwrap().tensor(&cat_state(c(0.5, 0.0), true).unwrap());
        let v = s.to_fock(&[30, 30]).unwrap();
        assert!((v.norm_sqr() - s.norm_sqr().unwrap()).abs() < 1e-12);
        assert!((v.amplitude(&[1, 2]).unwrap() - s.fock_amplitude(&[1, 2])).norm() < 1e-13);
    }

    #[test]
    fn rotational_code_words() {
        let m1 = rotational_code(1, 0, c(1.0, 0.0)).unwrap();
        let cat = cat_state(c(1.0, 0.0), true).unwrap();
        assert!((m1.fock_amplitude(&[2]) - cat.fock_amplitude(&[2])).norm() < 1e-13);
        let z0 = rotational_code(2, 0, c(2.0, 0.0)).unwrap();
        let z1 = rotational_code(2, 1, c(2.0, 0.0)).unwrap();
        assert_eq!(z0.rank(), 4);
        assert!((z0.norm_sqr().unwrap() - 1.0).abs() < 1e-10);
        let cut = [60];
        let ov = oracle_overlap(&z0.to_fock(&cut).unwrap(), &z1.to_fock(&cut).unwrap()).unwrap();
        assert!(ov.norm() < 1e-6, "{ov}");
    }

    #[test]
    fn gkp_envelope() {
        let t = gkp_state(2, 0, 0.3, 0.3, 5, TAIL_TOL).unwrap();
        assert_eq!(t.state.rank(), 11);
        let cs = t.state.coeffs();
        for s in 0..5 {
            assert!((cs[s] - cs[10 - s]).norm() < 1e-15);
        }
        let ad2 = PI;
        let ratio = cs[6].re / cs[5].re;
        assert!((ratio - (-0.5 * 0.09 * ad2 * 4.0).exp()).abs() < 1e-14);
        let g = gkp_state(2, 0, 0.3, 0.3, 0, f64::INFINITY).unwrap();
        assert_eq!(g.state.rank(), 1);
        assert!(gkp_state(2, 0, 0.3, 0.3, 1, TAIL_TOL).is_err());
    }

    #[test]
    fn grid_symmetric_and_tail() {
        let t = grid_sensor(0.3, None).unwrap();
        assert!(t.tail <= TAIL_TOL);
        let cs = t.state.coeffs();
        let k = cs.len();
        for i in 0..k {
            assert!((cs[i] - cs[k - 1 - i]).norm() < 1e-15);
        }
    }

    #[test]
    fn truncation_tail_bounds_extent_change() {
        let a = gkp_state(2, 0, 0.3, 0.3, 3, 1.0).unwrap();
        let b = gkp_state(2, 0, 0.3, 0.3, 4, 1.0).unwrap();
        let (ea, eb) = (measures(&a.state).unwrap().extent_upper, measures(&b.state).unwrap().extent_upper);
        assert!((ea - eb).abs() <= 4.0 * a.tail * ea + 1e-12, "{ea} {eb} {}", a.tail);
    }

    #[test]
    fn single_gaussian_is_faithful() {
        let g = GaussianPure::from_gates(1, &[Gate::Squeeze { mode: 0, r: 0.4, phi: 0.1 }]).unwrap();
        let m = measures(&Superposition::single(g)).unwrap();
        assert_eq!((m.rank, m.extent_upper), (1, 1.0));
        assert!((m.approx_rank_bound(0.1) - 101.0).abs() < 1e-12);
    }

    #[test]
    fn witness_equal_moduli() {
        let s = fock1_ring(&optimal_seed_gates(), DEFAULT_RING).unwrap();
        let w = FockWitness { occ: vec![1], scale: 1.0 / 0.47789 };
        let r = witness_check(&s, &w);
        assert!(r.equal, "{}", r.spread);
        let coh = fock1_ring(&coherent_seed_gates(), 8).unwrap();
        let r = witness_check(&coh, &FockWitness { occ: vec![1], scale: E });
        assert!(r.equal && (r.values[0] - 1.0).abs() < 1e-12);
        let cat = witness_check(&cat_state(c(1.3, 0.2), true).unwrap(), &FockWitness { occ: vec![3], scale: 1.0 });
        assert!(cat.equal);
    }

    #[test]
    fn breeding_and_boson_bounds() {
        assert_eq!(breeding_lower_bound(7.496).unwrap(), 4);
        assert_eq!(breeding_lower_bound(28.701).unwrap(), 15);
        assert_eq!(breeding_lower_bound(2.0).unwrap(), 1);
        assert!(breeding_lower_bound(0.5).is_err());
        assert_eq!(boson_sampling_bound(0).0, 1.0);
        assert!((boson_sampling_bound(1).0 - 2.09253).abs() < 1e-5);
        let (b, e) = boson_sampling_bound(10);
        assert!((b - 1.61e3).abs() < 10.0 && b < e);
    }

    #[test]
    fn mean_photons_of_cat() {
        let s = cat_state(c(1.0, 0.0), true).unwrap();
        assert!((s.mean_photons().unwrap() - 1f64.tanh()).abs() < 1e-12);
    }
}
