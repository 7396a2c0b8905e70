//! Phase-sensitive overlaps of pure Gaussian states.
//!
//! A [`GaussianPure`] carries its covariance and mean together with the
//! vacuum amplitude o = <0|G>, stored as a complex logarithm so far-displaced
//! states do not underflow. Three routes to overlaps live here: the
//! triple-product formula (`triple`), the Euler-decomposition vacuum amplitude
//! (`refstate`) and the holomorphic stellar calculus (`stellar`), which is the
//! one used along circuits.

pub mod kernel;
pub mod ops;
pub mod refstate;
pub mod stellar;
pub mod triple;

use crate::error::{Error, Result};
use crate::gates::{GaussOp, Gate};
use crate::gaussian::{self, GaussianMixed, TAU_PURE};
use crate::linalg::*;

pub use kernel::GaussForm;
pub use ops::{condition_heterodyne, log_form_overlap, number_moments};
pub use refstate::ref_overlap_bloch_messiah;
pub use stellar::{
    apply_unitary, log_stellar_overlap, propagate, stellar_compose, stellar_from_covariance, stellar_overlap,
    stellar_sandwich, stellar_unitary, StellarParams, UnitaryStellar,
};
pub use triple::{log_triple_overlap, overlap, overlap_in_gauge, reanchor, triple_overlap};

/// Reference overlaps below this modulus make the triple-product route refuse.
pub const EPS_REF: f64 = 1e-12;
/// Tolerance on |o| against the fidelity closed form, in log units.
pub const TAU_PHASE: f64 = 1e-8;

/// Pure Gaussian state: covariance, mean and log <0|G>. The stellar data
/// (A, b) with <0|e^{z a}|G> = o exp(z^T A z / 2 + b^T z) is cached.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianPure {
    cov: RMat,
    mean: RVec,
    log_o: C64,
    a: CMat,
    b: CVec,
}

impl GaussianPure {
    /// Builds a state from covariance, mean and the log of its vacuum
    /// amplitude. The modulus of `log_o` is checked against the closed form.
    pub fn from_parts(cov: RMat, mean: RVec, log_o: C64) -> Result<Self> {
        let g = Self::from_parts_unchecked(cov, mean, log_o)?;
        let expect = g.log_abs_vacuum_amplitude();
        if (g.log_o.re - expect).abs() > TAU_PHASE.max(1e-12 * expect.abs()) {
            return Err(Error::Invalid(format!(
                "reference overlap modulus inconsistent with covariance (log {} vs {})",
                g.log_o.re, expect
            )));
        }
        Ok(g)
    }

    pub(crate) fn from_parts_unchecked(cov: RMat, mean: RVec, log_o: C64) -> Result<Self> {
        let st = GaussianMixed::new(cov, mean)?;
        let defect = gaussian::purity_defect(&st.cov);
        if defect > TAU_PURE * (1.0 + max_abs(&st.cov).powi(2)) {
            return Err(Error::Invalid(format!("covariance is not pure (defect {defect:.3e})")));
        }
        let (a, b) = stellar::pure_stellar(&st.cov, &st.mean)?;
        Ok(Self { cov: st.cov, mean: st.mean, log_o, a, b })
    }

    pub fn vacuum(n: usize) -> Self {
        Self {
            cov: RMat::identity(2 * n, 2 * n),
            mean: RVec::zeros(2 * n),
            log_o: c(0.0, 0.0),
            a: CMat::zeros(n, n),
            b: CVec::zeros(n),
        }
    }

    pub fn coherent(alpha: &[C64]) -> Self {
        let n = alpha.len();
        let norm: f64 = alpha.iter().map(|a| a.norm_sqr()).sum();
        Self {
            cov: RMat::identity(2 * n, 2 * n),
            mean: quad_from_alpha(alpha),
            log_o: c(-0.5 * norm, 0.0),
            a: CMat::zeros(n, n),
            b: CVec::from_column_slice(alpha),
        }
    }

    /// The state produced by applying `gates` in order to the vacuum.
    pub fn from_gates(n: usize, gates: &[Gate]) -> Result<Self> {
        let mut g = Self::vacuum(n);
        for gate in gates {
            gate.validate(n)?;
            g = propagate(&g, &gate.op(n))?;
        }
        Ok(g)
    }

    /// e^{i phase} D(d) U_S |0>, with the vacuum amplitude taken from the
    /// Euler decomposition of S.
    pub fn from_op(op: &GaussOp) -> Result<Self> {
        let log_o = refstate::log_ref_overlap_bloch_messiah(op)?;
        let cov = symmetrize_real(&(&op.s * op.s.transpose()));
        Self::from_parts_unchecked(cov, op.d.clone(), log_o)
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }
    pub fn cov(&self) -> &RMat {
        &self.cov
    }
    pub fn mean(&self) -> &RVec {
        &self.mean
    }
    pub fn stellar_a(&self) -> &CMat {
        &self.a
    }
    pub fn stellar_b(&self) -> &CVec {
        &self.b
    }
    pub fn log_ref_overlap(&self) -> C64 {
        self.log_o
    }
    /// o = <0|G>.
    pub fn ref_overlap(&self) -> C64 {
        self.log_o.exp()
    }

    pub fn to_mixed(&self) -> GaussianMixed {
        GaussianMixed { cov: self.cov.clone(), mean: self.mean.clone() }
    }

    /// The same state times e^{i theta}.
    pub fn with_phase(&self, theta: f64) -> Self {
        let mut g = self.clone();
        g.log_o += c(0.0, theta);
        g
    }

    /// log |<0|G>| from the fidelity formula.
    pub fn log_abs_vacuum_amplitude(&self) -> f64 {
        let n = self.modes();
        let s = &self.cov + RMat::identity(2 * n, 2 * n);
        let inv = spd_inverse(&s, "sigma + 1").expect("pure covariance plus identity is positive");
        let ld = spd_logdet(&s, "sigma + 1").expect("positive");
        0.5 * (n as f64 * 2f64.ln() - (self.mean.transpose() * inv * &self.mean)[(0, 0)] - 0.5 * ld)
    }

    /// The stellar form of the state as a function of z.
    pub fn form(&self) -> GaussForm {
        GaussForm::new(self.a.clone(), self.b.clone(), self.log_o)
    }

    /// log <alpha|G> for a coherent state |alpha>.
    pub fn log_coherent_amplitude(&self, alpha: &[C64]) -> C64 {
        let n = self.modes();
        let mut q = c(0.0, 0.0);
        let mut l = c(0.0, 0.0);
        let mut norm = 0.0;
        for i in 0..n {
            let zi = alpha[i].conj();
            norm += alpha[i].norm_sqr();
            l += self.b[i] * zi;
            for j in 0..n {
                q += zi * self.a[(i, j)] * alpha[j].conj();
            }
        }
        self.log_o + q * 0.5 + l - 0.5 * norm
    }

    pub fn coherent_amplitude(&self, alpha: &[C64]) -> C64 {
        self.log_coherent_amplitude(alpha).exp()
    }

    /// <n_1 ... n_k|G> from the Hermite recursion of the stellar function.
    pub fn fock_amplitude(&self, occ: &[usize]) -> C64 {
        let n = self.modes();
        assert_eq!(occ.len(), n, "occupation vector length");
        let dims: Vec<usize> = occ.iter().map(|&k| k + 1).collect();
        let total: usize = dims.iter().product();
        let idx = |p: &[usize]| p.iter().zip(&dims).fold(0, |acc, (&pi, &d)| acc * d + pi);
        let mut f = vec![c(0.0, 0.0); total];
        f[0] = self.ref_overlap();
        let mut p = vec![0usize; n];
        for flat in 1..total {
            let mut rem = flat;
            for k in (0..n).rev() {
                p[k] = rem % dims[k];
                rem /= dims[k];
            }
            let i = p.iter().position(|&x| x > 0).unwrap();
            let mut prev = p.clone();
            prev[i] -= 1;
            let mut val = self.b[i] * f[idx(&prev)];
            for j in 0..n {
                if prev[j] > 0 {
                    let mut pp = prev.clone();
                    pp[j] -= 1;
                    val += self.a[(i, j)] * (prev[j] as f64).sqrt() * f[idx(&pp)];
                }
            }
            f[flat] = val / (p[i] as f64).sqrt();
        }
        f[total - 1]
    }

    pub fn tensor(&self, other: &GaussianPure) -> GaussianPure {
        GaussianPure {
            cov: direct_sum(&self.cov, &other.cov),
            mean: concat(&self.mean, &other.mean),
            log_o: self.log_o + other.log_o,
            a: direct_sum(&self.a, &other.a),
            b: concat(&self.b, &other.b),
        }
    }

    /// Mean photon number <n> summed over modes.
    pub fn mean_photons(&self) -> f64 {
        0.25 * self.cov.trace() + 0.5 * self.mean.norm_squared() - 0.5 * self.modes() as f64
    }
}

/// Fidelity |<phi|rho|phi>| with a pure state through the covariance formula.
pub fn fidelity_pure(rho: &GaussianMixed, phi: &GaussianPure) -> Result<f64> {
    gaussian::fidelity_pure(rho, phi.cov(), phi.mean())
}
