//! Triple-product route to phase-sensitive overlaps.
//!
//! T(G0, G1, G2) = <G0|G1><G1|G2><G2|G0> is a trace of three Gaussian density
//! operators, so it only needs covariances and means:
//!
//! T = 4^n / sqrt(det(s1 + s2) det(s0 + D)) exp(-m^T (s1 + s2)^{-1} m - v^T (s0 + D)^{-1} v)
//!
//! with K = s2 - i Omega, D = s2 - K^T (s1 + s2)^{-1} K, m = mu1 - mu2 and
//! v = mu0 - mu2 - K^T (s1 + s2)^{-1} m. The complex square root is taken
//! eigenvalue by eigenvalue on the principal branch. Dividing by the two
//! reference overlaps then yields <G1|G2> with its phase.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{log_stellar_overlap as log_overlap_exact, GaussianPure, EPS_REF};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::linalg::*;

/// Sign in front of i Omega in K; fixed by the coherent-state triple.
const OMEGA_SIGN: f64 = -1.0;
/// Seed of the fallback reference used when a reference overlap is tiny.
const REANCHOR_SEED: u64 = 0x5eed_0f_a7c4;

pub fn log_triple_overlap(g0: &GaussianPure, g1: &GaussianPure, g2: &GaussianPure) -> Result<C64> {
    let n = g0.modes();
    if g1.modes() != n || g2.modes() != n {
        return Err(Error::Dimension("triple product needs equal mode counts".into()));
    }
    let a = g1.cov() + g2.cov();
    let ainv = spd_inverse(&a, "sigma1 + sigma2")?;
    let ld_a = spd_logdet(&a, "sigma1 + sigma2")?;
    let k = to_complex(g2.cov()) + to_complex(&omega(n)) * c(0.0, OMEGA_SIGN);
    let ainv_c = to_complex(&ainv);
    let kt_ainv = k.transpose() * &ainv_c;
    let delta = to_complex(g2.cov()) - &kt_ainv * &k;
    let m = g1.mean() - g2.mean();
    let m_c = to_complex_vec(&m);
    let mu_delta = to_complex_vec(g2.mean()) + &kt_ainv * &m_c;
    let v = to_complex_vec(g0.mean()) - mu_delta;
    let s0d = to_complex(g0.cov()) + delta;
    let s0d_inv = complex_inverse(&s0d, "sigma0 + Delta")?;
    let half_ld = half_logdet_principal(&s0d)?;
    let quad_m = (m.transpose() * &ainv * &m)[(0, 0)];
    let quad_v = (v.transpose() * &s0d_inv * &v)[(0, 0)];
    Ok(c(n as f64 * 4f64.ln() - 0.5 * ld_a - quad_m, 0.0) - half_ld - quad_v)
}

pub fn triple_overlap(g0: &GaussianPure, g1: &GaussianPure, g2: &GaussianPure) -> Result<C64> {
    log_triple_overlap(g0, g1, g2).map(|l| l.exp())
}

/// Log reference overlaps <R|G_i> of `states` against a new reference state.
pub fn reanchor(states: &[GaussianPure], reference: &GaussianPure) -> Result<Vec<C64>> {
    states.iter().map(|g| log_overlap_exact(reference, g)).collect()
}

/// <G1|G2> from the triple product against `reference`, given the log
/// overlaps of both states with that reference.
pub fn overlap_in_gauge(
    reference: &GaussianPure,
    g1: &GaussianPure,
    log_ref1: C64,
    g2: &GaussianPure,
    log_ref2: C64,
) -> Result<C64> {
    let eps = EPS_REF.ln();
    for l in [log_ref1, log_ref2] {
        if l.re < eps {
            return Err(Error::ReferenceDegenerate(l.re.exp()));
        }
    }
    let lt = log_triple_overlap(reference, g1, g2)?;
    Ok((lt - log_ref1 - log_ref2.conj()).exp())
}

fn fallback_reference(g1: &GaussianPure, g2: &GaussianPure) -> Result<GaussianPure> {
    let n = g1.modes();
    let mut rng = ChaCha20Rng::seed_from_u64(REANCHOR_SEED);
    let mid = (g1.mean() + g2.mean()) * 0.5;
    let centre = alpha_from_quad(&mid);
    let mut gates = Vec::new();
    for k in 0..n {
        gates.push(Gate::Squeeze { mode: k, r: rng.random_range(0.0..0.3), phi: rng.random_range(0.0..std::f64::consts::TAU) });
        let jitter = c(rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1));
        gates.push(Gate::Displace { mode: k, alpha: centre[k] + jitter });
    }
    GaussianPure::from_gates(n, &gates)
}

/// <G1|G2> through the triple product with the vacuum reference. When either
/// reference overlap is below the cutoff the pair is re-anchored once to a
/// seeded squeezed-coherent state near both; if that also degenerates the
/// error is returned.
pub fn overlap(g1: &GaussianPure, g2: &GaussianPure) -> Result<C64> {
    let vac = GaussianPure::vacuum(g1.modes());
    match overlap_in_gauge(&vac, g1, g1.log_ref_overlap(), g2, g2.log_ref_overlap()) {
        Err(Error::ReferenceDegenerate(_)) => {
            let r = fallback_reference(g1, g2)?;
            let l = reanchor(&[g1.clone(), g2.clone()], &r)?;
            overlap_in_gauge(&r, g1, l[0], g2, l[1])
        }
        other => other,
    }
}
