//! Holomorphic (stellar) representation of Gaussian states and unitaries.
//!
//! A pure state is F(z) = <0|e^{z.a}|psi>, a unitary is the two-variable
//! kernel K(w, z) = <0|e^{w.a} U e^{z.a^dag}|0>. Both are Gaussian forms, so
//! composition and overlaps reduce to [`GaussForm::integrate`] and the global
//! phase is carried exactly by the prefactor.

use super::kernel::GaussForm;
use super::{refstate, GaussianPure};
use crate::error::Result;
use crate::gates::GaussOp;
use crate::gaussian::GaussianMixed;
use crate::linalg::*;

/// Kernel of a mixed state: <0|e^{w.a} rho e^{z.a^dag}|0> as a form in (w, z).
#[derive(Clone, Debug)]
pub struct StellarParams {
    pub form: GaussForm,
}

fn cayley(cov: &RMat, mean: &RVec) -> Result<(CMat, CVec, C64)> {
    let n = mean.len() / 2;
    let w = ladder_map(n);
    let half = c(0.5, 0.0);
    let cc = &w * to_complex(cov) * w.adjoint() * half;
    let q = cc + CMat::identity(2 * n, 2 * n) * half;
    let qinv = complex_inverse(&q, "stellar Cayley map")?;
    let m = &w * to_complex_vec(mean);
    let ld = half_logdet_principal(&q)? * 2.0;
    Ok((qinv, m, ld))
}

fn swap_halves(n: usize) -> CMat {
    let mut x = CMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        x[(k, n + k)] = c(1.0, 0.0);
        x[(n + k, k)] = c(1.0, 0.0);
    }
    x
}

/// Stellar kernel of a (possibly mixed) Gaussian state from its moments.
pub fn stellar_from_covariance(rho: &GaussianMixed) -> Result<StellarParams> {
    let n = rho.modes();
    let (qinv, m, ld) = cayley(&rho.cov, &rho.mean)?;
    let x = swap_halves(n);
    let a = symmetrize(&(&x * (CMat::identity(2 * n, 2 * n) - &qinv)));
    let b = &x * &qinv * &m;
    let log_c = -(m.transpose() * &x * &qinv * &m)[(0, 0)] * 0.5 - ld * 0.5;
    Ok(StellarParams { form: GaussForm::new(a, b, log_c) })
}

/// Quadratic and linear stellar coefficients of a pure state.
pub(crate) fn pure_stellar(cov: &RMat, mean: &RVec) -> Result<(CMat, CVec)> {
    let n = mean.len() / 2;
    let (qinv, m, _) = cayley(cov, mean)?;
    let a = -qinv.view((0, n), (n, n)).clone_owned();
    let b = (&qinv * &m).rows(0, n).clone_owned();
    Ok((symmetrize(&a), b))
}

/// A Gaussian unitary with its kernel over (w, z).
#[derive(Clone, Debug)]
pub struct UnitaryStellar {
    pub op: GaussOp,
    pub form: GaussForm,
}

impl UnitaryStellar {
    pub fn modes(&self) -> usize {
        self.op.modes()
    }
}

pub fn stellar_unitary(op: &GaussOp) -> Result<UnitaryStellar> {
    let n = op.modes();
    let (p, q) = bogoliubov(&op.s);
    let pinv = complex_inverse(&p, "Bogoliubov P")?;
    let pbar_inv = pinv.map(|x| x.conj());
    let bb = symmetrize(&(&q * &pbar_inv));
    let cm = pinv.adjoint();
    let dd = symmetrize(&(-(&pinv * &q).adjoint()));
    let det_p = half_logdet_principal(&p)?.re * 2.0;
    let beta = alpha_from_quad(&op.d);
    let beta_bar = beta.map(|x| x.conj());
    let bw = &beta - &bb * &beta_bar;
    let bz = -(cm.transpose() * &beta_bar);
    let norm: f64 = beta.iter().map(|x| x.norm_sqr()).sum();
    let log_c = c(-0.5 * det_p - 0.5 * norm, op.phase) + (beta_bar.transpose() * &bb * &beta_bar)[(0, 0)] * 0.5;
    let mut a = CMat::zeros(2 * n, 2 * n);
    a.view_mut((0, 0), (n, n)).copy_from(&bb);
    a.view_mut((0, n), (n, n)).copy_from(&cm);
    a.view_mut((n, 0), (n, n)).copy_from(&cm.transpose());
    a.view_mut((n, n), (n, n)).copy_from(&dd);
    Ok(UnitaryStellar { op: op.clone(), form: GaussForm::new(a, concat(&bw, &bz), log_c) })
}

/// Kernel of `u1` applied after `u2`.
pub fn stellar_compose(u1: &UnitaryStellar, u2: &UnitaryStellar) -> Result<UnitaryStellar> {
    let n = u1.modes();
    let u: Vec<usize> = (n..2 * n).collect();
    let ubar: Vec<usize> = (2 * n..3 * n).collect();
    let form = u1.form.product(&u2.form).integrate(&u, &ubar)?;
    let s = &u1.op.s * &u2.op.s;
    let d = &u1.op.s * &u2.op.d + &u1.op.d;
    // the global phase is whatever separates the kernel's vacuum element
    // from the positive-amplitude convention
    let bare = GaussOp { s: s.clone(), d: d.clone(), phase: 0.0 };
    let reference = refstate::log_ref_overlap_bloch_messiah(&bare)?;
    let phase = (form.log_c.im - reference.im).rem_euclid(std::f64::consts::TAU);
    Ok(UnitaryStellar { op: GaussOp { s, d, phase }, form })
}

/// <alpha|U|beta> between coherent states.
pub fn stellar_sandwich(u: &UnitaryStellar, alpha: &[C64], beta: &[C64]) -> C64 {
    let nu = CVec::from_iterator(
        alpha.len() + beta.len(),
        alpha.iter().map(|a| a.conj()).chain(beta.iter().copied()),
    );
    let norm: f64 = alpha.iter().chain(beta).map(|x| x.norm_sqr()).sum();
    (u.form.log_eval(&nu) - 0.5 * norm).exp()
}

/// Stellar form of U|G>.
pub fn apply_unitary(u: &UnitaryStellar, g: &GaussianPure) -> Result<GaussForm> {
    let n = u.modes();
    let uu: Vec<usize> = (n..2 * n).collect();
    let ubar: Vec<usize> = (2 * n..3 * n).collect();
    u.form.product(&g.form()).integrate(&uu, &ubar)
}

/// U|G> with the vacuum amplitude carried through exactly.
pub fn propagate(g: &GaussianPure, op: &GaussOp) -> Result<GaussianPure> {
    let u = stellar_unitary(op)?;
    let f = apply_unitary(&u, g)?;
    let cov = symmetrize_real(&(&op.s * g.cov() * op.s.transpose()));
    let mean = &op.s * g.mean() + &op.d;
    Ok(GaussianPure { cov, mean, log_o: f.log_c, a: f.a, b: f.b })
}

/// Log of <G1|G2> by direct contraction of the stellar forms.
pub fn log_stellar_overlap(g1: &GaussianPure, g2: &GaussianPure) -> Result<C64> {
    let n = g1.modes();
    let f1 = g1.form();
    let conj1 = GaussForm::new(f1.a.map(|x| x.conj()), f1.b.map(|x| x.conj()), f1.log_c.conj());
    let u: Vec<usize> = (0..n).collect();
    let ubar: Vec<usize> = (n..2 * n).collect();
    Ok(conj1.product(&g2.form()).integrate(&u, &ubar)?.log_c)
}

pub fn stellar_overlap(g1: &GaussianPure, g2: &GaussianPure) -> Result<C64> {
    log_stellar_overlap(g1, g2).map(|l| l.exp())
}
