//! Heterodyne projection and photon-number moments in the stellar picture.

use super::kernel::GaussForm;
use super::GaussianPure;
use crate::error::{Error, Result};
use crate::gaussian::{condition_on_generaldyne, GeneralDyne};
use crate::linalg::*;

/// Re-expresses `f` in a larger variable set: variable i of `f` becomes the
/// sum of the listed new variables.
fn embed(f: &GaussForm, map: &[Vec<usize>], dim: usize) -> GaussForm {
    let mut p = CMat::zeros(f.dim(), dim);
    for (i, targets) in map.iter().enumerate() {
        for &t in targets {
            p[(i, t)] = c(1.0, 0.0);
        }
    }
    let a = symmetrize(&(p.transpose() * &f.a * &p));
    let b = p.transpose() * &f.b;
    GaussForm::new(a, b, f.log_c)
}

fn conj_form(f: &GaussForm) -> GaussForm {
    GaussForm::new(f.a.map(|x| x.conj()), f.b.map(|x| x.conj()), f.log_c.conj())
}

/// Log inner product of two (possibly unnormalised) stellar functions.
pub fn log_form_overlap(f1: &GaussForm, f2: &GaussForm) -> Result<C64> {
    let n = f1.dim();
    let u: Vec<usize> = (0..n).collect();
    let ubar: Vec<usize> = (n..2 * n).collect();
    Ok(conj_form(f1).product(f2).integrate(&u, &ubar)?.log_c)
}

/// Heterodyne projection <x|_B G on the modes `measured`.
///
/// Returns the log norm of the projected vector and the normalised state on
/// the remaining modes (in increasing order). The phase of the projection is
/// kept in the vacuum amplitude of the returned state, so
/// (<x|_B (x) 1)|G> = exp(log_norm) |G'>.
pub fn condition_heterodyne(g: &GaussianPure, measured: &[usize], x: &[C64]) -> Result<(f64, GaussianPure)> {
    let n = g.modes();
    if measured.len() != x.len() {
        return Err(Error::Dimension("one outcome per measured mode".into()));
    }
    let rest: Vec<usize> = (0..n).filter(|m| !measured.contains(m)).collect();
    if rest.is_empty() {
        return Err(Error::Invalid("conditioning needs at least one unmeasured mode".into()));
    }
    let xb = CVec::from_iterator(x.len(), x.iter().map(|v| v.conj()));
    let a_aa = select_rows_cols(&g.a, &rest, &rest);
    let a_ab = select_rows_cols(&g.a, &rest, measured);
    let a_bb = select_rows_cols(&g.a, measured, measured);
    let b_a = select(&g.b, &rest);
    let b_b = select(&g.b, measured);
    let norm: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    let b_new = b_a + &a_ab * &xb;
    let log_c = g.log_o - 0.5 * norm
        + (xb.transpose() * &a_bb * &xb)[(0, 0)] * 0.5
        + (b_b.transpose() * &xb)[(0, 0)];
    let f = GaussForm::new(a_aa, b_new, log_c);
    let log_norm = 0.5 * log_form_overlap(&f, &f)?.re;

    let meas = GeneralDyne::heterodyne(measured.to_vec());
    let st = condition_on_generaldyne(&g.to_mixed(), &meas, &quad_from_alpha(x))?;
    Ok((log_norm, GaussianPure { cov: st.cov, mean: st.mean, log_o: f.log_c - log_norm, a: f.a, b: f.b }))
}

/// <G1|a_k^dag a_k|G2> for every mode k.
///
/// Shifting the arguments of both stellar functions by sources (s, t) and
/// integrating gives a generating form whose mixed derivative in (s_k, t_k)
/// at zero is the moment.
pub fn number_moments(g1: &GaussianPure, g2: &GaussianPure) -> Result<Vec<C64>> {
    let n = g1.modes();
    if g2.modes() != n {
        return Err(Error::Dimension("moments need equal mode counts".into()));
    }
    // variables: s (0..n), t (n..2n), u (2n..3n), ubar (3n..4n)
    let m1: Vec<Vec<usize>> = (0..n).map(|k| vec![k, 2 * n + k]).collect();
    let m2: Vec<Vec<usize>> = (0..n).map(|k| vec![n + k, 3 * n + k]).collect();
    let f1 = embed(&conj_form(&g1.form()), &m1, 4 * n);
    let f2 = embed(&g2.form(), &m2, 4 * n);
    let mut sum = f1.clone();
    sum.a += &f2.a;
    sum.b += &f2.b;
    sum.log_c += f2.log_c;
    let u: Vec<usize> = (2 * n..3 * n).collect();
    let ubar: Vec<usize> = (3 * n..4 * n).collect();
    let r = sum.integrate(&u, &ubar)?;
    let o = r.log_c.exp();
    Ok((0..n).map(|k| o * (r.a[(k, n + k)] + r.b[k] * r.b[n + k])).collect())
}
