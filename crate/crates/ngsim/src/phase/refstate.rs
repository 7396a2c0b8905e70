//! Vacuum amplitude <0|e^{i phase} D(d) U_S|0> through the Euler decomposition.
//!
//! With S = O1 Z O2, D(d) O1 Z = O1 Z D(beta) where beta = Z^{-1} O1^T d, and the
//! passive layers fix the vacuum. What remains factorises over modes:
//! <0|S(gamma) D(beta)|0> = (1 - |t|^2)^{1/4} exp((conj(t) beta^2 - |beta|^2) / 2)
//! with t = e^{i theta} tanh|gamma|.

use crate::error::Result;
use crate::gates::GaussOp;
use crate::gaussian::{bloch_messiah, squeeze_diag};
use crate::linalg::*;

pub fn log_ref_overlap_bloch_messiah(op: &GaussOp) -> Result<C64> {
    let bm = bloch_messiah(&op.s)?;
    let zinv = squeeze_diag(&bm.squeezing.iter().map(|r| -r).collect::<Vec<_>>());
    let beta = alpha_from_quad(&(zinv * bm.o1.transpose() * &op.d));
    let mut acc = c(0.0, op.phase);
    for (k, &r) in bm.squeezing.iter().enumerate() {
        // Z holds e^{r} on q, i.e. the squeezer S(-r), so t = -tanh r
        let t = -r.tanh();
        let b = beta[k];
        // 1 - tanh^2 = sech^2, kept in log form for large r
        let log_sech = -(r.abs() + (-2.0 * r.abs()).exp().ln_1p() - std::f64::consts::LN_2);
        acc += c(0.5 * log_sech, 0.0) + (b * b * t - b.norm_sqr()) * 0.5;
    }
    Ok(acc)
}

pub fn ref_overlap_bloch_messiah(op: &GaussOp) -> Result<C64> {
    log_ref_overlap_bloch_messiah(op).map(|l| l.exp())
}
