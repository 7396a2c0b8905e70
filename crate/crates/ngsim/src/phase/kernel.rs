//! Exponentials of complex quadratic forms, c * exp(nu^T A nu / 2 + b^T nu),
//! and their contraction against the coherent-state resolution of identity.

use crate::error::{Error, Result};
use crate::linalg::*;

#[derive(Clone, Debug, PartialEq)]
pub struct GaussForm {
    pub a: CMat,
    pub b: CVec,
    /// Natural log of the prefactor c (imaginary part carries the phase).
    pub log_c: C64,
}

impl GaussForm {
    pub fn new(a: CMat, b: CVec, log_c: C64) -> Self {
        Self { a, b, log_c }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// Log of the form evaluated at `nu`.
    pub fn log_eval(&self, nu: &CVec) -> C64 {
        let q = (nu.transpose() * &self.a * nu)[(0, 0)];
        let l = (self.b.transpose() * nu)[(0, 0)];
        self.log_c + q * 0.5 + l
    }

    /// Variables of `self` followed by those of `other`.
    pub fn product(&self, other: &GaussForm) -> GaussForm {
        GaussForm { a: direct_sum(&self.a, &other.a), b: concat(&self.b, &other.b), log_c: self.log_c + other.log_c }
    }

    /// Integrate out variable pairs (u_k, conj u_k) with the weight
    /// exp(-|u|^2) d^2u / pi. `u[k]` indexes the holomorphic slot and
    /// `ubar[k]` the slot that receives the conjugate. Remaining variables keep
    /// their relative order.
    pub fn integrate(&self, u: &[usize], ubar: &[usize]) -> Result<GaussForm> {
        if u.len() != ubar.len() {
            return Err(Error::Dimension("integration pairs must match".into()));
        }
        let m = u.len();
        let v: Vec<usize> = u.iter().chain(ubar.iter()).copied().collect();
        let e: Vec<usize> = (0..self.dim()).filter(|i| !v.contains(i)).collect();
        let avv = select_rows_cols(&self.a, &v, &v);
        let mut j = CMat::zeros(2 * m, 2 * m);
        for k in 0..m {
            j[(k, m + k)] = c(1.0, 0.0);
            j[(m + k, k)] = c(1.0, 0.0);
        }
        let kmat = &j - &avv;
        let kinv = complex_inverse(&kmat, "Gaussian integral kernel")?;
        let jk = CMat::identity(2 * m, 2 * m) - &j * &avv;
        let half_ld = half_logdet_principal(&jk)?;
        let aev = select_rows_cols(&self.a, &e, &v);
        let aee = select_rows_cols(&self.a, &e, &e);
        let bv = select(&self.b, &v);
        let be = select(&self.b, &e);
        let a_new = symmetrize(&(aee + &aev * &kinv * aev.transpose()));
        let b_new = be + &aev * &kinv * &bv;
        let log_c = self.log_c + (bv.transpose() * &kinv * &bv)[(0, 0)] * 0.5 - half_ld;
        Ok(GaussForm { a: a_new, b: b_new, log_c })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coherent_overlap_from_integral() {
        // <alpha|beta> through F_alpha(u)^* F_beta(conj u)
        let (al, be) = (c(0.3, -0.7), c(-1.1, 0.4));
        let f1 = GaussForm::new(CMat::zeros(1, 1), CVec::from_element(1, al.conj()), c(-0.5 * al.norm_sqr(), 0.0));
        let f2 = GaussForm::new(CMat::zeros(1, 1), CVec::from_element(1, be), c(-0.5 * be.norm_sqr(), 0.0));
        let r = f1.product(&f2).integrate(&[0], &[1]).unwrap();
        let expect = -0.5 * (al.norm_sqr() + be.norm_sqr()) + al.conj() * be;
        assert!((r.log_c - expect).norm() < 1e-14);
    }

    #[test]
    fn one_dimensional_gaussian_integral() {
        // integral of exp(-|u|^2 + p u^2/2 + q ubar^2/2) d^2u/pi = (1 - p q)^{-1/2}
        let (p, q) = (c(0.3, 0.2), c(-0.5, 0.1));
        let a = CMat::from_row_slice(2, 2, &[p, c(0.0, 0.0), c(0.0, 0.0), q]);
        let f = GaussForm::new(a, CVec::zeros(2), c(0.0, 0.0));
        let r = f.integrate(&[0], &[1]).unwrap();
        let expect = (c(1.0, 0.0) - p * q).sqrt().inv();
        assert!((r.log_c.exp() - expect).norm() < 1e-14);
    }
}
