//! Truncated Fock-basis oracle.
//!
//! Everything here is built from number-state recurrences and shares no code
//! with the phase engine, so it can referee the phase conventions. Operator
//! matrices are exact on the retained block; the only approximation is the
//! truncation of the state itself, reported as leakage.

use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::gaussian::bloch_messiah;
use crate::linalg::*;

pub const DEFAULT_CUTOFF_SINGLE: usize = 60;
pub const DEFAULT_CUTOFF_TWO: usize = 40;
pub const LEAK_TOL: f64 = 1e-10;

/// Amplitudes over the product basis |n_1 ... n_k>, n_i < cutoffs[i], with
/// mode 0 varying slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    pub cutoffs: Vec<usize>,
    pub amps: Vec<C64>,
}

fn coherent_amplitudes(alpha: C64, cut: usize) -> Vec<C64> {
    let mut v = Vec::with_capacity(cut);
    // log-scaled start avoids underflow of e^{-|alpha|^2/2} for large alpha
    let mut cur = c((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    if cur.re == 0.0 {
        let lead = -0.5 * alpha.norm_sqr();
        let la = alpha.norm().ln();
        let ph = alpha.arg();
        let mut lfact = 0.0;
        for n in 0..cut {
            if n > 0 {
                lfact += (n as f64).ln();
            }
            let lm = lead + n as f64 * la - 0.5 * lfact;
            v.push(C64::from_polar(lm.exp(), n as f64 * ph));
        }
        return v;
    }
    for n in 0..cut {
        if n > 0 {
            cur = cur * alpha / (n as f64).sqrt();
        }
        v.push(cur);
    }
    v
}

/// <m|D(alpha)|n> for m, n < cut. Each diagonal m - n = k is a normalised
/// Laguerre function of x = |alpha|^2,
/// f_n^k = sqrt(n!/(n+k)!) x^{k/2} e^{-x/2} L_n^k(x),
/// run forward in n. Unlike the raising recursion in both indices this stays
/// accurate for cutoffs in the hundreds.
pub fn displacement_matrix(alpha: C64, cut: usize) -> CMat {
    let x = alpha.norm_sqr();
    let ph = alpha.arg();
    let mut d = CMat::zeros(cut, cut);
    let mut lfact = 0.0;
    for k in 0..cut {
        if k > 0 {
            lfact += (k as f64).ln();
        }
        let lead = if k == 0 { 0.0 } else if x > 0.0 { 0.5 * k as f64 * x.ln() } else { f64::NEG_INFINITY };
        let (mut prev, mut f) = (0.0, (lead - 0.5 * x - 0.5 * lfact).exp());
        let kf = k as f64;
        // <n|D(alpha)|n+k> = (-1)^k conj(<n+k|D(alpha)|n>)
        let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
        for n in 0..cut - k {
            d[(n + k, n)] = C64::from_polar(f, kf * ph);
            if k > 0 {
                d[(n, n + k)] = C64::from_polar(sign * f, -kf * ph);
            }
            let nf = n as f64;
            let next = ((2.0 * nf + 1.0 + kf - x) * f - (nf * (nf + kf)).sqrt() * prev) / ((nf + 1.0) * (nf + 1.0 + kf)).sqrt();
            prev = f;
            f = next;
        }
    }
    d
}

/// <m|S(r e^{i phi})|n> for m, n < cut, with S = exp((conj(xi) a^2 - xi a^dag^2)/2).
/// The Bargmann kernel is sech(r)^{1/2} exp(z A z^T / 2) with
/// A = [[-e^{i phi} tanh r, sech r], [sech r, e^{-i phi} tanh r]]. Its two
/// index recursions, weighted by m and n and added, give
/// (m + n) S_mn = A11 sqrt(m(m-1)) S_{m-2,n} + 2 A12 sqrt(mn) S_{m-1,n-1} + A22 sqrt(n(n-1)) S_{m,n-2},
/// filled level by level in m + n. Either recursion alone blows up past a
/// cutoff of a few hundred; the symmetric one does not.
pub fn squeeze_matrix(r: f64, phi: f64, cut: usize) -> CMat {
    let (t, se) = (r.tanh(), 1.0 / r.cosh());
    let a11 = -C64::from_polar(t, phi);
    let a22 = C64::from_polar(t, -phi);
    let mut s = CMat::zeros(cut, cut);
    s[(0, 0)] = c(se.sqrt(), 0.0);
    for l in (2..2 * cut - 1).step_by(2) {
        for m in l.saturating_sub(cut - 1)..=l.min(cut - 1) {
            let n = l - m;
            let mut acc = c(0.0, 0.0);
            if m >= 2 {
                acc += a11 * ((m * (m - 1)) as f64).sqrt() * s[(m - 2, n)];
            }
            if m >= 1 && n >= 1 {
                acc += 2.0 * se * ((m * n) as f64).sqrt() * s[(m - 1, n - 1)];
            }
            if n >= 2 {
                acc += a22 * ((n * (n - 1)) as f64).sqrt() * s[(m, n - 2)];
            }
            s[(m, n)] = acc / l as f64;
        }
    }
    s
}

impl FockVector {
    pub fn vacuum(cutoffs: &[usize]) -> Self {
        let mut v = Self::zeros(cutoffs);
        v.amps[0] = c(1.0, 0.0);
        v
    }

    pub fn zeros(cutoffs: &[usize]) -> Self {
        Self { cutoffs: cutoffs.to_vec(), amps: vec![c(0.0, 0.0); cutoffs.iter().product()] }
    }

    pub fn basis(cutoffs: &[usize], occ: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(cutoffs);
        let i = v.index(occ)?;
        v.amps[i] = c(1.0, 0.0);
        Ok(v)
    }

    /// Truncated product of coherent states.
    pub fn coherent(cutoffs: &[usize], alpha: &[C64]) -> Self {
        let mut v = Self::zeros(&[]);
        v.amps = vec![c(1.0, 0.0)];
        for (k, &a) in alpha.iter().enumerate() {
            let f = Self { cutoffs: vec![cutoffs[k]], amps: coherent_amplitudes(a, cutoffs[k]) };
            v = v.tensor(&f);
        }
        v
    }

    pub fn modes(&self) -> usize {
        self.cutoffs.len()
    }

    fn stride(&self, mode: usize) -> usize {
        self.cutoffs[mode + 1..].iter().product()
    }

    pub fn index(&self, occ: &[usize]) -> Result<usize> {
        if occ.len() != self.modes() {
            return Err(Error::Dimension("occupation length must equal the mode count".into()));
        }
        let mut i = 0;
        for (k, &n) in occ.iter().enumerate() {
            if n >= self.cutoffs[k] {
                return Err(Error::Invalid(format!("occupation {n} beyond cutoff {}", self.cutoffs[k])));
            }
            i = i * self.cutoffs[k] + n;
        }
        Ok(i)
    }

    pub fn amplitude(&self, occ: &[usize]) -> Result<C64> {
        Ok(self.amps[self.index(occ)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// 1 - ||psi||^2, meaningful for states that should be normalised.
    pub fn leakage(&self) -> f64 {
        1.0 - self.norm_sqr()
    }

    pub fn tensor(&self, other: &FockVector) -> FockVector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        FockVector { cutoffs: [self.cutoffs.clone(), other.cutoffs.clone()].concat(), amps }
    }

    /// self += w * other
    pub fn axpy(&mut self, w: C64, other: &FockVector) -> Result<()> {
        if self.cutoffs != other.cutoffs {
            return Err(Error::Dimension("cutoff mismatch".into()));
        }
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += w * b;
        }
        Ok(())
    }

    pub fn scale(&mut self, w: C64) {
        for a in &mut self.amps {
            *a *= w;
        }
    }

    /// Applies a single-mode matrix (cut x cut) to `mode`.
    pub fn apply_single(&mut self, mode: usize, m: &CMat) {
        let cut = self.cutoffs[mode];
        let inner = self.stride(mode);
        let outer = self.amps.len() / (cut * inner);
        // rows of m as contiguous slices, zeros skipped (squeezers are half zero)
        let rows: Vec<Vec<(usize, C64)>> =
            (0..cut).map(|r| (0..cut).filter(|&k| m[(r, k)] != c(0.0, 0.0)).map(|k| (k, m[(r, k)])).collect()).collect();
        let mut buf = vec![c(0.0, 0.0); cut * inner];
        for o in 0..outer {
            let block = &mut self.amps[o * cut * inner..(o + 1) * cut * inner];
            buf.copy_from_slice(block);
            for (r, row) in rows.iter().enumerate() {
                let out = &mut block[r * inner..(r + 1) * inner];
                out.fill(c(0.0, 0.0));
                for &(k, w) in row {
                    let src = &buf[k * inner..(k + 1) * inner];
                    for (y, x) in out.iter_mut().zip(src) {
                        *y += w * x;
                    }
                }
            }
        }
    }

    pub fn apply_diagonal(&mut self, mode: usize, diag: &[C64]) {
        let cut = self.cutoffs[mode];
        let inner = self.stride(mode);
        for (j, a) in self.amps.iter_mut().enumerate() {
            *a *= diag[(j / inner) % cut];
        }
    }

    /// Passive two-mode gate with Heisenberg action (a1, a2) -> U (a1, a2),
    /// i.e. a_k^dag -> sum_l U_lk a_l^dag. Works one total-photon block N at a
    /// time on the matrix M_N[m1][n1] = <m1, N-m1|U|n1, N-n1>. Raising the
    /// column with a_1^dag and with a_2^dag gives two recursions from block
    /// N - 1; their n1, n2 weighted sum has bounded coefficients and stays
    /// stable for blocks in the thousands.
    pub fn apply_two_mode_passive(&mut self, m1: usize, m2: usize, u: &CMat) {
        let (c1, c2) = (self.cutoffs[m1], self.cutoffs[m2]);
        let (s1, s2) = (self.stride(m1), self.stride(m2));
        let total = self.amps.len();
        let bases: Vec<usize> = (0..total).filter(|&j| (j / s1) % c1 == 0 && (j / s2) % c2 == 0).collect();
        let mut out = vec![c(0.0, 0.0); total];
        let (u00, u10, u01, u11) = (u[(0, 0)], u[(1, 0)], u[(0, 1)], u[(1, 1)]);
        // window of m1 (and n1) values inside the cutoffs for block N
        let window = |big_n: usize| (big_n.saturating_sub(c2 - 1), big_n.min(c1 - 1));
        let sq: Vec<f64> = (0..c1 + c2).map(|k| (k as f64).sqrt()).collect();
        // block N - 1 over its window, padded by a zero ring so the four
        // neighbours of any entry in block N can be read without checks
        let (mut prev, mut plo, mut pw) = (vec![c(0.0, 0.0); 9], 0usize, 1usize);
        prev[4] = c(1.0, 0.0);
        for big_n in 0..(c1 + c2 - 1) {
            let (lo, hi) = window(big_n);
            let w = hi - lo + 1;
            if big_n > 0 {
                let inv = 1.0 / big_n as f64;
                let ps = pw + 2;
                let mut cur = vec![c(0.0, 0.0); (w + 2) * (w + 2)];
                for mm1 in lo..=hi {
                    let mm2 = big_n - mm1;
                    // padded rows of prev at m1 - 1 and m1
                    let r_dn = (mm1 + 1 - plo - 1) * ps;
                    let r_same = (mm1 + 1 - plo) * ps;
                    let (a1, a2) = (sq[mm1] * inv, sq[mm2] * inv);
                    let row = &mut cur[(mm1 - lo + 1) * (w + 2)..];
                    for n1 in lo..=hi {
                        let n2 = big_n - n1;
                        let j_dn = n1 + 1 - plo - 1;
                        let j_same = n1 + 1 - plo;
                        row[n1 - lo + 1] = (u00 * prev[r_dn + j_dn] * a1 + u10 * prev[r_same + j_dn] * a2) * sq[n1]
                            + (u01 * prev[r_dn + j_same] * a1 + u11 * prev[r_same + j_same] * a2) * sq[n2];
                    }
                }
                prev = cur;
                plo = lo;
                pw = w;
            }
            let ps = pw + 2;
            for &b in &bases {
                for n1 in lo..=hi {
                    let x = self.amps[b + n1 * s1 + (big_n - n1) * s2];
                    if x == c(0.0, 0.0) {
                        continue;
                    }
                    for mm1 in lo..=hi {
                        out[b + mm1 * s1 + (big_n - mm1) * s2] += prev[(mm1 - lo + 1) * ps + (n1 - lo + 1)] * x;
                    }
                }
            }
        }
        self.amps = out;
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        let n = self.modes();
        gate.validate(n)?;
        match gate {
            Gate::Displace { mode, alpha } => {
                let m = displacement_matrix(*alpha, self.cutoffs[*mode]);
                self.apply_single(*mode, &m);
            }
            Gate::Squeeze { mode, r, phi } => {
                let m = squeeze_matrix(*r, *phi, self.cutoffs[*mode]);
                self.apply_single(*mode, &m);
            }
            Gate::Phase { mode, theta } => {
                let d: Vec<C64> = (0..self.cutoffs[*mode]).map(|k| C64::from_polar(1.0, k as f64 * theta)).collect();
                self.apply_diagonal(*mode, &d);
            }
            Gate::BeamSplitter { m1, m2, theta, phi } => {
                self.apply_two_mode_passive(*m1, *m2, &crate::gates::beamsplitter_unitary(*theta, *phi));
            }
            Gate::Passive { modes, u } => self.apply_passive(modes, u)?,
            Gate::Symplectic { s, d } => {
                if n > 2 {
                    return Err(Error::Invalid("oracle symplectic gates are limited to two modes".into()));
                }
                let bm = bloch_messiah(s)?;
                let all: Vec<usize> = (0..n).collect();
                let (u2, _) = bogoliubov(&bm.o2);
                self.apply_passive(&all, &u2)?;
                for (k, &r) in bm.squeezing.iter().enumerate() {
                    let m = squeeze_matrix(-r, 0.0, self.cutoffs[k]);
                    self.apply_single(k, &m);
                }
                self.apply_passive(&all, &bm.u1)?;
                let alpha = alpha_from_quad(d);
                for k in 0..n {
                    if alpha[k].norm() > 0.0 {
                        let m = displacement_matrix(alpha[k], self.cutoffs[k]);
                        self.apply_single(k, &m);
                    }
                }
            }
            Gate::GlobalPhase { theta } => self.scale(C64::from_polar(1.0, *theta)),
        }
        Ok(())
    }

    fn apply_passive(&mut self, modes: &[usize], u: &CMat) -> Result<()> {
        match modes.len() {
            0 => Ok(()),
            1 => {
                let d: Vec<C64> = (0..self.cutoffs[modes[0]]).map(|k| u[(0, 0)].powu(k as u32)).collect();
                self.apply_diagonal(modes[0], &d);
                Ok(())
            }
            2 => {
                self.apply_two_mode_passive(modes[0], modes[1], u);
                Ok(())
            }
            _ => Err(Error::Invalid("oracle passive gates are limited to two modes".into())),
        }
    }

    pub fn apply_gates(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply_gate(g))
    }

    /// <alpha|_B psi on the measured modes, leaving the others.
    pub fn project_coherent(&self, modes: &[usize], alpha: &[C64]) -> Result<FockVector> {
        if modes.len() != alpha.len() {
            return Err(Error::Dimension("one outcome per measured mode".into()));
        }
        let mut cur = self.clone();
        // highest index first so earlier mode numbers stay valid
        let mut order: Vec<usize> = (0..modes.len()).collect();
        order.sort_by(|&a, &b| modes[b].cmp(&modes[a]));
        for &k in &order {
            let m = modes[k];
            if m >= cur.modes() {
                return Err(Error::Invalid(format!("mode {m} out of range")));
            }
            let cut = cur.cutoffs[m];
            let coh = coherent_amplitudes(alpha[k], cut);
            let inner = cur.stride(m);
            let outer = cur.amps.len() / (cut * inner);
            let mut amps = vec![c(0.0, 0.0); outer * inner];
            for o in 0..outer {
                for i in 0..inner {
                    let mut acc = c(0.0, 0.0);
                    for j in 0..cut {
                        acc += coh[j].conj() * cur.amps[o * cut * inner + j * inner + i];
                    }
                    amps[o * inner + i] = acc;
                }
            }
            let mut cutoffs = cur.cutoffs.clone();
            cutoffs.remove(m);
            cur = FockVector { cutoffs, amps };
        }
        Ok(cur)
    }

    /// Normalised quadrature covariance and mean, from <a>, <a a> and <a^dag a>.
    pub fn moments(&self) -> (RMat, RVec) {
        let n = self.modes();
        let norm = self.norm_sqr();
        let lower = |v: &FockVector, m: usize| -> FockVector {
            let cut = v.cutoffs[m];
            let inner = v.stride(m);
            let mut out = FockVector::zeros(&v.cutoffs);
            for (j, a) in v.amps.iter().enumerate() {
                let k = (j / inner) % cut;
                if k > 0 {
                    out.amps[j - inner] = a * (k as f64).sqrt();
                }
            }
            out
        };
        let inner = |a: &FockVector, b: &FockVector| -> C64 { a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum() };
        let low: Vec<FockVector> = (0..n).map(|m| lower(self, m)).collect();
        let mean_a: Vec<C64> = low.iter().map(|l| inner(self, l) / norm).collect();
        // <a_i a_j> and <a_i^dag a_j>
        let mut aa = CMat::zeros(n, n);
        let mut ada = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                aa[(i, j)] = inner(self, &lower(&low[j], i)) / norm;
                ada[(i, j)] = inner(&low[i], &low[j]) / norm;
            }
        }
        let mut cov = RMat::zeros(2 * n, 2 * n);
        let mean = quad_from_alpha(&mean_a);
        for i in 0..n {
            for j in 0..n {
                // centred second moments of (a, a^dag)
                let caa = aa[(i, j)] - mean_a[i] * mean_a[j];
                let cada = ada[(i, j)] - mean_a[i].conj() * mean_a[j];
                let delta = if i == j { 1.0 } else { 0.0 };
                // q = (a + a^dag)/sqrt2, p = (a - a^dag)/(i sqrt2); sigma = <{dr, dr}>
                let qq = caa.re + cada.re + 0.5 * delta;
                let pp = -caa.re + cada.re + 0.5 * delta;
                cov[(2 * i, 2 * j)] = 2.0 * qq;
                cov[(2 * i + 1, 2 * j + 1)] = 2.0 * pp;
                cov[(2 * i, 2 * j + 1)] = 2.0 * (caa.im + cada.im);
                cov[(2 * i + 1, 2 * j)] = 2.0 * (caa.im - cada.im);
            }
        }
        (symmetrize_real(&cov), mean)
    }
}

/// Per-mode cutoffs large enough that the photon-number tail beyond them
/// carries less than `mass` along the whole gate sequence. The estimate uses
/// the covariance of every intermediate state: the tail of a Gaussian photon
/// distribution decays like ((l - 1)/(l + 1))^n for the largest covariance
/// eigenvalue l, and a displacement shifts it by |alpha|^2 with a spread set
/// by the variance along the displacement.
pub fn auto_cutoffs(n: usize, gates: &[Gate], mass: f64) -> Vec<usize> {
    let mut cov = RMat::identity(2 * n, 2 * n);
    let mut mean = RVec::zeros(2 * n);
    let mut cut = vec![0usize; n];
    let mut update = |cov: &RMat, mean: &RVec| {
        for k in 0..n {
            let idx = [2 * k, 2 * k + 1];
            let sk = sub_matrix(cov, &idx, &idx);
            let mk = sub_vec(mean, &idx);
            let lmax = sk.clone().symmetric_eigen().eigenvalues.max();
            let rho = ((lmax - 1.0) / (lmax + 1.0)).max(0.0);
            let tail = if rho > 1e-12 { mass.ln() / rho.ln() } else { 0.0 };
            let a2 = 0.5 * mk.norm_squared();
            let spread = if a2 > 0.0 { (mk.transpose() * &sk * &mk)[(0, 0)] / mk.norm_squared() } else { 0.0 };
            let need = a2 + 10.0 * (a2 * spread).sqrt() + tail + 16.0;
            cut[k] = cut[k].max(need.ceil() as usize);
        }
    };
    update(&cov, &mean);
    for g in gates {
        let s = g.symplectic(n);
        let d = g.op(n).d;
        cov = &s * &cov * s.transpose();
        mean = &s * &mean + d;
        update(&cov, &mean);
    }
    cut
}

/// Applies `gates` to the vacuum and checks the truncation leakage.
pub fn oracle_state(n: usize, gates: &[Gate], cutoffs: &[usize]) -> Result<FockVector> {
    if cutoffs.len() != n {
        return Err(Error::Dimension("one cutoff per mode".into()));
    }
    let mut v = FockVector::vacuum(cutoffs);
    v.apply_gates(gates)?;
    let leak = v.leakage();
    // a norm above one means the arithmetic went wrong, not the truncation
    if !(leak.abs() <= LEAK_TOL) {
        return Err(Error::Leakage(leak));
    }
    Ok(v)
}

pub fn default_cutoffs(n: usize) -> Vec<usize> {
    vec![if n == 1 { DEFAULT_CUTOFF_SINGLE } else { DEFAULT_CUTOFF_TWO }; n]
}

pub fn oracle_overlap(a: &FockVector, b: &FockVector) -> Result<C64> {
    if a.cutoffs != b.cutoffs {
        return Err(Error::Dimension("cutoff mismatch".into()));
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// Heterodyne density of outcome `alpha` on `modes`, with respect to
/// d^2alpha: ||<alpha|_B psi||^2 / (pi^k ||psi||^2).
pub fn oracle_born(state: &FockVector, modes: &[usize], alpha: &[C64]) -> Result<f64> {
    let proj = state.project_coherent(modes, alpha)?;
    Ok(proj.norm_sqr() / (std::f64::consts::PI.powi(modes.len() as i32) * state.norm_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unitarity_defect(m: &CMat, keep: usize) -> f64 {
        let g = m.adjoint() * m;
        let mut worst: f64 = 0.0;
        for i in 0..keep {
            for j in 0..keep {
                let e = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - c(e, 0.0)).norm());
            }
        }
        worst
    }

    #[test]
    fn empty_program_is_vacuum() {
        let v = oracle_state(1, &[], &[10]).unwrap();
        assert_eq!(v.amplitude(&[0]).unwrap(), c(1.0, 0.0));
        assert_eq!(v.norm_sqr(), 1.0);
    }

    #[test]
    fn displaced_vacuum_is_coherent() {
        let v = oracle_state(1, &[Gate::Displace { mode: 0, alpha: c(1.0, 0.0) }], &[40]).unwrap();
        let mut f = 1.0;
        for k in 0..10usize {
            if k > 0 {
                f *= k as f64;
            }
            assert!((v.amplitude(&[k]).unwrap() - c((-0.5f64).exp() / f.sqrt(), 0.0)).norm() < 1e-14);
        }
        assert!((v.amplitude(&[1]).unwrap().re - 0.60653).abs() < 1e-5);
    }

    #[test]
    fn truncated_operators_are_unitary_on_low_block() {
        let d = displacement_matrix(c(1.3, -0.8), 80);
        assert!(unitarity_defect(&d, 20) < 1e-12);
        let s = squeeze_matrix(1.2, 0.7, 400);
        assert!(unitarity_defect(&s, 12) < 1e-12);
    }

    #[test]
    fn displacement_composition_phase() {
        // D(a) D(b) = e^{(a conj(b) - conj(a) b)/2} D(a + b)
        let (a, b) = (c(0.4, 0.3), c(-0.2, 0.5));
        let cut = 60;
        let lhs = displacement_matrix(a, cut) * displacement_matrix(b, cut);
        let ph = ((a * b.conj() - a.conj() * b) * 0.5).exp();
        let rhs = displacement_matrix(a + b, cut) * ph;
        for i in 0..10 {
            for j in 0..10 {
                assert!((lhs[(i, j)] - rhs[(i, j)]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn coherent_overlap_against_closed_form() {
        let a = FockVector::coherent(&[40], &[c(1.0, 0.0)]);
        let b = FockVector::coherent(&[40], &[c(0.0, 1.0)]);
        let o = oracle_overlap(&a, &b).unwrap();
        assert!((o - c(-1.0, 1.0).exp()).norm() < 1e-10);
    }

    #[test]
    fn large_displacement_stays_accurate() {
        let alpha = c(12.0, 5.0);
        let v = oracle_state(1, &[Gate::Displace { mode: 0, alpha }], &[400]).unwrap();
        let w = FockVector::coherent(&[400], &[alpha]);
        assert!((oracle_overlap(&w, &v).unwrap() - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn beam_splitter_moves_a_photon() {
        let theta = 0.3;
        let mut v = FockVector::basis(&[4, 4], &[1, 0]).unwrap();
        v.apply_gate(&Gate::BeamSplitter { m1: 0, m2: 1, theta, phi: 0.0 }).unwrap();
        // a_1^dag -> U_11 a_1^dag + U_21 a_2^dag
        assert!((v.amplitude(&[1, 0]).unwrap() - c(theta.cos(), 0.0)).norm() < 1e-15);
        assert!((v.amplitude(&[0, 1]).unwrap() - c(theta.sin(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hong_ou_mandel_dip() {
        let mut v = FockVector::basis(&[4, 4], &[1, 1]).unwrap();
        v.apply_gate(&Gate::BeamSplitter { m1: 0, m2: 1, theta: PI / 4.0, phi: 0.7 }).unwrap();
        assert!(v.amplitude(&[1, 1]).unwrap().norm() < 1e-15);
        assert!((v.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn moments_of_squeezed_coherent_state() {
        let gates = [Gate::Squeeze { mode: 0, r: 0.5, phi: 0.4 }, Gate::Displace { mode: 0, alpha: c(0.3, -0.2) }];
        let v = oracle_state(1, &gates, &[80]).unwrap();
        let (cov, mean) = v.moments();
        let s = gates[0].symplectic(1);
        let expect = &s * s.transpose();
        assert!((cov - expect).norm() < 1e-10);
        assert!((mean - quad_from_alpha(&[c(0.3, -0.2)])).norm() < 1e-12);
    }

    #[test]
    fn heterodyne_of_vacuum() {
        let v = FockVector::vacuum(&[20]);
        let p = oracle_born(&v, &[0], &[c(0.0, 0.0)]).unwrap();
        assert!((p - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn leakage_is_reported() {
        let r = oracle_state(1, &[Gate::Displace { mode: 0, alpha: c(4.0, 0.0) }], &[10]);
        assert!(matches!(r, Err(Error::Leakage(_))));
    }
}
