//! Covariance-matrix formalism for Gaussian states.
//!
//! Conventions: quadratures are interleaved (q1, p1, ..., qn, pn) with
//! [q, p] = i, and covariances use the anticommutator so the vacuum is the
//! identity. A coherent state |alpha> has mean (sqrt2 Re alpha, sqrt2 Im alpha).

use crate::error::{Error, Result};
use crate::linalg::*;

pub const TAU_PSD: f64 = 1e-9;
pub const TAU_PURE: f64 = 1e-9;
pub const TAU_SYMPL: f64 = 1e-9;
pub const TAU_UNITARY: f64 = 1e-9;
pub const TAU_DECOMP: f64 = 1e-10;
pub const Z_HOMODYNE: f64 = 1e6;

/// A (possibly mixed) Gaussian state.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianMixed {
    pub cov: RMat,
    pub mean: RVec,
}

fn check_shape(cov: &RMat, mean: &RVec) -> Result<usize> {
    let d = mean.len();
    if d == 0 || d % 2 != 0 {
        return Err(Error::Dimension(format!("quadrature vector length {d} must be even and positive")));
    }
    if cov.nrows() != d || cov.ncols() != d {
        return Err(Error::Dimension(format!(
            "covariance is {}x{}, mean has length {d}",
            cov.nrows(),
            cov.ncols()
        )));
    }
    Ok(d / 2)
}

/// Smallest eigenvalue of sigma + i Omega.
pub fn admissibility_margin(cov: &RMat) -> f64 {
    let n = cov.nrows() / 2;
    let m = to_complex(cov) + to_complex(&omega(n)) * c(0.0, 1.0);
    hermitian_min_eig(&m)
}

pub fn check_admissible(cov: &RMat) -> Result<()> {
    if max_abs(&(cov - cov.transpose())) > TAU_PSD {
        return Err(Error::Invalid("covariance matrix is not symmetric".into()));
    }
    let m = admissibility_margin(cov);
    if m < -TAU_PSD {
        return Err(Error::Inadmissible(m));
    }
    Ok(())
}

impl GaussianMixed {
    pub fn new(cov: RMat, mean: RVec) -> Result<Self> {
        check_shape(&cov, &mean)?;
        check_admissible(&cov)?;
        Ok(Self { cov, mean })
    }

    pub fn vacuum(n: usize) -> Self {
        Self { cov: RMat::identity(2 * n, 2 * n), mean: RVec::zeros(2 * n) }
    }

    pub fn coherent(alpha: &[C64]) -> Self {
        let n = alpha.len();
        Self { cov: RMat::identity(2 * n, 2 * n), mean: quad_from_alpha(alpha) }
    }

    /// Product of thermal states with mean photon number `nbar` per mode.
    pub fn thermal(n: usize, nbar: f64) -> Self {
        Self { cov: RMat::identity(2 * n, 2 * n) * (2.0 * nbar + 1.0), mean: RVec::zeros(2 * n) }
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn is_pure(&self) -> bool {
        purity_defect(&self.cov) <= TAU_PURE
    }
}

/// max |sigma Omega sigma^T - Omega|, zero for pure states.
pub fn purity_defect(cov: &RMat) -> f64 {
    let om = omega(cov.nrows() / 2);
    max_abs(&(cov * &om * cov.transpose() - om))
}

pub fn symplectic_defect(s: &RMat) -> f64 {
    let om = omega(s.nrows() / 2);
    max_abs(&(s * &om * s.transpose() - om))
}

pub fn check_symplectic(s: &RMat) -> Result<()> {
    if s.nrows() != s.ncols() || s.nrows() % 2 != 0 || s.nrows() == 0 {
        return Err(Error::Dimension(format!("symplectic matrix is {}x{}", s.nrows(), s.ncols())));
    }
    let d = symplectic_defect(s);
    if d > TAU_SYMPL * (1.0 + max_abs(s).powi(2)) {
        return Err(Error::NotSymplectic(d));
    }
    Ok(())
}

pub fn displace(state: &GaussianMixed, shift: &RVec) -> Result<GaussianMixed> {
    if shift.len() != state.mean.len() {
        return Err(Error::Dimension(format!("shift length {} vs {}", shift.len(), state.mean.len())));
    }
    Ok(GaussianMixed { cov: state.cov.clone(), mean: &state.mean + shift })
}

pub fn apply_symplectic(state: &GaussianMixed, s: &RMat) -> Result<GaussianMixed> {
    if s.nrows() != state.mean.len() {
        return Err(Error::Dimension(format!("symplectic {}x{} on {} quadratures", s.nrows(), s.ncols(), state.mean.len())));
    }
    check_symplectic(s)?;
    Ok(GaussianMixed { cov: symmetrize_real(&(s * &state.cov * s.transpose())), mean: s * &state.mean })
}

/// Heisenberg map a -> U a for a unitary U, as an orthogonal symplectic
/// matrix in the interleaved basis.
pub fn passive_from_unitary(u: &CMat) -> Result<RMat> {
    if u.nrows() != u.ncols() || u.nrows() == 0 {
        return Err(Error::Dimension("unitary must be square".into()));
    }
    let n = u.nrows();
    let dev = max_abs(&(u.adjoint() * u - CMat::identity(n, n)));
    if dev > TAU_UNITARY {
        return Err(Error::NotUnitary(dev));
    }
    Ok(symplectic_from_bogoliubov(u, &CMat::zeros(n, n)))
}

/// Takagi factorisation of a complex symmetric matrix, B = W diag(d) W^T with
/// W unitary and d >= 0 (descending).
pub fn takagi(b: &CMat) -> Result<(CMat, Vec<f64>)> {
    let n = b.nrows();
    let re = b.map(|z| z.re);
    let im = b.map(|z| z.im);
    let mut h = RMat::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&re);
    h.view_mut((0, n), (n, n)).copy_from(&im);
    h.view_mut((n, 0), (n, n)).copy_from(&im);
    h.view_mut((n, n), (n, n)).copy_from(&(-&re));
    let h = symmetrize_real(&h);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let scale = 1.0_f64.max(max_abs(b));
    let tol = 1e-10 * scale;

    let jrot = |v: &RVec| -> RVec {
        let mut w = RVec::zeros(2 * n);
        for k in 0..n {
            w[k] = -v[n + k];
            w[n + k] = v[k];
        }
        w
    };

    let mut cols: Vec<RVec> = Vec::new();
    let mut d = Vec::new();
    for &i in &order {
        let l = eig.eigenvalues[i];
        if l > tol && cols.len() < n {
            cols.push(eig.eigenvectors.column(i).into_owned());
            d.push(l);
        }
    }
    if cols.len() < n {
        // Zero block: it is invariant under (x, y) -> (-y, x), so pick a basis
        // closed under that rotation by Gram-Schmidt.
        let zero: Vec<RVec> = order
            .iter()
            .filter(|&&i| eig.eigenvalues[i].abs() <= tol)
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect();
        for cand in zero {
            if cols.len() == n {
                break;
            }
            let mut v = cand.clone();
            for _ in 0..2 {
                for u in &cols {
                    let ju = jrot(u);
                    v -= u * u.dot(&v);
                    v -= &ju * ju.dot(&v);
                }
            }
            let nv = v.norm();
            if nv > 0.3 {
                cols.push(v / nv);
                d.push(0.0);
            }
        }
    }
    if cols.len() != n {
        return Err(Error::Numerical("Takagi factorisation failed to find a full basis".into()));
    }
    let mut w = CMat::zeros(n, n);
    for (k, v) in cols.iter().enumerate() {
        for i in 0..n {
            w[(i, k)] = c(v[i], v[n + i]);
        }
    }
    Ok((w, d))
}

/// Euler decomposition S = O1 Z O2.
#[derive(Clone, Debug)]
pub struct BlochMessiah {
    pub o1: RMat,
    pub z: RMat,
    pub o2: RMat,
    /// Squeezing magnitudes r_i with z_i = e^{r_i}.
    pub squeezing: Vec<f64>,
    /// Unitary matrix of the outer passive layer O1.
    pub u1: CMat,
}

pub fn squeeze_diag(r: &[f64]) -> RMat {
    let n = r.len();
    let mut z = RMat::zeros(2 * n, 2 * n);
    for (k, &rk) in r.iter().enumerate() {
        z[(2 * k, 2 * k)] = rk.exp();
        z[(2 * k + 1, 2 * k + 1)] = (-rk).exp();
    }
    z
}

pub fn bloch_messiah(s: &RMat) -> Result<BlochMessiah> {
    check_symplectic(s)?;
    let (p, q) = bogoliubov(s);
    // Stellar matrix of U_S|0>: B = Q conj(P)^{-1}.
    let pinv = complex_inverse(&p.conjugate(), "Bogoliubov block P")?;
    let b = symmetrize(&(&q * pinv));
    let (w, d) = takagi(&b)?;
    let r: Vec<f64> = d.iter().map(|&t| t.min(1.0 - 1e-16).atanh()).collect();
    let o1 = passive_from_unitary(&w).map_err(|e| Error::Numerical(format!("Takagi unitary: {e}")))?;
    let z = squeeze_diag(&r);
    let zinv = squeeze_diag(&r.iter().map(|x| -x).collect::<Vec<_>>());
    let o2 = &zinv * o1.transpose() * s;
    Ok(BlochMessiah { o1, z, o2, squeezing: r, u1: w })
}

pub fn tensor(a: &GaussianMixed, b: &GaussianMixed) -> GaussianMixed {
    GaussianMixed { cov: direct_sum(&a.cov, &b.cov), mean: concat(&a.mean, &b.mean) }
}

pub fn partial_trace(state: &GaussianMixed, keep: &[usize]) -> Result<GaussianMixed> {
    let n = state.modes();
    if keep.is_empty() {
        return Err(Error::Invalid("partial trace must keep at least one mode".into()));
    }
    if let Some(&bad) = keep.iter().find(|&&m| m >= n) {
        return Err(Error::Invalid(format!("mode {bad} out of range for {n} modes")));
    }
    let idx = quad_indices(keep);
    Ok(GaussianMixed { cov: sub_matrix(&state.cov, &idx, &idx), mean: sub_vec(&state.mean, &idx) })
}

/// Gaussian CPTP map: mean -> X mean + D, cov -> X cov X^T + Y.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianChannel {
    pub x: RMat,
    pub y: RMat,
    pub d: RVec,
}

impl GaussianChannel {
    pub fn new(x: RMat, y: RMat, d: RVec) -> Result<Self> {
        let k = d.len();
        if k == 0 || k % 2 != 0 || x.shape() != (k, k) || y.shape() != (k, k) {
            return Err(Error::Dimension("channel blocks must be 2n x 2n with a 2n shift".into()));
        }
        if max_abs(&(&y - y.transpose())) > TAU_PSD {
            return Err(Error::Invalid("channel Y must be symmetric".into()));
        }
        let om = to_complex(&omega(k / 2));
        let i = c(0.0, 1.0);
        let xc = to_complex(&x);
        let m = to_complex(&y) + &om * i - &xc * &om * xc.transpose() * i;
        let margin = hermitian_min_eig(&m);
        if margin < -TAU_PSD {
            return Err(Error::Inadmissible(margin));
        }
        Ok(Self { x, y, d })
    }

    pub fn identity(n: usize) -> Self {
        Self { x: RMat::identity(2 * n, 2 * n), y: RMat::zeros(2 * n, 2 * n), d: RVec::zeros(2 * n) }
    }

    /// Classical additive noise with `nbar` photons per mode.
    pub fn additive_noise(n: usize, nbar: f64) -> Self {
        Self { x: RMat::identity(2 * n, 2 * n), y: RMat::identity(2 * n, 2 * n) * (2.0 * nbar), d: RVec::zeros(2 * n) }
    }

    /// Pure-loss channel with transmissivity `eta` on every mode.
    pub fn loss(n: usize, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::Invalid(format!("transmissivity {eta} outside [0, 1]")));
        }
        Ok(Self {
            x: RMat::identity(2 * n, 2 * n) * eta.sqrt(),
            y: RMat::identity(2 * n, 2 * n) * (1.0 - eta),
            d: RVec::zeros(2 * n),
        })
    }

    /// The channel `self` followed by `next`.
    pub fn then(&self, next: &GaussianChannel) -> GaussianChannel {
        GaussianChannel {
            x: &next.x * &self.x,
            y: &next.x * &self.y * next.x.transpose() + &next.y,
            d: &next.x * &self.d + &next.d,
        }
    }
}

pub fn apply_channel(state: &GaussianMixed, ch: &GaussianChannel) -> Result<GaussianMixed> {
    if ch.d.len() != state.mean.len() {
        return Err(Error::Dimension(format!("channel on {} quadratures, state has {}", ch.d.len(), state.mean.len())));
    }
    Ok(GaussianMixed {
        cov: symmetrize_real(&(&ch.x * &state.cov * ch.x.transpose() + &ch.y)),
        mean: &ch.x * &state.mean + &ch.d,
    })
}

/// General-dyne measurement on a subset of modes. The outcome r_m labels the
/// centre of the displaced seed state in the POVM.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralDyne {
    pub cov_m: RMat,
    pub modes: Vec<usize>,
}

impl GeneralDyne {
    pub fn new(cov_m: RMat, modes: Vec<usize>) -> Result<Self> {
        if cov_m.nrows() != 2 * modes.len() || cov_m.ncols() != 2 * modes.len() || modes.is_empty() {
            return Err(Error::Dimension("measurement covariance must match the measured modes".into()));
        }
        check_admissible(&cov_m)?;
        Ok(Self { cov_m, modes })
    }

    pub fn heterodyne(modes: Vec<usize>) -> Self {
        let k = modes.len();
        Self { cov_m: RMat::identity(2 * k, 2 * k), modes }
    }

    /// Finite-squeezing stand-in for homodyne detection of q on each mode.
    pub fn homodyne_q(modes: Vec<usize>) -> Self {
        let k = modes.len();
        let mut m = RMat::zeros(2 * k, 2 * k);
        for j in 0..k {
            m[(2 * j, 2 * j)] = Z_HOMODYNE.powi(-2);
            m[(2 * j + 1, 2 * j + 1)] = Z_HOMODYNE.powi(2);
        }
        Self { cov_m: m, modes }
    }
}

fn split_modes(n: usize, measured: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    for (i, &m) in measured.iter().enumerate() {
        if m >= n {
            return Err(Error::Invalid(format!("measured mode {m} out of range for {n} modes")));
        }
        if measured[..i].contains(&m) {
            return Err(Error::Invalid(format!("mode {m} measured twice")));
        }
    }
    let rest: Vec<usize> = (0..n).filter(|m| !measured.contains(m)).collect();
    Ok((rest, measured.to_vec()))
}

/// Density of outcome r_m: exp(-d^T (s+s_m)^-1 d) / (pi^k sqrt det(s+s_m)).
pub fn generaldyne_density(state: &GaussianMixed, meas: &GeneralDyne, outcome: &RVec) -> Result<f64> {
    let (_, b) = split_modes(state.modes(), &meas.modes)?;
    if outcome.len() != 2 * b.len() {
        return Err(Error::Dimension(format!("outcome length {} for {} measured modes", outcome.len(), b.len())));
    }
    let ib = quad_indices(&b);
    let sb = sub_matrix(&state.cov, &ib, &ib) + &meas.cov_m;
    let d = outcome - sub_vec(&state.mean, &ib);
    let inv = spd_inverse(&sb, "sigma_B + sigma_m")?;
    let logdet = spd_logdet(&sb, "sigma_B + sigma_m")?;
    let k = b.len() as f64;
    Ok((-(d.transpose() * inv * &d)[(0, 0)] - 0.5 * logdet).exp() / std::f64::consts::PI.powf(k))
}

/// Ideal q-homodyne density on one mode: exp(-(x-q)^2/s_qq)/sqrt(pi s_qq).
pub fn homodyne_density_exact(state: &GaussianMixed, mode: usize, x: f64) -> Result<f64> {
    if mode >= state.modes() {
        return Err(Error::Invalid(format!("mode {mode} out of range")));
    }
    let s = state.cov[(2 * mode, 2 * mode)];
    let q = state.mean[2 * mode];
    Ok((-(x - q).powi(2) / s).exp() / (std::f64::consts::PI * s).sqrt())
}

/// State of the unmeasured modes after a general-dyne outcome.
pub fn condition_on_generaldyne(state: &GaussianMixed, meas: &GeneralDyne, outcome: &RVec) -> Result<GaussianMixed> {
    let (a, b) = split_modes(state.modes(), &meas.modes)?;
    if a.is_empty() {
        return Err(Error::Invalid("conditioning needs at least one unmeasured mode".into()));
    }
    if outcome.len() != 2 * b.len() {
        return Err(Error::Dimension(format!("outcome length {} for {} measured modes", outcome.len(), b.len())));
    }
    let (ia, ib) = (quad_indices(&a), quad_indices(&b));
    let sa = sub_matrix(&state.cov, &ia, &ia);
    let sab = sub_matrix(&state.cov, &ia, &ib);
    let sb = sub_matrix(&state.cov, &ib, &ib) + &meas.cov_m;
    let inv = spd_inverse(&sb, "sigma_B + sigma_m")?;
    let gain = &sab * inv;
    let innov = outcome - sub_vec(&state.mean, &ib);
    let mean = sub_vec(&state.mean, &ia) + &gain * innov;
    let cov = symmetrize_real(&(sa - &gain * sab.transpose()));
    Ok(GaussianMixed { cov, mean })
}

/// Fidelity <phi|rho|phi> between a Gaussian state and a pure Gaussian state.
pub fn fidelity_pure(rho: &GaussianMixed, phi_cov: &RMat, phi_mean: &RVec) -> Result<f64> {
    if rho.mean.len() != phi_mean.len() {
        return Err(Error::Dimension("fidelity between states of different mode count".into()));
    }
    let s = &rho.cov + phi_cov;
    let d = &rho.mean - phi_mean;
    let inv = spd_inverse(&s, "sigma_0 + sigma_1")?;
    let logdet = spd_logdet(&s, "sigma_0 + sigma_1")?;
    let n = rho.modes() as f64;
    Ok((n * 2f64.ln() - (d.transpose() * inv * &d)[(0, 0)] - 0.5 * logdet).exp())
}
