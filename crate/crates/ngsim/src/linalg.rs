//! Small dense linear-algebra helpers shared by the Gaussian modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const KAPPA_MAX: f64 = 1e12;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Symplectic form for `n` modes in (q1, p1, ..., qn, pn) ordering.
pub fn omega(n: usize) -> RMat {
    let mut m = RMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

pub fn to_complex_vec(v: &RVec) -> CVec {
    v.map(|x| C64::new(x, 0.0))
}

pub fn direct_sum<T: nalgebra::ComplexField + Copy>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut m = DMatrix::zeros(ra + rb, ca + cb);
    m.view_mut((0, 0), (ra, ca)).copy_from(a);
    m.view_mut((ra, ca), (rb, cb)).copy_from(b);
    m
}

pub fn concat<T: nalgebra::Scalar + Copy>(a: &DVector<T>, b: &DVector<T>) -> DVector<T> {
    DVector::from_iterator(a.len() + b.len(), a.iter().chain(b.iter()).copied())
}

/// Symmetric positive-definite inverse with a condition-number guard. The
/// condition number is taken after diagonal (Jacobi) scaling, which is what
/// governs the accuracy of the Cholesky solve.
pub fn spd_inverse(m: &RMat, what: &'static str) -> Result<RMat> {
    let d = m.diagonal();
    if d.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Singular(what));
    }
    let s = d.map(|x| 1.0 / x.sqrt());
    let scaled = RMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s[i] * s[j]);
    let eig = scaled.symmetric_eigen();
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    if min <= 0.0 {
        return Err(Error::Singular(what));
    }
    let cond = max / min;
    if cond > KAPPA_MAX {
        return Err(Error::IllConditioned { what, cond });
    }
    let chol = m.clone().cholesky().ok_or(Error::Singular(what))?;
    Ok(chol.inverse())
}

/// Log-determinant of a symmetric positive-definite matrix.
pub fn spd_logdet(m: &RMat, what: &'static str) -> Result<f64> {
    let chol = m.clone().cholesky().ok_or(Error::Singular(what))?;
    Ok(2.0 * chol.l().diagonal().iter().map(|x| x.ln()).sum::<f64>())
}

fn singular_values(m: &CMat) -> DVector<f64> {
    m.clone().svd(false, false).singular_values
}

/// General complex inverse, refusing matrices beyond the condition cutoff.
pub fn complex_inverse(m: &CMat, what: &'static str) -> Result<CMat> {
    let sv = singular_values(m);
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 || !min.is_finite() {
        return Err(Error::Singular(what));
    }
    let cond = max / min;
    if cond > KAPPA_MAX {
        return Err(Error::IllConditioned { what, cond });
    }
    m.clone().lu().try_inverse().ok_or(Error::Singular(what))
}

/// Eigenvalues of a general complex matrix from its Schur form.
pub fn complex_eigenvalues(m: &CMat) -> Result<CVec> {
    let n = m.nrows();
    if n == 0 {
        return Ok(CVec::zeros(0));
    }
    if n == 1 {
        return Ok(CVec::from_element(1, m[(0, 0)]));
    }
    let schur = nalgebra::Schur::try_new(m.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal())
}

/// Half the log-determinant, taking the principal square root of every
/// eigenvalue. This is the analytic continuation used for Gaussian integrals
/// whose eigenvalues stay in the open right half-plane.
pub fn half_logdet_principal(m: &CMat) -> Result<C64> {
    let ev = complex_eigenvalues(m)?;
    let mut acc = C64::new(0.0, 0.0);
    for l in ev.iter() {
        if l.norm() == 0.0 {
            return Err(Error::Singular("Gaussian integral kernel"));
        }
        acc += l.ln();
    }
    Ok(acc * 0.5)
}

pub fn max_abs<T: nalgebra::ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|x| x.clone().abs()).fold(0.0, f64::max)
}

/// Smallest eigenvalue of the Hermitian matrix `m`.
pub fn hermitian_min_eig(m: &CMat) -> f64 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigen().eigenvalues.min()
}

/// Quadrature shift of a coherent amplitude vector: (sqrt2 Re a, sqrt2 Im a).
pub fn quad_from_alpha(alpha: &[C64]) -> RVec {
    let s = std::f64::consts::SQRT_2;
    RVec::from_iterator(
        2 * alpha.len(),
        alpha.iter().flat_map(|a| [s * a.re, s * a.im]),
    )
}

pub fn alpha_from_quad(r: &RVec) -> CVec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CVec::from_iterator(r.len() / 2, (0..r.len() / 2).map(|k| C64::new(s * r[2 * k], s * r[2 * k + 1])))
}

/// Map from interleaved quadratures to (a_1..a_n, a_1^dag..a_n^dag).
pub fn ladder_map(n: usize) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut w = CMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        w[(k, 2 * k)] = C64::new(s, 0.0);
        w[(k, 2 * k + 1)] = C64::new(0.0, s);
        w[(n + k, 2 * k)] = C64::new(s, 0.0);
        w[(n + k, 2 * k + 1)] = C64::new(0.0, -s);
    }
    w
}

/// Split an interleaved symplectic matrix into its Bogoliubov pair: the
/// Heisenberg action a -> P a + Q a^dag.
pub fn bogoliubov(s: &RMat) -> (CMat, CMat) {
    let n = s.nrows() / 2;
    let mut p = CMat::zeros(n, n);
    let mut q = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let sqq = s[(2 * i, 2 * j)];
            let sqp = s[(2 * i, 2 * j + 1)];
            let spq = s[(2 * i + 1, 2 * j)];
            let spp = s[(2 * i + 1, 2 * j + 1)];
            p[(i, j)] = C64::new(0.5 * (sqq + spp), 0.5 * (spq - sqp));
            q[(i, j)] = C64::new(0.5 * (sqq - spp), 0.5 * (spq + sqp));
        }
    }
    (p, q)
}

/// Inverse of [`bogoliubov`].
pub fn symplectic_from_bogoliubov(p: &CMat, q: &CMat) -> RMat {
    let n = p.nrows();
    let mut s = RMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let (pp, qq) = (p[(i, j)], q[(i, j)]);
            s[(2 * i, 2 * j)] = pp.re + qq.re;
            s[(2 * i + 1, 2 * j + 1)] = pp.re - qq.re;
            s[(2 * i + 1, 2 * j)] = pp.im + qq.im;
            s[(2 * i, 2 * j + 1)] = qq.im - pp.im;
        }
    }
    s
}

pub fn select_rows_cols(m: &CMat, rows: &[usize], cols: &[usize]) -> CMat {
    CMat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub fn select(v: &CVec, idx: &[usize]) -> CVec {
    CVec::from_iterator(idx.len(), idx.iter().map(|&i| v[i]))
}

pub fn symmetrize(m: &CMat) -> CMat {
    (m + m.transpose()) * C64::new(0.5, 0.0)
}

pub fn symmetrize_real(m: &RMat) -> RMat {
    (m + m.transpose()) * 0.5
}

/// Indices of quadratures (2k, 2k+1) for the listed modes.
pub fn quad_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect()
}

pub fn sub_matrix(m: &RMat, rows: &[usize], cols: &[usize]) -> RMat {
    RMat::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub fn sub_vec(v: &RVec, idx: &[usize]) -> RVec {
    RVec::from_iterator(idx.len(), idx.iter().map(|&i| v[i]))
}
