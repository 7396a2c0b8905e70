//! Elementary Gaussian gates with fixed operator phases.
//!
//! Every gate denotes a definite Hilbert-space operator: D(alpha) is the usual
//! displacement, S(r e^{i phi}) = exp((conj(xi) a^2 - xi a^dag^2)/2), the phase
//! gate is exp(i theta n), and passive gates map a -> U a with vacuum kept
//! fixed. A general symplectic gate is the operator with positive vacuum
//! amplitude, followed by its displacement.

use crate::error::{Error, Result};
use crate::gaussian::{check_symplectic, passive_from_unitary};
use crate::linalg::*;

/// A Gaussian unitary e^{i phase} D(d) U_S, with <0|U_S|0> > 0.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussOp {
    pub s: RMat,
    pub d: RVec,
    pub phase: f64,
}

impl GaussOp {
    pub fn identity(n: usize) -> Self {
        Self { s: RMat::identity(2 * n, 2 * n), d: RVec::zeros(2 * n), phase: 0.0 }
    }

    pub fn new(s: RMat, d: RVec) -> Result<Self> {
        check_symplectic(&s)?;
        if d.len() != s.nrows() {
            return Err(Error::Dimension("displacement length must match the symplectic matrix".into()));
        }
        Ok(Self { s, d, phase: 0.0 })
    }

    pub fn modes(&self) -> usize {
        self.d.len() / 2
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Displace { mode: usize, alpha: C64 },
    Squeeze { mode: usize, r: f64, phi: f64 },
    Phase { mode: usize, theta: f64 },
    BeamSplitter { m1: usize, m2: usize, theta: f64, phi: f64 },
    /// Passive unitary on the listed modes.
    Passive { modes: Vec<usize>, u: CMat },
    /// Symplectic matrix and displacement on the whole register.
    Symplectic { s: RMat, d: RVec },
    GlobalPhase { theta: f64 },
}

pub fn beamsplitter_unitary(theta: f64, phi: f64) -> CMat {
    let (ct, st) = (theta.cos(), theta.sin());
    CMat::from_row_slice(
        2,
        2,
        &[c(ct, 0.0), -C64::from_polar(st, -phi), C64::from_polar(st, phi), c(ct, 0.0)],
    )
}

fn embed_unitary(n: usize, modes: &[usize], u: &CMat) -> CMat {
    let mut full = CMat::identity(n, n);
    for (i, &mi) in modes.iter().enumerate() {
        for (j, &mj) in modes.iter().enumerate() {
            full[(mi, mj)] = u[(i, j)];
        }
    }
    full
}

impl Gate {
    pub fn modes_used(&self) -> Vec<usize> {
        match self {
            Gate::Displace { mode, .. } | Gate::Squeeze { mode, .. } | Gate::Phase { mode, .. } => vec![*mode],
            Gate::BeamSplitter { m1, m2, .. } => vec![*m1, *m2],
            Gate::Passive { modes, .. } => modes.clone(),
            Gate::Symplectic { .. } | Gate::GlobalPhase { .. } => vec![],
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let used = self.modes_used();
        for (i, &m) in used.iter().enumerate() {
            if m >= n {
                return Err(Error::Invalid(format!("gate acts on mode {m} but the register has {n} modes")));
            }
            if used[..i].contains(&m) {
                return Err(Error::Invalid(format!("gate uses mode {m} twice")));
            }
        }
        match self {
            Gate::Squeeze { r, .. } if !r.is_finite() => Err(Error::Invalid("squeezing must be finite".into())),
            Gate::Passive { modes, u } => {
                if u.nrows() != modes.len() || u.ncols() != modes.len() {
                    return Err(Error::Dimension("passive unitary size must match its modes".into()));
                }
                passive_from_unitary(u).map(|_| ())
            }
            Gate::Symplectic { s, d } => {
                if s.nrows() != 2 * n || d.len() != 2 * n {
                    return Err(Error::Dimension("symplectic gate must act on the whole register".into()));
                }
                check_symplectic(s)
            }
            _ => Ok(()),
        }
    }

    /// Full-register symplectic matrix of the gate.
    pub fn symplectic(&self, n: usize) -> RMat {
        match self {
            Gate::Displace { .. } | Gate::GlobalPhase { .. } => RMat::identity(2 * n, 2 * n),
            Gate::Squeeze { mode, r, phi } => {
                let mut p = CMat::identity(n, n);
                let mut q = CMat::zeros(n, n);
                p[(*mode, *mode)] = c(r.cosh(), 0.0);
                q[(*mode, *mode)] = -C64::from_polar(r.sinh(), *phi);
                symplectic_from_bogoliubov(&p, &q)
            }
            Gate::Phase { mode, theta } => {
                let u = embed_unitary(n, &[*mode], &CMat::from_element(1, 1, C64::from_polar(1.0, *theta)));
                symplectic_from_bogoliubov(&u, &CMat::zeros(n, n))
            }
            Gate::BeamSplitter { m1, m2, theta, phi } => {
                let u = embed_unitary(n, &[*m1, *m2], &beamsplitter_unitary(*theta, *phi));
                symplectic_from_bogoliubov(&u, &CMat::zeros(n, n))
            }
            Gate::Passive { modes, u } => {
                let u = embed_unitary(n, modes, u);
                symplectic_from_bogoliubov(&u, &CMat::zeros(n, n))
            }
            Gate::Symplectic { s, .. } => s.clone(),
        }
    }

    pub fn op(&self, n: usize) -> GaussOp {
        let s = self.symplectic(n);
        let mut d = RVec::zeros(2 * n);
        let mut phase = 0.0;
        match self {
            Gate::Displace { mode, alpha } => {
                d[2 * mode] = std::f64::consts::SQRT_2 * alpha.re;
                d[2 * mode + 1] = std::f64::consts::SQRT_2 * alpha.im;
            }
            Gate::Symplectic { d: dd, .. } => d = dd.clone(),
            Gate::GlobalPhase { theta } => phase = *theta,
            _ => {}
        }
        GaussOp { s, d, phase }
    }

    /// The same gate acting inside a register where this register starts at
    /// mode `offset` and the total size is `n_total`.
    pub fn embedded(&self, offset: usize, n_local: usize, n_total: usize) -> Gate {
        match self {
            Gate::Displace { mode, alpha } => Gate::Displace { mode: mode + offset, alpha: *alpha },
            Gate::Squeeze { mode, r, phi } => Gate::Squeeze { mode: mode + offset, r: *r, phi: *phi },
            Gate::Phase { mode, theta } => Gate::Phase { mode: mode + offset, theta: *theta },
            Gate::BeamSplitter { m1, m2, theta, phi } => {
                Gate::BeamSplitter { m1: m1 + offset, m2: m2 + offset, theta: *theta, phi: *phi }
            }
            Gate::Passive { modes, u } => Gate::Passive { modes: modes.iter().map(|m| m + offset).collect(), u: u.clone() },
            Gate::Symplectic { s, d } => {
                let mut big = RMat::identity(2 * n_total, 2 * n_total);
                big.view_mut((2 * offset, 2 * offset), (2 * n_local, 2 * n_local)).copy_from(s);
                let mut dd = RVec::zeros(2 * n_total);
                dd.rows_mut(2 * offset, 2 * n_local).copy_from(d);
                Gate::Symplectic { s: big, d: dd }
            }
            Gate::GlobalPhase { theta } => Gate::GlobalPhase { theta: *theta },
        }
    }
}

/// Two-mode squeezer: a 50:50 beam splitter after opposite single-mode squeezers.
pub fn two_mode_squeezer(r: f64) -> RMat {
    let g = [
        Gate::Squeeze { mode: 0, r, phi: 0.0 },
        Gate::Squeeze { mode: 1, r, phi: std::f64::consts::PI },
        Gate::BeamSplitter { m1: 0, m2: 1, theta: std::f64::consts::FRAC_PI_4, phi: 0.0 },
    ];
    g.iter().fold(RMat::identity(4, 4), |acc, gate| gate.symplectic(2) * acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::symplectic_defect;

    #[test]
    fn gates_are_symplectic() {
        let gs = [
            Gate::Squeeze { mode: 1, r: 0.7, phi: 1.3 },
            Gate::Phase { mode: 0, theta: 0.4 },
            Gate::BeamSplitter { m1: 1, m2: 0, theta: 0.3, phi: -0.8 },
        ];
        for g in gs {
            assert!(symplectic_defect(&g.symplectic(2)) < 1e-14);
        }
        assert!(symplectic_defect(&two_mode_squeezer(0.9)) < 1e-13);
    }

    #[test]
    fn squeezer_shrinks_q_for_real_argument() {
        let s = Gate::Squeeze { mode: 0, r: 0.5, phi: 0.0 }.symplectic(1);
        assert!((s[(0, 0)] - (-0.5f64).exp()).abs() < 1e-15);
        assert!((s[(1, 1)] - 0.5f64.exp()).abs() < 1e-15);
    }
}
