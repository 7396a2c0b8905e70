use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("matrix is not symplectic (deviation {0:.3e})")]
    NotSymplectic(f64),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("inadmissible covariance or channel (min eigenvalue {0:.3e})")]
    Inadmissible(f64),
    #[error("{what} is ill-conditioned (condition number {cond:.3e})")]
    IllConditioned { what: &'static str, cond: f64 },
    #[error("{0} is singular")]
    Singular(&'static str),
    #[error("reference overlap too small ({0:.3e})")]
    ReferenceDegenerate(f64),
    #[error("Fock truncation leakage {0:.3e} exceeds tolerance")]
    Leakage(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors caused by bad user input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Dimension(_)
                | Error::Invalid(_)
                | Error::NotSymplectic(_)
                | Error::NotUnitary(_)
                | Error::Inadmissible(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
