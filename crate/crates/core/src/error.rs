use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is out of range (expected {expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("matrix is not a valid covariance matrix: {0}")]
    Shape(String),

    #[error("covariance matrix is not symmetric (max |V - V^T| = {0:e})")]
    NotSymmetric(f64),

    #[error("unphysical covariance matrix: symplectic eigenvalue {0} is below 1")]
    Unphysical(f64),

    #[error("measured quadrature variance {0:e} is too small to condition on")]
    Singular(f64),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("no sign change of the rate on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("rate is still positive at W = {0:e}; threshold is unbounded")]
    Unbounded(f64),
}

pub(crate) fn ensure(
    ok: bool,
    name: &'static str,
    value: f64,
    expected: &'static str,
) -> Result<()> {
    if ok && !value.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            expected,
        })
    }
}

pub(crate) fn check_transmission(t: f64) -> Result<()> {
    ensure(t > 0.0 && t < 1.0, "T", t, "0 < T < 1")
}

pub(crate) fn check_variance(name: &'static str, v: f64) -> Result<()> {
    ensure(
        v >= 1.0 && v.is_finite(),
        name,
        v,
        ">= 1 (shot-noise units)",
    )
}
