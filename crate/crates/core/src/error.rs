use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma function evaluated within 1e-12 of the pole near {0}")]
    GammaPole(Complex64),

    #[error("hypergeometric parameter c = {0} is a non-positive integer")]
    HypergeometricPole(Complex64),

    #[error("hypergeometric series did not converge after {terms} terms at z = {z}")]
    NonConvergence { terms: usize, z: f64 },

    #[error(
        "c - a - b = {0} is within 1e-8 of an integer; the z -> 1 - z connection is degenerate"
    )]
    DegenerateConnection(Complex64),

    #[error("{name} = {value} is outside the domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("asymptotic fit is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),

    #[error("asymptotic fit needs at least 2 samples at x >= {min_x}, got {got}")]
    InsufficientSamples { got: usize, min_x: f64 },

    #[error("integrator step size underflow at x = {x}")]
    StepUnderflow { x: f64 },

    #[error("integrator exceeded {0} steps")]
    TooManySteps(usize),

    #[error("samples are not at the same coordinate ({0} vs {1})")]
    CoordinateMismatch(f64, f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        domain,
    }
}
