//! Exponential-type partner potentials on the half line.
//!
//! The superpotential `W(x) = -m / sqrt(e^x - 1)` generates the partner pair
//!
//! ```text
//! V±(x, m) = m² / (e^x - 1) ± (m/2) e^x / (e^x - 1)^{3/2},   x > 0
//! ```
//!
//! whose Schrödinger equations are solved exactly by sums of two Gauss
//! hypergeometric functions. This crate evaluates the potentials, the exact
//! solutions and the scattering amplitudes, and ships an independent set of
//! numerical checks (finite differences, an adaptive Runge-Kutta integrator)
//! that certify every closed form without going through ₂F₁.
//!
//! Modules:
//! - [`special_fn`]: complex Γ, log Γ and ₂F₁.
//! - [`potentials`]: `W`, `V±`, landmarks and alternative forms.
//! - [`solutions`]: spectral parameters and the exact solution families.
//! - [`scattering`]: physical solution, amplitudes and the asymptotic fit.
//! - [`oracle`]: residuals, integrator, Wronskians.
//! - [`verify`]: the verification suite behind `ces verify`.
//! - [`cli`]: tabular output shared by the `ces` binary.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod error;
pub mod oracle;
pub mod potentials;
pub mod scattering;
pub mod solutions;
pub mod special_fn;
pub mod verify;

pub use error::{Error, Result};
pub use potentials::{PotentialLandmarks, PotentialSpec, Sign};
pub use scattering::ScatteringResult;
pub use solutions::{Branch, Coordinate, Point, SolutionSample, SpectralParams};
pub use special_fn::ComplexValue;
