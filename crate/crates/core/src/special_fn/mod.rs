//! Complex Gamma and Gauss hypergeometric functions.
//!
//! Everything here is double precision and works on [`ComplexValue`]. The
//! hypergeometric routines only cover real arguments in `[0, 1)`, which is
//! all the solutions of the exponential partner potentials ever need.

mod gamma;
mod hyp2f1;

pub use gamma::{gamma, log_gamma};
pub use hyp2f1::{
    hyp2f1, hyp2f1_complement, hyp2f1_series, hyp2f1_via_connection, hyp2f1_with_options,
    kummer_connection, Hyp2F1Options, Hyp2F1Params, KummerConnection, DEGENERATE_TOL,
    MAX_SERIES_TERMS, SERIES_TOL,
};

/// The scalar used throughout the crate.
pub type ComplexValue = num_complex::Complex64;
