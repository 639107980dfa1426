//! Gauss hypergeometric function ₂F₁(a, b; c; z) for complex parameters and
//! real `0 <= z < 1`.
//!
//! For `z <= 1/2` the Gauss series is summed directly. Above that the
//! `z -> 1 - z` connection formula rewrites the function as two series in
//! `1 - z`:
//!
//! ```text
//! F(a,b;c;z) = A F(a,b;a+b-c+1;1-z) + B (1-z)^(c-a-b) F(c-a,c-b;c-a-b+1;1-z)
//! A = Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b)),   B = Γ(c)Γ(a+b-c) / (Γ(a)Γ(b))
//! ```
//!
//! Up to `z = 0.9` the direct series is still cheap, and it is kept instead
//! of the connection formula whenever its terms cancel less.
//!
//! The connection is singular when `c - a - b` is an integer. That case is
//! reported as an error unless the caller opts into the slow direct series.

use num_complex::Complex64 as C64;

use super::gamma::{log_gamma, recip_gamma};
use crate::error::{domain, Error, Result};

/// Relative size of the last series term at which summation stops.
pub const SERIES_TOL: f64 = 1e-15;
/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 20_000;
/// Distance of `c - a - b` from an integer below which the connection
/// formula is refused.
pub const DEGENERATE_TOL: f64 = 1e-8;

const PARAM_POLE_TOL: f64 = 1e-12;
const SERIES_SWITCH: f64 = 0.5;
// Above this the connection formula is always used.
const SERIES_REACH: f64 = 0.9;

fn is_nonpositive_integer(c: C64, tol: f64) -> bool {
    let n = c.re.round();
    n <= 0.0 && (c - n).norm() < tol
}

fn near_integer(c: C64, tol: f64) -> bool {
    (c - c.re.round()).norm() < tol
}

/// Parameters of a ₂F₁. `c` is never a non-positive integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Params {
    a: C64,
    b: C64,
    c: C64,
}

impl Hyp2F1Params {
    pub fn new(a: C64, b: C64, c: C64) -> Result<Self> {
        if is_nonpositive_integer(c, PARAM_POLE_TOL) {
            return Err(Error::HypergeometricPole(c));
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    pub fn c(&self) -> C64 {
        self.c
    }

    /// `c - a - b`, the exponent that governs the behaviour at z = 1.
    pub fn excess(&self) -> C64 {
        self.c - self.a - self.b
    }

    /// Parameters and prefactor of the derivative:
    /// d/dz F(a,b;c;z) = (ab/c) F(a+1,b+1;c+1;z).
    pub fn derivative(&self) -> Result<(C64, Self)> {
        let p = Self::new(self.a + 1.0, self.b + 1.0, self.c + 1.0)?;
        Ok((self.a * self.b / self.c, p))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Hyp2F1Options {
    /// When `c - a - b` is (nearly) an integer and `z > 1/2`, sum the Gauss
    /// series directly instead of failing. Convergence is geometric in `z`
    /// and degrades towards `z = 1`; the term cap still applies.
    pub allow_degenerate_fallback: bool,
}

/// Coefficients of the `z -> 1 - z` connection formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerConnection {
    /// Multiplies `F(a, b; a+b-c+1; 1-z)`.
    pub regular: C64,
    /// Multiplies `(1-z)^(c-a-b) F(c-a, c-b; c-a-b+1; 1-z)`.
    pub singular: C64,
    pub regular_params: Hyp2F1Params,
    pub singular_params: Hyp2F1Params,
    /// `c - a - b`.
    pub exponent: C64,
}

/// Connection coefficients for `p`; fails in the degenerate case.
pub fn kummer_connection(p: &Hyp2F1Params) -> Result<KummerConnection> {
    let (a, b, c) = (p.a, p.b, p.c);
    let s = p.excess();
    if near_integer(s, DEGENERATE_TOL) {
        return Err(Error::DegenerateConnection(s));
    }
    let lg_c = log_gamma(c)?;
    let regular = (lg_c + log_gamma(s)?).exp() * recip_gamma(c - a) * recip_gamma(c - b);
    let singular = (lg_c + log_gamma(-s)?).exp() * recip_gamma(a) * recip_gamma(b);
    Ok(KummerConnection {
        regular,
        singular,
        regular_params: Hyp2F1Params::new(a, b, 1.0 - s)?,
        singular_params: Hyp2F1Params::new(c - a, c - b, s + 1.0)?,
        exponent: s,
    })
}

/// Gauss series together with `Σ|term|`, whose ratio to `|sum|` measures
/// the cancellation inside the sum.
fn sum_series_tracked(p: &Hyp2F1Params, z: f64, max_terms: usize) -> Result<(C64, f64)> {
    let mut sum = C64::new(1.0, 0.0);
    let mut mass = 1.0;
    if z == 0.0 {
        return Ok((sum, mass));
    }
    let mut term = C64::new(1.0, 0.0);
    let mut small_run = 0;
    for n in 0..max_terms {
        let k = n as f64;
        term *= (p.a + k) * (p.b + k) / ((p.c + k) * (k + 1.0)) * z;
        sum += term;
        let t = term.norm();
        mass += t;
        if t == 0.0 {
            return Ok((sum, mass));
        }
        if t <= SERIES_TOL * sum.norm() || t < 1e-300 {
            small_run += 1;
            if small_run == 2 {
                return Ok((sum, mass));
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        terms: max_terms,
        z,
    })
}

fn sum_series(p: &Hyp2F1Params, z: f64, max_terms: usize) -> Result<C64> {
    sum_series_tracked(p, z, max_terms).map(|(s, _)| s)
}

/// Raw Gauss series with no transformations, truncated at `max_terms`.
pub fn hyp2f1_series(p: &Hyp2F1Params, z: f64, max_terms: usize) -> Result<C64> {
    if !(0.0..1.0).contains(&z) {
        return Err(domain("z", z, "[0, 1)"));
    }
    sum_series(p, z, max_terms)
}

/// ₂F₁(a, b; c; z) for `0 <= z < 1`.
pub fn hyp2f1(p: &Hyp2F1Params, z: f64) -> Result<C64> {
    hyp2f1_with_options(p, z, Hyp2F1Options::default())
}

pub fn hyp2f1_with_options(p: &Hyp2F1Params, z: f64, opts: Hyp2F1Options) -> Result<C64> {
    if !(0.0..1.0).contains(&z) {
        return Err(domain("z", z, "[0, 1)"));
    }
    evaluate(p, z, 1.0 - z, opts)
}

/// ₂F₁ at `z` where the caller also supplies `1 - z` directly.
///
/// Near `z = 1` the complement cannot be recovered from `z` in floating
/// point, so solutions evaluated at large `x` (where `1 - z = e^{-x}`) pass it
/// in explicitly. The pair must satisfy `z + one_minus_z = 1` to rounding.
pub fn hyp2f1_complement(p: &Hyp2F1Params, z: f64, one_minus_z: f64) -> Result<C64> {
    if !(z >= 0.0 && one_minus_z > 0.0) {
        return Err(domain("z", z, "[0, 1)"));
    }
    if (z + one_minus_z - 1.0).abs() > 4.0 * f64::EPSILON {
        return Err(Error::Parameter(format!(
            "z = {z} and 1 - z = {one_minus_z} are inconsistent"
        )));
    }
    evaluate(p, z, one_minus_z, Hyp2F1Options::default())
}

/// ₂F₁ through the `z -> 1 - z` connection formula only, with `w = 1 - z`.
///
/// Exposed so the two evaluation paths can be compared against each other.
pub fn hyp2f1_via_connection(p: &Hyp2F1Params, z: f64, w: f64) -> Result<C64> {
    if !(z >= 0.0 && w > 0.0) || (z + w - 1.0).abs() > 4.0 * f64::EPSILON {
        return Err(domain("z", z, "[0, 1)"));
    }
    connection_tracked(&kummer_connection(p)?, w).map(|(v, _)| v)
}

/// Connection-formula value and `(|first| + |second|)`.
fn connection_tracked(conn: &KummerConnection, w: f64) -> Result<(C64, f64)> {
    let zero = C64::new(0.0, 0.0);
    let mut value = zero;
    let mut mass = 0.0;
    if conn.regular != zero {
        let t = conn.regular * sum_series(&conn.regular_params, w, MAX_SERIES_TERMS)?;
        value += t;
        mass += t.norm();
    }
    if conn.singular != zero {
        let power = (conn.exponent * w.ln()).exp();
        let t = conn.singular * power * sum_series(&conn.singular_params, w, MAX_SERIES_TERMS)?;
        value += t;
        mass += t.norm();
    }
    Ok((value, mass))
}

fn evaluate(p: &Hyp2F1Params, z: f64, w: f64, opts: Hyp2F1Options) -> Result<C64> {
    if z <= SERIES_SWITCH {
        return sum_series(p, z, MAX_SERIES_TERMS);
    }
    let conn = match kummer_connection(p) {
        Ok(conn) => conn,
        Err(Error::DegenerateConnection(_)) if opts.allow_degenerate_fallback => {
            return sum_series(p, z, MAX_SERIES_TERMS);
        }
        Err(e) => return Err(e),
    };
    let (value, mass) = connection_tracked(&conn, w)?;
    if z > SERIES_REACH {
        return Ok(value);
    }
    // Both paths are valid here; keep the one with less cancellation. The
    // connection coefficients carry the Gamma-function rounding, hence the
    // extra weight.
    match sum_series_tracked(p, z, MAX_SERIES_TERMS) {
        Ok((series, series_mass)) if series_mass * value.norm() < 4.0 * mass * series.norm() => {
            Ok(series)
        }
        _ => Ok(value),
    }
}
