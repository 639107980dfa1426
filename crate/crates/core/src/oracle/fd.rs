//! Five-point central differences with one Richardson step.

use num_complex::Complex64 as C64;

use crate::error::Result;

fn d1(f: &dyn Fn(f64) -> Result<C64>, t: f64, h: f64) -> Result<C64> {
    Ok((f(t - 2.0 * h)? - 8.0 * f(t - h)? + 8.0 * f(t + h)? - f(t + 2.0 * h)?) / (12.0 * h))
}

fn d2(f: &dyn Fn(f64) -> Result<C64>, t: f64, h: f64, centre: C64) -> Result<C64> {
    Ok(
        (-f(t - 2.0 * h)? + 16.0 * f(t - h)? - 30.0 * centre + 16.0 * f(t + h)? - f(t + 2.0 * h)?)
            / (12.0 * h * h),
    )
}

/// `f'(t)`: five-point stencil at `h` and `h/2`, combined by Richardson.
pub fn derivative1(f: &dyn Fn(f64) -> Result<C64>, t: f64, h: f64) -> Result<C64> {
    let coarse = d1(f, t, h)?;
    let fine = d1(f, t, 0.5 * h)?;
    Ok((16.0 * fine - coarse) / 15.0)
}

/// `f''(t)`, same scheme as [`derivative1`].
pub fn derivative2(f: &dyn Fn(f64) -> Result<C64>, t: f64, h: f64) -> Result<C64> {
    let centre = f(t)?;
    let coarse = d2(f, t, h, centre)?;
    let fine = d2(f, t, 0.5 * h, centre)?;
    Ok((16.0 * fine - coarse) / 15.0)
}

/// Step for a point `t` of `(lo, hi)`: one percent of the distance to the
/// nearer endpoint, capped at `1e-2`.
///
/// The solutions carry half-integer powers of the distance to the singular
/// endpoints, so their derivatives scale with that distance; a step
/// proportional to it keeps the truncation error uniform.
pub fn collar_step(t: f64, lo: f64, hi: f64) -> f64 {
    (1e-2 * (t - lo).min(hi - t)).min(1e-2)
}
