//! Complex Gamma function via the Lanczos approximation (g = 7, 9 terms)
//! with the reflection formula for the left half-plane.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;

const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const POLE_TOL: f64 = 1e-12;

// 0.5 * ln(2 pi)
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

fn near_pole(z: C64) -> bool {
    let n = z.re.round();
    n <= 0.0 && (z - n).norm() < POLE_TOL
}

/// Lanczos partial-fraction sum and the shifted argument `t = z + g - 1/2`,
/// both for `Re z >= 1/2`.
fn lanczos_parts(z: C64) -> (C64, C64) {
    let z = z - 1.0;
    let mut sum = C64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    (sum, z + LANCZOS_G + 0.5)
}

fn gamma_unchecked(z: C64) -> C64 {
    if z.re < 0.5 {
        PI / ((PI * z).sin() * gamma_unchecked(1.0 - z))
    } else {
        let (sum, t) = lanczos_parts(z);
        let z = z - 1.0;
        ((z + 0.5) * t.ln() - t + HALF_LN_TWO_PI).exp() * sum
    }
}

/// Γ(z) for complex `z`.
///
/// Fails only when `z` lies within `1e-12` of a non-positive integer.
pub fn gamma(z: C64) -> Result<C64> {
    if near_pole(z) {
        return Err(Error::GammaPole(z));
    }
    Ok(gamma_unchecked(z))
}

/// 1/Γ(z), which is entire; returns exactly zero at the poles of Γ.
pub(crate) fn recip_gamma(z: C64) -> C64 {
    if near_pole(z) {
        C64::new(0.0, 0.0)
    } else {
        1.0 / gamma_unchecked(z)
    }
}

/// ln sin(w) without overflowing for large |Im w|.
fn ln_sin(w: C64) -> C64 {
    let i = C64::i();
    if w.im.abs() < 20.0 {
        w.sin().ln()
    } else if w.im > 0.0 {
        // sin w = e^{-iw} (1 - e^{2iw}) / (-2i)
        -i * w + (1.0 - (2.0 * i * w).exp()).ln() - C64::new(0.0, -2.0).ln()
    } else {
        // sin w = e^{iw} (1 - e^{-2iw}) / (2i)
        i * w + (1.0 - (-2.0 * i * w).exp()).ln() - C64::new(0.0, 2.0).ln()
    }
}

fn log_gamma_unchecked(z: C64) -> C64 {
    if z.re < 0.5 {
        C64::new(PI.ln(), 0.0) - ln_sin(PI * z) - log_gamma_unchecked(1.0 - z)
    } else {
        let (sum, t) = lanczos_parts(z);
        let z = z - 1.0;
        (z + 0.5) * t.ln() - t + HALF_LN_TWO_PI + sum.ln()
    }
}

fn principal(z: C64) -> C64 {
    let two_pi = 2.0 * PI;
    let mut im = z.im - two_pi * (z.im / two_pi).round();
    if im <= -PI {
        im += two_pi;
    } else if im > PI {
        im -= two_pi;
    }
    C64::new(z.re, im)
}

/// Principal-branch logarithm of Γ(z): the real part is ln|Γ(z)| and the
/// imaginary part is arg Γ(z) reduced to (-π, π].
pub fn log_gamma(z: C64) -> Result<C64> {
    if near_pole(z) {
        return Err(Error::GammaPole(z));
    }
    Ok(principal(log_gamma_unchecked(z)))
}
