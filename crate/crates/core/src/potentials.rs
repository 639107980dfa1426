//! Superpotential, partner potentials and their qualitative landmarks.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// Selects `V+` or `V-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            other => Err(Error::Parameter(format!("unknown sign '{other}'"))),
        }
    }
}

/// One member of the partner pair: coupling `m` and branch sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    m: f64,
    sign: Sign,
}

impl PotentialSpec {
    pub fn new(m: f64, sign: Sign) -> Result<Self> {
        if m == 0.0 || !m.is_finite() {
            return Err(Error::Parameter(format!(
                "coupling m must be finite and nonzero, got {m}"
            )));
        }
        Ok(Self { m, sign })
    }

    pub fn plus(m: f64) -> Result<Self> {
        Self::new(m, Sign::Plus)
    }

    pub fn minus(m: f64) -> Result<Self> {
        Self::new(m, Sign::Minus)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// The other member of the pair at the same coupling.
    pub fn partner(&self) -> Self {
        Self {
            m: self.m,
            sign: self.sign.flip(),
        }
    }
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 {
        Ok(())
    } else {
        Err(domain("x", x, "(0, inf)"))
    }
}

/// `W(x) = -m / sqrt(e^x - 1)`.
pub fn superpotential(x: f64, m: f64) -> Result<f64> {
    check_x(x)?;
    Ok(-m / x.exp_m1().sqrt())
}

pub(crate) fn potential_unchecked(x: f64, m: f64, sign: Sign) -> f64 {
    let d = x.exp_m1();
    // e^x / (e^x - 1)^{3/2} = (1 + d) / (d sqrt d)
    m * m / d + sign.factor() * 0.5 * m * (1.0 + d) / (d * d.sqrt())
}

/// `V±(x, m) = m²/(e^x - 1) ± (m/2) e^x/(e^x - 1)^{3/2}`.
pub fn potential(x: f64, spec: PotentialSpec) -> Result<f64> {
    check_x(x)?;
    Ok(potential_unchecked(x, spec.m, spec.sign))
}

/// The potential in `z = e^{-x}`:
/// `m² z/(1-z) ± (m/2) z^{1/2}/(1-z)^{3/2}`.
pub fn potential_z(z: f64, spec: PotentialSpec) -> Result<f64> {
    if !(z > 0.0 && z < 1.0) {
        return Err(domain("z", z, "(0, 1)"));
    }
    let m = spec.m;
    let w = 1.0 - z;
    Ok(m * m * z / w + spec.sign.factor() * 0.5 * m * z.sqrt() / (w * w.sqrt()))
}

/// Zero crossings and critical points of `V-`, in the variable `s = e^x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialLandmarks {
    /// `(s_minus, s_plus)` where `V-` changes sign; present for `m >= 1`.
    pub zero_crossings: Option<(f64, f64)>,
    /// `(s2, s1)`: local maximum and local minimum of `V-`; present for
    /// `m >= sqrt(3)/2`.
    pub critical_points: Option<(f64, f64)>,
}

const THRESHOLD_CLAMP: f64 = 1e-14;

fn clamped_sqrt(disc: f64) -> Option<f64> {
    if disc >= 0.0 {
        Some(disc.sqrt())
    } else if disc > -THRESHOLD_CLAMP {
        Some(0.0)
    } else {
        None
    }
}

/// Landmarks of `V-` for a positive coupling.
///
/// `s± = 2m² ± 2m sqrt(m² - 1)` and `s1,2 = 8m² - 2 ± 4m sqrt(4m² - 3)`.
/// Pairs are coincident at the thresholds `m = 1` and `m = sqrt(3)/2`.
pub fn landmarks(m: f64) -> Result<PotentialLandmarks> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::Parameter(format!("landmarks need m > 0, got {m}")));
    }
    let m2 = m * m;
    let zero_crossings = clamped_sqrt(m2 - 1.0).map(|r| {
        let centre = 2.0 * m2;
        let half = 2.0 * m * r;
        (centre - half, centre + half)
    });
    let critical_points = clamped_sqrt(4.0 * m2 - 3.0).map(|r| {
        let centre = 8.0 * m2 - 2.0;
        let half = 4.0 * m * r;
        (centre - half, centre + half)
    });
    Ok(PotentialLandmarks {
        zero_crossings,
        critical_points,
    })
}

/// The partner potentials written with hyperbolic functions, `μ = m/√2`:
/// `μ²(coth(x/2) - 1) ± (μ/4)(1 + coth(x/2))^{1/2} / sinh(x/2)`.
pub fn hyperbolic_form(x: f64, spec: PotentialSpec) -> Result<f64> {
    check_x(x)?;
    let mu = spec.m / std::f64::consts::SQRT_2;
    let y = 0.5 * x;
    let sh = y.sinh();
    // coth y - 1 = e^{-y}/sinh y and 1 + coth y = e^{y}/sinh y, which avoid
    // the cancellation in coth y - 1 at large y.
    let coth_minus_one = (-y).exp() / sh;
    let coth_plus_one = y.exp() / sh;
    Ok(mu * mu * coth_minus_one + spec.sign.factor() * 0.25 * mu * coth_plus_one.sqrt() / sh)
}

/// Leading and subleading small-`x` behaviour, `m²/x ± m/(2 x^{3/2})`.
pub fn near_zero_asymptote(x: f64, spec: PotentialSpec) -> Result<f64> {
    check_x(x)?;
    let m = spec.m;
    Ok(m * m / x + spec.sign.factor() * 0.5 * m / (x * x.sqrt()))
}

/// Hulthén potential `Q / (e^x - 1)`.
pub fn hulthen(x: f64, q: f64) -> Result<f64> {
    check_x(x)?;
    Ok(q / x.exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn superpotential_values() {
        assert!(close(superpotential(LN_2, 1.0).unwrap(), -1.0, 1e-15));
        assert!(close(superpotential(LN_2, -1.0).unwrap(), 1.0, 1e-15));
        // direct arithmetic: -1 / sqrt(e^5 - 1)
        let expected = -1.0 / (5f64.exp() - 1.0).sqrt();
        assert!(close(superpotential(5.0, 1.0).unwrap(), expected, 1e-14));
        assert!(superpotential(0.0, 1.0).is_err());
        assert!(superpotential(-1.0, 1.0).is_err());
    }

    #[test]
    fn potential_values() {
        let plus = PotentialSpec::plus(1.0).unwrap();
        let minus = PotentialSpec::minus(1.0).unwrap();
        assert!(close(potential(LN_2, plus).unwrap(), 2.0, 1e-14));
        assert!(potential(LN_2, minus).unwrap().abs() < 1e-15);
        let flipped = PotentialSpec::minus(-1.0).unwrap();
        assert!(close(potential(LN_2, flipped).unwrap(), 2.0, 1e-14));
        assert!(potential(0.0, plus).is_err());
    }

    #[test]
    fn zero_coupling_rejected() {
        assert!(PotentialSpec::plus(0.0).is_err());
        assert!(PotentialSpec::minus(f64::NAN).is_err());
    }

    #[test]
    fn z_form_matches_x_form() {
        let plus = PotentialSpec::plus(1.0).unwrap();
        assert!(close(potential_z(0.5, plus).unwrap(), 2.0, 1e-14));
        let z = (-5.0f64).exp();
        assert!(close(
            potential_z(z, plus).unwrap(),
            potential(5.0, plus).unwrap(),
            1e-13
        ));
        // (1-z)^{3/2} blow-up at the origin of x
        let a = potential_z(1.0 - 1e-6, plus).unwrap();
        let b = potential_z(1.0 - 1e-8, plus).unwrap();
        assert!(close(b / a, 1e3, 5e-3));
        assert!(potential_z(1.0, plus).is_err());
        assert!(potential_z(0.0, plus).is_err());
    }

    #[test]
    fn landmark_values() {
        let l = landmarks(2.0).unwrap();
        let (sm, sp) = l.zero_crossings.unwrap();
        let r3 = 3f64.sqrt();
        assert!(close(sm, 8.0 - 4.0 * r3, 1e-14));
        assert!(close(sp, 8.0 + 4.0 * r3, 1e-14));

        let l = landmarks(1.0).unwrap();
        assert_eq!(l.zero_crossings, Some((2.0, 2.0)));
        assert_eq!(l.critical_points, Some((2.0, 10.0)));

        let l = landmarks(0.5).unwrap();
        assert!(l.zero_crossings.is_none() && l.critical_points.is_none());

        let l = landmarks(3f64.sqrt() / 2.0).unwrap();
        let (s2, s1) = l.critical_points.unwrap();
        assert!(close(s2, s1, 1e-12));
        assert!(l.zero_crossings.is_none());

        assert!(landmarks(0.0).is_err());
    }

    #[test]
    fn hyperbolic_matches() {
        let plus = PotentialSpec::plus(1.0).unwrap();
        assert!(close(hyperbolic_form(LN_2, plus).unwrap(), 2.0, 1e-14));
        let minus = PotentialSpec::minus(1.5).unwrap();
        assert!(close(
            hyperbolic_form(3.0, minus).unwrap(),
            potential(3.0, minus).unwrap(),
            1e-13
        ));
        assert!(close(
            hyperbolic_form(0.01, plus).unwrap(),
            potential(0.01, plus).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn asymptote_and_hulthen() {
        let plus = PotentialSpec::plus(1.0).unwrap();
        assert!(close(near_zero_asymptote(1.0, plus).unwrap(), 1.5, 1e-15));
        let x = 1e-4;
        let r = potential(x, plus).unwrap() / near_zero_asymptote(x, plus).unwrap();
        assert!((r - 1.0).abs() < 1e-2);
        let minus = PotentialSpec::minus(2.0).unwrap();
        let x = 1e-6;
        let r = potential(x, minus).unwrap() / near_zero_asymptote(x, minus).unwrap();
        assert!((r - 1.0).abs() < 1e-3);

        assert!(close(hulthen(LN_2, 1.0).unwrap(), 1.0, 1e-15));
        assert!(close(1e-4 * hulthen(1e-4, 1.0).unwrap(), 1.0, 1e-4));
        assert!(hulthen(40.0, 1.0).unwrap() < 1e-17);
    }

    #[test]
    fn sign_parsing() {
        assert_eq!("plus".parse::<Sign>().unwrap(), Sign::Plus);
        assert_eq!("-".parse::<Sign>().unwrap(), Sign::Minus);
        assert!("up".parse::<Sign>().is_err());
    }
}
