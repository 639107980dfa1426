//! Numerical checks that certify the closed forms without using ₂F₁.
//!
//! Everything here sees solutions only as black-box closures or samples:
//! derivatives come from finite differences and reference solutions from an
//! adaptive Runge-Kutta integrator.

mod checks;
mod fd;
mod ode;

use std::fmt;

use crate::error::{Error, Result};

pub use checks::{
    appendix_check, appendix_check_from, coupled_residual, integrate_radial, integrate_radial_with,
    ode_residual_z, ode_residual_z_sampled, residual_z_at, residual_z_sampled_at, sample_fd,
    schrodinger_residual_x, wronskian_numeric, ZFunction, ZSampler, APPENDIX_TOL, COLLAR, MIN_X,
    Z_RESIDUAL_TOL,
};
pub use fd::{collar_step, derivative1, derivative2};
pub use ode::{Dopri5, DEFAULT_ATOL, DEFAULT_RTOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spacing {
    Uniform,
    Log,
}

/// Sample positions `start..=end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    start: f64,
    end: f64,
    points: usize,
    spacing: Spacing,
}

impl GridSpec {
    pub fn new(start: f64, end: f64, points: usize, spacing: Spacing) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() || !(start < end) {
            return Err(Error::Grid(format!("need start < end, got {start}:{end}")));
        }
        if points < 3 {
            return Err(Error::Grid(format!("need at least 3 points, got {points}")));
        }
        if spacing == Spacing::Log && !(start > 0.0) {
            return Err(Error::Grid(format!(
                "log spacing needs start > 0, got {start}"
            )));
        }
        Ok(Self {
            start,
            end,
            points,
            spacing,
        })
    }

    pub fn uniform(start: f64, end: f64, points: usize) -> Result<Self> {
        Self::new(start, end, points, Spacing::Uniform)
    }

    /// Parse `start:end:count`.
    pub fn parse(text: &str, spacing: Spacing) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Grid(format!(
                "expected start:end:count, got '{text}'"
            )));
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Grid(format!("'{s}' is not a number")))
        };
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Grid(format!("'{}' is not a point count", parts[2])))?;
        Self::new(num(parts[0])?, num(parts[1])?, count, spacing)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.points - 1;
        let mut out: Vec<f64> = (0..=n)
            .map(|i| {
                let t = i as f64 / n as f64;
                match self.spacing {
                    Spacing::Uniform => self.start + t * (self.end - self.start),
                    Spacing::Log => self.start * (self.end / self.start).powf(t),
                }
            })
            .collect();
        out[n] = self.end;
        out
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub samples: usize,
    /// Set when the check ran on the zero solution and is vacuous.
    pub degenerate: bool,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, max_residual: f64, tolerance: f64, samples: usize) -> Self {
        Self {
            name: name.into(),
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
            samples,
            degenerate: false,
        }
    }

    /// A check that could not be carried out.
    pub fn failed(name: impl Into<String>, tolerance: f64) -> Self {
        Self::new(name, f64::INFINITY, tolerance, 0)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = self.max_residual <= tolerance;
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: max residual {:.3e} (tolerance {:.1e}, {} samples)",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.max_residual,
            self.tolerance,
            self.samples
        )?;
        if self.degenerate {
            f.write_str(" [degenerate]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = GridSpec::uniform(0.0, 1.0, 5).unwrap();
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = GridSpec::new(1e-3, 10.0, 5, Spacing::Log).unwrap();
        let p = g.points();
        assert!((p[1] / p[0] - 10.0).abs() < 1e-12);
        assert_eq!(p[4], 10.0);
        assert!(GridSpec::uniform(1.0, 1.0, 5).is_err());
        assert!(GridSpec::uniform(0.0, 1.0, 2).is_err());
        assert!(GridSpec::new(0.0, 1.0, 5, Spacing::Log).is_err());
    }

    #[test]
    fn grid_parsing() {
        let g = GridSpec::parse("0.1:6:200", Spacing::Uniform).unwrap();
        assert_eq!((g.start(), g.end(), g.len()), (0.1, 6.0, 200));
        assert!(GridSpec::parse("0.1:6", Spacing::Uniform).is_err());
        assert!(GridSpec::parse("a:6:3", Spacing::Uniform).is_err());
        assert!(GridSpec::parse("0:1:x", Spacing::Uniform).is_err());
    }

    #[test]
    fn report_verdicts() {
        assert!(VerificationReport::new("a", 1e-9, 1e-8, 3).passed);
        assert!(!VerificationReport::new("a", 1e-7, 1e-8, 3).passed);
        assert!(!VerificationReport::new("a", f64::NAN, 1e-8, 3).passed);
        assert!(!VerificationReport::failed("a", 1.0).passed);
        assert!(
            VerificationReport::new("a", 1e-7, 1e-8, 3)
                .with_tolerance(1e-6)
                .passed
        );
        let text = VerificationReport::new("wronskian", 0.0, 1e-8, 5).to_string();
        assert!(text.starts_with("PASS wronskian"));
    }
}
