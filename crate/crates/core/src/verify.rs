//! The verification suite run by `ces verify`.
//!
//! Each check yields one [`VerificationReport`]. Solutions enter the oracle
//! only as closures of one real variable, so ₂F₁ is never used to certify
//! itself.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::{
    self, appendix_check, coupled_residual, derivative1, integrate_radial, ode_residual_z_sampled,
    sample_fd, wronskian_numeric, GridSpec, VerificationReport,
};
use crate::potentials::{self, landmarks, PotentialSpec, Sign};
use crate::scattering::{
    self, asymptotic_fit, physical_solution_sum, scattering_amplitude_minus,
    scattering_amplitude_minus_closed_form, scattering_amplitude_plus,
};
use crate::solutions::{
    make_params, rtilde_pair_sums, solution_v_sum, solution_z_sum, wronskian_closed,
    zero_energy_from_pair, zero_energy_hypergeometric, zero_energy_state, Branch, Coordinate,
    Point, SpectralParams, ZeroEnergy,
};
use crate::special_fn::{
    gamma, hyp2f1, hyp2f1_series, hyp2f1_via_connection, Hyp2F1Params, MAX_SERIES_TERMS,
};

/// Environment variable overriding the z-equation residual tolerance.
pub const SOLVER_TOL_ENV: &str = "CES_SOLVER_TOL";

const I: C64 = C64 { re: 0.0, im: 1.0 };
const BRANCHES: [Branch; 2] = [Branch::I, Branch::II];
const SIGNS: [Sign; 2] = [Sign::Plus, Sign::Minus];
const WRONSKIAN_XS: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Strictness {
    #[default]
    Strict,
    /// Every tolerance multiplied by 100.
    Loose,
}

impl Strictness {
    pub fn factor(self) -> f64 {
        match self {
            Strictness::Strict => 1.0,
            Strictness::Loose => 100.0,
        }
    }
}

impl fmt::Display for Strictness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strictness::Strict => "strict",
            Strictness::Loose => "loose",
        })
    }
}

impl FromStr for Strictness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Strictness::Strict),
            "loose" => Ok(Strictness::Loose),
            other => Err(Error::Parameter(format!("unknown strictness '{other}'"))),
        }
    }
}

/// What to verify and how strictly.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub omegas: Vec<f64>,
    pub ms: Vec<f64>,
    pub strictness: Strictness,
    /// Overrides the z-equation residual tolerance.
    pub solver_tol: Option<f64>,
    /// Shifts `c1` in every solution check; a correct suite then fails.
    pub fault: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            omegas: vec![0.5, 1.0, 2.0],
            ms: vec![0.5, 1.0, 2.0],
            strictness: Strictness::Strict,
            solver_tol: None,
            fault: None,
        }
    }
}

impl VerifyConfig {
    /// Default configuration with the tolerance override read from
    /// [`SOLVER_TOL_ENV`].
    pub fn from_env() -> Result<Self> {
        let mut cfg = Self::default();
        if let Ok(text) = std::env::var(SOLVER_TOL_ENV) {
            let tol: f64 = text.trim().parse().map_err(|_| {
                Error::Parameter(format!("{SOLVER_TOL_ENV}='{text}' is not a number"))
            })?;
            if !(tol > 0.0) {
                return Err(Error::Parameter(format!(
                    "{SOLVER_TOL_ENV} must be positive"
                )));
            }
            cfg.solver_tol = Some(tol);
        }
        Ok(cfg)
    }

    fn tol(&self, base: f64) -> f64 {
        base * self.strictness.factor()
    }

    fn residual_tol(&self) -> f64 {
        self.tol(self.solver_tol.unwrap_or(oracle::Z_RESIDUAL_TOL))
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Turn a fallible check into a report; errors become failures.
fn guarded(
    name: String,
    tol: f64,
    run: impl FnOnce() -> Result<(f64, usize)>,
) -> VerificationReport {
    match run() {
        Ok((residual, samples)) => VerificationReport::new(name, residual, tol, samples),
        Err(e) => VerificationReport::failed(format!("{name} [error: {e}]"), tol),
    }
}

fn z_grid() -> GridSpec {
    GridSpec::uniform(0.05, 0.95, 100).expect("static grid")
}

fn tag(p: &SpectralParams) -> String {
    format!("omega={} m={}", p.omega(), p.m())
}

/// Residuals of the z- and v-family solutions and of the physical solution.
pub fn solution_checks(p: &SpectralParams, cfg: &VerifyConfig) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let tol = cfg.residual_tol();
    let grid = z_grid();
    for branch in BRANCHES {
        for sign in SIGNS {
            let spec = PotentialSpec::new(p.m(), sign).expect("m validated");
            for (family, sum) in [
                ("Z", solution_z_sum(branch, sign, p)),
                ("v-family Z", solution_v_sum(branch, sign, p)),
            ] {
                let name = format!("{family}{branch} {sign} solves the z-equation ({})", tag(p));
                out.push(match sum {
                    Ok(sum) => {
                        let f = |z: f64| sum.value_and_dz(Point::from_z(z)?);
                        match ode_residual_z_sampled(&f, spec, p.omega(), &grid) {
                            Ok(r) => VerificationReport { name, ..r }.with_tolerance(tol),
                            Err(e) => {
                                VerificationReport::failed(format!("{name} [error: {e}]"), tol)
                            }
                        }
                    }
                    Err(e) => VerificationReport::failed(format!("{name} [error: {e}]"), tol),
                });
            }
        }
    }
    for sign in SIGNS {
        let spec = PotentialSpec::new(p.m(), sign).expect("m validated");
        let name = format!(
            "physical solution {sign} solves the z-equation ({})",
            tag(p)
        );
        out.push(guarded(name, tol, || {
            let sum = physical_solution_sum(sign, p)?;
            let f = |z: f64| sum.value_and_dz(Point::from_z(z)?);
            let r = ode_residual_z_sampled(&f, spec, p.omega(), &grid)?;
            Ok((r.max_residual, r.samples))
        }));
    }
    out
}

/// Coupled first-order system for both `R̃` pairs, derivatives by finite
/// differences.
pub fn coupled_checks(p: &SpectralParams, cfg: &VerifyConfig) -> Vec<VerificationReport> {
    let tol = cfg.tol(1e-10);
    BRANCHES
        .iter()
        .map(|&branch| {
            let name = format!("R pair {branch} satisfies the coupled system ({})", tag(p));
            guarded(name, tol, || {
                let (r1, r2) = rtilde_pair_sums(branch, p)?;
                let f1 = |z: f64| r1.value(Point::from_z(z)?);
                let f2 = |z: f64| r2.value(Point::from_z(z)?);
                let zs = GridSpec::uniform(0.05, 0.95, 19)?.points();
                let mut worst: f64 = 0.0;
                for &z in &zs {
                    let a = sample_fd(&f1, Coordinate::Z, z)?;
                    let b = sample_fd(&f2, Coordinate::Z, z)?;
                    let r = coupled_residual(
                        z,
                        (a.value, b.value),
                        (a.derivative, b.derivative),
                        p.omega(),
                        p.m(),
                    );
                    worst = worst.max(r);
                }
                Ok((worst, zs.len()))
            })
        })
        .collect()
}

/// Numerical Wronskians in `x` against the closed form, plus the
/// x-independence of the v-family Wronskian.
pub fn wronskian_checks(p: &SpectralParams, cfg: &VerifyConfig) -> Vec<VerificationReport> {
    let tol = cfg.tol(1e-8);
    let mut out = Vec::new();
    for sign in SIGNS {
        let name = format!("Wronskian of Z{sign} equals the closed form ({})", tag(p));
        out.push(guarded(name, tol, || {
            let a = solution_z_sum(Branch::I, sign, p)?;
            let b = solution_z_sum(Branch::II, sign, p)?;
            let fa = |x: f64| a.value(Point::from_x(x)?);
            let fb = |x: f64| b.value(Point::from_x(x)?);
            let closed = wronskian_closed(sign, p);
            let mut worst: f64 = 0.0;
            for &x in &WRONSKIAN_XS {
                let w = wronskian_numeric(
                    &sample_fd(&fa, Coordinate::X, x)?,
                    &sample_fd(&fb, Coordinate::X, x)?,
                )?;
                worst = worst.max(rel(w, closed));
            }
            Ok((worst, WRONSKIAN_XS.len()))
        }));
        let name = format!(
            "v-family Wronskian {sign} is constant and nonzero ({})",
            tag(p)
        );
        out.push(guarded(name, tol, || {
            let a = solution_v_sum(Branch::I, sign, p)?;
            let b = solution_v_sum(Branch::II, sign, p)?;
            let fa = |x: f64| a.value(Point::from_x(x)?);
            let fb = |x: f64| b.value(Point::from_x(x)?);
            let mut values = Vec::new();
            for &x in &WRONSKIAN_XS {
                values.push(wronskian_numeric(
                    &sample_fd(&fa, Coordinate::X, x)?,
                    &sample_fd(&fb, Coordinate::X, x)?,
                )?);
            }
            if values[0].norm() < 1e-12 {
                return Ok((f64::INFINITY, values.len()));
            }
            let worst = values
                .iter()
                .map(|w| rel(*w, values[0]))
                .fold(0.0, f64::max);
            Ok((worst, values.len()))
        }));
    }
    out
}

/// `(d/dx + W) Z- = iω Z+` and `(d/dx - W) Z+ = iω Z-` for both branches.
pub fn intertwining_checks(p: &SpectralParams, cfg: &VerifyConfig) -> Vec<VerificationReport> {
    let tol = cfg.tol(1e-8);
    BRANCHES
        .iter()
        .map(|&branch| {
            let name = format!("Z{branch} pair is intertwined by d/dx +- W ({})", tag(p));
            guarded(name, tol, || {
                let plus = solution_z_sum(branch, Sign::Plus, p)?;
                let minus = solution_z_sum(branch, Sign::Minus, p)?;
                let fp = |x: f64| plus.value(Point::from_x(x)?);
                let fm = |x: f64| minus.value(Point::from_x(x)?);
                let mut worst: f64 = 0.0;
                for &x in &WRONSKIAN_XS {
                    let w = potentials::superpotential(x, p.m())?;
                    let h = oracle::collar_step(x, 0.0, f64::INFINITY);
                    let (zp, zm) = (fp(x)?, fm(x)?);
                    let (dp, dm) = (derivative1(&fp, x, h)?, derivative1(&fm, x, h)?);
                    for (d, own, other) in [(dm, w * zm, zp), (dp, -w * zp, zm)] {
                        let target = I * p.omega() * other;
                        let scale = d.norm().max(own.norm()).max(target.norm());
                        worst = worst.max((d + own - target).norm() / scale);
                    }
                }
                Ok((worst, WRONSKIAN_XS.len()))
            })
        })
        .collect()
}

/// Unitarity, closed forms against the asymptotic fit, and an end-to-end
/// run through the integrator.
pub fn scattering_checks(omega: f64, m: f64, cfg: &VerifyConfig) -> Vec<VerificationReport> {
    let label = format!("omega={omega} m={m}");
    let mut out = Vec::new();
    out.push(guarded(
        format!("|S+| = 1 ({label})"),
        cfg.tol(1e-10),
        || Ok((scattering_amplitude_plus(omega, m)?.modulus_error, 1)),
    ));
    out.push(guarded(
        format!("|S-| = 1 ({label})"),
        cfg.tol(1e-8),
        || Ok((scattering_amplitude_minus(omega, m)?.modulus_error, 1)),
    ));
    for sign in SIGNS {
        let name = format!("S{sign} matches the asymptotic fit ({label})");
        out.push(guarded(name, cfg.tol(1e-5), || {
            let p = make_params(omega, m)?;
            let fit = scattering::fitted_amplitude(sign, &p)?;
            let s = match sign {
                Sign::Plus => scattering_amplitude_plus(omega, m)?,
                Sign::Minus => scattering_amplitude_minus(omega, m)?,
            };
            Ok(((fit.amplitude() - s.amplitude).norm(), 3))
        }));
    }
    out.push(guarded(
        format!("S- closed form (derived) equals S+ at -m ({label})"),
        cfg.tol(1e-8),
        || {
            let a = scattering_amplitude_minus(omega, m)?.amplitude;
            let b = scattering_amplitude_minus_closed_form(omega, m)?.amplitude;
            Ok(((a - b).norm(), 1))
        },
    ));
    out.push(guarded(
        format!("integrated physical solution reproduces S+ ({label})"),
        cfg.tol(1e-5),
        || {
            let p = make_params(omega, m)?;
            let sum = physical_solution_sum(Sign::Plus, &p)?;
            let ic = sum.sample(Point::from_x(5.0)?, Coordinate::X)?;
            let grid = GridSpec::uniform(5.0, 45.0, 5)?;
            let spec = PotentialSpec::plus(m)?;
            let samples = integrate_radial(spec, omega, &ic, &grid)?;
            let fit = asymptotic_fit(&samples, omega)?;
            let s = scattering_amplitude_plus(omega, m)?.amplitude;
            Ok(((fit.amplitude() - s).norm(), samples.len()))
        },
    ));
    out
}

/// Boundary behaviour of the physical solution at `x = 0`.
pub fn boundary_checks(p: &SpectralParams, cfg: &VerifyConfig) -> Vec<VerificationReport> {
    let tol = cfg.tol(1e-3);
    SIGNS
        .iter()
        .map(|&sign| {
            let name = format!("physical solution {sign} vanishes at x = 0 ({})", tag(p));
            guarded(name, tol, || {
                let y = scattering::physical_solution(sign, 1e-8, p)?;
                let c = scattering::companion_solution(sign, 1e-8, p)?;
                Ok((y.norm().max((c - 2.0).norm()), 2))
            })
        })
        .collect()
}

/// Appendix argument: random data for the coupled system gives partner
/// solutions.
pub fn appendix_checks(
    omega: f64,
    m: f64,
    seeds: &[u64],
    cfg: &VerifyConfig,
) -> Vec<VerificationReport> {
    let tol = cfg.tol(oracle::APPENDIX_TOL);
    seeds
        .iter()
        .map(|&seed| {
            let run =
                GridSpec::uniform(0.5, 10.0, 20).and_then(|g| appendix_check(omega, m, &g, seed));
            match run {
                Ok(r) => r.with_tolerance(tol),
                Err(e) => VerificationReport::failed(
                    format!("coupled system seed {seed} (omega={omega} m={m}) [error: {e}]"),
                    tol,
                ),
            }
        })
        .collect()
}

/// The `z -> e^{-x}` propagation check against an exact solution.
pub fn propagation_check(p: &SpectralParams, cfg: &VerifyConfig) -> VerificationReport {
    let name = format!(
        "integrator reproduces Z I plus from x=2 to x=8 ({})",
        tag(p)
    );
    guarded(name, cfg.tol(1e-7), || {
        let sum = solution_z_sum(Branch::I, Sign::Plus, p)?;
        let f = |x: f64| sum.value(Point::from_x(x)?);
        let ic = sample_fd(&f, Coordinate::X, 2.0)?;
        let grid = GridSpec::uniform(2.0, 8.0, 7)?;
        let spec = PotentialSpec::plus(p.m())?;
        let out = integrate_radial(spec, p.omega(), &ic, &grid)?;
        let mut worst: f64 = 0.0;
        for s in &out {
            worst = worst.max(rel(s.value, f(s.coord)?));
        }
        Ok((worst, out.len()))
    })
}

/// Potential identities: shape invariance, `V± = W² ± W'`, landmarks.
pub fn potential_checks(ms: &[f64], cfg: &VerifyConfig) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let xs = GridSpec::new(0.01, 20.0, 60, oracle::Spacing::Log)
        .expect("static grid")
        .points();
    out.push(guarded(
        "V-(x, -m) = V+(x, m)".into(),
        cfg.tol(1e-14),
        || {
            let mut worst: f64 = 0.0;
            for &m in ms {
                for &x in &xs {
                    let a = potentials::potential(x, PotentialSpec::minus(-m)?)?;
                    let b = potentials::potential(x, PotentialSpec::plus(m)?)?;
                    worst = worst.max((a - b).abs() / b.abs().max(f64::MIN_POSITIVE));
                }
            }
            Ok((worst, xs.len() * ms.len()))
        },
    ));
    out.push(guarded("V+- = W^2 +- W'".into(), cfg.tol(1e-6), || {
        let mut worst: f64 = 0.0;
        for &m in ms {
            let w = |x: f64| potentials::superpotential(x, m).map(|v| C64::new(v, 0.0));
            for &x in &xs {
                let h = oracle::collar_step(x, 0.0, f64::INFINITY);
                let dw = derivative1(&w, x, h)?.re;
                let w0 = w(x)?.re;
                for sign in SIGNS {
                    let v = potentials::potential(x, PotentialSpec::new(m, sign)?)?;
                    let built = w0 * w0 + sign.factor() * dw;
                    worst = worst.max((v - built).abs() / v.abs().max(w0 * w0));
                }
            }
        }
        Ok((worst, xs.len() * ms.len()))
    }));
    out.push(guarded(
        "landmark ordering s1 > s+ > s2 > s-".into(),
        0.0,
        || {
            let mut violations = 0.0;
            let mut count = 0;
            for &m in ms.iter().filter(|&&m| m > 1.0) {
                let l = landmarks(m)?;
                let (sm, sp) = l.zero_crossings.expect("m > 1");
                let (s2, s1) = l.critical_points.expect("m > 1");
                if !(s1 > sp && sp > s2 && s2 > sm && sm > 0.0) {
                    violations += 1.0;
                }
                count += 1;
            }
            Ok((violations, count))
        },
    ));
    out
}

/// Zero-energy closed form, hypergeometric form and the `ω = 0` pair.
pub fn zero_energy_checks(ms: &[f64], cfg: &VerifyConfig) -> Vec<VerificationReport> {
    let tol = cfg.tol(1e-10);
    let name = "zero-energy closed form = hypergeometric form = omega=0 pair".to_string();
    let mut out = vec![guarded(name, tol, || {
        let mut worst: f64 = 0.0;
        let mut n = 0;
        for &m in ms {
            for z in [0.2f64, 0.5, 0.8] {
                for which in [ZeroEnergy::PsiMinus, ZeroEnergy::PsiPlus] {
                    let closed = zero_energy_state(-z.ln(), m, which)?;
                    worst = worst.max(rel(zero_energy_hypergeometric(z, m, which)?, closed));
                    worst = worst.max(rel(zero_energy_from_pair(z, m, which)?, closed));
                    n += 1;
                }
            }
        }
        Ok((worst, n))
    })];
    out.push(guarded(
        "psi0-(ln 2; m=1) = exp(-pi/2)".into(),
        cfg.tol(1e-12),
        || {
            let v = zero_energy_state(std::f64::consts::LN_2, 1.0, ZeroEnergy::PsiMinus)?;
            Ok(((v - (-PI / 2.0).exp()).norm(), 1))
        },
    ));
    out
}

/// Gauss summation, the connection formula and Gamma reflection on seeded
/// random parameters.
pub fn special_function_checks(
    seed: u64,
    draws: usize,
    cfg: &VerifyConfig,
) -> Vec<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut gauss: Vec<Hyp2F1Params> = Vec::new();
    let mut kummer: Vec<(Hyp2F1Params, f64)> = Vec::new();
    let mut refl: Vec<C64> = Vec::new();
    for _ in 0..draws {
        let a = C64::new(rng.gen_range(-0.5..1.0), rng.gen_range(-2.0..2.0));
        let b = C64::new(rng.gen_range(-0.5..1.0), rng.gen_range(-2.0..2.0));
        // the approach to the limit is O((1-z)^min(1, Re(c-a-b))), so the
        // 1e-6 offset only resolves 1e-5 once Re(c-a-b) exceeds 1
        let excess = C64::new(rng.gen_range(1.3..3.0), rng.gen_range(-1.0..1.0));
        let (ga, gb) = (C64::new(a.re, 0.5 * a.im), C64::new(b.re, 0.5 * b.im));
        if let Ok(p) = Hyp2F1Params::new(ga, gb, ga + gb + excess) {
            gauss.push(p);
        }
        let c2 = C64::new(rng.gen_range(0.3..3.0), rng.gen_range(-2.0..2.0));
        if let Ok(p) = Hyp2F1Params::new(a, b, c2) {
            kummer.push((p, rng.gen_range(0.1..0.9)));
        }
        let mut z = C64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-3.0..3.0));
        if (z.re - z.re.round()).abs() < 1e-3 {
            z.re += 0.01;
        }
        refl.push(z);
    }
    out.push(guarded(
        "Gauss summation at z = 1 - 1e-6".into(),
        cfg.tol(1e-5),
        || {
            let mut worst: f64 = 0.0;
            for p in &gauss {
                let s = p.excess();
                let limit =
                    gamma(p.c())? * gamma(s)? / (gamma(p.c() - p.a())? * gamma(p.c() - p.b())?);
                worst = worst.max(rel(hyp2f1(p, 1.0 - 1e-6)?, limit));
            }
            Ok((worst, gauss.len()))
        },
    ));
    out.push(guarded(
        "connection formula = direct series".into(),
        cfg.tol(1e-10),
        || {
            let mut worst: f64 = 0.0;
            for (p, z) in &kummer {
                let direct = hyp2f1_series(p, *z, MAX_SERIES_TERMS)?;
                worst = worst.max(rel(hyp2f1_via_connection(p, *z, 1.0 - z)?, direct));
            }
            Ok((worst, kummer.len()))
        },
    ));
    out.push(guarded("Gamma reflection".into(), cfg.tol(1e-10), || {
        let mut worst: f64 = 0.0;
        for &z in &refl {
            let v = gamma(z)? * gamma(1.0 - z)? * (PI * z).sin() / PI;
            worst = worst.max((v - 1.0).norm());
        }
        Ok((worst, refl.len()))
    }));
    out
}

/// Every check for one `(ω, m)`.
pub fn point_checks(omega: f64, m: f64, cfg: &VerifyConfig) -> Vec<VerificationReport> {
    let params = match make_params(omega, m) {
        Ok(p) => p,
        Err(e) => {
            return vec![VerificationReport::failed(
                format!("spectral parameters (omega={omega} m={m}) [error: {e}]"),
                0.0,
            )]
        }
    };
    let p = match cfg.fault {
        Some(delta) => params.with_perturbed_c1(C64::new(delta, 0.0)),
        None => params,
    };
    let mut out = solution_checks(&p, cfg);
    out.extend(coupled_checks(&p, cfg));
    out.extend(wronskian_checks(&p, cfg));
    out.extend(intertwining_checks(&p, cfg));
    out.extend(boundary_checks(&p, cfg));
    out.push(propagation_check(&p, cfg));
    if m > 0.0 {
        out.extend(scattering_checks(omega, m, cfg));
    }
    out.extend(appendix_checks(omega, m, &[1], cfg));
    out
}

/// The whole suite.
pub fn run_suite(cfg: &VerifyConfig) -> Vec<VerificationReport> {
    let mut out = potential_checks(&cfg.ms, cfg);
    out.extend(zero_energy_checks(&cfg.ms, cfg));
    out.extend(special_function_checks(2024, 20, cfg));
    for &omega in &cfg.omegas {
        for &m in &cfg.ms {
            out.extend(point_checks(omega, m, cfg));
        }
    }
    out
}

pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}
