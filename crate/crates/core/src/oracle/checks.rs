use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fd::{collar_step, derivative1, derivative2};
use super::ode::Dopri5;
use super::{GridSpec, VerificationReport};
use crate::error::{Error, Result};
use crate::potentials::{potential_unchecked, potential_z, superpotential, PotentialSpec, Sign};
use crate::solutions::{Coordinate, SolutionSample};

/// A wavefunction seen as a black box of one real variable.
pub type ZFunction<'a> = &'a dyn Fn(f64) -> Result<C64>;
/// A wavefunction returning `(f, df/dz)`.
pub type ZSampler<'a> = &'a dyn Fn(f64) -> Result<(C64, C64)>;

/// Distance kept from `z = 0` and `z = 1` by every oracle grid.
pub const COLLAR: f64 = 1e-3;
/// Smallest `x` an oracle grid may reach.
pub const MIN_X: f64 = 1e-3;
/// Bound on the Schrödinger residual of `R1 ± R2` in [`appendix_check`].
pub const APPENDIX_TOL: f64 = 1e-7;
/// Default bound on the z-equation residual.
pub const Z_RESIDUAL_TOL: f64 = 1e-8;

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn largest(values: &[f64]) -> f64 {
    values.iter().cloned().fold(0.0, f64::max)
}

fn z_equation_residual(
    spec: PotentialSpec,
    omega: f64,
    z: f64,
    value: C64,
    d1: C64,
    d2: C64,
) -> Result<(f64, f64)> {
    let kinetic = omega * omega / z * value;
    let potential = potential_z(z, spec)? / z * value;
    let total = d1 + z * d2 + kinetic - potential;
    let scale = largest(&[d1.norm(), (z * d2).norm(), kinetic.norm(), potential.norm()]);
    Ok((total.norm(), scale))
}

fn relative(residual: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        0.0
    } else {
        residual / scale
    }
}

/// Relative residual of `d/dz(z f') + (ω²/z - V(z)/z) f = 0` at one point,
/// where `V(z)` is the potential written in `z`.
pub fn residual_z_at(f: ZFunction, spec: PotentialSpec, omega: f64, z: f64) -> Result<f64> {
    let h = collar_step(z, 0.0, 1.0);
    let d1 = derivative1(f, z, h)?;
    let d2 = derivative2(f, z, h)?;
    let (r, scale) = z_equation_residual(spec, omega, z, f(z)?, d1, d2)?;
    Ok(relative(r, scale))
}

/// As [`residual_z_at`] for a function that also reports its derivative.
///
/// `f''` is the difference quotient of the reported `f'`, which holds the
/// rounding noise of the second difference of `f` down by a factor `1/h`.
/// The reported `f'` is itself compared with the difference quotient of `f`
/// and the larger of the two discrepancies is returned.
pub fn residual_z_sampled_at(f: ZSampler, spec: PotentialSpec, omega: f64, z: f64) -> Result<f64> {
    let h = collar_step(z, 0.0, 1.0);
    let (value, d1) = f(z)?;
    let d2 = derivative1(&|t| Ok(f(t)?.1), z, h)?;
    let d1_fd = derivative1(&|t| Ok(f(t)?.0), z, h)?;
    let (r, scale) = z_equation_residual(spec, omega, z, value, d1, d2)?;
    Ok(relative(r.max((d1 - d1_fd).norm()), scale))
}

fn worst_over(
    grid: &GridSpec,
    spec: PotentialSpec,
    at: impl Fn(f64) -> Result<f64>,
) -> Result<VerificationReport> {
    if grid.start() < COLLAR || grid.end() > 1.0 - COLLAR {
        return Err(Error::Grid(format!(
            "z grid must stay inside [{COLLAR}, {}]",
            1.0 - COLLAR
        )));
    }
    let mut worst: f64 = 0.0;
    let points = grid.points();
    for &z in &points {
        let r = at(z)?;
        worst = if r.is_nan() { f64::NAN } else { worst.max(r) };
    }
    Ok(VerificationReport::new(
        format!("z-equation residual ({})", spec.sign()),
        worst,
        Z_RESIDUAL_TOL,
        points.len(),
    ))
}

/// Worst relative residual of the z-form Schrödinger equation over `grid`.
pub fn ode_residual_z(
    f: ZFunction,
    spec: PotentialSpec,
    omega: f64,
    grid: &GridSpec,
) -> Result<VerificationReport> {
    worst_over(grid, spec, |z| residual_z_at(f, spec, omega, z))
}

/// [`ode_residual_z`] for a function sampled with its derivative.
pub fn ode_residual_z_sampled(
    f: ZSampler,
    spec: PotentialSpec,
    omega: f64,
    grid: &GridSpec,
) -> Result<VerificationReport> {
    worst_over(grid, spec, |z| residual_z_sampled_at(f, spec, omega, z))
}

/// Relative residual of `Z'' = (V(x) - ω²) Z` at `x` for a black-box `f(x)`.
pub fn schrodinger_residual_x(
    f: ZFunction,
    potential: &dyn Fn(f64) -> f64,
    omega: f64,
    x: f64,
) -> Result<f64> {
    let h = collar_step(x, 0.0, f64::INFINITY);
    let value = f(x)?;
    let d2 = derivative2(f, x, h)?;
    let v = potential(x) * value;
    let e = omega * omega * value;
    let scale = largest(&[d2.norm(), v.norm(), e.norm()]);
    Ok(if scale == 0.0 {
        0.0
    } else {
        (d2 - v + e).norm() / scale
    })
}

/// Value plus finite-difference derivative in `coordinate`.
pub fn sample_fd(f: ZFunction, coordinate: Coordinate, coord: f64) -> Result<SolutionSample> {
    let hi = match coordinate {
        Coordinate::X => f64::INFINITY,
        Coordinate::Z | Coordinate::V => 1.0,
    };
    let h = collar_step(coord, 0.0, hi);
    SolutionSample::new(coordinate, coord, f(coord)?, derivative1(f, coord, h)?)
}

/// `f g' - g f'` for two samples at the same point.
pub fn wronskian_numeric(f: &SolutionSample, g: &SolutionSample) -> Result<C64> {
    if f.coordinate != g.coordinate || f.coord != g.coord {
        return Err(Error::CoordinateMismatch(f.coord, g.coord));
    }
    Ok(f.value * g.derivative - g.value * f.derivative)
}

/// Worst line residual of the coupled first-order system in `z`:
///
/// ```text
/// z R1' + iω R1 =  im sqrt(z/(1-z)) R2
/// z R2' - iω R2 = -im sqrt(z/(1-z)) R1
/// ```
///
/// each normalised by its largest term.
pub fn coupled_residual(
    z: f64,
    pair: (C64, C64),
    pair_deriv: (C64, C64),
    omega: f64,
    m: f64,
) -> f64 {
    let (r1, r2) = pair;
    let (d1, d2) = pair_deriv;
    let k = I * m * (z / (1.0 - z)).sqrt();
    let line = |a: C64, b: C64, c: C64| {
        let scale = largest(&[a.norm(), b.norm(), c.norm()]);
        if scale == 0.0 {
            0.0
        } else {
            (a + b - c).norm() / scale
        }
    };
    let first = line(z * d1, I * omega * r1, k * r2);
    let second = line(z * d2, -I * omega * r2, -k * r1);
    first.max(second)
}

fn check_radial_inputs(ic: &SolutionSample, grid: &GridSpec) -> Result<()> {
    if ic.coordinate != Coordinate::X {
        return Err(Error::Parameter(format!(
            "initial condition must be given in x, got {}",
            ic.coordinate
        )));
    }
    if grid.start() < MIN_X {
        return Err(Error::Grid(format!("x grid must start at x >= {MIN_X}")));
    }
    if ic.coord < grid.start() || ic.coord > grid.end() {
        return Err(Error::Grid(format!(
            "x0 = {} lies outside the grid [{}, {}]",
            ic.coord,
            grid.start(),
            grid.end()
        )));
    }
    Ok(())
}

/// Propagate `(Z, Z')` of `Z'' = (V - ω²) Z` from the initial sample to
/// every grid point, forwards and backwards from `x0`.
pub fn integrate_radial(
    spec: PotentialSpec,
    omega: f64,
    ic: &SolutionSample,
    grid: &GridSpec,
) -> Result<Vec<SolutionSample>> {
    let (m, sign) = (spec.m(), spec.sign());
    integrate_radial_with(
        &|x| potential_unchecked(x, m, sign),
        omega,
        ic,
        grid,
        &Dopri5::default(),
    )
}

/// [`integrate_radial`] with an arbitrary potential and solver settings.
pub fn integrate_radial_with(
    potential: &dyn Fn(f64) -> f64,
    omega: f64,
    ic: &SolutionSample,
    grid: &GridSpec,
    solver: &Dopri5,
) -> Result<Vec<SolutionSample>> {
    check_radial_inputs(ic, grid)?;
    let e = omega * omega;
    let rhs = |x: f64, y: &[C64; 2]| [y[1], (potential(x) - e) * y[0]];
    let points = grid.points();
    let mut out = vec![None; points.len()];
    let x0 = ic.coord;
    let start = [ic.value, ic.derivative];
    // forwards over points >= x0, then backwards over the rest
    let split = points.partition_point(|&x| x < x0);
    let (mut x, mut y) = (x0, start);
    for (i, &xp) in points.iter().enumerate().skip(split) {
        y = solver.integrate(&rhs, x, y, xp)?;
        x = xp;
        out[i] = Some(SolutionSample::new(Coordinate::X, xp, y[0], y[1])?);
    }
    let (mut x, mut y) = (x0, start);
    for i in (0..split).rev() {
        let xp = points[i];
        y = solver.integrate(&rhs, x, y, xp)?;
        x = xp;
        out[i] = Some(SolutionSample::new(Coordinate::X, xp, y[0], y[1])?);
    }
    Ok(out
        .into_iter()
        .map(|s| s.expect("every grid point visited"))
        .collect())
}

/// Integrate `R1' = iωR1 + W R2`, `R2' = -iωR2 + W R1` from random complex
/// data at the start of `grid` and check that `R1 ± R2` solve the `V±`
/// equations. The seed fixes the initial data.
pub fn appendix_check(
    omega: f64,
    m: f64,
    grid: &GridSpec,
    seed: u64,
) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let r0 = (draw(), draw());
    let mut report = appendix_check_from(omega, m, grid, r0)?;
    report.name = format!("{} seed {seed}", report.name);
    Ok(report)
}

/// [`appendix_check`] from explicit initial data `(R1, R2)` at the grid
/// start.
pub fn appendix_check_from(
    omega: f64,
    m: f64,
    grid: &GridSpec,
    r0: (C64, C64),
) -> Result<VerificationReport> {
    if grid.start() < MIN_X {
        return Err(Error::Grid(format!("x grid must start at x >= {MIN_X}")));
    }
    if m == 0.0 {
        return Err(Error::Parameter("m must be nonzero".into()));
    }
    let name = format!("coupled system -> partner equations (omega={omega} m={m})");
    let points = grid.points();
    if r0.0 == C64::new(0.0, 0.0) && r0.1 == C64::new(0.0, 0.0) {
        let mut report = VerificationReport::new(name, 0.0, APPENDIX_TOL, points.len());
        report.degenerate = true;
        return Ok(report);
    }
    let w = |x: f64| superpotential(x, m).expect("grid stays in x > 0");
    let rhs = |x: f64, r: &[C64; 2]| {
        let wx = w(x);
        [I * omega * r[0] + wx * r[1], -I * omega * r[1] + wx * r[0]]
    };
    let solver = Dopri5::default();
    let mut x = grid.start();
    let mut state = [r0.0, r0.1];
    let mut worst: f64 = 0.0;
    for &xp in &points {
        state = solver.integrate(&rhs, x, state, xp)?;
        x = xp;
        let here = state;
        let h = collar_step(xp, 0.0, f64::INFINITY);
        // short fixed-step excursions give R at the stencil points
        let local = |t: f64| -> [C64; 2] {
            if t == xp {
                here
            } else {
                Dopri5::integrate_fixed(&rhs, xp, here, t, 4)
            }
        };
        for sign in [Sign::Plus, Sign::Minus] {
            let s = sign.factor();
            let value = |t: f64| {
                let r = local(t);
                r[0] + s * r[1]
            };
            let slope = |t: f64| -> Result<C64> {
                let r = local(t);
                let d = rhs(t, &r);
                Ok(d[0] + s * d[1])
            };
            let z = value(xp);
            let z2 = derivative1(&slope, xp, h)?;
            let vz = potential_unchecked(xp, m, sign) * z;
            let ez = omega * omega * z;
            let scale = largest(&[z2.norm(), vz.norm(), ez.norm()]);
            if scale > 0.0 {
                worst = worst.max((z2 - vz + ez).norm() / scale);
            }
        }
    }
    Ok(VerificationReport::new(
        name,
        worst,
        APPENDIX_TOL,
        points.len(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wronskian_basics() {
        let a = SolutionSample::new(Coordinate::X, 1.0, C64::new(1.0, 2.0), C64::new(0.5, 0.0))
            .unwrap();
        assert_eq!(wronskian_numeric(&a, &a).unwrap(), C64::new(0.0, 0.0));
        let b = SolutionSample::new(Coordinate::X, 2.0, a.value, a.derivative).unwrap();
        assert!(matches!(
            wronskian_numeric(&a, &b),
            Err(Error::CoordinateMismatch(..))
        ));
        let c = SolutionSample::new(Coordinate::Z, 0.5, a.value, a.derivative).unwrap();
        let d = SolutionSample::new(Coordinate::Z, 0.5, C64::new(0.0, 1.0), a.value).unwrap();
        let w = wronskian_numeric(&c, &d).unwrap();
        assert_eq!(w, -wronskian_numeric(&d, &c).unwrap());
    }

    #[test]
    fn constant_is_not_a_solution() {
        let spec = PotentialSpec::plus(1.0).unwrap();
        let grid = GridSpec::uniform(0.05, 0.95, 20).unwrap();
        let one = |_: f64| Ok(C64::new(1.0, 0.0));
        let r = ode_residual_z(&one, spec, 1.0, &grid).unwrap();
        assert!(!r.passed);
        assert!(r.max_residual > 0.1);
        let bad = GridSpec::uniform(1e-4, 0.5, 5).unwrap();
        assert!(ode_residual_z(&one, spec, 1.0, &bad).is_err());
    }

    #[test]
    fn reported_derivative_is_cross_checked() {
        let spec = PotentialSpec::plus(1.0).unwrap();
        let grid = GridSpec::uniform(0.05, 0.95, 20).unwrap();
        // zero satisfies the equation but its claimed derivative does not
        let lying = |_: f64| Ok((C64::new(0.0, 0.0), C64::new(1.0, 0.0)));
        let r = ode_residual_z_sampled(&lying, spec, 1.0, &grid).unwrap();
        assert!(!r.passed);
        let zero = |_: f64| Ok((C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
        assert!(
            ode_residual_z_sampled(&zero, spec, 1.0, &grid)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn free_particle_propagation() {
        let omega = 1.3;
        let ic = SolutionSample::new(
            Coordinate::X,
            1.0,
            C64::from_polar(1.0, omega),
            I * omega * C64::from_polar(1.0, omega),
        )
        .unwrap();
        let grid = GridSpec::uniform(0.5, 11.0, 8).unwrap();
        let out = integrate_radial_with(&|_| 0.0, omega, &ic, &grid, &Dopri5::default()).unwrap();
        for s in &out {
            let exact = C64::from_polar(1.0, omega * s.coord);
            assert!((s.value - exact).norm() < 1e-9, "x = {}", s.coord);
        }
        assert_eq!(out.len(), 8);
        assert_eq!(out[0].coord, 0.5);
    }

    #[test]
    fn radial_input_checks() {
        let spec = PotentialSpec::plus(1.0).unwrap();
        let one = C64::new(1.0, 0.0);
        let grid = GridSpec::uniform(1.0, 5.0, 5).unwrap();
        let z_ic = SolutionSample::new(Coordinate::Z, 0.5, one, one).unwrap();
        assert!(integrate_radial(spec, 1.0, &z_ic, &grid).is_err());
        let far = SolutionSample::new(Coordinate::X, 9.0, one, one).unwrap();
        assert!(integrate_radial(spec, 1.0, &far, &grid).is_err());
        let low = GridSpec::uniform(1e-4, 5.0, 5).unwrap();
        let ic = SolutionSample::new(Coordinate::X, 1.0, one, one).unwrap();
        assert!(integrate_radial(spec, 1.0, &ic, &low).is_err());
    }

    #[test]
    fn coupled_negative_control() {
        // unrelated numbers do not satisfy the system
        let r = coupled_residual(
            0.3,
            (C64::new(1.0, 0.0), C64::new(0.0, 1.0)),
            (C64::new(2.0, 0.0), C64::new(1.0, 1.0)),
            1.0,
            1.0,
        );
        assert!(r > 0.1);
    }

    #[test]
    fn appendix_zero_seed_is_degenerate() {
        let grid = GridSpec::uniform(0.5, 5.0, 5).unwrap();
        let zero = C64::new(0.0, 0.0);
        let r = appendix_check_from(1.0, 1.0, &grid, (zero, zero)).unwrap();
        assert!(r.degenerate && r.passed && r.max_residual == 0.0);
    }

    #[test]
    fn appendix_random_seed() {
        let grid = GridSpec::uniform(0.5, 8.0, 12).unwrap();
        let r = appendix_check(1.0, 1.0, &grid, 7).unwrap();
        assert!(r.passed, "{r}");
        assert!(!r.degenerate);
    }
}
