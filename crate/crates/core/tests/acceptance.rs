//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_4, LN_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use ces_core::oracle::{
    appendix_check, collar_step, derivative1, ode_residual_z_sampled, sample_fd, wronskian_numeric,
    GridSpec,
};
use ces_core::potentials::{landmarks, potential, superpotential, PotentialSpec, Sign};
use ces_core::scattering::{
    companion_solution, fitted_amplitude, physical_solution, physical_solution_sum,
    scattering_amplitude_minus, scattering_amplitude_plus,
};
use ces_core::solutions::{
    make_params, solution_z_sum, zero_energy_hypergeometric, zero_energy_rtilde_pair,
    zero_energy_state, Branch, Coordinate, Point, ZeroEnergy,
};
use ces_core::special_fn::{
    gamma, hyp2f1, hyp2f1_series, kummer_connection, Hyp2F1Params, MAX_SERIES_TERMS,
};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const I: C64 = C64 { re: 0.0, im: 1.0 };
const GRID_VALUES: [f64; 3] = [0.5, 1.0, 2.0];
const SIGNS: [Sign; 2] = [Sign::Plus, Sign::Minus];

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn bound(name: &str, worst: f64, tol: f64) -> Outcome {
    if worst < tol {
        Ok(format!("{name} {worst:.2e} < {tol:.0e}"))
    } else {
        Err(format!("{name} {worst:.2e} >= {tol:.0e}"))
    }
}

fn exact_solutions() -> Outcome {
    let grid = GridSpec::uniform(0.05, 0.95, 100).map_err(err)?;
    let mut worst: f64 = 0.0;
    let mut combos = 0;
    for omega in GRID_VALUES {
        for m in GRID_VALUES {
            let p = make_params(omega, m).map_err(err)?;
            for branch in [Branch::I, Branch::II] {
                for sign in SIGNS {
                    let sum = solution_z_sum(branch, sign, &p).map_err(err)?;
                    let f = |z: f64| sum.value_and_dz(Point::from_z(z)?);
                    let spec = PotentialSpec::new(m, sign).map_err(err)?;
                    let r = ode_residual_z_sampled(&f, spec, omega, &grid).map_err(err)?;
                    if r.samples != 100 {
                        return Err(format!("{} samples", r.samples));
                    }
                    worst = worst.max(r.max_residual);
                    combos += 1;
                }
            }
        }
    }
    if combos != 36 {
        return Err(format!("{combos} combinations"));
    }
    bound("36 combinations, worst z-residual", worst, 1e-8)
}

fn wronskian() -> Outcome {
    let mut worst: f64 = 0.0;
    for omega in GRID_VALUES {
        for m in GRID_VALUES {
            let p = make_params(omega, m).map_err(err)?;
            for sign in SIGNS {
                // ±2ω(c1 - 1)/m with c1 = 3/2 + 2iω
                let expected = sign.factor() * 2.0 * omega * C64::new(0.5, 2.0 * omega) / m;
                let first = solution_z_sum(Branch::I, sign, &p).map_err(err)?;
                let second = solution_z_sum(Branch::II, sign, &p).map_err(err)?;
                let fa = |x: f64| first.value(Point::from_x(x)?);
                let fb = |x: f64| second.value(Point::from_x(x)?);
                let mut values = Vec::new();
                for x in [0.5, 1.0, 2.0, 5.0, 10.0] {
                    let a = sample_fd(&fa, Coordinate::X, x).map_err(err)?;
                    let b = sample_fd(&fb, Coordinate::X, x).map_err(err)?;
                    let w = wronskian_numeric(&a, &b).map_err(err)?;
                    worst = worst.max(rel(w, expected));
                    values.push(w);
                }
                for w in &values[1..] {
                    worst = worst.max(rel(*w, values[0]));
                }
            }
        }
    }
    bound("worst relative deviation", worst, 1e-8)
}

fn shape_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mirror: f64 = 0.0;
    let mut built: f64 = 0.0;
    for _ in 0..1000 {
        let x = rng.gen_range(1e-3..30.0);
        let m = rng.gen_range(-5.0..5.0);
        let a = potential(x, PotentialSpec::minus(-m).map_err(err)?).map_err(err)?;
        let b = potential(x, PotentialSpec::plus(m).map_err(err)?).map_err(err)?;
        mirror = mirror.max((a - b).abs() / b.abs().max(f64::MIN_POSITIVE));

        let w = |t: f64| superpotential(t, m).map(|v| C64::new(v, 0.0));
        let dw = derivative1(&w, x, collar_step(x, 0.0, f64::INFINITY))
            .map_err(err)?
            .re;
        let w0 = superpotential(x, m).map_err(err)?;
        for sign in SIGNS {
            let v = potential(x, PotentialSpec::new(m, sign).map_err(err)?).map_err(err)?;
            let scale = v.abs().max(w0 * w0).max(f64::MIN_POSITIVE);
            built = built.max((v - (w0 * w0 + sign.factor() * dw)).abs() / scale);
        }
    }
    if mirror > 4.0 * f64::EPSILON {
        return Err(format!("V-(x,-m) vs V+(x,m): {mirror:.2e}"));
    }
    bound(&format!("mirror {mirror:.1e}; W^2 +- W'"), built, 1e-6)
}

fn landmark_criterion() -> Outcome {
    let l = landmarks(2.0).map_err(err)?;
    let (sm, sp) = l.zero_crossings.ok_or("m = 2 has no zero crossings")?;
    let r = 4.0 * 3f64.sqrt();
    if (sm - (8.0 - r)).abs() > 1e-12 || (sp - (8.0 + r)).abs() > 1e-12 {
        return Err(format!("crossings {sm}, {sp}"));
    }
    let spec = PotentialSpec::minus(2.0).map_err(err)?;
    let below = potential(0.5 * sm.ln(), spec).map_err(err)?;
    let between = potential(0.5 * (sm.ln() + sp.ln()), spec).map_err(err)?;
    let beyond = potential(sp.ln() + 1.0, spec).map_err(err)?;
    if !(below < 0.0 && between > 0.0 && beyond < 0.0) {
        return Err(format!("sign pattern {below:e}, {between:e}, {beyond:e}"));
    }
    for s in [sm, sp] {
        let v = potential(s.ln(), spec).map_err(err)?;
        if v.abs() > 1e-12 {
            return Err(format!("V- at s = {s}: {v:e}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let m = rng.gen_range(1.0..5.0);
        let l = landmarks(m).map_err(err)?;
        let (sm, sp) = l.zero_crossings.ok_or(format!("m = {m}: no crossings"))?;
        let (s2, s1) = l.critical_points.ok_or(format!("m = {m}: no extrema"))?;
        if !(s1 > sp && sp > s2 && s2 > sm) {
            return Err(format!("m = {m}: ordering {s1} {sp} {s2} {sm}"));
        }
    }
    Ok("crossings 8 -+ 4 sqrt 3, sign - + -, ordering on 50 draws".into())
}

fn unitarity() -> Outcome {
    let axis = GridSpec::uniform(0.25, 4.0, 10).map_err(err)?.points();
    let (mut plus, mut minus): (f64, f64) = (0.0, 0.0);
    for &omega in &axis {
        for &m in &axis {
            let sp = scattering_amplitude_plus(omega, m).map_err(err)?.amplitude;
            let sm = scattering_amplitude_minus(omega, m).map_err(err)?.amplitude;
            plus = plus.max((sp.norm() - 1.0).abs());
            minus = minus.max((sm.norm() - 1.0).abs());
        }
    }
    if minus >= 1e-8 {
        return Err(format!("||S-| - 1| = {minus:.2e}"));
    }
    bound(&format!("||S-| - 1| {minus:.1e}; ||S+| - 1|"), plus, 1e-10)
}

fn fitted_scattering() -> Outcome {
    let grid = GridSpec::uniform(0.05, 0.95, 100).map_err(err)?;
    let (mut modulus, mut phase, mut residual): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for omega in GRID_VALUES {
        for m in GRID_VALUES {
            let p = make_params(omega, m).map_err(err)?;
            let sum = physical_solution_sum(Sign::Plus, &p).map_err(err)?;
            let f = |z: f64| sum.value_and_dz(Point::from_z(z)?);
            let spec = PotentialSpec::plus(m).map_err(err)?;
            let r = ode_residual_z_sampled(&f, spec, omega, &grid).map_err(err)?;
            residual = residual.max(r.max_residual);
            let fit = fitted_amplitude(Sign::Plus, &p).map_err(err)?.amplitude();
            let closed = scattering_amplitude_plus(omega, m).map_err(err)?.amplitude;
            modulus = modulus.max((fit.norm() - closed.norm()).abs());
            phase = phase.max((fit / closed).arg().abs());
        }
    }
    if residual >= 1e-8 {
        return Err(format!("Y+ not certified: residual {residual:.2e}"));
    }
    if modulus >= 1e-5 {
        return Err(format!("modulus {modulus:.2e}"));
    }
    bound(
        &format!("Y+ residual {residual:.1e}; modulus {modulus:.1e}; phase"),
        phase,
        1e-5,
    )
}

fn boundary() -> Outcome {
    let (mut zero, mut two): (f64, f64) = (0.0, 0.0);
    for omega in GRID_VALUES {
        for m in GRID_VALUES {
            let p = make_params(omega, m).map_err(err)?;
            zero = zero.max(physical_solution(Sign::Plus, 1e-8, &p).map_err(err)?.norm());
            two = two.max((companion_solution(Sign::Plus, 1e-8, &p).map_err(err)? - 2.0).norm());
        }
    }
    if two >= 1e-3 {
        return Err(format!("|companion - 2| = {two:.2e}"));
    }
    bound(
        &format!("|companion - 2| {two:.1e}; |Y+(1e-8)|"),
        zero,
        1e-3,
    )
}

fn zero_energy() -> Outcome {
    let (mut hyp, mut pair): (f64, f64) = (0.0, 0.0);
    for m in GRID_VALUES {
        for z in [0.2f64, 0.5, 0.8] {
            let x = -z.ln();
            let (r1, r2) = zero_energy_rtilde_pair(z, m).map_err(err)?;
            for (which, s) in [(ZeroEnergy::PsiMinus, -1.0), (ZeroEnergy::PsiPlus, 1.0)] {
                let closed = zero_energy_state(x, m, which).map_err(err)?;
                hyp = hyp.max(rel(
                    zero_energy_hypergeometric(z, m, which).map_err(err)?,
                    closed,
                ));
                // ψ0∓ = ∓2m e^{iπ/4} Z∓ with Z∓ = e^{-iπ/4}(R1 ∓ i R2)
                let z_pm = C64::from_polar(1.0, -FRAC_PI_4) * (r1 + s * I * r2);
                let from_pair = s * 2.0 * m * C64::from_polar(1.0, FRAC_PI_4) * z_pm;
                pair = pair.max(rel(from_pair, closed));
            }
        }
    }
    let spot = zero_energy_state(LN_2, 1.0, ZeroEnergy::PsiMinus).map_err(err)?;
    let spot_err = (spot - (-PI / 2.0).exp()).norm();
    if hyp >= 1e-10 || pair >= 1e-10 {
        return Err(format!("hypergeometric {hyp:.2e}, pair {pair:.2e}"));
    }
    bound(
        &format!("hypergeometric {hyp:.1e}; pair {pair:.1e}; spot value"),
        spot_err,
        1e-12,
    )
}

fn appendix() -> Outcome {
    let grid = GridSpec::uniform(0.5, 10.0, 20).map_err(err)?;
    let mut worst: f64 = 0.0;
    for (omega, m) in [(1.0, 1.0), (2.0, 0.5)] {
        for seed in 1..=5 {
            let r = appendix_check(omega, m, &grid, seed).map_err(err)?;
            if r.degenerate {
                return Err(format!("seed {seed} drew the zero solution"));
            }
            worst = worst.max(r.max_residual);
        }
    }
    bound("10 runs, worst residual", worst, 1e-7)
}

fn special_functions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let draws = 25;
    let (mut gauss, mut kummer, mut reflection): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..draws {
        let a = C64::new(rng.gen_range(-0.5..1.0), rng.gen_range(-1.0..1.0));
        let b = C64::new(rng.gen_range(-0.5..1.0), rng.gen_range(-1.0..1.0));
        let excess = C64::new(rng.gen_range(1.3..3.0), rng.gen_range(-1.0..1.0));
        let c = a + b + excess;
        let p = Hyp2F1Params::new(a, b, c).map_err(err)?;
        let limit = gamma(c).map_err(err)? * gamma(excess).map_err(err)?
            / (gamma(c - a).map_err(err)? * gamma(c - b).map_err(err)?);
        gauss = gauss.max(rel(hyp2f1(&p, 1.0 - 1e-6).map_err(err)?, limit));

        let a = C64::new(rng.gen_range(-0.5..1.0), rng.gen_range(-2.0..2.0));
        let b = C64::new(rng.gen_range(-0.5..1.0), rng.gen_range(-2.0..2.0));
        let c = C64::new(rng.gen_range(0.3..3.0), rng.gen_range(-2.0..2.0));
        let z: f64 = rng.gen_range(0.1..0.9);
        let p = Hyp2F1Params::new(a, b, c).map_err(err)?;
        let conn = kummer_connection(&p).map_err(err)?;
        let w = 1.0 - z;
        let rhs = conn.regular
            * hyp2f1_series(&conn.regular_params, w, MAX_SERIES_TERMS).map_err(err)?
            + conn.singular
                * (conn.exponent * w.ln()).exp()
                * hyp2f1_series(&conn.singular_params, w, MAX_SERIES_TERMS).map_err(err)?;
        let lhs = hyp2f1_series(&p, z, MAX_SERIES_TERMS).map_err(err)?;
        kummer = kummer.max(rel(rhs, lhs));

        let mut t = C64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-3.0..3.0));
        if (t.re - t.re.round()).abs() < 1e-3 {
            t.re += 0.01;
        }
        let v = gamma(t).map_err(err)? * gamma(1.0 - t).map_err(err)? * (PI * t).sin() / PI;
        reflection = reflection.max((v - 1.0).norm());
    }
    if gauss >= 1e-5 {
        return Err(format!("Gauss summation {gauss:.2e}"));
    }
    if kummer >= 1e-10 {
        return Err(format!("connection {kummer:.2e}"));
    }
    bound(
        &format!("{draws} draws: Gauss {gauss:.1e}; connection {kummer:.1e}; reflection"),
        reflection,
        1e-10,
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact-solution certification", exact_solutions),
        ("Wronskian", wronskian),
        ("shape invariance", shape_invariance),
        ("landmarks", landmark_criterion),
        ("unitarity", unitarity),
        ("closed form vs asymptotic fit", fitted_scattering),
        ("boundary condition", boundary),
        ("zero-energy identities", zero_energy),
        ("coupled-system executability", appendix),
        ("special-function substrate", special_functions),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
