//! Exact solutions of the partner Schrödinger equations at energy `E = ω²`.
//!
//! Every solution is a short sum of terms `coef · z^p · v^q · ₂F₁(a,b;c;arg)`
//! with `z = e^{-x}`, `v = 1 - z` and `arg` either `z` or `v`. The sum
//! representation ([`HypergeometricSum`]) gives values, analytic derivatives
//! and the leading `z -> 0` behaviour from the same data.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{domain, Error, Result};
use crate::potentials::Sign;
use crate::special_fn::{hyp2f1_complement, kummer_connection, Hyp2F1Params};

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Which of the two independent z-variable solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    I,
    II,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::I => "I",
            Branch::II => "II",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" | "1" => Ok(Branch::I),
            "II" | "ii" | "2" => Ok(Branch::II),
            other => Err(Error::Parameter(format!("unknown branch '{other}'"))),
        }
    }
}

/// Coordinate a sample is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coordinate {
    X,
    Z,
    V,
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coordinate::X => "x",
            Coordinate::Z => "z",
            Coordinate::V => "v",
        })
    }
}

impl FromStr for Coordinate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Coordinate::X),
            "z" => Ok(Coordinate::Z),
            "v" => Ok(Coordinate::V),
            other => Err(Error::Parameter(format!("unknown coordinate '{other}'"))),
        }
    }
}

/// A point of the half line carried as the pair `(z, v = 1 - z)` so that
/// both ends keep full relative precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    z: f64,
    v: f64,
}

impl Point {
    pub fn from_x(x: f64) -> Result<Self> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(domain("x", x, "(0, inf)"));
        }
        Ok(Self {
            z: (-x).exp(),
            v: -(-x).exp_m1(),
        })
    }

    pub fn from_z(z: f64) -> Result<Self> {
        if !(z > 0.0 && z < 1.0) {
            return Err(domain("z", z, "(0, 1)"));
        }
        Ok(Self { z, v: 1.0 - z })
    }

    pub fn from_v(v: f64) -> Result<Self> {
        if !(v > 0.0 && v < 1.0) {
            return Err(domain("v", v, "(0, 1)"));
        }
        Ok(Self { z: 1.0 - v, v })
    }

    pub fn at(coordinate: Coordinate, value: f64) -> Result<Self> {
        match coordinate {
            Coordinate::X => Self::from_x(value),
            Coordinate::Z => Self::from_z(value),
            Coordinate::V => Self::from_v(value),
        }
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn x(&self) -> f64 {
        if self.z < 0.5 {
            -self.z.ln()
        } else {
            -(-self.v).ln_1p()
        }
    }

    pub fn coordinate(&self, coordinate: Coordinate) -> f64 {
        match coordinate {
            Coordinate::X => self.x(),
            Coordinate::Z => self.z,
            Coordinate::V => self.v,
        }
    }
}

/// Value and derivative of a wavefunction at one point; the derivative is
/// taken with respect to `coordinate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionSample {
    pub coordinate: Coordinate,
    pub coord: f64,
    pub value: C64,
    pub derivative: C64,
}

impl SolutionSample {
    pub fn new(coordinate: Coordinate, coord: f64, value: C64, derivative: C64) -> Result<Self> {
        let ok = match coordinate {
            Coordinate::X => coord > 0.0 && coord.is_finite(),
            Coordinate::Z | Coordinate::V => coord > 0.0 && coord < 1.0,
        };
        if !ok {
            return Err(domain(
                "coord",
                coord,
                "the physical range of the coordinate",
            ));
        }
        Ok(Self {
            coordinate,
            coord,
            value,
            derivative,
        })
    }
}

/// `(a, b, c)` of one hypergeometric factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

impl Triple {
    fn params(&self) -> Result<Hyp2F1Params> {
        Hyp2F1Params::new(self.a, self.b, self.c)
    }

    /// Parameters of the second local solution at the origin,
    /// `z^{1-c} F(a-c+1, b-c+1; 2-c; z)`.
    fn second(&self) -> Result<Hyp2F1Params> {
        Hyp2F1Params::new(self.a - self.c + 1.0, self.b - self.c + 1.0, 2.0 - self.c)
    }
}

/// ω together with every derived exponent and hypergeometric parameter.
///
/// Indices `k` are 1 or 2, matching the two components of the coupled
/// first-order system; any other index panics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    omega: f64,
    m: f64,
    exponents: [C64; 2],
    z_family: [Triple; 2],
    v_exponents: [C64; 2],
    v_family: [Triple; 2],
    g1: C64,
    h1: C64,
}

const INTEGER_GAP: f64 = 1e-10;

fn distance_to_integer(x: C64) -> f64 {
    (x - x.re.round()).norm()
}

/// Spectral parameters for `ω > 0` and `m != 0`, normalised with
/// `G1 = H1 = 1`.
pub fn make_params(omega: f64, m: f64) -> Result<SpectralParams> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Parameter(format!(
            "omega must be positive (zero energy has its own closed form), got {omega}"
        )));
    }
    if m == 0.0 || !m.is_finite() {
        return Err(Error::Parameter(format!("m must be nonzero, got {m}")));
    }
    let root = (m * m + omega * omega).sqrt();
    let a1 = I * omega + 0.5;
    let a2 = I * omega;
    let z_triple = |a: C64| Triple {
        a: a + I * root,
        b: a - I * root,
        c: 2.0 * a + 0.5,
    };
    let b1 = c(0.5) + I * omega;
    let b2 = I * omega;
    let v_triple = |b: C64| Triple {
        a: b + I * root,
        b: b - I * root,
        c: c(0.5),
    };
    let params = SpectralParams {
        omega,
        m,
        exponents: [a1, a2],
        z_family: [z_triple(a1), z_triple(a2)],
        v_exponents: [b1, b2],
        v_family: [v_triple(b1), v_triple(b2)],
        g1: c(1.0),
        h1: c(1.0),
    };
    for t in &params.z_family {
        if distance_to_integer(t.c) <= INTEGER_GAP || distance_to_integer(2.0 - t.c) <= INTEGER_GAP
        {
            return Err(Error::Parameter(format!(
                "c = {} is too close to an integer",
                t.c
            )));
        }
    }
    Ok(params)
}

impl SpectralParams {
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn energy(&self) -> f64 {
        self.omega * self.omega
    }

    fn idx(k: usize) -> usize {
        assert!(k == 1 || k == 2, "component index must be 1 or 2, got {k}");
        k - 1
    }

    /// `A_k`, the exponent of `z` at the origin of the z-family.
    pub fn exponent(&self, k: usize) -> C64 {
        self.exponents[Self::idx(k)]
    }

    /// `(a_k, b_k, c_k)`.
    pub fn z_triple(&self, k: usize) -> Triple {
        self.z_family[Self::idx(k)]
    }

    /// `B_k`, the exponent of `z = 1 - v` in the v-family.
    pub fn v_exponent(&self, k: usize) -> C64 {
        self.v_exponents[Self::idx(k)]
    }

    /// `(α_k, β_k, γ_k)`.
    pub fn v_triple(&self, k: usize) -> Triple {
        self.v_family[Self::idx(k)]
    }

    pub fn g1(&self) -> C64 {
        self.g1
    }

    pub fn h1(&self) -> C64 {
        self.h1
    }

    pub fn c1(&self) -> C64 {
        self.z_family[0].c
    }

    /// Residual of `A² - A/2 - iωε/2 + ω² = 0` with `ε = +1` for k = 1 and
    /// `ε = -1` for k = 2.
    pub fn indicial_residual(&self, k: usize) -> f64 {
        let a = self.exponent(k);
        let eps = if k == 1 { 1.0 } else { -1.0 };
        (a * a - a / 2.0 - I * self.omega * eps / 2.0 + self.energy()).norm()
    }

    /// Copy with `c1` shifted by `delta`. This breaks the exact solutions
    /// and exists so verification can be shown to fail.
    pub fn with_perturbed_c1(&self, delta: C64) -> Self {
        let mut p = *self;
        p.z_family[0].c += delta;
        p
    }
}

/// Argument of the hypergeometric factor of a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Argument {
    Z,
    V,
}

/// `coef · z^z_power · v^v_power · ₂F₁(params; argument)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricTerm {
    pub coef: C64,
    pub z_power: C64,
    pub v_power: C64,
    pub params: Hyp2F1Params,
    pub argument: Argument,
}

fn real_pow(base: f64, p: C64) -> C64 {
    if p == C64::new(0.0, 0.0) {
        c(1.0)
    } else {
        (p * base.ln()).exp()
    }
}

fn hyp_at(params: &Hyp2F1Params, argument: Argument, pt: Point) -> Result<C64> {
    match argument {
        Argument::Z => hyp2f1_complement(params, pt.z, pt.v),
        Argument::V => hyp2f1_complement(params, pt.v, pt.z),
    }
}

impl HypergeometricTerm {
    fn prefactor(&self, pt: Point) -> C64 {
        self.coef * real_pow(pt.z, self.z_power) * real_pow(pt.v, self.v_power)
    }

    pub fn value(&self, pt: Point) -> Result<C64> {
        Ok(self.prefactor(pt) * hyp_at(&self.params, self.argument, pt)?)
    }

    /// Value and derivative with respect to `z`.
    pub fn value_and_dz(&self, pt: Point) -> Result<(C64, C64)> {
        let pre = self.prefactor(pt);
        let f = hyp_at(&self.params, self.argument, pt)?;
        let (factor, dparams) = self.params.derivative()?;
        let df = factor * hyp_at(&dparams, self.argument, pt)?;
        let chain = match self.argument {
            Argument::Z => 1.0,
            Argument::V => -1.0,
        };
        let mut log_deriv = self.z_power / pt.z;
        if self.v_power != C64::new(0.0, 0.0) {
            log_deriv -= self.v_power / pt.v;
        }
        let value = pre * f;
        Ok((value, value * log_deriv + pre * df * chain))
    }
}

/// A finite sum of [`HypergeometricTerm`]s.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HypergeometricSum {
    terms: Vec<HypergeometricTerm>,
}

impl HypergeometricSum {
    pub fn new(terms: Vec<HypergeometricTerm>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[HypergeometricTerm] {
        &self.terms
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| HypergeometricTerm {
                    coef: t.coef * factor,
                    ..*t
                })
                .collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self { terms }
    }

    pub fn value(&self, pt: Point) -> Result<C64> {
        self.terms.iter().map(|t| t.value(pt)).sum()
    }

    /// Value and derivative with respect to `z`.
    pub fn value_and_dz(&self, pt: Point) -> Result<(C64, C64)> {
        let mut value = c(0.0);
        let mut dz = c(0.0);
        for t in &self.terms {
            let (v, d) = t.value_and_dz(pt)?;
            value += v;
            dz += d;
        }
        Ok((value, dz))
    }

    /// Sample with the derivative taken in `coordinate`.
    pub fn sample(&self, pt: Point, coordinate: Coordinate) -> Result<SolutionSample> {
        let (value, dz) = self.value_and_dz(pt)?;
        let derivative = match coordinate {
            Coordinate::Z => dz,
            Coordinate::V => -dz,
            Coordinate::X => -pt.z * dz,
        };
        SolutionSample::new(coordinate, pt.coordinate(coordinate), value, derivative)
    }

    /// Leading behaviour as `z -> 0` (`x -> inf`): pairs `(p, coefficient)`
    /// such that the sum is `Σ coefficient · z^p · (1 + O(z))`.
    ///
    /// Terms in `v` are continued to `z` with the `v -> 1 - v` connection
    /// formula. Equal exponents are merged; the result is sorted by `Re p`.
    pub fn leading_powers(&self) -> Result<Vec<(C64, C64)>> {
        let mut out: Vec<(C64, C64)> = Vec::new();
        let mut push = |p: C64, coef: C64| {
            if let Some(slot) = out.iter_mut().find(|(q, _)| (*q - p).norm() < 1e-12) {
                slot.1 += coef;
            } else {
                out.push((p, coef));
            }
        };
        for t in &self.terms {
            match t.argument {
                Argument::Z => push(t.z_power, t.coef),
                Argument::V => {
                    let k = kummer_connection(&t.params)?;
                    push(t.z_power, t.coef * k.regular);
                    push(t.z_power + k.exponent, t.coef * k.singular);
                }
            }
        }
        out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
        Ok(out)
    }
}

fn z_term(coef: C64, z_power: C64, params: Hyp2F1Params) -> HypergeometricTerm {
    HypergeometricTerm {
        coef,
        z_power,
        v_power: c(0.0),
        params,
        argument: Argument::Z,
    }
}

fn v_term(coef: C64, z_power: C64, v_power: C64, params: Hyp2F1Params) -> HypergeometricTerm {
    HypergeometricTerm {
        coef,
        z_power,
        v_power,
        params,
        argument: Argument::V,
    }
}

/// The pair `(R̃1, R̃2)` of the coupled first-order system in `z`.
///
/// Branch I starts from `G1 z^{A1} F(a1,b1;c1;z)`, branch II from the
/// second local solution `H1 z^{A1+1-c1} F(a1-c1+1,b1-c1+1;2-c1;z)`; in each
/// case `R̃2` is fixed by the first-order system.
pub fn rtilde_pair_sums(
    branch: Branch,
    p: &SpectralParams,
) -> Result<(HypergeometricSum, HypergeometricSum)> {
    let [t1, t2] = p.z_family;
    let [a1, a2] = p.exponents;
    let im = I * p.m;
    match branch {
        Branch::I => {
            let r1 = z_term(p.g1, a1, t1.params()?);
            let r2 = z_term(p.g1 * (t1.c - 1.0) / im, a2, t2.params()?);
            Ok((
                HypergeometricSum::new(vec![r1]),
                HypergeometricSum::new(vec![r2]),
            ))
        }
        Branch::II => {
            let r1 = z_term(p.h1, a1 + 1.0 - t1.c, t1.second()?);
            let h2 = p.h1 * (t1.a - t1.c + 1.0) * (t1.b - t1.c + 1.0) / (im * (2.0 - t1.c));
            let r2 = z_term(h2, a2 + 1.0 - t2.c, t2.second()?);
            Ok((
                HypergeometricSum::new(vec![r1]),
                HypergeometricSum::new(vec![r2]),
            ))
        }
    }
}

fn pair_at(branch: Branch, z: f64, p: &SpectralParams) -> Result<(C64, C64)> {
    let pt = Point::from_z(z)?;
    let (r1, r2) = rtilde_pair_sums(branch, p)?;
    Ok((r1.value(pt)?, r2.value(pt)?))
}

#[allow(non_snake_case)]
pub fn rtilde_pair_I(z: f64, p: &SpectralParams) -> Result<(C64, C64)> {
    pair_at(Branch::I, z, p)
}

#[allow(non_snake_case)]
pub fn rtilde_pair_II(z: f64, p: &SpectralParams) -> Result<(C64, C64)> {
    pair_at(Branch::II, z, p)
}

/// `Z± = e^{-iπ/4}(R̃1 ± i R̃2)` as a sum.
pub fn solution_z_sum(branch: Branch, sign: Sign, p: &SpectralParams) -> Result<HypergeometricSum> {
    let (r1, r2) = rtilde_pair_sums(branch, p)?;
    let phase = C64::from_polar(1.0, -FRAC_PI_4);
    Ok(r1.scaled(phase).plus(&r2.scaled(phase * I * sign.factor())))
}

/// `Z±^I` or `Z±^II` at `z ∈ (0, 1)`.
pub fn solution_z(branch: Branch, sign: Sign, z: f64, p: &SpectralParams) -> Result<C64> {
    solution_z_sum(branch, sign, p)?.value(Point::from_z(z)?)
}

/// The fundamental system built around `v = 1 - z = 0` (the origin of `x`),
/// with unit normalisation constants.
///
/// ```text
/// Z̃^I  = z^{B1} F(α1,β1;γ1;v) - (μ/γ1) z^{B2} v^{1-γ2} F(α2-γ2+1,β2-γ2+1;2-γ2;v)
/// Z̃^II = z^{B1} v^{1-γ1} F(α1-γ1+1,β1-γ1+1;2-γ1;v) - (γ1/μ) z^{B2} F(α2,β2;γ2;v)
/// ```
///
/// with `μ = m` for `V+` and `μ = -m` for `V-` (the two equations differ by
/// `m -> -m`, and every parameter except `μ` depends on `m²` only).
pub fn solution_v_sum(branch: Branch, sign: Sign, p: &SpectralParams) -> Result<HypergeometricSum> {
    let [t1, t2] = p.v_family;
    let [b1, b2] = p.v_exponents;
    let mu = sign.factor() * p.m;
    let gamma1 = t1.c;
    let terms = match branch {
        Branch::I => vec![
            v_term(c(1.0), b1, c(0.0), t1.params()?),
            v_term(-mu / gamma1, b2, 1.0 - t2.c, t2.second()?),
        ],
        Branch::II => vec![
            v_term(c(1.0), b1, 1.0 - t1.c, t1.second()?),
            v_term(-gamma1 / mu, b2, c(0.0), t2.params()?),
        ],
    };
    Ok(HypergeometricSum::new(terms))
}

/// `Z̃±^I` or `Z̃±^II` at `v ∈ (0, 1)`.
pub fn solution_v(branch: Branch, sign: Sign, v: f64, p: &SpectralParams) -> Result<C64> {
    solution_v_sum(branch, sign, p)?.value(Point::from_v(v)?)
}

/// Wronskian in `x` of `(Z±^I, Z±^II)` for `G1 = H1 = 1`: `±2ω(c1 - 1)/m`.
pub fn wronskian_closed(sign: Sign, p: &SpectralParams) -> C64 {
    sign.factor() * 2.0 * p.omega * (p.c1() - 1.0) / p.m
}

/// Coefficients expressing the v-family through the z-family:
/// `Z̃^k = M[k][0] Z^I + M[k][1] Z^II` (k = 0 for branch I, 1 for II).
///
/// Computed from Wronskians at `pt`; the result does not depend on `pt`
/// beyond rounding.
pub fn connection_matrix(sign: Sign, p: &SpectralParams, pt: Point) -> Result<[[C64; 2]; 2]> {
    let zi = solution_z_sum(Branch::I, sign, p)?.value_and_dz(pt)?;
    let zii = solution_z_sum(Branch::II, sign, p)?.value_and_dz(pt)?;
    let w = |f: (C64, C64), g: (C64, C64)| f.0 * g.1 - g.0 * f.1;
    let base = w(zi, zii);
    let mut out = [[c(0.0); 2]; 2];
    for (k, branch) in [Branch::I, Branch::II].into_iter().enumerate() {
        let y = solution_v_sum(branch, sign, p)?.value_and_dz(pt)?;
        out[k] = [w(y, zii) / base, w(zi, y) / base];
    }
    Ok(out)
}

/// The two zero-energy states `ψ0∓ = exp(∓∫W)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroEnergy {
    /// Annihilated by `d/dx + W`; solves the `V-` equation at `E = 0`.
    PsiMinus,
    /// Annihilated by `-d/dx + W`; solves the `V+` equation at `E = 0`.
    PsiPlus,
}

impl ZeroEnergy {
    /// Upper (`-1`) or lower (`+1`) choice in the `∓` notation.
    fn upper(self) -> f64 {
        match self {
            ZeroEnergy::PsiMinus => -1.0,
            ZeroEnergy::PsiPlus => 1.0,
        }
    }
}

/// `ψ0∓ = [sqrt(1 - e^{-x}) + i e^{-x/2}]^{±2im}` (principal branch).
pub fn zero_energy_state(x: f64, m: f64, which: ZeroEnergy) -> Result<C64> {
    let pt = Point::from_x(x)?;
    let base = C64::new(pt.v.sqrt(), pt.z.sqrt());
    // ψ0- carries +2im, ψ0+ carries -2im
    let exponent = -which.upper() * 2.0 * I * m;
    Ok((exponent * base.ln()).exp())
}

/// `ψ0∓ = F(∓im, ±im; 1/2; z) ∓ 2m z^{1/2} F(1/2 ∓ im, 1/2 ± im; 3/2; z)`.
pub fn zero_energy_sum(m: f64, which: ZeroEnergy) -> Result<HypergeometricSum> {
    let s = which.upper();
    let im = I * m;
    Ok(HypergeometricSum::new(vec![
        z_term(c(1.0), c(0.0), Hyp2F1Params::new(s * im, -s * im, c(0.5))?),
        z_term(
            c(s * 2.0 * m),
            c(0.5),
            Hyp2F1Params::new(0.5 + s * im, 0.5 - s * im, c(1.5))?,
        ),
    ]))
}

pub fn zero_energy_hypergeometric(z: f64, m: f64, which: ZeroEnergy) -> Result<C64> {
    zero_energy_sum(m, which)?.value(Point::from_z(z)?)
}

/// The `ω = 0` pair: `R̃1 = z^{1/2} F(1/2+im, 1/2-im; 3/2; z)` and
/// `R̃2 = F(im, -im; 1/2; z) / (2mi)`.
pub fn zero_energy_rtilde_pair(z: f64, m: f64) -> Result<(C64, C64)> {
    if m == 0.0 {
        return Err(Error::Parameter("m must be nonzero".into()));
    }
    let pt = Point::from_z(z)?;
    let im = I * m;
    let r1 = z_term(
        c(1.0),
        c(0.5),
        Hyp2F1Params::new(0.5 + im, 0.5 - im, c(1.5))?,
    );
    let r2 = z_term(
        1.0 / (2.0 * im),
        c(0.0),
        Hyp2F1Params::new(im, -im, c(0.5))?,
    );
    Ok((r1.value(pt)?, r2.value(pt)?))
}

/// `∓2m e^{iπ/4} Z∓` with `Z∓ = e^{-iπ/4}(R̃1 ∓ iR̃2)` built from the `ω = 0`
/// pair, i.e. `∓2m (R̃1 ∓ iR̃2)`.
pub fn zero_energy_from_pair(z: f64, m: f64, which: ZeroEnergy) -> Result<C64> {
    let (r1, r2) = zero_energy_rtilde_pair(z, m)?;
    let s = which.upper();
    Ok(s * 2.0 * m * (r1 + s * I * r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn parameter_values() {
        let p = make_params(1.0, 1.0).unwrap();
        assert!(rel(p.c1(), C64::new(1.5, 2.0)) < 1e-15);
        let a1 = p.z_triple(1).a;
        assert!(rel(a1, C64::new(0.5, 1.0 + 2f64.sqrt())) < 1e-15);
        let q = make_params(0.5, 2.0).unwrap();
        assert_eq!(q.exponent(2), C64::new(0.0, 0.5));
        assert_eq!(q.exponent(2), q.v_exponent(2));
    }

    #[test]
    fn parameter_relations() {
        for (w, m) in [(1.0, 1.0), (0.3, -2.0), (3.0, 0.25)] {
            let p = make_params(w, m).unwrap();
            assert_eq!(p.exponent(1), p.exponent(2) + 0.5);
            assert!(p.indicial_residual(1) < 1e-14);
            assert!(p.indicial_residual(2) < 1e-14);
            let (t1, t2) = (p.z_triple(1), p.z_triple(2));
            assert!((t1.a - t2.a - 0.5).norm() < 1e-15);
            assert!((t1.b - t2.b - 0.5).norm() < 1e-15);
            assert!((t1.c - t2.c - 1.0).norm() < 1e-15);
            assert!((t1.c - C64::new(1.5, 2.0 * w)).norm() < 1e-15);
            for k in [1, 2] {
                let v = p.v_triple(k);
                assert_eq!(v.c, C64::new(0.5, 0.0));
                assert!((v.a + v.b - 2.0 * p.v_exponent(k)).norm() < 1e-14);
            }
            assert_eq!(p.g1(), C64::new(1.0, 0.0));
            assert_eq!(p.h1(), C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(make_params(0.0, 1.0).is_err());
        assert!(make_params(-1.0, 1.0).is_err());
        assert!(make_params(1.0, 0.0).is_err());
        assert!(make_params(f64::NAN, 1.0).is_err());
    }

    #[test]
    #[should_panic]
    fn bad_component_index() {
        make_params(1.0, 1.0).unwrap().exponent(3);
    }

    #[test]
    fn rtilde_limits_at_origin() {
        let p = make_params(1.0, 1.0).unwrap();
        let z = 1e-12;
        let (r1, _) = rtilde_pair_I(z, &p).unwrap();
        let scaled = r1 / (p.exponent(1) * z.ln()).exp();
        assert!((scaled - p.g1()).norm() < 1e-10);
        let (r1, _) = rtilde_pair_II(z, &p).unwrap();
        let scaled = r1 / ((p.exponent(1) + 1.0 - p.c1()) * z.ln()).exp();
        assert!((scaled - p.h1()).norm() < 1e-10);
    }

    #[test]
    fn rtilde_second_component_definition() {
        let p = make_params(0.7, 1.3).unwrap();
        let z: f64 = 0.5;
        let (_, r2) = rtilde_pair_I(z, &p).unwrap();
        let t2 = p.z_triple(2);
        let f = crate::special_fn::hyp2f1(&t2.params().unwrap(), z).unwrap();
        let ratio = r2 * I * p.m() / (p.c1() - 1.0) / ((p.exponent(2) * z.ln()).exp() * f);
        assert!((ratio - 1.0).norm() < 1e-14);
    }

    #[test]
    fn branch_two_coefficient() {
        let p = make_params(1.0, 1.0).unwrap();
        let (r1, r2) = rtilde_pair_sums(Branch::II, &p).unwrap();
        let t1 = p.z_triple(1);
        let expected = (t1.a - t1.c + 1.0) * (t1.b - t1.c + 1.0) / (I * p.m() * (2.0 - t1.c));
        assert!(rel(r2.terms()[0].coef / r1.terms()[0].coef, expected) < 1e-15);
    }

    #[test]
    fn solution_assembly() {
        let p = make_params(1.0, 1.0).unwrap();
        let z = 0.37;
        for branch in [Branch::I, Branch::II] {
            let (r1, r2) = pair_at(branch, z, &p).unwrap();
            let phase = C64::from_polar(1.0, -PI / 4.0);
            let plus = solution_z(branch, Sign::Plus, z, &p).unwrap();
            let minus = solution_z(branch, Sign::Minus, z, &p).unwrap();
            assert!(rel(plus, phase * (r1 + I * r2)) < 1e-15);
            assert!(rel(minus, phase * (r1 - I * r2)) < 1e-15);
        }
    }

    #[test]
    fn v_family_near_origin() {
        let p = make_params(1.0, 1.0).unwrap();
        let v = 1e-6;
        let m = p.m();
        let g1 = 0.5;
        let zi = solution_v(Branch::I, Sign::Plus, v, &p).unwrap();
        let zii = solution_v(Branch::II, Sign::Plus, v, &p).unwrap();
        assert!((zi - (1.0 - m / g1 * v.sqrt())).norm() < 10.0 * v);
        assert!((zii - (-g1 / m + v.sqrt())).norm() < 10.0 * v);
    }

    #[test]
    fn wronskian_closed_values() {
        let p = make_params(1.0, 1.0).unwrap();
        assert!(rel(wronskian_closed(Sign::Plus, &p), C64::new(1.0, 4.0)) < 1e-15);
        assert_eq!(
            wronskian_closed(Sign::Minus, &p),
            -wronskian_closed(Sign::Plus, &p)
        );
    }

    #[test]
    fn analytic_derivative_matches_difference() {
        let p = make_params(0.8, 1.4).unwrap();
        let sum = solution_v_sum(Branch::II, Sign::Minus, &p).unwrap();
        for z in [0.1, 0.45, 0.8] {
            let h = 1e-5;
            let f = |z: f64| sum.value(Point::from_z(z).unwrap()).unwrap();
            let fd =
                (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h);
            let (_, d) = sum.value_and_dz(Point::from_z(z).unwrap()).unwrap();
            assert!(rel(d, fd) < 1e-8, "z = {z}");
        }
    }

    #[test]
    fn samples_in_each_coordinate() {
        let p = make_params(1.0, 1.0).unwrap();
        let sum = solution_z_sum(Branch::I, Sign::Plus, &p).unwrap();
        let pt = Point::from_x(1.3).unwrap();
        let sz = sum.sample(pt, Coordinate::Z).unwrap();
        let sv = sum.sample(pt, Coordinate::V).unwrap();
        let sx = sum.sample(pt, Coordinate::X).unwrap();
        assert_eq!(sz.value, sx.value);
        assert_eq!(sv.derivative, -sz.derivative);
        assert!(rel(sx.derivative, -pt.z() * sz.derivative) < 1e-15);
        assert!((sx.coord - 1.3).abs() < 1e-15);
        assert!(SolutionSample::new(Coordinate::Z, 1.0, sz.value, sz.derivative).is_err());
    }

    #[test]
    fn point_round_trips() {
        let p = Point::from_x(50.0).unwrap();
        // v rounds to 1 here; z keeps full precision
        assert!(p.v() == 1.0 && p.z() > 0.0);
        assert!((p.x() - 50.0).abs() < 1e-13);
        let q = Point::from_x(1e-9).unwrap();
        assert!((q.x() - 1e-9).abs() < 1e-22);
        assert!(Point::from_v(0.0).is_err());
        assert!(Point::from_z(1.0).is_err());
    }

    #[test]
    fn zero_energy_values() {
        let v = zero_energy_state(LN_2, 1.0, ZeroEnergy::PsiMinus).unwrap();
        assert!((v.re - (-PI / 2.0).exp()).abs() < 1e-15);
        assert!(v.im.abs() < 1e-15);
        for x in [0.1, 1.0, 7.0, 30.0] {
            let a = zero_energy_state(x, 1.7, ZeroEnergy::PsiMinus).unwrap();
            let b = zero_energy_state(x, 1.7, ZeroEnergy::PsiPlus).unwrap();
            assert!((a * b - 1.0).norm() < 1e-13);
        }
        // base -> 1 at large x: bounded, not decaying
        let far = zero_energy_state(60.0, 2.0, ZeroEnergy::PsiPlus).unwrap();
        assert!((far.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_energy_forms_agree() {
        for m in [0.5, 1.0, 2.0] {
            for z in [0.2f64, 0.5, 0.8] {
                for which in [ZeroEnergy::PsiMinus, ZeroEnergy::PsiPlus] {
                    let closed = zero_energy_state(-z.ln(), m, which).unwrap();
                    let hyp = zero_energy_hypergeometric(z, m, which).unwrap();
                    let pair = zero_energy_from_pair(z, m, which).unwrap();
                    assert!(rel(hyp, closed) < 1e-10, "m={m} z={z} {which:?}");
                    assert!(rel(pair, closed) < 1e-10);
                }
            }
        }
        let z = 1e-10;
        let v = zero_energy_hypergeometric(z, 1.5, ZeroEnergy::PsiMinus).unwrap();
        assert!((v - (1.0 - 3.0 * z.sqrt())).norm() < 1e-9);
    }

    #[test]
    fn connection_matrix_is_point_independent() {
        let p = make_params(0.9, 1.1).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            let a = connection_matrix(sign, &p, Point::from_x(0.7).unwrap()).unwrap();
            let b = connection_matrix(sign, &p, Point::from_x(4.0).unwrap()).unwrap();
            for k in 0..2 {
                for j in 0..2 {
                    assert!((a[k][j] - b[k][j]).norm() < 1e-9 * a[k][j].norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn leading_powers_of_z_family() {
        let p = make_params(1.0, 1.0).unwrap();
        let sum = solution_z_sum(Branch::I, Sign::Plus, &p).unwrap();
        let lead = sum.leading_powers().unwrap();
        assert_eq!(lead.len(), 2);
        assert_eq!(lead[0].0, p.exponent(2));
    }
}
