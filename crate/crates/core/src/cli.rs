//! Tables behind the `ces` subcommands and their CSV / JSON encodings.
//!
//! Complex quantities always occupy a `name.re`, `name.im` column pair.
//! Floats are written with 17 significant digits so they round-trip.

use std::collections::HashSet;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::oracle::{
    residual_z_sampled_at, sample_fd, wronskian_numeric, GridSpec, VerificationReport,
};
use crate::potentials::{self, landmarks, PotentialSpec, Sign};
use crate::scattering::{self, ScatteringResult};
use crate::solutions::{
    make_params, solution_z_sum, wronskian_closed, zero_energy_hypergeometric, zero_energy_state,
    Branch, Coordinate, Point, ZeroEnergy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parameter(format!("unknown format '{other}'"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Rows of equal width under named columns, plus free-form metadata.
///
/// An optional leading text column carries row labels (used for check
/// names); every other cell is a float.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    label_column: Option<String>,
    columns: Vec<String>,
    labels: Vec<String>,
    rows: Vec<Vec<f64>>,
    meta: Map<String, Value>,
}

/// `name.re`, `name.im`.
pub fn complex_columns(name: &str) -> [String; 2] {
    [format!("{name}.re"), format!("{name}.im")]
}

fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_float(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::build(None, columns.into_iter().map(Into::into).collect())
    }

    pub fn labelled<S: Into<String>>(
        label_column: &str,
        columns: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        Self::build(
            Some(label_column.to_string()),
            columns.into_iter().map(Into::into).collect(),
        )
    }

    fn build(label_column: Option<String>, columns: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for name in label_column.iter().chain(columns.iter()) {
            if !seen.insert(name.clone()) {
                return Err(Error::Parameter(format!("duplicate column '{name}'")));
            }
        }
        Ok(Self {
            label_column,
            columns,
            labels: Vec::new(),
            rows: Vec::new(),
            meta: Map::new(),
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn meta(&self) -> &Map<String, Value> {
        &self.meta
    }

    pub fn set_meta(&mut self, key: &str, value: Value) {
        self.meta.insert(key.to_string(), value);
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if self.label_column.is_some() {
            return Err(Error::Parameter("this table needs a row label".into()));
        }
        self.push_row(row)
    }

    pub fn push_labelled(&mut self, label: impl Into<String>, row: Vec<f64>) -> Result<()> {
        if self.label_column.is_none() {
            return Err(Error::Parameter("this table has no label column".into()));
        }
        self.push_row(row)?;
        self.labels.push(label.into());
        Ok(())
    }

    fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Parameter(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self
            .label_column
            .iter()
            .chain(self.columns.iter())
            .map(|c| csv_text(c))
            .collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells: Vec<String> = Vec::with_capacity(row.len() + 1);
            if self.label_column.is_some() {
                cells.push(csv_text(&self.labels[i]));
            }
            cells.extend(row.iter().map(|&v| format_float(v)));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut obj = Map::new();
                if let Some(name) = &self.label_column {
                    obj.insert(name.clone(), Value::String(self.labels[i].clone()));
                }
                for (c, &v) in self.columns.iter().zip(row) {
                    obj.insert(c.clone(), json_float(v));
                }
                Value::Object(obj)
            })
            .collect();
        json!({ "meta": Value::Object(self.meta.clone()), "rows": rows })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("plain JSON value");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn write_to(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        out.write_all(self.render(format).as_bytes())
    }
}

fn x_points(grid: &GridSpec) -> Result<Vec<f64>> {
    if !(grid.start() > 0.0) {
        return Err(Error::Domain {
            name: "x",
            value: grid.start(),
            domain: "(0, inf)",
        });
    }
    Ok(grid.points())
}

/// `x, W, V_plus, V_minus, hulthen_ref` with landmarks in the metadata.
///
/// The Hulthén reference uses `Q = m²`, the strength of the `1/(e^x - 1)`
/// term shared by both partners.
pub fn potential_table(m: f64, grid: &GridSpec) -> Result<Table> {
    let plus = PotentialSpec::plus(m)?;
    let minus = plus.partner();
    let mut table = Table::new(["x", "W", "V_plus", "V_minus", "hulthen_ref"])?;
    for x in x_points(grid)? {
        table.push(vec![
            x,
            potentials::superpotential(x, m)?,
            potentials::potential(x, plus)?,
            potentials::potential(x, minus)?,
            potentials::hulthen(x, m * m)?,
        ])?;
    }
    table.set_meta("m", json!(m));
    if m > 0.0 {
        let l = landmarks(m)?;
        let mut marks = Map::new();
        if let Some((sm, sp)) = l.zero_crossings {
            marks.insert(
                "zero_crossings".into(),
                json!({ "s_minus": sm, "s_plus": sp, "x_minus": sm.ln(), "x_plus": sp.ln() }),
            );
        }
        if let Some((s2, s1)) = l.critical_points {
            marks.insert(
                "critical_points".into(),
                json!({ "s2": s2, "s1": s1, "x2": s2.ln(), "x1": s1.ln() }),
            );
        }
        if !marks.is_empty() {
            table.set_meta("landmarks_of_V_minus", Value::Object(marks));
        }
    }
    Ok(table)
}

fn complex_json(v: C64) -> Value {
    json!({ "re": v.re, "im": v.im })
}

/// `coord, Z.re, Z.im, Z.abs, residual` for one exact solution.
///
/// The residual column is the relative z-equation residual at the point,
/// with `Z''` differenced from the analytic `Z'`.
pub fn solve_table(
    m: f64,
    omega: f64,
    branch: Branch,
    sign: Sign,
    variable: Coordinate,
    grid: &GridSpec,
) -> Result<Table> {
    if omega == 0.0 {
        return Err(Error::Parameter(
            "omega = 0 has no scattering solution here; use the `zero-energy` subcommand".into(),
        ));
    }
    let p = make_params(omega, m)?;
    let spec = PotentialSpec::new(m, sign)?;
    let sum = solution_z_sum(branch, sign, &p)?;
    let f = |z: f64| sum.value_and_dz(Point::from_z(z)?);
    let [re, im] = complex_columns("Z");
    let mut table = Table::new([
        variable.to_string(),
        re,
        im,
        "Z.abs".into(),
        "residual".into(),
    ])?;
    for coord in grid.points() {
        let pt = Point::at(variable, coord)?;
        let value = sum.value(pt)?;
        let residual = residual_z_sampled_at(&f, spec, omega, pt.z())?;
        table.push(vec![coord, value.re, value.im, value.norm(), residual])?;
    }
    // Wronskian of (Z I, Z II) in x at x = 1
    let other = solution_z_sum(Branch::I, sign, &p)?;
    let second = solution_z_sum(Branch::II, sign, &p)?;
    let fa = |x: f64| other.value(Point::from_x(x)?);
    let fb = |x: f64| second.value(Point::from_x(x)?);
    let numeric = wronskian_numeric(
        &sample_fd(&fa, Coordinate::X, 1.0)?,
        &sample_fd(&fb, Coordinate::X, 1.0)?,
    )?;
    table.set_meta("m", json!(m));
    table.set_meta("omega", json!(omega));
    table.set_meta("branch", json!(branch.to_string()));
    table.set_meta("sign", json!(sign.to_string()));
    table.set_meta("variable", json!(variable.to_string()));
    table.set_meta("c1", complex_json(p.c1()));
    table.set_meta("wronskian_numeric_x1", complex_json(numeric));
    table.set_meta("wronskian_closed", complex_json(wronskian_closed(sign, &p)));
    Ok(table)
}

fn unwrap_phase(previous: Option<f64>, phase: f64) -> f64 {
    match previous {
        Some(prev) => {
            let two_pi = 2.0 * std::f64::consts::PI;
            phase + two_pi * ((prev - phase) / two_pi).round()
        }
        None => phase,
    }
}

/// Amplitudes of both partners along an `ω` sweep.
///
/// Phases are unwrapped along the sweep. A row whose evaluation fails is
/// kept with NaN cells and `flag = 1`.
pub fn scatter_table(m: f64, omegas: &GridSpec) -> Result<Table> {
    if !(omegas.start() > 0.0) {
        return Err(Error::Domain {
            name: "omega",
            value: omegas.start(),
            domain: "(0, inf)",
        });
    }
    if !(m > 0.0) {
        return Err(Error::Parameter(format!("scatter needs m > 0, got {m}")));
    }
    let mut columns = vec!["omega".to_string()];
    columns.extend(complex_columns("S_plus"));
    columns.push("phase_plus".into());
    columns.extend(complex_columns("S_minus"));
    columns.extend([
        "phase_minus".into(),
        "unitarity_error_plus".into(),
        "unitarity_error_minus".into(),
        "flag".into(),
    ]);
    let mut table = Table::new(columns)?;
    let (mut last_plus, mut last_minus) = (None, None);
    let mut failures = Vec::new();
    for omega in omegas.points() {
        let pair: Result<(ScatteringResult, ScatteringResult)> =
            scattering::scattering_amplitude_plus(omega, m)
                .and_then(|sp| Ok((sp, scattering::scattering_amplitude_minus(omega, m)?)));
        match pair {
            Ok((sp, sm)) => {
                let pp = unwrap_phase(last_plus, sp.phase_shift);
                let pm = unwrap_phase(last_minus, sm.phase_shift);
                last_plus = Some(pp);
                last_minus = Some(pm);
                table.push(vec![
                    omega,
                    sp.amplitude.re,
                    sp.amplitude.im,
                    pp,
                    sm.amplitude.re,
                    sm.amplitude.im,
                    pm,
                    sp.modulus_error,
                    sm.modulus_error,
                    0.0,
                ])?;
            }
            Err(e) => {
                failures.push(json!({ "omega": omega, "error": e.to_string() }));
                let mut row = vec![f64::NAN; 10];
                row[0] = omega;
                row[9] = 1.0;
                table.push(row)?;
            }
        }
    }
    table.set_meta("m", json!(m));
    table.set_meta(
        "convention",
        json!("Y ~ S exp(i omega x) - exp(-i omega x)"),
    );
    table.set_meta(
        "S_minus",
        json!("derived: connection formula on the minus-sign solution; equals S_plus at -m"),
    );
    if !failures.is_empty() {
        table.set_meta("failed_rows", Value::Array(failures));
    }
    Ok(table)
}

/// Zero-energy states and the agreement of their two representations.
pub fn zero_energy_table(m: f64, grid: &GridSpec) -> Result<Table> {
    let mut columns = vec!["x".to_string()];
    columns.extend(complex_columns("psi_minus"));
    columns.extend(complex_columns("psi_plus"));
    columns.push("hyp_consistency_error".into());
    let mut table = Table::new(columns)?;
    for x in x_points(grid)? {
        let a = zero_energy_state(x, m, ZeroEnergy::PsiMinus)?;
        let b = zero_energy_state(x, m, ZeroEnergy::PsiPlus)?;
        let z = (-x).exp();
        let mut err: f64 = 0.0;
        // the hypergeometric form lives on z in (0, 1)
        if z > 0.0 && z < 1.0 && m != 0.0 {
            for (closed, which) in [(a, ZeroEnergy::PsiMinus), (b, ZeroEnergy::PsiPlus)] {
                let hyp = zero_energy_hypergeometric(z, m, which)?;
                err = err.max((hyp - closed).norm() / closed.norm());
            }
        }
        table.push(vec![x, a.re, a.im, b.re, b.im, err])?;
    }
    table.set_meta("m", json!(m));
    Ok(table)
}

/// One row per verification check.
pub fn verify_table(reports: &[VerificationReport]) -> Result<Table> {
    let mut table = Table::labelled(
        "check",
        [
            "max_residual",
            "tolerance",
            "passed",
            "samples",
            "degenerate",
        ],
    )?;
    for r in reports {
        table.push_labelled(
            r.name.clone(),
            vec![
                r.max_residual,
                r.tolerance,
                f64::from(u8::from(r.passed)),
                r.samples as f64,
                f64::from(u8::from(r.degenerate)),
            ],
        )?;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    table.set_meta("checks", json!(reports.len()));
    table.set_meta("failed", json!(failed));
    table.set_meta("passed", json!(failed == 0));
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Spacing;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["a", "b.re"]).unwrap();
        t.push(vec![1.0, 0.1]).unwrap();
        let csv = t.to_csv();
        assert_eq!(csv, "a,b.re\n1.0000000000000000e0,1.0000000000000001e-1\n");
        let back: f64 = csv
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(1)
            .unwrap()
            .parse()
            .unwrap();
        assert_eq!(back, 0.1);
        assert!(t.push(vec![1.0]).is_err());
        assert!(Table::new(["a", "a"]).is_err());
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(["x", "y"]).unwrap();
        t.push(vec![0.5, f64::NAN]).unwrap();
        t.set_meta("m", json!(2.0));
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["meta"]["m"], json!(2.0));
        assert_eq!(v["rows"][0]["x"], json!(0.5));
        assert!(v["rows"][0]["y"].is_null());
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["meta", "rows"]);
    }

    #[test]
    fn labelled_rows_are_quoted_when_needed() {
        let mut t = Table::labelled("check", ["v"]).unwrap();
        t.push_labelled("a, b", vec![1.0]).unwrap();
        assert!(t.to_csv().contains("\"a, b\","));
        assert!(t.push(vec![1.0]).is_err());
    }

    #[test]
    fn potential_rows() {
        let grid = GridSpec::uniform(0.1, 6.0, 50).unwrap();
        let t = potential_table(0.5, &grid).unwrap();
        let vm = t.column("V_minus").unwrap();
        assert!(t.rows().iter().all(|r| r[vm] < 0.0));
        assert!(t.meta().get("landmarks_of_V_minus").is_none());
        // crossings at x = ln(8 ± 4√3), about 0.069 and 2.70
        let grid = GridSpec::uniform(0.01, 6.0, 300).unwrap();
        let t = potential_table(2.0, &grid).unwrap();
        let signs: Vec<bool> = t.rows().iter().map(|r| r[vm] > 0.0).collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(changes, 2);
        let bad = GridSpec::uniform(-1.0, 1.0, 10).unwrap();
        assert!(potential_table(1.0, &bad).is_err());
    }

    #[test]
    fn solve_rows() {
        let grid = GridSpec::uniform(0.05, 0.95, 10).unwrap();
        let t = solve_table(1.0, 1.0, Branch::II, Sign::Plus, Coordinate::Z, &grid).unwrap();
        let r = t.column("residual").unwrap();
        assert!(t.rows().iter().all(|row| row[r] < 1e-8));
        let w = &t.meta()["wronskian_numeric_x1"];
        assert!((w["re"].as_f64().unwrap() - 1.0).abs() < 1e-8);
        assert!((w["im"].as_f64().unwrap() - 4.0).abs() < 1e-8);
        let e = solve_table(1.0, 0.0, Branch::I, Sign::Plus, Coordinate::Z, &grid).unwrap_err();
        assert!(e.to_string().contains("zero-energy"));
    }

    #[test]
    fn scatter_rows() {
        let grid = GridSpec::uniform(0.25, 4.0, 40).unwrap();
        let t = scatter_table(1.0, &grid).unwrap();
        let u = t.column("unitarity_error_plus").unwrap();
        let ph = t.column("phase_plus").unwrap();
        for w in t.rows().windows(2) {
            assert!((w[1][ph] - w[0][ph]).abs() < 1.0);
        }
        assert!(t.rows().iter().all(|r| r[u] < 1e-10));
        let grid = GridSpec::new(0.5, 2.0, 5, Spacing::Log).unwrap();
        let t = scatter_table(1.0, &grid).unwrap();
        let one = &t.rows()[2];
        assert_eq!(one[0], 1.0);
        let s = scattering::scattering_amplitude_plus(1.0, 1.0)
            .unwrap()
            .amplitude;
        assert_eq!((one[1], one[2]), (s.re, s.im));
    }

    #[test]
    fn zero_energy_rows() {
        let grid = GridSpec::uniform(0.2, 5.0, 25).unwrap();
        let t = zero_energy_table(1.0, &grid).unwrap();
        for r in t.rows() {
            assert!(r[5] < 1e-10);
            let a = C64::new(r[1], r[2]);
            let b = C64::new(r[3], r[4]);
            assert!((a * b - 1.0).norm() < 1e-12);
        }
    }
}
