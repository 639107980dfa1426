//! Dormand-Prince 5(4) for complex-valued first-order systems.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const DEFAULT_RTOL: f64 = 1e-10;
pub const DEFAULT_ATOL: f64 = 1e-12;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order weights (equal to the last row of A)
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: DEFAULT_RTOL,
            atol: DEFAULT_ATOL,
            max_steps: 1_000_000,
        }
    }
}

type Rhs<'a, const N: usize> = &'a dyn Fn(f64, &[C64; N]) -> [C64; N];

fn axpy<const N: usize>(y: &[C64; N], h: f64, k: &[[C64; N]; 7], w: &[f64]) -> [C64; N] {
    let mut out = *y;
    for (j, &wj) in w.iter().enumerate() {
        if wj != 0.0 {
            for i in 0..N {
                out[i] += h * wj * k[j][i];
            }
        }
    }
    out
}

/// One step; returns the fifth-order solution and the embedded error.
fn step<const N: usize>(f: Rhs<N>, x: f64, y: &[C64; N], h: f64) -> ([C64; N], [C64; N]) {
    let mut k = [[C64::new(0.0, 0.0); N]; 7];
    k[0] = f(x, y);
    for s in 1..7 {
        let ys = axpy(y, h, &k, &A[s][..s]);
        k[s] = f(x + C[s] * h, &ys);
    }
    let y5 = axpy(y, h, &k, &B5);
    let mut err = [C64::new(0.0, 0.0); N];
    for i in 0..N {
        for s in 0..7 {
            err[i] += h * (B5[s] - B4[s]) * k[s][i];
        }
    }
    (y5, err)
}

impl Dopri5 {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    fn error_norm<const N: usize>(&self, y: &[C64; N], y_new: &[C64; N], err: &[C64; N]) -> f64 {
        let mut acc = 0.0;
        for i in 0..N {
            let scale = self.atol + self.rtol * y[i].norm().max(y_new[i].norm());
            acc += (err[i].norm() / scale).powi(2);
        }
        (acc / N as f64).sqrt()
    }

    /// Integrate `y' = f(x, y)` from `x0` to `x1` (either direction).
    pub fn integrate<const N: usize>(
        &self,
        f: Rhs<N>,
        x0: f64,
        y0: [C64; N],
        x1: f64,
    ) -> Result<[C64; N]> {
        let span = x1 - x0;
        if span == 0.0 {
            return Ok(y0);
        }
        let dir = span.signum();
        let mut x = x0;
        let mut y = y0;
        let mut h = dir * (1e-3 * span.abs()).min(1e-2);
        for _ in 0..self.max_steps {
            if (x1 - x) * dir <= 0.0 {
                return Ok(y);
            }
            let last = (x + h - x1) * dir >= 0.0;
            let h_try = if last { x1 - x } else { h };
            let (y_new, err) = step(f, x, &y, h_try);
            let e = self.error_norm(&y, &y_new, &err);
            if !e.is_finite() {
                h *= 0.2;
            } else if e <= 1.0 {
                x = if last { x1 } else { x + h_try };
                y = y_new;
                let grow = if e == 0.0 {
                    5.0
                } else {
                    (0.9 * e.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = h_try * grow;
            } else {
                h = h_try * (0.9 * e.powf(-0.2)).clamp(0.2, 1.0);
            }
            if h.abs() < 1e-14 * x.abs().max(1.0) {
                return Err(Error::StepUnderflow { x });
            }
        }
        Err(Error::TooManySteps(self.max_steps))
    }

    /// Fixed-step fifth-order propagation with `steps` equal steps.
    pub fn integrate_fixed<const N: usize>(
        f: Rhs<N>,
        x0: f64,
        y0: [C64; N],
        x1: f64,
        steps: usize,
    ) -> [C64; N] {
        let h = (x1 - x0) / steps.max(1) as f64;
        let mut y = y0;
        for s in 0..steps.max(1) {
            y = step(f, x0 + s as f64 * h, &y, h).0;
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation(omega: f64) -> impl Fn(f64, &[C64; 1]) -> [C64; 1] {
        move |_, y| [C64::new(0.0, omega) * y[0]]
    }

    #[test]
    fn exponential_both_directions() {
        let f = rotation(1.7);
        let solver = Dopri5::default();
        let one = [C64::new(1.0, 0.0)];
        let y = solver.integrate(&f, 0.0, one, 10.0).unwrap();
        assert!((y[0] - C64::new(0.0, 17.0).exp()).norm() < 1e-9);
        let back = solver.integrate(&f, 10.0, y, 0.0).unwrap();
        assert!((back[0] - 1.0).norm() < 1e-9);
    }

    #[test]
    fn fixed_step_order() {
        let f = rotation(1.0);
        let one = [C64::new(1.0, 0.0)];
        let exact = C64::new(0.0, 4.0).exp();
        let e1 = (Dopri5::integrate_fixed(&f, 0.0, one, 4.0, 20)[0] - exact).norm();
        let e2 = (Dopri5::integrate_fixed(&f, 0.0, one, 4.0, 40)[0] - exact).norm();
        assert!(e1 / e2 > 30.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn underflow_at_singularity() {
        // y' = y² with y(0) = 1 is 1/(1 - x)
        let f = |_: f64, y: &[C64; 1]| [y[0] * y[0]];
        let r = Dopri5::default().integrate(&f, 0.0, [C64::new(1.0, 0.0)], 2.0);
        assert!(r.is_err());
    }
}
