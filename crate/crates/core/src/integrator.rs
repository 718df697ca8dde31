//! Dormand–Prince 5(4) with PI step-size control and 4th-order dense output.
//!
//! Coefficients and the step controller follow Hairer & Wanner's `DOPRI5`.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

/// Continuous extension over one accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseSegment<const N: usize> {
    pub x0: f64,
    pub h: f64,
    coeffs: [[f64; N]; 5],
}

impl<const N: usize> DenseSegment<N> {
    /// Cubic Hermite interpolant from end values and end slopes.
    pub fn hermite(
        x0: f64,
        h: f64,
        y0: &[f64; N],
        y1: &[f64; N],
        f0: &[f64; N],
        f1: &[f64; N],
    ) -> Self {
        let mut coeffs = [[0.0; N]; 5];
        for i in 0..N {
            let dy = y1[i] - y0[i];
            coeffs[0][i] = y0[i];
            coeffs[1][i] = dy;
            coeffs[2][i] = h * f0[i] - dy;
            coeffs[3][i] = dy - h * f1[i] - coeffs[2][i];
        }
        Self { x0, h, coeffs }
    }

    pub fn x1(&self) -> f64 {
        self.x0 + self.h
    }

    pub fn eval(&self, x: f64) -> [f64; N] {
        let theta = (x - self.x0) / self.h;
        let theta1 = 1.0 - theta;
        let c = &self.coeffs;
        let mut y = [0.0; N];
        for i in 0..N {
            y[i] = c[0][i]
                + theta * (c[1][i] + theta1 * (c[2][i] + theta * (c[3][i] + theta1 * c[4][i])));
        }
        y
    }
}

/// Accepted-step samples plus dense output covering `[xs[0], xs.last()]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub xs: Vec<f64>,
    pub ys: Vec<[f64; N]>,
    pub segments: Vec<DenseSegment<N>>,
}

impl<const N: usize> Trajectory<N> {
    pub fn start(x0: f64, y0: [f64; N]) -> Self {
        Self {
            xs: vec![x0],
            ys: vec![y0],
            segments: Vec::new(),
        }
    }

    pub fn x_end(&self) -> f64 {
        *self.xs.last().expect("trajectory is never empty")
    }

    pub fn y_end(&self) -> [f64; N] {
        *self.ys.last().expect("trajectory is never empty")
    }

    pub fn push(&mut self, seg: DenseSegment<N>, y1: [f64; N]) {
        self.xs.push(seg.x1());
        self.ys.push(y1);
        self.segments.push(seg);
    }

    /// Drop every sample after index `keep`.
    pub fn truncate(&mut self, keep: usize) {
        self.xs.truncate(keep + 1);
        self.ys.truncate(keep + 1);
        self.segments.truncate(keep);
    }

    /// Dense evaluation; `None` outside the covered interval.
    pub fn eval(&self, x: f64) -> Option<[f64; N]> {
        let (lo, hi) = (self.xs[0], self.x_end());
        if x < lo || x > hi {
            return None;
        }
        if self.segments.is_empty() {
            return Some(self.ys[0]);
        }
        let idx = self.xs.partition_point(|&xi| xi <= x).saturating_sub(1);
        let idx = idx.min(self.segments.len() - 1);
        if x == self.xs[idx] {
            return Some(self.ys[idx]);
        }
        Some(self.segments[idx].eval(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let s: f64 = terms.iter().map(|(a, k)| a * k[i]).sum();
        *o += h * s;
    }
    out
}

/// Integrate `y' = f(x, y)` forward from `traj`'s last sample up to `x_end`.
///
/// The observer sees every accepted sample and may stop the integration.
/// Evaluation failures inside `f` abort with that error.
pub fn extend<const N: usize, F, O>(
    traj: &mut Trajectory<N>,
    mut f: F,
    x_end: f64,
    opts: &StepOptions,
    mut observer: O,
) -> Result<()>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    O: FnMut(&Trajectory<N>) -> Control,
{
    let mut x = traj.x_end();
    let mut y = traj.y_end();
    let mut k1 = f(x, &y)?;
    let mut h = opts.initial_step.min(opts.max_step).min(x_end - x);
    let mut err_old: f64 = 1e-4;
    let mut rejected = false;

    for _ in 0..opts.max_steps {
        if x >= x_end {
            return Ok(());
        }
        if h < opts.min_step {
            return Err(Error::StepSizeUnderflow { x, h });
        }
        let last = x + h >= x_end;
        if last {
            h = x_end - x;
        }

        let k2 = f(x + C2 * h, &axpy(&y, h, &[(A21, &k1)]))?;
        let k3 = f(x + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
        let k4 = f(
            x + C4 * h,
            &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        )?;
        let k5 = f(
            x + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        )?;
        let k6 = f(
            x + h,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        )?;
        let y1 = axpy(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = f(x + h, &y1)?;

        let mut err = 0.0;
        for i in 0..N {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y1[i].abs());
            err += (e / scale).powi(2);
        }
        let err = (err / N as f64).sqrt();

        let fac11 = err.powf(0.2 - BETA * 0.75);
        if err <= 1.0 {
            let fac = (fac11 / err_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = (h / fac).min(opts.max_step);
            if rejected {
                h_new = h_new.min(h);
            }
            err_old = err.max(1e-4);
            rejected = false;

            let mut coeffs = [[0.0; N]; 5];
            for i in 0..N {
                let dy = y1[i] - y[i];
                let bspl = h * k1[i] - dy;
                coeffs[0][i] = y[i];
                coeffs[1][i] = dy;
                coeffs[2][i] = bspl;
                coeffs[3][i] = dy - h * k7[i] - bspl;
                coeffs[4][i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            traj.push(DenseSegment { x0: x, h, coeffs }, y1);
            x = if last { x_end } else { x + h };
            y = y1;
            k1 = k7;
            h = h_new;

            if observer(traj) == Control::Stop {
                return Ok(());
            }
        } else {
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
            rejected = true;
        }
    }
    Err(Error::StepSizeUnderflow { x, h })
}
