//! Crest data `(eta(0), u(0), phi1(0) = 0)` of the solitary wave.
//!
//! At the crest `phi1 = 0`, so the two first integrals become algebraic in
//! `(eta(0), u(0))`. The first one gives `eta(0) = -c u - u^2/2`; substituting
//! into the second leaves a quartic in `u(0)`:
//!
//! ```text
//! 7u^4 + 42c u^3 + 6(16c^2 - 3) u^2 + 8c(13c^2 - 8) u + 8(6c^2 - 1)(c^2 - 1) = 0
//! ```

use nalgebra::{Complex, Matrix4};

use crate::error::{Error, Result};
use crate::ode::{denominator, identity_residuals, WaveState};

/// Imaginary parts below this (relative) count as real roots.
const REAL_TOL: f64 = 1e-10;
/// A conjugate pair this close to the real axis is a coalesced double root,
/// which happens at the critical amplitude.
const DOUBLE_ROOT_TOL: f64 = 1e-7;
const SECOND_IDENTITY_TOL: f64 = 1e-9;
const D_FLOOR: f64 = -1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrestState {
    pub delta: f64,
    pub c: f64,
    pub eta0: f64,
    pub u0: f64,
    pub phi1_0: f64,
}

impl CrestState {
    pub fn state(&self) -> WaveState {
        WaveState::new(self.eta0, self.u0, self.phi1_0)
    }

    pub fn depth(&self) -> f64 {
        1.0 + self.eta0
    }

    pub fn denominator(&self) -> f64 {
        denominator(&self.state(), self.c, self.delta)
    }

    pub fn identity_residuals(&self) -> (f64, f64) {
        identity_residuals(&self.state(), self.c, self.delta)
    }
}

/// `c = 1 + (2/3) delta^2`.
pub fn phase_speed(delta: f64) -> f64 {
    1.0 + 2.0 / 3.0 * delta * delta
}

/// Crest quartic coefficients in descending degree.
pub fn quartic_coeffs(c: f64) -> [f64; 5] {
    let c2 = c * c;
    [
        7.0,
        42.0 * c,
        6.0 * (16.0 * c2 - 3.0),
        8.0 * c * (13.0 * c2 - 8.0),
        8.0 * (6.0 * c2 - 1.0) * (c2 - 1.0),
    ]
}

/// `d/dc` of [`quartic_coeffs`].
pub(crate) fn quartic_coeffs_dc(c: f64) -> [f64; 5] {
    let c2 = c * c;
    [
        0.0,
        42.0,
        192.0 * c,
        312.0 * c2 - 64.0,
        192.0 * c2 * c - 112.0 * c,
    ]
}

pub(crate) fn horner(coeffs: &[f64; 5], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &a| acc * x + a)
}

pub(crate) fn horner_derivative(coeffs: &[f64; 5], x: f64) -> f64 {
    coeffs[..4]
        .iter()
        .enumerate()
        .fold(0.0, |acc, (k, &a)| acc * x + a * (4 - k) as f64)
}

fn horner_complex(coeffs: &[f64; 5], z: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    let mut p = Complex::new(0.0, 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    for &a in coeffs {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All four roots, from the eigenvalues of the companion matrix followed by a
/// few Newton polishing steps.
pub fn quartic_roots(coeffs: &[f64; 5]) -> [Complex<f64>; 4] {
    let lead = coeffs[0];
    let mut companion = Matrix4::<f64>::zeros();
    for j in 0..4 {
        companion[(0, j)] = -coeffs[j + 1] / lead;
    }
    for i in 1..4 {
        companion[(i, i - 1)] = 1.0;
    }
    let eig = companion.complex_eigenvalues();
    let mut roots = [Complex::new(0.0, 0.0); 4];
    for (slot, &z0) in roots.iter_mut().zip(eig.iter()) {
        let mut z = z0;
        for _ in 0..3 {
            let (p, dp) = horner_complex(coeffs, z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            // A near-double root makes Newton wander; keep the eigenvalue then.
            if step.norm() > 1e-6 * (1.0 + z.norm()) {
                break;
            }
            z -= step;
        }
        *slot = z;
    }
    roots
}

/// Real candidates for `u(0)`: genuine real roots plus the real part of any
/// conjugate pair that has coalesced onto the real axis.
fn real_candidates(coeffs: &[f64; 5]) -> Vec<f64> {
    let coeff_scale: f64 = coeffs.iter().map(|a| a.abs()).sum();
    let mut out: Vec<f64> = Vec::new();
    for z in quartic_roots(coeffs) {
        let scale = 1.0 + z.norm();
        let real = z.im.abs() <= REAL_TOL * scale;
        let coalesced = z.im.abs() <= DOUBLE_ROOT_TOL * scale
            && horner_derivative(coeffs, z.re).abs() <= 1e-5 * coeff_scale;
        if (real || coalesced) && !out.iter().any(|&r| (r - z.re).abs() <= 1e-12 * scale) {
            out.push(z.re);
        }
    }
    out
}

fn admissible(delta: f64, c: f64, u0: f64) -> Option<CrestState> {
    if !(u0 > -1.0 && u0 < 0.0) {
        return None;
    }
    let eta0 = -c * u0 - 0.5 * u0 * u0;
    if !(eta0 > 0.0 && eta0 < 1.0) {
        return None;
    }
    let crest = CrestState {
        delta,
        c,
        eta0,
        u0,
        phi1_0: 0.0,
    };
    if crest.denominator() < D_FLOOR {
        return None;
    }
    let (_, i2) = crest.identity_residuals();
    if i2.abs() > SECOND_IDENTITY_TOL {
        return None;
    }
    Some(crest)
}

pub fn solve_crest(delta: f64) -> Result<CrestState> {
    solve_crest_with_hint(delta, None)
}

/// Solve for the crest, choosing among admissible roots the one closest to
/// `hint` (a `u(0)` from a nearby `delta`), or to the long-wave value
/// `-(4/3) delta^2` when no hint is given.
pub fn solve_crest_with_hint(delta: f64, hint: Option<f64>) -> Result<CrestState> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let c = phase_speed(delta);
    let target = hint.unwrap_or(-4.0 / 3.0 * delta * delta);
    let mut survivors: Vec<CrestState> = real_candidates(&quartic_coeffs(c))
        .into_iter()
        .filter_map(|u0| admissible(delta, c, u0))
        .collect();
    survivors.sort_by(|a, b| {
        (a.u0 - target)
            .abs()
            .partial_cmp(&(b.u0 - target).abs())
            .expect("finite roots")
    });
    match survivors.as_slice() {
        [] => Err(Error::NoSolitaryRoot { delta }),
        [best, second, ..]
            if ((best.u0 - target).abs() - (second.u0 - target).abs()).abs() <= 1e-12 =>
        {
            Err(Error::AmbiguousRoot {
                delta,
                candidates: survivors.iter().map(|s| s.u0).collect(),
            })
        }
        [best, ..] => Ok(*best),
    }
}
