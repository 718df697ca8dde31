//! Closed-form checks of the long-wave theory.
//!
//! Everything here is analytic: the KdV soliton, the first-order family of
//! approximate solitary waves, the two fundamental solutions of the linearised
//! profile equation and the symbol `q(xi^2)` whose positivity underlies the
//! existence argument. Derivatives are written out by hand.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::{build_params, ExponentSet, ModelParams};

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

/// `u1 = sech^2 x tanh x` and `u2 = (-6 - cosh 2x + 15 sech^2 x - 15 x sech^2 x tanh x) / 8`,
/// the solutions of `-u'' + (4 - 12 sech^2 x) u = 0` with
/// `u1(0) = 0, u1'(0) = 1, u2(0) = 1, u2'(0) = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FundamentalPair;

impl FundamentalPair {
    pub fn u1(&self, x: f64) -> f64 {
        let s2 = sech(x).powi(2);
        s2 * x.tanh()
    }

    pub fn u1_prime(&self, x: f64) -> f64 {
        let s2 = sech(x).powi(2);
        s2 * (3.0 * s2 - 2.0)
    }

    pub fn u1_second(&self, x: f64) -> f64 {
        let s2 = sech(x).powi(2);
        4.0 * s2 * x.tanh() * (1.0 - 3.0 * s2)
    }

    pub fn u2(&self, x: f64) -> f64 {
        let s2 = sech(x).powi(2);
        (-6.0 - (2.0 * x).cosh() + 15.0 * s2 - 15.0 * x * s2 * x.tanh()) / 8.0
    }

    pub fn u2_prime(&self, x: f64) -> f64 {
        let s2 = sech(x).powi(2);
        let t = x.tanh();
        (-2.0 * (2.0 * x).sinh() - 45.0 * s2 * t - 15.0 * x * s2 * (3.0 * s2 - 2.0)) / 8.0
    }

    pub fn u2_second(&self, x: f64) -> f64 {
        let s2 = sech(x).powi(2);
        let t = x.tanh();
        (-4.0 * (2.0 * x).cosh()
            - 60.0 * s2 * (3.0 * s2 - 2.0)
            - 60.0 * x * s2 * t * (1.0 - 3.0 * s2))
            / 8.0
    }

    pub fn wronskian(&self, x: f64) -> f64 {
        self.u1_prime(x) * self.u2(x) - self.u1(x) * self.u2_prime(x)
    }
}

/// `-u'' + (4 - 12 sech^2 x) u`, divided by the size of its largest term so
/// that the exponentially growing `u2` is judged on the same footing as `u1`.
///
/// The equation `-gamma u'' + (4 gamma - 3 eta_0) u = 0` with
/// `eta_0 = 4 gamma sech^2 x` is `gamma` times this one, so the check is
/// independent of `gamma`.
fn scaled_residual(u: f64, upp: f64, x: f64) -> f64 {
    let pot = (4.0 - 12.0 * sech(x).powi(2)) * u;
    let scale = 1.0f64.max(upp.abs()).max(pot.abs());
    (-upp + pot).abs() / scale
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalReport {
    pub max_residual_u1: f64,
    pub max_residual_u2: f64,
    pub max_wronskian_error: f64,
    /// Least-squares slope of `ln |u1|` on `[3, 10]`.
    pub decay_exponent: f64,
    /// Least-squares slope of `ln |u2|` on `[3, 10]`.
    pub growth_exponent: f64,
}

impl FundamentalReport {
    pub fn passes(&self) -> bool {
        self.max_residual_u1 <= 1e-10
            && self.max_residual_u2 <= 1e-10
            && self.max_wronskian_error <= 1e-12
            && (self.decay_exponent + 2.0).abs() <= 0.04
            && (self.growth_exponent - 2.0).abs() <= 0.04
    }
}

fn log_slope(f: impl Fn(f64) -> f64) -> f64 {
    let n = 141;
    let xs: Vec<f64> = (0..n)
        .map(|k| 3.0 + 7.0 * k as f64 / (n - 1) as f64)
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x).abs().ln()).collect();
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn fundamental_checks(grid: &[f64]) -> FundamentalReport {
    let fp = FundamentalPair;
    let (r1, r2, w) = grid
        .par_iter()
        .map(|&x| {
            (
                scaled_residual(fp.u1(x), fp.u1_second(x), x),
                scaled_residual(fp.u2(x), fp.u2_second(x), x),
                (fp.wronskian(x) - 1.0).abs(),
            )
        })
        .reduce(
            || (0.0, 0.0, 0.0),
            |a, b| (a.0.max(b.0), a.1.max(b.1), a.2.max(b.2)),
        );
    FundamentalReport {
        max_residual_u1: r1,
        max_residual_u2: r2,
        max_wronskian_error: w,
        decay_exponent: log_slope(|x| fp.u1(x)),
        growth_exponent: log_slope(|x| fp.u2(x)),
    }
}

/// Largest residual of `2 c1 eta0 - (3/2) eta0^2 - gamma eta0''` for
/// `eta0 = 4 gamma sech^2 x`, `c1 = 2 gamma`.
pub fn verify_kdv_solution(gamma: f64, grid: &[f64]) -> f64 {
    let c1 = 2.0 * gamma;
    grid.iter()
        .map(|&x| {
            let s2 = sech(x).powi(2);
            let eta = 4.0 * gamma * s2;
            let eta_pp = 4.0 * gamma * (4.0 * s2 - 6.0 * s2 * s2);
            (2.0 * c1 * eta - 1.5 * eta * eta - gamma * eta_pp).abs()
        })
        .fold(0.0, f64::max)
}

/// `q(xi^2) = -det [[0, (1 - a0)^T], [1 - a0, xi^2 (A0 - 1 ⊗ a0) + A1]]`,
/// where `(1 ⊗ a0)_ij = a0_j`.
pub fn q_symbol(params: &ModelParams, xi: f64) -> f64 {
    let n = params.p.len();
    let xi2 = xi * xi;
    let m = DMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
        (0, 0) => 0.0,
        (0, j) => 1.0 - params.a0[j - 1],
        (i, 0) => 1.0 - params.a0[i - 1],
        (i, j) => {
            let (i, j) = (i - 1, j - 1);
            xi2 * (params.a0_mat[(i, j)] - params.a0[j]) + params.a1[(i, j)]
        }
    });
    -m.determinant()
}

/// Smallest sampled value of `q(xi^2)` for `xi` in `[0, xi_max]`.
pub fn q_positivity(p: &ExponentSet, xi_max: f64, samples: usize) -> Result<f64> {
    if !(xi_max > 0.0 && xi_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "xi_max must be positive, got {xi_max}"
        )));
    }
    if samples < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 samples, got {samples}"
        )));
    }
    let params = build_params(p)?;
    let values: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let xi = xi_max * k as f64 / (samples - 1) as f64;
            (xi, q_symbol(&params, xi))
        })
        .collect();
    let mut min = f64::INFINITY;
    for (xi, value) in values {
        if !(value > 0.0) {
            return Err(Error::NonPositiveDetected { xi, value });
        }
        min = min.min(value);
    }
    Ok(min)
}

/// Leading terms of the small-amplitude family with `c = 1 + alpha delta^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderFamily {
    pub c: f64,
    pub eta: Vec<f64>,
    pub phi0: Vec<f64>,
    /// `phi[j][k]` is the `j`-th higher potential coefficient at `grid[k]`.
    pub phi: Vec<Vec<f64>>,
}

pub fn first_order_family(
    params: &ModelParams,
    delta: f64,
    alpha: f64,
    grid: &[f64],
) -> Result<FirstOrderFamily> {
    if !(delta > 0.0 && alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "delta and alpha must be positive, got delta = {delta}, alpha = {alpha}"
        )));
    }
    let gamma = params.gamma;
    let k = (alpha / (2.0 * gamma)).sqrt();
    let d2 = delta * delta;
    let d4 = d2 * d2;
    let eta = grid
        .iter()
        .map(|&x| 2.0 * alpha * d2 * sech(k * x).powi(2))
        .collect();
    let phi0_amp = -2.0 * (2.0 * alpha * gamma).sqrt() * d2;
    let phi0 = grid.iter().map(|&x| phi0_amp * (k * x).tanh()).collect();
    let phi = params
        .gamma_vec
        .iter()
        .map(|&gj| {
            let amp = -4.0 * alpha * gj * k * d4;
            grid.iter()
                .map(|&x| amp * (k * x).tanh() * sech(k * x).powi(2))
                .collect()
        })
        .collect();
    Ok(FirstOrderFamily {
        c: 1.0 + alpha * d2,
        eta,
        phi0,
        phi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
            .collect()
    }

    fn central(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = 1e-5;
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn initial_values() {
        let fp = FundamentalPair;
        assert_eq!(fp.u1(0.0), 0.0);
        assert_eq!(fp.u1_prime(0.0), 1.0);
        assert_eq!(fp.u2(0.0), 1.0);
        assert_eq!(fp.u2_prime(0.0), 0.0);
        for x in [0.0, 1.0, 5.0] {
            assert!((fp.wronskian(x) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let fp = FundamentalPair;
        for x in linspace(-3.0, 3.0, 25) {
            let checks = [
                (central(|y| fp.u1(y), x), fp.u1_prime(x)),
                (central(|y| fp.u1_prime(y), x), fp.u1_second(x)),
                (central(|y| fp.u2(y), x), fp.u2_prime(x)),
                (central(|y| fp.u2_prime(y), x), fp.u2_second(x)),
            ];
            for (fd, exact) in checks {
                assert!(
                    (fd - exact).abs() <= 1e-8 * exact.abs().max(1.0),
                    "x = {x}: {fd} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn suite_passes() {
        let r = fundamental_checks(&linspace(-10.0, 10.0, 2001));
        assert!(r.passes(), "{r:?}");
        assert!(verify_kdv_solution(1.0 / 3.0, &linspace(-10.0, 10.0, 2001)) <= 1e-12);
        assert_eq!(verify_kdv_solution(1.0, &[0.0]), 0.0);
    }

    #[test]
    fn symbol_for_single_exponent() {
        let p = ExponentSet::quadratic();
        let params = build_params(&p).unwrap();
        for xi in [0.0, 1.0, 10.0] {
            assert!((q_symbol(&params, xi) - 4.0 / 9.0).abs() <= 1e-14);
        }
        let min = q_positivity(&p, 10.0, 100).unwrap();
        assert!((min - 4.0 / 9.0).abs() <= 1e-14);
        assert!(q_positivity(&p, 10.0, 99).is_err());
    }

    #[test]
    fn family_reduces_to_kdv() {
        let params = build_params(&ExponentSet::quadratic()).unwrap();
        let delta = 0.2;
        let grid = linspace(-5.0, 5.0, 101);
        let fam = first_order_family(&params, delta, 2.0 * params.gamma, &grid).unwrap();
        let kdv = crate::profile::kdv_profile(delta, &grid);
        for (a, b) in fam.eta.iter().zip(&kdv) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(fam.phi[0][50], 0.0);
        let far = first_order_family(&params, delta, 0.5, &[-40.0, 40.0]).unwrap();
        let lim = 2.0 * (2.0 * 0.5 * params.gamma).sqrt() * delta * delta;
        assert!((far.phi0[0] - lim).abs() < 1e-15);
        assert!((far.phi0[1] + lim).abs() < 1e-15);
    }
}
