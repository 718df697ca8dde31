//! Full symmetric profiles, KdV comparison, crest table and dimensional output.

use rayon::prelude::*;

use crate::crest::{solve_crest, CrestState};
use crate::error::{Error, Result};
use crate::ode::{
    crest_curvature, denominator, identity_residuals, integrate_half, reconstruct_potentials, rhs,
    HalfProfile, IntegratorConfig, StopReason, WaveState,
};

/// Spacing of the auxiliary uniform grid used by [`compare_kdv`].
const KDV_COMPARE_DX: f64 = 1e-2;

/// A sampled solitary wave on a grid symmetric about the crest.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveProfile {
    pub delta: f64,
    pub c: f64,
    pub grid: Vec<f64>,
    pub states: Vec<WaveState>,
    /// `eta'`; NaN at a corner crest.
    pub eta_prime: Vec<f64>,
    pub d_values: Vec<f64>,
    pub i1: Vec<f64>,
    pub i2: Vec<f64>,
    pub phi0_prime: Vec<f64>,
    pub phi1_prime: Vec<f64>,
    pub eta_max: f64,
    /// Crest curvature; `None` for the wave of extreme form.
    pub kappa0: Option<f64>,
    pub stop: StopReason,
    half: HalfProfile,
}

impl WaveProfile {
    /// Mirror a half profile through `x = 0`, sampling either at the accepted
    /// integrator steps or on a uniform grid of spacing `dx`.
    ///
    /// A missing `kappa0` marks a corner crest, where `eta'` is left undefined.
    pub fn from_half(half: HalfProfile, kappa0: Option<f64>, dx: Option<f64>) -> Result<Self> {
        let (xs, ys): (Vec<f64>, Vec<WaveState>) = match dx {
            None => (half.trajectory.xs.clone(), half.states().collect()),
            Some(dx) => {
                if !(dx > 0.0 && dx.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "dx must be positive, got {dx}"
                    )));
                }
                let n = (half.x_end() / dx).floor() as usize;
                (0..=n)
                    .map(|k| {
                        let x = k as f64 * dx;
                        let s = half.state_at(x).expect("x inside trajectory span");
                        (x, s)
                    })
                    .unzip()
            }
        };

        let mut grid = Vec::with_capacity(2 * xs.len() - 1);
        let mut states = Vec::with_capacity(2 * xs.len() - 1);
        for (x, s) in xs.iter().zip(&ys).skip(1).rev() {
            grid.push(-x);
            states.push(s.mirrored());
        }
        grid.extend_from_slice(&xs);
        states.extend_from_slice(&ys);

        let (c, delta) = (half.c, half.delta);
        let mut eta_prime: Vec<f64> = states
            .iter()
            .map(|s| rhs(s, c, delta, 0.0).map(|f| f[0]).unwrap_or(f64::NAN))
            .map(|v| if v.is_finite() { v } else { f64::NAN })
            .collect();
        if kappa0.is_none() {
            eta_prime[xs.len() - 1] = f64::NAN;
        }
        let d_values = states.iter().map(|s| denominator(s, c, delta)).collect();
        let (i1, i2) = states
            .iter()
            .map(|s| identity_residuals(s, c, delta))
            .unzip();
        let (phi0_prime, phi1_prime) = states.iter().map(|s| reconstruct_potentials(s, c)).unzip();
        let eta_max = ys[0].eta;

        Ok(Self {
            delta,
            c,
            grid,
            states,
            eta_prime,
            d_values,
            i1,
            i2,
            phi0_prime,
            phi1_prime,
            eta_max,
            kappa0,
            stop: half.stop,
            half,
        })
    }

    pub fn half(&self) -> &HalfProfile {
        &self.half
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn etas(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.eta).collect()
    }

    /// Dense evaluation anywhere inside the computed span, using symmetry for
    /// `x < 0`.
    pub fn state_at(&self, x: f64) -> Option<WaveState> {
        if x >= 0.0 {
            self.half.state_at(x)
        } else {
            self.half.state_at(-x).map(WaveState::mirrored)
        }
    }

    pub fn resampled(&self, dx: f64) -> Result<Self> {
        Self::from_half(self.half.clone(), self.kappa0, Some(dx))
    }

    pub fn max_identity_residuals(&self) -> (f64, f64) {
        let max_abs = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        (max_abs(&self.i1), max_abs(&self.i2))
    }
}

pub fn solve_solitary(delta: f64, cfg: &IntegratorConfig) -> Result<WaveProfile> {
    let crest = solve_crest(delta)?;
    let kappa0 = crest_curvature(&crest)?;
    let half = integrate_half(&crest, cfg)?;
    WaveProfile::from_half(half, Some(kappa0), None)
}

/// `(4/3) delta^2 sech^2 x`.
pub fn kdv_profile(delta: f64, grid: &[f64]) -> Vec<f64> {
    let amp = 4.0 / 3.0 * delta * delta;
    grid.iter()
        .map(|&x| {
            let s = 1.0 / x.cosh();
            amp * s * s
        })
        .collect()
}

/// `sup |eta - eta_KdV|` over the profile grid together with a uniform grid
/// evaluated through the dense output.
pub fn compare_kdv(profile: &WaveProfile) -> f64 {
    let amp = 4.0 / 3.0 * profile.delta * profile.delta;
    let kdv = |x: f64| amp / x.cosh().powi(2);
    let on_grid = profile
        .grid
        .iter()
        .zip(&profile.states)
        .map(|(&x, s)| (s.eta - kdv(x)).abs())
        .fold(0.0f64, f64::max);
    let x_end = profile.half.x_end();
    let n = (x_end / KDV_COMPARE_DX).floor() as usize;
    let dense = (0..=n)
        .filter_map(|k| {
            let x = k as f64 * KDV_COMPARE_DX;
            profile.half.state_at(x).map(|s| (s.eta - kdv(x)).abs())
        })
        .fold(0.0f64, f64::max);
    on_grid.max(dense)
}

/// One row of the crest diagnostics table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub delta: f64,
    pub eta0: f64,
    /// `-kappa(0)`; absent at the critical amplitude.
    pub minus_kappa0: Option<f64>,
    pub d0: f64,
}

fn table_row(delta: f64) -> Result<TableRow> {
    let crest: CrestState = solve_crest(delta)?;
    let minus_kappa0 = match crest_curvature(&crest) {
        Ok(k) => Some(-k),
        Err(Error::DenominatorVanished { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(TableRow {
        delta,
        eta0: crest.eta0,
        minus_kappa0,
        d0: crest.denominator(),
    })
}

/// Crest height, curvature and denominator for each `delta`, in input order.
/// Failing rows are reported individually.
pub fn diagnostics_table(deltas: &[f64]) -> Vec<Result<TableRow>> {
    deltas.par_iter().map(|&d| table_row(d)).collect()
}

/// A profile expressed in physical units.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionalProfile {
    pub depth: f64,
    pub gravity: f64,
    /// Horizontal length scale `h / delta`.
    pub wavelength: f64,
    pub x: Vec<f64>,
    pub eta: Vec<f64>,
    pub u: Vec<f64>,
    /// `d eta* / d x* = delta eta'`.
    pub slope: Vec<f64>,
    pub c: f64,
    pub amplitude: f64,
}

impl DimensionalProfile {
    /// Long-wave estimate `(1 + a / 2h) sqrt(g h)`.
    pub fn long_wave_speed(&self) -> f64 {
        (1.0 + self.amplitude / (2.0 * self.depth)) * (self.gravity * self.depth).sqrt()
    }
}

pub fn dimensionalize(
    profile: &WaveProfile,
    depth: f64,
    gravity: f64,
) -> Result<DimensionalProfile> {
    if !(depth > 0.0 && gravity > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "depth and gravity must be positive, got h = {depth}, g = {gravity}"
        )));
    }
    let wavelength = depth / profile.delta;
    let speed = (gravity * depth).sqrt();
    Ok(DimensionalProfile {
        depth,
        gravity,
        wavelength,
        x: profile.grid.iter().map(|x| wavelength * x).collect(),
        eta: profile.states.iter().map(|s| depth * s.eta).collect(),
        u: profile.states.iter().map(|s| speed * s.u).collect(),
        slope: profile
            .eta_prime
            .iter()
            .map(|p| profile.delta * p)
            .collect(),
        c: profile.c * speed,
        amplitude: depth * profile.eta_max,
    })
}
