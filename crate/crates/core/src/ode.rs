//! The reduced first-order traveling-wave system for `N = 1, p1 = 2`.
//!
//! Unknowns are the surface elevation `eta`, the surface horizontal velocity
//! `u = phi0' + H^2 phi1'` and the second potential coefficient `phi1`, with
//! `H = 1 + eta`. Writing `v = c + u` and `w = c eta + H u`, the system reads
//!
//! ```text
//! eta'  =  (6 H w + 10 H^2 v) phi1 / (delta^2 d)
//! u'    = -(18 w (2 H v - w) + 10 H^3 B) phi1 / (delta^2 H d)
//! phi1' =  3 w / (2 H^3)
//! ```
//!
//! with `B = 1 + 4 delta^-2 H phi1^2` and the denominator
//! `d = 6 H v^2 - 3 v w - H^2 B`.
//!
//! Two first integrals hold along solutions decaying at infinity; they are
//! used both to fix the crest data and to monitor integration accuracy.

use crate::crest::CrestState;
use crate::error::{Error, Result};
use crate::integrator::{self, Control, StepOptions, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WaveState {
    pub eta: f64,
    pub u: f64,
    pub phi1: f64,
}

impl WaveState {
    pub fn new(eta: f64, u: f64, phi1: f64) -> Self {
        Self { eta, u, phi1 }
    }

    pub fn depth(&self) -> f64 {
        1.0 + self.eta
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.eta, self.u, self.phi1]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// Image under `x -> -x`.
    pub fn mirrored(self) -> Self {
        Self::new(self.eta, self.u, -self.phi1)
    }

    pub fn norm(&self) -> f64 {
        (self.eta * self.eta + self.u * self.u + self.phi1 * self.phi1).sqrt()
    }
}

/// `c eta + H u`, the mass flux combination that recurs throughout.
fn flux(s: &WaveState, c: f64) -> f64 {
    c * s.eta + s.depth() * s.u
}

pub fn denominator(s: &WaveState, c: f64, delta: f64) -> f64 {
    let h = s.depth();
    let v = c + s.u;
    let w = flux(s, c);
    let b = 1.0 + 4.0 * h * s.phi1 * s.phi1 / (delta * delta);
    6.0 * h * v * v - 3.0 * v * w - h * h * b
}

/// Right-hand side `(eta', u', phi1')`.
///
/// Fails when `H <= 0` or `|d| <= d_min`. The reported `x` is NaN; callers
/// that know the position fill it in.
pub fn rhs(s: &WaveState, c: f64, delta: f64, d_min: f64) -> Result<[f64; 3]> {
    let h = s.depth();
    if h <= 0.0 {
        return Err(Error::DepthVanished { x: f64::NAN });
    }
    let d = denominator(s, c, delta);
    if d.abs() <= d_min {
        return Err(Error::DenominatorVanished { x: f64::NAN, d });
    }
    let v = c + s.u;
    let w = flux(s, c);
    let b = 1.0 + 4.0 * h * s.phi1 * s.phi1 / (delta * delta);
    let scale = s.phi1 / (delta * delta * d);
    let eta_p = (6.0 * h * w + 10.0 * h * h * v) * scale;
    let u_p = -(18.0 * w * (2.0 * h * v - w) + 10.0 * h * h * h * b) * scale / h;
    let phi1_p = 1.5 * w / (h * h * h);
    Ok([eta_p, u_p, phi1_p])
}

/// `(I1, I2)`; both vanish on solutions decaying at infinity.
pub fn identity_residuals(s: &WaveState, c: f64, delta: f64) -> (f64, f64) {
    let h = s.depth();
    let w = flux(s, c);
    let p2 = s.phi1 * s.phi1 / (delta * delta);
    let i1 = c * s.u + s.eta + 0.5 * s.u * s.u + 2.0 * h * h * p2;
    let i2 = s.eta * s.eta - h * s.u * s.u + 2.0 * s.u * w - 1.2 * w * w / h
        + 4.0 / 3.0 * h * h * h * p2;
    (i1, i2)
}

/// Jacobian of `(I1, I2)` with respect to `(eta, u)` at fixed `phi1`.
fn identity_jacobian(s: &WaveState, c: f64, delta: f64) -> [[f64; 2]; 2] {
    let h = s.depth();
    let w = flux(s, c);
    let v = c + s.u;
    let p2 = s.phi1 * s.phi1 / (delta * delta);
    let di1_deta = 1.0 + 4.0 * h * p2;
    let di1_du = v;
    let di2_deta = 2.0 * s.eta - s.u * s.u + 2.0 * s.u * v + 1.2 * w * w / (h * h)
        - 2.4 * w * v / h
        + 4.0 * h * h * p2;
    let di2_du = -0.4 * w;
    [[di1_deta, di1_du], [di2_deta, di2_du]]
}

/// Newton-correct `(eta, u)` at fixed `phi1` onto the zero level set of the
/// two first integrals.
pub fn project_onto_identities(s: &WaveState, c: f64, delta: f64) -> Result<WaveState> {
    let mut cur = *s;
    for _ in 0..50 {
        let (r1, r2) = identity_residuals(&cur, c, delta);
        if r1.abs().max(r2.abs()) <= 1e-15 {
            return Ok(cur);
        }
        let j = identity_jacobian(&cur, c, delta);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let de = -(j[1][1] * r1 - j[0][1] * r2) / det;
        let du = -(-j[1][0] * r1 + j[0][0] * r2) / det;
        cur.eta += de;
        cur.u += du;
        if de.abs().max(du.abs()) <= 1e-16 * (1.0 + cur.eta.abs() + cur.u.abs()) {
            return Ok(cur);
        }
    }
    let (r1, r2) = identity_residuals(&cur, c, delta);
    if r1.abs().max(r2.abs()) <= 1e-13 {
        Ok(cur)
    } else {
        Err(Error::NewtonDiverged {
            iterations: 50,
            delta,
            u0: cur.u,
            residuals: [r1, r2],
        })
    }
}

/// `(phi0', phi1')` recovered from `(eta, u)`.
pub fn reconstruct_potentials(s: &WaveState, c: f64) -> (f64, f64) {
    let h = s.depth();
    let inv = 1.0 / (2.0 / 3.0 * h * h * h);
    let phi0_p = -h * h * (c * s.eta + h * s.u / 3.0) * inv;
    let phi1_p = flux(s, c) * inv;
    (phi0_p, phi1_p)
}

/// Crest curvature `kappa(0) = eta''(0)`.
///
/// With `phi1(0) = 0` and `eta' = G phi1`, `eta''(0) = G(crest) phi1'(0)`.
pub fn crest_curvature(crest: &CrestState) -> Result<f64> {
    let s = crest.state();
    let (c, delta) = (crest.c, crest.delta);
    let d = denominator(&s, c, delta);
    if d <= 0.0 {
        return Err(Error::DenominatorVanished { x: 0.0, d });
    }
    let h = s.depth();
    let w = flux(&s, c);
    let v = c + s.u;
    let gain = (6.0 * h * w + 10.0 * h * h * v) / (delta * delta * d);
    let phi1_p = 1.5 * w / (h * h * h);
    Ok(gain * phi1_p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub initial_step: f64,
    pub x_max: f64,
    pub tail_eps: f64,
    pub d_min: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 0.1,
            initial_step: 1e-4,
            x_max: 30.0,
            tail_eps: 1e-9,
            d_min: 1e-13,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t > 0.0 && t <= 1e-2;
        if !tol_ok(self.rel_tol) || !tol_ok(self.abs_tol) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must lie in (0, 1e-2], got rel_tol = {}, abs_tol = {}",
                self.rel_tol, self.abs_tol
            )));
        }
        for (name, val) in [
            ("max_step", self.max_step),
            ("initial_step", self.initial_step),
            ("x_max", self.x_max),
            ("tail_eps", self.tail_eps),
        ] {
            if !(val > 0.0 && val.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {val}"
                )));
            }
        }
        if !(self.d_min >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "d_min must be nonnegative, got {}",
                self.d_min
            )));
        }
        Ok(())
    }

    fn step_options(&self) -> StepOptions {
        StepOptions {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            initial_step: self.initial_step,
            max_step: self.max_step,
            min_step: 1e-14,
            max_steps: 1_000_000,
        }
    }
}

/// Why a half-profile integration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// State norm fell below `tail_eps`.
    TailReached,
    /// The trajectory started to leave the rest state along its unstable
    /// direction; samples after the closest approach were discarded.
    DriftTruncated,
    /// `x_max` reached before the tail criterion; the profile is usable but
    /// the tail is not resolved.
    XMaxReached,
}

/// Growth over the running minimum of the state norm that counts as drift.
const DRIFT_GROWTH: f64 = 2.0;
/// Drift is only declared once the norm has dropped this far below its start.
const DRIFT_DEPTH: f64 = 1e-3;

/// One side (`x >= 0`) of a symmetric wave, starting at the crest.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfProfile {
    pub delta: f64,
    pub c: f64,
    pub trajectory: Trajectory<3>,
    pub stop: StopReason,
}

impl HalfProfile {
    pub fn states(&self) -> impl Iterator<Item = WaveState> + '_ {
        self.trajectory.ys.iter().map(|&y| WaveState::from_array(y))
    }

    pub fn x_end(&self) -> f64 {
        self.trajectory.x_end()
    }

    /// `max |I1|, max |I2|` over the accepted samples.
    pub fn max_identity_residuals(&self) -> (f64, f64) {
        self.states().fold((0.0f64, 0.0f64), |(a, b), s| {
            let (i1, i2) = identity_residuals(&s, self.c, self.delta);
            (a.max(i1.abs()), b.max(i2.abs()))
        })
    }

    pub fn state_at(&self, x: f64) -> Option<WaveState> {
        self.trajectory.eval(x).map(WaveState::from_array)
    }
}

/// Continue `traj` with the adaptive integrator until one of the stop
/// conditions fires.
pub(crate) fn continue_half(
    mut traj: Trajectory<3>,
    c: f64,
    delta: f64,
    cfg: &IntegratorConfig,
) -> Result<HalfProfile> {
    cfg.validate()?;
    let n0 = traj
        .ys
        .iter()
        .map(|&y| WaveState::from_array(y).norm())
        .fold(0.0, f64::max);
    let mut min_norm = f64::INFINITY;
    let mut min_idx = 0usize;
    let mut stop = StopReason::XMaxReached;

    let field = |x: f64, y: &[f64; 3]| {
        rhs(&WaveState::from_array(*y), c, delta, cfg.d_min).map_err(|e| match e {
            Error::DenominatorVanished { d, .. } => Error::DenominatorVanished { x, d },
            Error::DepthVanished { .. } => Error::DepthVanished { x },
            other => other,
        })
    };
    let observer = |t: &Trajectory<3>| {
        let idx = t.ys.len() - 1;
        let n = WaveState::from_array(t.ys[idx]).norm();
        if n <= cfg.tail_eps {
            stop = StopReason::TailReached;
            return Control::Stop;
        }
        if n < min_norm {
            min_norm = n;
            min_idx = idx;
        } else if n > DRIFT_GROWTH * min_norm && min_norm < DRIFT_DEPTH * n0 {
            stop = StopReason::DriftTruncated;
            return Control::Stop;
        }
        Control::Continue
    };
    integrator::extend(&mut traj, field, cfg.x_max, &cfg.step_options(), observer)?;
    if stop == StopReason::DriftTruncated {
        traj.truncate(min_idx);
    }
    Ok(HalfProfile {
        delta,
        c,
        trajectory: traj,
        stop,
    })
}

/// Integrate from the crest `x = 0` toward `+inf`.
pub fn integrate_half(crest: &CrestState, cfg: &IntegratorConfig) -> Result<HalfProfile> {
    let traj = Trajectory::start(0.0, crest.state().to_array());
    continue_half(traj, crest.c, crest.delta, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crest::{phase_speed, solve_crest};

    #[test]
    fn rest_state() {
        let s = WaveState::default();
        assert_eq!(denominator(&s, 1.0, 0.5), 5.0);
        assert_eq!(rhs(&s, 1.3, 0.4, 0.0).unwrap(), [0.0, 0.0, 0.0]);
        assert_eq!(identity_residuals(&s, 1.2, 0.3), (0.0, 0.0));
        assert_eq!(reconstruct_potentials(&s, 1.1), (0.0, 0.0));
    }

    #[test]
    fn crest_values_at_0_6() {
        let crest = solve_crest(0.6).unwrap();
        let s = crest.state();
        assert!((denominator(&s, crest.c, 0.6) - 1.55722).abs() < 1e-5);
        let [ep, up, pp] = rhs(&s, crest.c, 0.6, 0.0).unwrap();
        assert_eq!(ep, 0.0);
        assert_eq!(up, 0.0);
        let h = s.depth();
        assert!((pp - 1.5 * (crest.c * s.eta + h * s.u) / h.powi(3)).abs() < 1e-15);
        assert!(pp < 0.0);
    }

    #[test]
    fn denominator_at_table_edge() {
        let crest = solve_crest(0.62633493).unwrap();
        let d = denominator(&crest.state(), crest.c, crest.delta);
        assert!((d - 2.30314e-4).abs() < 1e-9, "d = {d}");
    }

    #[test]
    fn i1_affine_in_eta() {
        let crest = solve_crest(0.6).unwrap();
        let mut s = crest.state();
        let (base, _) = identity_residuals(&s, crest.c, 0.6);
        s.eta += 0.01;
        let (shifted, _) = identity_residuals(&s, crest.c, 0.6);
        assert!((shifted - base - 0.01).abs() < 1e-15);
    }

    #[test]
    fn potentials_satisfy_defining_equations() {
        let crest = solve_crest(0.6).unwrap();
        let s = crest.state();
        let (p0, p1) = reconstruct_potentials(&s, crest.c);
        let h = s.depth();
        assert!((crest.c * s.eta + h * p0 + h.powi(3) * p1 / 3.0).abs() < 1e-13);
        assert!((p0 + h * h * p1 - s.u).abs() < 1e-14 * (1.0 + s.u.abs()));
    }

    #[test]
    fn curvature_table_values() {
        for (delta, minus_kappa) in [(0.6, 2.34087), (0.62, 4.85676), (0.625, 10.4536)] {
            let k = crest_curvature(&solve_crest(delta).unwrap()).unwrap();
            assert!(
                ((-k) - minus_kappa).abs() / minus_kappa < 1e-5,
                "δ={delta}: {k}"
            );
        }
    }

    #[test]
    fn guards() {
        let s = WaveState::new(-1.5, 0.0, 0.1);
        assert!(matches!(
            rhs(&s, 1.0, 0.5, 0.0),
            Err(Error::DepthVanished { .. })
        ));
        let s = WaveState::new(0.0, 0.0, 0.1);
        assert!(matches!(
            rhs(&s, 1.0, 0.5, 10.0),
            Err(Error::DenominatorVanished { .. })
        ));
        let cfg = IntegratorConfig {
            rel_tol: 0.5,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn half_profile_decays() {
        let crest = solve_crest(0.3).unwrap();
        let half = integrate_half(&crest, &IntegratorConfig::default()).unwrap();
        assert_ne!(half.stop, StopReason::XMaxReached);
        let last = WaveState::from_array(half.trajectory.y_end());
        assert!(last.norm() < 1e-5 * crest.eta0, "{last:?}");
        assert!(half.x_end() < 25.0);
        assert_eq!(phase_speed(0.3), crest.c);
    }
}
