//! The solitary wave of extreme form.
//!
//! The limiting wave is reached where the denominator `d` vanishes at the
//! crest. Together with the crest quartic this gives two polynomial equations
//! in `(delta, u(0))`, solved here by Newton's method with an exact Jacobian.
//! At that point the crest becomes a corner whose one-sided slope follows from
//! l'Hôpital's rule applied to `phi1 / d`.

use crate::crest::{
    horner, horner_derivative, phase_speed, quartic_coeffs, quartic_coeffs_dc, CrestState,
};
use crate::error::{Error, Result};
use crate::integrator::{DenseSegment, Trajectory};
use crate::ode::{
    continue_half, denominator, project_onto_identities, IntegratorConfig, WaveState,
};
use crate::profile::WaveProfile;

const NEWTON_MAX_ITER: usize = 30;
const NEWTON_TOL: f64 = 1e-12;
const INITIAL_GUESS: (f64, f64) = (0.62, -0.78);
/// Length of the Taylor step that moves off the corner.
const SEED_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub delta_c: f64,
    pub eta_c0: f64,
    pub u_c0: f64,
    pub c_c: f64,
    /// `c_c + u_c0`, the crest velocity relative to the wave.
    pub v_c0: f64,
    /// `eta'(0+)`, nondimensional.
    pub slope_nondim: f64,
    /// `|d eta*/d x*|` at the crest in physical variables.
    pub slope_dim: f64,
    /// Included crest angle in degrees.
    pub theta_deg: f64,
}

impl CriticalPoint {
    pub fn depth(&self) -> f64 {
        1.0 + self.eta_c0
    }

    pub fn crest(&self) -> CrestState {
        CrestState {
            delta: self.delta_c,
            c: self.c_c,
            eta0: self.eta_c0,
            u0: self.u_c0,
            phi1_0: 0.0,
        }
    }

    /// Residuals of the crest quartic and of `d(0) = 0`.
    pub fn residuals(&self) -> [f64; 2] {
        critical_residuals(self.delta_c, self.u_c0)
    }

    /// One-sided derivatives `(eta', u', phi1')` at `x = 0+`.
    pub fn one_sided_derivatives(&self) -> [f64; 3] {
        let h = self.depth();
        let v = self.v_c0;
        let eta_p = self.slope_nondim;
        let u_p = -eta_p / v;
        let phi1_p = 1.5 * (h * v - self.c_c) / (h * h * h);
        [eta_p, u_p, phi1_p]
    }

    /// `d'(0+) = (3 v^2 - 8 H - 3 c / v) eta'(0+)`.
    pub fn denominator_slope(&self) -> f64 {
        let (h, v) = (self.depth(), self.v_c0);
        (3.0 * v * v - 8.0 * h - 3.0 * self.c_c / v) * self.slope_nondim
    }
}

/// `(eta(0), H(0), v)` from the first identity at the crest.
fn crest_from_u(c: f64, u: f64) -> (f64, f64, f64) {
    let eta = -c * u - 0.5 * u * u;
    (eta, 1.0 + eta, c + u)
}

fn critical_residuals(delta: f64, u: f64) -> [f64; 2] {
    let c = phase_speed(delta);
    let (eta, _, _) = crest_from_u(c, u);
    [
        horner(&quartic_coeffs(c), u),
        denominator(&WaveState::new(eta, u, 0.0), c, delta),
    ]
}

fn critical_jacobian(delta: f64, u: f64) -> [[f64; 2]; 2] {
    let c = phase_speed(delta);
    let dc_ddelta = 4.0 / 3.0 * delta;
    let (_, h, v) = crest_from_u(c, u);

    let q_u = horner_derivative(&quartic_coeffs(c), u);
    let q_c = horner(&quartic_coeffs_dc(c), u);

    // At phi1 = 0, d = 3 H v^2 + 3 c v - H^2.
    let d_eta = 3.0 * v * v - 2.0 * h;
    let d_v = 6.0 * h * v + 3.0 * c;
    let d_u = d_eta * (-c - u) + d_v;
    let d_c = d_eta * (-u) + d_v + 3.0 * v;

    [[q_c * dc_ddelta, q_u], [d_c * dc_ddelta, d_u]]
}

pub fn solve_critical() -> Result<CriticalPoint> {
    let (mut delta, mut u) = INITIAL_GUESS;
    for _ in 0..NEWTON_MAX_ITER {
        let r = critical_residuals(delta, u);
        if r[0].abs() <= NEWTON_TOL && r[1].abs() <= NEWTON_TOL {
            return finish_critical(delta, u);
        }
        let j = critical_jacobian(delta, u);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        delta -= (j[1][1] * r[0] - j[0][1] * r[1]) / det;
        u -= (-j[1][0] * r[0] + j[0][0] * r[1]) / det;
    }
    let r = critical_residuals(delta, u);
    if r[0].abs() <= NEWTON_TOL && r[1].abs() <= NEWTON_TOL {
        return finish_critical(delta, u);
    }
    Err(Error::NewtonDiverged {
        iterations: NEWTON_MAX_ITER,
        delta,
        u0: u,
        residuals: r,
    })
}

fn finish_critical(delta_c: f64, u_c0: f64) -> Result<CriticalPoint> {
    let c_c = phase_speed(delta_c);
    let (eta_c0, _, v_c0) = crest_from_u(c_c, u_c0);
    let mut cp = CriticalPoint {
        delta_c,
        eta_c0,
        u_c0,
        c_c,
        v_c0,
        slope_nondim: f64::NAN,
        slope_dim: f64::NAN,
        theta_deg: f64::NAN,
    };
    let (nondim, dim) = crest_slope(&cp)?;
    cp.slope_nondim = nondim;
    cp.slope_dim = dim;
    cp.theta_deg = included_angle(dim);
    Ok(cp)
}

/// `(eta'(0+), delta_c |eta'(0+)|)` at the corner crest.
pub fn crest_slope(cp: &CriticalPoint) -> Result<(f64, f64)> {
    let h = cp.depth();
    let v = cp.v_c0;
    let c = cp.c_c;
    let delta = cp.delta_c;
    let num = 3.0 * v * (h * v - c) * (8.0 * h * v - 3.0 * c);
    let den = delta * delta * h * h * (3.0 * v * v * v - 8.0 * h * v - 3.0 * c);
    let radicand = num / den;
    if !(radicand >= 0.0) {
        return Err(Error::NegativeRadicand(radicand));
    }
    let slope = -radicand.sqrt();
    Ok((slope, delta * slope.abs()))
}

/// Interior angle between the two faces of a crest with the given slope, in degrees.
pub fn included_angle(slope_dim: f64) -> f64 {
    180.0 - 2.0 * slope_dim.atan().to_degrees()
}

/// Integrate the wave of extreme form away from its corner.
///
/// The field is `0/0` at the crest, so the first step is taken by hand:
/// `phi1` from its second-order Taylor expansion, then `(eta, u)` solved from
/// the two first integrals at that `phi1`, starting from the one-sided
/// first-order Taylor guess.
pub fn extreme_profile(cp: &CriticalPoint, cfg: &IntegratorConfig) -> Result<WaveProfile> {
    let crest = cp.crest();
    let s0 = crest.state();
    let [eta_p, u_p, phi1_p] = cp.one_sided_derivatives();

    let (c, h0) = (cp.c_c, cp.depth());
    let w = c * s0.eta + h0 * s0.u;
    let w_p = c * eta_p + eta_p * s0.u + h0 * u_p;
    let phi1_pp = 1.5 * (w_p / h0.powi(3) - 3.0 * w * eta_p / h0.powi(4));

    let x1 = SEED_STEP;
    let guess = WaveState::new(
        s0.eta + eta_p * x1,
        s0.u + u_p * x1,
        phi1_p * x1 + 0.5 * phi1_pp * x1 * x1,
    );
    let s1 = project_onto_identities(&guess, c, cp.delta_c)?;
    let f1 =
        crate::ode::rhs(&s1, c, cp.delta_c, cfg.d_min).map_err(|_| Error::DenominatorVanished {
            x: x1,
            d: denominator(&s1, c, cp.delta_c),
        })?;

    let mut traj = Trajectory::start(0.0, s0.to_array());
    let seg = DenseSegment::hermite(
        0.0,
        x1,
        &s0.to_array(),
        &s1.to_array(),
        &[eta_p, u_p, phi1_p],
        &f1,
    );
    traj.push(seg, s1.to_array());

    let half = continue_half(traj, c, cp.delta_c, cfg)?;
    WaveProfile::from_half(half, None, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_values() {
        let cp = solve_critical().unwrap();
        assert!((cp.delta_c - 0.62633493).abs() < 5e-9, "{cp:?}");
        assert!((cp.eta_c0 - 0.687926).abs() < 1e-6);
        assert!((cp.u_c0 - (-0.797196)).abs() < 1e-6);
        assert!((cp.c_c - 1.26153).abs() < 1e-5);
        assert!(cp.v_c0 > 0.0);
        let r = cp.residuals();
        assert!(r[0].abs() <= 1e-12 && r[1].abs() <= 1e-12);
        assert!(cp.crest().denominator().abs() < 1e-10);
    }

    #[test]
    fn jacobian_matches_differences() {
        let (delta, u) = (0.61, -0.7);
        let j = critical_jacobian(delta, u);
        let h = 1e-6;
        for (col, (dd, du)) in [(h, 0.0), (0.0, h)].into_iter().enumerate() {
            let p = critical_residuals(delta + dd, u + du);
            let m = critical_residuals(delta - dd, u - du);
            for row in 0..2 {
                let fd = (p[row] - m[row]) / (2.0 * h);
                assert!(
                    (j[row][col] - fd).abs() < 1e-6 * (1.0 + fd.abs()),
                    "{row},{col}"
                );
            }
        }
    }

    #[test]
    fn slope_and_angle() {
        let cp = solve_critical().unwrap();
        assert!((cp.slope_dim - 0.24397).abs() < 1e-4);
        assert!((cp.slope_nondim - (-0.24397 / 0.62633493)).abs() < 2e-4);
        assert!((cp.theta_deg - 152.6).abs() < 0.05);
        let [eta_p, u_p, _] = cp.one_sided_derivatives();
        assert!((u_p * cp.v_c0 + eta_p).abs() < 1e-15);
    }

    #[test]
    fn angle_reference_values() {
        assert_eq!(included_angle(0.0), 180.0);
        let stokes = included_angle((30.0f64).to_radians().tan());
        assert!((stokes - 120.0).abs() < 1e-12);
    }

    #[test]
    fn corner_profile() {
        let cp = solve_critical().unwrap();
        let prof = extreme_profile(&cp, &IntegratorConfig::default()).unwrap();
        let half = prof.half();
        let (i1, i2) = half.max_identity_residuals();
        assert!(i1.max(i2) <= 1e-7, "{i1:e} {i2:e}");

        // One-sided difference quotients, Richardson-combined.
        let eta_at = |x: f64| half.state_at(x).unwrap().eta;
        let fd = |h: f64| (eta_at(h) - cp.eta_c0) / h;
        let rich = 2.0 * fd(1e-4) - fd(2e-4);
        assert!(
            (rich - cp.slope_nondim).abs() < 1e-3,
            "{rich} {}",
            cp.slope_nondim
        );

        for (x, s) in half.trajectory.xs.iter().zip(half.states()).skip(1) {
            assert!(denominator(&s, cp.c_c, cp.delta_c) > 0.0, "x = {x}");
        }
        let mid = prof.len() / 2;
        assert!(prof.eta_prime[mid].is_nan());
        let coarse = prof.resampled(0.05).unwrap();
        assert!(coarse.eta_prime[coarse.len() / 2].is_nan());
        assert_eq!(prof.eta_max, cp.eta_c0);
    }

    #[test]
    fn denominator_grows_linearly() {
        let cp = solve_critical().unwrap();
        let prof = extreme_profile(&cp, &IntegratorConfig::default()).unwrap();
        let half = prof.half();
        let d_at = |x: f64| denominator(&half.state_at(x).unwrap(), cp.c_c, cp.delta_c);
        let (h1, h2) = (2e-4, 4e-4);
        let fd = 2.0 * d_at(h1) / h1 - d_at(h2) / h2;
        let exact = cp.denominator_slope();
        assert!(exact > 0.0);
        assert!((fd - exact).abs() <= 1e-3 * exact.abs(), "{fd} {exact}");
    }

    #[test]
    fn inconsistent_point_is_rejected() {
        let mut cp = solve_critical().unwrap();
        cp.v_c0 = -cp.v_c0;
        cp.u_c0 = cp.v_c0 - cp.c_c;
        assert!(matches!(crest_slope(&cp), Err(Error::NegativeRadicand(_))));
    }
}
