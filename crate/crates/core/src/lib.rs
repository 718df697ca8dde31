//! Solitary traveling waves of the Isobe–Kakinuma shallow-water model.
//!
//! The crate computes smooth solitary waves of the `N = 1, p1 = 2` model for a
//! shallowness parameter `delta` below a critical value, the limiting wave of
//! extreme form with its sharp crest, and a set of closed-form checks of the
//! long-wave (KdV) asymptotics.

pub mod crest;
pub mod error;
pub mod extreme;
pub mod integrator;
pub mod io;
pub mod ode;
pub mod params;
pub mod profile;
pub mod theory;

pub use crest::{phase_speed, quartic_coeffs, solve_crest, solve_crest_with_hint, CrestState};
pub use error::{Error, Result};

pub use extreme::{crest_slope, extreme_profile, included_angle, solve_critical, CriticalPoint};
pub use ode::{
    crest_curvature, denominator, identity_residuals, integrate_half, project_onto_identities,
    reconstruct_potentials, rhs, HalfProfile, IntegratorConfig, StopReason, WaveState,
};
pub use params::{build_params, check_positivity, ExponentSet, ModelParams};
pub use profile::{
    compare_kdv, diagnostics_table, dimensionalize, kdv_profile, solve_solitary,
    DimensionalProfile, TableRow, WaveProfile,
};
pub use theory::{
    first_order_family, fundamental_checks, q_positivity, q_symbol, verify_kdv_solution,
    FirstOrderFamily, FundamentalPair, FundamentalReport,
};
