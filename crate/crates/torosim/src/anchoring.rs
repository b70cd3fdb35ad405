//! Pressure-and-friction anchoring: how much friction the inflated
//! membrane can raise against the pipe wall, and whether it holds the
//! robot at a given inclination.
//!
//! The contact normal force has two parts: internal gauge pressure acting
//! over the membrane-pipe contact area, and the weight component
//! perpendicular to the pipe axis. Both assume the inflated membrane is
//! wider than the pipe bore.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, PipeEnvironment, Result, RobotParams};

/// Gauge pressure (Pa) above which membrane burst becomes a concern.
/// A soft limit for warnings only; burst mechanics are not modeled.
pub const DEFAULT_BURST_SOFT_LIMIT: f64 = 10_000.0;

/// Outcome of comparing required against available friction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlipAssessment {
    /// Friction force needed to hold the robot at this angle (N, signed).
    pub required_friction: f64,
    /// Friction force the contact can supply (N, nonnegative).
    pub available_friction: f64,
    /// `available - |required|` (N); zero margin still holds.
    pub margin: f64,
    pub slips: bool,
}

fn check_membrane_presses(params: &RobotParams, env: &PipeEnvironment) -> Result<()> {
    if params.membrane.inflated_outer_diameter > 2.0 * env.inner_radius {
        Ok(())
    } else {
        Err(Error::MembraneNotPressing)
    }
}

/// Friction force available from the membrane-pipe contact (N):
/// `mu_static * [P * 2*pi*R*L + (total weight) * cos(angle)]`.
pub fn available_friction(params: &RobotParams, env: &PipeEnvironment) -> Result<f64> {
    check_membrane_presses(params, env)?;
    let contact_area = 2.0 * PI * env.inner_radius * env.contact_length;
    let normal = env.pressure * contact_area + params.total_weight() * env.angle.cos();
    Ok(env.mu_static * normal)
}

/// Maximum robot weight (N) the contact can hold in a vertical pipe,
/// where the weight no longer contributes to the normal force:
/// `mu_static * P * 2*pi*R*L`. Assumes the membrane presses against the
/// pipe (see [`available_friction`]).
pub fn max_vertical_weight(env: &PipeEnvironment) -> f64 {
    env.mu_static * env.pressure * (2.0 * PI * env.inner_radius * env.contact_length)
}

/// Smallest gauge pressure (Pa) that holds `total_weight` in a vertical
/// pipe. Exact inverse of [`max_vertical_weight`] on positive inputs.
pub fn min_pressure_for_no_slip(total_weight: f64, env: &PipeEnvironment) -> Result<f64> {
    let denominator = env.mu_static * (2.0 * PI * env.inner_radius * env.contact_length);
    if denominator <= 0.0 {
        return Err(Error::invalid(
            "mu_static, inner_radius, and contact_length must all be positive",
        ));
    }
    Ok(total_weight / denominator)
}

/// Compares the friction demanded by the climb angle against what the
/// contact supplies. A zero margin counts as holding: slipping starts
/// only when the demand exceeds the supply.
pub fn assess_slip(params: &RobotParams, env: &PipeEnvironment) -> Result<SlipAssessment> {
    let available = available_friction(params, env)?;
    let required = params.total_weight() * env.angle.sin();
    let margin = available - required.abs();
    Ok(SlipAssessment {
        required_friction: required,
        available_friction: available,
        margin,
        slips: margin < 0.0,
    })
}

/// Warning text when a pressure exceeds the burst soft limit.
pub fn burst_pressure_warning(pressure: f64, soft_limit: f64) -> Option<String> {
    if pressure > soft_limit {
        Some(format!(
            "pressure {:.5e} Pa exceeds the membrane burst soft limit {:.5e} Pa",
            pressure, soft_limit
        ))
    } else {
        None
    }
}
