//! Stall-regime motor model: maps between device force, roller torque,
//! motor current, and motor voltage, and calibrates the lumped tip and
//! loss forces from a measured horizontal operating point.
//!
//! Only incipient motion is modeled — current is set by winding
//! resistance alone, with no back-EMF term.

use serde::{Deserialize, Serialize};

use crate::statics::solve_climb_forces;
use crate::{Result, RobotParams};

/// Electrical state of one drive motor at stall.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotorOperatingPoint {
    /// Voltage across the motor leads (V).
    pub voltage: f64,
    /// Stall current through the winding (A).
    pub current: f64,
    /// Torque one motor applies to its roller (N*m).
    pub torque_per_roller: f64,
}

/// Torque each of the two rollers must apply to drive the membrane tail
/// with force `device_force` against drivetrain losses `loss_force`.
pub fn roller_torque(device_force: f64, loss_force: f64, roller_radius: f64) -> f64 {
    0.5 * roller_radius * (device_force + loss_force)
}

/// Motor voltage at stall that produces `device_force` on the tail.
pub fn voltage_for_device_force(params: &RobotParams, device_force: f64) -> f64 {
    let d = &params.device;
    d.roller_radius * d.motor_resistance / (2.0 * d.torque_constant) * (device_force + d.loss_force)
}

/// Minimum motor voltage to begin climbing at pipe angle `angle` (rad).
/// Delegates through the force balance, so it agrees exactly with
/// [`voltage_for_device_force`] applied to the solved device force.
pub fn voltage_for_angle(params: &RobotParams, angle: f64) -> Result<f64> {
    let forces = solve_climb_forces(params, angle)?;
    Ok(voltage_for_device_force(params, forces.device_force))
}

/// Affine decomposition of the voltage-angle relation: `voltage_intercept`
/// is the voltage at zero inclination, `voltage_slope_per_sin` multiplies
/// the sine of the pipe angle.
pub fn voltage_intercept(params: &RobotParams) -> f64 {
    voltage_for_device_force(params, params.tip_force_sum())
}

pub fn voltage_slope_per_sin(params: &RobotParams) -> f64 {
    let d = &params.device;
    d.roller_radius * d.motor_resistance / (2.0 * d.torque_constant) * params.total_weight()
}

/// Backs out the lumped sum of eversion, inversion, and loss forces from
/// the stall voltage measured in a horizontal pipe. Exact inverse of the
/// voltage relation at zero angle; only the sum is observable.
pub fn calibrate_lumped_losses(
    horizontal_voltage: f64,
    roller_radius: f64,
    motor_resistance: f64,
    torque_constant: f64,
) -> f64 {
    2.0 * torque_constant * horizontal_voltage / (roller_radius * motor_resistance)
}

/// Motor resistance and torque constant from nameplate ratings:
/// `(rated_voltage / stall_current, stall_torque / stall_current)`.
/// `stall_torque` is in N*m; see [`crate::units::torque_nm_from_kg_cm`]
/// for ratings quoted in kg-cm.
pub fn motor_constants_from_ratings(
    rated_voltage: f64,
    stall_current: f64,
    stall_torque: f64,
) -> (f64, f64) {
    (rated_voltage / stall_current, stall_torque / stall_current)
}

/// Full electrical operating point for driving `device_force` at stall.
pub fn stall_operating_point(params: &RobotParams, device_force: f64) -> MotorOperatingPoint {
    let voltage = voltage_for_device_force(params, device_force);
    let current = voltage / params.device.motor_resistance;
    let torque_per_roller = params.device.torque_constant * current;
    MotorOperatingPoint {
        voltage,
        current,
        torque_per_roller,
    }
}
