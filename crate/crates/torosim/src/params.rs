//! Physical parameters of the robot and of the pipe environment.
//!
//! Weights are stored as forces (N), not masses; constructors accepting
//! mass multiply by standard gravity. Angles are radians internally.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::units;
use crate::{Error, Result};

/// Slack on the pipe-angle domain check, absorbing degree-to-radian
/// conversion rounding at the +/-90 degree endpoints.
pub(crate) const ANGLE_DOMAIN_SLACK: f64 = 1e-12;

/// Inflated membrane constants: weight, geometry, and the lumped forces
/// opposing tip motion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembraneSpec {
    /// Membrane weight (N).
    pub weight: f64,
    /// Inflated outer diameter (m).
    pub inflated_outer_diameter: f64,
    /// Force opposing eversion at the front tip (N).
    pub eversion_force: f64,
    /// Force opposing inversion at the rear tip (N).
    pub inversion_force: f64,
}

impl MembraneSpec {
    /// Same membrane with its weight given as a mass in grams.
    pub fn with_mass_grams(mass_g: f64, inflated_outer_diameter: f64, eversion_force: f64, inversion_force: f64) -> Self {
        Self {
            weight: units::newtons_from_grams(mass_g),
            inflated_outer_diameter,
            eversion_force,
            inversion_force,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_finite(self.weight, "membrane weight")?;
        require_finite(self.inflated_outer_diameter, "inflated_outer_diameter")?;
        require_finite(self.eversion_force, "eversion_force")?;
        require_finite(self.inversion_force, "inversion_force")?;
        if self.weight < 0.0 {
            return Err(Error::invalid("membrane weight must be nonnegative"));
        }
        if self.inflated_outer_diameter <= 0.0 {
            return Err(Error::invalid("inflated_outer_diameter must be positive"));
        }
        if self.eversion_force < 0.0 {
            return Err(Error::invalid("eversion_force must be nonnegative"));
        }
        if self.inversion_force < 0.0 {
            return Err(Error::invalid("inversion_force must be nonnegative"));
        }
        Ok(())
    }
}

/// Propulsion device constants: weight, roller geometry, motor electrical
/// constants, and the lumped drivetrain loss force.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviceSpec {
    /// Device weight (N).
    pub weight: f64,
    /// Active roller radius (m).
    pub roller_radius: f64,
    /// Motor winding resistance (ohm).
    pub motor_resistance: f64,
    /// Motor torque constant (N*m/A).
    pub torque_constant: f64,
    /// Force-equivalent of drivetrain losses between motor shafts and
    /// membrane (N).
    pub loss_force: f64,
    /// Outer diameter of the device body (m); the rigid lower bound on
    /// how far the robot cross-section can squeeze.
    pub outer_diameter: f64,
}

impl DeviceSpec {
    pub fn validate(&self) -> Result<()> {
        require_finite(self.weight, "device weight")?;
        require_finite(self.roller_radius, "roller_radius")?;
        require_finite(self.motor_resistance, "motor_resistance")?;
        require_finite(self.torque_constant, "torque_constant")?;
        require_finite(self.loss_force, "loss_force")?;
        require_finite(self.outer_diameter, "device outer_diameter")?;
        if self.weight < 0.0 {
            return Err(Error::invalid("device weight must be nonnegative"));
        }
        if self.roller_radius <= 0.0 {
            return Err(Error::invalid("roller_radius must be positive"));
        }
        if self.motor_resistance <= 0.0 {
            return Err(Error::invalid("motor_resistance must be positive"));
        }
        if self.torque_constant <= 0.0 {
            return Err(Error::invalid("torque_constant must be positive"));
        }
        if self.loss_force < 0.0 {
            return Err(Error::invalid("loss_force must be nonnegative"));
        }
        if self.outer_diameter <= 0.0 {
            return Err(Error::invalid("device outer_diameter must be positive"));
        }
        Ok(())
    }
}

/// Full robot: membrane plus propulsion device.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotParams {
    pub membrane: MembraneSpec,
    pub device: DeviceSpec,
}

impl RobotParams {
    /// Combined membrane + device weight (N).
    pub fn total_weight(&self) -> f64 {
        self.membrane.weight + self.device.weight
    }

    /// Sum of the tip forces opposing eversion and inversion (N).
    pub fn tip_force_sum(&self) -> f64 {
        self.membrane.eversion_force + self.membrane.inversion_force
    }

    pub fn validate(&self) -> Result<()> {
        self.membrane.validate()?;
        self.device.validate()?;
        if self.total_weight() <= 0.0 {
            return Err(Error::invalid("total robot weight must be positive"));
        }
        Ok(())
    }

    /// Constants of the reference prototype: a 13.7 cm LDPE membrane with
    /// a 10.4 cm roller device, 4.4 N combined weight, 10 N eversion and
    /// inversion force estimates, and a drive-loss term of 38.32 N backed
    /// out from the measured 2.43 V horizontal stall voltage.
    pub fn reference() -> Self {
        RobotParams {
            membrane: MembraneSpec {
                weight: 0.834,
                inflated_outer_diameter: 0.137,
                eversion_force: 10.0,
                inversion_force: 10.0,
            },
            device: DeviceSpec {
                weight: 3.566,
                roller_radius: 0.017,
                motor_resistance: 7.5,
                torque_constant: 1.53,
                loss_force: 38.32,
                outer_diameter: 0.104,
            },
        }
    }

    /// Battery weight of the reference prototype (N). The battery is not
    /// part of the modeled device weight; anchoring analyses can fold it
    /// in when the portable configuration is of interest.
    pub fn reference_battery_weight() -> f64 {
        units::newtons_from_grams(214.0)
    }

    /// Same robot with `extra` (N) added to the device weight, e.g. a
    /// battery carried by the device.
    pub fn with_added_device_weight(mut self, extra: f64) -> Self {
        self.device.weight += extra;
        self
    }
}

/// A straight pipe the robot climbs or anchors in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipeEnvironment {
    /// Pipe inner radius (m).
    pub inner_radius: f64,
    /// Pipe inclination above horizontal (rad), in [-pi/2, +pi/2].
    pub angle: f64,
    /// Length of membrane-pipe contact (m); the shorter of the membrane
    /// and the pipe when one overhangs the other.
    pub contact_length: f64,
    /// Static friction coefficient between membrane and pipe.
    pub mu_static: f64,
    /// Internal gauge pressure of the membrane (Pa).
    pub pressure: f64,
}

impl PipeEnvironment {
    pub fn validate(&self) -> Result<()> {
        require_finite(self.inner_radius, "inner_radius")?;
        require_finite(self.angle, "angle")?;
        require_finite(self.contact_length, "contact_length")?;
        require_finite(self.mu_static, "mu_static")?;
        require_finite(self.pressure, "pressure")?;
        if self.inner_radius <= 0.0 {
            return Err(Error::invalid("inner_radius must be positive"));
        }
        if self.angle.abs() > FRAC_PI_2 + ANGLE_DOMAIN_SLACK {
            return Err(Error::AngleOutOfDomain);
        }
        if self.contact_length < 0.0 {
            return Err(Error::invalid("contact_length must be nonnegative"));
        }
        if self.mu_static < 0.0 {
            return Err(Error::invalid("mu_static must be nonnegative"));
        }
        if self.pressure < 0.0 {
            return Err(Error::invalid("pressure must be nonnegative"));
        }
        Ok(())
    }

    /// The vertical acrylic test pipe: 12.4 cm bore, 30.5 cm contact
    /// length, measured friction coefficient 0.192, inflated to 3.45 kPa.
    pub fn reference_vertical_pipe() -> Self {
        PipeEnvironment {
            inner_radius: 0.062,
            angle: FRAC_PI_2,
            contact_length: 0.305,
            mu_static: 0.192,
            pressure: 3450.0,
        }
    }

    pub fn with_angle(mut self, angle: f64) -> Self {
        self.angle = angle;
        self
    }

    pub fn with_pressure(mut self, pressure: f64) -> Self {
        self.pressure = pressure;
        self
    }
}

/// Checks every invariant of a robot/environment pair, reporting the first
/// violated one by name. Validation never mutates; validating an already
/// valid pair is a no-op.
pub fn validate(params: &RobotParams, env: &PipeEnvironment) -> Result<()> {
    params.validate()?;
    env.validate()
}

fn require_finite(value: f64, name: &str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite")))
    }
}
