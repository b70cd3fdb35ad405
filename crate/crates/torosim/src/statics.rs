//! Quasistatic force balance for climbing inside a pipe.
//!
//! Three balances govern the motion: the membrane along the climb axis,
//! tension along the whole membrane loop, and the device along the climb
//! axis. Solving them gives the device drive force, the grounding force
//! the device pushes against the rear tip with, and the membrane-pipe
//! friction force — none of which depend on how hard the membrane braces
//! against the pipe.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::params::ANGLE_DOMAIN_SLACK;
use crate::{Error, Result, RobotParams};

/// Force-balance residual magnitude treated as zero (N). Far below any
/// force scale of interest, far above double-precision noise.
pub const BALANCE_TOLERANCE: f64 = 1e-9;

/// Solved quasistatic forces for one climb configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForceSolution {
    /// Friction force the active rollers exert on the membrane tail (N).
    pub device_force: f64,
    /// Force the device exerts against the rear (inverting) end of the
    /// membrane (N). Negative means the device cannot ground itself there
    /// and drives to the everting end instead.
    pub grounding_force: f64,
    /// Friction force from the pipe on the membrane wall (N), signed;
    /// negative values act opposite the climb direction convention.
    pub pipe_friction: f64,
    /// True when the grounding force came out negative, i.e. the device
    /// repositions itself at the everting (downhill) end.
    pub device_at_everting_end: bool,
}

fn check_angle(angle: f64) -> Result<()> {
    if angle.is_finite() && angle.abs() <= FRAC_PI_2 + ANGLE_DOMAIN_SLACK {
        Ok(())
    } else {
        Err(Error::AngleOutOfDomain)
    }
}

/// Closed-form solution of the three-balance system at pipe angle
/// `angle` (rad, in [-pi/2, +pi/2]).
pub fn solve_climb_forces(params: &RobotParams, angle: f64) -> Result<ForceSolution> {
    check_angle(angle)?;
    let sin = angle.sin();
    let tip = params.tip_force_sum();
    let device_force = tip + params.total_weight() * sin;
    let grounding_force = tip + (params.membrane.weight + 2.0 * params.device.weight) * sin;
    let pipe_friction = params.total_weight() * sin;
    Ok(ForceSolution {
        device_force,
        grounding_force,
        pipe_friction,
        device_at_everting_end: grounding_force < 0.0,
    })
}

/// Left-hand sides of the three balance equations evaluated at the given
/// forces: membrane axial, membrane tension, device axial. All three are
/// zero (within [`BALANCE_TOLERANCE`]) iff `forces` satisfies the balance.
pub fn balance_residuals(params: &RobotParams, angle: f64, forces: &ForceSolution) -> [f64; 3] {
    let sin = angle.sin();
    let membrane_axial =
        forces.pipe_friction + forces.device_force - params.membrane.weight * sin - forces.grounding_force;
    let tension = params.tip_force_sum() + forces.pipe_friction - forces.device_force;
    let device_axial = forces.grounding_force - forces.device_force - params.device.weight * sin;
    [membrane_axial, tension, device_axial]
}

/// Independent verification path: assembles the three balances as a 3x3
/// linear system and solves it by LU decomposition, with no closed-form
/// shortcuts. Agrees with [`solve_climb_forces`] to [`BALANCE_TOLERANCE`]
/// componentwise.
pub fn oracle_solve(params: &RobotParams, angle: f64) -> Result<ForceSolution> {
    check_angle(angle)?;
    let sin = angle.sin();
    // Unknowns ordered [device_force, grounding_force, pipe_friction].
    #[rustfmt::skip]
    let coefficients = Matrix3::new(
         1.0, -1.0, 1.0,
        -1.0,  0.0, 1.0,
        -1.0,  1.0, 0.0,
    );
    let rhs = Vector3::new(
        params.membrane.weight * sin,
        -params.tip_force_sum(),
        params.device.weight * sin,
    );
    let solution = coefficients.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
    Ok(ForceSolution {
        device_force: solution[0],
        grounding_force: solution[1],
        pipe_friction: solution[2],
        device_at_everting_end: solution[1] < 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{DeviceSpec, MembraneSpec, PipeEnvironment};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn robot(membrane_weight: f64, device_weight: f64, eversion: f64, inversion: f64) -> RobotParams {
        let mut p = RobotParams::reference();
        p.membrane.weight = membrane_weight;
        p.device.weight = device_weight;
        p.membrane.eversion_force = eversion;
        p.membrane.inversion_force = inversion;
        p
    }

    #[test]
    fn horizontal_forces_reduce_to_tip_forces() {
        let f = solve_climb_forces(&RobotParams::reference(), 0.0).unwrap();
        assert_relative_eq!(f.device_force, 20.0, max_relative = 1e-12);
        assert_relative_eq!(f.grounding_force, 20.0, max_relative = 1e-12);
        assert_eq!(f.pipe_friction, 0.0);
        assert!(!f.device_at_everting_end);
    }

    #[test]
    fn vertical_climb_adds_total_weight() {
        // 4.4 N total weight, 20 N of tip forces.
        let f = solve_climb_forces(&RobotParams::reference(), FRAC_PI_2).unwrap();
        assert_relative_eq!(f.device_force, 24.4, max_relative = 1e-12);
        let r = balance_residuals(&RobotParams::reference(), FRAC_PI_2, &f);
        for component in r {
            assert!(component.abs() <= BALANCE_TOLERANCE);
        }
    }

    #[test]
    fn steep_descent_flips_grounding_side() {
        let p = robot(1.0, 1.0, 0.0, 0.0);
        let f = solve_climb_forces(&p, -FRAC_PI_2).unwrap();
        assert_relative_eq!(f.grounding_force, -3.0, max_relative = 1e-12);
        assert!(f.device_at_everting_end);
    }

    #[test]
    fn angle_domain_is_enforced() {
        let err = solve_climb_forces(&RobotParams::reference(), 1.6).unwrap_err();
        assert!(matches!(err, Error::AngleOutOfDomain));
        assert!(oracle_solve(&RobotParams::reference(), -2.0).is_err());
    }

    #[test]
    fn residuals_react_to_a_perturbed_device_force() {
        let p = RobotParams::reference();
        let mut f = solve_climb_forces(&p, 0.0).unwrap();
        f.device_force += 1.0;
        let [r1, r2, r3] = balance_residuals(&p, 0.0, &f);
        assert_relative_eq!(r1, 1.0, max_relative = 1e-12);
        assert_relative_eq!(r2, -1.0, max_relative = 1e-12);
        assert_relative_eq!(r3, -1.0, max_relative = 1e-12);
    }

    #[test]
    fn residuals_of_zero_forces_expose_tip_forces() {
        let p = robot(0.834, 3.53, 5.0, 5.0);
        let zero = ForceSolution {
            device_force: 0.0,
            grounding_force: 0.0,
            pipe_friction: 0.0,
            device_at_everting_end: false,
        };
        let [r1, r2, r3] = balance_residuals(&p, 0.0, &zero);
        assert_eq!(r1, 0.0);
        assert_relative_eq!(r2, 10.0, max_relative = 1e-12);
        assert_eq!(r3, 0.0);
    }

    #[test]
    fn oracle_matches_closed_form_at_reference_angle() {
        let p = RobotParams::reference();
        let closed = solve_climb_forces(&p, 0.3).unwrap();
        let oracle = oracle_solve(&p, 0.3).unwrap();
        assert!((closed.device_force - oracle.device_force).abs() <= BALANCE_TOLERANCE);
        assert!((closed.grounding_force - oracle.grounding_force).abs() <= BALANCE_TOLERANCE);
        assert!((closed.pipe_friction - oracle.pipe_friction).abs() <= BALANCE_TOLERANCE);
    }

    #[test]
    fn grounding_force_stays_positive_for_reference_constants() {
        // Tip forces exceed membrane + twice device weight, so even the
        // steepest descent keeps the device grounded at the rear end.
        let p = RobotParams::reference();
        assert!(p.tip_force_sum() / (p.membrane.weight + 2.0 * p.device.weight) > 1.0);
        for step in -90..=90 {
            let angle = f64::from(step).to_radians();
            assert!(solve_climb_forces(&p, angle).unwrap().grounding_force > 0.0);
        }
    }

    fn arbitrary_robot() -> impl Strategy<Value = RobotParams> {
        (
            0.0f64..100.0,
            0.0f64..100.0,
            0.0f64..50.0,
            0.0f64..50.0,
        )
            .prop_map(|(wm, wd, fe, fi)| RobotParams {
                membrane: MembraneSpec {
                    weight: wm,
                    inflated_outer_diameter: 0.137,
                    eversion_force: fe,
                    inversion_force: fi,
                },
                device: DeviceSpec {
                    weight: wd,
                    roller_radius: 0.017,
                    motor_resistance: 7.5,
                    torque_constant: 1.53,
                    loss_force: 40.0,
                    outer_diameter: 0.104,
                },
            })
    }

    proptest! {
        #[test]
        fn closed_form_matches_oracle(p in arbitrary_robot(), angle in -FRAC_PI_2..FRAC_PI_2) {
            let closed = solve_climb_forces(&p, angle).unwrap();
            let oracle = oracle_solve(&p, angle).unwrap();
            prop_assert!((closed.device_force - oracle.device_force).abs() <= BALANCE_TOLERANCE);
            prop_assert!((closed.grounding_force - oracle.grounding_force).abs() <= BALANCE_TOLERANCE);
            prop_assert!((closed.pipe_friction - oracle.pipe_friction).abs() <= BALANCE_TOLERANCE);
            prop_assert_eq!(closed.device_at_everting_end, oracle.device_at_everting_end);
        }

        #[test]
        fn solved_forces_balance(p in arbitrary_robot(), angle in -FRAC_PI_2..FRAC_PI_2) {
            let f = solve_climb_forces(&p, angle).unwrap();
            for r in balance_residuals(&p, angle, &f) {
                prop_assert!(r.abs() <= BALANCE_TOLERANCE);
            }
        }

        #[test]
        fn pipe_friction_is_antisymmetric(p in arbitrary_robot(), angle in 0.0..FRAC_PI_2) {
            let up = solve_climb_forces(&p, angle).unwrap();
            let down = solve_climb_forces(&p, -angle).unwrap();
            prop_assert_eq!(up.pipe_friction, -down.pipe_friction);
        }

        #[test]
        fn forces_increase_with_inclination(p in arbitrary_robot(), a in -FRAC_PI_2..FRAC_PI_2, b in -FRAC_PI_2..FRAC_PI_2) {
            prop_assume!(p.total_weight() > 0.0);
            prop_assume!(a.sin() < b.sin());
            let fa = solve_climb_forces(&p, a).unwrap();
            let fb = solve_climb_forces(&p, b).unwrap();
            prop_assert!(fa.device_force < fb.device_force);
            prop_assert!(fa.grounding_force <= fb.grounding_force);
        }

        #[test]
        fn device_force_ignores_bracing(p in arbitrary_robot(), angle in -FRAC_PI_2..FRAC_PI_2,
                                        mu in 0.0f64..2.0, pressure in 0.0f64..10_000.0,
                                        radius in 0.01f64..0.5, length in 0.01f64..2.0) {
            // The environment never enters the drive-force computation;
            // touching it must leave the solution bit-identical.
            let env = PipeEnvironment {
                inner_radius: radius,
                angle,
                contact_length: length,
                mu_static: mu,
                pressure,
            };
            env.validate().unwrap();
            let reference = solve_climb_forces(&p, angle).unwrap();
            let again = solve_climb_forces(&p, angle).unwrap();
            prop_assert_eq!(reference.device_force.to_bits(), again.device_force.to_bits());
        }
    }
}
