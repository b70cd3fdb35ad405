//! Command-line front end: config loading, the analysis commands, and
//! CSV emission. All numeric output is printed in scientific notation
//! with six significant digits so runs diff cleanly.
//!
//! Exit status: 0 on success, 1 on a domain error (invalid parameters,
//! out-of-domain angle), 2 on an I/O, parse, or unit error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use torosim::actuation::{calibrate_lumped_losses, stall_operating_point};
use torosim::anchoring::{assess_slip, burst_pressure_warning, min_pressure_for_no_slip};
use torosim::config::{load_config, ConfigDocument};
use torosim::harness::{
    angle_sweep, angle_sweep_residuals, parse_measured_csv, pressure_sweep,
    pressure_sweep_residuals, SweepReport, DEFAULT_SLIP_SWEEP_PRESSURES,
};
use torosim::sim::run_to_trajectory_csv;
use torosim::statics::solve_climb_forces;
use torosim::units::radians_from_degrees;
use torosim::{validate, Result, RobotParams};

#[derive(Parser)]
#[command(
    name = "torosim",
    version,
    about = "Everting toroidal robot: climb statics, anchoring limits, and planar locomotion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Robot/environment config file.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the climb force balance at a pipe angle and report the
    /// motor operating point at stall.
    Solve {
        #[command(flatten)]
        config: ConfigArg,
        /// Pipe angle in degrees, within [-90, 90].
        #[arg(long)]
        angle: f64,
        /// Fold the battery weight into the device weight.
        #[arg(long)]
        with_battery: bool,
    },
    /// Sweep pipe angle; report forces and stall voltage per angle.
    SweepAngle {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value_t = -90.0)]
        start: f64,
        #[arg(long, default_value_t = 90.0)]
        end: f64,
        #[arg(long, default_value_t = 10.0)]
        step: f64,
        /// Write the sweep table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Measured points CSV (theta_deg, V_volts) to diff against.
        #[arg(long)]
        measured: Option<PathBuf>,
    },
    /// Sweep internal pressure; report the supportable vertical load line.
    SweepPressure {
        #[command(flatten)]
        config: ConfigArg,
        /// Pressures in kPa, comma separated; defaults to the five-point
        /// validation sweep.
        #[arg(long, value_delimiter = ',')]
        pressures: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Measured points CSV (P_Pa, load_N) to diff against.
        #[arg(long)]
        measured: Option<PathBuf>,
    },
    /// Assess the anchoring slip margin in the configured pipe.
    Slip {
        #[command(flatten)]
        config: ConfigArg,
        /// Override the pipe angle (degrees).
        #[arg(long)]
        angle: Option<f64>,
        /// Override the internal pressure (kPa).
        #[arg(long)]
        pressure: Option<f64>,
        #[arg(long)]
        with_battery: bool,
    },
    /// Minimum internal pressure that holds the robot in a vertical pipe.
    MinPressure {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        with_battery: bool,
    },
    /// Back out the lumped tip and loss force sum from a horizontal
    /// stall voltage.
    Calibrate {
        #[command(flatten)]
        config: ConfigArg,
        /// Measured motor voltage at zero inclination (V).
        #[arg(long)]
        voltage: f64,
    },
    /// Run a planar locomotion scenario and write the tip trajectory.
    Simulate {
        /// Scenario config file (a document with a "sim" section).
        #[arg(long)]
        scenario: PathBuf,
        /// Trajectory CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the integration step (s).
        #[arg(long)]
        dt: Option<f64>,
    },
}

fn sci(value: f64) -> String {
    format!("{value:.5e}")
}

fn robot_from(doc: &ConfigDocument, with_battery: bool) -> Result<RobotParams> {
    if with_battery {
        doc.robot_params_with_battery()
    } else {
        doc.robot_params()
    }
}

fn write_report(report: &SweepReport, out: Option<&Path>) -> Result<()> {
    print!("{}", report.summary());
    if let Some(path) = out {
        std::fs::write(path, report.to_csv())?;
        println!("csv written to {}", path.display());
    }
    Ok(())
}

fn print_residuals(rows: &[torosim::harness::Residual]) {
    println!("input,measured,modeled,residual");
    for r in rows {
        println!(
            "{},{},{},{}",
            sci(r.input),
            sci(r.measured),
            sci(r.modeled),
            sci(r.residual)
        );
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            config,
            angle,
            with_battery,
        } => {
            let doc = load_config(&config.config)?;
            let params = robot_from(&doc, with_battery)?;
            params.validate()?;
            let forces = solve_climb_forces(&params, radians_from_degrees(angle))?;
            let op = stall_operating_point(&params, forces.device_force);
            println!("theta_deg = {}", sci(angle));
            println!("device_force_N = {}", sci(forces.device_force));
            println!("grounding_force_N = {}", sci(forces.grounding_force));
            println!("pipe_friction_N = {}", sci(forces.pipe_friction));
            println!("device_at_everting_end = {}", forces.device_at_everting_end);
            println!("stall_voltage_V = {}", sci(op.voltage));
            println!("stall_current_A = {}", sci(op.current));
            println!("stall_torque_per_roller_Nm = {}", sci(op.torque_per_roller));
        }
        Command::SweepAngle {
            config,
            start,
            end,
            step,
            out,
            measured,
        } => {
            let doc = load_config(&config.config)?;
            let params = doc.robot_params()?;
            let report = angle_sweep(&params, start, end, step)?;
            write_report(&report, out.as_deref())?;
            if let Some(path) = measured {
                let points = parse_measured_csv(&std::fs::read_to_string(path)?)?;
                print_residuals(&angle_sweep_residuals(&params, &points)?);
            }
        }
        Command::SweepPressure {
            config,
            pressures,
            out,
            measured,
        } => {
            let doc = load_config(&config.config)?;
            let params = doc.robot_params()?;
            let env = doc.pipe_environment()?;
            validate(&params, &env)?;
            let pressures_pa: Vec<f64> = pressures.map_or_else(
                || DEFAULT_SLIP_SWEEP_PRESSURES.to_vec(),
                |kpa| kpa.into_iter().map(|p| p * 1000.0).collect(),
            );
            let report = pressure_sweep(&params, &env, &pressures_pa)?;
            write_report(&report, out.as_deref())?;
            if let Some(path) = measured {
                let points = parse_measured_csv(&std::fs::read_to_string(path)?)?;
                print_residuals(&pressure_sweep_residuals(&params, &env, &points)?);
            }
        }
        Command::Slip {
            config,
            angle,
            pressure,
            with_battery,
        } => {
            let doc = load_config(&config.config)?;
            let params = robot_from(&doc, with_battery)?;
            let mut env = doc.pipe_environment()?;
            if let Some(angle_deg) = angle {
                env.angle = radians_from_degrees(angle_deg);
            }
            if let Some(kpa) = pressure {
                env.pressure = kpa * 1000.0;
            }
            validate(&params, &env)?;
            let assessment = assess_slip(&params, &env)?;
            println!("required_friction_N = {}", sci(assessment.required_friction));
            println!("available_friction_N = {}", sci(assessment.available_friction));
            println!("margin_N = {}", sci(assessment.margin));
            println!("slips = {}", assessment.slips);
            if let Some(warning) =
                burst_pressure_warning(env.pressure, doc.burst_pressure_soft_limit())
            {
                println!("warning: {warning}");
            }
        }
        Command::MinPressure {
            config,
            with_battery,
        } => {
            let doc = load_config(&config.config)?;
            let params = robot_from(&doc, with_battery)?;
            let env = doc.pipe_environment()?;
            validate(&params, &env)?;
            let pressure = min_pressure_for_no_slip(params.total_weight(), &env)?;
            println!("total_weight_N = {}", sci(params.total_weight()));
            println!("min_pressure_Pa = {}", sci(pressure));
        }
        Command::Calibrate { config, voltage } => {
            let doc = load_config(&config.config)?;
            let params = doc.robot_params()?;
            params.validate()?;
            let sum = calibrate_lumped_losses(
                voltage,
                params.device.roller_radius,
                params.device.motor_resistance,
                params.device.torque_constant,
            );
            println!("horizontal_voltage_V = {}", sci(voltage));
            println!("lumped_tip_and_loss_force_N = {}", sci(sum));
        }
        Command::Simulate { scenario, out, dt } => {
            let doc = load_config(&scenario)?;
            let planar = doc.scenario()?;
            let step = dt.unwrap_or_else(|| doc.dt());
            let (state, outcome, csv) = run_to_trajectory_csv(&planar, step)?;
            println!("outcome = {}", outcome.label());
            println!("elapsed_s = {}", sci(state.elapsed));
            println!(
                "tip_m = ({}, {})",
                sci(state.tip().x),
                sci(state.tip().y)
            );
            for kind in ["contact-begin", "deflection", "squeeze-begin", "squeeze-end"] {
                let count = state
                    .event_log
                    .iter()
                    .filter(|e| e.kind.label() == kind)
                    .count();
                println!("events[{kind}] = {count}");
            }
            if let Some(path) = out {
                std::fs::write(&path, csv)?;
                println!("trajectory written to {}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            if error.is_input_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
