//! Quasistatic modeling and planar simulation of everting toroidal robots.
//!
//! An everting toroidal robot is a closed membrane torus that locomotes by
//! everting at its front tip and inverting at its rear tip, driven by a
//! motorized roller device riding inside the pressurized body. This crate
//! covers the force balance for climbing a pipe at arbitrary angles, the
//! stall-regime motor electrical model and its calibration, pressure-based
//! friction anchoring limits, sweep harnesses for the validation
//! experiments, and a 2D quasistatic locomotion simulator for maze and
//! pipe scenarios.
//!
//! All internal quantities are SI (N, m, rad, Pa, Ω, N·m/A). Unit
//! conversions happen only at the boundaries, via [`units`] and the
//! strict config format in [`config`].

pub mod actuation;
pub mod anchoring;
pub mod config;
pub mod harness;
pub mod params;
pub mod sim;
pub mod statics;
pub mod units;

pub use params::{validate, DeviceSpec, MembraneSpec, PipeEnvironment, RobotParams};
pub use statics::ForceSolution;

/// Crate-wide error type. Domain errors (invariant and precondition
/// violations) are distinguished from input errors (config parsing, unit
/// tags, I/O) so a front end can map them to different exit statuses.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A physical parameter violates its invariant; the message names the
    /// first violated invariant.
    #[error("{0}")]
    InvalidParameter(String),

    /// Pipe angle outside [-pi/2, +pi/2].
    #[error("angle out of domain")]
    AngleOutOfDomain,

    /// The inflated membrane is narrower than the pipe bore, so pressure
    /// generates no contact normal force.
    #[error("membrane does not press against pipe")]
    MembraneNotPressing,

    /// The force-balance system matrix was reported singular by the
    /// linear solver. Cannot occur for the current equation set.
    #[error("force balance system is singular")]
    SingularSystem,

    /// Config text failed to parse.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A quantity carried a unit tag outside the accepted set for its
    /// dimension.
    #[error("field `{field}`: unsupported unit `{unit}` (expected one of: {expected})")]
    Unit {
        field: String,
        unit: String,
        expected: &'static str,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by unreadable or malformed input rather
    /// than by out-of-domain physics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Unit { .. } | Error::Io(_))
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidParameter(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
