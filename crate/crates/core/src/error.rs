use thiserror::Error;

/// Errors produced across the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("partition error on {axis} axis: {size} is not divisible by {sub}")]
    Partition { axis: Axis, size: usize, sub: usize },

    #[error("mount direction (theta {theta_mount}°, phi {phi_mount}°) is behind the surface")]
    OutOfHemisphere { theta_mount: f64, phi_mount: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degenerate pattern: {0}")]
    DegeneratePattern(String),

    #[error("frequency {freq_ghz} GHz is outside the table range [{lo_ghz}, {hi_ghz}] GHz; extrapolation refused")]
    ExtrapolationRefused { freq_ghz: f64, lo_ghz: f64, hi_ghz: f64 },

    #[error("configuration space of 3^{subarrays} exceeds {limit} candidates; use the greedy search")]
    TooLarge { subarrays: usize, limit: u64 },

    #[error("schedule ordering error: {0}")]
    Ordering(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Lattice axis named in partition errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Cols,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::Rows => f.write_str("rows"),
            Axis::Cols => f.write_str("cols"),
        }
    }
}

impl Error {
    /// Process exit code: 1 for validation failures, 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::DegeneratePattern(_) | Error::TooLarge { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
