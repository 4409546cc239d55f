use thiserror::Error;

/// Errors raised by the numeric and combinatorial routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{function}: argument {at} outside the supported range ({limit})")]
    Range {
        function: &'static str,
        at: String,
        limit: String,
    },

    #[error("domain error in {function}: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },

    #[error("period term {term} hits a pole: {detail}")]
    PoleHit { term: usize, detail: String },

    #[error("iterated residue did not converge after {nodes} nodes per circle (last relative change {change:.3e})")]
    ResidueInstability { nodes: usize, change: f64 },

    #[error("iterated residue depends on the contour radii (relative change {change:.3e} after halving); check residue order and radii")]
    RadiusDiagnostic { change: f64 },

    #[error("normalization calibration failed: best functional-equation deviation {best_deviation:.3e} at centre {best_centre}")]
    Calibration {
        best_deviation: f64,
        best_centre: f64,
    },

    #[error("quadrature did not converge: estimate {estimate}, error estimate {error_estimate:.3e}")]
    Quadrature {
        estimate: String,
        error_estimate: f64,
    },

    #[error("degenerate lattice basis (volume {volume:.3e})")]
    DegenerateBasis { volume: f64 },

    #[error("sample within the tie band ({0})")]
    Tie(String),

    #[error("point lies on a wall: {0}")]
    Wall(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
