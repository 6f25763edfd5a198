//! Crate-wide error type.
//!
//! Every fallible operation in the crate returns [`Error`]. Variants carry
//! enough context (offending charge, grid detail, file path) to make a failed
//! pipeline run diagnosable without a debugger.

use std::fmt;
use std::io;
use std::path::PathBuf;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the simulator core.
#[derive(Debug)]
#[non_exhaustive]
pub enum Error {
    /// A numeric input was NaN or infinite.
    NonFinite {
        /// Which quantity was non-finite.
        what: &'static str,
    },
    /// A parameter fell outside its documented range.
    InvalidParameter {
        /// Which parameter was rejected.
        what: &'static str,
        /// Human-readable detail (offending value, allowed range).
        detail: String,
    },
    /// A topological charge exceeded the supported |l| ≤ 8 sanity bound.
    ChargeOutOfRange {
        /// The offending charge.
        l: i32,
    },
    /// A superposition had no coefficients (or lost them all to pruning).
    EmptyState,
    /// A state or field with zero norm reached a normalization step.
    ZeroNorm,
    /// A charge outside {−1, 0, +1} reached a logical decode.
    OutOfAlphabet {
        /// The undecodable charge.
        l: i32,
    },
    /// Both +1 and −1 carried weight where the ±1 → 1 logical fold needs a
    /// single representative.
    AmbiguousFold,
    /// Two grids disagreed in shape, plane or pixel pitch.
    GridMismatch {
        /// What differed between the grids.
        detail: String,
    },
    /// A joint two-qubit state expected to factor as control ⊗ target did not.
    NonProduct {
        /// Diagnostic for the failed factorization.
        detail: String,
    },
    /// A gate produced or received charges its wiring cannot represent.
    Wiring {
        /// Display name of the gate.
        gate: &'static str,
        /// What went wrong.
        detail: String,
    },
    /// An all-zero intensity grid reached an operation that needs structure.
    DegenerateGrid,
    /// File I/O failed.
    Io {
        /// Path involved in the failed operation.
        path: PathBuf,
        /// Underlying OS error.
        source: io::Error,
    },
    /// A grid file had a malformed header or payload.
    MalformedGrid {
        /// What was malformed.
        detail: String,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite { what } => write!(f, "{what} must be finite"),
            Error::InvalidParameter { what, detail } => {
                write!(f, "invalid {what}: {detail}")
            }
            Error::ChargeOutOfRange { l } => {
                write!(f, "topological charge {l} outside the supported |l| <= 8 range")
            }
            Error::EmptyState => write!(f, "superposition has no coefficients"),
            Error::ZeroNorm => write!(f, "state has zero norm and cannot be normalized"),
            Error::OutOfAlphabet { l } => {
                write!(f, "charge {l} is outside the logical alphabet {{-1, 0, +1}}")
            }
            Error::AmbiguousFold => write!(
                f,
                "both +1 and -1 carry weight; the logical fold needs a single |1> representative"
            ),
            Error::GridMismatch { detail } => write!(f, "grid mismatch: {detail}"),
            Error::NonProduct { detail } => {
                write!(f, "joint state does not factor into control x target: {detail}")
            }
            Error::Wiring { gate, detail } => write!(f, "{gate} gate wiring error: {detail}"),
            Error::DegenerateGrid => write!(f, "intensity grid is identically zero"),
            Error::Io { path, source } => write!(f, "i/o error on {}: {source}", path.display()),
            Error::MalformedGrid { detail } => write!(f, "malformed grid file: {detail}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_carries_context() {
        let e = Error::ChargeOutOfRange { l: 11 };
        assert!(e.to_string().contains("11"), "message should name the charge: {e}");

        let e = Error::Wiring {
            gate: "NOT",
            detail: "output charge -2".into(),
        };
        let msg = e.to_string();
        assert!(msg.contains("NOT") && msg.contains("-2"), "unexpected message: {msg}");
    }

    #[test]
    fn io_errors_expose_their_source() {
        use std::error::Error as _;
        let e = Error::Io {
            path: PathBuf::from("/tmp/x.pgm"),
            source: io::Error::new(io::ErrorKind::NotFound, "gone"),
        };
        assert!(e.source().is_some());
        assert!(e.to_string().contains("x.pgm"));
    }
}
