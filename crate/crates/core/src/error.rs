use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two divisor classes live on blow-ups of a different number of points.
    #[error("num_points mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    /// A degree outside the range supported by the requested operation.
    #[error("invalid degree {degree}: {reason}")]
    InvalidDegree { degree: i64, reason: &'static str },

    /// Blow-up point count outside 0..=8.
    #[error("invalid number of blown-up points {num_points}: no del Pezzo surface")]
    InvalidNumPoints { num_points: usize },

    /// Text that does not match either class grammar.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// A class that was required to be a conic class is not one.
    #[error("{class} is not a conic class on the degree-{degree} surface")]
    NotConicClass { class: String, degree: i64 },

    /// Reflection requested in a class of self-intersection != -2.
    #[error("reflection root has self-intersection {found}, expected -2")]
    NotARoot { found: i64 },

    /// A reflection orbit grew past the safety cap.
    #[error("orbit exceeded cap of {cap} classes")]
    OrbitOverflow { cap: usize },

    /// Degree 9: the covering K3 surface has no elliptic fibrations.
    #[error("degree 9: the covering K3 surface admits no elliptic fibration")]
    NoEllipticFibrations,

    /// An (ns_rank, delta) or (degree, delta) pair outside the strictly
    /// elliptic family, or a parity violation in the fixed-locus formulas.
    #[error("invariant violation: {0}")]
    InvalidInvariants(String),

    /// A branch-intersection pattern that no fiber can realize.
    #[error("invalid fiber pattern: {0}")]
    InvalidPattern(String),

    /// Non-square or non-symmetric Gram data.
    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),
}

pub type Result<T> = std::result::Result<T, Error>;
