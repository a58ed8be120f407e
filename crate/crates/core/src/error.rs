use crate::density::LlrDensity;

/// Errors produced by the analysis and decoding routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument fell outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Text input (ensemble string, channel spec, alist, config) failed to parse.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Variable- and check-side edge counts disagree after rounding.
    #[error("edge count mismatch: {var_edges} variable sockets vs {chk_edges} check sockets")]
    EdgeCountMismatch { var_edges: usize, chk_edges: usize },

    /// An enumeration would exceed the caller-supplied cap.
    #[error("enumeration of {needed_log2} bits of entropy exceeds cap {cap}")]
    CapExceeded { needed_log2: u32, cap: u128 },

    /// Received word violates a parity check outright (not valid BEC output).
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    /// Exact oracle asked to enumerate beyond its size limits.
    #[error("size exceeded for exact computation: {0}")]
    SizeExceeded(String),

    /// Density evolution did not reach the requested residual.
    #[error("density evolution not converged: residual {residual:.3e} after {iterations} iterations")]
    NotConverged {
        residual: f64,
        iterations: usize,
        last: Box<LlrDensity>,
    },

    /// The parametric EXIT curve has more than one unstable interval.
    #[error("ensemble has multiple EXIT jumps; single-jump construction does not apply")]
    MultiJump,

    /// Derivative requested where the noise reparametrization is singular.
    #[error("singular noise reparametrization: {0}")]
    Singular(String),

    /// Two densities live on incompatible grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Finite-difference step too small; one-sided differences disagree.
    #[error("finite-difference cancellation: one-sided estimates differ by {0:.3e}")]
    Cancellation(f64),

    /// I/O error wrapped from std.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Shorthand for a [`Error::Domain`] error.
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Shorthand for a [`Error::Parse`] error at a given line.
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
