//! Analysis toolkit for LDPC code ensembles around and above the iterative
//! decoding threshold.
//!
//! The crate provides:
//!
//! - degree-distribution polynomials and their calculus ([`degree`]),
//! - Tanner-graph sampling, parity-check matrices, alist I/O and codeword
//!   enumeration ([`tanner`], [`gf2`]),
//! - memoryless channel models with a unified entropy noise parameter
//!   ([`channel`]),
//! - the peeling decoder for the erasure channel ([`peeling`]),
//! - a symbolic complete list decoder for the erasure channel with exact
//!   entropy accounting ([`maxwell`]),
//! - scalar and quantized-LLR density evolution ([`density`]),
//! - EXIT/GEXIT curves, ML-threshold estimation by area balance, and the
//!   density-evolution upper bound on the ML threshold ([`exit`]),
//! - an exact small-code oracle for conditional entropies, per-bit GEXIT
//!   values and the Gaussian MMSE relation ([`oracle`]).
//!
//! All reported entropies, curve values and kernels are in bits. LLR values
//! are natural-log ratios.

pub mod channel;
pub mod degree;
pub mod density;
pub mod error;
pub mod exit;
pub mod gf2;
pub mod maxwell;
pub mod numerics;
pub mod oracle;
pub mod peeling;
pub mod tanner;

pub use channel::{ChannelModel, ChannelOutput, Symbol};
pub use degree::{DegreePolynomial, EnsembleSpec};
pub use error::Error;
pub use maxwell::{MaxwellResult, MaxwellTrace};
pub use tanner::{ParityCheckMatrix, TannerGraph};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Deterministic per-trial RNG stream.
///
/// All Monte-Carlo entry points take a single base seed; trial `t` draws from
/// a ChaCha12 stream keyed by the seed with stream id `t`, so each trial is
/// reproducible in isolation.
pub fn trial_rng(seed: u64, trial: u64) -> rand_chacha::ChaCha12Rng {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
