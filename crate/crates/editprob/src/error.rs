//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while validating inputs, scoring, or
/// decoding.
#[derive(Debug, Error)]
pub enum EpError {
    /// A probability entry was negative.
    #[error("negative entry {value} in {location}")]
    NegativeEntry { location: String, value: f64 },

    /// A probability vector does not sum to one within tolerance.
    #[error("{location} sums to {sum}, outside tolerance {tolerance} of 1")]
    BadSum {
        location: String,
        sum: f64,
        tolerance: f64,
    },

    /// A vector or matrix has the wrong length for the alphabet or frames.
    #[error("dimension mismatch in {location}: expected {expected}, got {got}")]
    DimensionMismatch {
        location: String,
        expected: usize,
        got: usize,
    },

    /// An edit-operation index lies outside the valid state range.
    #[error("{op} at i={i}, j={j} is out of range for |T|={target_len}, n={frames}")]
    IndexOutOfRange {
        op: &'static str,
        i: usize,
        j: usize,
        target_len: usize,
        frames: usize,
    },

    /// A sequence of edit operations does not form a connected path from the
    /// start state.
    #[error("invalid edit chain at step {step}: expected state ({expected_i}, {expected_j}), op lands at ({got_i}, {got_j})")]
    InvalidChain {
        step: usize,
        expected_i: usize,
        expected_j: usize,
        got_i: usize,
        got_j: usize,
    },

    /// The quantity being differentiated or normalized is exactly zero.
    #[error("zero probability in {location}; gradient undefined")]
    ZeroProbability { location: String },

    /// A batch item failed; wraps the underlying error with its index.
    #[error("batch item {index}: {source}")]
    BatchItem {
        index: usize,
        #[source]
        source: Box<EpError>,
    },

    /// Brute-force enumeration was asked for an instance beyond its guards.
    #[error("instance too large for exhaustive enumeration: {what} = {got}, limit {limit}")]
    TooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    /// A lexicon word contains the end-of-sequence symbol.
    #[error("lexicon word {word:?} contains the end-of-sequence symbol")]
    WordContainsEos { word: String },

    /// The lexicon blend weight lies outside `[0.5, 1]`.
    #[error("lambda {lambda} outside [0.5, 1]")]
    LambdaOutOfRange { lambda: f64 },

    /// Malformed alphabet (duplicate symbols, missing end-of-sequence, ...).
    #[error("invalid alphabet: {reason}")]
    InvalidAlphabet { reason: String },

    /// Malformed target string.
    #[error("invalid target: {reason}")]
    InvalidTarget { reason: String },

    /// A character is not part of the alphabet.
    #[error("character {ch:?} not in alphabet")]
    UnknownSymbol { ch: char },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, EpError>;
