//! Edit probability for frame-wise string recognition.
//!
//! Given per-frame probability distributions — characters, a
//! consume/insert/delete split, and insertion characters — the edit
//! probability of a target string is the total probability of *every* way of
//! editing the frame sequence into the string. It tolerates misalignment
//! (missing, superfluous, or duplicated frames) that a frame-wise product
//! cannot express, while reducing exactly to that product when no edits are
//! allowed.
//!
//! The crate provides:
//!
//! - scoring ([`ep_forward`], [`ep_score`]) and the most probable single
//!   alignment ([`best_edit_path`]);
//! - exact gradients of `-ln ep` with respect to every emission entry
//!   ([`ep_backward`], [`batch_loss`]), plus softmax chaining
//!   ([`chain_softmax`]) for models that emit logits;
//! - decoding, lexicon-free ([`predict_free`]) and lexicon-blended
//!   ([`predict_lex`]) with a shared-prefix trie ([`build_trie`]);
//! - brute-force reference implementations behind the `oracle` feature.
//!
//! All kernels are generic over the floating-point type via [`Scalar`];
//! the `*32`/`*64` aliases pin the two concrete instantiations.

pub mod alphabet;
pub mod best_path;
pub mod decode;
pub mod emissions;
mod error;
pub mod forward;
pub mod grad;
pub mod logspace;
pub mod ops;
#[cfg(feature = "oracle")]
pub mod oracle;
mod scalar;
pub mod trie;

pub use alphabet::{Alphabet, TargetString};
pub use best_path::best_edit_path;
pub use decode::{
    greedy_base_string, predict_free, predict_lex, predict_lex_enumerated, Lexicon, Prediction,
    PredictionSource,
};
pub use emissions::{validate_emissions, EmissionSequence, Frame, R_CONSUME, R_DELETE, R_INSERT};
pub use error::{EpError, Result};
pub use forward::{ep_forward, ep_score, EpMatrix};
pub use grad::{batch_loss, chain_softmax, ep_backward, EmissionGradients, FrameGradients};
pub use ops::{op_log_prob, path_log_prob, EditKind, EditOp, EditPath};
pub use scalar::Scalar;

/// [`Frame`] over `f32`.
pub type Frame32 = Frame<f32>;
/// [`Frame`] over `f64`.
pub type Frame64 = Frame<f64>;
/// [`EmissionSequence`] over `f32`.
pub type EmissionSequence32 = EmissionSequence<f32>;
/// [`EmissionSequence`] over `f64`.
pub type EmissionSequence64 = EmissionSequence<f64>;
/// [`EpMatrix`] over `f32`.
pub type EpMatrix32 = EpMatrix<f32>;
/// [`EpMatrix`] over `f64`.
pub type EpMatrix64 = EpMatrix<f64>;
/// [`EmissionGradients`] over `f32`.
pub type EmissionGradients32 = EmissionGradients<f32>;
/// [`EmissionGradients`] over `f64`.
pub type EmissionGradients64 = EmissionGradients<f64>;
/// [`Prediction`] over `f32`.
pub type Prediction32 = Prediction<f32>;
/// [`Prediction`] over `f64`.
pub type Prediction64 = Prediction<f64>;
/// [`trie::EpTrie`] over `f32`.
pub type EpTrie32 = trie::EpTrie<f32>;
/// [`trie::EpTrie`] over `f64`.
pub type EpTrie64 = trie::EpTrie<f64>;
