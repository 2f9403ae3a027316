//! A desk-scale training lab for edit-probability models.
//!
//! The question the lab answers: when feature frames drift out of sync with
//! the characters they encode — frames go missing, frames repeat — does
//! training through the edit probability beat training through the naive
//! frame-wise likelihood? Everything needed to pose that question lives
//! here:
//!
//! - [`synth`]: a misaligned-corpus generator over noisy one-hot features,
//!   with a stable on-disk line format and a prefix-heavy synthetic lexicon
//!   builder for decoder benchmarks.
//! - [`model`]: a frame-local softmax-head model ([`ToyModel`]) producing
//!   [`editprob::EmissionSequence`]s, with exact flat-parameter gradients
//!   for both the EP and the frame-wise (FP) objective.
//! - [`adadelta`]: the ADADELTA optimizer, self-contained.
//! - [`train`]: seeded mini-batch training and exact-match evaluation,
//!   lexicon-free or lexicon-constrained.
//! - [`rng`]: the pinned splitmix64 generator every seeded process uses, so
//!   corpora and runs reproduce bit-for-bit anywhere.
//!
//! Scoring, gradients, and decoding all come from the `editprob` crate; the
//! lab only adds data, parameters, and the loop.

pub mod adadelta;
pub mod error;
pub mod model;
pub mod rng;
pub mod synth;
pub mod train;

pub use adadelta::Adadelta;
pub use error::{LabError, Result};
pub use model::{fp_loss, LossKind, ToyModel};
pub use rng::SplitMix64;
pub use synth::{
    generate_corpus, read_corpus, synthetic_lexicon, toy_alphabet, write_corpus, Sample,
    SynthConfig,
};
pub use train::{evaluate, train, TrainConfig, TrainReport, DEFAULT_LAMBDA};
