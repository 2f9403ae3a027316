//! Failure modes of the lab: bad configs, corpus-format problems, and
//! training divergence. Scoring-level failures bubble up unchanged.

use editprob::EpError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Ep(#[from] EpError),

    #[error("invalid synth config: {reason}")]
    BadConfig { reason: String },

    #[error("corpus line {line}: {reason}")]
    BadCorpusLine { line: usize, reason: String },

    #[error("corpus i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("training diverged at epoch {epoch}: loss {loss}")]
    DivergedLoss { epoch: usize, loss: f64 },

    #[error("corpus is empty")]
    EmptyCorpus,
}

pub type Result<T> = std::result::Result<T, LabError>;
