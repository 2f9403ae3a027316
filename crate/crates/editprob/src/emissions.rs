//! Per-frame emission data.
//!
//! A recognizer hands us, for every frame `j`, a distribution `y_j` over the
//! alphabet, a three-way split `r_j` between consuming, inserting before, and
//! deleting the frame, and an insertion distribution `ins_j` for characters
//! inserted before the frame. One extra insertion distribution, `final_ins`,
//! covers characters appended after the last frame.

use crate::alphabet::Alphabet;
use crate::error::{EpError, Result};
use crate::scalar::Scalar;

/// Index of the consume share in [`Frame::r`].
pub const R_CONSUME: usize = 0;
/// Index of the insert share in [`Frame::r`].
pub const R_INSERT: usize = 1;
/// Index of the delete share in [`Frame::r`].
pub const R_DELETE: usize = 2;

/// One frame's distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame<F> {
    /// Character distribution over the alphabet.
    pub y: Vec<F>,
    /// Consume / insert / delete split, in that order.
    pub r: [F; 3],
    /// Distribution of characters inserted before this frame.
    pub ins: Vec<F>,
}

impl<F: Scalar> Frame<F> {
    /// Probability of consuming this frame.
    pub fn r_consume(&self) -> F {
        self.r[R_CONSUME]
    }

    /// Probability of inserting a character before this frame.
    pub fn r_insert(&self) -> F {
        self.r[R_INSERT]
    }

    /// Probability of deleting this frame.
    pub fn r_delete(&self) -> F {
        self.r[R_DELETE]
    }
}

/// A full emission sequence: frames plus the trailing insertion distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionSequence<F> {
    /// Frames in order; frame `j` of the math is `frames[j - 1]`.
    pub frames: Vec<Frame<F>>,
    /// Distribution of characters inserted after the last frame.
    pub final_ins: Vec<F>,
}

impl<F: Scalar> EmissionSequence<F> {
    /// Number of frames `n`.
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    /// True when the sequence has no frames (still scoreable via
    /// `final_ins`).
    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Alphabet size implied by the vectors, from `final_ins`.
    pub fn alphabet_len(&self) -> usize {
        self.final_ins.len()
    }

    /// Frame `j` in 1-based frame numbering.
    pub fn frame(&self, j: usize) -> &Frame<F> {
        &self.frames[j - 1]
    }
}

fn check_vector<F: Scalar>(
    v: &[F],
    expected_len: usize,
    tolerance: F,
    location: impl Fn() -> String,
) -> Result<F> {
    if v.len() != expected_len {
        return Err(EpError::DimensionMismatch {
            location: location(),
            expected: expected_len,
            got: v.len(),
        });
    }
    let mut sum = F::zero();
    for &p in v {
        if p < F::zero() || !p.is_finite() {
            return Err(EpError::NegativeEntry {
                location: location(),
                value: p.to_f64().unwrap_or(f64::NAN),
            });
        }
        sum = sum + p;
    }
    if (sum - F::one()).abs() > tolerance {
        return Err(EpError::BadSum {
            location: location(),
            sum: sum.to_f64().unwrap_or(f64::NAN),
            tolerance: tolerance.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(sum)
}

fn renormalize<F: Scalar>(v: &mut [F], sum: F) {
    for p in v {
        *p = *p / sum;
    }
}

/// Checks raw emissions against `alphabet` and returns them with every
/// distribution renormalized to sum exactly to one.
///
/// Entries must be non-negative and each vector must already sum to one
/// within `tolerance`; renormalization only removes the residual. An empty
/// frame list is valid.
pub fn validate_emissions<F: Scalar>(
    mut raw: EmissionSequence<F>,
    alphabet: &Alphabet,
    tolerance: F,
) -> Result<EmissionSequence<F>> {
    let k = alphabet.len();
    for (idx, frame) in raw.frames.iter_mut().enumerate() {
        let j = idx + 1;
        let sum = check_vector(&frame.y, k, tolerance, || format!("y of frame {j}"))?;
        renormalize(&mut frame.y, sum);
        let sum = check_vector(&frame.r, 3, tolerance, || format!("r of frame {j}"))?;
        renormalize(&mut frame.r, sum);
        let sum = check_vector(&frame.ins, k, tolerance, || format!("ins of frame {j}"))?;
        renormalize(&mut frame.ins, sum);
    }
    let sum = check_vector(&raw.final_ins, k, tolerance, || "final_ins".to_string())?;
    renormalize(&mut raw.final_ins, sum);
    Ok(raw)
}
