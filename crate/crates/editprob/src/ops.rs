//! Edit operations and path probabilities.
//!
//! An edit path rewrites the empty string and the full frame sequence into a
//! target string and no remaining frames. Every operation is tagged with the
//! state `(i, j)` it lands in: `i` target characters produced, `j` frames
//! spent. Frames are numbered from 1, so the operation landing in column `j`
//! by consuming or deleting a frame refers to frame `j`, while an insertion
//! landing in column `j` happens before frame `j + 1` (or after the last
//! frame when `j = n`, which draws from `final_ins`).

use crate::alphabet::TargetString;
use crate::emissions::EmissionSequence;
use crate::error::{EpError, Result};
use crate::logspace::ln_prob;
use crate::scalar::Scalar;

/// The three edit operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EditKind {
    /// Consume frame `j` to produce target character `i`.
    Consume,
    /// Delete frame `j`, producing nothing.
    Delete,
    /// Insert target character `i` without spending a frame.
    Insert,
}

impl EditKind {
    /// Lower-case name used in dumps.
    pub fn name(self) -> &'static str {
        match self {
            EditKind::Consume => "consume",
            EditKind::Delete => "delete",
            EditKind::Insert => "insert",
        }
    }
}

/// One edit operation and the state it lands in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EditOp {
    pub kind: EditKind,
    /// Target characters produced after this operation.
    pub i: usize,
    /// Frames spent after this operation.
    pub j: usize,
}

impl EditOp {
    pub fn consume(i: usize, j: usize) -> Self {
        Self { kind: EditKind::Consume, i, j }
    }

    pub fn delete(i: usize, j: usize) -> Self {
        Self { kind: EditKind::Delete, i, j }
    }

    pub fn insert(i: usize, j: usize) -> Self {
        Self { kind: EditKind::Insert, i, j }
    }

    /// The state this operation starts from.
    pub fn source(&self) -> (usize, usize) {
        match self.kind {
            EditKind::Consume => (self.i - 1, self.j - 1),
            EditKind::Delete => (self.i, self.j - 1),
            EditKind::Insert => (self.i - 1, self.j),
        }
    }
}

/// An ordered sequence of operations; valid paths chain from state `(0, 0)`.
pub type EditPath = Vec<EditOp>;

/// Log-probability of consuming frame `j` (1-based) as character `t`.
pub(crate) fn consume_log<F: Scalar>(em: &EmissionSequence<F>, t: usize, j: usize) -> F {
    let f = em.frame(j);
    ln_prob(f.r_consume()) + ln_prob(f.y[t])
}

/// Log-probability of deleting frame `j` when the produced prefix ends (or
/// not) with the EOS symbol. Deleting past a finished string is free.
pub(crate) fn delete_log<F: Scalar>(em: &EmissionSequence<F>, prefix_done: bool, j: usize) -> F {
    if prefix_done {
        F::zero()
    } else {
        ln_prob(em.frame(j).r_delete())
    }
}

/// Log-probability of inserting character `t` while `j` frames are spent:
/// before frame `j + 1`, or from `final_ins` when all frames are spent.
pub(crate) fn insert_log<F: Scalar>(em: &EmissionSequence<F>, t: usize, j: usize) -> F {
    if j < em.len() {
        let f = em.frame(j + 1);
        ln_prob(f.r_insert()) + ln_prob(f.ins[t])
    } else {
        ln_prob(em.final_ins[t])
    }
}

fn check_range<F: Scalar>(
    em: &EmissionSequence<F>,
    target: &TargetString,
    op: &EditOp,
) -> Result<()> {
    let m = target.len();
    let n = em.len();
    let ok = match op.kind {
        EditKind::Consume => op.i >= 1 && op.i <= m && op.j >= 1 && op.j <= n,
        EditKind::Delete => op.i <= m && op.j >= 1 && op.j <= n,
        EditKind::Insert => op.i >= 1 && op.i <= m && op.j <= n,
    };
    if ok {
        Ok(())
    } else {
        Err(EpError::IndexOutOfRange {
            op: op.kind.name(),
            i: op.i,
            j: op.j,
            target_len: m,
            frames: n,
        })
    }
}

/// Log-probability of a single operation landing at `(op.i, op.j)`.
pub fn op_log_prob<F: Scalar>(
    em: &EmissionSequence<F>,
    target: &TargetString,
    op: EditOp,
) -> Result<F> {
    check_range(em, target, &op)?;
    Ok(match op.kind {
        EditKind::Consume => consume_log(em, target.symbol_at(op.i), op.j),
        EditKind::Delete => delete_log(em, op.i == target.len(), op.j),
        EditKind::Insert => insert_log(em, target.symbol_at(op.i), op.j),
    })
}

/// Log-probability of an operation sequence starting at `(0, 0)`.
///
/// The path must chain: each operation's source state is the previous
/// operation's landing state. It may stop anywhere; the empty path has
/// log-probability zero.
pub fn path_log_prob<F: Scalar>(
    em: &EmissionSequence<F>,
    target: &TargetString,
    path: &[EditOp],
) -> Result<F> {
    let mut state = (0usize, 0usize);
    let mut total = F::zero();
    for (step, op) in path.iter().enumerate() {
        check_range(em, target, op)?;
        if op.source() != state {
            let expected = match op.kind {
                EditKind::Consume => (state.0 + 1, state.1 + 1),
                EditKind::Delete => (state.0, state.1 + 1),
                EditKind::Insert => (state.0 + 1, state.1),
            };
            return Err(EpError::InvalidChain {
                step,
                expected_i: expected.0,
                expected_j: expected.1,
                got_i: op.i,
                got_j: op.j,
            });
        }
        state = (op.i, op.j);
        total = total + op_log_prob(em, target, *op)?;
    }
    Ok(total)
}
