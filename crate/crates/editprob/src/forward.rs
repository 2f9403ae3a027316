//! The edit-probability forward pass.
//!
//! `ep(T, y)` sums the probabilities of every edit path rewriting the empty
//! string into `T` while spending all `n` frames. The sum is computed by
//! dynamic programming over states `(i, j)` — `i` characters produced, `j`
//! frames spent — one row per target prefix:
//!
//! ```text
//! L[0][0] = 0
//! L[i][j] = lse( delete(i, j)  + L[i][j-1],
//!                insert(i, j)  + L[i-1][j],
//!                consume(i, j) + L[i-1][j-1] )
//! ```
//!
//! in log space, with missing predecessors contributing nothing. Everything
//! that scores strings — the full matrix, the lexicon trie, the prefix
//! decoder — goes through [`extend_row`] so that identical prefixes produce
//! bit-identical rows regardless of which caller computed them.

use crate::alphabet::TargetString;
use crate::emissions::EmissionSequence;
use crate::logspace::log_sum_exp3;
use crate::ops::{consume_log, delete_log, insert_log};
use crate::scalar::Scalar;

/// Fills `out` with the row for the empty prefix: `j` leading deletions.
pub(crate) fn root_row<F: Scalar>(em: &EmissionSequence<F>, out: &mut [F]) {
    debug_assert_eq!(out.len(), em.len() + 1);
    out[0] = F::zero();
    for j in 1..=em.len() {
        out[j] = out[j - 1] + delete_log(em, false, j);
    }
}

/// Extends the row for some prefix `S` into the row for `S ⊕ t`.
///
/// `t_is_eos` marks whether `t` is the EOS symbol, which makes deletions
/// along the new row free. `parent` and `out` both span `n + 1` columns.
pub(crate) fn extend_row<F: Scalar>(
    em: &EmissionSequence<F>,
    parent: &[F],
    t: usize,
    t_is_eos: bool,
    out: &mut [F],
) {
    let n = em.len();
    debug_assert_eq!(parent.len(), n + 1);
    debug_assert_eq!(out.len(), n + 1);
    out[0] = insert_log(em, t, 0) + parent[0];
    for j in 1..=n {
        let del = delete_log(em, t_is_eos, j) + out[j - 1];
        let ins = insert_log(em, t, j) + parent[j];
        let con = consume_log(em, t, j) + parent[j - 1];
        out[j] = log_sum_exp3(del, ins, con);
    }
}

/// The filled dynamic-programming grid of log edit probabilities.
///
/// Row `i`, column `j` holds `ln ep(T₁..ᵢ, y₁..ⱼ)`; zero-probability cells
/// hold negative infinity and every finite cell is at most 0.
#[derive(Debug, Clone, PartialEq)]
pub struct EpMatrix<F> {
    log_values: Vec<F>,
    target_len: usize,
    frames: usize,
}

impl<F: Scalar> EpMatrix<F> {
    /// Number of rows, `|T| + 1`.
    pub fn rows(&self) -> usize {
        self.target_len + 1
    }

    /// Number of columns, `n + 1`.
    pub fn cols(&self) -> usize {
        self.frames + 1
    }

    /// Log value at row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> F {
        self.log_values[i * self.cols() + j]
    }

    /// The final cell: `ln ep(T, y)`.
    pub fn final_log(&self) -> F {
        self.get(self.target_len, self.frames)
    }

    /// Row `i` as a slice over all columns.
    pub fn row(&self, i: usize) -> &[F] {
        let w = self.cols();
        &self.log_values[i * w..(i + 1) * w]
    }
}

/// Runs the forward pass and returns the full grid.
///
/// Inputs are taken at face value — no renormalization happens here, so
/// perturbing a single entry perturbs exactly one factor of the sum (which is
/// what the finite-difference checks rely on). Validate separately.
pub fn ep_forward<F: Scalar>(em: &EmissionSequence<F>, target: &TargetString) -> EpMatrix<F> {
    let m = target.len();
    let n = em.len();
    let w = n + 1;
    let mut log_values = vec![F::neg_infinity(); (m + 1) * w];
    root_row(em, &mut log_values[..w]);
    for i in 1..=m {
        let t = target.symbol_at(i);
        let (head, tail) = log_values.split_at_mut(i * w);
        extend_row(em, &head[(i - 1) * w..], t, i == m, &mut tail[..w]);
    }
    EpMatrix { log_values, target_len: m, frames: n }
}

/// `ln ep(T, y)` — the final cell of the forward grid.
pub fn ep_score<F: Scalar>(em: &EmissionSequence<F>, target: &TargetString) -> F {
    ep_forward(em, target).final_log()
}
