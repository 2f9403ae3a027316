//! Most probable single edit path.
//!
//! Same recurrence as the forward pass with max in place of sum, plus a
//! backtrace. Ties are broken deterministically: consume beats delete beats
//! insert.

use crate::alphabet::TargetString;
use crate::emissions::EmissionSequence;
use crate::ops::{consume_log, delete_log, insert_log, EditOp, EditPath};
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Choice {
    Start,
    Consume,
    Delete,
    Insert,
}

/// Returns the highest-probability edit path and its log-probability.
///
/// The path is reported in order from `(0, 0)` to `(|T|, n)`. When the whole
/// instance has probability zero the returned log-probability is negative
/// infinity and the path is still structurally valid.
pub fn best_edit_path<F: Scalar>(
    em: &EmissionSequence<F>,
    target: &TargetString,
) -> (EditPath, F) {
    let m = target.len();
    let n = em.len();
    let w = n + 1;
    let mut best = vec![F::neg_infinity(); (m + 1) * w];
    let mut choice = vec![Choice::Start; (m + 1) * w];
    best[0] = F::zero();
    for i in 0..=m {
        for j in 0..=n {
            if i == 0 && j == 0 {
                continue;
            }
            let idx = i * w + j;
            let mut val = F::neg_infinity();
            let mut pick = Choice::Start;
            // Candidate order implements the tie-break: strict improvement
            // required to displace an earlier candidate.
            if i > 0 && j > 0 {
                let v = consume_log(em, target.symbol_at(i), j) + best[idx - w - 1];
                if v > val || pick == Choice::Start {
                    val = v;
                    pick = Choice::Consume;
                }
            }
            if j > 0 {
                let v = delete_log(em, i == m, j) + best[idx - 1];
                if v > val || pick == Choice::Start {
                    val = v;
                    pick = Choice::Delete;
                }
            }
            if i > 0 {
                let v = insert_log(em, target.symbol_at(i), j) + best[idx - w];
                if v > val || pick == Choice::Start {
                    val = v;
                    pick = Choice::Insert;
                }
            }
            best[idx] = val;
            choice[idx] = pick;
        }
    }

    let mut path = EditPath::new();
    let (mut i, mut j) = (m, n);
    while i != 0 || j != 0 {
        let op = match choice[i * w + j] {
            Choice::Consume => EditOp::consume(i, j),
            Choice::Delete => EditOp::delete(i, j),
            Choice::Insert => EditOp::insert(i, j),
            Choice::Start => unreachable!("every non-start state has a predecessor"),
        };
        let (pi, pj) = op.source();
        path.push(op);
        i = pi;
        j = pj;
    }
    path.reverse();
    (path, best[m * w + n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::emissions::Frame;
    use crate::ops::{path_log_prob, EditKind};

    fn peaked_frame(y_hot: usize, k: usize) -> Frame<f64> {
        let mut y = vec![0.05 / (k as f64 - 1.0); k];
        y[y_hot] = 0.95;
        Frame { y, r: [0.9, 0.05, 0.05], ins: vec![1.0 / k as f64; k] }
    }

    #[test]
    fn diagonal_path_on_peaked_frames() {
        let alphabet = Alphabet::with_default_eos("AB").unwrap();
        let t = TargetString::parse(&alphabet, "AB#").unwrap();
        let em = EmissionSequence {
            frames: vec![peaked_frame(0, 3), peaked_frame(1, 3), peaked_frame(2, 3)],
            final_ins: vec![1.0 / 3.0; 3],
        };
        let (path, lp) = best_edit_path(&em, &t);
        assert_eq!(path.len(), 3);
        for (k, op) in path.iter().enumerate() {
            assert_eq!(op.kind, EditKind::Consume);
            assert_eq!((op.i, op.j), (k + 1, k + 1));
        }
        let direct = path_log_prob(&em, &t, &path).unwrap();
        assert!((lp - direct).abs() < 1e-12);
    }

    #[test]
    fn exact_ties_prefer_consume() {
        // Uniform everything: consuming `#` from the frame and inserting `#`
        // after deleting it can tie; the reported path must consume.
        let alphabet = Alphabet::with_default_eos("A").unwrap();
        let t = TargetString::parse(&alphabet, "#").unwrap();
        let em = EmissionSequence {
            frames: vec![Frame {
                y: vec![0.5, 0.5],
                r: [1.0 / 3.0; 3],
                ins: vec![0.5, 0.5],
            }],
            final_ins: vec![0.5, 0.5],
        };
        // consume: (1/3)·0.5; insert-then-delete: (1/3)·0.5·1 — an exact tie.
        let (path, _) = best_edit_path(&em, &t);
        assert_eq!(path, vec![EditOp::consume(1, 1)]);
    }
}
