//! Brute-force reference implementations.
//!
//! Everything here recomputes what the fast kernels compute, but by explicit
//! enumeration in plain (linear) probability space, sharing no code with the
//! log-domain dynamic programs. Exponential or worse, guarded by hard size
//! limits; compiled only with the `oracle` feature and meant for tests,
//! debugging, and the hidden CLI subcommand.

use crate::alphabet::{Alphabet, TargetString};
use crate::emissions::EmissionSequence;
use crate::error::{EpError, Result};
use crate::forward::ep_score;
use crate::ops::{EditOp, EditPath};
use crate::scalar::Scalar;

const MAX_ENUM_TARGET: usize = 6;
const MAX_ENUM_FRAMES: usize = 6;
const MAX_STRING_ALPHABET: usize = 4;
const MAX_STRING_FRAMES: usize = 4;
const MAX_STRING_LEN: usize = 9;
const MAX_BASE_FRAMES: usize = 8;
const MAX_BASE_ALPHABET: usize = 6;

/// Every edit path for one instance, with linear-space probabilities.
#[derive(Debug, Clone)]
pub struct PathEnumeration<F> {
    /// Each complete path from `(0, 0)` to `(|T|, n)` and its probability.
    /// Structurally distinct paths with probability zero are included.
    pub paths: Vec<(EditPath, F)>,
    /// Sum of all path probabilities.
    pub total: F,
}

/// Linear-space probability of one operation, written straight off the
/// emission entries.
fn linear_op_prob<F: Scalar>(
    em: &EmissionSequence<F>,
    target: &TargetString,
    op: &EditOp,
) -> F {
    use crate::ops::EditKind::*;
    match op.kind {
        Consume => {
            let f = &em.frames[op.j - 1];
            f.r[0] * f.y[target.indices()[op.i - 1]]
        }
        Delete => {
            if op.i == target.len() {
                F::one()
            } else {
                em.frames[op.j - 1].r[2]
            }
        }
        Insert => {
            let t = target.indices()[op.i - 1];
            if op.j < em.len() {
                let f = &em.frames[op.j];
                f.r[1] * f.ins[t]
            } else {
                em.final_ins[t]
            }
        }
    }
}

fn walk_paths<F: Scalar>(
    em: &EmissionSequence<F>,
    target: &TargetString,
    state: (usize, usize),
    prob: F,
    prefix: &mut EditPath,
    out: &mut PathEnumeration<F>,
) {
    let (i, j) = state;
    let (m, n) = (target.len(), em.len());
    if i == m && j == n {
        out.paths.push((prefix.clone(), prob));
        out.total = out.total + prob;
        return;
    }
    if i < m && j < n {
        let op = EditOp::consume(i + 1, j + 1);
        let p = linear_op_prob(em, target, &op);
        prefix.push(op);
        walk_paths(em, target, (i + 1, j + 1), prob * p, prefix, out);
        prefix.pop();
    }
    if j < n {
        let op = EditOp::delete(i, j + 1);
        let p = linear_op_prob(em, target, &op);
        prefix.push(op);
        walk_paths(em, target, (i, j + 1), prob * p, prefix, out);
        prefix.pop();
    }
    if i < m {
        let op = EditOp::insert(i + 1, j);
        let p = linear_op_prob(em, target, &op);
        prefix.push(op);
        walk_paths(em, target, (i + 1, j), prob * p, prefix, out);
        prefix.pop();
    }
}

/// Enumerates every edit path for `(em, target)`.
///
/// Guarded to `|T| ≤ 6` and `n ≤ 6`; larger instances fail with
/// [`EpError::TooLarge`].
pub fn enumerate_paths<F: Scalar>(
    em: &EmissionSequence<F>,
    target: &TargetString,
) -> Result<PathEnumeration<F>> {
    if target.len() > MAX_ENUM_TARGET {
        return Err(EpError::TooLarge {
            what: "target length",
            got: target.len(),
            limit: MAX_ENUM_TARGET,
        });
    }
    if em.len() > MAX_ENUM_FRAMES {
        return Err(EpError::TooLarge {
            what: "frame count",
            got: em.len(),
            limit: MAX_ENUM_FRAMES,
        });
    }
    let mut out = PathEnumeration { paths: Vec::new(), total: F::zero() };
    walk_paths(em, target, (0, 0), F::one(), &mut EditPath::new(), &mut out);
    Ok(out)
}

/// Scores every valid string up to `max_len` characters (EOS included).
///
/// Returns `(T, exp(ep_score(em, T)))` pairs ordered by length, then
/// lexicographically by alphabet index. Guarded to alphabets of at most 4
/// symbols, at most 4 frames, and `max_len ≤ 9`.
pub fn enumerate_strings<F: Scalar>(
    em: &EmissionSequence<F>,
    alphabet: &Alphabet,
    max_len: usize,
) -> Result<Vec<(TargetString, F)>> {
    if alphabet.len() > MAX_STRING_ALPHABET {
        return Err(EpError::TooLarge {
            what: "alphabet size",
            got: alphabet.len(),
            limit: MAX_STRING_ALPHABET,
        });
    }
    if em.len() > MAX_STRING_FRAMES {
        return Err(EpError::TooLarge {
            what: "frame count",
            got: em.len(),
            limit: MAX_STRING_FRAMES,
        });
    }
    if max_len > MAX_STRING_LEN {
        return Err(EpError::TooLarge {
            what: "string length",
            got: max_len,
            limit: MAX_STRING_LEN,
        });
    }
    let letters: Vec<usize> = (0..alphabet.len()).filter(|&k| k != alphabet.eos()).collect();
    let mut out = Vec::new();
    // Words of length L - 1 over the non-EOS letters, then the EOS symbol.
    for len in 1..=max_len {
        let word_len = len - 1;
        let mut word = vec![0usize; word_len];
        loop {
            let indices: Vec<usize> = word.iter().map(|&d| letters[d]).collect();
            let target = TargetString::from_word_indices(&indices, alphabet)?;
            let score = ep_score(em, &target).exp();
            out.push((target, score));
            // Odometer increment in base |letters|.
            let mut pos = word_len;
            loop {
                if pos == 0 {
                    break;
                }
                word[pos - 1] += 1;
                if word[pos - 1] < letters.len() {
                    break;
                }
                word[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
    }
    Ok(out)
}

/// Total probability mass of all strings under the emission model, by the
/// backward recurrence over frames (closed form over the infinite string
/// space, so no truncation).
///
/// `mass(j)` is the probability of eventually emitting an EOS given `j`
/// frames already spent; chains of non-terminal insertions at one column form
/// a geometric series. Entries must be non-negative; with every entry
/// strictly positive the result is 1 up to rounding, while zero entries can
/// make it genuinely smaller (for example, nothing can terminate after the
/// last frame when `final_ins` puts no mass on EOS).
pub fn total_mass<F: Scalar>(em: &EmissionSequence<F>, alphabet: &Alphabet) -> Result<F> {
    let eos = alphabet.eos();
    let check = |v: F, what: String| -> Result<()> {
        if v < F::zero() {
            Err(EpError::NegativeEntry {
                location: what,
                value: v.to_f64().unwrap_or(f64::NAN),
            })
        } else {
            Ok(())
        }
    };
    for (idx, f) in em.frames.iter().enumerate() {
        for &v in f.y.iter().chain(f.r.iter()).chain(f.ins.iter()) {
            check(v, format!("frame {}", idx + 1))?;
        }
    }
    for &v in &em.final_ins {
        check(v, "final_ins".to_string())?;
    }

    let n = em.len();
    let mut mass = if em.final_ins[eos] > F::zero() {
        // Strings still open after the last frame terminate by appending
        // non-EOS characters until EOS: Σ_k (1 - f#)^k · f# = 1.
        F::one()
    } else {
        F::zero()
    };
    for j in (0..n).rev() {
        let f = &em.frames[j];
        let (rc, ri, rd) = (f.r[0], f.r[1], f.r[2]);
        let ins_eos = f.ins[eos];
        let y_eos = f.y[eos];
        // From column j: insert EOS (terminates), insert non-EOS (stay in
        // column j), delete the frame, or consume it as EOS / non-EOS.
        let numer = ri * ins_eos + rd * mass + rc * (y_eos + (F::one() - y_eos) * mass);
        let denom = F::one() - ri * (F::one() - ins_eos);
        mass = if denom > F::zero() { numer / denom } else { F::zero() };
    }
    Ok(mass)
}

/// Exhaustive argmax over EOS-free strings scored by their best
/// insertion-free alignment: per frame, either delete it or consume it as
/// one non-EOS character.
///
/// Assignments are enumerated with consumes before the delete and characters
/// in alphabet order, updating only on strict improvement, so exact ties
/// resolve the same way the greedy rule does. Guarded to `n ≤ 8` and
/// alphabets of at most 6 symbols.
pub fn best_eos_free_string<F: Scalar>(
    em: &EmissionSequence<F>,
    alphabet: &Alphabet,
) -> Result<(Vec<usize>, F)> {
    if em.len() > MAX_BASE_FRAMES {
        return Err(EpError::TooLarge {
            what: "frame count",
            got: em.len(),
            limit: MAX_BASE_FRAMES,
        });
    }
    if alphabet.len() > MAX_BASE_ALPHABET {
        return Err(EpError::TooLarge {
            what: "alphabet size",
            got: alphabet.len(),
            limit: MAX_BASE_ALPHABET,
        });
    }
    let letters: Vec<usize> = (0..alphabet.len()).filter(|&k| k != alphabet.eos()).collect();
    let mut best: Option<(Vec<usize>, F)> = None;
    let mut chars = Vec::new();

    fn go<F: Scalar>(
        em: &EmissionSequence<F>,
        letters: &[usize],
        j: usize,
        prob: F,
        chars: &mut Vec<usize>,
        best: &mut Option<(Vec<usize>, F)>,
    ) {
        if j == em.len() {
            match best {
                Some((_, p)) if prob <= *p => {}
                _ => *best = Some((chars.clone(), prob)),
            }
            return;
        }
        let f = &em.frames[j];
        for &c in letters {
            chars.push(c);
            go(em, letters, j + 1, prob * f.r[0] * f.y[c], chars, best);
            chars.pop();
        }
        go(em, letters, j + 1, prob * f.r[2], chars, best);
    }

    go(em, &letters, 0, F::one(), &mut chars, &mut best);
    Ok(best.expect("at least the all-delete assignment exists"))
}
