//! Exact gradients of the negative log edit probability.
//!
//! `ep(T, y)` is a polynomial in the emission entries, so its partials come
//! from the forward/backward decomposition: for an edit operation `e` moving
//! state `s` to state `s'` with probability `p_e`,
//!
//! ```text
//! ∂ep/∂θ = Σ_e (∂p_e/∂θ) · fwd(s) · bwd(s')
//! ```
//!
//! Every term is a product of probabilities, so the accumulation runs in log
//! space and only leaves it once per parameter. Gradients are reported with
//! respect to the raw emission entries (perturbing one entry does not
//! renormalize its vector); [`chain_softmax`] converts them to logit space
//! for models that produce the entries through a softmax.

use crate::alphabet::TargetString;
use crate::emissions::{EmissionSequence, R_CONSUME, R_DELETE, R_INSERT};
use crate::error::{EpError, Result};
use crate::forward::{ep_forward, EpMatrix};
use crate::logspace::{ln_prob, log_sum_exp2};
use crate::scalar::Scalar;

/// Gradients for one frame's vectors, same shapes as the frame itself.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameGradients<F> {
    pub y: Vec<F>,
    pub r: [F; 3],
    pub ins: Vec<F>,
}

/// Gradient of a scalar loss with respect to every emission entry.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionGradients<F> {
    pub frames: Vec<FrameGradients<F>>,
    pub final_ins: Vec<F>,
}

impl<F: Scalar> EmissionGradients<F> {
    /// Gradient grid filled with `v`, shaped like `em`.
    fn filled_like(em: &EmissionSequence<F>, v: F) -> Self {
        let k = em.alphabet_len();
        EmissionGradients {
            frames: em
                .frames
                .iter()
                .map(|_| FrameGradients { y: vec![v; k], r: [v; 3], ins: vec![v; k] })
                .collect(),
            final_ins: vec![v; k],
        }
    }

    /// All-zero gradients shaped like `em`.
    pub fn zeros_like(em: &EmissionSequence<F>) -> Self {
        Self::filled_like(em, F::zero())
    }

    /// Applies `f` to every entry in a fixed order.
    pub fn map_in_place(&mut self, mut f: impl FnMut(F) -> F) {
        for fr in &mut self.frames {
            for v in fr.y.iter_mut().chain(fr.r.iter_mut()).chain(fr.ins.iter_mut()) {
                *v = f(*v);
            }
        }
        for v in &mut self.final_ins {
            *v = f(*v);
        }
    }

    /// Adds `other` entrywise.
    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.frames.iter_mut().zip(&other.frames) {
            for (x, y) in a.y.iter_mut().zip(&b.y) {
                *x = *x + *y;
            }
            for (x, y) in a.r.iter_mut().zip(&b.r) {
                *x = *x + *y;
            }
            for (x, y) in a.ins.iter_mut().zip(&b.ins) {
                *x = *x + *y;
            }
        }
        for (x, y) in self.final_ins.iter_mut().zip(&other.final_ins) {
            *x = *x + *y;
        }
    }
}

/// Backward log grid: `bwd[i][j]` is the log-probability mass of all edit
/// path suffixes from state `(i, j)` to `(|T|, n)`.
fn backward_grid<F: Scalar>(em: &EmissionSequence<F>, target: &TargetString) -> Vec<F> {
    use crate::ops::{consume_log, delete_log, insert_log};
    let m = target.len();
    let n = em.len();
    let w = n + 1;
    let mut bwd = vec![F::neg_infinity(); (m + 1) * w];
    bwd[m * w + n] = F::zero();
    for i in (0..=m).rev() {
        for j in (0..=n).rev() {
            if i == m && j == n {
                continue;
            }
            let mut acc = F::neg_infinity();
            if j < n {
                acc = log_sum_exp2(acc, delete_log(em, i == m, j + 1) + bwd[i * w + j + 1]);
            }
            if i < m {
                let t = target.symbol_at(i + 1);
                acc = log_sum_exp2(acc, insert_log(em, t, j) + bwd[(i + 1) * w + j]);
                if j < n {
                    acc = log_sum_exp2(acc, consume_log(em, t, j + 1) + bwd[(i + 1) * w + j + 1]);
                }
            }
            bwd[i * w + j] = acc;
        }
    }
    bwd
}

/// Loss `-ln ep(T, y)` and its exact gradient for every emission entry.
///
/// Fails with [`EpError::ZeroProbability`] when `ep(T, y) = 0`. Every entry
/// of the returned gradient is finite and non-positive: raising any raw
/// probability entry can only raise the edit probability.
pub fn ep_backward<F: Scalar>(
    em: &EmissionSequence<F>,
    target: &TargetString,
) -> Result<(F, EmissionGradients<F>)> {
    let fwd: EpMatrix<F> = ep_forward(em, target);
    let log_ep = fwd.final_log();
    if log_ep == F::neg_infinity() {
        return Err(EpError::ZeroProbability { location: "ep_backward".into() });
    }
    let bwd = backward_grid(em, target);

    let m = target.len();
    let n = em.len();
    let w = n + 1;
    // Log-magnitudes of ∂ep/∂θ, accumulated per parameter.
    let mut acc = EmissionGradients::filled_like(em, F::neg_infinity());

    // Consume and delete edges land in column j ≥ 1.
    for j in 1..=n {
        let frame = em.frame(j);
        let fg = &mut acc.frames[j - 1];
        for i in 1..=m {
            let t = target.symbol_at(i);
            let base = fwd.get(i - 1, j - 1) + bwd[i * w + j];
            fg.r[R_CONSUME] = log_sum_exp2(fg.r[R_CONSUME], ln_prob(frame.y[t]) + base);
            fg.y[t] = log_sum_exp2(fg.y[t], ln_prob(frame.r_consume()) + base);
        }
        // Deleting past the finished string has probability 1 and no
        // parameter, so row m contributes nothing here.
        for i in 0..m {
            let base = fwd.get(i, j - 1) + bwd[i * w + j];
            fg.r[R_DELETE] = log_sum_exp2(fg.r[R_DELETE], base);
        }
    }
    // Insert edges land in every column; column j draws on frame j + 1,
    // or on final_ins in the last column.
    for j in 0..=n {
        for i in 1..=m {
            let t = target.symbol_at(i);
            let base = fwd.get(i - 1, j) + bwd[i * w + j];
            if j < n {
                let frame = em.frame(j + 1);
                let fg = &mut acc.frames[j];
                fg.r[R_INSERT] = log_sum_exp2(fg.r[R_INSERT], ln_prob(frame.ins[t]) + base);
                fg.ins[t] = log_sum_exp2(fg.ins[t], ln_prob(frame.r_insert()) + base);
            } else {
                acc.final_ins[t] = log_sum_exp2(acc.final_ins[t], base);
            }
        }
    }

    // d(-ln ep)/dθ = -(1/ep) · ∂ep/∂θ.
    acc.map_in_place(|v| -(v - log_ep).exp());
    Ok((-log_ep, acc))
}

/// Sums `-ln ep` over a batch, returning per-item gradients.
///
/// Fails on the first bad item, wrapping its error with the item index.
pub fn batch_loss<F: Scalar>(
    ems: &[EmissionSequence<F>],
    targets: &[TargetString],
) -> Result<(F, Vec<EmissionGradients<F>>)> {
    if ems.len() != targets.len() {
        return Err(EpError::DimensionMismatch {
            location: "batch_loss".into(),
            expected: ems.len(),
            got: targets.len(),
        });
    }
    let mut total = F::zero();
    let mut grads = Vec::with_capacity(ems.len());
    for (index, (em, target)) in ems.iter().zip(targets).enumerate() {
        match ep_backward(em, target) {
            Ok((loss, g)) => {
                total = total + loss;
                grads.push(g);
            }
            Err(source) => {
                return Err(EpError::BatchItem { index, source: Box::new(source) });
            }
        }
    }
    Ok((total, grads))
}

fn softmax_chain_vec<F: Scalar>(p: &[F], g: &[F], out: &mut [F], location: &str) -> Result<()> {
    let mut dot = F::zero();
    for (&pk, &gk) in p.iter().zip(g) {
        if pk <= F::zero() {
            return Err(EpError::ZeroProbability { location: location.into() });
        }
        dot = dot + pk * gk;
    }
    for ((o, &pk), &gk) in out.iter_mut().zip(p).zip(g) {
        *o = pk * (gk - dot);
    }
    Ok(())
}

/// Converts gradients on probability entries into gradients on the logits
/// that produced them through a softmax: `dz_k = p_k (g_k - Σ p g)`.
///
/// Requires strictly positive probabilities (true of any softmax output).
/// Each converted vector sums to zero.
pub fn chain_softmax<F: Scalar>(
    grads: &EmissionGradients<F>,
    em: &EmissionSequence<F>,
) -> Result<EmissionGradients<F>> {
    if grads.frames.len() != em.frames.len() {
        return Err(EpError::DimensionMismatch {
            location: "chain_softmax".into(),
            expected: em.frames.len(),
            got: grads.frames.len(),
        });
    }
    let mut out = EmissionGradients::zeros_like(em);
    for (idx, ((fg, frame), og)) in
        grads.frames.iter().zip(&em.frames).zip(&mut out.frames).enumerate()
    {
        let j = idx + 1;
        softmax_chain_vec(&frame.y, &fg.y, &mut og.y, &format!("y of frame {j}"))?;
        softmax_chain_vec(&frame.r, &fg.r, &mut og.r, &format!("r of frame {j}"))?;
        softmax_chain_vec(&frame.ins, &fg.ins, &mut og.ins, &format!("ins of frame {j}"))?;
    }
    softmax_chain_vec(&em.final_ins, &grads.final_ins, &mut out.final_ins, "final_ins")?;
    Ok(out)
}
