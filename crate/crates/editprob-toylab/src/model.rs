//! A deliberately small emission model: three independent affine heads +
//! softmax per frame (symbol, edit-operation, and insertion distributions)
//! and one standalone score vector for the closing insertion distribution.
//! No recurrence, no convolutions — every gradient is checkable by hand, and
//! frame/character misalignment still bites because each frame is scored in
//! isolation.

use editprob::{
    chain_softmax, ep_backward, EmissionGradients, EmissionSequence, EpError, Frame, TargetString,
};
use editprob::{Alphabet, Result as EpResult};

use crate::error::Result;
use crate::synth::Sample;

/// Which objective a training step differentiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    /// Negative log edit probability: alignment is marginalized out.
    Ep,
    /// Negative log frame-wise probability: frame `j` is forced to explain
    /// character `j`, extra frames are ignored.
    Fp,
}

/// Trainable parameters, flat for the optimizer's benefit.
///
/// Layout: `w_y (S·d) | b_y (S) | w_r (3·d) | b_r (3) | w_i (S·d) | b_i (S)
/// | final_scores (S)` with `S` the alphabet size and `d` the feature width;
/// weight rows are per output component.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyModel {
    alphabet: Alphabet,
    feature_dim: usize,
    params: Vec<f64>,
}

/// Slice offsets into the flat parameter vector.
struct Layout {
    w_y: usize,
    b_y: usize,
    w_r: usize,
    b_r: usize,
    w_i: usize,
    b_i: usize,
    final_scores: usize,
    total: usize,
}

fn layout(s: usize, d: usize) -> Layout {
    let w_y = 0;
    let b_y = w_y + s * d;
    let w_r = b_y + s;
    let b_r = w_r + 3 * d;
    let w_i = b_r + 3;
    let b_i = w_i + s * d;
    let final_scores = b_i + s;
    Layout { w_y, b_y, w_r, b_r, w_i, b_i, final_scores, total: final_scores + s }
}

fn softmax(scores: &[f64]) -> Vec<f64> {
    let m = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|&v| (v - m).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|&v| v / sum).collect()
}

impl ToyModel {
    /// A fresh model: every weight zero except the edit-head bias, which
    /// starts consume-biased (r ≈ (0.8, 0.1, 0.1)). A flat edit prior would
    /// make the greedy decoder delete every frame before any training
    /// happens; starting from "mostly consume" mirrors a plain argmax reader
    /// and leaves both objectives the same starting point.
    pub fn new(alphabet: Alphabet, feature_dim: usize) -> Result<Self> {
        let lay = layout(alphabet.len(), feature_dim);
        let mut params = vec![0.0; lay.total];
        params[lay.b_r] = 8.0f64.ln();
        Self::from_parts(alphabet, feature_dim, params)
    }

    /// Rebuilds a model from its stored pieces, checking the parameter count.
    pub fn from_parts(alphabet: Alphabet, feature_dim: usize, params: Vec<f64>) -> Result<Self> {
        if feature_dim == 0 {
            return Err(crate::error::LabError::BadConfig { reason: "feature_dim 0".into() });
        }
        let lay = layout(alphabet.len(), feature_dim);
        if params.len() != lay.total {
            return Err(EpError::DimensionMismatch {
                location: "ToyModel::from_parts".into(),
                expected: lay.total,
                got: params.len(),
            }
            .into());
        }
        Ok(ToyModel { alphabet, feature_dim, params })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    fn affine(&self, w: usize, b: usize, rows: usize, feature: &[f64]) -> Vec<f64> {
        let d = self.feature_dim;
        (0..rows)
            .map(|c| {
                let row = &self.params[w + c * d..w + (c + 1) * d];
                self.params[b + c] + row.iter().zip(feature).map(|(a, x)| a * x).sum::<f64>()
            })
            .collect()
    }

    /// Emission distributions for a frame sequence. Always valid by
    /// construction (softmax outputs are strictly positive and normalized).
    pub fn forward(&self, frames: &[Vec<f64>]) -> EpResult<EmissionSequence<f64>> {
        let s = self.alphabet.len();
        let lay = layout(s, self.feature_dim);
        let mut out = Vec::with_capacity(frames.len());
        for frame in frames {
            if frame.len() != self.feature_dim {
                return Err(EpError::DimensionMismatch {
                    location: "ToyModel::forward".into(),
                    expected: self.feature_dim,
                    got: frame.len(),
                });
            }
            let y = softmax(&self.affine(lay.w_y, lay.b_y, s, frame));
            let r = softmax(&self.affine(lay.w_r, lay.b_r, 3, frame));
            let ins = softmax(&self.affine(lay.w_i, lay.b_i, s, frame));
            out.push(Frame { y, r: [r[0], r[1], r[2]], ins });
        }
        let final_ins = softmax(&self.params[lay.final_scores..lay.final_scores + s]);
        Ok(EmissionSequence { frames: out, final_ins })
    }

    /// Loss and flat parameter gradient for one sample under `kind`.
    ///
    /// The chain is: probability-entry gradients (exact adjoint for EP,
    /// closed form for FP), through each softmax into score space, then the
    /// affine maps turn score gradients into weight gradients by outer
    /// product with the input feature.
    pub fn loss_and_grad(&self, sample: &Sample, kind: LossKind) -> Result<(f64, Vec<f64>)> {
        let em = self.forward(&sample.frames)?;
        let (loss, raw) = match kind {
            LossKind::Ep => ep_backward(&em, &sample.target)?,
            LossKind::Fp => fp_loss(&em, &sample.target),
        };
        let dz = chain_softmax(&raw, &em)?;
        let s = self.alphabet.len();
        let d = self.feature_dim;
        let lay = layout(s, d);
        let mut grad = vec![0.0; lay.total];
        for (fg, feature) in dz.frames.iter().zip(&sample.frames) {
            let mut head = |w: usize, b: usize, scores: &[f64]| {
                for (c, &g) in scores.iter().enumerate() {
                    grad[b + c] += g;
                    let row = &mut grad[w + c * d..w + (c + 1) * d];
                    for (slot, &x) in row.iter_mut().zip(feature) {
                        *slot += g * x;
                    }
                }
            };
            head(lay.w_y, lay.b_y, &fg.y);
            head(lay.w_r, lay.b_r, &fg.r);
            head(lay.w_i, lay.b_i, &fg.ins);
        }
        for (c, &g) in dz.final_ins.iter().enumerate() {
            grad[lay.final_scores + c] += g;
        }
        Ok((loss, grad))
    }
}

/// Frame-wise negative log-likelihood and its emission-entry gradient:
/// `-Σ_{j=1}^{min(|T|, n)} ln y_j(T_j)`. Only the symbol head at matched
/// frames gets gradient; the edit heads, insertion heads, and closing
/// distribution never hear about this loss.
pub fn fp_loss(em: &EmissionSequence<f64>, target: &TargetString) -> (f64, EmissionGradients<f64>) {
    let m = target.len().min(em.len());
    let mut loss = 0.0;
    let mut grads = EmissionGradients::zeros_like(em);
    for j in 1..=m {
        let c = target.symbol_at(j);
        let y = em.frame(j).y[c];
        loss -= y.ln();
        grads.frames[j - 1].y[c] = -1.0 / y;
    }
    (loss, grads)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::toy_alphabet;

    fn tiny_model() -> ToyModel {
        ToyModel::new(toy_alphabet(3).unwrap(), 4).unwrap()
    }

    #[test]
    fn zero_weights_emit_uniform_distributions() {
        let alphabet = toy_alphabet(3).unwrap();
        let lay = layout(3, 4);
        let model = ToyModel::from_parts(alphabet, 4, vec![0.0; lay.total]).unwrap();
        let em = model.forward(&[vec![0.3, -1.0, 2.0, 0.5]]).unwrap();
        for &v in em.frames[0].y.iter().chain(&em.frames[0].ins).chain(&em.final_ins) {
            assert_eq!(v, 1.0 / 3.0);
        }
        for &v in &em.frames[0].r {
            assert_eq!(v, 1.0 / 3.0);
        }
    }

    #[test]
    fn fresh_model_starts_consume_biased() {
        let model = tiny_model();
        let em = model.forward(&[vec![1.0, 0.0, 0.0, 0.0]]).unwrap();
        let r = em.frames[0].r;
        assert!((r[0] - 0.8).abs() < 1e-12, "{r:?}");
        assert!((r[1] - 0.1).abs() < 1e-12);
        assert!((r[2] - 0.1).abs() < 1e-12);
        // Everything else is untouched by the bias: uniform.
        assert_eq!(em.frames[0].y, vec![1.0 / 3.0; 3]);
    }

    #[test]
    fn forward_checks_the_feature_width() {
        let model = tiny_model();
        let err = model.forward(&[vec![0.0; 3]]).unwrap_err();
        assert!(matches!(err, EpError::DimensionMismatch { .. }));
    }

    #[test]
    fn fp_loss_matches_the_closed_form() {
        let alphabet = toy_alphabet(3).unwrap();
        let t = TargetString::parse(&alphabet, "AB#").unwrap();
        let em = EmissionSequence {
            frames: vec![
                Frame { y: vec![0.5, 0.3, 0.2], r: [0.6, 0.2, 0.2], ins: vec![0.4, 0.4, 0.2] },
                Frame { y: vec![0.1, 0.7, 0.2], r: [0.6, 0.2, 0.2], ins: vec![0.4, 0.4, 0.2] },
            ],
            final_ins: vec![0.3, 0.3, 0.4],
        };
        let (loss, grads) = fp_loss(&em, &t);
        // Truncated at min(|T|, n) = 2: only 'A' and 'B' frames count.
        assert!((loss - -(0.5f64.ln() + 0.7f64.ln())).abs() < 1e-15);
        assert!((grads.frames[0].y[0] - -2.0).abs() < 1e-15);
        assert!((grads.frames[1].y[1] - -1.0 / 0.7).abs() < 1e-12);
        assert_eq!(grads.frames[0].y[1], 0.0);
        for fg in &grads.frames {
            assert_eq!(fg.r, [0.0; 3]);
            assert!(fg.ins.iter().all(|&v| v == 0.0));
        }
        assert!(grads.final_ins.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fp_loss_ignores_frames_past_the_target() {
        let alphabet = toy_alphabet(3).unwrap();
        let t = TargetString::parse(&alphabet, "A#").unwrap();
        let frame = Frame {
            y: vec![0.5, 0.25, 0.25],
            r: [0.6, 0.2, 0.2],
            ins: vec![1.0 / 3.0; 3],
        };
        let short = EmissionSequence { frames: vec![frame.clone(); 2], final_ins: vec![1.0 / 3.0; 3] };
        let long = EmissionSequence { frames: vec![frame; 5], final_ins: vec![1.0 / 3.0; 3] };
        let (short_loss, _) = fp_loss(&short, &t);
        let (long_loss, long_grads) = fp_loss(&long, &t);
        assert_eq!(short_loss, long_loss);
        for fg in &long_grads.frames[2..] {
            assert!(fg.y.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn ep_loss_and_grad_agree_with_the_scorer() {
        let model = tiny_model();
        let alphabet = model.alphabet().clone();
        let sample = Sample {
            frames: vec![vec![1.0, 0.1, -0.2, 0.0], vec![0.0, 0.9, 0.1, -0.4]],
            target: TargetString::parse(&alphabet, "AB#").unwrap(),
        };
        let em = model.forward(&sample.frames).unwrap();
        let (direct, _) = ep_backward(&em, &sample.target).unwrap();
        let (loss, grad) = model.loss_and_grad(&sample, LossKind::Ep).unwrap();
        assert_eq!(loss, direct);
        assert_eq!(grad.len(), model.param_count());
        assert!(grad.iter().all(|v| v.is_finite()));
        assert!(grad.iter().any(|&v| v != 0.0));
    }
}
