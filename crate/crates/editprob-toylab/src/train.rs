//! Mini-batch training with ADADELTA and exact-match evaluation.
//!
//! Single-threaded with a fixed summation order throughout, so a seed pins
//! the whole run: shuffles come from the lab generator, batch gradients are
//! mean-reduced in index order, and the held-out pass never consumes
//! randomness. The only nondeterministic report field is the wall clock.

use std::time::Instant;

use editprob::{predict_free, predict_lex, Lexicon};

use crate::adadelta::Adadelta;
use crate::error::{LabError, Result};
use crate::model::{LossKind, ToyModel};
use crate::rng::SplitMix64;
use crate::synth::Sample;

/// Default lexicon trust when [`evaluate`] gets a lexicon but no λ.
pub const DEFAULT_LAMBDA: f64 = 0.95;

/// Knobs of one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub loss: LossKind,
    pub epochs: usize,
    pub batch_size: usize,
    /// ADADELTA accumulator decay ρ.
    pub rho: f64,
    /// ADADELTA stabilizer ε.
    pub eps: f64,
    /// Seed for the per-epoch shuffles.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            loss: LossKind::Ep,
            epochs: 30,
            batch_size: 32,
            rho: Adadelta::DEFAULT_RHO,
            eps: Adadelta::DEFAULT_EPS,
            seed: 1,
        }
    }
}

/// What a training run did, epoch by epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    /// Mean per-sample training loss of each epoch.
    pub epoch_losses: Vec<f64>,
    /// Held-out exact-match accuracy after each epoch.
    pub epoch_heldout_accuracy: Vec<f64>,
    /// Held-out exact-match accuracy of the returned model.
    pub final_accuracy: f64,
    /// Wall-clock duration of the run; excluded from determinism claims.
    pub wall_clock_secs: f64,
}

impl TrainReport {
    /// Equality on everything a seed determines (i.e. ignoring wall clock).
    pub fn same_numbers(&self, other: &TrainReport) -> bool {
        self.epoch_losses == other.epoch_losses
            && self.epoch_heldout_accuracy == other.epoch_heldout_accuracy
            && self.final_accuracy == other.final_accuracy
    }
}

/// Trains a copy of `model` on `corpus`, reporting held-out accuracy per
/// epoch. `heldout` may be empty, in which case accuracies are vacuously 1.
/// Fails with [`LabError::DivergedLoss`] if any batch loss leaves the finite
/// range, and never returns a partially-diverged model.
pub fn train(
    model: &ToyModel,
    corpus: &[Sample],
    heldout: &[Sample],
    cfg: &TrainConfig,
) -> Result<(ToyModel, TrainReport)> {
    if corpus.is_empty() {
        return Err(LabError::EmptyCorpus);
    }
    if cfg.batch_size == 0 {
        return Err(LabError::BadConfig { reason: "batch_size 0".into() });
    }
    let start = Instant::now();
    let mut trained = model.clone();
    let mut opt = Adadelta::new(trained.param_count(), cfg.rho, cfg.eps);
    let mut rng = SplitMix64::new(cfg.seed);
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    let mut report = TrainReport {
        epoch_losses: Vec::with_capacity(cfg.epochs),
        epoch_heldout_accuracy: Vec::with_capacity(cfg.epochs),
        final_accuracy: 1.0,
        wall_clock_secs: 0.0,
    };
    for epoch in 0..cfg.epochs {
        rng.shuffle(&mut order);
        let mut loss_sum = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            let mut grad = vec![0.0; trained.param_count()];
            let mut batch_loss = 0.0;
            for &idx in batch {
                let (loss, g) = trained.loss_and_grad(&corpus[idx], cfg.loss)?;
                batch_loss += loss;
                for (acc, v) in grad.iter_mut().zip(&g) {
                    *acc += v;
                }
            }
            let scale = 1.0 / batch.len() as f64;
            batch_loss *= scale;
            if !batch_loss.is_finite() {
                return Err(LabError::DivergedLoss { epoch, loss: batch_loss });
            }
            for v in &mut grad {
                *v *= scale;
            }
            opt.step(trained.params_mut(), &grad);
            loss_sum += batch_loss * batch.len() as f64;
        }
        report.epoch_losses.push(loss_sum / corpus.len() as f64);
        report.epoch_heldout_accuracy.push(evaluate(&trained, heldout, None, None)?);
    }
    report.final_accuracy = match report.epoch_heldout_accuracy.last() {
        Some(&acc) => acc,
        None => evaluate(&trained, heldout, None, None)?,
    };
    report.wall_clock_secs = start.elapsed().as_secs_f64();
    Ok((trained, report))
}

/// Exact-match accuracy of the model's predictions over `corpus`. With a
/// lexicon the decision is lexicon-constrained at `lambda` (default 0.95);
/// without one it is lexicon-free. An empty corpus scores a vacuous 1.
pub fn evaluate(
    model: &ToyModel,
    corpus: &[Sample],
    lexicon: Option<&Lexicon>,
    lambda: Option<f64>,
) -> Result<f64> {
    if corpus.is_empty() {
        return Ok(1.0);
    }
    let alphabet = model.alphabet();
    let mut hits = 0usize;
    for sample in corpus {
        let em = model.forward(&sample.frames)?;
        let prediction = match lexicon {
            Some(lex) => predict_lex(&em, alphabet, lex, lambda.unwrap_or(DEFAULT_LAMBDA))?,
            None => predict_free(&em, alphabet),
        };
        if prediction.target == sample.target {
            hits += 1;
        }
    }
    Ok(hits as f64 / corpus.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate_corpus, SynthConfig};

    fn small_setup() -> (ToyModel, Vec<Sample>, Vec<Sample>) {
        let cfg = SynthConfig { alphabet_size: 4, feature_dim: 5, ..SynthConfig::default() };
        let corpus = generate_corpus(&cfg, 64).unwrap();
        let heldout = generate_corpus(&SynthConfig { seed: 99, ..cfg.clone() }, 16).unwrap();
        let model = ToyModel::new(cfg.alphabet().unwrap(), cfg.feature_dim).unwrap();
        (model, corpus, heldout)
    }

    #[test]
    fn zero_epochs_leaves_the_model_untouched() {
        let (model, corpus, heldout) = small_setup();
        let cfg = TrainConfig { epochs: 0, ..TrainConfig::default() };
        let (trained, report) = train(&model, &corpus, &heldout, &cfg).unwrap();
        assert_eq!(trained.params(), model.params());
        assert!(report.epoch_losses.is_empty());
        assert!((0.0..=1.0).contains(&report.final_accuracy));
    }

    #[test]
    fn training_is_deterministic_per_seed() {
        let (model, corpus, heldout) = small_setup();
        let cfg = TrainConfig { epochs: 3, ..TrainConfig::default() };
        let (m1, r1) = train(&model, &corpus, &heldout, &cfg).unwrap();
        let (m2, r2) = train(&model, &corpus, &heldout, &cfg).unwrap();
        assert_eq!(m1.params(), m2.params());
        assert!(r1.same_numbers(&r2));
        let (m3, r3) =
            train(&model, &corpus, &heldout, &TrainConfig { seed: 2, ..cfg }).unwrap();
        assert!(m1.params() != m3.params() || !r1.same_numbers(&r3));
    }

    #[test]
    fn one_epoch_lowers_the_training_loss() {
        let (model, corpus, heldout) = small_setup();
        let cfg = TrainConfig { epochs: 8, ..TrainConfig::default() };
        let (_, report) = train(&model, &corpus, &heldout, &cfg).unwrap();
        assert!(report.epoch_losses.last().unwrap() < report.epoch_losses.first().unwrap());
        for &loss in &report.epoch_losses {
            assert!(loss.is_finite());
        }
        for &acc in &report.epoch_heldout_accuracy {
            assert!((0.0..=1.0).contains(&acc));
        }
    }

    #[test]
    fn empty_corpus_is_refused() {
        let (model, _, heldout) = small_setup();
        let err = train(&model, &[], &heldout, &TrainConfig::default()).unwrap_err();
        assert!(matches!(err, LabError::EmptyCorpus));
    }

    #[test]
    fn untrained_model_scores_near_chance() {
        let (model, _, heldout) = small_setup();
        let acc = evaluate(&model, &heldout, None, None).unwrap();
        assert!(acc < 0.3, "untrained accuracy {acc}");
    }

    #[test]
    fn disjoint_lexicon_cannot_beat_a_covering_one_at_full_trust() {
        let (model, corpus, heldout) = small_setup();
        let alphabet = model.alphabet().clone();
        let cfg = TrainConfig { epochs: 10, ..TrainConfig::default() };
        let (trained, _) = train(&model, &corpus, &heldout, &cfg).unwrap();
        let cover_words: Vec<String> = heldout
            .iter()
            .map(|s| {
                s.target.word_indices().iter().map(|&c| alphabet.symbol(c)).collect::<String>()
            })
            .collect();
        let covering =
            Lexicon::from_words(cover_words.iter().map(String::as_str), &alphabet);
        let disjoint = Lexicon::from_words(
            ["AAAAAAAA", "BBBBBBBB", "CCCCCCCC"],
            &alphabet,
        );
        let with_cover = evaluate(&trained, &heldout, Some(&covering), Some(1.0)).unwrap();
        let with_disjoint = evaluate(&trained, &heldout, Some(&disjoint), Some(1.0)).unwrap();
        assert_eq!(with_disjoint, 0.0, "no ground truth inside the disjoint lexicon");
        assert!(with_cover >= with_disjoint);
    }
}
