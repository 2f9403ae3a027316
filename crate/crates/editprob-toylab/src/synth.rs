//! Synthetic misaligned-frame corpora.
//!
//! Each sample is a character string rendered frame-by-frame into noisy
//! one-hot features. Frames desynchronize from characters two ways: a
//! character's frame may be dropped (missing-character regime) or emitted
//! twice (superfluous-frame regime). The end-of-string character always gets
//! exactly one frame. Everything is a pure function of the seed.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use editprob::{Alphabet, TargetString};

use crate::error::{LabError, Result};
use crate::rng::SplitMix64;

/// Symbols handed out by [`toy_alphabet`], in index order.
const SYMBOL_POOL: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789abcdefghijklmnopqrstuvwxyz";

/// The standard lab alphabet of a given total size (EOS `#` included, always
/// last). Deterministic, so an alphabet size alone reproduces the symbol
/// table anywhere.
pub fn toy_alphabet(size: usize) -> Result<Alphabet> {
    if size < 2 || size > SYMBOL_POOL.chars().count() + 1 {
        return Err(LabError::BadConfig {
            reason: format!("alphabet size {size} outside 2..={}", SYMBOL_POOL.len() + 1),
        });
    }
    let mut symbols: Vec<char> = SYMBOL_POOL.chars().take(size - 1).collect();
    symbols.push('#');
    Ok(Alphabet::new(symbols, '#')?)
}

/// Knobs of the corpus generator.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    /// Total alphabet size, EOS included.
    pub alphabet_size: usize,
    /// Feature vector width; at least `alphabet_size` (extra dims are pure
    /// noise).
    pub feature_dim: usize,
    /// Word length bounds (EOS excluded), inclusive.
    pub len_min: usize,
    pub len_max: usize,
    /// Standard deviation of the Gaussian added to every feature component.
    pub noise_sigma: f64,
    /// Per-character probability that its frame is omitted.
    pub p_drop: f64,
    /// Per-character probability that its frame is emitted twice.
    pub p_dup: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            alphabet_size: 6,
            feature_dim: 8,
            len_min: 2,
            len_max: 5,
            noise_sigma: 0.3,
            p_drop: 0.15,
            p_dup: 0.15,
            seed: 1,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(LabError::BadConfig { reason });
        if self.alphabet_size < 2 {
            return bad(format!("alphabet_size {} < 2", self.alphabet_size));
        }
        if self.feature_dim < self.alphabet_size {
            return bad(format!(
                "feature_dim {} < alphabet_size {}",
                self.feature_dim, self.alphabet_size
            ));
        }
        if self.len_min < 1 || self.len_min > self.len_max {
            return bad(format!("length bounds {}..={} invalid", self.len_min, self.len_max));
        }
        if !(0.0..=0.5).contains(&self.p_drop) || !(0.0..=0.5).contains(&self.p_dup) {
            return bad(format!("p_drop {} / p_dup {} outside [0, 0.5]", self.p_drop, self.p_dup));
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return bad(format!("noise_sigma {} invalid", self.noise_sigma));
        }
        Ok(())
    }

    /// The alphabet this config draws from.
    pub fn alphabet(&self) -> Result<Alphabet> {
        toy_alphabet(self.alphabet_size)
    }
}

/// One labelled instance: feature frames plus the ground-truth string.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub frames: Vec<Vec<f64>>,
    pub target: TargetString,
}

fn noisy_one_hot(hot: usize, cfg: &SynthConfig, rng: &mut SplitMix64) -> Vec<f64> {
    (0..cfg.feature_dim)
        .map(|d| {
            let base = if d == hot { 1.0 } else { 0.0 };
            base + cfg.noise_sigma * rng.gaussian()
        })
        .collect()
}

/// Draws `count` samples. Word characters are i.i.d. uniform over the
/// non-EOS alphabet; each one's frame is dropped with `p_drop`, else
/// duplicated with `p_dup` (both decided per character, every frame rendered
/// with fresh noise); the EOS frame is always emitted exactly once.
pub fn generate_corpus(cfg: &SynthConfig, count: usize) -> Result<Vec<Sample>> {
    cfg.validate()?;
    let alphabet = cfg.alphabet()?;
    let letters = alphabet.len() - 1;
    let mut rng = SplitMix64::new(cfg.seed);
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let len = cfg.len_min + rng.below(cfg.len_max - cfg.len_min + 1);
        let word: Vec<usize> = (0..len).map(|_| rng.below(letters)).collect();
        let mut frames = Vec::with_capacity(len + 1);
        for &c in &word {
            let dropped = rng.chance(cfg.p_drop);
            let duplicated = rng.chance(cfg.p_dup);
            let copies = if dropped {
                0
            } else if duplicated {
                2
            } else {
                1
            };
            for _ in 0..copies {
                frames.push(noisy_one_hot(c, cfg, &mut rng));
            }
        }
        frames.push(noisy_one_hot(alphabet.eos(), cfg, &mut rng));
        let target = TargetString::from_word_indices(&word, &alphabet)?;
        samples.push(Sample { frames, target });
    }
    Ok(samples)
}

/// Writes samples in the line format `dims,joined;by,frames<TAB>TARGET#`,
/// one sample per line, floats as shortest round-trip decimals.
pub fn write_corpus(samples: &[Sample], alphabet: &Alphabet, out: &mut impl Write) -> Result<()> {
    for sample in samples {
        let frames = sample
            .frames
            .iter()
            .map(|frame| {
                frame.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(",")
            })
            .collect::<Vec<_>>()
            .join(";");
        writeln!(out, "{}\t{}", frames, sample.target.render(alphabet))?;
    }
    Ok(())
}

/// Reads the [`write_corpus`] format back. Strict: every line must carry at
/// least one frame, all feature vectors in the file must share one width,
/// and targets must parse against `alphabet`.
pub fn read_corpus(input: &mut impl BufRead, alphabet: &Alphabet) -> Result<Vec<Sample>> {
    let mut samples = Vec::new();
    let mut dim: Option<usize> = None;
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let bad = |reason: String| LabError::BadCorpusLine { line: lineno, reason };
        let (frame_part, target_part) =
            line.split_once('\t').ok_or_else(|| bad("missing tab separator".into()))?;
        let mut frames = Vec::new();
        for chunk in frame_part.split(';') {
            let frame: Vec<f64> = chunk
                .split(',')
                .map(|tok| tok.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| bad(format!("bad float: {e}")))?;
            match dim {
                None => dim = Some(frame.len()),
                Some(d) if d != frame.len() => {
                    return Err(bad(format!("frame width {} != {}", frame.len(), d)));
                }
                _ => {}
            }
            frames.push(frame);
        }
        let target = TargetString::parse(alphabet, target_part)
            .map_err(|e| bad(format!("bad target: {e}")))?;
        samples.push(Sample { frames, target });
    }
    Ok(samples)
}

/// A deliberately prefix-heavy word list for lexicon benchmarks: long random
/// trunks, each fanned out by one extra character, so shared-prefix scoring
/// has something to share. Deduplicated, deterministic.
pub fn synthetic_lexicon(count: usize, alphabet: &Alphabet, seed: u64) -> Vec<String> {
    let letters: Vec<char> =
        alphabet.symbols().iter().copied().filter(|&c| c != alphabet.symbol(alphabet.eos())).collect();
    let mut rng = SplitMix64::new(seed);
    let mut seen = HashSet::new();
    let mut words = Vec::with_capacity(count);
    while words.len() < count {
        let trunk_len = 16 + rng.below(7);
        let trunk: String = (0..trunk_len).map(|_| letters[rng.below(letters.len())]).collect();
        let mut tails = letters.clone();
        rng.shuffle(&mut tails);
        for &tail in &tails {
            if words.len() == count {
                break;
            }
            let word = format!("{trunk}{tail}");
            if seen.insert(word.clone()) {
                words.push(word);
            }
        }
    }
    words
}
