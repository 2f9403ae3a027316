//! Decoding: from emissions to a predicted string.
//!
//! Lexicon-free prediction builds a greedy base string from per-frame
//! decisions, then scores every prefix of it (with EOS appended) by the full
//! edit probability. All prefixes share one dynamic program: row `i` of the
//! base string's grid is exactly the grid row any prefix candidate needs, so
//! the whole candidate set costs one extra row per candidate.
//!
//! Lexicon-constrained prediction blends the same candidates with every
//! lexicon word, weighting in-lexicon strings by `λ` and the rest by
//! `1 - λ`. Word scores come from the prefix trie ([`crate::trie`]); a
//! per-word rescoring twin exists for benchmarking and cross-checking.

use std::collections::HashSet;

use crate::alphabet::{Alphabet, TargetString};
use crate::emissions::EmissionSequence;
use crate::error::{EpError, Result};
use crate::forward::{extend_row, root_row};
use crate::logspace::ln_prob;
use crate::scalar::Scalar;
use crate::trie::build_trie;

/// Where the winning prediction drew its weight from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionSource {
    /// Not a lexicon word (or no lexicon in play).
    Free,
    /// A lexicon word (possibly also a base-string prefix).
    Lexicon,
}

/// A decoded string with its raw log edit probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<F> {
    pub target: TargetString,
    /// `ln ep(target, y)`, unweighted.
    pub log_score: F,
    pub source: PredictionSource,
}

/// A set of words over the non-EOS alphabet, deduplicated, insertion order
/// kept.
#[derive(Debug, Clone)]
pub struct Lexicon {
    words: Vec<Vec<usize>>,
    set: HashSet<Vec<usize>>,
    skipped: Vec<String>,
    eos: usize,
}

impl Lexicon {
    /// Interns `words` against `alphabet`. Words that are empty, contain the
    /// EOS symbol, or use characters outside the alphabet are skipped and
    /// reported via [`Lexicon::skipped`]; duplicates are dropped silently.
    pub fn from_words<'a>(
        words: impl IntoIterator<Item = &'a str>,
        alphabet: &Alphabet,
    ) -> Lexicon {
        let mut lex = Lexicon {
            words: Vec::new(),
            set: HashSet::new(),
            skipped: Vec::new(),
            eos: alphabet.eos(),
        };
        for word in words {
            match alphabet.encode(word) {
                Ok(indices)
                    if !indices.is_empty() && !indices.contains(&alphabet.eos()) =>
                {
                    if lex.set.insert(indices.clone()) {
                        lex.words.push(indices);
                    }
                }
                _ => lex.skipped.push(word.to_string()),
            }
        }
        lex
    }

    /// Parses the word-list format: one word per line, blank lines and lines
    /// starting with `%` ignored, surrounding whitespace trimmed.
    pub fn from_text(text: &str, alphabet: &Alphabet) -> Lexicon {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('%'));
        Self::from_words(words, alphabet)
    }

    /// Number of interned words.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// True when no word survived interning.
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Word at `idx` as alphabet indices, without EOS.
    pub fn word(&self, idx: usize) -> &[usize] {
        &self.words[idx]
    }

    /// All words in insertion order.
    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    /// Membership test for an EOS-free index sequence.
    pub fn contains(&self, word: &[usize]) -> bool {
        self.set.contains(word)
    }

    /// Words that failed interning, in input order.
    pub fn skipped(&self) -> &[String] {
        &self.skipped
    }

    pub(crate) fn eos(&self) -> usize {
        self.eos
    }
}

/// Per-frame greedy base string (no EOS): each frame is independently
/// deleted when `r_delete > r_consume · max_c y(c)` and otherwise consumed
/// as the most probable non-EOS character. Exact ties consume, and tied
/// characters pick the lowest alphabet index.
pub fn greedy_base_string<F: Scalar>(
    em: &EmissionSequence<F>,
    alphabet: &Alphabet,
) -> Vec<usize> {
    let eos = alphabet.eos();
    let mut out = Vec::with_capacity(em.len());
    for f in &em.frames {
        let mut best_c = 0usize;
        let mut best_y = F::neg_infinity();
        for (c, &yc) in f.y.iter().enumerate() {
            if c != eos && yc > best_y {
                best_c = c;
                best_y = yc;
            }
        }
        if f.r_delete() <= f.r_consume() * best_y {
            out.push(best_c);
        }
    }
    out
}

/// Scores `word ⊕ EOS` with a fresh row-by-row pass, reusing the caller's
/// buffers. `row` ends up holding the final row.
pub(crate) fn score_word<F: Scalar>(
    em: &EmissionSequence<F>,
    eos: usize,
    word: &[usize],
    row: &mut Vec<F>,
    next: &mut Vec<F>,
) -> F {
    let n = em.len();
    row.clear();
    row.resize(n + 1, F::neg_infinity());
    next.clear();
    next.resize(n + 1, F::neg_infinity());
    root_row(em, row);
    for &c in word {
        extend_row(em, row, c, false, next);
        std::mem::swap(row, next);
    }
    extend_row(em, row, eos, true, next);
    std::mem::swap(row, next);
    row[n]
}

/// Base-string prefixes with their log scores, sharing one grid.
fn free_candidates<F: Scalar>(
    em: &EmissionSequence<F>,
    alphabet: &Alphabet,
) -> Vec<(Vec<usize>, F)> {
    let base = greedy_base_string(em, alphabet);
    let n = em.len();
    let eos = alphabet.eos();
    let mut row = vec![F::neg_infinity(); n + 1];
    let mut next = vec![F::neg_infinity(); n + 1];
    let mut eos_row = vec![F::neg_infinity(); n + 1];
    root_row(em, &mut row);
    let mut out = Vec::with_capacity(base.len() + 1);
    extend_row(em, &row, eos, true, &mut eos_row);
    out.push((Vec::new(), eos_row[n]));
    for (i, &c) in base.iter().enumerate() {
        extend_row(em, &row, c, false, &mut next);
        std::mem::swap(&mut row, &mut next);
        extend_row(em, &row, eos, true, &mut eos_row);
        out.push((base[..=i].to_vec(), eos_row[n]));
    }
    out
}

struct Candidate<F> {
    word: Vec<usize>,
    raw: F,
    weighted: F,
    in_lex: bool,
}

/// Strict "better than" with the full tie-break chain: higher weighted
/// score, then lexicon membership, then shorter word, then lexicographic
/// order by alphabet index.
fn is_better<F: Scalar>(a: &Candidate<F>, b: &Candidate<F>) -> bool {
    if a.weighted != b.weighted {
        return a.weighted > b.weighted;
    }
    if a.in_lex != b.in_lex {
        return a.in_lex;
    }
    if a.word.len() != b.word.len() {
        return a.word.len() < b.word.len();
    }
    a.word < b.word
}

fn pick_best<F: Scalar>(
    candidates: impl IntoIterator<Item = Candidate<F>>,
    alphabet: &Alphabet,
) -> Result<Prediction<F>> {
    let mut best: Option<Candidate<F>> = None;
    for cand in candidates {
        match &best {
            Some(cur) if !is_better(&cand, cur) => {}
            _ => best = Some(cand),
        }
    }
    let best = best.expect("candidate set is never empty");
    Ok(Prediction {
        target: TargetString::from_word_indices(&best.word, alphabet)?,
        log_score: best.raw,
        source: if best.in_lex { PredictionSource::Lexicon } else { PredictionSource::Free },
    })
}

/// Lexicon-free prediction: the best EOS-completed prefix of the greedy
/// base string.
pub fn predict_free<F: Scalar>(em: &EmissionSequence<F>, alphabet: &Alphabet) -> Prediction<F> {
    let candidates = free_candidates(em, alphabet).into_iter().map(|(word, raw)| Candidate {
        word,
        raw,
        weighted: raw,
        in_lex: false,
    });
    pick_best(candidates, alphabet).expect("prefix candidates are valid targets")
}

fn check_lambda<F: Scalar>(lambda: F) -> Result<(F, F)> {
    if !(lambda >= F::of(0.5) && lambda <= F::one()) {
        return Err(EpError::LambdaOutOfRange {
            lambda: lambda.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((ln_prob(lambda), ln_prob(F::one() - lambda)))
}

fn blend_candidates<F: Scalar>(
    em: &EmissionSequence<F>,
    alphabet: &Alphabet,
    lexicon: &Lexicon,
    lambda: F,
    word_scores: impl IntoIterator<Item = (usize, F)>,
) -> Result<Prediction<F>> {
    let (ln_lam, ln_not) = check_lambda(lambda)?;
    let free = free_candidates(em, alphabet).into_iter().map(|(word, raw)| {
        let in_lex = lexicon.contains(&word);
        Candidate { raw, weighted: raw + if in_lex { ln_lam } else { ln_not }, word, in_lex }
    });
    let lex = word_scores.into_iter().map(|(idx, raw)| Candidate {
        word: lexicon.word(idx).to_vec(),
        raw,
        weighted: raw + ln_lam,
        in_lex: true,
    });
    pick_best(free.chain(lex), alphabet)
}

/// Lexicon-blended prediction with word scores from the prefix trie.
///
/// `lambda` must lie in `[0.5, 1]`: at `0.5` the blend degenerates to the
/// raw score argmax over both candidate sets, at `1` only lexicon words can
/// win (up to ties, which membership resolves).
pub fn predict_lex<F: Scalar>(
    em: &EmissionSequence<F>,
    alphabet: &Alphabet,
    lexicon: &Lexicon,
    lambda: F,
) -> Result<Prediction<F>> {
    check_lambda(lambda)?;
    let trie = build_trie(lexicon, em)?;
    blend_candidates(em, alphabet, lexicon, lambda, trie.word_scores())
}

/// Same decision function as [`predict_lex`] but with every lexicon word
/// rescored by its own full pass — the baseline the trie is measured
/// against. Results are identical, tie-breaking included.
pub fn predict_lex_enumerated<F: Scalar>(
    em: &EmissionSequence<F>,
    alphabet: &Alphabet,
    lexicon: &Lexicon,
    lambda: F,
) -> Result<Prediction<F>> {
    check_lambda(lambda)?;
    let mut row = Vec::new();
    let mut next = Vec::new();
    let scores: Vec<(usize, F)> = lexicon
        .words()
        .iter()
        .enumerate()
        .map(|(idx, word)| (idx, score_word(em, lexicon.eos(), word, &mut row, &mut next)))
        .collect();
    blend_candidates(em, alphabet, lexicon, lambda, scores)
}
