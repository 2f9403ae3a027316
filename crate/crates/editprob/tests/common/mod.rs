//! Shared helpers for the integration suites: deterministic random
//! instances and a finite-difference harness.

#![allow(dead_code)]

use editprob::{Alphabet, EmissionGradients, EmissionSequence, Frame, TargetString};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SYMBOL_POOL: &str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789abcdefghijklmnopqrstuvwxyz";

/// Alphabet of `k` symbols: `k - 1` from the pool plus `#` as EOS.
pub fn alphabet(k: usize) -> Alphabet {
    let letters: String = SYMBOL_POOL.chars().take(k - 1).collect();
    Alphabet::with_default_eos(&letters).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Strictly positive random distribution (normalized exponentials).
pub fn simplex(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..k).map(|_| -rng.gen_range(1e-12..1.0f64).ln()).collect();
    let s: f64 = v.iter().sum();
    for x in &mut v {
        *x /= s;
    }
    v
}

/// Distribution with a heavy EOS entry (weight in `[0.6, 0.9]`), everything
/// strictly positive.
pub fn eos_heavy_simplex(rng: &mut ChaCha8Rng, k: usize, eos: usize) -> Vec<f64> {
    let eos_mass = rng.gen_range(0.6..0.9);
    let mut v = simplex(rng, k);
    let rest: f64 = v
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != eos)
        .map(|(_, &x)| x)
        .sum();
    for (i, x) in v.iter_mut().enumerate() {
        *x = if i == eos { eos_mass } else { *x * (1.0 - eos_mass) / rest };
    }
    v
}

fn frame(rng: &mut ChaCha8Rng, k: usize) -> Frame<f64> {
    let r = simplex(rng, 3);
    Frame {
        y: simplex(rng, k),
        r: [r[0], r[1], r[2]],
        ins: simplex(rng, k),
    }
}

/// Random strictly positive emission sequence of `n` frames over `k`
/// symbols.
pub fn emissions(rng: &mut ChaCha8Rng, k: usize, n: usize) -> EmissionSequence<f64> {
    EmissionSequence {
        frames: (0..n).map(|_| frame(rng, k)).collect(),
        final_ins: simplex(rng, k),
    }
}

/// Emission sequence whose character-like distributions favor EOS, so most
/// string mass sits on short strings.
pub fn eos_heavy_emissions(rng: &mut ChaCha8Rng, k: usize, n: usize) -> EmissionSequence<f64> {
    let alphabet = alphabet(k);
    let eos = alphabet.eos();
    let frames = (0..n)
        .map(|_| {
            let r = simplex(rng, 3);
            Frame {
                y: eos_heavy_simplex(rng, k, eos),
                r: [r[0], r[1], r[2]],
                ins: eos_heavy_simplex(rng, k, eos),
            }
        })
        .collect();
    EmissionSequence { frames, final_ins: eos_heavy_simplex(rng, k, eos) }
}

/// Random target of `word_len` non-EOS characters plus EOS.
pub fn target(rng: &mut ChaCha8Rng, alphabet: &Alphabet, word_len: usize) -> TargetString {
    let eos = alphabet.eos();
    let word: Vec<usize> = (0..word_len)
        .map(|_| loop {
            let c = rng.gen_range(0..alphabet.len());
            if c != eos {
                break c;
            }
        })
        .collect();
    TargetString::from_word_indices(&word, alphabet).unwrap()
}

/// Number of scalar emission entries, in the fixed traversal order used by
/// [`get_slot`] and [`perturbed`].
pub fn slot_count(em: &EmissionSequence<f64>) -> usize {
    let k = em.alphabet_len();
    em.frames.len() * (2 * k + 3) + k
}

/// Reads entry `slot` of the traversal: per frame `y`, then `r`, then
/// `ins`; `final_ins` last.
pub fn get_slot(em: &EmissionSequence<f64>, slot: usize) -> f64 {
    let k = em.alphabet_len();
    let per = 2 * k + 3;
    let f = slot / per;
    if f < em.frames.len() {
        let off = slot % per;
        let fr = &em.frames[f];
        if off < k {
            fr.y[off]
        } else if off < k + 3 {
            fr.r[off - k]
        } else {
            fr.ins[off - k - 3]
        }
    } else {
        em.final_ins[slot - em.frames.len() * per]
    }
}

/// Same traversal over a gradient grid.
pub fn grad_slot(g: &EmissionGradients<f64>, slot: usize, k: usize, frames: usize) -> f64 {
    let per = 2 * k + 3;
    let f = slot / per;
    if f < frames {
        let off = slot % per;
        let fg = &g.frames[f];
        if off < k {
            fg.y[off]
        } else if off < k + 3 {
            fg.r[off - k]
        } else {
            fg.ins[off - k - 3]
        }
    } else {
        g.final_ins[slot - frames * per]
    }
}

/// Clone of `em` with `delta` added to entry `slot` — no renormalization,
/// matching the raw-entry gradient convention.
pub fn perturbed(em: &EmissionSequence<f64>, slot: usize, delta: f64) -> EmissionSequence<f64> {
    let mut out = em.clone();
    let k = em.alphabet_len();
    let per = 2 * k + 3;
    let f = slot / per;
    if f < out.frames.len() {
        let off = slot % per;
        let fr = &mut out.frames[f];
        if off < k {
            fr.y[off] += delta;
        } else if off < k + 3 {
            fr.r[off - k] += delta;
        } else {
            fr.ins[off - k - 3] += delta;
        }
    } else {
        out.final_ins[slot - out.frames.len() * per] += delta;
    }
    out
}
