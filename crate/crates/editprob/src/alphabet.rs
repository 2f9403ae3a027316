//! Symbol inventory and target strings.
//!
//! An [`Alphabet`] is an ordered set of distinct characters containing
//! exactly one end-of-sequence (EOS) symbol. A [`TargetString`] is a
//! non-empty sequence of alphabet indices whose single EOS sits at the end —
//! the only form of string the scoring kernels accept.

use std::collections::HashMap;

use crate::error::{EpError, Result};

/// Ordered character inventory with a designated end-of-sequence symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
    index: HashMap<char, usize>,
    eos: usize,
}

impl Alphabet {
    /// Builds an alphabet from its symbols and the EOS character, which must
    /// occur in `symbols` exactly once.
    pub fn new(symbols: Vec<char>, eos_symbol: char) -> Result<Self> {
        if symbols.len() < 2 {
            return Err(EpError::InvalidAlphabet {
                reason: format!("need at least 2 symbols, got {}", symbols.len()),
            });
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (k, &c) in symbols.iter().enumerate() {
            if index.insert(c, k).is_some() {
                return Err(EpError::InvalidAlphabet {
                    reason: format!("duplicate symbol {c:?}"),
                });
            }
        }
        let eos = *index.get(&eos_symbol).ok_or_else(|| EpError::InvalidAlphabet {
            reason: format!("end-of-sequence symbol {eos_symbol:?} not among symbols"),
        })?;
        Ok(Self { symbols, index, eos })
    }

    /// Convenience constructor: the characters of `letters` followed by `#`
    /// as the EOS symbol.
    pub fn with_default_eos(letters: &str) -> Result<Self> {
        let mut symbols: Vec<char> = letters.chars().collect();
        symbols.push('#');
        Self::new(symbols, '#')
    }

    /// Number of symbols, EOS included.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// True when the alphabet holds no symbols (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Index of the EOS symbol.
    pub fn eos(&self) -> usize {
        self.eos
    }

    /// Symbol at `idx`; panics when out of range.
    pub fn symbol(&self, idx: usize) -> char {
        self.symbols[idx]
    }

    /// All symbols in order.
    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    /// Index of `ch`, if present.
    pub fn index_of(&self, ch: char) -> Option<usize> {
        self.index.get(&ch).copied()
    }

    /// Maps every character of `text` to its index; fails on the first
    /// character outside the alphabet.
    pub fn encode(&self, text: &str) -> Result<Vec<usize>> {
        text.chars()
            .map(|c| self.index_of(c).ok_or(EpError::UnknownSymbol { ch: c }))
            .collect()
    }

    /// Renders a sequence of indices back into a string.
    pub fn decode(&self, indices: &[usize]) -> String {
        indices.iter().map(|&k| self.symbol(k)).collect()
    }
}

/// A validated target string: alphabet indices, exactly one EOS, at the end.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TargetString {
    indices: Vec<usize>,
}

impl TargetString {
    /// Builds a target from raw indices, checking the EOS discipline against
    /// `alphabet`.
    pub fn new(indices: Vec<usize>, alphabet: &Alphabet) -> Result<Self> {
        if indices.is_empty() {
            return Err(EpError::InvalidTarget {
                reason: "target must not be empty".into(),
            });
        }
        if let Some(&bad) = indices.iter().find(|&&k| k >= alphabet.len()) {
            return Err(EpError::InvalidTarget {
                reason: format!("index {bad} outside alphabet of size {}", alphabet.len()),
            });
        }
        let eos = alphabet.eos();
        if *indices.last().unwrap() != eos {
            return Err(EpError::InvalidTarget {
                reason: "target must end with the end-of-sequence symbol".into(),
            });
        }
        if indices[..indices.len() - 1].contains(&eos) {
            return Err(EpError::InvalidTarget {
                reason: "end-of-sequence symbol may only appear at the end".into(),
            });
        }
        Ok(Self { indices })
    }

    /// Parses text that already carries its trailing EOS symbol.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        Self::new(alphabet.encode(text)?, alphabet)
    }

    /// Parses EOS-free text and appends the EOS symbol.
    pub fn parse_word(alphabet: &Alphabet, word: &str) -> Result<Self> {
        let mut indices = alphabet.encode(word)?;
        indices.push(alphabet.eos());
        Self::new(indices, alphabet)
    }

    /// Builds the target for an EOS-free index sequence by appending EOS.
    pub fn from_word_indices(word: &[usize], alphabet: &Alphabet) -> Result<Self> {
        let mut indices = word.to_vec();
        indices.push(alphabet.eos());
        Self::new(indices, alphabet)
    }

    /// Length including the EOS symbol; always at least 1.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    /// Never true; targets are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Symbol index of the 1-based position `i`.
    pub fn symbol_at(&self, i: usize) -> usize {
        self.indices[i - 1]
    }

    /// All indices, EOS included.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Indices without the trailing EOS.
    pub fn word_indices(&self) -> &[usize] {
        &self.indices[..self.indices.len() - 1]
    }

    /// Renders the target, EOS included.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        alphabet.decode(&self.indices)
    }
}
