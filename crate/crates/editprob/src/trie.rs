//! Prefix trie over a lexicon, with one score row per node.
//!
//! Scoring a word against an emission sequence costs one dynamic-programming
//! row per character. Words sharing a prefix share those rows, so scoring a
//! whole lexicon collapses to one row per *distinct* prefix: each trie node
//! carries the row for its prefix, computed once from its parent. Scoring
//! all words then costs `O(nodes · n)` instead of `O(Σ |word| · n)`.

use crate::decode::Lexicon;
use crate::emissions::EmissionSequence;
use crate::error::{EpError, Result};
use crate::forward::{extend_row, root_row};
use crate::scalar::Scalar;

struct TrieNode<F> {
    /// `(symbol, node)` edges in insertion order; alphabets are small, so a
    /// linear scan beats hashing here.
    children: Vec<(usize, usize)>,
    /// `ln ep(prefix, y₁..ⱼ)` for every `j`.
    row: Vec<F>,
    /// Lexicon word ending at this node (after its EOS edge), if any.
    word: Option<usize>,
}

/// A built trie: every distinct prefix of `word ⊕ EOS` over the lexicon,
/// scored against one emission sequence.
pub struct EpTrie<F> {
    nodes: Vec<TrieNode<F>>,
    frames: usize,
}

impl<F: Scalar> EpTrie<F> {
    /// Number of nodes, the root included.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `(lexicon word index, ln ep(word ⊕ EOS, y))` for every word.
    pub fn word_scores(&self) -> impl Iterator<Item = (usize, F)> + '_ {
        self.nodes
            .iter()
            .filter_map(move |node| node.word.map(|w| (w, node.row[self.frames])))
    }
}

fn child_or_extend<F: Scalar>(
    nodes: &mut Vec<TrieNode<F>>,
    em: &EmissionSequence<F>,
    parent: usize,
    symbol: usize,
    is_eos: bool,
) -> usize {
    if let Some(&(_, k)) = nodes[parent].children.iter().find(|&&(s, _)| s == symbol) {
        return k;
    }
    let mut row = vec![F::neg_infinity(); em.len() + 1];
    extend_row(em, &nodes[parent].row, symbol, is_eos, &mut row);
    let k = nodes.len();
    nodes.push(TrieNode { children: Vec::new(), row, word: None });
    nodes[parent].children.push((symbol, k));
    k
}

/// Builds the scored trie for `lexicon` against `em`.
pub fn build_trie<F: Scalar>(lexicon: &Lexicon, em: &EmissionSequence<F>) -> Result<EpTrie<F>> {
    let n = em.len();
    let mut root = TrieNode { children: Vec::new(), row: vec![F::neg_infinity(); n + 1], word: None };
    root_row(em, &mut root.row);
    let mut nodes = vec![root];
    let eos = lexicon.eos();
    for (widx, word) in lexicon.words().iter().enumerate() {
        // Interning already keeps EOS out of words; guard anyway.
        if word.contains(&eos) {
            return Err(EpError::WordContainsEos {
                word: word.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
            });
        }
        let mut cur = 0usize;
        for &c in word {
            cur = child_or_extend(&mut nodes, em, cur, c, false);
        }
        let leaf = child_or_extend(&mut nodes, em, cur, eos, true);
        nodes[leaf].word = Some(widx);
    }
    Ok(EpTrie { nodes, frames: n })
}
