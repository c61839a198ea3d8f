//! Finite automata over tuple alphabets.
//!
//! An alphabet is a product of tracks, each with a radix and a designated
//! padding digit. Transitions are stored as decision diagrams (see [`mdd`]),
//! so automata over many tracks stay small when most tracks are ignored.

pub mod count;
pub mod dfa;
pub mod explicit;
pub mod mdd;
pub mod nfa;
pub mod parikh;
pub mod sparse;

pub use count::{count_words, growth_profile};
pub use dfa::Dfa;
pub use explicit::Automaton;
pub use nfa::Nfa;
pub use parikh::{parikh_image, LinearSet, SemilinearSet, WeightedGraph};
pub use sparse::{is_sparse, sparse_decompose, SimpleSparseTerm, Sparsity};

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// The shape of a tuple alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tracks {
    radix: Vec<u32>,
    pad: Vec<u32>,
}

impl Tracks {
    pub fn new(radix: Vec<u32>, pad: Vec<u32>) -> Result<Tracks> {
        if radix.len() != pad.len() {
            return Err(Error::AlphabetMismatch("radix and pad lengths differ".into()));
        }
        if radix.iter().zip(&pad).any(|(&r, &p)| r == 0 || p >= r) {
            return Err(Error::AlphabetMismatch("every track needs a nonzero radix and a padding digit below it".into()));
        }
        Ok(Tracks { radix, pad })
    }

    pub fn uniform(n: usize, radix: u32, pad: u32) -> Tracks {
        Tracks::new(alloc::vec![radix; n], alloc::vec![pad; n]).expect("valid uniform tracks")
    }

    pub fn single(radix: u32, pad: u32) -> Tracks {
        Tracks::uniform(1, radix, pad)
    }

    pub fn len(&self) -> usize {
        self.radix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radix.is_empty()
    }

    pub fn radix(&self) -> &[u32] {
        &self.radix
    }

    pub fn pad(&self) -> &[u32] {
        &self.pad
    }

    pub fn pad_letter(&self) -> Vec<u32> {
        self.pad.clone()
    }

    pub fn is_pad(&self, letter: &[u32]) -> bool {
        letter == self.pad.as_slice()
    }

    /// Number of letters, if it fits.
    pub fn alphabet_size(&self) -> Option<u64> {
        self.radix.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r as u64))
    }

    /// Index of a letter, track 0 most significant.
    pub fn letter_index(&self, letter: &[u32]) -> u64 {
        letter.iter().zip(&self.radix).fold(0u64, |acc, (&d, &r)| acc * r as u64 + d as u64)
    }

    pub fn letter_of(&self, mut idx: u64) -> Vec<u32> {
        let mut out = alloc::vec![0u32; self.radix.len()];
        for t in (0..self.radix.len()).rev() {
            out[t] = (idx % self.radix[t] as u64) as u32;
            idx /= self.radix[t] as u64;
        }
        out
    }

    /// All letters in ascending order. Only for small alphabets.
    pub fn letters(&self) -> Vec<Vec<u32>> {
        let n = self.alphabet_size().expect("alphabet too large to enumerate");
        (0..n).map(|i| self.letter_of(i)).collect()
    }

    pub fn concat(&self, o: &Tracks) -> Tracks {
        let mut radix = self.radix.clone();
        radix.extend(&o.radix);
        let mut pad = self.pad.clone();
        pad.extend(&o.pad);
        Tracks { radix, pad }
    }

    pub fn repeat(&self, k: usize) -> Tracks {
        let mut t = Tracks { radix: Vec::new(), pad: Vec::new() };
        for _ in 0..k {
            t = t.concat(self);
        }
        t
    }

    pub fn select(&self, idx: &[usize]) -> Tracks {
        Tracks { radix: idx.iter().map(|&i| self.radix[i]).collect(), pad: idx.iter().map(|&i| self.pad[i]).collect() }
    }
}
