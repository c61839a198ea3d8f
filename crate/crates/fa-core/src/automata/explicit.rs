//! Explicit edge-list automata over a single-track alphabet of letter indices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::dfa::Dfa;
use super::nfa::Nfa;
use super::Tracks;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    /// Number of letters; letters are 0..alphabet.
    pub alphabet: u32,
    pub states: u32,
    pub initial: u32,
    pub finish: Vec<u32>,
    /// (from, letter, to)
    pub edges: Vec<(u32, u32, u32)>,
    pub deterministic: bool,
}

impl Automaton {
    pub fn validate(&self) -> Result<()> {
        if self.alphabet == 0 {
            return Err(Error::AlphabetMismatch("empty alphabet".into()));
        }
        if self.initial >= self.states || self.finish.iter().any(|&f| f >= self.states) {
            return Err(Error::Parse("state index out of range".into()));
        }
        for &(p, l, q) in &self.edges {
            if p >= self.states || q >= self.states || l >= self.alphabet {
                return Err(Error::Parse(format!("edge ({p},{l},{q}) out of range")));
            }
        }
        if self.deterministic {
            let mut seen = vec![false; (self.states * self.alphabet) as usize];
            for &(p, l, _) in &self.edges {
                let i = (p * self.alphabet + l) as usize;
                if seen[i] {
                    return Err(Error::Parse(format!("state {p} has two successors on letter {l}")));
                }
                seen[i] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::Parse("deterministic automaton is missing transitions".into()));
            }
        }
        Ok(())
    }

    /// Tracks for this alphabet, with `pad` as the padding letter.
    pub fn tracks(&self, pad: u32) -> Tracks {
        Tracks::single(self.alphabet, pad)
    }

    pub fn to_nfa(&self, pad: u32) -> Result<Nfa> {
        self.validate()?;
        let mut fin = vec![false; self.states as usize];
        for &f in &self.finish {
            fin[f as usize] = true;
        }
        let edges: Vec<(u32, Vec<u32>, u32)> = self.edges.iter().map(|&(p, l, q)| (p, vec![l], q)).collect();
        Ok(Nfa::from_edges(self.tracks(pad), self.states as usize, vec![self.initial], fin, &edges))
    }

    pub fn to_dfa(&self, pad: u32) -> Result<Dfa> {
        self.to_nfa(pad)?.determinize()
    }

    /// Edge list of a DFA over any tuple alphabet, letters numbered by
    /// [`Tracks::letter_index`].
    pub fn from_dfa(d: &Dfa) -> Result<Automaton> {
        let size = d.tracks().alphabet_size().filter(|&s| s <= u32::MAX as u64).ok_or_else(|| {
            Error::CapExceeded("alphabet too large for an explicit edge list".into())
        })?;
        let mut edges = Vec::new();
        let radix = d.tracks().radix().to_vec();
        for q in 0..d.states() as u32 {
            for (l, s) in d.mdd().enumerate(d.trans_node(q), &radix) {
                edges.push((q, d.tracks().letter_index(&l) as u32, s));
            }
        }
        Ok(Automaton {
            alphabet: size as u32,
            states: d.states() as u32,
            initial: d.initial(),
            finish: (0..d.states() as u32).filter(|&q| d.is_final(q)).collect(),
            edges,
            deterministic: true,
        })
    }
}
