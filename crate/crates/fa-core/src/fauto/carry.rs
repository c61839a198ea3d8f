//! Carry automata for linear equations over Γ.
//!
//! A system of equations Σ cᵢ·F^{kᵢ}[σ_{tᵢ}] + γ = 0 is read one letter
//! at a time, least significant first. The state is the vector of carries;
//! reading a letter adds every contribution to its carry, which must then
//! be divisible by the step power F^r, and the new carry is the quotient.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::automata::dfa::{build, Builder};
use crate::automata::mdd::NodeId;
use crate::automata::{Dfa, Tracks};
use crate::error::{Error, Result};
use crate::group::{Element, FPower, Group};
use crate::FastMap;

/// coeff · F^shift applied to the digit on `track`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub track: usize,
    pub coeff: BigInt,
    pub shift: u32,
}

impl Term {
    pub fn new(track: usize, coeff: i64) -> Term {
        Term { track, coeff: BigInt::from(coeff), shift: 0 }
    }

    pub fn shifted(track: usize, coeff: i64, shift: u32) -> Term {
        Term { track, coeff: BigInt::from(coeff), shift }
    }
}

#[derive(Clone, Debug)]
pub struct Equation {
    pub terms: Vec<Term>,
    pub constant: Element,
}

/// One digit alphabet per track; the padding digit is the zero digit.
#[derive(Clone, Debug)]
pub struct CarrySystem {
    pub alphabets: Vec<Vec<Element>>,
    pub equations: Vec<Equation>,
}

type Key = Option<Vec<Element>>;

impl CarrySystem {
    pub fn tracks(&self, g: &Group) -> Result<Tracks> {
        let zero = g.zero();
        let mut radix = Vec::new();
        let mut pad = Vec::new();
        for a in &self.alphabets {
            let p = a.iter().position(|d| *d == zero).ok_or_else(|| Error::AlphabetMismatch("alphabet lacks 0".into()))?;
            radix.push(a.len() as u32);
            pad.push(p as u32);
        }
        Tracks::new(radix, pad)
    }

    /// Minimal DFA of the solutions, with the reachable carry count.
    pub fn automaton(&self, fp: &FPower, cap: usize) -> Result<(Dfa, usize)> {
        let g = fp.group();
        let tracks = self.tracks(g)?;
        // contributions[t][d] = [(equation, value)]
        let mut contrib: Vec<Vec<Vec<(usize, Element)>>> = self.alphabets.iter().map(|a| vec![Vec::new(); a.len()]).collect();
        for (e, eq) in self.equations.iter().enumerate() {
            for term in &eq.terms {
                if term.track >= self.alphabets.len() {
                    return Err(Error::ArityMismatch { expected: self.alphabets.len(), got: term.track + 1 });
                }
                for (d, digit) in self.alphabets[term.track].iter().enumerate() {
                    let v = g.scale(&term.coeff, &g.apply(digit, term.shift));
                    if !g.is_zero(&v) {
                        contrib[term.track][d].push((e, v));
                    }
                }
            }
        }
        let used: Vec<bool> = contrib.iter().map(|c| c.iter().any(|x| !x.is_empty())).collect();
        let init: Key = Some(self.equations.iter().map(|e| e.constant.clone()).collect());
        let mut memo: FastMap<(usize, Vec<Element>), NodeId> = FastMap::default();
        let radix = tracks.radix().to_vec();
        let (dfa, keys) = build(
            tracks,
            init,
            cap.saturating_add(1),
            |k| k.as_ref().is_some_and(|c| c.iter().all(|x| g.is_zero(x))),
            |k, b| {
                Ok(match k {
                    None => b.target(None),
                    Some(c) => rec(fp, &contrib, &used, &radix, 0, c.clone(), &mut memo, b),
                })
            },
        )
        .map_err(|e| match e {
            Error::CapExceeded(_) => Error::CarryCapExceeded { cap, bound: String::new() },
            e => e,
        })?;
        let carries = keys.iter().filter(|k| k.is_some()).count();
        Ok((dfa.minimize(), carries))
    }
}

#[allow(clippy::too_many_arguments)]
fn rec(
    fp: &FPower,
    contrib: &[Vec<Vec<(usize, Element)>>],
    used: &[bool],
    radix: &[u32],
    t: usize,
    partial: Vec<Element>,
    memo: &mut FastMap<(usize, Vec<Element>), NodeId>,
    b: &mut Builder<Key>,
) -> NodeId {
    if t == radix.len() {
        let next: Option<Vec<Element>> = partial.iter().map(|y| fp.preimage(y)).collect();
        return b.target(next);
    }
    if !used[t] {
        return rec(fp, contrib, used, radix, t + 1, partial, memo, b);
    }
    let key = (t, partial);
    if let Some(&n) = memo.get(&key) {
        return n;
    }
    let g = fp.group();
    let kids: Vec<NodeId> = (0..radix[t] as usize)
        .map(|d| {
            let mut p = key.1.clone();
            for (e, v) in &contrib[t][d] {
                p[*e] = g.add(&p[*e], v);
            }
            rec(fp, contrib, used, radix, t + 1, p, memo, b)
        })
        .collect();
    let n = b.mdd.branch(t as u32, kids);
    memo.insert(key, n);
    n
}

/// Relation {(σ, τ) : [σ]_{F^r} = [τ]_{F^r}} between two digit alphabets.
pub fn equality_relation(fp: &FPower, src: &[Element], tgt: &[Element], cap: usize) -> Result<Dfa> {
    let g = fp.group();
    let sys = CarrySystem {
        alphabets: vec![src.to_vec(), tgt.to_vec()],
        equations: vec![Equation { terms: vec![Term::new(0, 1), Term::new(1, -1)], constant: g.zero() }],
    };
    Ok(sys.automaton(fp, cap)?.0)
}

/// Relation {(σ, τ, υ) : [σ] + [τ] = [υ]} over one alphabet.
pub fn addition_relation(fp: &FPower, digits: &[Element], cap: usize) -> Result<Dfa> {
    let g = fp.group();
    let sys = CarrySystem {
        alphabets: vec![digits.to_vec(); 3],
        equations: vec![Equation { terms: vec![Term::new(0, 1), Term::new(1, 1), Term::new(2, -1)], constant: g.zero() }],
    };
    Ok(sys.automaton(fp, cap)?.0)
}

/// Human-readable form of the carry bound for error reports.
pub fn bound_note(n_bits: u64) -> String {
    format!("lambda(carry) <= E*D*N/C = 2N with C=D=E=2 and N <= 2^{n_bits}")
}
