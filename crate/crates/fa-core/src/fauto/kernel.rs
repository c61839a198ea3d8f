//! (S, F^r)-kernels and the automaton they determine.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::AutomaticSet;
use crate::automata::dfa::{build, Builder};
use crate::automata::mdd::NodeId;
use crate::error::{Error, Result};
use crate::group::{CosetSystem, Element};

#[derive(Clone, Debug)]
pub struct Kernel {
    /// Exponent r of the step F^r.
    pub r: u32,
    /// Coset representatives of F^r Γ, ascending.
    pub reps: Vec<Element>,
    /// Letters: tuples of representative indices, coordinate 0 most significant.
    pub letters: Vec<Vec<usize>>,
    /// Class 0 is the set itself.
    pub classes: Vec<AutomaticSet>,
    /// table[class][letter] = class of the child.
    pub table: Vec<Vec<u32>>,
    /// Whether 0 lies in each class.
    pub accepting: Vec<bool>,
}

impl Kernel {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class reached from class 0 along a word of letters.
    pub fn walk(&self, word: &[usize]) -> u32 {
        word.iter().fold(0u32, |c, &l| self.table[c as usize][l])
    }

    pub fn letter_index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0usize, |acc, &i| acc * self.reps.len() + i)
    }
}

fn letters(n: usize, m: usize) -> Vec<Vec<usize>> {
    let total = n.pow(m as u32);
    (0..total)
        .map(|mut i| {
            let mut v = vec![0usize; m];
            for c in (0..m).rev() {
                v[c] = i % n;
                i /= n;
            }
            v
        })
        .collect()
}

/// A_s = {x : s + F^r x ∈ A} for a tuple of representatives.
fn child(a: &AutomaticSet, s: &[Element]) -> Result<AutomaticSet> {
    let span = a.span();
    let g = span.group();
    let mut letter = Vec::with_capacity(s.len());
    let mut shift = Vec::with_capacity(s.len());
    let mut exact = true;
    for x in s {
        let d = *span.congruent(x).first().ok_or_else(|| Error::NotSpanning("no digit in a coset".into()))?;
        let u = span.step(x, d).expect("congruent digit");
        exact &= g.is_zero(&u);
        letter.push(d as u32);
        shift.push(g.neg(&u));
    }
    let q = AutomaticSet { dfa: a.dfa.left_quotient(&letter), ..a.clone() };
    // s + F^r x = d + F^r (x + u), so A_s = A_d - u.
    if exact {
        Ok(q)
    } else {
        q.translate(&shift)
    }
}

/// Breadth-first enumeration of the kernel, children in letter order.
pub fn kernel_of(a: &AutomaticSet, s: &CosetSystem) -> Result<Kernel> {
    if s.r != a.span().r() {
        return Err(Error::Precondition("coset system exponent differs from the spanning set's".into()));
    }
    let m = a.arity();
    let ls = letters(s.len(), m);
    let mut classes = vec![a.clone()];
    let mut index: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
    index.insert(a.canonical_key(), 0);
    let mut table = Vec::new();
    let mut i = 0;
    while i < classes.len() {
        let mut row = Vec::with_capacity(ls.len());
        for l in &ls {
            let tuple: Vec<Element> = l.iter().map(|&j| s.reps[j].clone()).collect();
            let c = child(&classes[i], &tuple)?;
            let key = c.canonical_key();
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    if classes.len() >= a.caps().kernel {
                        return Err(Error::KernelCapExceeded { cap: a.caps().kernel });
                    }
                    let id = classes.len() as u32;
                    index.insert(key, id);
                    classes.push(c);
                    id
                }
            };
            row.push(id);
        }
        table.push(row);
        i += 1;
    }
    let zero = vec![a.group().zero(); m];
    let accepting = classes.iter().map(|c| c.member(&zero)).collect::<Result<_>>()?;
    Ok(Kernel { r: s.r, reps: s.reps.clone(), letters: ls, classes, table, accepting })
}

type Key = (u32, Vec<Element>);

/// The automaton over the spanning digits determined by a kernel. A state
/// (c, u) stands for the set A_τ - u where c is the class of A_τ; reading
/// the digit tuple d moves to (class of A_{τs}, F^{-r}(d + u - s)) with s
/// the representatives of d + u. Acceptance is u ∈ class.
pub fn from_kernel(k: &Kernel) -> Result<AutomaticSet> {
    let base = k.classes.first().ok_or_else(|| Error::Precondition("empty kernel".into()))?;
    let span = base.span().clone();
    let g = span.group().clone();
    let m = base.arity();
    let caps = *base.caps();
    let cs = g.coset_system(k.r);
    if cs.reps != k.reps {
        return Err(Error::Precondition("kernel representatives differ from the group's coset system".into()));
    }
    let tracks = super::set_tracks(&span, m);
    let radix = tracks.radix().to_vec();
    let mut accept_err: Option<Error> = None;
    let (d, _) = build(
        tracks,
        (0u32, vec![g.zero(); m]),
        caps.carry,
        |(c, u): &Key| match k.classes[*c as usize].member(u) {
            Ok(b) => b,
            Err(e) => {
                accept_err.get_or_insert(e);
                false
            }
        },
        |(c, u), b| {
            let mut letter = vec![0u32; m];
            Ok(letter_rec(b, &radix, 0, &mut letter, &mut |l| {
                let mut reps = Vec::with_capacity(m);
                let mut next = Vec::with_capacity(m);
                for i in 0..m {
                    let y = g.add(&span.digits()[l[i] as usize], &u[i]);
                    let j = cs.index_of(&y);
                    next.push(cs.power().preimage(&g.sub(&y, &cs.reps[j])).expect("representative"));
                    reps.push(j);
                }
                (k.table[*c as usize][k.letter_index(&reps)], next)
            }))
        },
    )
    .map_err(|e| match e {
        Error::CapExceeded(_) => super::carry_error(Error::CarryCapExceeded { cap: caps.carry, bound: Default::default() }, &span, &caps),
        e => e,
    })?;
    if let Some(e) = accept_err {
        return Err(e);
    }
    AutomaticSet::from_canonical(&span, m, d, caps)
}

fn letter_rec(b: &mut Builder<Key>, radix: &[u32], t: usize, letter: &mut Vec<u32>, f: &mut impl FnMut(&[u32]) -> Key) -> NodeId {
    if t == radix.len() {
        let k = f(letter);
        return b.target(k);
    }
    let kids: Vec<NodeId> = (0..radix[t])
        .map(|d| {
            letter[t] = d;
            letter_rec(b, radix, t + 1, letter, f)
        })
        .collect();
    b.mdd.branch(t as u32, kids)
}
