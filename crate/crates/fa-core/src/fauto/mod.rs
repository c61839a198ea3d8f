//! F-automatic subsets of Γ^m.
//!
//! A set is stored as the minimal DFA of its full preimage: every tuple of
//! equal-length digit words (zero-padded) whose values lie in the set. This
//! language is closed under adding and removing trailing padding and is
//! determined by the set, so minimal DFAs double as equality certificates.

pub mod carry;
pub mod compile;
pub mod kernel;
pub mod reps;

pub use carry::{addition_relation, equality_relation, CarrySystem, Equation, Term};
pub use compile::{Engine, Expr, Formula};
pub use kernel::{from_kernel, kernel_of, Kernel};
pub use reps::{f_cycle, f_powers, groupless_f_set, is_f_sparse, min_representatives, order_set, sparse_sum, FSparsity};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::automata::{Dfa, Tracks};
use crate::error::{Caps, Error, Result};
use crate::group::{Element, Group};
use crate::spanning::{power_span, SpanningSet};

#[derive(Clone, Debug)]
pub struct AutomaticSet {
    span: SpanningSet,
    arity: usize,
    dfa: Dfa,
    caps: Caps,
}

/// Track layout for m coordinates over the digits of `span`.
pub fn set_tracks(span: &SpanningSet, arity: usize) -> Tracks {
    Tracks::uniform(arity, span.len() as u32, span.zero_index() as u32)
}

impl AutomaticSet {
    /// Wraps a DFA that already recognizes a full preimage.
    pub fn from_canonical(span: &SpanningSet, arity: usize, dfa: Dfa, caps: Caps) -> Result<AutomaticSet> {
        if *dfa.tracks() != set_tracks(span, arity) {
            return Err(Error::AlphabetMismatch("automaton does not read tuples of the spanning digits".into()));
        }
        Ok(AutomaticSet { span: span.clone(), arity, dfa: dfa.minimize(), caps })
    }

    pub fn span(&self) -> &SpanningSet {
        &self.span
    }

    pub fn group(&self) -> &Group {
        self.span.group()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn with_caps(mut self, caps: Caps) -> AutomaticSet {
        self.caps = caps;
        self
    }

    pub fn whole(span: &SpanningSet, arity: usize, caps: Caps) -> AutomaticSet {
        AutomaticSet { span: span.clone(), arity, dfa: Dfa::universal(set_tracks(span, arity)), caps }
    }

    pub fn empty(span: &SpanningSet, arity: usize, caps: Caps) -> AutomaticSet {
        AutomaticSet { span: span.clone(), arity, dfa: Dfa::empty(set_tracks(span, arity)), caps }
    }

    /// The set [L]_{F^r} for a language L over the spanning digits.
    pub fn from_language(span: &SpanningSet, arity: usize, dfa: &Dfa, caps: Caps) -> Result<AutomaticSet> {
        AutomaticSet::from_digits(span, arity, span.digits(), span.r(), dfa, caps)
    }

    /// The set [L]_{F^s} for a language L over an arbitrary finite digit
    /// list containing 0 (track radix = number of digits), converted to
    /// the spanning digits of `span`.
    pub fn from_digits(span: &SpanningSet, arity: usize, digits: &[Element], s: u32, dfa: &Dfa, caps: Caps) -> Result<AutomaticSet> {
        let g = span.group();
        let zero = g.zero();
        let pad = digits.iter().position(|d| *d == zero).ok_or_else(|| Error::AlphabetMismatch("digit list lacks 0".into()))?;
        let expect = Tracks::uniform(arity, digits.len() as u32, pad as u32);
        if *dfa.tracks() != expect {
            return Err(Error::AlphabetMismatch(format!("expected {arity} tracks over {} digits", digits.len())));
        }
        let d = convert(digits, s, arity, &dfa.pad_saturate(), span, &caps)?;
        Ok(AutomaticSet { span: span.clone(), arity, dfa: d, caps })
    }

    /// A finite set of tuples.
    pub fn finite(span: &SpanningSet, tuples: &[Vec<Element>], arity: usize, caps: Caps) -> Result<AutomaticSet> {
        let tracks = set_tracks(span, arity);
        let mut d = Dfa::empty(tracks.clone());
        for t in tuples {
            let w = tuple_word(span, t, arity, &caps)?;
            let wd = crate::automata::sparse::word_dfa(&tracks, &w)?.pad_saturate();
            d = d.union(&wd)?;
        }
        AutomaticSet::from_language(span, arity, &d, caps)
    }

    /// Same set over another spanning set of the same group.
    pub fn rebase(&self, target: &SpanningSet) -> Result<AutomaticSet> {
        if *target == self.span {
            return Ok(self.clone());
        }
        if target.group() != self.group() {
            return Err(Error::Precondition("rebase across different groups".into()));
        }
        let d = convert(self.span.digits(), self.span.r(), self.arity, &self.dfa, target, &self.caps)?;
        Ok(AutomaticSet { span: target.clone(), arity: self.arity, dfa: d, caps: self.caps })
    }

    /// A word of the tuple, all coordinates padded to a common length.
    pub fn word(&self, a: &[Element]) -> Result<Vec<Vec<u32>>> {
        tuple_word(&self.span, a, self.arity, &self.caps)
    }

    pub fn member(&self, a: &[Element]) -> Result<bool> {
        Ok(self.dfa.accepts(&self.word(a)?))
    }

    /// Distinct elements with a word of length ≤ n, ascending. Walks the
    /// accepted words that do not end in padding.
    pub fn enumerate(&self, n: u32) -> Result<Vec<Vec<Element>>> {
        let d = &self.dfa;
        let live = d.coreachable();
        let radix = d.tracks().radix().to_vec();
        let pad = d.tracks().pad_letter();
        let succ: Vec<Vec<(Vec<u32>, u32)>> = (0..d.states() as u32)
            .map(|q| d.mdd().enumerate(d.trans_node(q), &radix).into_iter().filter(|(_, t)| live[*t as usize]).collect())
            .collect();
        let mut out = alloc::collections::BTreeSet::new();
        let mut word: Vec<Vec<u32>> = Vec::new();
        let mut budget = self.caps.search.saturating_mul(64);
        if live[d.initial() as usize] {
            self.walk(d.initial(), n as usize, &succ, &pad, &mut word, &mut out, &mut budget)?;
        }
        Ok(out.into_iter().collect())
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        q: u32,
        n: usize,
        succ: &[Vec<(Vec<u32>, u32)>],
        pad: &[u32],
        word: &mut Vec<Vec<u32>>,
        out: &mut alloc::collections::BTreeSet<Vec<Element>>,
        budget: &mut usize,
    ) -> Result<()> {
        if *budget == 0 {
            return Err(Error::CapExceeded("enumeration visited too many words".into()));
        }
        *budget -= 1;
        if self.dfa.is_final(q) && word.last().is_none_or(|l| l.as_slice() != pad) {
            let tuple = (0..self.arity)
                .map(|i| {
                    let w: Vec<usize> = word.iter().map(|l| l[i] as usize).collect();
                    self.span.eval(&w)
                })
                .collect();
            out.insert(tuple);
        }
        if word.len() == n {
            return Ok(());
        }
        for (l, t) in &succ[q as usize] {
            word.push(l.clone());
            self.walk(*t, n, succ, pad, word, out, budget)?;
            word.pop();
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.dfa.is_empty()
    }

    /// Canonical certificate of the set over its current spanning set.
    pub fn canonical_key(&self) -> Vec<u32> {
        self.dfa.canonical_key()
    }

    pub fn same_set(&self, o: &AutomaticSet) -> Result<bool> {
        let (a, b) = align(self, o)?;
        Ok(a.dfa.equivalent(&b.dfa))
    }

    fn binary(&self, o: &AutomaticSet, op: impl Fn(bool, bool) -> bool) -> Result<AutomaticSet> {
        if self.arity != o.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: o.arity });
        }
        let (a, b) = align(self, o)?;
        let d = a.dfa.product(&b.dfa, op)?;
        Ok(AutomaticSet { dfa: d, ..a })
    }

    pub fn union(&self, o: &AutomaticSet) -> Result<AutomaticSet> {
        self.binary(o, |x, y| x || y)
    }

    pub fn intersect(&self, o: &AutomaticSet) -> Result<AutomaticSet> {
        self.binary(o, |x, y| x && y)
    }

    pub fn difference(&self, o: &AutomaticSet) -> Result<AutomaticSet> {
        self.binary(o, |x, y| x && !y)
    }

    pub fn complement(&self) -> AutomaticSet {
        AutomaticSet { dfa: self.dfa.complement().minimize(), ..self.clone() }
    }

    /// {a + γ : a ∈ A}.
    pub fn translate(&self, gamma: &[Element]) -> Result<AutomaticSet> {
        if gamma.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: gamma.len() });
        }
        let xs: Vec<String> = (0..self.arity).map(|i| format!("x{i}")).collect();
        let ys: Vec<String> = (0..self.arity).map(|i| format!("y{i}")).collect();
        let mut body = Formula::member("A", ys.iter().map(|y| Expr::Var(y.clone())).collect());
        for i in 0..self.arity {
            body = Formula::and(
                Formula::eq(Expr::Var(xs[i].clone()), Expr::add(Expr::Var(ys[i].clone()), Expr::Const(gamma[i].clone()))),
                body,
            );
        }
        for y in ys.iter().rev() {
            body = Formula::exists(y, body);
        }
        let mut sets = BTreeMap::new();
        sets.insert(String::from("A"), self.clone());
        let free: Vec<&str> = xs.iter().map(|s| s.as_str()).collect();
        compile_formula(&self.span, &body, &free, &sets, self.caps)
    }
}

/// Compiles a formula whose set symbols are automatic sets; they are first
/// rebased to `span`.
pub fn compile_formula(
    span: &SpanningSet,
    f: &Formula,
    free: &[&str],
    sets: &BTreeMap<String, AutomaticSet>,
    caps: Caps,
) -> Result<AutomaticSet> {
    let mut table = BTreeMap::new();
    for (name, s) in sets {
        let r = s.rebase(span)?;
        table.insert(name.clone(), (r.arity, r.dfa));
    }
    let mut e = Engine::new(span.power().clone(), span.digits().to_vec(), &table, caps);
    let d = e.compile(f, free)?;
    AutomaticSet::from_canonical(span, free.len(), d, caps)
}

/// Brings two sets to a common spanning set (the first one's, raised to the
/// least common multiple of the exponents).
pub fn align(a: &AutomaticSet, b: &AutomaticSet) -> Result<(AutomaticSet, AutomaticSet)> {
    if a.span == b.span {
        return Ok((a.clone(), b.clone()));
    }
    let t = common_span(&a.span, &b.span, &a.caps)?;
    Ok((a.rebase(&t)?, b.rebase(&t)?))
}

pub fn common_span(a: &SpanningSet, b: &SpanningSet, caps: &Caps) -> Result<SpanningSet> {
    if a == b {
        return Ok(a.clone());
    }
    if a.group() != b.group() {
        return Err(Error::Precondition("spanning sets of different groups".into()));
    }
    let l = a.r().lcm(&b.r());
    power_span(a, l / a.r(), caps)
}

/// Word of a tuple over the spanning digits, padded to equal length.
pub fn tuple_word(span: &SpanningSet, a: &[Element], arity: usize, caps: &Caps) -> Result<Vec<Vec<u32>>> {
    if a.len() != arity {
        return Err(Error::ArityMismatch { expected: arity, got: a.len() });
    }
    let words: Vec<Vec<usize>> = a.iter().map(|x| span.shortest_expansion(x, caps)).collect::<Result<_>>()?;
    let n = words.iter().map(|w| w.len()).max().unwrap_or(0);
    let z = span.zero_index();
    Ok((0..n).map(|k| words.iter().map(|w| *w.get(k).unwrap_or(&z) as u32).collect()).collect())
}

/// Every element with a word of length ≤ n together with one such word,
/// in breadth-first order.
pub fn ball_words(span: &SpanningSet, n: u32) -> Vec<(Element, Vec<usize>)> {
    let g = span.group();
    let fp = span.power();
    let mut seen: crate::FastMap<Element, ()> = crate::FastMap::default();
    seen.insert(g.zero(), ());
    let mut out = vec![(g.zero(), Vec::new())];
    let mut start = 0;
    for _ in 0..n {
        let end = out.len();
        for i in start..end {
            let fb = fp.apply(&out[i].0);
            for (s, d) in span.digits().iter().enumerate() {
                let x = g.add(d, &fb);
                if seen.insert(x.clone(), ()).is_none() {
                    let mut w = vec![s];
                    w.extend(out[i].1.iter().copied());
                    out.push((x, w));
                }
            }
        }
        start = end;
    }
    out
}

/// Full-preimage DFA over `target` for the set [L]_{F^s}, where `src`
/// reads `arity` tracks over `digits` and is closed under padding.
fn convert(digits: &[Element], s: u32, arity: usize, src: &Dfa, target: &SpanningSet, caps: &Caps) -> Result<Dfa> {
    transcode(target.group(), digits, s, arity, src, target.digits(), target.r(), caps).map_err(|e| carry_error(e, target, caps))
}

/// The words over `tgt` (read with F^r) whose values lie in the set
/// [L]_{F^s}, where `src` reads `arity` tracks over `src_digits` and is
/// closed under padding. Both digit lists must contain 0.
#[allow(clippy::too_many_arguments)]
pub fn transcode(g: &Group, src_digits: &[Element], s: u32, arity: usize, src: &Dfa, tgt: &[Element], r: u32, caps: &Caps) -> Result<Dfa> {
    let l = s.lcm(&r);
    let (bs, bt) = ((l / s) as usize, (l / r) as usize);
    let m = arity;
    let blocked = if bs == 1 { src.clone() } else { src.blocked(bs) };
    let mut alphabets = vec![src_digits.to_vec(); bs * m];
    alphabets.extend(core::iter::repeat_n(tgt.to_vec(), bt * m));
    let equations = (0..m)
        .map(|i| {
            let mut terms: Vec<Term> = (0..bs).map(|j| Term::shifted(j * m + i, 1, s * j as u32)).collect();
            terms.extend((0..bt).map(|j| Term::shifted(bs * m + j * m + i, -1, r * j as u32)));
            Equation { terms, constant: g.zero() }
        })
        .collect();
    let sys = CarrySystem { alphabets, equations };
    let (rel, _) = sys.automaton(&g.power(l), caps.carry)?;
    let map: Vec<usize> = (0..bs * m).collect();
    let lifted = blocked.cylindrify(rel.tracks(), &map)?;
    let both = rel.intersect(&lifted)?;
    let proj = both.project(&map, true)?;
    let zero = g.zero();
    let pad = tgt.iter().position(|d| *d == zero).ok_or_else(|| Error::AlphabetMismatch("digit list lacks 0".into()))?;
    let base = Tracks::uniform(m, tgt.len() as u32, pad as u32);
    let out = if bt == 1 { proj } else { proj.unblocked(&base, bt)? };
    Ok(out.minimize())
}

impl AutomaticSet {
    /// The words over `letters` (which must contain 0), read with F^s,
    /// whose values lie in the set.
    pub fn letter_language(&self, letters: &[Element], s: u32) -> Result<Dfa> {
        transcode(self.group(), self.span.digits(), self.span.r(), self.arity, &self.dfa, letters, s, &self.caps)
            .map_err(|e| carry_error(e, &self.span, &self.caps))
    }
}

/// Fills in the carry bound estimate from the target digits.
pub(crate) fn carry_error(e: Error, span: &SpanningSet, caps: &Caps) -> Error {
    match e {
        Error::CarryCapExceeded { cap, .. } => {
            let lf = crate::spanning::LengthFunction::new(span, caps);
            let n = span.digits().iter().filter_map(|d| lf.length(d).ok()).max().unwrap_or(0) as u64 + 1;
            Error::CarryCapExceeded { cap, bound: carry::bound_note(n) }
        }
        e => e,
    }
}
