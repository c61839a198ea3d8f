//! Sparsity: polynomial growth, decided on the trim automaton.
//!
//! A regular language is sparse exactly when no live state lies on two
//! distinct cycles, i.e. every strongly connected component of the trim DFA
//! is a single vertex or a simple cycle.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use super::count::transfer;
use super::dfa::Dfa;
use super::mdd::{Mdd, NodeId};
use super::nfa::Nfa;
use super::Tracks;
use crate::error::{Error, Result};
use crate::FastMap;

pub type Letter = Vec<u32>;
pub type Word = Vec<Letter>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sparsity {
    /// Largest number of cyclic components on one accepting path.
    Sparse { degree: usize },
    /// u v* z and u w* z are accepted, v and w start with different letters
    /// and both return to `state`, so the language grows exponentially.
    NotSparse { state: u32, u: Word, v: Word, w: Word, z: Word },
}

/// v₀ w₁* v₁ ⋯ w_n* v_n.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SimpleSparseTerm {
    pub v: Vec<Word>,
    pub w: Vec<Word>,
}

impl SimpleSparseTerm {
    pub fn stars(&self) -> usize {
        self.w.len()
    }

    /// The word with every star taken `k[i]` times.
    pub fn instance(&self, k: &[usize]) -> Word {
        let mut out = self.v[0].clone();
        for (i, w) in self.w.iter().enumerate() {
            for _ in 0..k[i] {
                out.extend(w.iter().cloned());
            }
            out.extend(self.v[i + 1].iter().cloned());
        }
        out
    }
}

/// Trim graph: live states and their live successor multiplicities.
pub(crate) struct Trim {
    pub live: Vec<bool>,
    pub succ: Vec<Vec<(u32, BigUint)>>,
}

pub(crate) fn trim(d: &Dfa) -> Trim {
    let n = d.states();
    let mut reach = vec![false; n];
    for q in d.reachable() {
        reach[q as usize] = true;
    }
    let co = d.coreachable();
    let live: Vec<bool> = (0..n).map(|q| reach[q] && co[q]).collect();
    let t = transfer(d);
    let succ = (0..n)
        .map(|q| if live[q] { t[q].iter().filter(|(s, _)| live[*s as usize]).cloned().collect() } else { Vec::new() })
        .collect();
    Trim { live, succ }
}

/// Strongly connected components (Kosaraju), listed in topological order
/// of the condensation (sources first). Returns (component of each node,
/// number of components); dead nodes get `u32::MAX`.
pub(crate) fn scc(n: usize, live: &[bool], adj: &[Vec<u32>]) -> (Vec<u32>, usize) {
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if !live[s] || seen[s] {
            continue;
        }
        let mut stack: Vec<(u32, usize)> = vec![(s as u32, 0)];
        seen[s] = true;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < adj[v as usize].len() {
                let w = adj[v as usize][*i];
                *i += 1;
                if live[w as usize] && !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    let mut radj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in 0..n {
        if live[v] {
            for &w in &adj[v] {
                if live[w as usize] {
                    radj[w as usize].push(v as u32);
                }
            }
        }
    }
    let mut comp = vec![u32::MAX; n];
    let mut c = 0u32;
    for &s in order.iter().rev() {
        if comp[s as usize] != u32::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s as usize] = c;
        while let Some(v) = stack.pop() {
            for &w in &radj[v as usize] {
                if comp[w as usize] == u32::MAX {
                    comp[w as usize] = c;
                    stack.push(w);
                }
            }
        }
        c += 1;
    }
    (comp, c as usize)
}

/// Up to `limit` letters (ascending) leading from a diagram to leaves
/// satisfying `pred`.
pub(crate) fn letters_to(mdd: &Mdd, id: NodeId, radix: &[u32], pred: &impl Fn(u32) -> bool, limit: usize) -> Vec<Letter> {
    let mut out = Vec::new();
    let mut letter = vec![0u32; radix.len()];
    let mut ok: FastMap<NodeId, bool> = FastMap::default();
    letters_rec(mdd, id, 0, radix, pred, limit, &mut letter, &mut out, &mut ok);
    out
}

#[allow(clippy::too_many_arguments)]
fn letters_rec(
    mdd: &Mdd,
    id: NodeId,
    t: usize,
    radix: &[u32],
    pred: &impl Fn(u32) -> bool,
    limit: usize,
    letter: &mut Vec<u32>,
    out: &mut Vec<Letter>,
    ok: &mut FastMap<NodeId, bool>,
) {
    if out.len() >= limit || !can_reach(mdd, id, pred, ok) {
        return;
    }
    if t == radix.len() {
        out.push(letter.clone());
        return;
    }
    for d in 0..radix[t] {
        letter[t] = d;
        letters_rec(mdd, mdd.child(id, t as u32, d), t + 1, radix, pred, limit, letter, out, ok);
        if out.len() >= limit {
            return;
        }
    }
}

fn can_reach(mdd: &Mdd, id: NodeId, pred: &impl Fn(u32) -> bool, ok: &mut FastMap<NodeId, bool>) -> bool {
    if let Some(&b) = ok.get(&id) {
        return b;
    }
    let b = match mdd.leaf_value(id) {
        Some(v) => pred(v),
        None => mdd.kids(id).iter().any(|&c| can_reach(mdd, c, pred, ok)),
    };
    ok.insert(id, b);
    b
}

/// Shortest word from `from` to a state satisfying `goal`, moving only
/// through states accepted by `allowed`.
fn path(d: &Dfa, from: u32, allowed: &impl Fn(u32) -> bool, goal: &impl Fn(u32) -> bool) -> Option<Word> {
    let n = d.states();
    let mut parent: Vec<Option<(u32, Letter)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from as usize] = true;
    let mut queue = VecDeque::from([from]);
    let radix = d.tracks().radix().to_vec();
    while let Some(q) = queue.pop_front() {
        if goal(q) {
            let mut word = Vec::new();
            let mut cur = q;
            while let Some((p, l)) = parent[cur as usize].clone() {
                word.push(l);
                cur = p;
            }
            word.reverse();
            return Some(word);
        }
        for s in d.successors(q) {
            if seen[s as usize] || !allowed(s) {
                continue;
            }
            seen[s as usize] = true;
            let l = letters_to(&d.mdd, d.trans_node(q), &radix, &|v| v == s, 1).remove(0);
            parent[s as usize] = Some((q, l));
            queue.push_back(s);
        }
    }
    None
}

fn cyc_flags(t: &Trim, comp: &[u32], ncomp: usize) -> (Vec<usize>, Vec<BigUint>) {
    let mut size = vec![0usize; ncomp];
    let mut internal = vec![BigUint::from(0u32); ncomp];
    for (q, c) in comp.iter().enumerate() {
        if *c == u32::MAX {
            continue;
        }
        size[*c as usize] += 1;
        for (s, m) in &t.succ[q] {
            if comp[*s as usize] == *c {
                internal[*c as usize] += m;
            }
        }
    }
    (size, internal)
}

pub fn is_sparse(d: &Dfa) -> Sparsity {
    let t = trim(d);
    let n = d.states();
    if !t.live[d.initial() as usize] {
        return Sparsity::Sparse { degree: 0 };
    }
    let adj: Vec<Vec<u32>> = t.succ.iter().map(|v| v.iter().map(|(s, _)| *s).collect()).collect();
    let (comp, ncomp) = scc(n, &t.live, &adj);
    let (size, internal) = cyc_flags(&t, &comp, ncomp);
    for c in 0..ncomp {
        if internal[c] > BigUint::from(size[c]) {
            return witness(d, &t, &comp, c as u32);
        }
    }
    let cyclic: Vec<usize> = (0..ncomp).map(|c| usize::from(internal[c] >= BigUint::one())).collect();
    let mut best: Vec<Option<usize>> = vec![None; ncomp];
    let c0 = comp[d.initial() as usize] as usize;
    best[c0] = Some(cyclic[c0]);
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); ncomp];
    for q in 0..n {
        if comp[q] != u32::MAX {
            members[comp[q] as usize].push(q as u32);
        }
    }
    for c in 0..ncomp {
        let Some(b) = best[c] else { continue };
        for &q in &members[c] {
            for &s in &adj[q as usize] {
                let dc = comp[s as usize] as usize;
                if dc != c {
                    let v = b + cyclic[dc];
                    if best[dc].is_none_or(|x| x < v) {
                        best[dc] = Some(v);
                    }
                }
            }
        }
    }
    let degree = (0..ncomp)
        .filter(|&c| members[c].iter().any(|&q| d.is_final(q)))
        .filter_map(|c| best[c])
        .max()
        .unwrap_or(0);
    Sparsity::Sparse { degree }
}

fn witness(d: &Dfa, t: &Trim, comp: &[u32], c: u32) -> Sparsity {
    let radix = d.tracks().radix().to_vec();
    let in_c = |s: u32| comp[s as usize] == c;
    let q = (0..d.states() as u32)
        .find(|&q| {
            in_c(q) && t.succ[q as usize].iter().filter(|(s, _)| in_c(*s)).fold(BigUint::from(0u32), |a, (_, m)| a + m)
                >= BigUint::from(2u32)
        })
        .expect("component with surplus edges");
    let two = letters_to(&d.mdd, d.trans_node(q), &radix, &|v| comp[v as usize] == c, 2);
    let back = |l: &Letter| -> Word {
        let s = d.step(q, l);
        let mut w = vec![l.clone()];
        w.extend(path(d, s, &in_c, &|x| x == q).expect("strongly connected"));
        w
    };
    let v = back(&two[0]);
    let w = back(&two[1]);
    let u = path(d, d.initial(), &|s| t.live[s as usize], &|x| x == q).expect("reachable");
    let z = path(d, q, &|s| t.live[s as usize], &|x| d.is_final(x)).expect("coreachable");
    Sparsity::NotSparse { state: q, u, v, w, z }
}

/// Union of simple sparse terms equal to the language. Fails if the language
/// is not sparse or more than `cap` terms arise.
pub fn sparse_decompose(d: &Dfa, cap: usize) -> Result<Vec<SimpleSparseTerm>> {
    if let Sparsity::NotSparse { .. } = is_sparse(d) {
        return Err(Error::Precondition("language is not sparse".into()));
    }
    let t = trim(d);
    if !t.live[d.initial() as usize] {
        return Ok(Vec::new());
    }
    let n = d.states();
    let adj: Vec<Vec<u32>> = t.succ.iter().map(|v| v.iter().map(|(s, _)| *s).collect()).collect();
    let (comp, _) = scc(n, &t.live, &adj);
    let radix = d.tracks().radix().to_vec();
    // Per live state: every letter to a live successor, ascending.
    let mut edges: Vec<Vec<(Letter, u32)>> = vec![Vec::new(); n];
    for q in 0..n {
        if !t.live[q] {
            continue;
        }
        for s in d.successors(q as u32) {
            if !t.live[s as usize] {
                continue;
            }
            for l in letters_to(&d.mdd, d.trans_node(q as u32), &radix, &|v| v == s, cap.saturating_add(1)) {
                edges[q].push((l, s));
            }
        }
        edges[q].sort();
    }
    let mut out = Vec::new();
    let mut term = SimpleSparseTerm { v: vec![Vec::new()], w: Vec::new() };
    decompose_rec(d, &comp, &edges, d.initial(), &mut term, &mut out, cap)?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn decompose_rec(
    d: &Dfa,
    comp: &[u32],
    edges: &[Vec<(Letter, u32)>],
    e: u32,
    term: &mut SimpleSparseTerm,
    out: &mut Vec<SimpleSparseTerm>,
    cap: usize,
) -> Result<()> {
    let c = comp[e as usize];
    let internal: Vec<&(Letter, u32)> = edges[e as usize].iter().filter(|(_, s)| comp[*s as usize] == c).collect();
    // Positions around the cycle from the entry state with the partial word.
    let mut positions: Vec<(u32, Word)> = vec![(e, Vec::new())];
    let cyclic = !internal.is_empty();
    if cyclic {
        let mut cycle = Vec::new();
        let mut cur = e;
        loop {
            let (l, s) = edges[cur as usize].iter().find(|(_, s)| comp[*s as usize] == c).expect("simple cycle").clone();
            cycle.push(l);
            cur = s;
            if cur == e {
                break;
            }
            positions.push((cur, cycle.clone()));
        }
        term.w.push(cycle);
        term.v.push(Vec::new());
    }
    for (x, partial) in positions {
        let vlen = term.v.last().unwrap().len();
        term.v.last_mut().unwrap().extend(partial.iter().cloned());
        if d.is_final(x) {
            if out.len() >= cap {
                return Err(Error::CapExceeded(alloc::format!("more than {cap} sparse terms")));
            }
            out.push(term.clone());
        }
        for (l, s) in &edges[x as usize] {
            if comp[*s as usize] == c {
                continue;
            }
            term.v.last_mut().unwrap().push(l.clone());
            decompose_rec(d, comp, edges, *s, term, out, cap)?;
            term.v.last_mut().unwrap().pop();
        }
        term.v.last_mut().unwrap().truncate(vlen);
    }
    if cyclic {
        term.w.pop();
        term.v.pop();
    }
    Ok(())
}

/// Automaton accepting exactly one word.
pub fn word_dfa(tracks: &Tracks, w: &[Letter]) -> Result<Dfa> {
    let edges: Vec<(u32, Letter, u32)> = w.iter().enumerate().map(|(i, l)| (i as u32, l.clone(), i as u32 + 1)).collect();
    let mut finish = vec![false; w.len() + 1];
    finish[w.len()] = true;
    Nfa::from_edges(tracks.clone(), w.len() + 1, vec![0], finish, &edges).determinize()
}

/// Automaton for one term.
pub fn term_dfa(tracks: &Tracks, term: &SimpleSparseTerm) -> Result<Dfa> {
    if term.v.len() != term.w.len() + 1 {
        return Err(Error::Parse("a sparse term needs one more fixed word than starred words".into()));
    }
    let mut acc = word_dfa(tracks, &term.v[0])?;
    for (i, w) in term.w.iter().enumerate() {
        let star = Nfa::star(&word_dfa(tracks, w)?).determinize()?;
        acc = Nfa::concat(&acc, &star)?.determinize()?.minimize();
        acc = Nfa::concat(&acc, &word_dfa(tracks, &term.v[i + 1])?)?.determinize()?.minimize();
    }
    Ok(acc)
}

/// Automaton for a union of terms.
pub fn terms_to_dfa(tracks: &Tracks, terms: &[SimpleSparseTerm]) -> Result<Dfa> {
    let mut acc = Dfa::empty(tracks.clone());
    for t in terms {
        acc = acc.union(&term_dfa(tracks, t)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lang(states: usize, finish: &[usize], f: impl Fn(u32, u32) -> u32) -> Dfa {
        let mut fin = vec![false; states];
        for &q in finish {
            fin[q] = true;
        }
        Dfa::from_fn(Tracks::single(2, 0), states, 0, fin, move |q, l| f(q, l[0]))
    }

    #[test]
    fn zero_star_one() {
        let d = lang(3, &[1], |q, c| match (q, c) {
            (0, 0) => 0,
            (0, 1) => 1,
            _ => 2,
        });
        assert_eq!(is_sparse(&d), Sparsity::Sparse { degree: 1 });
        let terms = sparse_decompose(&d, 100).unwrap();
        assert_eq!(terms, vec![SimpleSparseTerm { v: vec![vec![], vec![vec![1]]], w: vec![vec![vec![0]]] }]);
        assert!(terms_to_dfa(d.tracks(), &terms).unwrap().equivalent(&d));
    }

    #[test]
    fn full_language_is_not_sparse() {
        let d = lang(1, &[0], |_, _| 0);
        match is_sparse(&d) {
            Sparsity::NotSparse { v, w, .. } => assert_ne!(v[0], w[0]),
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn zero_one_zero_stars() {
        // 0*1*0*
        let d = lang(4, &[0, 1, 2], |q, c| match (q, c) {
            (0, 0) => 0,
            (0, 1) => 1,
            (1, 1) => 1,
            (1, 0) => 2,
            (2, 0) => 2,
            _ => 3,
        });
        assert_eq!(is_sparse(&d), Sparsity::Sparse { degree: 3 });
        let terms = sparse_decompose(&d, 100).unwrap();
        assert!(terms_to_dfa(d.tracks(), &terms).unwrap().equivalent(&d));
        assert!(terms.iter().any(|t| t.stars() == 3));
    }
}
