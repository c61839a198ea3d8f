//! Nondeterministic automata. Diagram leaves are ids of interned state sets.

use alloc::vec;
use alloc::vec::Vec;

use super::dfa::Dfa;
use super::mdd::{Mdd, NodeId};
use super::Tracks;
use crate::error::{Error, Result};
use crate::FastMap;

/// Default limit on subset-construction states.
pub const DETERMINIZE_CAP: usize = 2_000_000;

/// Interned sorted state sets; id 0 is the empty set.
#[derive(Clone, Debug)]
pub struct SetTable {
    sets: Vec<Vec<u32>>,
    index: FastMap<Vec<u32>, u32>,
    unions: FastMap<(u32, u32), u32>,
}

impl Default for SetTable {
    fn default() -> Self {
        let mut t = SetTable { sets: Vec::new(), index: FastMap::default(), unions: FastMap::default() };
        t.intern(Vec::new());
        t
    }
}

impl SetTable {
    pub fn intern(&mut self, v: Vec<u32>) -> u32 {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = self.sets.len() as u32;
        self.sets.push(v.clone());
        self.index.insert(v, i);
        i
    }

    pub fn get(&self, id: u32) -> &[u32] {
        &self.sets[id as usize]
    }

    pub fn union(&mut self, a: u32, b: u32) -> u32 {
        if a == b || b == 0 {
            return a;
        }
        if a == 0 {
            return b;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&r) = self.unions.get(&key) {
            return r;
        }
        let (x, y) = (&self.sets[a as usize], &self.sets[b as usize]);
        let mut out = Vec::with_capacity(x.len() + y.len());
        let (mut i, mut j) = (0, 0);
        while i < x.len() || j < y.len() {
            if j == y.len() || (i < x.len() && x[i] < y[j]) {
                out.push(x[i]);
                i += 1;
            } else if i == x.len() || y[j] < x[i] {
                out.push(y[j]);
                j += 1;
            } else {
                out.push(x[i]);
                i += 1;
                j += 1;
            }
        }
        let r = self.intern(out);
        self.unions.insert(key, r);
        r
    }
}

#[derive(Clone, Debug)]
pub struct Nfa {
    pub(crate) tracks: Tracks,
    pub(crate) mdd: Mdd,
    pub(crate) trans: Vec<NodeId>,
    pub(crate) sets: SetTable,
    pub(crate) initial: Vec<u32>,
    pub(crate) finish: Vec<bool>,
}

impl Nfa {
    pub fn tracks(&self) -> &Tracks {
        &self.tracks
    }

    pub fn states(&self) -> usize {
        self.trans.len()
    }

    /// Builds from explicit letter-labelled edges.
    pub fn from_edges(tracks: Tracks, states: usize, initial: Vec<u32>, finish: Vec<bool>, edges: &[(u32, Vec<u32>, u32)]) -> Nfa {
        let mut sets = SetTable::default();
        let mut mdd = Mdd::new();
        let mut per_state: Vec<Vec<(&[u32], u32)>> = vec![Vec::new(); states];
        for (p, l, q) in edges {
            per_state[*p as usize].push((l.as_slice(), *q));
        }
        let radix = tracks.radix().to_vec();
        let trans = per_state
            .into_iter()
            .map(|es| {
                let mut all: Vec<(&[u32], u32)> = es;
                all.sort();
                edge_trie(&mut mdd, &mut sets, &radix, 0, &all)
            })
            .collect();
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        Nfa { tracks, mdd, trans, sets, initial, finish }
    }

    pub fn from_dfa(d: &Dfa) -> Nfa {
        let mut sets = SetTable::default();
        let mut mdd = Mdd::new();
        let mut memo = FastMap::default();
        let trans = d.trans.iter().map(|&t| mdd.import(&d.mdd, t, None, &mut |q| sets.intern(vec![q]), &mut memo)).collect();
        Nfa { tracks: d.tracks.clone(), mdd, trans, sets, initial: vec![d.initial], finish: d.finish.clone() }
    }

    pub(crate) fn project_from(d: &Dfa, erased: &[bool], kept: &[usize], finish: Vec<bool>) -> Nfa {
        let mut n = Nfa::from_dfa(d);
        let mut track_map = vec![u32::MAX; erased.len()];
        for (i, &t) in kept.iter().enumerate() {
            track_map[t] = i as u32;
        }
        let mut memo = FastMap::default();
        let mut jmemo = FastMap::default();
        let sets = &mut n.sets;
        let trans: Vec<NodeId> = n
            .trans
            .iter()
            .map(|&t| n.mdd.erase(t, erased, &track_map, &mut |a, b| sets.union(a, b), &mut memo, &mut jmemo))
            .collect();
        n.trans = trans;
        n.tracks = d.tracks.select(kept);
        n.finish = finish;
        n
    }

    /// Subset construction; every subset reachable from the initial set
    /// becomes one state (the empty subset is the dead state).
    pub fn determinize(&self) -> Result<Dfa> {
        self.determinize_capped(DETERMINIZE_CAP)
    }

    pub fn determinize_capped(&self, cap: usize) -> Result<Dfa> {
        let mut work = self.mdd.clone();
        let mut sets = self.sets.clone();
        let mut jmemo = FastMap::default();
        let start = self.initial.iter().fold(0u32, |acc, &q| {
            let s = sets.intern(vec![q]);
            sets.union(acc, s)
        });
        let mut out = Mdd::new();
        let mut subsets: Vec<u32> = vec![start];
        let mut index: FastMap<u32, u32> = FastMap::default();
        index.insert(start, 0);
        let mut trans = Vec::new();
        let mut imemo: FastMap<NodeId, NodeId> = FastMap::default();
        let mut i = 0;
        let dead = work.leaf(0);
        while i < subsets.len() {
            let members: Vec<u32> = sets.get(subsets[i]).to_vec();
            let mut acc = dead;
            for q in members {
                let t = self.trans[q as usize];
                acc = work.apply2_in(acc, t, &mut |a, b| sets.union(a, b), &mut jmemo);
            }
            let node = out.import(
                &work,
                acc,
                None,
                &mut |s| {
                    let len = subsets.len() as u32;
                    *index.entry(s).or_insert_with(|| {
                        subsets.push(s);
                        len
                    })
                },
                &mut imemo,
            );
            trans.push(node);
            if subsets.len() > cap {
                return Err(Error::CapExceeded(alloc::format!("subset construction exceeded {cap} states")));
            }
            i += 1;
        }
        let finish = subsets.iter().map(|&s| sets.get(s).iter().any(|&q| self.finish[q as usize])).collect();
        Ok(Dfa::from_parts(self.tracks.clone(), out, trans, finish, 0))
    }

    /// Imports the transitions of `d` shifted by `offset`.
    fn import_dfa(&mut self, d: &Dfa, offset: u32) -> Vec<NodeId> {
        let mut memo = FastMap::default();
        let sets = &mut self.sets;
        d.trans.iter().map(|&t| self.mdd.import(&d.mdd, t, None, &mut |q| sets.intern(vec![q + offset]), &mut memo)).collect()
    }

    fn union_nodes(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let sets = &mut self.sets;
        let mut memo = FastMap::default();
        self.mdd.apply2_in(a, b, &mut |x, y| sets.union(x, y), &mut memo)
    }

    fn empty_over(tracks: &Tracks) -> Nfa {
        Nfa { tracks: tracks.clone(), mdd: Mdd::new(), trans: Vec::new(), sets: SetTable::default(), initial: Vec::new(), finish: Vec::new() }
    }

    /// L(a) L(b).
    pub fn concat(a: &Dfa, b: &Dfa) -> Result<Nfa> {
        if a.tracks != b.tracks {
            return Err(Error::AlphabetMismatch("concatenation over different alphabets".into()));
        }
        let mut n = Nfa::empty_over(&a.tracks);
        let na = a.states() as u32;
        let ta = n.import_dfa(a, 0);
        let tb = n.import_dfa(b, na);
        let b0 = tb[b.initial as usize];
        let mut trans = Vec::with_capacity(ta.len() + tb.len());
        for (q, &t) in ta.iter().enumerate() {
            trans.push(if a.finish[q] { n.union_nodes(t, b0) } else { t });
        }
        trans.extend(tb.iter().copied());
        n.trans = trans;
        n.initial = vec![a.initial];
        if a.finish[a.initial as usize] {
            n.initial.push(b.initial + na);
        }
        let b_eps = b.finish[b.initial as usize];
        n.finish = a.finish.iter().map(|&f| f && b_eps).chain(b.finish.iter().copied()).collect();
        Ok(n)
    }

    /// L(a)*.
    pub fn star(a: &Dfa) -> Nfa {
        let mut n = Nfa::empty_over(&a.tracks);
        let ta = n.import_dfa(a, 0);
        let a0 = ta[a.initial as usize];
        let mut trans = Vec::with_capacity(ta.len() + 1);
        for (q, &t) in ta.iter().enumerate() {
            trans.push(if a.finish[q] { n.union_nodes(t, a0) } else { t });
        }
        trans.push(a0);
        n.trans = trans;
        n.initial = vec![a.states() as u32];
        n.finish = a.finish.iter().copied().chain([true]).collect();
        n
    }
}

fn edge_trie(mdd: &mut Mdd, sets: &mut SetTable, radix: &[u32], t: usize, edges: &[(&[u32], u32)]) -> NodeId {
    if t == radix.len() {
        let mut v: Vec<u32> = edges.iter().map(|e| e.1).collect();
        v.sort_unstable();
        v.dedup();
        let s = sets.intern(v);
        return mdd.leaf(s);
    }
    let kids: Vec<NodeId> = (0..radix[t])
        .map(|d| {
            let sub: Vec<(&[u32], u32)> = edges.iter().filter(|e| e.0[t] == d).copied().collect();
            edge_trie(mdd, sets, radix, t + 1, &sub)
        })
        .collect();
    mdd.branch(t as u32, kids)
}
