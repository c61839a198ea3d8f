//! Complete deterministic automata with diagram-labelled transitions.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::hash::Hash;

use super::mdd::{Mdd, NodeId};
use super::nfa::Nfa;
use super::Tracks;
use crate::error::{Error, Result};
use crate::FastMap;

#[derive(Clone, Debug)]
pub struct Dfa {
    pub(crate) tracks: Tracks,
    pub(crate) mdd: Mdd,
    pub(crate) trans: Vec<NodeId>,
    pub(crate) finish: Vec<bool>,
    pub(crate) initial: u32,
}

/// Incremental construction of a DFA whose states are keyed by `K`.
/// Each state's transition diagram is built in `mdd`, with leaves obtained
/// from [`Builder::state`].
pub struct Builder<K> {
    pub mdd: Mdd,
    keys: Vec<K>,
    index: FastMap<K, u32>,
    cap: usize,
    overflow: bool,
}

impl<K: Clone + Eq + Hash> Builder<K> {
    /// Leaf id for the state with this key, registering it if new.
    pub fn state(&mut self, k: K) -> u32 {
        if let Some(&i) = self.index.get(&k) {
            return i;
        }
        let i = self.keys.len() as u32;
        if self.keys.len() >= self.cap {
            self.overflow = true;
        }
        self.keys.push(k.clone());
        self.index.insert(k, i);
        i
    }

    /// Leaf node for the state with this key.
    pub fn target(&mut self, k: K) -> NodeId {
        let s = self.state(k);
        self.mdd.leaf(s)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

/// Breadth-first construction from an initial key. `trans` builds the
/// diagram of a state; `accept` decides its finality. Fails with a cap error
/// when more than `cap` states appear.
pub fn build<K: Clone + Eq + Hash>(
    tracks: Tracks,
    init: K,
    cap: usize,
    mut accept: impl FnMut(&K) -> bool,
    mut trans: impl FnMut(&K, &mut Builder<K>) -> Result<NodeId>,
) -> Result<(Dfa, Vec<K>)> {
    let mut b = Builder { mdd: Mdd::new(), keys: Vec::new(), index: FastMap::default(), cap, overflow: false };
    b.state(init);
    let mut t = Vec::new();
    let mut i = 0;
    while i < b.keys.len() {
        let k = b.keys[i].clone();
        let node = trans(&k, &mut b)?;
        if b.overflow {
            return Err(Error::CapExceeded(alloc::format!("automaton construction exceeded {cap} states")));
        }
        t.push(node);
        i += 1;
    }
    let finish = b.keys.iter().map(&mut accept).collect();
    Ok((Dfa { tracks, mdd: b.mdd, trans: t, finish, initial: 0 }, b.keys))
}

impl Dfa {
    pub fn tracks(&self) -> &Tracks {
        &self.tracks
    }

    pub fn states(&self) -> usize {
        self.trans.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn is_final(&self, q: u32) -> bool {
        self.finish[q as usize]
    }

    pub fn finish(&self) -> &[bool] {
        &self.finish
    }

    pub fn mdd(&self) -> &Mdd {
        &self.mdd
    }

    pub fn trans_node(&self, q: u32) -> NodeId {
        self.trans[q as usize]
    }

    /// A DFA from explicit parts (transition diagrams must live in `mdd`).
    pub fn from_parts(tracks: Tracks, mdd: Mdd, trans: Vec<NodeId>, finish: Vec<bool>, initial: u32) -> Dfa {
        Dfa { tracks, mdd, trans, finish, initial }
    }

    /// Accepts every word.
    pub fn universal(tracks: Tracks) -> Dfa {
        let mut mdd = Mdd::new();
        let l = mdd.leaf(0);
        Dfa { tracks, mdd, trans: vec![l], finish: vec![true], initial: 0 }
    }

    /// Accepts nothing.
    pub fn empty(tracks: Tracks) -> Dfa {
        let mut d = Dfa::universal(tracks);
        d.finish[0] = false;
        d
    }

    /// Accepts exactly the words consisting of padding letters (including ε).
    pub fn pad_only(tracks: Tracks) -> Dfa {
        let pad = tracks.pad_letter();
        Dfa::from_fn(tracks, 2, 0, vec![true, false], |q, l| if q == 0 && l == pad.as_slice() { 0 } else { 1 })
    }

    /// A DFA given by a transition function, enumerating every letter.
    /// Only for small alphabets.
    pub fn from_fn(tracks: Tracks, states: usize, initial: u32, finish: Vec<bool>, f: impl Fn(u32, &[u32]) -> u32) -> Dfa {
        let mut mdd = Mdd::new();
        let radix = tracks.radix().to_vec();
        let trans = (0..states as u32)
            .map(|q| {
                let mut letter = vec![0u32; radix.len()];
                build_from_fn(&mut mdd, &radix, 0, &mut letter, &|l| f(q, l))
            })
            .collect();
        Dfa { tracks, mdd, trans, finish, initial }
    }

    pub fn step(&self, q: u32, letter: &[u32]) -> u32 {
        self.mdd.eval(self.trans[q as usize], letter)
    }

    pub fn run(&self, word: &[Vec<u32>]) -> u32 {
        word.iter().fold(self.initial, |q, l| self.step(q, l))
    }

    pub fn accepts(&self, word: &[Vec<u32>]) -> bool {
        self.finish[self.run(word) as usize]
    }

    /// Successor states of q (distinct, in letter order of first appearance).
    pub fn successors(&self, q: u32) -> Vec<u32> {
        self.mdd.leaves(self.trans[q as usize])
    }

    /// States reachable from the initial state, in breadth-first order.
    pub fn reachable(&self) -> Vec<u32> {
        let mut seen = vec![false; self.states()];
        let mut order = vec![self.initial];
        seen[self.initial as usize] = true;
        let mut i = 0;
        while i < order.len() {
            for s in self.successors(order[i]) {
                if !seen[s as usize] {
                    seen[s as usize] = true;
                    order.push(s);
                }
            }
            i += 1;
        }
        order
    }

    /// States from which some final state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.states();
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        for q in 0..n as u32 {
            for s in self.successors(q) {
                preds[s as usize].push(q);
            }
        }
        let mut live = self.finish.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&q| live[q as usize]).collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q as usize] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    pub fn is_empty(&self) -> bool {
        !self.reachable().iter().any(|&q| self.finish[q as usize])
    }

    /// A shortest accepted word, least letters first among those.
    pub fn shortest_accepted(&self) -> Option<Vec<Vec<u32>>> {
        let n = self.states();
        let mut parent: Vec<Option<(u32, Vec<u32>)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[self.initial as usize] = true;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            if self.finish[q as usize] {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((p, l)) = parent[cur as usize].clone() {
                    word.push(l);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            let mut succ: Vec<(Vec<u32>, u32)> = self
                .successors(q)
                .into_iter()
                .filter(|s| !seen[*s as usize])
                .map(|s| (self.mdd.least_letter_to(self.trans[q as usize], self.tracks.len(), &|v| v == s).unwrap(), s))
                .collect();
            succ.sort();
            for (l, s) in succ {
                if !seen[s as usize] {
                    seen[s as usize] = true;
                    parent[s as usize] = Some((q, l));
                    queue.push_back(s);
                }
            }
        }
        None
    }

    /// Minimal complete DFA, states numbered canonically (breadth-first from
    /// the initial state, successors in letter order), so equal languages give
    /// identical automata.
    pub fn minimize(&self) -> Dfa {
        let reach = self.reachable();
        let n = reach.len();
        let mut pos = vec![u32::MAX; self.states()];
        for (i, &q) in reach.iter().enumerate() {
            pos[q as usize] = i as u32;
        }
        let mut class: Vec<u32> = reach.iter().map(|&q| self.finish[q as usize] as u32).collect();
        let mut count = {
            let mut c = class.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        // Renumber so that classes are dense.
        if count == 1 {
            class.iter_mut().for_each(|c| *c = 0);
        }
        loop {
            let mut sig = Mdd::new();
            let mut memo = FastMap::default();
            let mut index: FastMap<(u32, NodeId), u32> = FastMap::default();
            let mut next = Vec::with_capacity(n);
            for (i, &q) in reach.iter().enumerate() {
                let node = sig.import(&self.mdd, self.trans[q as usize], None, &mut |l| class[pos[l as usize] as usize], &mut memo);
                let len = index.len() as u32;
                next.push(*index.entry((class[i], node)).or_insert(len));
            }
            let new_count = index.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut rep = vec![u32::MAX; count];
        for (i, &c) in class.iter().enumerate() {
            if rep[c as usize] == u32::MAX {
                rep[c as usize] = reach[i];
            }
        }
        let mut newid = vec![u32::MAX; count];
        let c0 = class[0] as usize;
        newid[c0] = 0;
        let mut order = vec![c0 as u32];
        let mut k = 0;
        while k < order.len() {
            let q = rep[order[k] as usize];
            for l in self.mdd.leaves(self.trans[q as usize]) {
                let cl = class[pos[l as usize] as usize] as usize;
                if newid[cl] == u32::MAX {
                    newid[cl] = order.len() as u32;
                    order.push(cl as u32);
                }
            }
            k += 1;
        }
        let mut mdd = Mdd::new();
        let mut memo = FastMap::default();
        let trans: Vec<NodeId> = order
            .iter()
            .map(|&c| {
                let q = rep[c as usize];
                mdd.import(&self.mdd, self.trans[q as usize], None, &mut |l| newid[class[pos[l as usize] as usize] as usize], &mut memo)
            })
            .collect();
        let finish = order.iter().map(|&c| self.finish[rep[c as usize] as usize]).collect();
        Dfa { tracks: self.tracks.clone(), mdd, trans, finish, initial: 0 }
    }

    /// Serialization of the automaton as stored; equal for equal languages
    /// when both sides are minimized.
    pub fn canonical_key(&self) -> Vec<u32> {
        let mut out = vec![self.states() as u32, self.initial];
        out.extend(self.finish.iter().map(|&f| f as u32));
        for &t in &self.trans {
            self.mdd.serialize(t, &mut out);
        }
        out
    }

    pub fn equivalent(&self, o: &Dfa) -> bool {
        self.tracks == o.tracks && self.minimize().canonical_key() == o.minimize().canonical_key()
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        d.finish.iter_mut().for_each(|f| *f = !*f);
        d
    }

    /// Synchronous product with a boolean combination of acceptance,
    /// minimized.
    pub fn product(&self, o: &Dfa, op: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        if self.tracks != o.tracks {
            return Err(Error::AlphabetMismatch("product of automata over different alphabets".into()));
        }
        let mut mdd = Mdd::new();
        let mut pairs: Vec<(u32, u32)> = vec![(self.initial, o.initial)];
        let mut index: FastMap<(u32, u32), u32> = FastMap::default();
        index.insert((self.initial, o.initial), 0);
        let mut memo = FastMap::default();
        let mut trans = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let node = mdd.apply2(
                &self.mdd,
                self.trans[p as usize],
                &o.mdd,
                o.trans[q as usize],
                &mut |x, y| {
                    let len = pairs.len() as u32;
                    *index.entry((x, y)).or_insert_with(|| {
                        pairs.push((x, y));
                        len
                    })
                },
                &mut memo,
            );
            trans.push(node);
            i += 1;
        }
        let finish = pairs.iter().map(|&(p, q)| op(self.finish[p as usize], o.finish[q as usize])).collect();
        Ok(Dfa { tracks: self.tracks.clone(), mdd, trans, finish, initial: 0 }.minimize())
    }

    pub fn intersect(&self, o: &Dfa) -> Result<Dfa> {
        self.product(o, |a, b| a && b)
    }

    pub fn union(&self, o: &Dfa) -> Result<Dfa> {
        self.product(o, |a, b| a || b)
    }

    pub fn difference(&self, o: &Dfa) -> Result<Dfa> {
        self.product(o, |a, b| a && !b)
    }

    /// Reinterpret over a larger alphabet: track i moves to `map[i]`
    /// (strictly increasing); the other tracks are ignored.
    pub fn cylindrify(&self, tracks: &Tracks, map: &[usize]) -> Result<Dfa> {
        if map.len() != self.tracks.len() || map.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::AlphabetMismatch("track map must be strictly increasing and cover every track".into()));
        }
        for (i, &m) in map.iter().enumerate() {
            if m >= tracks.len() || tracks.radix()[m] != self.tracks.radix()[i] || tracks.pad()[m] != self.tracks.pad()[i] {
                return Err(Error::AlphabetMismatch("track shapes differ".into()));
            }
        }
        let tm: Vec<u32> = map.iter().map(|&m| m as u32).collect();
        let mut mdd = Mdd::new();
        let mut memo = FastMap::default();
        let trans = self.trans.iter().map(|&t| mdd.import(&self.mdd, t, Some(&tm), &mut |l| l, &mut memo)).collect();
        Ok(Dfa { tracks: tracks.clone(), mdd, trans, finish: self.finish.clone(), initial: self.initial })
    }

    pub fn with_initial(&self, q: u32) -> Dfa {
        let mut d = self.clone();
        d.initial = q;
        d
    }

    /// Words w with a w accepted.
    pub fn left_quotient(&self, letter: &[u32]) -> Dfa {
        self.with_initial(self.step(self.initial, letter)).minimize()
    }

    /// Marks as final every state from which a word of padding letters
    /// reaches a final state.
    pub fn pad_close(&self) -> Dfa {
        let pad = self.tracks.pad_letter();
        let mut d = self.clone();
        for q in 0..self.states() as u32 {
            let mut cur = q;
            let mut seen = vec![false; self.states()];
            while !seen[cur as usize] {
                if self.finish[cur as usize] {
                    d.finish[q as usize] = true;
                    break;
                }
                seen[cur as usize] = true;
                cur = self.step(cur, &pad);
            }
        }
        d
    }

    /// Accepts ρ when ρ with trailing padding letters removed, extended by
    /// some number of padding letters, is accepted. The result is closed under
    /// adding and removing trailing padding.
    pub fn pad_saturate(&self) -> Dfa {
        let closed = self.pad_close();
        let pad = self.tracks.pad().to_vec();
        let radix = self.tracks.radix().to_vec();
        let (d, _) = build(
            self.tracks.clone(),
            (self.initial, self.initial),
            usize::MAX,
            |&(_, last)| closed.finish[last as usize],
            |&(cur, last), b| {
                let node = self.trans[cur as usize];
                let mut memo_other: FastMap<NodeId, NodeId> = FastMap::default();
                Ok(split_pad(&self.mdd, node, 0, &radix, &pad, b, last, &mut memo_other))
            },
        )
        .expect("no cap");
        d.minimize()
    }

    /// Existential projection erasing the given tracks. With `pad_closure`
    /// the finish set becomes every state that reaches a final state by
    /// letters padded on all kept tracks, so a relation projects to the set
    /// of its first components regardless of the witness length.
    pub fn project(&self, erase: &[usize], pad_closure: bool) -> Result<Dfa> {
        let nt = self.tracks.len();
        if erase.iter().any(|&t| t >= nt) {
            return Err(Error::AlphabetMismatch("projected track out of range".into()));
        }
        let mut erased = vec![false; nt];
        for &t in erase {
            erased[t] = true;
        }
        let kept: Vec<usize> = (0..nt).filter(|&t| !erased[t]).collect();
        let finish = if pad_closure { self.pad_closure_set(&erased) } else { self.finish.clone() };
        let nfa = Nfa::project_from(self, &erased, &kept, finish);
        Ok(nfa.determinize()?.minimize())
    }

    fn pad_closure_set(&self, erased: &[bool]) -> Vec<bool> {
        let n = self.states();
        let fixed: Vec<Option<u32>> =
            (0..self.tracks.len()).map(|t| if erased[t] { None } else { Some(self.tracks.pad()[t]) }).collect();
        let mut mdd = self.mdd.clone();
        let mut memo = FastMap::default();
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        for q in 0..n {
            let r = mdd.restrict(self.trans[q], &fixed, &mut memo);
            for s in mdd.leaves(r) {
                preds[s as usize].push(q as u32);
            }
        }
        let mut fin = self.finish.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&q| fin[q as usize]).collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q as usize] {
                if !fin[p as usize] {
                    fin[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        fin
    }

    /// Automaton reading k letters at a time: tracks are k copies of the
    /// original tracks, block position major.
    pub fn blocked(&self, k: usize) -> Dfa {
        assert!(k >= 1);
        let t = self.tracks.len();
        let maps: Vec<Vec<u32>> = (0..k).map(|j| (0..t as u32).map(|i| (j * t) as u32 + i).collect()).collect();
        let mut mdd = Mdd::new();
        let mut memo: FastMap<(u32, usize), NodeId> = FastMap::default();
        let trans = (0..self.states() as u32).map(|q| self.compose(&mut mdd, q, 0, k, &maps, &mut memo)).collect();
        Dfa { tracks: self.tracks.repeat(k), mdd, trans, finish: self.finish.clone(), initial: self.initial }
    }

    fn compose(&self, out: &mut Mdd, q: u32, j: usize, k: usize, maps: &[Vec<u32>], memo: &mut FastMap<(u32, usize), NodeId>) -> NodeId {
        if let Some(&r) = memo.get(&(q, j)) {
            return r;
        }
        let mut inner: FastMap<NodeId, NodeId> = FastMap::default();
        let r = self.subst(out, self.trans[q as usize], &maps[j], &mut |out, l| {
            if j + 1 == k {
                out.leaf(l)
            } else {
                self.compose(out, l, j + 1, k, maps, memo)
            }
        }, &mut inner);
        memo.insert((q, j), r);
        r
    }

    fn subst(
        &self,
        out: &mut Mdd,
        id: NodeId,
        map: &[u32],
        leaf: &mut impl FnMut(&mut Mdd, u32) -> NodeId,
        memo: &mut FastMap<NodeId, NodeId>,
    ) -> NodeId {
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let r = match self.mdd.leaf_value(id) {
            Some(v) => leaf(out, v),
            None => {
                let t = map[self.mdd.track(id) as usize];
                let kids: Vec<NodeId> = self.mdd.kids(id).to_vec().into_iter().map(|c| self.subst(out, c, map, leaf, memo)).collect();
                out.branch(t, kids)
            }
        };
        memo.insert(id, r);
        r
    }

    /// Inverse of [`Dfa::blocked`]: reads the blocks one base letter at a
    /// time. A word whose length is not a multiple of k is accepted when
    /// padding it to a full block is.
    pub fn unblocked(&self, base: &Tracks, k: usize) -> Result<Dfa> {
        let t = base.len();
        if self.tracks != base.repeat(k) {
            return Err(Error::AlphabetMismatch("blocked alphabet does not match".into()));
        }
        let pad = base.pad().to_vec();
        let radix = base.radix().to_vec();
        // key: (position in block, diagram node, state at block start)
        let (d, _) = build(
            base.clone(),
            (0usize, self.trans[self.initial as usize], self.initial),
            usize::MAX,
            |&(j, node, q)| {
                if j == 0 {
                    return self.finish[q as usize];
                }
                let mut n = node;
                for jj in j..k {
                    for i in 0..t {
                        n = self.mdd.child(n, (jj * t + i) as u32, pad[i]);
                    }
                }
                self.finish[self.mdd.leaf_value(n).expect("full block") as usize]
            },
            |&(j, node, _), b| {
                let mut memo: FastMap<(NodeId, usize), NodeId> = FastMap::default();
                Ok(unblock_rec(&self.mdd, &self.trans, node, j, 0, t, k, &radix, b, &mut memo))
            },
        )
        .expect("no cap");
        Ok(d.minimize())
    }
}

#[allow(clippy::too_many_arguments)]
fn unblock_rec(
    src: &Mdd,
    trans: &[NodeId],
    node: NodeId,
    j: usize,
    i: usize,
    t: usize,
    k: usize,
    radix: &[u32],
    b: &mut Builder<(usize, NodeId, u32)>,
    memo: &mut FastMap<(NodeId, usize), NodeId>,
) -> NodeId {
    if let Some(&r) = memo.get(&(node, i)) {
        return r;
    }
    let r = if i == t {
        if j + 1 == k {
            let q = src.leaf_value(node).expect("full block");
            b.target((0, trans[q as usize], q))
        } else {
            b.target((j + 1, node, u32::MAX))
        }
    } else {
        let kids: Vec<NodeId> = (0..radix[i])
            .map(|d| {
                let c = src.child(node, (j * t + i) as u32, d);
                unblock_rec(src, trans, c, j, i + 1, t, k, radix, b, memo)
            })
            .collect();
        b.mdd.branch(i as u32, kids)
    };
    memo.insert((node, i), r);
    r
}

/// Transition diagram of the saturated automaton from (cur, last): the
/// padding letter keeps `last`, any other letter resets it.
#[allow(clippy::too_many_arguments)]
fn split_pad(
    src: &Mdd,
    node: NodeId,
    t: usize,
    radix: &[u32],
    pad: &[u32],
    b: &mut Builder<(u32, u32)>,
    last: u32,
    memo_other: &mut FastMap<NodeId, NodeId>,
) -> NodeId {
    if t == radix.len() {
        let l = src.leaf_value(node).expect("complete letter");
        return b.target((l, last));
    }
    let kids: Vec<NodeId> = (0..radix[t])
        .map(|d| {
            let c = src.child(node, t as u32, d);
            if d == pad[t] {
                split_pad(src, c, t + 1, radix, pad, b, last, memo_other)
            } else {
                other_rec(src, c, b, memo_other)
            }
        })
        .collect();
    b.mdd.branch(t as u32, kids)
}

fn other_rec(src: &Mdd, node: NodeId, b: &mut Builder<(u32, u32)>, memo: &mut FastMap<NodeId, NodeId>) -> NodeId {
    if let Some(&r) = memo.get(&node) {
        return r;
    }
    let r = match src.leaf_value(node) {
        Some(l) => b.target((l, l)),
        None => {
            let kids: Vec<NodeId> = src.kids(node).to_vec().into_iter().map(|c| other_rec(src, c, b, memo)).collect();
            b.mdd.branch(src.track(node), kids)
        }
    };
    memo.insert(node, r);
    r
}

fn build_from_fn(mdd: &mut Mdd, radix: &[u32], t: usize, letter: &mut Vec<u32>, f: &dyn Fn(&[u32]) -> u32) -> NodeId {
    if t == radix.len() {
        let v = f(letter);
        return mdd.leaf(v);
    }
    let kids: Vec<NodeId> = (0..radix[t])
        .map(|d| {
            letter[t] = d;
            build_from_fn(mdd, radix, t + 1, letter, f)
        })
        .collect();
    mdd.branch(t as u32, kids)
}
