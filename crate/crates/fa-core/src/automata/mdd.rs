//! Hash-consed multi-valued decision diagrams.
//!
//! A transition function of an automaton over a tuple alphabet is stored as
//! one diagram per state: internal nodes branch on one track (tracks strictly
//! increase along every path), leaves carry a state id or an interned set id.
//! Nodes whose children are all equal are never created, so tracks a
//! transition ignores cost nothing.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::FastMap;

pub type NodeId = u32;

const LEAF: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Leaf(u32),
    Branch(u32, Box<[NodeId]>),
}

#[derive(Clone, Debug, Default)]
pub struct Mdd {
    nodes: Vec<Key>,
    unique: FastMap<Key, NodeId>,
}

impl Mdd {
    pub fn new() -> Mdd {
        Mdd::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn intern(&mut self, k: Key) -> NodeId {
        if let Some(&id) = self.unique.get(&k) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(k.clone());
        self.unique.insert(k, id);
        id
    }

    pub fn leaf(&mut self, v: u32) -> NodeId {
        self.intern(Key::Leaf(v))
    }

    /// Branch on `track`; collapses to the child when all children agree.
    pub fn branch(&mut self, track: u32, kids: Vec<NodeId>) -> NodeId {
        debug_assert!(!kids.is_empty());
        if kids.iter().all(|&k| k == kids[0]) {
            return kids[0];
        }
        debug_assert!(kids.iter().all(|&k| self.track(k) > track));
        self.intern(Key::Branch(track, kids.into_boxed_slice()))
    }

    /// Track a node branches on, `u32::MAX` for leaves.
    pub fn track(&self, id: NodeId) -> u32 {
        match &self.nodes[id as usize] {
            Key::Leaf(_) => LEAF,
            Key::Branch(t, _) => *t,
        }
    }

    pub fn leaf_value(&self, id: NodeId) -> Option<u32> {
        match &self.nodes[id as usize] {
            Key::Leaf(v) => Some(*v),
            Key::Branch(..) => None,
        }
    }

    pub fn kids(&self, id: NodeId) -> &[NodeId] {
        match &self.nodes[id as usize] {
            Key::Leaf(_) => &[],
            Key::Branch(_, k) => k,
        }
    }

    /// Child reached by setting `track` to `digit` (the node itself when it
    /// does not branch on that track).
    #[inline]
    pub fn child(&self, id: NodeId, track: u32, digit: u32) -> NodeId {
        match &self.nodes[id as usize] {
            Key::Branch(t, k) if *t == track => k[digit as usize],
            _ => id,
        }
    }

    /// Leaf reached by a full letter.
    pub fn eval(&self, mut id: NodeId, letter: &[u32]) -> u32 {
        loop {
            match &self.nodes[id as usize] {
                Key::Leaf(v) => return *v,
                Key::Branch(t, k) => id = k[letter[*t as usize] as usize],
            }
        }
    }

    /// Leaf values in order of first appearance, exploring digits ascending.
    pub fn leaves(&self, id: NodeId) -> Vec<u32> {
        let mut out = Vec::new();
        let mut seen_nodes = FastMap::default();
        let mut seen_leaves = FastMap::default();
        self.leaves_rec(id, &mut out, &mut seen_nodes, &mut seen_leaves);
        out
    }

    fn leaves_rec(&self, id: NodeId, out: &mut Vec<u32>, seen: &mut FastMap<NodeId, ()>, sl: &mut FastMap<u32, ()>) {
        if seen.insert(id, ()).is_some() {
            return;
        }
        match &self.nodes[id as usize] {
            Key::Leaf(v) => {
                if sl.insert(*v, ()).is_none() {
                    out.push(*v);
                }
            }
            Key::Branch(_, k) => {
                for &c in k.iter() {
                    self.leaves_rec(c, out, seen, sl);
                }
            }
        }
    }

    /// Copy a diagram from another store, renaming leaves and tracks.
    /// `track_map` must be strictly increasing.
    pub fn import(
        &mut self,
        src: &Mdd,
        id: NodeId,
        track_map: Option<&[u32]>,
        leaf_map: &mut impl FnMut(u32) -> u32,
        memo: &mut FastMap<NodeId, NodeId>,
    ) -> NodeId {
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let r = match &src.nodes[id as usize] {
            Key::Leaf(v) => {
                let v = leaf_map(*v);
                self.leaf(v)
            }
            Key::Branch(t, kids) => {
                let t = track_map.map_or(*t, |m| m[*t as usize]);
                let kids: Vec<NodeId> = kids.iter().map(|&c| self.import(src, c, track_map, leaf_map, memo)).collect();
                self.branch(t, kids)
            }
        };
        memo.insert(id, r);
        r
    }

    /// Combine two diagrams from (possibly different) stores leafwise.
    pub fn apply2(
        &mut self,
        sa: &Mdd,
        a: NodeId,
        sb: &Mdd,
        b: NodeId,
        f: &mut impl FnMut(u32, u32) -> u32,
        memo: &mut FastMap<(NodeId, NodeId), NodeId>,
    ) -> NodeId {
        if let Some(&r) = memo.get(&(a, b)) {
            return r;
        }
        let ta = sa.track(a);
        let tb = sb.track(b);
        let r = if ta == LEAF && tb == LEAF {
            let v = f(sa.leaf_value(a).unwrap(), sb.leaf_value(b).unwrap());
            self.leaf(v)
        } else {
            let t = ta.min(tb);
            let radix = if ta == t { sa.kids(a).len() } else { sb.kids(b).len() };
            let kids: Vec<NodeId> = (0..radix as u32)
                .map(|d| self.apply2(sa, sa.child(a, t, d), sb, sb.child(b, t, d), f, memo))
                .collect();
            self.branch(t, kids)
        };
        memo.insert((a, b), r);
        r
    }

    /// Leafwise combination of two diagrams living in this store.
    pub fn apply2_in(
        &mut self,
        a: NodeId,
        b: NodeId,
        f: &mut impl FnMut(u32, u32) -> u32,
        memo: &mut FastMap<(NodeId, NodeId), NodeId>,
    ) -> NodeId {
        if let Some(&r) = memo.get(&(a, b)) {
            return r;
        }
        let ta = self.track(a);
        let tb = self.track(b);
        let r = if ta == LEAF && tb == LEAF {
            let v = f(self.leaf_value(a).unwrap(), self.leaf_value(b).unwrap());
            self.leaf(v)
        } else {
            let t = ta.min(tb);
            let radix = if ta == t { self.kids(a).len() } else { self.kids(b).len() };
            let kids: Vec<NodeId> = (0..radix as u32)
                .map(|d| {
                    let (x, y) = (self.child(a, t, d), self.child(b, t, d));
                    self.apply2_in(x, y, f, memo)
                })
                .collect();
            self.branch(t, kids)
        };
        memo.insert((a, b), r);
        r
    }

    /// Rename leaves in place (result lives in this store).
    pub fn map_leaves(&mut self, id: NodeId, f: &mut impl FnMut(u32) -> u32, memo: &mut FastMap<NodeId, NodeId>) -> NodeId {
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let r = match self.nodes[id as usize].clone() {
            Key::Leaf(v) => {
                let v = f(v);
                self.leaf(v)
            }
            Key::Branch(t, kids) => {
                let kids: Vec<NodeId> = kids.iter().map(|&c| self.map_leaves(c, f, memo)).collect();
                self.branch(t, kids)
            }
        };
        memo.insert(id, r);
        r
    }

    /// Fix some tracks to given digits.
    pub fn restrict(&mut self, id: NodeId, fixed: &[Option<u32>], memo: &mut FastMap<NodeId, NodeId>) -> NodeId {
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let r = match self.nodes[id as usize].clone() {
            Key::Leaf(_) => id,
            Key::Branch(t, kids) => match fixed.get(t as usize).copied().flatten() {
                Some(d) => self.restrict(kids[d as usize], fixed, memo),
                None => {
                    let kids: Vec<NodeId> = kids.iter().map(|&c| self.restrict(c, fixed, memo)).collect();
                    self.branch(t, kids)
                }
            },
        };
        memo.insert(id, r);
        r
    }

    /// Remove a set of tracks by combining the children on them with `join`
    /// (an associative, commutative leaf operation, such as set union).
    /// Remaining tracks are renumbered through `track_map`.
    pub fn erase(
        &mut self,
        id: NodeId,
        erased: &[bool],
        track_map: &[u32],
        join: &mut impl FnMut(u32, u32) -> u32,
        memo: &mut FastMap<NodeId, NodeId>,
        jmemo: &mut FastMap<(NodeId, NodeId), NodeId>,
    ) -> NodeId {
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let r = match self.nodes[id as usize].clone() {
            Key::Leaf(_) => id,
            Key::Branch(t, kids) => {
                let kids: Vec<NodeId> =
                    kids.iter().map(|&c| self.erase(c, erased, track_map, join, memo, jmemo)).collect();
                if erased[t as usize] {
                    let mut acc = kids[0];
                    for &k in &kids[1..] {
                        acc = self.apply2_in(acc, k, join, jmemo);
                    }
                    acc
                } else {
                    self.branch(track_map[t as usize], kids)
                }
            }
        };
        memo.insert(id, r);
        r
    }

    /// For each leaf reachable from `id`, the number of letters (over tracks
    /// with the given radices) that lead to it.
    pub fn leaf_counts(&self, id: NodeId, radix: &[u32]) -> Vec<(u32, BigUint)> {
        let n = radix.len() as u32;
        let mut memo: FastMap<NodeId, Vec<(u32, BigUint)>> = FastMap::default();
        let counts = self.counts_rec(id, radix, &mut memo);
        let top = self.track(id).min(n);
        let mult = span_product(radix, 0, top);
        let mut out: Vec<(u32, BigUint)> = counts.iter().map(|(l, c)| (*l, c * &mult)).collect();
        out.sort_by_key(|x| x.0);
        out
    }

    fn counts_rec(&self, id: NodeId, radix: &[u32], memo: &mut FastMap<NodeId, Vec<(u32, BigUint)>>) -> Vec<(u32, BigUint)> {
        if let Some(v) = memo.get(&id) {
            return v.clone();
        }
        let n = radix.len() as u32;
        let out = match &self.nodes[id as usize] {
            Key::Leaf(v) => vec![(*v, BigUint::one())],
            Key::Branch(t, kids) => {
                let mut acc: FastMap<u32, BigUint> = FastMap::default();
                for &c in kids.iter() {
                    let mult = span_product(radix, t + 1, self.track(c).min(n));
                    for (l, k) in self.counts_rec(c, radix, memo) {
                        *acc.entry(l).or_insert_with(BigUint::zero) += k * &mult;
                    }
                }
                let mut v: Vec<(u32, BigUint)> = acc.into_iter().collect();
                v.sort_by_key(|x| x.0);
                v
            }
        };
        memo.insert(id, out.clone());
        out
    }

    /// Least letter (track 0 most significant) leading from `id` to a leaf
    /// satisfying `pred`; unconstrained tracks take digit `fill[t]`, or the
    /// least digit when `fill` is `None`.
    pub fn least_letter_to(&self, id: NodeId, ntracks: usize, pred: &impl Fn(u32) -> bool) -> Option<Vec<u32>> {
        let mut letter = vec![0u32; ntracks];
        if self.least_rec(id, &mut letter, pred) {
            Some(letter)
        } else {
            None
        }
    }

    fn least_rec(&self, id: NodeId, letter: &mut [u32], pred: &impl Fn(u32) -> bool) -> bool {
        match &self.nodes[id as usize] {
            Key::Leaf(v) => pred(*v),
            Key::Branch(t, kids) => {
                for (d, &c) in kids.iter().enumerate() {
                    if self.least_rec(c, letter, pred) {
                        letter[*t as usize] = d as u32;
                        return true;
                    }
                }
                false
            }
        }
    }

    /// All (letter, leaf) pairs, letters ascending. Only for small alphabets.
    pub fn enumerate(&self, id: NodeId, radix: &[u32]) -> Vec<(Vec<u32>, u32)> {
        let mut out = Vec::new();
        let mut letter = vec![0u32; radix.len()];
        self.enum_rec(id, 0, radix, &mut letter, &mut out);
        out
    }

    fn enum_rec(&self, id: NodeId, t: usize, radix: &[u32], letter: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, u32)>) {
        if t == radix.len() {
            out.push((letter.clone(), self.leaf_value(id).expect("complete path ends in a leaf")));
            return;
        }
        for d in 0..radix[t] {
            letter[t] = d;
            let c = self.child(id, t as u32, d);
            self.enum_rec(c, t + 1, radix, letter, out);
        }
    }

    /// Canonical serialization of a diagram (structure plus leaf values).
    pub fn serialize(&self, id: NodeId, out: &mut Vec<u32>) {
        let mut local: FastMap<NodeId, u32> = FastMap::default();
        self.ser_rec(id, out, &mut local);
    }

    fn ser_rec(&self, id: NodeId, out: &mut Vec<u32>, local: &mut FastMap<NodeId, u32>) {
        if let Some(&l) = local.get(&id) {
            out.push(0);
            out.push(l);
            return;
        }
        let n = local.len() as u32;
        local.insert(id, n);
        match &self.nodes[id as usize] {
            Key::Leaf(v) => {
                out.push(1);
                out.push(*v);
            }
            Key::Branch(t, kids) => {
                out.push(2);
                out.push(*t);
                out.push(kids.len() as u32);
                for &c in kids.iter() {
                    self.ser_rec(c, out, local);
                }
            }
        }
    }
}

fn span_product(radix: &[u32], from: u32, to: u32) -> BigUint {
    (from..to).fold(BigUint::one(), |acc, t| acc * BigUint::from(radix[t as usize]))
}
