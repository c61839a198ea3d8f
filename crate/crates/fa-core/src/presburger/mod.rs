//! Relations on ℕ^k as binary automata: one track per coordinate, least
//! significant bit first, padded with 0.

pub mod parse;

pub use parse::parse_formula;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::automata::mdd::Mdd;
use crate::automata::{Dfa, SemilinearSet, Tracks};
use crate::error::{Caps, Error, Result};
use crate::fauto::carry::{CarrySystem, Equation, Term};
use crate::fauto::{Engine, Expr, Formula};
use crate::group::{Element, FPower, Group, GroupSpec};
use crate::FastMap;

#[derive(Clone, Debug)]
pub struct PresburgerRel {
    arity: usize,
    dfa: Dfa,
}

struct Walk {
    live: Vec<bool>,
    /// Diagram nodes with a live leaf below.
    useful: FastMap<u32, bool>,
    len: usize,
    out: Vec<Vec<u64>>,
}

impl Walk {
    fn useful(&mut self, mdd: &Mdd, node: u32) -> bool {
        if let Some(&u) = self.useful.get(&node) {
            return u;
        }
        let u = match mdd.leaf_value(node) {
            Some(q) => self.live[q as usize],
            None => {
                let kids = mdd.kids(node).to_vec();
                kids.into_iter().any(|c| self.useful(mdd, c))
            }
        };
        self.useful.insert(node, u);
        u
    }
}

fn base() -> FPower {
    Group::new(GroupSpec::IntegerBase { d: 2u32.into() }).expect("base 2").power(1)
}

fn bits() -> Vec<Element> {
    vec![Element::from_i64s(&[0]), Element::from_i64s(&[1])]
}

pub fn rel_tracks(k: usize) -> Tracks {
    Tracks::uniform(k, 2, 0)
}

/// Binary digits of n, least significant first, padded to `len`.
pub fn to_bits(n: &BigUint, len: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (0..n.bits()).map(|i| n.bit(i) as u32).collect();
    v.resize(len.max(v.len()), 0);
    v
}

impl PresburgerRel {
    /// Wraps a binary automaton; it is closed under padding first.
    pub fn from_dfa(dfa: Dfa) -> Result<PresburgerRel> {
        let k = dfa.tracks().len();
        if *dfa.tracks() != rel_tracks(k) {
            return Err(Error::AlphabetMismatch("relations read binary tracks padded with 0".into()));
        }
        Ok(PresburgerRel { arity: k, dfa: dfa.pad_saturate() })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn full(k: usize) -> PresburgerRel {
        PresburgerRel { arity: k, dfa: Dfa::universal(rel_tracks(k)) }
    }

    pub fn empty(k: usize) -> PresburgerRel {
        PresburgerRel { arity: k, dfa: Dfa::empty(rel_tracks(k)) }
    }

    fn linear(k: usize, terms: Vec<Term>, constant: i64) -> PresburgerRel {
        let sys = CarrySystem { alphabets: vec![bits(); k], equations: vec![Equation { terms, constant: Element::from_i64s(&[constant]) }] };
        let (dfa, _) = sys.automaton(&base(), usize::MAX).expect("linear equations over ℕ have finitely many carries");
        PresburgerRel { arity: k, dfa }
    }

    /// x + y = z
    pub fn atom_add() -> PresburgerRel {
        PresburgerRel::linear(3, vec![Term::new(0, 1), Term::new(1, 1), Term::new(2, -1)], 0)
    }

    /// x = y
    pub fn atom_eq() -> PresburgerRel {
        PresburgerRel::linear(2, vec![Term::new(0, 1), Term::new(1, -1)], 0)
    }

    /// x = c
    pub fn atom_const(c: u64) -> PresburgerRel {
        PresburgerRel::linear(1, vec![Term::new(0, 1)], -(c as i64))
    }

    /// y = m·x
    pub fn atom_scale(m: u64) -> PresburgerRel {
        PresburgerRel::linear(2, vec![Term::new(0, m as i64), Term::new(1, -1)], 0)
    }

    /// x ≡ rem (mod d)
    pub fn atom_mod(d: u64, rem: u64) -> Result<PresburgerRel> {
        if d == 0 {
            return Err(Error::Precondition("modulus must be positive".into()));
        }
        let f = Formula::Mod(Expr::var("x"), d, rem % d);
        compile(&f, &["x"], &BTreeMap::new(), Caps::default())
    }

    fn check(&self, o: &PresburgerRel) -> Result<()> {
        if self.arity != o.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: o.arity });
        }
        Ok(())
    }

    pub fn and(&self, o: &PresburgerRel) -> Result<PresburgerRel> {
        self.check(o)?;
        Ok(PresburgerRel { arity: self.arity, dfa: self.dfa.intersect(&o.dfa)? })
    }

    pub fn or(&self, o: &PresburgerRel) -> Result<PresburgerRel> {
        self.check(o)?;
        Ok(PresburgerRel { arity: self.arity, dfa: self.dfa.union(&o.dfa)? })
    }

    pub fn not(&self) -> PresburgerRel {
        PresburgerRel { arity: self.arity, dfa: self.dfa.complement().minimize() }
    }

    /// Projects away coordinate i.
    pub fn exists(&self, i: usize) -> Result<PresburgerRel> {
        if i >= self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: i + 1 });
        }
        Ok(PresburgerRel { arity: self.arity - 1, dfa: self.dfa.project(&[i], true)? })
    }

    /// Adds ignored coordinates: coordinate j of self goes to map[j]
    /// (strictly increasing) among k.
    pub fn cylindrify(&self, k: usize, map: &[usize]) -> Result<PresburgerRel> {
        Ok(PresburgerRel { arity: k, dfa: self.dfa.cylindrify(&rel_tracks(k), map)? })
    }

    pub fn is_empty(&self) -> bool {
        self.dfa.is_empty()
    }

    pub fn contains(&self, x: &[BigUint]) -> Result<bool> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: x.len() });
        }
        let len = x.iter().map(|v| v.bits() as usize).max().unwrap_or(0);
        let cols: Vec<Vec<u32>> = x.iter().map(|v| to_bits(v, len)).collect();
        let word: Vec<Vec<u32>> = (0..len).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        Ok(self.dfa.accepts(&word))
    }

    pub fn contains_u64(&self, x: &[u64]) -> Result<bool> {
        let v: Vec<BigUint> = x.iter().map(|&a| BigUint::from(a)).collect();
        self.contains(&v)
    }

    /// Every tuple with entries ≤ bound, in lexicographic order.
    pub fn enumerate(&self, bound: u64) -> Result<Vec<Vec<u64>>> {
        let len = 64 - bound.leading_zeros() as usize;
        let k = self.arity;
        let le = compile(&Formula::Le(Expr::var("x"), Expr::Const(nat(bound))), &["x"], &BTreeMap::new(), Caps::default())?;
        let mut boxed = self.clone();
        for i in 0..k {
            boxed = boxed.and(&le.cylindrify(k, &[i])?)?;
        }
        let live = boxed.dfa.coreachable();
        let mut w = Walk { live, useful: FastMap::default(), len, out: Vec::new() };
        let mut cur = vec![0u64; k];
        boxed.enum_rec(boxed.dfa.initial(), 0, &mut w, &mut cur);
        let mut out = w.out;
        out.sort();
        Ok(out)
    }

    /// Walks tuples bit by bit, least significant first, following only
    /// letters that lead to live states.
    fn enum_rec(&self, q: u32, bit: usize, w: &mut Walk, cur: &mut Vec<u64>) {
        if !w.live[q as usize] {
            return;
        }
        if bit == w.len {
            if self.dfa.is_final(q) {
                w.out.push(cur.clone());
            }
            return;
        }
        self.letter_rec(self.dfa.trans_node(q), 0, bit, w, cur);
    }

    fn letter_rec(&self, node: u32, t: usize, bit: usize, w: &mut Walk, cur: &mut Vec<u64>) {
        let mdd = self.dfa.mdd();
        if !w.useful(mdd, node) {
            return;
        }
        if t == self.arity {
            let q = mdd.leaf_value(node).expect("complete letter ends in a leaf");
            self.enum_rec(q, bit + 1, w, cur);
            return;
        }
        for b in 0..2u32 {
            cur[t] |= (b as u64) << bit;
            self.letter_rec(mdd.child(node, t as u32, b), t + 1, bit, w, cur);
            cur[t] &= !((b as u64) << bit);
        }
    }

    /// {x + L·Σ_{c ∈ coords} e_c : x ∈ self, L ∈ lengths}, for sorted
    /// distinct `coords` and a unary `lengths`.
    pub fn add_along(&self, coords: &[usize], lengths: &PresburgerRel) -> Result<PresburgerRel> {
        let k = self.arity;
        if lengths.arity != 1 {
            return Err(Error::ArityMismatch { expected: 1, got: lengths.arity });
        }
        if coords.windows(2).any(|w| w[0] >= w[1]) || coords.last().is_some_and(|&c| c >= k) {
            return Err(Error::Precondition("coordinates must be sorted, distinct and in range".into()));
        }
        // each moved coordinate gets its old value followed by its new one
        let total = k + coords.len() + 1;
        let l = total - 1;
        let mut old = Vec::with_capacity(k);
        let mut pos = 0;
        for j in 0..k {
            old.push(pos);
            pos += if coords.contains(&j) { 2 } else { 1 };
        }
        let mut rel = lengths.cylindrify(total, &[l])?;
        let step = PresburgerRel::linear(3, vec![Term::new(0, 1), Term::new(1, -1), Term::new(2, 1)], 0);
        for &c in coords {
            rel = rel.and(&step.cylindrify(total, &[old[c], old[c] + 1, l])?)?;
        }
        rel = rel.and(&self.cylindrify(total, &old)?)?;
        let mut erase: Vec<usize> = coords.iter().map(|&c| old[c]).collect();
        erase.push(l);
        Ok(PresburgerRel { arity: k, dfa: rel.dfa.project(&erase, true)? })
    }

    /// The relation ⋃ {b + Σ λᵢ pᵢ}. Each coordinate equation
    /// xᵢ = bᵢ + Σ λ_j p_j[i] gets its own automaton over the tracks it
    /// mentions; a joint carry automaton would branch on every bit
    /// combination of all coordinates at once.
    pub fn from_semilinear(s: &SemilinearSet) -> Result<PresburgerRel> {
        let k = s.dim;
        let mut acc = PresburgerRel::empty(k);
        for l in &s.sets {
            let j = l.periods.len();
            // tracks: x₁..x_k then λ₁..λ_j
            let mut rel = PresburgerRel::full(k + j);
            for i in 0..k {
                let users: Vec<usize> = (0..j).filter(|&pi| l.periods[pi][i] != 0).collect();
                let mut terms = vec![Term::new(0, 1)];
                for (t, &pi) in users.iter().enumerate() {
                    terms.push(Term::new(t + 1, -(l.periods[pi][i] as i64)));
                }
                let eq = PresburgerRel::linear(users.len() + 1, terms, -(l.base[i] as i64));
                let map: Vec<usize> = core::iter::once(i).chain(users.iter().map(|&pi| k + pi)).collect();
                rel = rel.and(&eq.cylindrify(k + j, &map)?)?;
            }
            let lam: Vec<usize> = (k..k + j).collect();
            let d = if j == 0 { rel.dfa } else { rel.dfa.project(&lam, true)? };
            acc = acc.or(&PresburgerRel { arity: k, dfa: d })?;
        }
        Ok(acc)
    }
}

/// Compiles a formula over ℕ with the listed free variables, in that
/// order. Named relations may appear as predicates.
pub fn compile(f: &Formula, free: &[&str], rels: &BTreeMap<String, PresburgerRel>, caps: Caps) -> Result<PresburgerRel> {
    let table: BTreeMap<String, (usize, Dfa)> = rels.iter().map(|(n, r)| (n.clone(), (r.arity, r.dfa.clone()))).collect();
    let mut e = Engine::new(base(), bits(), &table, caps);
    let d = e.compile(f, free)?;
    Ok(PresburgerRel { arity: free.len(), dfa: d })
}

/// Parses and compiles; free variables are taken in sorted order.
pub fn decide(text: &str, caps: Caps) -> Result<(Vec<String>, PresburgerRel)> {
    let f = parse_formula(text)?;
    let mut vars = f.free_vars();
    vars.sort();
    let free: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let r = compile(&f, &free, &BTreeMap::new(), caps)?;
    Ok((vars.iter().map(|v| v.to_string()).collect(), r))
}

pub(crate) fn nat(n: u64) -> Element {
    Element::from_i64s(&[n as i64])
}

impl PresburgerRel {
    pub fn is_zero_arity_true(&self) -> bool {
        self.arity == 0 && self.dfa.is_final(self.dfa.initial())
    }

    /// Number of tuples with entries ≤ bound.
    pub fn count_within(&self, bound: u64) -> Result<usize> {
        Ok(self.enumerate(bound)?.len())
    }
}
