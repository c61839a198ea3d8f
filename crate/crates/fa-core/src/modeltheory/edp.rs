//! Sets of the form {[s₁^{k₁}⋯s_n^{k_n}]_{F^r} : 𝐤 ∈ Φ} with Φ definable
//! in (ℕ, +).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;

use super::exponent::{block_exponents, letter_list};
use crate::automata::{Dfa, SimpleSparseTerm};
use crate::error::{Caps, Error, Result};
use crate::fauto::carry::{CarrySystem, Equation, Term};
use crate::fauto::{is_f_sparse, AutomaticSet, Expr, Formula, FSparsity};
use crate::group::{Element, Group};
use crate::presburger::{self, PresburgerRel};

/// Largest case split tolerated by [`EdpSet::normal_form`].
pub const NORMAL_FORM_CASES: usize = 1 << 12;

#[derive(Clone, Debug)]
pub struct EdpSet {
    group: Group,
    r: u32,
    words: Vec<Vec<Element>>,
    phi: PresburgerRel,
}

/// Tuples of ℕ^k that vanish on the listed coordinates.
fn zeros(k: usize, coords: impl IntoIterator<Item = usize>) -> Result<PresburgerRel> {
    let z = PresburgerRel::atom_const(0);
    let mut acc = PresburgerRel::full(k);
    for c in coords {
        acc = acc.and(&z.cylindrify(k, &[c])?)?;
    }
    Ok(acc)
}

impl EdpSet {
    pub fn new(group: &Group, r: u32, words: Vec<Vec<Element>>, phi: PresburgerRel) -> Result<EdpSet> {
        if r == 0 {
            return Err(Error::Precondition("exponent must be positive".into()));
        }
        if phi.arity() != words.len() {
            return Err(Error::ArityMismatch { expected: words.len(), got: phi.arity() });
        }
        let words = words.iter().map(|w| w.iter().map(|e| group.canonical(e)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Ok(EdpSet { group: group.clone(), r, words, phi })
    }

    /// Like [`EdpSet::new`] with Φ given as formula text over the variables
    /// x1, …, xn (xi is the exponent of the i-th word).
    pub fn from_formula(group: &Group, r: u32, words: Vec<Vec<Element>>, phi: &str, caps: Caps) -> Result<EdpSet> {
        let f = presburger::parse_formula(phi)?;
        let names: Vec<String> = (1..=words.len()).map(|i| format!("x{i}")).collect();
        if let Some(v) = f.free_vars().into_iter().find(|v| !names.contains(v)) {
            return Err(Error::Parse(format!("unknown exponent variable {v}; use x1..x{}", words.len())));
        }
        let free: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let rel = presburger::compile(&f, &free, &BTreeMap::new(), caps)?;
        EdpSet::new(group, r, words, rel)
    }

    /// The empty set.
    pub fn empty(group: &Group) -> EdpSet {
        EdpSet { group: group.clone(), r: 1, words: Vec::new(), phi: PresburgerRel::empty(0) }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn words(&self) -> &[Vec<Element>] {
        &self.words
    }

    pub fn phi(&self) -> &PresburgerRel {
        &self.phi
    }

    pub fn is_single_letter(&self) -> bool {
        self.words.iter().all(|w| w.len() == 1)
    }

    /// The word s₁^{k₁}⋯s_n^{k_n}.
    pub fn word(&self, k: &[u64]) -> Vec<Element> {
        let mut out = Vec::new();
        for (w, &e) in self.words.iter().zip(k) {
            for _ in 0..e {
                out.extend(w.iter().cloned());
            }
        }
        out
    }

    pub fn value(&self, k: &[u64]) -> Element {
        self.group.eval_word(&self.word(k), self.r)
    }

    /// Values of the exponent tuples of Φ with every entry ≤ bound.
    pub fn values_within(&self, bound: u64) -> Result<BTreeSet<Element>> {
        Ok(self.phi.enumerate(bound)?.iter().map(|k| self.value(k)).collect())
    }

    /// {𝐤 : [s^𝐤]_{F^r} = g}, before intersecting with Φ.
    pub fn preimage_exponents(&self, g: &Element, caps: &Caps) -> Result<PresburgerRel> {
        let (d, blocks) = self.preimage_automaton(g, caps)?;
        block_exponents(&d, &blocks, caps)
    }

    /// The carry automaton of {w : [w]_{F^r} = g} over the letters of the
    /// words, with the words as letter-index blocks.
    pub fn preimage_automaton(&self, g: &Element, caps: &Caps) -> Result<(Dfa, Vec<Vec<Vec<u32>>>)> {
        let g = self.group.canonical(g)?;
        let letters = letter_list(&self.group.zero(), self.words.iter().flatten().cloned());
        let sys = CarrySystem {
            alphabets: vec![letters.clone()],
            equations: vec![Equation { terms: vec![Term::new(0, 1)], constant: self.group.neg(&g) }],
        };
        let (d, _) = sys.automaton(&self.group.power(self.r), caps.carry)?;
        let idx = |e: &Element| letters.binary_search(e).expect("listed letter") as u32;
        let blocks = vec![self.words.iter().map(|w| w.iter().map(idx).collect()).collect()];
        Ok((d, blocks))
    }

    pub fn member(&self, g: &Element, caps: &Caps) -> Result<bool> {
        let (d, blocks) = self.preimage_automaton(g, caps)?;
        let filters = [self.phi.clone()];
        Ok(!super::exponent::block_exponents_within(&d, &blocks, Some(&filters), caps)?.is_empty())
    }

    /// The same set read with F^s for a divisor s of r: every letter a
    /// becomes a 0^{r/s − 1}.
    pub fn with_exponent(&self, s: u32) -> Result<EdpSet> {
        if s == 0 || self.r % s != 0 {
            return Err(Error::Precondition(format!("{s} does not divide {}", self.r)));
        }
        let k = (self.r / s) as usize;
        let zero = self.group.zero();
        let words = self
            .words
            .iter()
            .map(|w| {
                w.iter()
                    .flat_map(|a| core::iter::once(a.clone()).chain(core::iter::repeat_n(zero.clone(), k - 1)))
                    .collect()
            })
            .collect();
        Ok(EdpSet { group: self.group.clone(), r: s, words, phi: self.phi.clone() })
    }

    /// Union: the words are concatenated and
    /// χ(𝐱, 𝐲) = (Φ(𝐱) ∧ 𝐲 = 0) ∨ (Ψ(𝐲) ∧ 𝐱 = 0).
    pub fn union(&self, o: &EdpSet) -> Result<EdpSet> {
        if self.group != o.group {
            return Err(Error::Precondition("EDP sets over different groups".into()));
        }
        let r = self.r.gcd(&o.r);
        let (a, b) = (self.with_exponent(r)?, o.with_exponent(r)?);
        let (n1, n2) = (a.words.len(), b.words.len());
        let n = n1 + n2;
        let left: Vec<usize> = (0..n1).collect();
        let right: Vec<usize> = (n1..n).collect();
        let l = a.phi.cylindrify(n, &left)?.and(&zeros(n, right.iter().copied())?)?;
        let rr = b.phi.cylindrify(n, &right)?.and(&zeros(n, left.iter().copied())?)?;
        let mut words = a.words;
        words.extend(b.words);
        Ok(EdpSet { group: self.group.clone(), r, words, phi: l.or(&rr)? })
    }

    /// An F-sparse set of arity 1 as an EDP set: each simple sparse term
    /// v₀w₁*v₁⋯w_n*v_n of its least-representative language contributes the
    /// words (v₀, w₁, v₁, …) with the v exponents fixed to 1.
    pub fn from_sparse(a: &AutomaticSet) -> Result<EdpSet> {
        if a.arity() != 1 {
            return Err(Error::Unsupported("EDP sets are subsets of Γ".into()));
        }
        let terms = match is_f_sparse(a)? {
            FSparsity::Sparse { terms, .. } => terms,
            FSparsity::NotSparse(_) => return Err(Error::Precondition("set is not F-sparse".into())),
        };
        let span = a.span();
        let letter = |l: &Vec<u32>| span.digits()[l[0] as usize].clone();
        let mut words: Vec<Vec<Element>> = Vec::new();
        let mut ranges = Vec::new();
        for SimpleSparseTerm { v, w } in &terms {
            let start = words.len();
            let mut fixed = Vec::new();
            for i in 0..v.len() {
                fixed.push(words.len());
                words.push(v[i].iter().map(letter).collect());
                if i < w.len() {
                    words.push(w[i].iter().map(letter).collect());
                }
            }
            ranges.push((start, words.len(), fixed));
        }
        let n = words.len();
        let one = PresburgerRel::atom_const(1);
        let mut phi = PresburgerRel::empty(n);
        for (start, end, fixed) in ranges {
            let mut t = zeros(n, (0..start).chain(end..n))?;
            for c in fixed {
                t = t.and(&one.cylindrify(n, &[c])?)?;
            }
            phi = phi.or(&t)?;
        }
        EdpSet::new(span.group(), span.r(), words, phi)
    }

    /// An equivalent set whose words are single letters, read with F^{r·s}
    /// where s is the least common multiple of the word lengths.
    ///
    /// Write kᵢ = bᵢqᵢ + ρᵢ with bᵢ = s/|sᵢ| and split on ρ and on which qᵢ
    /// vanish. In each case the word is a fixed prefix, then for each i with
    /// qᵢ ≥ 1 the block wᵢ = sᵢ^{bᵢ} repeated qᵢ times, then sᵢ^{ρᵢ}. Writing
    /// wᵢ = pq with the prefix p completing the current length to a multiple
    /// of s gives wᵢ^{qᵢ} = p (qp)^{qᵢ−1} q, so every variable block starts
    /// at a multiple of s; cutting the word into length-s pieces makes each
    /// piece one letter.
    pub fn normal_form(&self, caps: &Caps) -> Result<EdpSet> {
        if self.is_single_letter() {
            return Ok(self.clone());
        }
        let r = self.r;
        let g = &self.group;
        let zero = g.zero();
        let lens: Vec<usize> = self.words.iter().map(|w| w.len()).collect();
        let s = lens.iter().filter(|&&l| l > 0).fold(1usize, |a, &l| a.lcm(&l));
        let b: Vec<usize> = lens.iter().map(|&l| if l == 0 { 1 } else { s / l }).collect();
        let live: Vec<usize> = (0..lens.len()).filter(|&i| lens[i] > 0).collect();
        let mut cases: usize = 1;
        for &i in &live {
            cases = cases.saturating_mul(b[i]).saturating_mul(2);
        }
        if cases > NORMAL_FORM_CASES {
            return Err(Error::CapExceeded(format!("normal form needs {cases} cases (limit {NORMAL_FORM_CASES})")));
        }
        let big_r = r * s as u32;
        let piece = |ws: &[Element]| g.eval_word(ws, r);
        let n = self.words.len();
        let mut rels = BTreeMap::new();
        rels.insert(String::from("phi"), self.phi.clone());
        let mut out = EdpSet { group: g.clone(), r: big_r, words: Vec::new(), phi: PresburgerRel::empty(0) };
        for case in 0..cases {
            // decode (ρᵢ, qᵢ ≥ 1?) for the live words
            let mut c = case;
            let mut rho = vec![0usize; n];
            let mut pos = vec![false; n];
            for &i in &live {
                rho[i] = c % b[i];
                c /= b[i];
                pos[i] = c % 2 == 1;
                c /= 2;
            }
            let mut letters: Vec<Element> = Vec::new();
            // None: fixed to 1; Some(i): qᵢ − 1
            let mut kinds: Vec<Option<usize>> = Vec::new();
            let mut buf: Vec<Element> = Vec::new();
            let flush = |buf: &mut Vec<Element>, letters: &mut Vec<Element>, kinds: &mut Vec<Option<usize>>| {
                for chunk in buf.chunks(s) {
                    letters.push(piece(chunk));
                    kinds.push(None);
                }
                buf.clear();
            };
            for &i in &live {
                let w = &self.words[i];
                if pos[i] {
                    let block: Vec<Element> = (0..b[i]).flat_map(|_| w.iter().cloned()).collect();
                    let cut = (s - buf.len() % s) % s;
                    buf.extend(block[..cut].iter().cloned());
                    flush(&mut buf, &mut letters, &mut kinds);
                    let mut rot: Vec<Element> = block[cut..].to_vec();
                    rot.extend(block[..cut].iter().cloned());
                    letters.push(piece(&rot));
                    kinds.push(Some(i));
                    buf.extend(block[cut..].iter().cloned());
                }
                for _ in 0..rho[i] {
                    buf.extend(w.iter().cloned());
                }
            }
            while buf.len() % s != 0 {
                buf.push(zero.clone());
            }
            flush(&mut buf, &mut letters, &mut kinds);
            // trailing zero pieces do not change the value
            while kinds.last() == Some(&None) && letters.last().is_some_and(|l| g.is_zero(l)) {
                letters.pop();
                kinds.pop();
            }
            let kv = |i: usize| format!("k{i}");
            let ev = |j: usize| format!("e{j}");
            let mut parts = vec![Formula::member("phi", (0..n).map(|i| Expr::var(&kv(i))).collect())];
            for (j, kind) in kinds.iter().enumerate() {
                match kind {
                    None => parts.push(Formula::eq(Expr::var(&ev(j)), Expr::Const(presburger::nat(1)))),
                    Some(i) => parts.push(Formula::eq(
                        Expr::var(&kv(*i)),
                        Expr::add(Expr::Scale(BigInt::from(b[*i]), alloc::boxed::Box::new(Expr::var(&ev(j)))), Expr::Const(presburger::nat((b[*i] + rho[*i]) as u64))),
                    )),
                }
            }
            for &i in &live {
                if !pos[i] {
                    parts.push(Formula::eq(Expr::var(&kv(i)), Expr::Const(presburger::nat(rho[i] as u64))));
                }
            }
            let mut f = Formula::all(parts);
            for i in (0..n).rev() {
                f = Formula::exists(&kv(i), f);
            }
            let names: Vec<String> = (0..letters.len()).map(ev).collect();
            let free: Vec<&str> = names.iter().map(|x| x.as_str()).collect();
            let mut phi = presburger::compile(&f, &free, &rels, *caps)?;
            if phi.is_empty() {
                continue;
            }
            // drop variable letters whose exponent is forced to 0
            for j in (0..letters.len()).rev() {
                if kinds[j].is_none() {
                    continue;
                }
                let z = zeros(phi.arity(), [j])?;
                if phi.and(&z.not())?.is_empty() {
                    phi = phi.and(&z)?.exists(j)?;
                    letters.remove(j);
                    kinds.remove(j);
                }
            }
            while kinds.last() == Some(&None) && letters.last().is_some_and(|l| g.is_zero(l)) {
                phi = phi.exists(letters.len() - 1)?;
                letters.pop();
                kinds.pop();
            }
            let words: Vec<Vec<Element>> = letters.into_iter().map(|l| vec![l]).collect();
            let part = EdpSet { group: g.clone(), r: big_r, words, phi };
            out = if out.words.is_empty() && out.phi.is_empty() { part } else { out.union(&part)? };
        }
        Ok(out)
    }

    /// Exponent tuples (𝐤₁, …, 𝐤_m) of Φ^m whose values form a tuple of X,
    /// listed tuple by tuple. The set is brought to single-letter form
    /// first. With X the diagonal this is the relation 𝐤 ∼ 𝐤′ of having the
    /// same value.
    pub fn trace_relation(&self, x: &AutomaticSet, caps: &Caps) -> Result<PresburgerRel> {
        if x.group() != &self.group {
            return Err(Error::Precondition("set and EDP set over different groups".into()));
        }
        let e = if self.is_single_letter() { self.clone() } else { self.normal_form(caps)? };
        let m = x.arity();
        let letters: Vec<Element> = e.words.iter().map(|w| w[0].clone()).collect();
        let filters = vec![e.phi.clone(); m];
        super::exponent::exponent_relation_within(x, &vec![letters; m], e.r, Some(&filters))
    }
}
