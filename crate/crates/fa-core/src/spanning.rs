//! Spanning sets (digit systems) for F^r and the length function λ.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Caps, Error, Result};
use crate::group::{Element, FPower, Group};
use crate::poly::Poly;
use crate::FastMap;

/// A verified spanning set: digits sorted ascending, exponent r.
#[derive(Clone, Debug)]
pub struct SpanningSet {
    group: Group,
    r: u32,
    digits: Vec<Element>,
    fp: FPower,
    by_coset: BTreeMap<Element, Vec<usize>>,
}

impl PartialEq for SpanningSet {
    fn eq(&self, o: &Self) -> bool {
        self.group == o.group && self.r == o.r && self.digits == o.digits
    }
}
impl Eq for SpanningSet {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    /// Every element has an expansion.
    I,
    /// Contains 0 and is closed under negation.
    II,
    /// Five-fold sums lie in Σ + F^r Σ.
    III,
    /// Three-fold sums in F^r Γ lie in F^r Σ.
    IV,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::I => "i",
            Axiom::II => "ii",
            Axiom::III => "iii",
            Axiom::IV => "iv",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanFailure {
    pub axiom: Axiom,
    pub witness: Vec<Element>,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub enum SpanCheck {
    Verified(SpanningSet),
    Fails(SpanFailure),
}

impl SpanCheck {
    pub fn verified(self) -> Option<SpanningSet> {
        match self {
            SpanCheck::Verified(s) => Some(s),
            SpanCheck::Fails(_) => None,
        }
    }
}

/// Size used to steer greedy expansion: L1 norm, or length for polynomials.
fn size(g: &Group, a: &Element) -> BigInt {
    if g.is_poly() {
        BigInt::from(a.0.len())
    } else {
        a.0.iter().fold(BigInt::zero(), |acc, x| acc + x.abs())
    }
}

fn step_cap(g: &Group, a: &Element) -> usize {
    let b = if g.is_poly() { a.0.len() as u64 } else { a.bits() };
    10 * (1 + b as usize)
}

impl SpanningSet {
    fn assemble(group: &Group, r: u32, mut digits: Vec<Element>) -> SpanningSet {
        digits.sort();
        digits.dedup();
        let fp = group.power(r);
        let mut by_coset: BTreeMap<Element, Vec<usize>> = BTreeMap::new();
        for (i, d) in digits.iter().enumerate() {
            by_coset.entry(fp.reduce(d)).or_default().push(i);
        }
        SpanningSet { group: group.clone(), r, digits, fp, by_coset }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn digits(&self) -> &[Element] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn power(&self) -> &FPower {
        &self.fp
    }

    pub fn index_of(&self, a: &Element) -> Option<usize> {
        self.digits.binary_search(a).ok()
    }

    pub fn zero_index(&self) -> usize {
        self.index_of(&self.group.zero()).expect("0 is a digit")
    }

    /// Digits congruent to a modulo F^r Γ, ascending.
    pub fn congruent(&self, a: &Element) -> &[usize] {
        self.by_coset.get(&self.fp.reduce(a)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Value of a word of digit indices, least significant first.
    pub fn eval(&self, word: &[usize]) -> Element {
        let mut acc = self.group.zero();
        for &i in word.iter().rev() {
            acc = self.group.add(&self.fp.apply(&acc), &self.digits[i]);
        }
        acc
    }

    /// F^{-r}(a - s) for a digit s congruent to a.
    pub fn step(&self, a: &Element, s: usize) -> Option<Element> {
        self.fp.preimage(&self.group.sub(a, &self.digits[s]))
    }

    /// Shortest word for a. Among the shortest words the least one is
    /// returned, comparing from the most significant letter with digits
    /// ordered by index (so 6 = 2 + 4·1 gives [2, 1] over {-2..2}).
    pub fn shortest_expansion(&self, a: &Element, caps: &Caps) -> Result<Vec<usize>> {
        let a = self.group.canonical(a)?;
        if self.group.is_zero(&a) {
            return Ok(Vec::new());
        }
        let zero = self.group.zero();
        let mut ids: FastMap<Element, (usize, usize)> = FastMap::default(); // element -> (layer, position)
        ids.insert(a.clone(), (0, 0));
        let mut layers: Vec<Vec<Element>> = vec![vec![a.clone()]];
        // edges[k][i] = (digit, position in layer k+1)
        let mut edges: Vec<Vec<Vec<(usize, usize)>>> = Vec::new();
        let mut total = 1usize;
        loop {
            let k = layers.len() - 1;
            let mut next: Vec<Element> = Vec::new();
            let mut out = Vec::with_capacity(layers[k].len());
            let mut found = false;
            for cur in &layers[k] {
                let mut e = Vec::new();
                for &s in self.congruent(cur) {
                    let nx = self.step(cur, s).expect("congruent digit");
                    let pos = match ids.get(&nx) {
                        Some(&(l, p)) if l == k + 1 => p,
                        Some(_) => continue,
                        None => {
                            if total >= caps.search {
                                return Err(Error::StepCapExceeded { element: format!("{a}"), cap: caps.search });
                            }
                            total += 1;
                            ids.insert(nx.clone(), (k + 1, next.len()));
                            next.push(nx.clone());
                            next.len() - 1
                        }
                    };
                    found |= nx == zero;
                    e.push((s, pos));
                }
                out.push(e);
            }
            edges.push(out);
            if found {
                let zpos = ids[&zero].1;
                let mut word = Vec::with_capacity(k + 1);
                let mut targets: BTreeSet<usize> = BTreeSet::from([zpos]);
                for lvl in (0..=k).rev() {
                    let best = edges[lvl]
                        .iter()
                        .flatten()
                        .filter(|(_, p)| targets.contains(p))
                        .map(|(d, _)| *d)
                        .min()
                        .expect("layer connects");
                    word.push(best);
                    targets = edges[lvl]
                        .iter()
                        .enumerate()
                        .filter(|(_, es)| es.iter().any(|&(d, p)| d == best && targets.contains(&p)))
                        .map(|(i, _)| i)
                        .collect();
                }
                word.reverse();
                return Ok(word);
            }
            if next.is_empty() {
                return Err(Error::NotSpanning(format!("{a} has no expansion")));
            }
            layers.push(next);
        }
    }

    /// Greedy expansion: at each step take the congruent digit whose residual
    /// is smallest. Returns `None` on a cycle or when the step cap is hit.
    pub fn greedy_expansion(&self, a: &Element) -> Option<Vec<usize>> {
        let cap = step_cap(&self.group, a);
        let mut cur = a.clone();
        let mut word = Vec::new();
        let mut seen = BTreeSet::new();
        while !self.group.is_zero(&cur) {
            if word.len() >= cap || !seen.insert(cur.clone()) {
                return None;
            }
            let (s, next) = self
                .congruent(&cur)
                .iter()
                .map(|&s| (s, self.step(&cur, s).expect("congruent digit")))
                .min_by(|x, y| size(&self.group, &x.1).cmp(&size(&self.group, &y.1)).then(x.0.cmp(&y.0)))?;
            word.push(s);
            cur = next;
        }
        Some(word)
    }

    /// Every element with λ ≤ 2^n, mapped to the length of its shortest expansion.
    pub fn ball_levels(&self, n: u32) -> BTreeMap<Element, u32> {
        let mut levels: FastMap<Element, u32> = FastMap::default();
        levels.insert(self.group.zero(), 0);
        let mut frontier = vec![self.group.zero()];
        for k in 1..=n {
            let mut fresh = Vec::new();
            for b in &frontier {
                let fb = self.fp.apply(b);
                for d in &self.digits {
                    let x = self.group.add(d, &fb);
                    if !levels.contains_key(&x) {
                        levels.insert(x.clone(), k);
                        fresh.push(x);
                    }
                }
            }
            frontier = fresh;
        }
        levels.into_iter().collect()
    }
}

/// Iterated sumsets with provenance: `levels[k]` maps each k-fold sum to the
/// (k-1)-fold sum and digit it came from.
fn sumsets(g: &Group, digits: &[Element], k: usize) -> Vec<BTreeMap<Element, (Element, usize)>> {
    let mut levels: Vec<BTreeMap<Element, (Element, usize)>> = Vec::new();
    let mut first = BTreeMap::new();
    for (i, d) in digits.iter().enumerate() {
        first.entry(d.clone()).or_insert((g.zero(), i));
    }
    levels.push(first);
    for _ in 1..k {
        let prev = levels.last().unwrap();
        let mut next = BTreeMap::new();
        for x in prev.keys() {
            for (i, d) in digits.iter().enumerate() {
                next.entry(g.add(x, d)).or_insert((x.clone(), i));
            }
        }
        levels.push(next);
    }
    levels
}

fn tuple_of(levels: &[BTreeMap<Element, (Element, usize)>], digits: &[Element], k: usize, x: &Element) -> Vec<Element> {
    let mut out = Vec::new();
    let mut cur = x.clone();
    for lvl in (0..k).rev() {
        let (prev, i) = levels[lvl][&cur].clone();
        out.push(digits[i].clone());
        cur = prev;
    }
    out.reverse();
    out
}

/// Checks axioms (ii)-(iv) and returns the first failure, if any.
fn check_algebraic(g: &Group, fp: &FPower, digits: &[Element]) -> Option<SpanFailure> {
    let set: BTreeSet<&Element> = digits.iter().collect();
    if !set.contains(&g.zero()) {
        return Some(SpanFailure { axiom: Axiom::II, witness: vec![g.zero()], detail: "0 is not a digit".into() });
    }
    for d in digits {
        let n = g.neg(d);
        if !set.contains(&n) {
            return Some(SpanFailure { axiom: Axiom::II, witness: vec![n.clone()], detail: format!("{n} is not a digit") });
        }
    }
    let levels = sumsets(g, digits, 5);
    let mut by_coset: BTreeMap<Element, Vec<&Element>> = BTreeMap::new();
    for d in digits {
        by_coset.entry(fp.reduce(d)).or_default().push(d);
    }
    for x in levels[4].keys() {
        let ok = by_coset.get(&fp.reduce(x)).is_some_and(|cands| {
            cands.iter().any(|s| fp.preimage(&g.sub(x, s)).is_some_and(|y| set.contains(&y)))
        });
        if !ok {
            return Some(SpanFailure {
                axiom: Axiom::III,
                witness: tuple_of(&levels, digits, 5, x),
                detail: format!("five-fold sum {x} is not in digits + F^r digits"),
            });
        }
    }
    for x in levels[2].keys() {
        if let Some(y) = fp.preimage(x) {
            if !set.contains(&y) {
                return Some(SpanFailure {
                    axiom: Axiom::IV,
                    witness: tuple_of(&levels, digits, 3, x),
                    detail: format!("three-fold sum {x} lies in F^r Γ but its preimage {y} is not a digit"),
                });
            }
        }
    }
    None
}

/// Verifies the four spanning-set axioms for `digits` and F^r. Axiom (i) is
/// checked by coset coverage plus greedy expansion (with breadth-first
/// fallback) from a probe set: the digits, pairwise digit sums, generators of
/// the group and its negatives, and `probes`.
pub fn verify_spanning(g: &Group, digits: &[Element], r: u32, probes: &[Element], caps: &Caps) -> Result<SpanCheck> {
    if digits.is_empty() {
        return Err(Error::Precondition("digit set is empty".into()));
    }
    if r == 0 {
        return Err(Error::Precondition("exponent must be positive".into()));
    }
    let mut ds: Vec<Element> = digits.iter().map(|d| g.canonical(d)).collect::<Result<_>>()?;
    ds.sort();
    ds.dedup();
    let fp = g.power(r);
    if let Some(f) = check_algebraic(g, &fp, &ds) {
        return Ok(SpanCheck::Fails(f));
    }
    let span = SpanningSet::assemble(g, r, ds);
    let covered = BigInt::from(span.by_coset.len());
    if covered != fp.index() {
        let missing = fp.reps().into_iter().find(|c| !span.by_coset.contains_key(c)).unwrap_or_else(|| g.zero());
        return Ok(SpanCheck::Fails(SpanFailure {
            axiom: Axiom::I,
            witness: vec![missing.clone()],
            detail: format!("no digit is congruent to {missing} modulo F^r Γ"),
        }));
    }
    let mut probe: BTreeSet<Element> = span.digits.iter().cloned().collect();
    for a in &span.digits {
        for b in &span.digits {
            probe.insert(g.add(a, b));
        }
    }
    for e in g.generators() {
        probe.insert(g.neg(&e));
        probe.insert(e);
    }
    for p in probes {
        probe.insert(g.canonical(p)?);
    }
    let bfs_caps = Caps { search: caps.search.min(20_000), ..*caps };
    for a in &probe {
        if span.greedy_expansion(a).is_some() {
            continue;
        }
        if span.shortest_expansion(a, &bfs_caps).is_err() {
            return Ok(SpanCheck::Fails(SpanFailure {
                axiom: Axiom::I,
                witness: vec![a.clone()],
                detail: format!("expansion of {a} does not terminate within the step cap"),
            }));
        }
    }
    Ok(SpanCheck::Verified(span))
}

/// Digit set [Σ^(s)]_{F^r} with exponent r s.
pub fn power_span(span: &SpanningSet, s: u32, caps: &Caps) -> Result<SpanningSet> {
    if s == 0 {
        return Err(Error::Precondition("power must be positive".into()));
    }
    if s == 1 {
        return Ok(span.clone());
    }
    let digits: Vec<Element> = span.ball_levels(s).into_keys().collect();
    match verify_spanning(&span.group, &digits, span.r * s, &[], caps)? {
        SpanCheck::Verified(v) => Ok(v),
        SpanCheck::Fails(f) => Err(Error::NotSpanning(format!("power span failed axiom ({}): {}", f.axiom.name(), f.detail))),
    }
}

/// Additions required by axioms (ii)-(iv) for the candidate, empty when closed.
fn closure_additions(g: &Group, fp: &FPower, digits: &BTreeSet<Element>) -> Option<BTreeSet<Element>> {
    let mut add = BTreeSet::new();
    for d in digits {
        let n = g.neg(d);
        if !digits.contains(&n) {
            add.insert(n);
        }
    }
    let ds: Vec<Element> = digits.iter().cloned().collect();
    let levels = sumsets(g, &ds, 5);
    let mut by_coset: BTreeMap<Element, Vec<&Element>> = BTreeMap::new();
    for d in &ds {
        by_coset.entry(fp.reduce(d)).or_default().push(d);
    }
    for x in levels[4].keys() {
        let cands = by_coset.get(&fp.reduce(x))?;
        let pre: Vec<Element> = cands.iter().map(|s| fp.preimage(&g.sub(x, s)).expect("congruent")).collect();
        if pre.iter().any(|y| digits.contains(y)) {
            continue;
        }
        let y = pre.into_iter().min_by(|a, b| size(g, a).cmp(&size(g, b)).then(a.cmp(b))).unwrap();
        add.insert(g.neg(&y));
        add.insert(y);
    }
    for x in levels[2].keys() {
        if let Some(y) = fp.preimage(x) {
            if !digits.contains(&y) {
                add.insert(g.neg(&y));
                add.insert(y);
            }
        }
    }
    Some(add)
}

/// Outcome of `enlarge_span`, with the number of power escalations made.
#[derive(Clone, Debug)]
pub struct Enlarged {
    pub span: SpanningSet,
    pub escalations: u32,
}

/// A verified spanning set containing Σ ∪ X ∪ -X, possibly for a power of F.
/// Closes the candidate under the additions forced by axioms (ii)-(iv); if
/// that does not settle within a few rounds, squares the base and retries.
pub fn enlarge_span(span: &SpanningSet, extra: &[Element], caps: &Caps) -> Result<Enlarged> {
    const ROUNDS: usize = 6;
    const MAX_ESCALATIONS: u32 = 6;
    const MAX_DIGITS: usize = 20_000;
    let g = &span.group;
    let extra: Vec<Element> = extra.iter().map(|x| g.canonical(x)).collect::<Result<_>>()?;
    if extra.iter().all(|x| span.index_of(x).is_some()) {
        return Ok(Enlarged { span: span.clone(), escalations: 0 });
    }
    let mut base = span.clone();
    let mut last = BTreeSet::new();
    for escalation in 0..=MAX_ESCALATIONS {
        let mut cand: BTreeSet<Element> = base.digits.iter().cloned().collect();
        for x in &extra {
            cand.insert(g.neg(x));
            cand.insert(x.clone());
        }
        for _ in 0..ROUNDS {
            let Some(add) = closure_additions(g, &base.fp, &cand) else { break };
            if add.is_empty() {
                let ds: Vec<Element> = cand.iter().cloned().collect();
                if let SpanCheck::Verified(s) = verify_spanning(g, &ds, base.r, &extra, caps)? {
                    return Ok(Enlarged { span: s, escalations: escalation });
                }
                break;
            }
            cand.extend(add);
            if cand.len() > MAX_DIGITS {
                break;
            }
        }
        last = cand;
        if escalation < MAX_ESCALATIONS {
            base = power_span(&base, 2, caps)?;
        }
    }
    Err(Error::CapExceeded(format!(
        "enlarge_span did not close after {MAX_ESCALATIONS} escalations; last candidate has {} digits",
        last.len()
    )))
}

/// Tries boxes of growing radius for growing powers of F and returns the first
/// verified spanning set found. Lattice groups only.
pub fn search_spanning(g: &Group, max_r: u32, max_radius: i64, caps: &Caps) -> Result<Option<SpanningSet>> {
    let Some(dim) = g.dim() else {
        let digits = g.power(1).reps().into_iter().flat_map(|d| [g.neg(&d), d]).collect::<Vec<_>>();
        return Ok(verify_spanning(g, &digits, 1, &[], caps)?.verified());
    };
    let rank = g.free_matrix().map(|m| m.len()).unwrap_or(dim);
    let torsion = g.zero().0.len() - rank;
    let orders: Vec<i64> = match g.spec() {
        crate::group::GroupSpec::LatticeWithTorsion { torsion, .. } => {
            torsion.iter().map(|t| i64::try_from(t).unwrap_or(i64::MAX)).collect()
        }
        _ => Vec::new(),
    };
    let mut tors_reps: Vec<Vec<BigInt>> = vec![Vec::new()];
    for &n in &orders {
        tors_reps = tors_reps
            .into_iter()
            .flat_map(|p| (0..n).map(move |x| {
                let mut q = p.clone();
                q.push(BigInt::from(x));
                q
            }))
            .collect();
        if tors_reps.len() > 5000 {
            return Err(Error::CapExceeded("torsion subgroup too large for box search".into()));
        }
    }
    let _ = torsion;
    for r in 1..=max_r {
        for radius in 1..=max_radius {
            let side = 2 * radius + 1;
            let count = (side as usize).saturating_pow(rank as u32).saturating_mul(tors_reps.len());
            if count > 5000 {
                break;
            }
            let mut digits = Vec::with_capacity(count);
            for idx in 0..(side as usize).pow(rank as u32) {
                let mut v = Vec::with_capacity(dim);
                let mut i = idx;
                for _ in 0..rank {
                    v.push(BigInt::from((i % side as usize) as i64 - radius));
                    i /= side as usize;
                }
                for t in &tors_reps {
                    let mut w = v.clone();
                    w.extend(t.iter().cloned());
                    digits.push(Element(w));
                }
            }
            if let SpanCheck::Verified(s) = verify_spanning(g, &digits, r, &[], caps)? {
                return Ok(Some(s));
            }
        }
    }
    Ok(None)
}

/// λ_Σ with a memo table. The cache sits behind a `RefCell`, so a
/// `LengthFunction` is confined to one thread; clone it per thread.
#[derive(Clone, Debug)]
pub struct LengthFunction {
    span: SpanningSet,
    caps: Caps,
    memo: RefCell<BTreeMap<Element, u32>>,
}

impl LengthFunction {
    pub fn new(span: &SpanningSet, caps: &Caps) -> LengthFunction {
        LengthFunction { span: span.clone(), caps: *caps, memo: RefCell::new(BTreeMap::new()) }
    }

    pub fn span(&self) -> &SpanningSet {
        &self.span
    }

    /// Length ℓ of the shortest expansion.
    pub fn length(&self, a: &Element) -> Result<u32> {
        let a = self.span.group.canonical(a)?;
        if let Some(&l) = self.memo.borrow().get(&a) {
            return Ok(l);
        }
        let l = self.span.shortest_expansion(&a, &self.caps)?.len() as u32;
        self.memo.borrow_mut().insert(a, l);
        Ok(l)
    }

    /// λ(a) = 2^ℓ.
    pub fn lambda(&self, a: &Element) -> Result<BigUint> {
        Ok(BigUint::one() << self.length(a)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EigenWitness {
    /// A factor of the characteristic polynomial with a root of modulus < 1.
    InsideUnitDisk { factor: Vec<BigInt> },
    /// A factor all of whose roots lie on the unit circle.
    OnUnitCircle { factor: Vec<BigInt> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateVerdict {
    /// All eigenvalues have modulus > 1. `r_hint` is the least r for which F^r
    /// has all eigenvalues of modulus > 2, if found below 64.
    Admits { r_hint: Option<u32> },
    Rejects(EigenWitness),
}

fn integer_primitive(p: &Poly) -> Vec<BigInt> {
    let l = p.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.0.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let mut out: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
    if out.last().is_some_and(|c| c.is_negative()) {
        out.iter_mut().for_each(|c| *c = -c.clone());
    }
    out
}

/// True when the nonconstant polynomial has a root on the unit circle.
/// Only called on common factors of χ and its reversal, which are
/// palindromic once roots ±1 are excluded.
fn has_unit_circle_root(g: &Poly) -> bool {
    let one = BigRational::one();
    if g.eval(&one).is_zero() || g.eval(&-one.clone()).is_zero() {
        return true;
    }
    let n = g.degree();
    if n % 2 == 1 || (0..=n).any(|i| g.0[i] != g.0[n - i]) {
        return false;
    }
    // g(x) = x^k h(x + 1/x) with x^j + x^-j = T_j(y), T_j = y T_{j-1} - T_{j-2}.
    let k = n / 2;
    let y = Poly(vec![BigRational::zero(), one.clone()]);
    let mut t_prev = Poly(vec![BigRational::from_integer(BigInt::from(2))]);
    let mut t_cur = y.clone();
    let mut h = Poly(vec![g.0[k].clone()]);
    for j in 1..=k {
        if j > 1 {
            let next = y.mul(&t_cur).sub(&t_prev);
            t_prev = t_cur;
            t_cur = next;
        }
        h = h.add(&t_cur.scale(&g.0[k + j]));
    }
    let two = BigRational::from_integer(BigInt::from(2));
    h.real_roots_in(&-two.clone(), &two) > 0
}

/// Decides whether every eigenvalue of F (on the free part) has modulus > 1.
pub fn eigen_gate(g: &Group) -> GateVerdict {
    let Some(m) = g.free_matrix() else {
        return GateVerdict::Admits { r_hint: Some(1) };
    };
    let chi = Poly::from_ints(&crate::linalg::charpoly(&m));
    if !chi.reversed().schur_stable() {
        let common = chi.gcd(&chi.reversed());
        let witness = if common.degree() > 0 && has_unit_circle_root(&common) {
            EigenWitness::OnUnitCircle { factor: integer_primitive(&common) }
        } else if common.degree() > 0 {
            EigenWitness::InsideUnitDisk { factor: integer_primitive(&common) }
        } else {
            EigenWitness::InsideUnitDisk { factor: integer_primitive(&chi) }
        };
        return GateVerdict::Rejects(witness);
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let r_hint = (1..64u32).find(|&r| {
        let mr = crate::linalg::pow(&m, r);
        let c = Poly::from_ints(&crate::linalg::charpoly(&mr));
        c.scale_arg(&two).reversed().schur_stable()
    });
    GateVerdict::Admits { r_hint }
}
