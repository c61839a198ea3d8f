//! Minimal representatives, F-sparsity, sums of sparse sets and F-cycles.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::carry::{CarrySystem, Equation, Term};
use super::{compile_formula, AutomaticSet, Expr, Formula};
use crate::automata::dfa::{build, Builder};
use crate::automata::mdd::NodeId;
use crate::automata::{is_sparse, sparse_decompose, Dfa, SimpleSparseTerm, Sparsity, Tracks};
use crate::error::{Caps, Error, Result};
use crate::group::Element;
use crate::spanning::SpanningSet;

/// Order automaton over interleaved tracks σ₀ τ₀ σ₁ τ₁ …: accepts when the
/// last letter of τ is padding or τ precedes σ (equal length, compared from
/// the most significant letter, letters compared coordinate by coordinate).
fn order_dfa(tracks: &Tracks, m: usize) -> Dfa {
    let radix = tracks.radix().to_vec();
    let pad = tracks.pad().to_vec();
    // state: (comparison so far: 0 equal, 1 τ<σ, 2 τ>σ; last τ letter was padding)
    let (d, _) = build(
        tracks.clone(),
        (0u8, false),
        usize::MAX,
        |&(c, last)| last || c == 1,
        |&(c, _), b| {
            let mut memo = BTreeMap::new();
            Ok(order_rec(b, &radix, &pad, m, 0, 0, 0, true, c, &mut memo))
        },
    )
    .expect("no cap");
    d
}

#[allow(clippy::too_many_arguments)]
fn order_rec(
    b: &mut Builder<(u8, bool)>,
    radix: &[u32],
    pad: &[u32],
    m: usize,
    t: usize,
    lc: u8,
    sigma: u32,
    taupad: bool,
    prev: u8,
    memo: &mut BTreeMap<(usize, u8, u32, bool), NodeId>,
) -> NodeId {
    if t == 2 * m {
        let c = if lc == 0 { prev } else { lc };
        return b.target((c, taupad));
    }
    let key = (t, lc, sigma, taupad);
    if let Some(&n) = memo.get(&key) {
        return n;
    }
    let kids: Vec<NodeId> = (0..radix[t])
        .map(|d| {
            if t % 2 == 0 {
                order_rec(b, radix, pad, m, t + 1, lc, d, taupad, prev, memo)
            } else {
                let nlc = if lc != 0 {
                    lc
                } else if d < sigma {
                    1
                } else if d > sigma {
                    2
                } else {
                    0
                };
                order_rec(b, radix, pad, m, t + 1, nlc, 0, taupad && d == pad[t], prev, memo)
            }
        })
        .collect();
    let n = b.mdd.branch(t as u32, kids);
    memo.insert(key, n);
    n
}

/// The language L̃ of least words: for each element of the set, its
/// shortest word, ties broken by the least letter at the most significant
/// differing position.
pub fn min_representatives(a: &AutomaticSet) -> Result<Dfa> {
    let span = a.span();
    let g = span.group();
    let m = a.arity();
    let digits = span.digits().to_vec();
    let sys = CarrySystem {
        alphabets: vec![digits; 2 * m],
        equations: (0..m).map(|i| Equation { terms: vec![Term::new(2 * i, 1), Term::new(2 * i + 1, -1)], constant: g.zero() }).collect(),
    };
    let (eq, _) = sys.automaton(span.power(), a.caps().carry).map_err(|e| super::carry_error(e, span, a.caps()))?;
    let order = order_dfa(eq.tracks(), m);
    let k = eq.intersect(&order)?;
    let taus: Vec<usize> = (0..m).map(|i| 2 * i + 1).collect();
    let beaten = k.project(&taus, false)?;
    a.dfa().difference(&beaten)
}

#[derive(Clone, Debug)]
pub enum FSparsity {
    Sparse { degree: usize, terms: Vec<SimpleSparseTerm> },
    NotSparse(Sparsity),
}

impl FSparsity {
    pub fn is_sparse(&self) -> bool {
        matches!(self, FSparsity::Sparse { .. })
    }
}

/// Decides F-sparsity through the sparsity of L̃.
pub fn is_f_sparse(a: &AutomaticSet) -> Result<FSparsity> {
    let lt = min_representatives(a)?;
    Ok(match is_sparse(&lt) {
        Sparsity::Sparse { degree } => FSparsity::Sparse { degree, terms: sparse_decompose(&lt, a.caps().search)? },
        w => FSparsity::NotSparse(w),
    })
}

/// A + B for F-sparse A and B, through the formula ∃x∃y (A(x) ∧ B(y) ∧ x+y=z).
pub fn sparse_sum(a: &AutomaticSet, b: &AutomaticSet) -> Result<AutomaticSet> {
    for (name, s) in [("left", a), ("right", b)] {
        if !is_f_sparse(s)?.is_sparse() {
            return Err(Error::Precondition(format!("{name} summand is not F-sparse")));
        }
    }
    sum(a, b)
}

/// A + B without the sparsity check.
pub fn sum(a: &AutomaticSet, b: &AutomaticSet) -> Result<AutomaticSet> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch { expected: a.arity(), got: b.arity() });
    }
    let (a, b) = super::align(a, b)?;
    let m = a.arity();
    let v = |p: &str, i: usize| Expr::Var(format!("{p}{i}"));
    let mut body = Formula::and(
        Formula::member("A", (0..m).map(|i| v("x", i)).collect()),
        Formula::member("B", (0..m).map(|i| v("y", i)).collect()),
    );
    for i in 0..m {
        body = Formula::and(body, Formula::eq(v("z", i), Expr::add(v("x", i), v("y", i))));
    }
    for i in (0..m).rev() {
        body = Formula::exists(&format!("y{i}"), body);
    }
    for i in (0..m).rev() {
        body = Formula::exists(&format!("x{i}"), body);
    }
    let mut sets = BTreeMap::new();
    sets.insert(String::from("A"), a.clone());
    sets.insert(String::from("B"), b);
    let free: Vec<String> = (0..m).map(|i| format!("z{i}")).collect();
    let free: Vec<&str> = free.iter().map(|s| s.as_str()).collect();
    compile_formula(a.span(), &body, &free, &sets, *a.caps())
}

/// {F^i a : i ∈ ℕ}.
pub fn f_powers(span: &SpanningSet, a: &Element, caps: Caps) -> Result<AutomaticSet> {
    let (digits, zi, ai) = zero_and(span, a)?;
    let d = Dfa::from_fn(Tracks::single(2, zi), 3, 0, vec![false, true, false], move |q, l| match (q, l[0]) {
        (0, x) if x == zi => 0,
        (0, x) if x == ai => 1,
        (1, x) if x == zi => 1,
        _ => 2,
    });
    AutomaticSet::from_digits(span, 1, &digits, 1, &d, caps)
}

/// {(F^i a, F^j a) : i ≤ j}, the standard set with the order property.
pub fn order_set(span: &SpanningSet, a: &Element, caps: Caps) -> Result<AutomaticSet> {
    let (digits, zi, ai) = zero_and(span, a)?;
    // 0: before either a; 1: first a seen; 2: both seen; 3: dead
    let d = Dfa::from_fn(Tracks::uniform(2, 2, zi), 4, 0, vec![false, false, true, false], move |q, l| {
        let (x, y) = (l[0] == ai, l[1] == ai);
        match (q, x, y) {
            (0, false, false) => 0,
            (0, true, false) => 1,
            (0, true, true) => 2,
            (1, false, false) => 1,
            (1, false, true) => 2,
            (2, false, false) => 2,
            _ => 3,
        }
    });
    AutomaticSet::from_digits(span, 2, &digits, 1, &d, caps)
}

/// The digit list {0, a} with the indices of 0 and a; a must be nonzero.
fn zero_and(span: &SpanningSet, a: &Element) -> Result<(Vec<Element>, u32, u32)> {
    let g = span.group();
    let a = g.canonical(a)?;
    if g.is_zero(&a) {
        return Err(Error::Precondition("the generator must be nonzero".into()));
    }
    let mut digits = vec![g.zero(), a.clone()];
    digits.sort();
    let zi = digits.iter().position(|d| g.is_zero(d)).expect("zero listed") as u32;
    Ok((digits, zi, 1 - zi))
}

/// C(a; F^δ) = {a + F^δ a + ⋯ + F^{δn} a : n ≥ 0}.
pub fn f_cycle(span: &SpanningSet, a: &Element, delta: u32, caps: Caps) -> Result<AutomaticSet> {
    if delta == 0 {
        return Err(Error::Precondition("cycle step must be positive".into()));
    }
    let g = span.group();
    let a = g.canonical(a)?;
    let mut digits = vec![g.zero(), a.clone()];
    digits.sort();
    digits.dedup();
    let ai = digits.iter().position(|d| *d == a).unwrap() as u32;
    let zi = digits.iter().position(|d| g.is_zero(d)).unwrap() as u32;
    let tracks = Tracks::single(digits.len() as u32, zi);
    // a (0^{δ-1} a)*: state 0 start, 1 after an a, 1+k after k zeros, last is dead.
    let dl = delta;
    let dead = dl + 1;
    let mut fin = vec![false; dead as usize + 1];
    fin[1] = true;
    let d = Dfa::from_fn(tracks, dead as usize + 1, 0, fin, move |q, l| {
        let x = l[0];
        match q {
            0 if x == ai => 1,
            q if q >= 1 && q < dead => {
                let zeros = q - 1;
                if zeros + 1 == dl && x == ai {
                    1
                } else if zeros + 1 < dl && x == zi {
                    q + 1
                } else {
                    dead
                }
            }
            _ => dead,
        }
    });
    AutomaticSet::from_digits(span, 1, &digits, 1, &d.minimize(), caps)
}

/// γ + C(a₁;F^{δ₁}) + ⋯ + C(a_k;F^{δ_k}).
pub fn groupless_f_set(span: &SpanningSet, gamma: &Element, cycles: &[(Element, u32)], caps: Caps) -> Result<AutomaticSet> {
    let mut acc = AutomaticSet::finite(span, &[vec![span.group().zero()]], 1, caps)?;
    for (a, d) in cycles {
        let c = f_cycle(span, a, *d, caps)?;
        acc = sum(&acc, &c)?;
    }
    acc.translate(&[gamma.clone()])
}
