mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use fa_core::automata::{Dfa, Tracks};
use fa_core::fauto::{compile_formula, f_cycle, AutomaticSet, Expr, Formula};
use fa_core::modeltheory::ladder::verify_ladder;
use fa_core::modeltheory::polysnip::polysnip_phi;
use fa_core::modeltheory::*;
use fa_core::presburger::PresburgerRel;
use fa_core::spanning::SpanningSet;
use fa_core::{Caps, Element, Group};
use proptest::prelude::*;

fn caps() -> Caps {
    Caps::default()
}

fn letter(span: &SpanningSet, e: &Element) -> u32 {
    span.index_of(e).unwrap() as u32
}

/// {(t^i, t^j) : i ≤ j} over 𝔽₇[t]².
fn order_set(span: &SpanningSet) -> AutomaticSet {
    let g = span.group();
    let (z, o) = (letter(span, &g.zero()), letter(span, &tpow(g, 0)));
    let tracks = Tracks::uniform(2, span.len() as u32, z);
    let d = Dfa::from_fn(tracks, 4, 0, vec![false, false, true, false], move |q, l| match (q, l[0] == o, l[1] == o, l[0] == z, l[1] == z) {
        (0, _, _, true, true) => 0,
        (0, true, false, _, true) => 1,
        (0, true, true, _, _) => 2,
        (1, false, false, true, true) => 1,
        (1, _, true, true, _) => 2,
        (2, _, _, true, true) => 2,
        _ => 3,
    });
    AutomaticSet::from_language(span, 2, &d, caps()).unwrap()
}

fn t_powers(span: &SpanningSet) -> AutomaticSet {
    let g = span.group();
    let d = single_digit_lang(span.len() as u32, letter(span, &g.zero()), letter(span, &tpow(g, 0)));
    AutomaticSet::from_language(span, 1, &d, caps()).unwrap()
}

fn t_power_edp(g: &Group) -> EdpSet {
    EdpSet::from_formula(g, 1, vec![vec![poly(g, &[0])], vec![poly(g, &[1])]], "x2 = 1", caps()).unwrap()
}

/// Values of all exponent tuples with entries ≤ b satisfying `phi`, by
/// direct word evaluation.
fn brute_values(e: &EdpSet, b: u64) -> BTreeMap<Element, Vec<Vec<u64>>> {
    let n = e.words().len();
    let mut out: BTreeMap<Element, Vec<Vec<u64>>> = BTreeMap::new();
    let mut k = vec![0u64; n];
    loop {
        if e.phi().contains_u64(&k).unwrap() {
            let mut w = Vec::new();
            for (i, s) in e.words().iter().enumerate() {
                for _ in 0..k[i] {
                    w.extend(s.iter().cloned());
                }
            }
            out.entry(e.group().eval_word(&w, e.r())).or_default().push(k.clone());
        }
        let mut i = 0;
        while i < n && k[i] == b {
            k[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        k[i] += 1;
    }
    out
}

#[test]
fn membership_examples() {
    let span = f7();
    let g = span.group();
    let a = polysnip_set(g, 3, caps()).unwrap();
    // i = 1, j = 2
    let x = poly(g, &[0, -3, -3, 3]);
    assert!(a.member(&x, &caps()).unwrap());
    // i = j = 2: 3t⁴ − 6t²
    assert!(a.member(&poly(g, &[0, 0, -6, 0, 3]), &caps()).unwrap());
    assert!(!a.member(&poly(g, &[0, 0, 4]), &caps()).unwrap());
    let tp = t_power_edp(g);
    assert!(tp.member(&tpow(g, 5), &caps()).unwrap());
    assert!(!tp.member(&poly(g, &[1, 0, 0, 0, 0, 1]), &caps()).unwrap());
    assert!(!tp.member(&g.zero(), &caps()).unwrap());
    let none = EdpSet::new(g, 1, vec![vec![poly(g, &[1])]], PresburgerRel::empty(1)).unwrap();
    assert!(!none.member(&g.zero(), &caps()).unwrap());
    assert!(!EdpSet::empty(g).member(&g.zero(), &caps()).unwrap());
}

/// Small EDP sets: words of one or two letters over small digits, Φ from a
/// fixed list.
fn random_edps(g: &Group, digits: &[i64], seed: u64) -> Vec<EdpSet> {
    let formulas = ["x1 <= x2", "x1 = x2 + 1", "x2 = 1", "x1 mod 2 = 0 & x2 <= 3", "x1 + x2 = 4", "true", "x1 = 2*x2"];
    let mut rng = seed;
    let mut next = |n: usize| {
        rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((rng >> 33) as usize) % n
    };
    (0..10)
        .map(|_| {
            let words: Vec<Vec<Element>> = (0..2)
                .map(|_| (0..1 + next(2)).map(|_| g.canonical(&int(digits[next(digits.len())])).unwrap()).collect())
                .collect();
            let f = formulas[next(formulas.len())];
            EdpSet::from_formula(g, 1, words, f, caps()).unwrap()
        })
        .collect()
}

fn check_against_brute(e: &EdpSet, extra: &[Element]) {
    let small = brute_values(e, 6);
    let mut cands: BTreeSet<Element> = small.keys().cloned().collect();
    cands.extend(extra.iter().cloned());
    let mut wide: Option<BTreeMap<Element, Vec<Vec<u64>>>> = None;
    for x in &cands {
        let m = e.member(x, &caps()).unwrap();
        if small.contains_key(x) {
            assert!(m, "{x} has a witness but was rejected");
        } else if m {
            // positive without a small witness: demand one a bit further out
            let w = wide.get_or_insert_with(|| brute_values(e, 10));
            assert!(w.contains_key(x), "{x} accepted without any witness ≤ 10");
        }
    }
}

#[test]
fn membership_matches_enumeration() {
    let span = z4();
    let g = span.group().clone();
    let extra: Vec<Element> = (-40..=40).map(int).collect();
    for e in random_edps(&g, &[-2, -1, 0, 1, 2, 3], 7) {
        check_against_brute(&e, &extra);
    }
    let span = f7();
    let g = span.group().clone();
    let extra: Vec<Element> = all_polys(7, 2).iter().map(|c| poly(&g, c)).collect();
    for e in random_edps(&g, &[0, 1, 2, 3, 6], 11) {
        check_against_brute(&e, &extra);
    }
}

#[test]
fn exponent_relations() {
    let span = z4();
    let g = span.group().clone();
    let f = Formula::eq(Expr::var("x"), Expr::var("y"));
    let diag = compile_formula(&span, &f, &["x", "y"], &BTreeMap::new(), caps()).unwrap();
    let rel = exponent_relation(&diag, &[vec![int(1)], vec![int(1)]], 1).unwrap();
    for i in 0..=8u64 {
        for j in 0..=8u64 {
            assert_eq!(rel.contains_u64(&[i, j]).unwrap(), i == j, "({i},{j})");
        }
    }
    let whole = AutomaticSet::whole(&span, 2, caps());
    let rel = exponent_relation(&whole, &[vec![int(1), int(3)], vec![int(-2)]], 1).unwrap();
    assert!(rel.not().is_empty());

    // 𝔽₇[t]: which 0^k 1^l lie in t^ℕ
    let span = f7();
    let g7 = span.group().clone();
    let tp = t_powers(&span);
    let rel = exponent_relation(&tp, &[vec![g7.zero(), tpow(&g7, 0)]], 1).unwrap();
    for k in 0..=8u64 {
        for l in 0..=8u64 {
            let mut w = vec![g7.zero(); k as usize];
            w.extend(std::iter::repeat_n(tpow(&g7, 0), l as usize));
            let truth = tp.member(&[g7.eval_word(&w, 1)]).unwrap();
            assert_eq!(rel.contains_u64(&[k, l]).unwrap(), truth, "({k},{l})");
        }
    }
    // and with F² reading: 1^k 2^l read in steps of t²
    let rel = exponent_relation(&tp, &[vec![tpow(&g7, 0), poly(&g7, &[2])]], 2).unwrap();
    for k in 0..=8u64 {
        for l in 0..=8u64 {
            let mut w = vec![tpow(&g7, 0); k as usize];
            w.extend(std::iter::repeat_n(poly(&g7, &[2]), l as usize));
            let truth = tp.member(&[g7.eval_word(&w, 2)]).unwrap();
            assert_eq!(rel.contains_u64(&[k, l]).unwrap(), truth, "F² ({k},{l})");
        }
    }
    // Z4 with an addition graph: [1^a] + [2^b] = [1^c 2^d]
    let f = Formula::eq(Expr::add(Expr::var("x"), Expr::var("y")), Expr::var("z"));
    let add = compile_formula(&z4(), &f, &["x", "y", "z"], &BTreeMap::new(), caps()).unwrap();
    let rel = exponent_relation(&add, &[vec![int(1)], vec![int(2)], vec![int(1), int(2)]], 1).unwrap();
    for a in 0..=5u64 {
        for b in 0..=5u64 {
            for c in 0..=4u64 {
                for d in 0..=4u64 {
                    let x = g.eval_word(&vec![int(1); a as usize], 1);
                    let y = g.eval_word(&vec![int(2); b as usize], 1);
                    let mut w = vec![int(1); c as usize];
                    w.extend(vec![int(2); d as usize]);
                    let z = g.eval_word(&w, 1);
                    let truth = g.add(&x, &y) == z;
                    assert_eq!(rel.contains_u64(&[a, b, c, d]).unwrap(), truth, "({a},{b},{c},{d})");
                }
            }
        }
    }
}

#[test]
fn normal_forms() {
    let span = f7();
    let g = span.group().clone();
    let cases = [
        (vec![vec![poly(&g, &[1])], vec![poly(&g, &[0]), poly(&g, &[2])]], "x1 <= x2"),
        (vec![vec![poly(&g, &[0])], vec![poly(&g, &[1])]], "x2 = 1"),
        (vec![vec![poly(&g, &[3]), poly(&g, &[0]), poly(&g, &[1])], vec![poly(&g, &[0]), poly(&g, &[5])]], "x1 + 1 = x2 | x1 = 0"),
        (vec![vec![poly(&g, &[1]), poly(&g, &[1])], vec![], vec![poly(&g, &[4])]], "x1 = x3 & x2 = 2"),
    ];
    for (words, f) in cases {
        let e = EdpSet::from_formula(&g, 1, words, f, caps()).unwrap();
        let nf = e.normal_form(&caps()).unwrap();
        assert!(nf.is_single_letter());
        if e.is_single_letter() {
            assert_eq!((nf.words(), nf.r()), (e.words(), e.r()));
        }
        let deg8 = |x: &Element| x.0.len() <= 9;
        for x in brute_values(&e, 8).keys().filter(|x| deg8(x)) {
            assert!(nf.member(x, &caps()).unwrap(), "{f}: normal form misses {x}");
        }
        for x in nf.values_within(8).unwrap().iter().filter(|x| deg8(x)) {
            assert!(e.member(x, &caps()).unwrap(), "{f}: normal form adds {x}");
        }
        // non-members stay non-members on a sample
        for c in all_polys(7, 2) {
            let x = poly(&g, &c);
            assert_eq!(nf.member(&x, &caps()).unwrap(), e.member(&x, &caps()).unwrap(), "{f}: {x}");
        }
    }
}

#[test]
fn unions_are_disjunctions() {
    let span = z4();
    let g = span.group().clone();
    let es = random_edps(&g, &[-2, -1, 0, 1, 2], 3);
    for pair in es.chunks(2) {
        let a = &pair[0];
        let b = pair[1].with_exponent(1).unwrap();
        let b2 = EdpSet::new(&g, 2, b.words().to_vec(), b.phi().clone()).unwrap();
        for other in [&b, &b2] {
            let u = a.union(other).unwrap();
            for x in -30..=30 {
                let x = int(x);
                let want = a.member(&x, &caps()).unwrap() || other.member(&x, &caps()).unwrap();
                assert_eq!(u.member(&x, &caps()).unwrap(), want, "{x}");
            }
        }
    }
}

#[test]
fn sparse_sets_are_edp() {
    let span = f7();
    let g = span.group().clone();
    let tp = t_powers(&span);
    let two = tp.union(&tp.translate(&[g.zero()]).unwrap()).unwrap();
    let c1 = f_cycle(&span, &tpow(&g, 0), 1, caps()).unwrap();
    let c2 = f_cycle(&span, &poly(&g, &[2, 1]), 2, caps()).unwrap();
    let span4 = z4();
    let pow4 = f_cycle(&span4, &int(3), 1, caps()).unwrap();
    for (set, ball) in [(&tp, 3u32), (&two, 3), (&c1, 3), (&c2, 3), (&pow4, 5)] {
        let e = EdpSet::from_sparse(set).unwrap();
        for (x, _) in fa_core::fauto::ball_words(set.span(), ball) {
            assert_eq!(e.member(&x, &caps()).unwrap(), set.member(std::slice::from_ref(&x)).unwrap(), "{x}");
        }
    }
}

#[test]
fn trace_relations() {
    let span = f7();
    let g = span.group().clone();
    let e = t_power_edp(&g).normal_form(&caps()).unwrap();
    let n = e.words().len();
    let empty = AutomaticSet::empty(&span, 2, caps());
    assert!(e.trace_relation(&empty, &caps()).unwrap().is_empty());

    let f = Formula::eq(Expr::var("x"), Expr::var("y"));
    let diag = compile_formula(&span, &f, &["x", "y"], &BTreeMap::new(), caps()).unwrap();
    let sim = e.trace_relation(&diag, &caps()).unwrap();
    let tuples = e.phi().enumerate(3).unwrap();
    assert!(!tuples.is_empty());
    let all: Vec<Vec<u64>> = {
        let mut v = vec![vec![]];
        for _ in 0..n {
            v = v.into_iter().flat_map(|p: Vec<u64>| (0..=3u64).map(move |x| [p.clone(), vec![x]].concat())).collect();
        }
        v
    };
    for k1 in &all {
        for k2 in &all {
            let want = e.phi().contains_u64(k1).unwrap() && e.phi().contains_u64(k2).unwrap() && e.value(k1) == e.value(k2);
            assert_eq!(sim.contains_u64(&[k1.clone(), k2.clone()].concat()).unwrap(), want);
        }
    }

    // t^i + t^j is never a power of t
    let f = Formula::eq(Expr::add(Expr::var("x"), Expr::var("y")), Expr::var("z"));
    let add = compile_formula(&span, &f, &["x", "y", "z"], &BTreeMap::new(), caps()).unwrap();
    assert!(e.trace_relation(&add, &caps()).unwrap().is_empty());
    for i in 0..=8 {
        for j in 0..=8 {
            for k in 0..=8 {
                assert_ne!(g.add(&tpow(&g, i), &tpow(&g, j)), tpow(&g, k));
            }
        }
    }
}

#[test]
fn ladders() {
    let span = f7();
    let g = span.group().clone();
    let ord = order_set(&span);
    assert!(ord.member(&[tpow(&g, 1), tpow(&g, 3)]).unwrap());
    assert!(!ord.member(&[tpow(&g, 3), tpow(&g, 1)]).unwrap());
    for n in 1..=3 {
        match ladder_search(&ord, n, LadderMode::Bounded(6)).unwrap() {
            LadderOutcome::Found(l) => {
                assert_eq!(l.n(), n);
                assert!(verify_ladder(&ord, &l).unwrap());
            }
            o => panic!("order set, N={n}: {o:?}"),
        }
    }
    // the ladder (t^i, 0), (0, t^j)
    let l = Ladder {
        a: (0..4).map(|i| vec![tpow(&g, i), g.zero()]).collect(),
        b: (0..4).map(|j| vec![g.zero(), tpow(&g, j)]).collect(),
    };
    assert!(verify_ladder(&ord, &l).unwrap());

    let c1 = f_cycle(&span, &tpow(&g, 0), 1, caps()).unwrap();
    assert_eq!(ladder_search(&c1, 3, LadderMode::Bounded(10)).unwrap(), LadderOutcome::NoneWithin(10));
    assert!(matches!(ladder_search(&c1, 2, LadderMode::Bounded(4)).unwrap(), LadderOutcome::Found(_)));
    assert!(matches!(ladder_search(&c1, 2, LadderMode::Exact).unwrap(), LadderOutcome::Found(_)));
    assert_eq!(ladder_search(&c1, 3, LadderMode::Exact).unwrap(), LadderOutcome::NoLadder);
    let none = AutomaticSet::empty(&span, 1, caps());
    assert_eq!(ladder_search(&none, 1, LadderMode::Bounded(5)).unwrap(), LadderOutcome::NoneWithin(5));
    assert_eq!(ladder_search(&none, 1, LadderMode::Exact).unwrap(), LadderOutcome::NoLadder);
}

/// Brute force over C(1;F) ∩ ball: no 3-ladder with a₁ = 0 and every sum
/// a_i + b_j (i ≤ j) of degree < 7.
#[test]
fn cycle_has_no_three_ladder_by_brute_force() {
    let span = f7();
    let g = span.group().clone();
    let cyc: Vec<Element> = (0..7).map(|n| poly(&g, &vec![1; n + 1])).collect();
    let inc = |x: &Element| cyc.contains(x) || (x.0.len() > 7 && x.0.iter().all(|c| *c == 1.into()));
    for b in itertools3(&cyc) {
        for x2 in &cyc {
            let a2 = g.sub(x2, &b[1]);
            if inc(&g.add(&a2, &b[0])) || !inc(&g.add(&a2, &b[2])) {
                continue;
            }
            for x3 in &cyc {
                let a3 = g.sub(x3, &b[2]);
                assert!(inc(&g.add(&a3, &b[0])) || inc(&g.add(&a3, &b[1])), "ladder found");
            }
        }
    }
}

fn itertools3(v: &[Element]) -> Vec<[Element; 3]> {
    let mut out = Vec::new();
    for a in v {
        for b in v {
            for c in v {
                out.push([a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    out
}

#[test]
fn polysnip_small() {
    let g = f7().group().clone();
    let rep = polysnip_demo(7, 6, caps()).unwrap();
    let chosen = rep.chosen().expect("one reading works");
    assert_eq!(chosen.coefficient, 3);
    assert_eq!(chosen.checks[0].found, 7);
    let strings = &rep.readings[1];
    assert!(!strings.passed());
    assert!(!polysnip_phi(&g, 3, &poly(&g, &[0, 0, 4]), caps()).unwrap());
    assert!(polysnip_phi(&g, 3, &tpow(&g, 4), caps()).unwrap());
}

/// Brute-force both readings at p = 7 on all polynomials of degree ≤ 3,
/// with A given by its closed form.
#[test]
fn polysnip_readings_by_brute_force() {
    let g = f7().group().clone();
    let d = 3usize;
    for (c, works) in [(3i64, true), (1, false)] {
        let mut a = BTreeSet::new();
        for i in 0..=2 * d + 2 {
            a.insert(tpow(&g, i));
            a.insert(g.scale(&2.into(), &tpow(&g, i)));
        }
        for i in 1..=d + 2 {
            for j in 1..=d + 2 {
                let e = g.sub(&g.sub(&tpow(&g, i + j), &tpow(&g, i)), &tpow(&g, j));
                a.insert(g.scale(&c.into(), &e));
            }
        }
        let s = |k: i64, x: &Element| g.scale(&k.into(), x);
        let phi = |x: &Element| a.contains(x) && a.contains(&s(2, x));
        // 4 = 2⁻¹ mod 7, 5 = 3⁻¹
        let psi = |x: &Element| {
            let y = s(3, x);
            a.contains(&y) && !phi(&y) && !phi(&s(4, &y))
        };
        let polys: Vec<Element> = all_polys(7, d + 1).iter().map(|v| poly(&g, v)).collect();
        let phi_set: BTreeSet<Element> = polys.iter().filter(|x| phi(x)).cloned().collect();
        let want: BTreeSet<Element> = (0..=d).map(|i| tpow(&g, i)).collect();
        assert_eq!(phi_set, want);
        let psi_set: BTreeSet<Element> = polys.iter().filter(|x| psi(x)).cloned().collect();
        let mut b = BTreeSet::new();
        for i in 1..d {
            for j in 1..=d - i {
                b.insert(g.sub(&g.sub(&tpow(&g, i + j), &tpow(&g, i)), &tpow(&g, j)));
            }
        }
        assert_eq!(psi_set == b, works, "coefficient {c}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Values of Φ-tuples are members; anything accepted has a witness.
    #[test]
    fn membership_is_sound(k in proptest::collection::vec(0u64..5, 3), letters in proptest::collection::vec(0i64..7, 3), y in proptest::collection::vec(0i64..7, 0..4)) {
        let g = f7().group().clone();
        let words = letters.iter().map(|&c| vec![poly(&g, &[c])]).collect();
        let e = EdpSet::from_formula(&g, 1, words, "x1 <= x2 + x3", caps()).unwrap();
        if k[0] <= k[1] + k[2] {
            prop_assert!(e.member(&e.value(&k), &caps()).unwrap());
        }
        let y = poly(&g, &y);
        if e.member(&y, &caps()).unwrap() {
            prop_assert!(brute_values(&e, 8).contains_key(&y));
        }
    }
}

#[test]
fn library_constructions_match_hand_built_sets() {
    let span = f7();
    let g = span.group().clone();
    let one = tpow(&g, 0);
    assert!(fa_core::fauto::order_set(&span, &one, caps()).unwrap().same_set(&order_set(&span)).unwrap());
    assert!(fa_core::fauto::f_powers(&span, &one, caps()).unwrap().same_set(&t_powers(&span)).unwrap());
    let three = fa_core::fauto::f_powers(&span, &poly(&g, &[3]), caps()).unwrap();
    for k in 0..6 {
        let mut c = vec![0i64; k + 1];
        c[k] = 3;
        assert!(three.member(&[poly(&g, &c)]).unwrap());
    }
    assert!(!three.member(&[tpow(&g, 2)]).unwrap());
}
