//! Acceptance run: one line per criterion, exit status 1 if any fails.
//!
//! Oracles here are deliberately naive (word evaluation, degree and digit
//! arithmetic) so they share no code path with the library beyond group
//! arithmetic.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use fa_core::automata::count::count_words;
use fa_core::automata::sparse::Sparsity;
use fa_core::fauto::reps::sum;
use fa_core::fauto::{
    compile_formula, f_cycle, f_powers, from_kernel, is_f_sparse, kernel_of, min_representatives, order_set, AutomaticSet,
    Expr, FSparsity, Formula,
};
use fa_core::modeltheory::exponent::exponent_relation;
use fa_core::modeltheory::ladder::verify_ladder;
use fa_core::modeltheory::*;
use fa_core::presburger::decide;
use fa_core::spanning::{eigen_gate, power_span, verify_spanning, Axiom, GateVerdict, LengthFunction, SpanCheck};
use fa_core::{Caps, Element, Group, GroupSpec};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn caps() -> Caps {
    Caps::default()
}

fn lattice(rows: &[&[i64]]) -> Group {
    let endo = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    Group::new(GroupSpec::FreeLattice { endo }).unwrap()
}

fn small(e: &Element) -> i64 {
    e.0.first().map_or(0, |x| x.to_i64().unwrap())
}

/// Shortest balanced base-4 expansion length over digits −2..2.
fn z4_len(x: i64, memo: &mut HashMap<i64, u32>) -> u32 {
    if x == 0 {
        return 0;
    }
    if let Some(&l) = memo.get(&x) {
        return l;
    }
    let l = (-2..=2i64).filter(|s| (x - s).rem_euclid(4) == 0).map(|s| 1 + z4_len((x - s) / 4, memo)).min().unwrap();
    memo.insert(x, l);
    l
}

/// Integers of balanced base-4 length ≤ n, by the digit oracle.
fn z4_ball(n: u32, memo: &mut HashMap<i64, u32>) -> Vec<i64> {
    let m = (4i64.pow(n) - 1) / 3 * 2;
    (-m..=m).filter(|&x| z4_len(x, memo) <= n).collect()
}

/// 𝔽₇[t] elements of degree < n encoded as base-7 integers, constant term in
/// the lowest digit.
fn f7_decode(g: &Group, mut code: u64) -> Element {
    let mut c = Vec::new();
    while code > 0 {
        c.push((code % 7) as i64);
        code /= 7;
    }
    poly(g, &c)
}

fn f7_encode(e: &Element) -> u64 {
    e.0.iter().rev().fold(0, |acc, c| acc * 7 + c.to_u64().unwrap())
}

fn f7_add(mut a: u64, mut b: u64) -> u64 {
    let (mut out, mut place) = (0, 1);
    while a > 0 || b > 0 {
        out += ((a % 7 + b % 7) % 7) * place;
        a /= 7;
        b /= 7;
        place *= 7;
    }
    out
}

fn f7_neg(mut a: u64) -> u64 {
    let (mut out, mut place) = (0, 1);
    while a > 0 {
        out += ((7 - a % 7) % 7) * place;
        a /= 7;
        place *= 7;
    }
    out
}

/// Shortest expansion length in 𝔽₇[t] with all constants as digits: degree + 1.
fn f7_len(code: u64) -> u32 {
    let mut l = 0;
    let mut c = code;
    while c > 0 {
        l += 1;
        c /= 7;
    }
    l
}

fn c1(g: &Group) -> Element {
    poly(g, &[1])
}

// ---------------------------------------------------------------------------

fn gate() -> Outcome {
    let cases: [(&str, Group, bool); 4] = [
        ("[[1,1],[1,0]]", lattice(&[&[1, 1], &[1, 0]]), false),
        ("[[0,-1],[1,0]]", lattice(&[&[0, -1], &[1, 0]]), false),
        ("diag(2,3)", lattice(&[&[2, 0], &[0, 3]]), true),
        ("Z, d=4", Group::new(GroupSpec::IntegerBase { d: 4.into() }).unwrap(), true),
    ];
    let mut seen = Vec::new();
    for (name, g, admits) in cases {
        let t = Instant::now();
        let v = eigen_gate(&g);
        let el = t.elapsed();
        ensure(el < Duration::from_secs(1), || format!("{name} took {el:?}"))?;
        let got = matches!(v, GateVerdict::Admits { .. });
        ensure(got == admits, || format!("{name}: {v:?}"))?;
        seen.push(format!("{name} {}", if got { "admits" } else { "rejects" }));
    }
    Ok(seen.join(", "))
}

fn spanning() -> Outcome {
    let z4g = Group::new(GroupSpec::IntegerBase { d: 4.into() }).unwrap();
    let ok = verify_spanning(&z4g, &ints(&[-2, -1, 0, 1, 2]), 1, &[], &caps()).map_err(|e| e.to_string())?;
    ensure(matches!(ok, SpanCheck::Verified(_)), || format!("Z {{-2..2}}: {ok:?}"))?;
    let f7g = Group::new(GroupSpec::PolyRing { p: 7 }).unwrap();
    let ds: Vec<Element> = (0..7).map(|c| poly(&f7g, &[c])).collect();
    let ok = verify_spanning(&f7g, &ds, 1, &[], &caps()).map_err(|e| e.to_string())?;
    ensure(matches!(ok, SpanCheck::Verified(_)), || format!("F7: {ok:?}"))?;
    let digits = ints(&[0, 1, 2, 3]);
    let bad = verify_spanning(&z4g, &digits, 1, &[], &caps()).map_err(|e| e.to_string())?;
    let SpanCheck::Fails(f) = bad else { return Err("Z {0..3} accepted".into()) };
    ensure(f.axiom == Axiom::II, || format!("failed on axiom {}", f.axiom.name()))?;
    // exactly one of the witness and its negation is a digit
    let w = f.witness.first().ok_or("no witness")?;
    ensure(digits.contains(w) != digits.contains(&z4g.neg(w)), || format!("witness {w:?} does not break (ii)"))?;
    Ok(format!("Z {{-2..2}} and F7 verified; Z {{0..3}} fails (ii) at {}", small(w)))
}

/// Symmetry, ultrametric and reverse ultrametric (D=2), canonicity (C=E=2,
/// exceptional set Σ) in log₂ form: λ = 2^len.
fn lambda_axioms() -> Outcome {
    let mut report = Vec::new();

    // ℤ, d=4, Σ = {−2..2}: everything exhaustive on λ ≤ 2⁷.
    let z = z4();
    let mut memo = HashMap::new();
    let lib8 = z.ball_levels(8);
    let oracle8 = z4_ball(8, &mut memo);
    ensure(lib8.len() == oracle8.len(), || format!("Z ball sizes {} vs {}", lib8.len(), oracle8.len()))?;
    for (e, &l) in &lib8 {
        let x = small(e);
        ensure(z4_len(x, &mut memo) == l, || format!("Z λ({x}) = 2^{l}, oracle 2^{}", z4_len(x, &mut memo)))?;
    }
    let m8 = oracle8.iter().max().copied().unwrap();
    let mut table = vec![u8::MAX; (2 * m8 + 1) as usize];
    for (e, &l) in &lib8 {
        table[(small(e) + m8) as usize] = l as u8;
    }
    let len = |x: i64| -> u8 { if x.abs() > m8 { u8::MAX } else { table[(x + m8) as usize] } };
    let ball7: Vec<i64> = oracle8.iter().copied().filter(|&x| len(x) <= 7).collect();
    for &a in &ball7 {
        ensure(len(a) == len(-a), || format!("Z symmetry fails at {a}"))?;
    }
    let mut pairs = 0u64;
    for &a in &ball7 {
        let la = len(a);
        for &b in &ball7 {
            let (lb, ls) = (len(b), len(a + b));
            ensure(ls <= la.max(lb) + 1, || format!("Z ultrametric fails at {a} + {b}"))?;
            if lb + 1 < la {
                ensure(ls + 1 >= la, || format!("Z reverse ultrametric fails at {a} + {b}"))?;
            }
            pairs += 1;
        }
    }
    let lf = LengthFunction::new(&z, &caps());
    let g = z.group().clone();
    for &a in &ball7 {
        let la = len(a) as u32;
        let mut fa = int(a);
        for n in 1..=5u32 {
            fa = g.apply(&fa, 1);
            let l = lf.length(&fa).map_err(|e| e.to_string())?;
            ensure(l == z4_len(small(&fa), &mut memo), || format!("Z λ(F^{n}·{a}) disagrees with the oracle"))?;
            ensure(l <= la + n, || format!("Z canonicity upper bound fails at F^{n}·{a}"))?;
            if la > 1 {
                ensure(l + 1 >= la + n, || format!("Z canonicity lower bound fails at F^{n}·{a}"))?;
            }
        }
    }
    report.push(format!("Z: {} elements, {} pairs, canonicity n<=5", ball7.len(), pairs));

    // 𝔽₇[t], Σ = 𝔽₇: symmetry and λ values on all of λ ≤ 2⁷, canonicity on
    // λ ≤ 2⁶, pairs on λ ≤ 2⁵ (all pairs of the larger balls are ~10¹¹).
    let f = f7();
    let g = f.group().clone();
    let lib7 = f.ball_levels(7);
    ensure(lib7.len() == 7usize.pow(7), || format!("F7 ball has {} elements", lib7.len()))?;
    let mut ftab = vec![u8::MAX; 7usize.pow(7)];
    for (e, &l) in &lib7 {
        let c = f7_encode(e);
        ensure(f7_len(c) == l, || format!("F7 λ({e:?}) = 2^{l}, oracle 2^{}", f7_len(c)))?;
        ftab[c as usize] = l as u8;
    }
    for c in 0..7u64.pow(7) {
        ensure(ftab[c as usize] == ftab[f7_neg(c) as usize], || format!("F7 symmetry fails at code {c}"))?;
    }
    let b5 = 7u64.pow(5);
    for a in 0..b5 {
        let la = ftab[a as usize];
        for b in 0..b5 {
            let (lb, ls) = (ftab[b as usize], ftab[f7_add(a, b) as usize]);
            ensure(ls <= la.max(lb) + 1, || format!("F7 ultrametric fails at codes {a} + {b}"))?;
            if lb + 1 < la {
                ensure(ls + 1 >= la, || format!("F7 reverse ultrametric fails at codes {a} + {b}"))?;
            }
        }
    }
    let lf = LengthFunction::new(&f, &caps());
    for c in 0..7u64.pow(6) {
        let la = ftab[c as usize] as u32;
        let mut fa = f7_decode(&g, c);
        for n in 1..=4u32 {
            fa = g.apply(&fa, 1);
            let l = lf.length(&fa).map_err(|e| e.to_string())?;
            ensure(l <= la + n, || format!("F7 canonicity upper bound fails at F^{n}·{c}"))?;
            if la > 1 {
                ensure(l + 1 >= la + n, || format!("F7 canonicity lower bound fails at F^{n}·{c}"))?;
            }
        }
    }
    report.push(format!("F7: symmetry on {} elements, {} pairs at λ<=2^5, canonicity n<=4 at λ<=2^6", lib7.len(), b5 * b5));
    Ok(report.join("; "))
}

fn kernel_battery() -> Vec<(&'static str, AutomaticSet)> {
    let f = f7();
    let g = f.group().clone();
    let z = z4();
    let tn = f_powers(&f, &c1(&g), caps()).unwrap();
    let tn2 = tn.union(&f_powers(&f, &poly(&g, &[2]), caps()).unwrap()).unwrap();
    let cyc = f_cycle(&f, &c1(&g), 1, caps()).unwrap();
    let ct = f_cycle(&f, &poly(&g, &[0, 1]), 1, caps()).unwrap();
    let fin = AutomaticSet::finite(&f, &[vec![poly(&g, &[3, 0, 1])], vec![g.zero()], vec![poly(&g, &[0, 0, 0, 5])]], 1, caps()).unwrap();
    let evens = compile_formula(
        &z,
        &Formula::exists("y", Formula::eq(Expr::var("x"), Expr::add(Expr::var("y"), Expr::var("y")))),
        &["x"],
        &BTreeMap::new(),
        caps(),
    )
    .unwrap();
    let zp = AutomaticSet::from_language(&z, 1, &single_digit_lang(5, 2, 3), caps()).unwrap();
    vec![
        ("t^N", tn.clone()),
        ("t^N u 2t^N", tn2),
        ("C(1;F)", cyc.clone()),
        ("C(1;F)+C(t;F)", sum(&cyc, &ct).unwrap()),
        ("order", order_set(&f, &c1(&g), caps()).unwrap()),
        ("complement of t^N", tn.complement()),
        ("finite", fin),
        ("Z evens", evens.clone()),
        ("Z 4^N", zp.clone()),
        ("Z evens minus 4^N", evens.difference(&zp).unwrap()),
    ]
}

fn kernels() -> Outcome {
    let f = f7();
    let g = f.group().clone();
    let cs = g.coset_system(1);
    let tn = f_powers(&f, &c1(&g), caps()).unwrap();
    let k = kernel_of(&tn, &cs).map_err(|e| e.to_string())?;
    ensure(k.len() == 3, || format!("t^N kernel has {} classes", k.len()))?;
    let diag = compile_formula(&f, &Formula::eq(Expr::var("x"), Expr::var("y")), &["x", "y"], &BTreeMap::new(), caps())
        .map_err(|e| e.to_string())?;
    let kd = kernel_of(&diag, &cs).map_err(|e| e.to_string())?;
    ensure(kd.len() == 2, || format!("diagonal kernel has {} classes", kd.len()))?;
    let battery = kernel_battery();
    for (name, a) in &battery {
        let cs = a.group().coset_system(1);
        let back = from_kernel(&kernel_of(a, &cs).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(back.dfa().minimize().canonical_key() == a.dfa().minimize().canonical_key(), || format!("{name} changed"))?;
    }
    Ok(format!("t^N: 3 classes, diagonal: 2 classes, {} sets round-trip", battery.len()))
}

fn rebase() -> Outcome {
    let z = z4();
    let target = power_span(&z, 2, &caps()).map_err(|e| e.to_string())?;
    let battery = kernel_battery();
    let pow4 = |x: i64| x > 0 && (x as u64).is_power_of_two() && x.trailing_zeros() % 2 == 0;
    let mut checked = 0;
    for (name, a) in battery.iter().filter(|(n, _)| n.starts_with("Z ")) {
        let b = a.rebase(&target).map_err(|e| e.to_string())?;
        ensure(b.span().r() == 2, || format!("{name}: rebased to r={}", b.span().r()))?;
        for x in -100i64..=100 {
            let (ma, mb) = (a.member(&[int(x)]).unwrap(), b.member(&[int(x)]).unwrap());
            ensure(ma == mb, || format!("{name}: {x} differs across representations"))?;
            let truth = match *name {
                "Z evens" => x % 2 == 0,
                "Z 4^N" => pow4(x),
                _ => x % 2 == 0 && !pow4(x),
            };
            ensure(ma == truth, || format!("{name}: {x} misclassified"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} memberships, 0 mismatches"))
}

/// u v^k z and u w^k z are accepted for small k.
fn check_witness(d: &fa_core::automata::Dfa, s: &Sparsity) -> Result<(), String> {
    let Sparsity::NotSparse { u, v, w, z, .. } = s else { return Err("sparse".into()) };
    ensure(!v.is_empty() && !w.is_empty() && v[0] != w[0], || "loops do not diverge".into())?;
    for k in 0..4 {
        for lp in [v, w] {
            let mut word = u.clone();
            for _ in 0..k {
                word.extend(lp.iter().cloned());
            }
            word.extend(z.iter().cloned());
            ensure(d.accepts(&word), || format!("pumped witness rejected at k={k}"))?;
        }
    }
    Ok(())
}

fn sparsity() -> Outcome {
    let f = f7();
    let g = f.group().clone();
    let battery = kernel_battery();
    let get = |n: &str| battery.iter().find(|(m, _)| *m == n).unwrap().1.clone();
    let mut degrees = Vec::new();
    for n in ["t^N", "C(1;F)", "C(1;F)+C(t;F)", "t^N u 2t^N"] {
        match is_f_sparse(&get(n)).map_err(|e| e.to_string())? {
            FSparsity::Sparse { degree, .. } => degrees.push(format!("{n} deg {degree}")),
            FSparsity::NotSparse(s) => return Err(format!("{n} not sparse: {s:?}")),
        }
    }
    let z = z4();
    for (name, span) in [("F7", &f), ("Z", &z)] {
        let whole = AutomaticSet::whole(span, 1, caps());
        let lt = min_representatives(&whole).map_err(|e| e.to_string())?;
        match is_f_sparse(&whole).map_err(|e| e.to_string())? {
            FSparsity::NotSparse(s) => check_witness(&lt, &s).map_err(|e| format!("{name}: {e}"))?,
            FSparsity::Sparse { .. } => return Err(format!("whole {name} reported sparse")),
        }
        // growth: distinct values of all words of length ≤ n
        let mut vals: BTreeSet<Element> = BTreeSet::from([span.group().zero()]);
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        for n in 1..=6usize {
            frontier = frontier.iter().flat_map(|w| (0..span.len()).map(move |s| [w.as_slice(), &[s]].concat())).collect();
            vals.extend(frontier.iter().map(|w| span.eval(w)));
            let c = count_words(&lt, n);
            let expect = if name == "F7" { BigInt::from(7).pow(n as u32) } else { BigInt::from(vals.len()) };
            ensure(BigInt::from(c.clone()) == expect && BigInt::from(vals.len()) == expect, || {
                format!("{name} n={n}: {c} minimal words, {} values, expected {expect}", vals.len())
            })?;
            if name == "Z" {
                let mut memo = HashMap::new();
                ensure(vals.len() == z4_ball(n as u32, &mut memo).len(), || format!("Z ball size at {n}"))?;
            }
        }
    }
    let _ = g;
    Ok(format!("{}; whole F7 and Z not sparse, witnesses pump; growth matches to n=6", degrees.join(", ")))
}

fn bijectivity() -> Outcome {
    let mut battery = kernel_battery();
    battery.retain(|(n, _)| *n != "complement of t^N");
    battery.push(("Z whole", AutomaticSet::whole(&z4(), 1, caps())));
    let mut total = 0;
    for (name, a) in &battery {
        let lt = min_representatives(a).map_err(|e| e.to_string())?;
        for n in 0..=8u32 {
            let c = count_words(&lt, n as usize);
            let e = a.enumerate(n).map_err(|e| e.to_string())?;
            ensure(c == e.len().into(), || format!("{name} n={n}: {c} representatives vs {} elements", e.len()))?;
            let distinct: BTreeSet<&Vec<Element>> = e.iter().collect();
            ensure(distinct.len() == e.len(), || format!("{name}: duplicate enumeration at n={n}"))?;
            total += e.len();
        }
    }
    Ok(format!("{} sets, {} counted elements, 0 mismatches", battery.len(), total))
}

fn sparse_closure() -> Outcome {
    let f = f7();
    let g = f.group().clone();
    let cyc = f_cycle(&f, &c1(&g), 1, caps()).unwrap();
    let ct = f_cycle(&f, &poly(&g, &[0, 1]), 1, caps()).unwrap();
    let s = sum(&cyc, &ct).map_err(|e| e.to_string())?;
    let ones = |from: usize, to: usize| {
        let mut c = vec![0i64; to + 1];
        c[from..=to].iter_mut().for_each(|x| *x = 1);
        poly(&g, &c)
    };
    let mut brute = BTreeSet::new();
    for i in 0..=8usize {
        for j in 1..=8usize {
            brute.insert(g.add(&ones(0, i), &ones(1, j)));
        }
    }
    let got: BTreeSet<Element> = s.enumerate(9).map_err(|e| e.to_string())?.into_iter().map(|t| t[0].clone()).collect();
    ensure(got == brute, || format!("sum: {} elements vs brute force {}", got.len(), brute.len()))?;

    let b = kernel_battery();
    let get = |n: &str| b.iter().find(|(m, _)| *m == n).unwrap().1.clone();
    let f_ball: Vec<Element> = (0..7u64.pow(6)).map(|c| f7_decode(&g, c)).collect();
    let mut memo = HashMap::new();
    let z_ball: Vec<Element> = z4_ball(6, &mut memo).into_iter().map(int).collect();
    let pairs = [("t^N", "C(1;F)"), ("t^N u 2t^N", "C(1;F)+C(t;F)"), ("C(1;F)", "C(1;F)+C(t;F)"), ("Z 4^N", "Z evens")];
    let mut checked = 0;
    for (x, y) in pairs {
        let (a, bb) = (get(x), get(y));
        let (u, i) = (a.union(&bb).map_err(|e| e.to_string())?, a.intersect(&bb).map_err(|e| e.to_string())?);
        let ball = if x.starts_with("Z ") { &z_ball } else { &f_ball };
        for e in ball {
            let t = [e.clone()];
            let (ma, mb) = (a.member(&t).unwrap(), bb.member(&t).unwrap());
            ensure(u.member(&t).unwrap() == (ma || mb), || format!("{x} u {y} wrong at {e:?}"))?;
            ensure(i.member(&t).unwrap() == (ma && mb), || format!("{x} n {y} wrong at {e:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("sum = brute force ({} elements to degree 8); {checked} union/intersection memberships", brute.len()))
}

fn exponents() -> Outcome {
    let z = z4();
    let diag = compile_formula(&z, &Formula::eq(Expr::var("x"), Expr::var("y")), &["x", "y"], &BTreeMap::new(), caps())
        .map_err(|e| e.to_string())?;
    let rel = exponent_relation(&diag, &[vec![int(1)], vec![int(1)]], 1).map_err(|e| e.to_string())?;
    let rep = |k: u32| (0..k).map(|i| 4i64.pow(i)).sum::<i64>();
    for i in 0..=8u32 {
        for j in 0..=8u32 {
            let truth = rep(i) == rep(j);
            ensure(rel.contains_u64(&[i as u64, j as u64]).unwrap() == truth, || format!("({i},{j})"))?;
        }
    }
    let battery = presburger_battery();
    for (text, truth) in &battery {
        let (vars, r) = decide(text, caps()).map_err(|e| format!("{text}: {e}"))?;
        ensure(vars == ["x", "y"], || format!("{text}: free variables {vars:?}"))?;
        let got: BTreeSet<Vec<u64>> = r.enumerate(64).map_err(|e| e.to_string())?.into_iter().collect();
        for x in 0..=64u64 {
            for y in 0..=64u64 {
                ensure(got.contains(&vec![x, y]) == truth(x, y), || format!("{text} at ({x},{y})"))?;
            }
        }
    }
    Ok(format!("diagonal gives {{(k,k)}} for k<=8; {} formulas agree on [0,64]²", battery.len()))
}

fn ladders() -> Outcome {
    let f = f7();
    let g = f.group().clone();
    let order = order_set(&f, &c1(&g), caps()).unwrap();
    // (x, y) is in the order set iff x = t^i, y = t^j with i ≤ j
    let mono = |e: &Element| -> Option<usize> {
        let n = e.0.len();
        (n > 0 && e.0[n - 1] == BigInt::from(1) && e.0[..n - 1].iter().all(|c| *c == BigInt::from(0))).then(|| n - 1)
    };
    let truth = |t: &[Element]| matches!((mono(&t[0]), mono(&t[1])), (Some(i), Some(j)) if i <= j);
    let mut sizes = Vec::new();
    for n in 1..=4 {
        let LadderOutcome::Found(l) = ladder_search(&order, n, LadderMode::Bounded(10)).map_err(|e| e.to_string())? else {
            return Err(format!("no ladder of size {n}"));
        };
        ensure(l.n() == n, || format!("ladder of size {} for {n}", l.n()))?;
        for (i, a) in l.a.iter().enumerate() {
            for (j, b) in l.b.iter().enumerate() {
                let s: Vec<Element> = a.iter().zip(b).map(|(x, y)| g.add(x, y)).collect();
                ensure(truth(&s) == (i <= j), || format!("N={n}: a{i} + b{j} breaks the ladder"))?;
            }
        }
        ensure(verify_ladder(&order, &l).unwrap(), || "verify_ladder disagrees".into())?;
        sizes.push(n.to_string());
    }
    let cyc = f_cycle(&f, &c1(&g), 1, caps()).unwrap();
    let out = ladder_search(&cyc, 3, LadderMode::Bounded(10)).map_err(|e| e.to_string())?;
    ensure(out == LadderOutcome::NoneWithin(10), || format!("C(1;F) N=3: {out:?}"))?;
    Ok(format!("order set: ladders for N = {}; C(1;F): none within B=10 at N=3", sizes.join(",")))
}

fn polysnip() -> Outcome {
    let (p, dmax) = (7, 12usize);
    let rep = polysnip_demo(p, dmax as u32, caps()).map_err(|e| e.to_string())?;
    let chosen = rep.chosen().ok_or("no reading passes")?;
    ensure(chosen.name == "coefficient 3", || format!("chose {}", chosen.name))?;
    // sizes of the targets, counted directly
    let powers = dmax + 1;
    let b = (2..=dmax).map(|s| s / 2).sum::<usize>();
    let graph = (0..=dmax).map(|i| dmax - i + 1).sum::<usize>();
    for (c, expect) in chosen.checks.iter().zip([powers, b, graph]) {
        ensure(c.passed && c.found == expect && c.expected == expect, || format!("{}: {} of {expect}", c.name, c.found))?;
    }
    ensure(chosen.passed(), || "cross-check failed".into())?;
    let digits = rep.readings.iter().find(|r| r.name == "digit strings").ok_or("digit reading missing")?;
    ensure(!digits.passed(), || "digit-string reading unexpectedly passes".into())?;
    let g = Group::new(GroupSpec::PolyRing { p }).unwrap();
    for i in 0..=dmax {
        ensure(polysnip::polysnip_phi(&g, 3, &tpow(&g, i), caps()).unwrap(), || format!("phi rejects t^{i}"))?;
    }
    Ok(format!("coefficient 3 chosen: {powers} powers, |B| = {b}, {graph} graph triples; digit-string reading fails"))
}

fn sparse_edp_battery() -> Vec<(&'static str, AutomaticSet)> {
    let z = z4();
    let mut b: Vec<_> = kernel_battery().into_iter().filter(|(n, _)| ["t^N", "t^N u 2t^N", "C(1;F)", "C(1;F)+C(t;F)", "Z 4^N"].contains(n)).collect();
    b.push(("Z C(1;F)", f_cycle(&z, &int(1), 1, caps()).unwrap()));
    b.push(("Z C(-2;F^2)", f_cycle(&z, &int(-2), 2, caps()).unwrap()));
    b
}

fn edp() -> Outcome {
    let f = f7();
    let g = f.group().clone();
    let mut memo = HashMap::new();
    let z_ball: Vec<Element> = z4_ball(6, &mut memo).into_iter().map(int).collect();
    let f_ball4: Vec<Element> = (0..7u64.pow(4)).map(|c| f7_decode(&g, c)).collect();
    let mut notes = Vec::new();
    let mut edps = BTreeMap::new();
    for (name, a) in sparse_edp_battery() {
        ensure(is_f_sparse(&a).unwrap().is_sparse(), || format!("{name} not sparse"))?;
        let e = EdpSet::from_sparse(&a).map_err(|e| format!("{name}: {e}"))?;
        let c = caps();
        if name.starts_with("Z ") {
            for x in &z_ball {
                ensure(e.member(x, &c).unwrap() == a.member(&[x.clone()]).unwrap(), || format!("{name} at {x:?}"))?;
            }
        } else {
            // every element at λ ≤ 2⁴, and the two sets' traces at λ ≤ 2⁶
            for x in &f_ball4 {
                ensure(e.member(x, &c).unwrap() == a.member(&[x.clone()]).unwrap(), || format!("{name} at {x:?}"))?;
            }
            let vals: BTreeSet<Element> = e.values_within(6).unwrap().into_iter().filter(|v| v.0.len() <= 6).collect();
            let want: BTreeSet<Element> = a.enumerate(6).unwrap().into_iter().map(|t| t[0].clone()).collect();
            ensure(vals == want, || format!("{name}: EDP values {} vs set {}", vals.len(), want.len()))?;
            for x in &want {
                ensure(e.member(x, &c).unwrap(), || format!("{name} misses {x:?}"))?;
            }
        }
        notes.push(name);
        edps.insert(name, e);
    }
    for (x, y, ball) in [("t^N", "C(1;F)+C(t;F)", &f_ball4), ("Z 4^N", "Z C(1;F)", &z_ball)] {
        let u = edps[x].union(&edps[y]).map_err(|e| e.to_string())?;
        for e in ball.iter() {
            let want = edps[x].member(e, &caps()).unwrap() || edps[y].member(e, &caps()).unwrap();
            ensure(u.member(e, &caps()).unwrap() == want, || format!("{x} u {y} at {e:?}"))?;
        }
    }
    Ok(format!("{} sets (Z exhaustive at λ<=2^6; F7 exhaustive at λ<=2^4, traces equal at λ<=2^6); unions pointwise", notes.len()))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "eigenvalue gate", limit: Some(Duration::from_secs(4)), run: gate },
        Criterion { id: 2, name: "spanning verification", limit: Some(Duration::from_secs(1)), run: spanning },
        Criterion { id: 3, name: "length function axioms", limit: Some(Duration::from_secs(30)), run: lambda_axioms },
        Criterion { id: 4, name: "kernels", limit: Some(Duration::from_secs(30)), run: kernels },
        Criterion { id: 5, name: "rebase", limit: Some(Duration::from_secs(10)), run: rebase },
        Criterion { id: 6, name: "sparsity decisions", limit: Some(Duration::from_secs(60)), run: sparsity },
        Criterion { id: 7, name: "minimal representatives", limit: None, run: bijectivity },
        Criterion { id: 8, name: "sparse closure", limit: None, run: sparse_closure },
        Criterion { id: 9, name: "exponent relations", limit: None, run: exponents },
        Criterion { id: 10, name: "ladders", limit: Some(Duration::from_secs(120)), run: ladders },
        Criterion { id: 11, name: "polysnip", limit: Some(Duration::from_secs(60)), run: polysnip },
        Criterion { id: 12, name: "EDP coherence", limit: None, run: edp },
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let el = t.elapsed();
        let out = match (out, c.limit) {
            (Ok(_), Some(l)) if el > l => Err(format!("took {:.1} s, limit {} s", el.as_secs_f64(), l.as_secs())),
            (o, _) => o,
        };
        let limit = c.limit.map_or(String::new(), |l| format!(", limit {} s", l.as_secs()));
        let (tag, msg) = match out {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("{tag} {:>2} {}: {msg} [{:.2} s{limit}]", c.id, c.name, el.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
