mod common;

use std::collections::BTreeSet;

use common::{f7, int, ints, poly, tpow, z4};
use fa_core::linalg;
use fa_core::spanning::{
    enlarge_span, power_span, search_spanning, verify_spanning, Axiom, EigenWitness, GateVerdict, LengthFunction, SpanCheck,
};
use fa_core::spanning::eigen_gate;
use fa_core::{Caps, Element, Group, GroupSpec};
use proptest::prelude::*;

fn zbase(d: i64) -> Group {
    Group::new(GroupSpec::IntegerBase { d: d.into() }).unwrap()
}

fn lattice(rows: &[&[i64]]) -> Group {
    Group::new(GroupSpec::FreeLattice { endo: linalg::from_i64(rows) }).unwrap()
}

fn f7g() -> Group {
    Group::new(GroupSpec::PolyRing { p: 7 }).unwrap()
}

#[test]
fn word_evaluation() {
    let g = zbase(4);
    assert_eq!(g.eval_word(&ints(&[2, 1]), 1), int(6));
    assert_eq!(g.eval_word(&[], 1), g.zero());
    let p = f7g();
    let w = vec![poly(&p, &[3]), p.zero(), poly(&p, &[1])];
    assert_eq!(p.eval_word(&w, 1), poly(&p, &[3, 0, 1]));
}

#[test]
fn coset_systems() {
    assert_eq!(zbase(4).coset_system(1).reps, ints(&[0, 1, 2, 3]));
    let d = lattice(&[&[2, 0], &[0, 3]]);
    let s = d.coset_system(1);
    assert_eq!(s.len(), 6);
    for (i, a) in s.reps.iter().enumerate() {
        for b in &s.reps[i + 1..] {
            let x = (&a.0[0] - &b.0[0]) % 2u32;
            let y = (&a.0[1] - &b.0[1]) % 3u32;
            assert!(x != 0.into() || y != 0.into(), "{a} and {b} are congruent");
        }
    }
    let p = f7g();
    assert_eq!(p.coset_system(1).reps, (0..7).map(|c| poly(&p, &[c])).collect::<Vec<_>>());
    assert_eq!(p.coset_system(2).len(), 49);
}

#[test]
fn preimages() {
    let g = zbase(4);
    assert_eq!(g.power(1).preimage(&int(8)), Some(int(2)));
    assert_eq!(g.power(1).preimage(&int(6)), None);
    let p = f7g();
    assert_eq!(p.power(1).preimage(&poly(&p, &[0, 1, 1])), Some(poly(&p, &[1, 1])));
}

#[test]
fn arithmetic() {
    let fib = lattice(&[&[1, 1], &[1, 0]]);
    assert_eq!(fib.apply(&Element::from_i64s(&[1, 0]), 1), Element::from_i64s(&[1, 1]));
    assert_eq!(fib.neg(&fib.zero()), fib.zero());
    let p = f7g();
    assert_eq!(p.add(&poly(&p, &[3]), &poly(&p, &[5])), poly(&p, &[1]));
}

#[test]
fn torsion_group() {
    // Z x Z/2 with F(x, e) = (2x, x + e)
    let g = Group::new(GroupSpec::LatticeWithTorsion { rank: 1, torsion: vec![2.into()], endo: linalg::from_i64(&[&[2, 0], &[1, 1]]) })
        .unwrap();
    let a = Element::from_i64s(&[3, 1]);
    assert_eq!(g.apply(&a, 1), Element::from_i64s(&[6, 0]));
    assert_eq!(g.power(1).preimage(&g.apply(&a, 1)), Some(a));
    assert_eq!(g.coset_system(1).len(), 2);
}

#[test]
fn eigenvalue_gate() {
    assert!(matches!(eigen_gate(&lattice(&[&[1, 1], &[1, 0]])), GateVerdict::Rejects(EigenWitness::InsideUnitDisk { .. })));
    assert!(matches!(eigen_gate(&lattice(&[&[0, -1], &[1, 0]])), GateVerdict::Rejects(EigenWitness::OnUnitCircle { .. })));
    assert!(matches!(eigen_gate(&lattice(&[&[2, 0], &[0, 3]])), GateVerdict::Admits { .. }));
    assert!(matches!(eigen_gate(&zbase(4)), GateVerdict::Admits { .. }));
    assert!(matches!(eigen_gate(&f7g()), GateVerdict::Admits { .. }));
    // a root of modulus exactly one that is not a root of unity factor: x^2 - x + 1 has roots e^{±iπ/3}
    assert!(matches!(eigen_gate(&lattice(&[&[1, -1], &[1, 0]])), GateVerdict::Rejects(EigenWitness::OnUnitCircle { .. })));
    assert!(matches!(eigen_gate(&lattice(&[&[1, 1], &[-1, 1]])), GateVerdict::Admits { .. }));
}

#[test]
fn spanning_verification() {
    let caps = Caps::default();
    assert!(matches!(verify_spanning(&zbase(4), &ints(&[-2, -1, 0, 1, 2]), 1, &[], &caps).unwrap(), SpanCheck::Verified(_)));
    match verify_spanning(&zbase(4), &ints(&[0, 1, 2, 3]), 1, &[], &caps).unwrap() {
        SpanCheck::Fails(f) => {
            assert_eq!(f.axiom, Axiom::II);
            assert!(f.witness.iter().any(|w| *w == int(1) || *w == int(-1)), "{f:?}");
        }
        SpanCheck::Verified(_) => panic!("{{0,1,2,3}} is not closed under negation"),
    }
    f7();
}

#[test]
fn fibonacci_lattice_has_no_spanning_set() {
    let fib = lattice(&[&[1, 1], &[1, 0]]);
    assert!(search_spanning(&fib, 3, 4, &Caps::default()).unwrap().is_none());
}

#[test]
fn power_spans() {
    let caps = Caps::default();
    let s = power_span(&z4(), 2, &caps).unwrap();
    assert_eq!(s.r(), 2);
    assert_eq!(s.digits(), ints(&(-10..=10).collect::<Vec<_>>()).as_slice());
    assert_eq!(power_span(&z4(), 1, &caps).unwrap().digits(), z4().digits());
    let p = power_span(&f7(), 2, &caps).unwrap();
    assert_eq!(p.len(), 49);
    assert!(p.digits().iter().all(|d| d.0.len() <= 2));
}

#[test]
fn enlarging() {
    let caps = Caps::default();
    let e = enlarge_span(&z4(), &ints(&[3]), &caps).unwrap();
    assert!(e.span.index_of(&int(3)).is_some() && e.span.index_of(&int(-3)).is_some());
    assert!(z4().digits().iter().all(|d| e.span.index_of(d).is_some()));
    let same = enlarge_span(&z4(), &ints(&[2, -1]), &caps).unwrap();
    assert_eq!(same.span, z4());
    let g = f7g();
    let e = enlarge_span(&f7(), &[poly(&g, &[1, 1])], &caps).unwrap();
    assert!(e.span.index_of(&poly(&g, &[1, 1])).is_some());
    // {0..6, ±(t+1)} already works for F itself; check axioms (iii) and (iv) by brute force.
    assert_eq!((e.span.r(), e.span.len()), (1, 9));
    let ds = e.span.digits().to_vec();
    let sumset = |xs: &BTreeSet<Element>| {
        let mut out = BTreeSet::new();
        for x in xs {
            for d in &ds {
                out.insert(g.add(x, d));
            }
        }
        out
    };
    let ones: BTreeSet<Element> = ds.iter().cloned().collect();
    let sums = sumset(&sumset(&ones));
    let fives = sumset(&sumset(&sums));
    for x in &fives {
        assert!(ds.iter().any(|s| g.power(1).preimage(&g.sub(x, s)).is_some_and(|y| ds.contains(&y))), "{x}");
    }
    for x in sums.iter().filter(|x| x.0.first().is_none_or(|c| *c == 0.into())) {
        assert!(g.power(1).preimage(x).is_some_and(|y| ds.contains(&y)), "{x}");
    }
}

#[test]
fn shortest_expansions() {
    let caps = Caps::default();
    let s = z4();
    let w = s.shortest_expansion(&int(6), &caps).unwrap();
    let letters: Vec<Element> = w.iter().map(|&i| s.digits()[i].clone()).collect();
    assert_eq!(letters, ints(&[2, 1]));
    assert!(s.shortest_expansion(&int(0), &caps).unwrap().is_empty());
    let lf = LengthFunction::new(&s, &caps);
    assert_eq!(lf.lambda(&int(0)).unwrap(), 1u32.into());
    assert_eq!(lf.lambda(&int(2)).unwrap(), 2u32.into());
    assert_eq!(lf.lambda(&int(6)).unwrap(), 4u32.into());
    let p = f7();
    let g = p.group().clone();
    let w = p.shortest_expansion(&tpow(&g, 2), &caps).unwrap();
    let letters: Vec<Element> = w.iter().map(|&i| p.digits()[i].clone()).collect();
    assert_eq!(letters, vec![g.zero(), g.zero(), poly(&g, &[1])]);
    assert_eq!(LengthFunction::new(&p, &caps).lambda(&tpow(&g, 2)).unwrap(), 8u32.into());
}

#[test]
fn ball_sizes_match_word_evaluations() {
    for s in [z4(), f7()] {
        let g = s.group().clone();
        let mut words: BTreeSet<Element> = BTreeSet::from([g.zero()]);
        let mut layer = vec![vec![]];
        for n in 1..=4u32 {
            layer = layer
                .into_iter()
                .flat_map(|w: Vec<usize>| (0..s.len()).map(move |d| {
                    let mut v = w.clone();
                    v.push(d);
                    v
                }))
                .collect();
            words.extend(layer.iter().map(|w| s.eval(w)));
            assert_eq!(words.len(), s.ball_levels(n).len(), "n = {n}");
        }
    }
}

proptest! {
    #[test]
    fn concatenation_law(a in proptest::collection::vec(-9i64..9, 0..5), b in proptest::collection::vec(-9i64..9, 0..5)) {
        let g = lattice(&[&[2, 1], &[1, 3]]);
        let w = |v: &[i64]| v.chunks(2).filter(|c| c.len() == 2).map(|c| Element::from_i64s(c)).collect::<Vec<_>>();
        let (s, t) = (w(&a), w(&b));
        let mut st = s.clone();
        st.extend(t.iter().cloned());
        let lhs = g.eval_word(&st, 2);
        let rhs = g.add(&g.eval_word(&s, 2), &g.apply(&g.eval_word(&t, 2), 2 * s.len() as u32));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn preimage_round_trip(x in -500i64..500, y in -500i64..500, r in 1u32..4) {
        for g in [lattice(&[&[2, 1], &[1, 3]]), lattice(&[&[1, 1], &[1, 0]])] {
            let a = Element::from_i64s(&[x, y]);
            prop_assert_eq!(g.power(r).preimage(&g.apply(&a, r)), Some(a));
        }
        let p = f7g();
        let a = poly(&p, &[x.rem_euclid(7), y.rem_euclid(7), (x + y).rem_euclid(7)]);
        prop_assert_eq!(p.power(r).preimage(&p.apply(&a, r)), Some(a));
    }

    #[test]
    fn exactly_one_congruent_representative(x in -60i64..60, y in -60i64..60) {
        // [[2,1],[1,3]] has determinant 5 and adjugate [[3,-1],[-1,2]];
        // v lies in the image iff adj·v ≡ 0 (mod 5).
        let g = lattice(&[&[2, 1], &[1, 3]]);
        let s = g.coset_system(1);
        prop_assert_eq!(s.len(), 5);
        let in_image = |u: i64, v: i64| (3 * u - v).rem_euclid(5) == 0 && (-u + 2 * v).rem_euclid(5) == 0;
        let hits = s.reps.iter().filter(|r| {
            let ru: i64 = (&r.0[0]).try_into().unwrap();
            let rv: i64 = (&r.0[1]).try_into().unwrap();
            in_image(x - ru, y - rv)
        }).count();
        prop_assert_eq!(hits, 1);
    }

    #[test]
    fn lambda_is_symmetric(x in -5000i64..5000) {
        let lf = LengthFunction::new(&z4(), &Caps::default());
        prop_assert_eq!(lf.lambda(&int(x)).unwrap(), lf.lambda(&int(-x)).unwrap());
    }
}
