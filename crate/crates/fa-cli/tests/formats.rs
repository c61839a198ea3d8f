use fa_cli::formats::*;
use fa_cli::workspace::default_span;
use fa_core::fauto::AutomaticSet;
use fa_core::presburger::decide;
use fa_core::{Caps, Element, Group, GroupSpec};
use proptest::prelude::*;

fn poly(cs: &[i64]) -> Element {
    Element::from_i64s(cs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn finite_sets_round_trip(xs in prop::collection::vec(prop::collection::vec(0i64..7, 0..4), 0..5), ys in prop::collection::vec(-40i64..40, 0..5)) {
        let caps = Caps::default();
        let f7 = Group::new(GroupSpec::PolyRing { p: 7 }).unwrap();
        let z4 = Group::new(GroupSpec::IntegerBase { d: 4.into() }).unwrap();
        let cases = [
            (default_span(&f7, &caps).unwrap(), xs.iter().map(|c| vec![poly(c)]).collect::<Vec<_>>()),
            (default_span(&z4, &caps).unwrap(), ys.iter().map(|&y| vec![Element::from_i64s(&[y])]).collect()),
        ];
        for (span, tuples) in cases {
            let a = AutomaticSet::finite(&span, &tuples, 1, caps).unwrap();
            let v = set_json(&a).unwrap();
            let text = serde_json::to_string(&v).unwrap();
            let b = set_from(&serde_json::from_str(&text).unwrap(), None, &caps).unwrap();
            prop_assert_eq!(b.dfa().minimize().canonical_key(), a.dfa().minimize().canonical_key());
            for t in &tuples {
                prop_assert!(b.member(t).unwrap());
            }
            prop_assert_eq!(serde_json::to_string(&set_json(&b).unwrap()).unwrap(), text);
        }
    }

    #[test]
    fn relations_round_trip(a in 1u64..6, b in 0u64..6) {
        let caps = Caps::default();
        let (_, r) = decide(&format!("exists z. y = {a} * x + z & z <= {b}"), caps).unwrap();
        let back = rel_from(&rel_json(&r).unwrap(), &caps).unwrap();
        prop_assert_eq!(back.dfa().minimize().canonical_key(), r.dfa().minimize().canonical_key());
    }
}

#[test]
fn big_integers_are_strings() {
    let g = Group::new(GroupSpec::IntegerBase { d: "123456789012345678901234567890".parse().unwrap() }).unwrap();
    let v = group_json(g.spec());
    assert_eq!(v["d"], "123456789012345678901234567890");
    assert_eq!(group_from(&v).unwrap().spec(), g.spec());
}

#[test]
fn malformed_files_are_rejected() {
    let bad = serde_json::json!({"alphabet": [0], "states": 1, "initial": 3, "finish": [], "edges": []});
    assert!(automaton_from(&bad).is_err());
    assert!(group_from(&serde_json::json!({"variant": "FreeLattice", "rank": 3, "endo": [[2]]})).is_err());
    assert!(group_from(&serde_json::json!({"variant": "Torus"})).is_err());
}
