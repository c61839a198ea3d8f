#![allow(dead_code)]

use fa_core::automata::{Dfa, Tracks};
use fa_core::spanning::{verify_spanning, SpanningSet};
use fa_core::{Caps, Element, Group, GroupSpec};

pub fn int(x: i64) -> Element {
    Element::from_i64s(&[x])
}

pub fn ints(v: &[i64]) -> Vec<Element> {
    v.iter().map(|&x| int(x)).collect()
}

/// Polynomial over F_p from coefficients, constant term first.
pub fn poly(g: &Group, c: &[i64]) -> Element {
    g.canonical(&Element::from_i64s(c)).unwrap()
}

/// t^k
pub fn tpow(g: &Group, k: usize) -> Element {
    let mut c = vec![0i64; k + 1];
    c[k] = 1;
    poly(g, &c)
}

pub fn z4() -> SpanningSet {
    let g = Group::new(GroupSpec::IntegerBase { d: 4.into() }).unwrap();
    verify_spanning(&g, &ints(&[-2, -1, 0, 1, 2]), 1, &[], &Caps::default()).unwrap().verified().unwrap()
}

pub fn f7() -> SpanningSet {
    let g = Group::new(GroupSpec::PolyRing { p: 7 }).unwrap();
    let digits: Vec<Element> = (0..7).map(|c| poly(&g, &[c])).collect();
    verify_spanning(&g, &digits, 1, &[], &Caps::default()).unwrap().verified().unwrap()
}

/// 0*1 0* style language over one track: zeros, one copy of `digit`, zeros.
pub fn single_digit_lang(radix: u32, zero: u32, digit: u32) -> Dfa {
    Dfa::from_fn(Tracks::single(radix, zero), 3, 0, vec![false, true, false], move |q, l| match (q, l[0]) {
        (0, d) if d == zero => 0,
        (0, d) if d == digit => 1,
        (1, d) if d == zero => 1,
        _ => 2,
    })
}

/// All polynomials over F_p of degree < n, as coefficient vectors.
pub fn all_polys(p: i64, n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (0..p).map(move |c| {
            let mut w = v.clone();
            w.push(c);
            w
        })).collect();
    }
    out
}

/// Formulas over (x, y) in ℕ² with their arithmetic meaning.
pub fn presburger_battery() -> Vec<(&'static str, fn(u64, u64) -> bool)> {
    vec![
        ("x + y = 10", |x, y| x + y == 10),
        ("x <= y", |x, y| x <= y),
        ("x < y", |x, y| x < y),
        ("x mod 3 = 1 & y = y", |x, _| x % 3 == 1),
        ("2*x = y", |x, y| 2 * x == y),
        ("exists z. x = 2*z & y = y", |x, _| x % 2 == 0),
        ("x + x + 1 = y", |x, y| 2 * x + 1 == y),
        ("!(x = y)", |x, y| x != y),
        ("x mod 2 = 0 & y mod 2 = 1", |x, y| x % 2 == 0 && y % 2 == 1),
        ("exists d. x + d = y & d mod 5 = 0", |x, y| y >= x && (y - x) % 5 == 0),
        ("x >= 7 | y >= 9", |x, y| x >= 7 || y >= 9),
        ("forall z. z <= x | z > y", |x, y| y <= x),
        ("3*x + 2*y = 60", |x, y| 3 * x + 2 * y == 60),
        ("exists z. z + z + z = x + y", |x, y| (x + y) % 3 == 0),
        ("x = 0 | y = 0", |x, y| x == 0 || y == 0),
        ("exists u v. x = 4*u + 1 & y = 4*v + 3 & u <= v", |x, y| x % 4 == 1 && y % 4 == 3 && x / 4 <= y / 4),
        ("x + 5 > y & y + 5 > x", |x, y| x.abs_diff(y) < 5),
        ("!(exists z. x = z + z) & !(exists z. y = z + z)", |x, y| x % 2 == 1 && y % 2 == 1),
        ("exists k. y = 7*k + x & x < 7", |x, y| x < 7 && y >= x && (y - x) % 7 == 0),
        ("exists z. x + z = 64 & y + z = 64", |x, y| x == y && x <= 64),
    ]
}
