//! The structure (𝔽_p[t], +, A) with A = t^ℕ ∪ 2t^ℕ ∪ {c t^{i+j} − c t^i − c t^j},
//! which defines t^ℕ, B = {t^{i+j} − t^i − t^j : i, j ≥ 1} and the graph of
//! (t^i, t^j) ↦ t^{i+j} when c = 3.
//!
//! Two readings of the third component are checked: coefficient 3 and
//! coefficient 1 (the digit strings (0)^k(−1)(0)^ℓ(−1)(0)^{k−1}1 and
//! (0)^k(−2)(0)^{k−1}1 evaluate to t^{i+j} − t^i − t^j).
//!
//! Every check is exhaustive over polynomials of degree ≤ D. Each formula
//! implies x ∈ A (or 3x ∈ A, or x, y, z ∈ t^ℕ), so it suffices to test
//! the elements of A of degree ≤ D; those are listed from the exponent
//! relations, and the listing is complete because every word of the
//! encoding ends with a nonzero letter whose exponent is 1, so an element
//! of degree d uses exponents ≤ d + 1. Membership of such elements is
//! then a lookup, and a sample of them is re-tested with EDP membership.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::edp::EdpSet;
use crate::error::{Caps, Error, Result};
use crate::group::{Element, Group, GroupSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Size of the defined set within the degree bound.
    pub found: usize,
    pub expected: usize,
    /// Elements (or tuples) on which the formula and the target disagree.
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reading {
    pub name: &'static str,
    /// The coefficient c of the third component.
    pub coefficient: i64,
    pub checks: Vec<Check>,
}

impl Reading {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolysnipReport {
    pub p: u32,
    pub dmax: u32,
    pub readings: Vec<Reading>,
}

impl PolysnipReport {
    /// The reading under which all three claims hold.
    pub fn chosen(&self) -> Option<&Reading> {
        self.readings.iter().find(|r| r.passed())
    }
}

/// Polynomial in the usual notation, highest degree first.
pub fn poly_string(e: &Element) -> String {
    let mut parts = Vec::new();
    for (i, c) in e.0.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let coef = if c.is_one() && i > 0 { String::new() } else { format!("{c}") };
        parts.push(match i {
            0 => coef,
            1 => format!("{coef}t"),
            _ => format!("{coef}t^{i}"),
        });
    }
    if parts.is_empty() {
        String::from("0")
    } else {
        parts.join("+")
    }
}

fn constant(g: &Group, c: i64) -> Element {
    g.canonical(&Element::from_i64s(&[c])).expect("constant")
}

fn monomial(g: &Group, c: i64, i: usize) -> Element {
    let mut v = vec![0i64; i + 1];
    v[i] = c;
    g.canonical(&Element::from_i64s(&v)).expect("monomial")
}

/// t^ℕ ∪ 2t^ℕ ∪ {c t^{i+j} − c t^i − c t^j : i, j ≥ 1} as a union of four
/// EDP sets.
pub fn polysnip_set(g: &Group, c: i64, caps: Caps) -> Result<EdpSet> {
    let k = |v: i64| vec![constant(g, v)];
    let z = || k(0);
    let pow = EdpSet::from_formula(g, 1, vec![z(), k(1)], "x2 = 1", caps)?;
    let pow2 = EdpSet::from_formula(g, 1, vec![z(), k(2)], "x2 = 1", caps)?;
    // (0)^k (−c) (0)^ℓ (−c) (0)^{k−1} (c): i = k, j = k + ℓ + 1
    let apart = EdpSet::from_formula(g, 1, vec![z(), k(-c), z(), k(-c), z(), k(c)], "x1 = x5 + 1 & x2 = 1 & x4 = 1 & x6 = 1", caps)?;
    // (0)^k (−2c) (0)^{k−1} (c): i = j = k
    let equal = EdpSet::from_formula(g, 1, vec![z(), k(-2 * c), z(), k(c)], "x1 = x3 + 1 & x2 = 1 & x4 = 1", caps)?;
    pow.union(&pow2)?.union(&apart)?.union(&equal)
}

/// Elements re-tested with the EDP membership test per reading.
pub const CROSS_CHECK_SAMPLES: usize = 24;

fn degree_ok(e: &Element, d: u32) -> bool {
    e.0.len() <= d as usize + 1
}

/// Membership in A for elements of degree ≤ D is a lookup in the listing
/// (complete by the argument above); anything larger goes to the EDP
/// membership test.
struct Oracle<'a> {
    a: &'a EdpSet,
    caps: Caps,
    dmax: u32,
    listed: BTreeSet<Element>,
    asked: BTreeSet<Element>,
}

impl Oracle<'_> {
    fn member(&mut self, x: &Element) -> Result<bool> {
        if degree_ok(x, self.dmax) {
            self.asked.insert(x.clone());
            return Ok(self.listed.contains(x));
        }
        self.a.member(x, &self.caps)
    }

    /// Compares the listing with the EDP membership test on an evenly
    /// spaced sample of the elements asked about.
    fn cross_check(&self, samples: usize) -> Result<Check> {
        let asked: Vec<&Element> = self.asked.iter().collect();
        let step = asked.len().div_ceil(samples.max(1)).max(1);
        let mut bad = Vec::new();
        let mut n = 0;
        for x in asked.iter().step_by(step) {
            n += 1;
            if self.a.member(x, &self.caps)? != self.listed.contains(*x) {
                bad.push(poly_string(x));
            }
        }
        Ok(Check { name: "listing agrees with EDP membership", passed: bad.is_empty(), found: n - bad.len(), expected: n, counterexamples: bad })
    }
}

fn check<T: Ord + Clone>(name: &'static str, found: &BTreeSet<T>, expected: &BTreeSet<T>, show: impl Fn(&T) -> String) -> Check {
    let counterexamples: Vec<String> = found.symmetric_difference(expected).take(20).map(show).collect();
    Check { name, passed: found == expected, found: found.len(), expected: expected.len(), counterexamples }
}

fn run_reading(g: &Group, name: &'static str, c: i64, dmax: u32, caps: Caps) -> Result<Reading> {
    let a = polysnip_set(g, c, caps)?;
    let scale = |k: i64, x: &Element| g.scale(&BigInt::from(k), x);
    let inv = |k: i64| -> i64 {
        let p = match g.spec() {
            GroupSpec::PolyRing { p } => *p as i64,
            _ => unreachable!(),
        };
        (1..p).find(|v| (v * k).rem_euclid(p) == 1).expect("unit")
    };
    let within: Vec<Element> = a.values_within(dmax as u64 + 1)?.into_iter().filter(|e| degree_ok(e, dmax)).collect();
    let mut or = Oracle { a: &a, caps, dmax, listed: within.iter().cloned().collect(), asked: BTreeSet::new() };

    // (a) φ(x) = x ∈ A ∧ 2x ∈ A
    let mut phi = BTreeSet::new();
    for x in &within {
        if or.member(&scale(2, x))? {
            phi.insert(x.clone());
        }
    }
    let powers: BTreeSet<Element> = (0..=dmax as usize).map(|i| monomial(g, 1, i)).collect();
    let ca = check("phi defines t^N", &phi, &powers, poly_string);

    // (b) ψ(x) = 3x ∈ A ∖ (t^ℕ ∪ 2t^ℕ), with t^ℕ and 2t^ℕ read through φ
    let half = inv(2);
    let third = inv(3);
    let in_phi = |y: &Element, or: &mut Oracle| -> Result<bool> { Ok(or.member(y)? && or.member(&scale(2, y))?) };
    let psi_of = |w: &Element, or: &mut Oracle| -> Result<bool> {
        let y = scale(3, w);
        Ok(or.member(&y)? && !in_phi(&y, or)? && !in_phi(&scale(half, &y), or)?)
    };
    let mut psi = BTreeSet::new();
    for y in &within {
        let x = scale(third, y);
        if psi_of(&x, &mut or)? {
            psi.insert(x);
        }
    }
    let mut b_set = BTreeSet::new();
    for i in 1..=dmax as usize {
        for j in 1..=dmax as usize - i {
            let e = g.sub(&g.sub(&monomial(g, 1, i + j), &monomial(g, 1, i)), &monomial(g, 1, j));
            b_set.insert(e);
        }
    }
    let cb = check("psi defines B", &psi, &b_set, poly_string);

    // (c) (x = 1 ∧ z = y ∈ t^ℕ) ∨ (y = 1 ∧ z = x ∈ t^ℕ) ∨ (x, y, z ∈ t^ℕ ∧ z − x − y ∈ B)
    let one = monomial(g, 1, 0);
    let mut graph = BTreeSet::new();
    for x in &phi {
        for y in &phi {
            for z in &phi {
                let hit = (*x == one && z == y) || (*y == one && z == x) || psi_of(&g.sub(&g.sub(z, x), y), &mut or)?;
                if hit {
                    graph.insert((x.clone(), y.clone(), z.clone()));
                }
            }
        }
    }
    let mut target = BTreeSet::new();
    for i in 0..=dmax as usize {
        for j in 0..=dmax as usize - i {
            target.insert((monomial(g, 1, i), monomial(g, 1, j), monomial(g, 1, i + j)));
        }
    }
    let cc = check("formula defines (t^i, t^j, t^(i+j))", &graph, &target, |(x, y, z)| {
        format!("({}, {}, {})", poly_string(x), poly_string(y), poly_string(z))
    });
    let cx = or.cross_check(CROSS_CHECK_SAMPLES)?;
    Ok(Reading { name, coefficient: c, checks: vec![ca, cb, cc, cx] })
}

/// Runs the three checks under both readings of the third component.
pub fn polysnip_demo(p: u32, dmax: u32, caps: Caps) -> Result<PolysnipReport> {
    if p < 7 {
        return Err(Error::Precondition("the construction needs p ≥ 7".into()));
    }
    let g = Group::new(GroupSpec::PolyRing { p })?;
    let readings = vec![run_reading(&g, "coefficient 3", 3, dmax, caps)?, run_reading(&g, "digit strings", 1, dmax, caps)?];
    Ok(PolysnipReport { p, dmax, readings })
}

/// φ(x) = x ∈ A ∧ 2x ∈ A for a single element, under coefficient c.
pub fn polysnip_phi(g: &Group, c: i64, x: &Element, caps: Caps) -> Result<bool> {
    let a = polysnip_set(g, c, caps)?;
    Ok(a.member(x, &caps)? && a.member(&g.scale(&BigInt::from(2), x), &caps)?)
}
