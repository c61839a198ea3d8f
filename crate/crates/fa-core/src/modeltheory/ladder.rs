//! Ladders: a₁..a_N, b₁..b_N with aᵢ + b_j ∈ A exactly when i ≤ j.
//!
//! Translating every aᵢ by c and every b_j by −c keeps all sums, so both
//! searches fix a₁ = 0. Then every b_j lies in A.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fauto::{compile_formula, AutomaticSet, Expr, Formula};
use crate::group::Element;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ladder {
    pub a: Vec<Vec<Element>>,
    pub b: Vec<Vec<Element>>,
}

impl Ladder {
    pub fn n(&self) -> usize {
        self.a.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderMode {
    /// Decide the ladder sentence with automata.
    Exact,
    /// Search ladders whose sums a₁ + b_j and aᵢ + bᵢ are elements of A
    /// with λ ≤ 2^B.
    Bounded(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LadderOutcome {
    Found(Ladder),
    /// The bounded search found nothing.
    NoneWithin(u32),
    /// The exact search proved there is no ladder of this size.
    NoLadder,
}

fn tuple_add(x: &AutomaticSet, a: &[Element], b: &[Element]) -> Vec<Element> {
    a.iter().zip(b).map(|(u, v)| x.group().add(u, v)).collect()
}

fn tuple_sub(x: &AutomaticSet, a: &[Element], b: &[Element]) -> Vec<Element> {
    a.iter().zip(b).map(|(u, v)| x.group().sub(u, v)).collect()
}

/// Checks the whole membership table.
pub fn verify_ladder(x: &AutomaticSet, l: &Ladder) -> Result<bool> {
    if l.a.len() != l.b.len() {
        return Ok(false);
    }
    for (i, a) in l.a.iter().enumerate() {
        for (j, b) in l.b.iter().enumerate() {
            if x.member(&tuple_add(x, a, b))? != (i <= j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn ladder_search(x: &AutomaticSet, n: usize, mode: LadderMode) -> Result<LadderOutcome> {
    if n == 0 {
        return Err(Error::Precondition("ladder size must be at least 1".into()));
    }
    let out = match mode {
        LadderMode::Exact => exact(x, n)?,
        LadderMode::Bounded(b) => bounded(x, n, b)?,
    };
    if let LadderOutcome::Found(l) = &out {
        if !verify_ladder(x, l)? {
            return Err(Error::Precondition("ladder candidate failed verification".into()));
        }
    }
    Ok(out)
}

fn exact(x: &AutomaticSet, n: usize) -> Result<LadderOutcome> {
    let m = x.arity();
    let g = x.group();
    let var = |side: char, i: usize, c: usize| format!("{side}{i}_{c}");
    let mut names: Vec<String> = Vec::new();
    for i in 1..n {
        for c in 0..m {
            names.push(var('a', i, c));
        }
    }
    for j in 0..n {
        for c in 0..m {
            names.push(var('b', j, c));
        }
    }
    let sum = |i: usize, j: usize| -> Vec<Expr> {
        (0..m).map(|c| if i == 0 { Expr::var(&var('b', j, c)) } else { Expr::add(Expr::var(&var('a', i, c)), Expr::var(&var('b', j, c))) }).collect()
    };
    let mut parts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let atom = Formula::member("A", sum(i, j));
            parts.push(if i <= j { atom } else { Formula::not(atom) });
        }
    }
    let mut sets = BTreeMap::new();
    sets.insert(String::from("A"), x.clone());
    let free: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let rel = compile_formula(x.span(), &Formula::all(parts), &free, &sets, *x.caps())?;
    let Some(word) = rel.dfa().shortest_accepted() else {
        return Ok(LadderOutcome::NoLadder);
    };
    let span = x.span();
    let vals: Vec<Element> = (0..names.len())
        .map(|t| {
            let w: Vec<usize> = word.iter().map(|l| l[t] as usize).collect();
            span.eval(&w)
        })
        .collect();
    let mut a = vec![vec![g.zero(); m]];
    for i in 1..n {
        a.push(vals[(i - 1) * m..i * m].to_vec());
    }
    let off = (n - 1) * m;
    let b = (0..n).map(|j| vals[off + j * m..off + (j + 1) * m].to_vec()).collect();
    Ok(LadderOutcome::Found(Ladder { a, b }))
}

struct Search<'a> {
    x: &'a AutomaticSet,
    n: usize,
    pool: Vec<Vec<Element>>,
    memo: BTreeMap<Vec<Element>, bool>,
    steps: usize,
    limit: usize,
    a: Vec<Vec<Element>>,
    b: Vec<Vec<Element>>,
}

impl Search<'_> {
    fn member(&mut self, t: Vec<Element>) -> Result<bool> {
        if let Some(&v) = self.memo.get(&t) {
            return Ok(v);
        }
        self.steps += 1;
        if self.steps > self.limit {
            return Err(Error::CapExceeded(format!(
                "ladder search stopped after {} membership tests at depth {}",
                self.limit,
                self.b.len()
            )));
        }
        let v = self.x.member(&t)?;
        self.memo.insert(t, v);
        Ok(v)
    }

    /// Extends a ladder of size k = b.len() (with a.len() = k).
    fn go(&mut self) -> Result<bool> {
        let k = self.b.len();
        if k == self.n {
            return Ok(true);
        }
        for bi in 0..self.pool.len() {
            let b = self.pool[bi].clone();
            // earlier rows must hit the new column
            let mut ok = true;
            for i in 1..k {
                let s = tuple_add(self.x, &self.a[i], &b);
                if !self.member(s)? {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            if k == 0 {
                self.b.push(b);
                if self.go()? {
                    return Ok(true);
                }
                self.b.pop();
                continue;
            }
            for yi in 0..self.pool.len() {
                let a = tuple_sub(self.x, &self.pool[yi], &b);
                // the new row must miss every earlier column
                let mut ok = true;
                for j in 0..k {
                    let s = tuple_add(self.x, &a, &self.b[j]);
                    if self.member(s)? {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                self.a.push(a);
                self.b.push(b.clone());
                if self.go()? {
                    return Ok(true);
                }
                self.a.pop();
                self.b.pop();
            }
        }
        Ok(false)
    }
}

fn bounded(x: &AutomaticSet, n: usize, bound: u32) -> Result<LadderOutcome> {
    let pool = x.enumerate(bound)?;
    let zero = vec![x.group().zero(); x.arity()];
    let limit = x.caps().search.saturating_mul(100);
    let mut s = Search { x, n, pool, memo: BTreeMap::new(), steps: 0, limit, a: vec![zero], b: Vec::new() };
    if s.go()? {
        Ok(LadderOutcome::Found(Ladder { a: s.a, b: s.b }))
    } else {
        Ok(LadderOutcome::NoneWithin(bound))
    }
}
