//! Semilinear sets and Parikh images of weighted graphs.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::dfa::Dfa;
use super::sparse::scc;
use crate::error::{Error, Result};

/// {base + Σ λ_i periods_i : λ ∈ ℕ^j}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearSet {
    pub base: Vec<u64>,
    pub periods: Vec<Vec<u64>>,
}

impl LinearSet {
    /// Drops zero periods and periods generated by the others.
    pub fn new(base: Vec<u64>, mut periods: Vec<Vec<u64>>) -> LinearSet {
        periods.retain(|p| p.iter().any(|&x| x != 0));
        periods.sort();
        periods.dedup();
        let mut i = periods.len();
        while i > 0 {
            i -= 1;
            let p = periods.remove(i);
            if !fits_quick(&p, &periods) {
                periods.insert(i, p);
            }
        }
        LinearSet { base, periods }
    }

    /// A sufficient test for `o ⊆ self`.
    pub fn includes(&self, o: &LinearSet) -> bool {
        if o.base.len() != self.base.len() || o.base.iter().zip(&self.base).any(|(a, b)| a < b) {
            return false;
        }
        let rest: Vec<u64> = o.base.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        fits_quick(&rest, &self.periods) && o.periods.iter().all(|p| fits_quick(p, &self.periods))
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        if v.len() != self.base.len() || v.iter().zip(&self.base).any(|(a, b)| a < b) {
            return false;
        }
        let rest: Vec<u64> = v.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        fits(&rest, &self.periods)
    }

    /// Keeps only the listed coordinates.
    pub fn select(&self, coords: &[usize]) -> LinearSet {
        LinearSet::new(
            coords.iter().map(|&c| self.base[c]).collect(),
            self.periods.iter().map(|p| coords.iter().map(|&c| p[c]).collect()).collect(),
        )
    }
}

/// Steps allowed to the subsumption tests, which may answer "no" when
/// they run out.
const FITS_BUDGET: usize = 4096;

/// Whether `rest` is an ℕ-combination of `periods`.
fn fits(rest: &[u64], periods: &[Vec<u64>]) -> bool {
    let mut budget = usize::MAX;
    fits_within(rest, periods, &mut budget).unwrap_or(false)
}

/// Like `fits`, but gives up (returning `None`) after `budget` steps.
fn fits_within(rest: &[u64], periods: &[Vec<u64>], budget: &mut usize) -> Option<bool> {
    if rest.iter().all(|&x| x == 0) {
        return Some(true);
    }
    // a positive coordinate no remaining period touches
    if rest.iter().enumerate().any(|(c, &r)| r > 0 && periods.iter().all(|p| p[c] == 0)) {
        return Some(false);
    }
    let (p, tail) = periods.split_first()?;
    let max = rest.iter().zip(p).filter(|(_, &q)| q > 0).map(|(&r, &q)| r / q).min().unwrap_or(0);
    let mut cur = rest.to_vec();
    for k in 0..=max {
        *budget = budget.checked_sub(1)?;
        if k > 0 {
            for (c, &q) in cur.iter_mut().zip(p) {
                *c -= q;
            }
        }
        if fits_within(&cur, tail, budget)? {
            return Some(true);
        }
    }
    Some(false)
}

fn fits_quick(rest: &[u64], periods: &[Vec<u64>]) -> bool {
    let mut budget = FITS_BUDGET;
    fits_within(rest, periods, &mut budget).unwrap_or(false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearSet {
    pub dim: usize,
    pub sets: Vec<LinearSet>,
}

impl SemilinearSet {
    pub fn empty(dim: usize) -> SemilinearSet {
        SemilinearSet { dim, sets: Vec::new() }
    }

    pub fn zero(dim: usize) -> SemilinearSet {
        SemilinearSet { dim, sets: vec![LinearSet::new(vec![0; dim], Vec::new())] }
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.sets.iter().any(|l| l.contains(v))
    }

    /// Sorts, deduplicates and drops linear sets included in another.
    pub fn normalize(mut self) -> SemilinearSet {
        let set: BTreeSet<LinearSet> = self.sets.drain(..).collect();
        let mut cands: Vec<LinearSet> = set.into_iter().collect();
        cands.sort_by(|a, b| b.periods.len().cmp(&a.periods.len()).then_with(|| a.cmp(b)));
        let mut kept: Vec<LinearSet> = Vec::new();
        for c in cands {
            if !kept.iter().any(|k| k.includes(&c)) {
                kept.push(c);
            }
        }
        kept.sort();
        self.sets = kept;
        self
    }

    pub fn union(&self, o: &SemilinearSet) -> SemilinearSet {
        let mut sets = self.sets.clone();
        sets.extend(o.sets.iter().cloned());
        SemilinearSet { dim: self.dim, sets }.normalize()
    }

    /// Minkowski sum.
    pub fn sum(&self, o: &SemilinearSet) -> SemilinearSet {
        let mut sets = Vec::new();
        for a in &self.sets {
            for b in &o.sets {
                let base = a.base.iter().zip(&b.base).map(|(x, y)| x + y).collect();
                let mut periods = a.periods.clone();
                periods.extend(b.periods.iter().cloned());
                sets.push(LinearSet::new(base, periods));
            }
        }
        SemilinearSet { dim: self.dim, sets }.normalize()
    }

    /// Kleene star, as the sum over components of
    /// {0} ∪ (b + ℕ({b} ∪ P)).
    pub fn star(&self, cap: usize) -> Result<SemilinearSet> {
        let mut acc = SemilinearSet::zero(self.dim);
        for l in &self.sets {
            let mut periods = l.periods.clone();
            periods.push(l.base.clone());
            let one = SemilinearSet {
                dim: self.dim,
                sets: vec![LinearSet::new(vec![0; self.dim], Vec::new()), LinearSet::new(l.base.clone(), periods)],
            };
            acc = acc.sum(&one);
            if acc.sets.len() > cap {
                return Err(Error::CapExceeded(alloc::format!("more than {cap} linear sets")));
            }
        }
        Ok(acc)
    }

    pub fn select(&self, coords: &[usize]) -> SemilinearSet {
        SemilinearSet { dim: coords.len(), sets: self.sets.iter().map(|l| l.select(coords)).collect() }.normalize()
    }
}

/// A graph with vector weights on its edges.
#[derive(Clone, Debug, Default)]
pub struct WeightedGraph {
    pub nodes: usize,
    pub dim: usize,
    pub initial: u32,
    pub finals: Vec<bool>,
    pub edges: Vec<(u32, u32, Vec<u64>)>,
}

/// Default cap on the number of linear sets produced.
pub const PARIKH_CAP: usize = 1_000_000;

impl WeightedGraph {
    /// The set of weight sums of paths from the initial node to a final node.
    pub fn parikh(&self, cap: usize) -> Result<SemilinearSet> {
        let n = self.nodes;
        let mut out_e: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut in_e: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, (a, b, _)) in self.edges.iter().enumerate() {
            out_e[*a as usize].push(i);
            in_e[*b as usize].push(i);
        }
        let mut reach = vec![false; n];
        let mut stack = vec![self.initial];
        reach[self.initial as usize] = true;
        while let Some(v) = stack.pop() {
            for &e in &out_e[v as usize] {
                let w = self.edges[e].1;
                if !reach[w as usize] {
                    reach[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        let mut co = self.finals.clone();
        let mut stack: Vec<u32> = (0..n as u32).filter(|&v| co[v as usize]).collect();
        while let Some(v) = stack.pop() {
            for &e in &in_e[v as usize] {
                let u = self.edges[e].0;
                if !co[u as usize] {
                    co[u as usize] = true;
                    stack.push(u);
                }
            }
        }
        let live: Vec<bool> = (0..n).map(|v| reach[v] && co[v]).collect();
        if !live[self.initial as usize] {
            return Ok(SemilinearSet::empty(self.dim));
        }
        let adj: Vec<Vec<u32>> = (0..n)
            .map(|v| out_e[v].iter().map(|&e| self.edges[e].1).filter(|&w| live[w as usize]).collect())
            .collect();
        let (comp, ncomp) = scc(n, &live, &adj);
        let mut size = vec![0usize; ncomp];
        let mut internal = vec![0usize; ncomp];
        for v in 0..n {
            if !live[v] {
                continue;
            }
            size[comp[v] as usize] += 1;
            for &e in &out_e[v] {
                let w = self.edges[e].1 as usize;
                if live[w] && comp[w] == comp[v] {
                    internal[comp[v] as usize] += 1;
                }
            }
        }
        if (0..ncomp).all(|c| internal[c] <= size[c]) {
            let mut acc = Vec::new();
            let mut base = vec![0u64; self.dim];
            let mut periods = Vec::new();
            self.paths(self.initial, &live, &comp, &out_e, &mut base, &mut periods, &mut acc, cap)?;
            let set: BTreeSet<LinearSet> = acc.into_iter().collect();
            return Ok(SemilinearSet { dim: self.dim, sets: set.into_iter().collect() });
        }
        self.eliminate(&live, cap)
    }

    /// Path enumeration when every component is a single node or a simple
    /// cycle: each visited cycle contributes its weight as a period.
    #[allow(clippy::too_many_arguments)]
    fn paths(
        &self,
        e: u32,
        live: &[bool],
        comp: &[u32],
        out_e: &[Vec<usize>],
        base: &mut Vec<u64>,
        periods: &mut Vec<Vec<u64>>,
        acc: &mut Vec<LinearSet>,
        cap: usize,
    ) -> Result<()> {
        let c = comp[e as usize];
        let internal_edge = |v: u32| {
            out_e[v as usize].iter().copied().find(|&i| {
                let w = self.edges[i].1;
                live[w as usize] && comp[w as usize] == c
            })
        };
        let mut positions: Vec<(u32, Vec<u64>)> = vec![(e, vec![0; self.dim])];
        let cyclic = internal_edge(e).is_some();
        if cyclic {
            let mut cur = e;
            let mut partial = vec![0u64; self.dim];
            loop {
                let i = internal_edge(cur).unwrap();
                for (p, x) in partial.iter_mut().zip(&self.edges[i].2) {
                    *p += x;
                }
                cur = self.edges[i].1;
                if cur == e {
                    break;
                }
                positions.push((cur, partial.clone()));
            }
            periods.push(partial);
        }
        for (x, partial) in positions {
            for (b, p) in base.iter_mut().zip(&partial) {
                *b += p;
            }
            if self.finals[x as usize] {
                if acc.len() >= cap {
                    return Err(Error::CapExceeded(alloc::format!("more than {cap} linear sets")));
                }
                acc.push(LinearSet::new(base.clone(), periods.clone()));
            }
            for &i in &out_e[x as usize] {
                let (_, w, ref wt) = self.edges[i];
                if !live[w as usize] || comp[w as usize] == c {
                    continue;
                }
                for (b, p) in base.iter_mut().zip(wt) {
                    *b += p;
                }
                self.paths(w, live, comp, out_e, base, periods, acc, cap)?;
                for (b, p) in base.iter_mut().zip(wt) {
                    *b -= p;
                }
            }
            for (b, p) in base.iter_mut().zip(&partial) {
                *b -= p;
            }
        }
        if cyclic {
            periods.pop();
        }
        Ok(())
    }

    /// General case: state elimination with semilinear labels.
    fn eliminate(&self, live: &[bool], cap: usize) -> Result<SemilinearSet> {
        let n = self.nodes;
        let s = n;
        let t = n + 1;
        let total = n + 2;
        let mut label: Vec<Vec<Option<SemilinearSet>>> = vec![vec![None; total]; total];
        let add = |label: &mut Vec<Vec<Option<SemilinearSet>>>, a: usize, b: usize, l: SemilinearSet| {
            label[a][b] = Some(match label[a][b].take() {
                Some(x) => x.union(&l),
                None => l,
            });
        };
        add(&mut label, s, self.initial as usize, SemilinearSet::zero(self.dim));
        for v in 0..n {
            if live[v] && self.finals[v] {
                add(&mut label, v, t, SemilinearSet::zero(self.dim));
            }
        }
        for (a, b, w) in &self.edges {
            if live[*a as usize] && live[*b as usize] {
                let l = SemilinearSet { dim: self.dim, sets: vec![LinearSet::new(w.clone(), Vec::new())] };
                add(&mut label, *a as usize, *b as usize, l);
            }
        }
        let mut left: Vec<usize> = (0..n).filter(|&v| live[v]).collect();
        while !left.is_empty() {
            let degree = |x: usize| {
                let i = (0..total).filter(|&p| p != x && label[p][x].is_some()).count();
                let o = (0..total).filter(|&q| q != x && label[x][q].is_some()).count();
                i * o
            };
            let pick = (0..left.len()).min_by_key(|&i| degree(left[i])).unwrap();
            let x = left.swap_remove(pick);
            let loop_star = match &label[x][x] {
                Some(l) => l.star(cap)?,
                None => SemilinearSet::zero(self.dim),
            };
            let ins: Vec<usize> = (0..total).filter(|&p| p != x && label[p][x].is_some()).collect();
            let outs: Vec<usize> = (0..total).filter(|&q| q != x && label[x][q].is_some()).collect();
            for &p in &ins {
                let pre = label[p][x].as_ref().unwrap().sum(&loop_star);
                for &q in &outs {
                    let l = pre.sum(label[x][q].as_ref().unwrap());
                    if l.sets.len() > cap {
                        return Err(Error::CapExceeded(alloc::format!("more than {cap} linear sets")));
                    }
                    add(&mut label, p, q, l);
                }
            }
            for row in label.iter_mut() {
                row[x] = None;
            }
            label[x] = vec![None; total];
        }
        Ok(label[s][t].take().unwrap_or_else(|| SemilinearSet::empty(self.dim)))
    }
}

/// Parikh image of a DFA's language, one coordinate per letter in
/// ascending letter order. Only for small alphabets.
pub fn parikh_image(d: &Dfa) -> Result<SemilinearSet> {
    let letters = d.tracks().letters();
    let k = letters.len();
    let mut g = WeightedGraph {
        nodes: d.states(),
        dim: k,
        initial: d.initial(),
        finals: d.finish().to_vec(),
        edges: Vec::new(),
    };
    for q in 0..d.states() as u32 {
        for (i, l) in letters.iter().enumerate() {
            let mut w = vec![0u64; k];
            w[i] = 1;
            g.edges.push((q, d.step(q, l), w));
        }
    }
    g.parikh(PARIKH_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Tracks;

    #[test]
    fn ab_star() {
        // (ab)* over {a=0, b=1}
        let d = Dfa::from_fn(Tracks::single(2, 0), 3, 0, vec![true, false, false], |q, l| match (q, l[0]) {
            (0, 0) => 1,
            (1, 1) => 0,
            _ => 2,
        })
        .minimize();
        let p = parikh_image(&d).unwrap();
        assert_eq!(p.sets, vec![LinearSet::new(vec![0, 0], vec![vec![1, 1]])]);
    }

    #[test]
    fn a_star_b_star() {
        let d = Dfa::from_fn(Tracks::single(2, 0), 3, 0, vec![true, true, false], |q, l| match (q, l[0]) {
            (0, 0) => 0,
            (0, 1) | (1, 1) => 1,
            _ => 2,
        })
        .minimize();
        let p = parikh_image(&d).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert!(p.contains(&[a, b]));
            }
        }
        assert_eq!(p.sets.len(), 2);
        assert!(p.sets.contains(&LinearSet::new(vec![0, 1], vec![vec![1, 0], vec![0, 1]])));
    }

    #[test]
    fn elimination_agrees_with_brute_force() {
        // (a|b)* a: not a simple-cycle graph.
        let d = Dfa::from_fn(Tracks::single(2, 0), 2, 0, vec![false, true], |_, l| if l[0] == 0 { 1 } else { 0 });
        let p = parikh_image(&d).unwrap();
        for a in 0..5u64 {
            for b in 0..5u64 {
                assert_eq!(p.contains(&[a, b]), a >= 1, "{a} {b}");
            }
        }
    }
}
