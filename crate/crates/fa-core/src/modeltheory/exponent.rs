//! Exponent relations: which exponent vectors of fixed block words land in
//! a regular language, as Presburger relations.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::automata::parikh::PARIKH_CAP;
use crate::automata::{Dfa, LinearSet, SemilinearSet};
use crate::error::{Caps, Error, Result};
use crate::fauto::AutomaticSet;
use crate::group::Element;
use crate::presburger::PresburgerRel;

/// The relation {(k_{t,j})} of exponent vectors such that the tracks of `d`
/// read `blocks[t][0]^{k_{t,0}} blocks[t][1]^{k_{t,1}} ⋯` followed by
/// padding and the result is accepted. Coordinates are listed track by
/// track. With one track a block may be any word of letters; with several
/// tracks every block must be a single letter.
///
/// Without filters one track goes through a semilinear set. With several
/// tracks every interleaving of block boundaries gives its own linear set,
/// and with a filter the pruning only works on automata, so those cases
/// accumulate the relation as an automaton instead.
pub fn block_exponents(d: &Dfa, blocks: &[Vec<Vec<u32>>], caps: &Caps) -> Result<PresburgerRel> {
    block_exponents_within(d, blocks, None, caps)
}

/// `block_exponents` intersected with the product of `filters`, one
/// relation per track over that track's blocks. With several tracks the
/// filters prune as soon as a track leaves a block: the exponents of its
/// finished blocks must extend to a tuple of the filter.
pub fn block_exponents_within(d: &Dfa, blocks: &[Vec<Vec<u32>>], filters: Option<&[PresburgerRel]>, caps: &Caps) -> Result<PresburgerRel> {
    let dim: usize = blocks.iter().map(|b| b.len()).sum();
    let mut offs = Vec::with_capacity(blocks.len());
    let mut acc = 0;
    for b in blocks {
        offs.push(acc);
        acc += b.len();
    }
    // prefix[t][j]: the filter of track t with its blocks ≥ j projected away
    let mut prefix: Vec<Vec<PresburgerRel>> = Vec::new();
    if let Some(fs) = filters {
        if fs.len() != blocks.len() {
            return Err(Error::ArityMismatch { expected: blocks.len(), got: fs.len() });
        }
        for (t, f) in fs.iter().enumerate() {
            let n = blocks[t].len();
            if f.arity() != n {
                return Err(Error::ArityMismatch { expected: n, got: f.arity() });
            }
            let mut col = vec![f.clone()];
            for j in (0..n).rev() {
                let last = col.last().expect("nonempty").exists(j)?;
                col.push(last);
            }
            col.reverse();
            let lifted = col
                .iter()
                .enumerate()
                .map(|(j, r)| r.cylindrify(dim, &(offs[t]..offs[t] + j).collect::<Vec<_>>()))
                .collect::<Result<Vec<_>>>()?;
            prefix.push(lifted);
        }
    }
    if (blocks.len() == 1 && filters.is_none()) || dim == 0 {
        let s = block_semilinear(d, blocks, caps)?;
        let mut r = if dim == 0 {
            if s.is_empty() { PresburgerRel::empty(0) } else { PresburgerRel::full(0) }
        } else {
            PresburgerRel::from_semilinear(&s)?
        };
        for col in &prefix {
            r = r.and(col.last().expect("nonempty"))?;
        }
        return Ok(r);
    }
    let mut unary: BTreeMap<(usize, Option<u64>), PresburgerRel> = BTreeMap::new();
    pointer_dp(
        d,
        blocks,
        caps,
        PresburgerRel::from_semilinear(&SemilinearSet::zero(dim))?,
        PresburgerRel::empty(dim),
        |a, b| a.or(b),
        |r, coords, l, lambda| {
            if coords.is_empty() {
                return Ok(r.clone());
            }
            if !unary.contains_key(&(l, lambda)) {
                let lin = LinearSet::new(vec![l as u64], lambda.map(|x| vec![vec![x]]).unwrap_or_default());
                unary.insert((l, lambda), PresburgerRel::from_semilinear(&SemilinearSet { dim: 1, sets: vec![lin] })?);
            }
            r.add_along(coords, &unary[&(l, lambda)])
        },
        |r, t, j| match prefix.get(t) {
            Some(col) => r.and(&col[j]),
            None => Ok(r.clone()),
        },
        |r| r.is_empty(),
    )
}

/// The same relation as a semilinear set.
pub fn block_semilinear(d: &Dfa, blocks: &[Vec<Vec<u32>>], caps: &Caps) -> Result<SemilinearSet> {
    let dim: usize = blocks.iter().map(|b| b.len()).sum();
    pointer_dp(
        d,
        blocks,
        caps,
        SemilinearSet::zero(dim),
        SemilinearSet::empty(dim),
        |a, b| {
            let u = a.union(b);
            if u.sets.len() > PARIKH_CAP {
                return Err(Error::CapExceeded(format!("more than {PARIKH_CAP} linear sets")));
            }
            Ok(u)
        },
        |s, coords, l, lambda| {
            let mut base = vec![0u64; dim];
            let mut period = vec![0u64; dim];
            for &c in coords {
                base[c] = l as u64;
                period[c] = lambda.unwrap_or(0);
            }
            Ok(s.sum(&SemilinearSet { dim, sets: vec![LinearSet::new(base, vec![period])] }))
        },
        |s, _, _| Ok(s.clone()),
        |s| s.is_empty(),
    )
}

/// Runs over (state, block pointers); pointer n_t means track t is
/// padding. While the pointers stay put every step reads the same letter
/// and adds one to each current block, so from a state the run follows a
/// rho-shaped orbit: a state first met after l steps is reached after
/// exactly l steps, or after l + λ·i steps if it lies on the cycle of
/// length λ. Pointer vectors are processed in order of their sum and the
/// values arriving at each (state, pointers) are merged with `union`.
/// `shift(v, coords, l, λ)` adds L to the listed coordinates for every L
/// in {l} or {l + λ·i}; `arrive(v, t, j)` is applied when track t moves
/// on to pointer j.
#[allow(clippy::too_many_arguments)]
fn pointer_dp<T: Clone>(
    d: &Dfa,
    blocks: &[Vec<Vec<u32>>],
    caps: &Caps,
    zero: T,
    empty: T,
    union: impl Fn(&T, &T) -> Result<T>,
    mut shift: impl FnMut(&T, &[usize], usize, Option<u64>) -> Result<T>,
    arrive: impl Fn(&T, usize, usize) -> Result<T>,
    is_empty: impl Fn(&T) -> bool,
) -> Result<T> {
    let m = d.tracks().len();
    if blocks.len() != m {
        return Err(Error::ArityMismatch { expected: m, got: blocks.len() });
    }
    if m != 1 && blocks.iter().flatten().any(|w| w.len() != 1) {
        return Err(Error::Precondition("blocks on several tracks must be single letters".into()));
    }
    let radix = d.tracks().radix();
    for (t, bs) in blocks.iter().enumerate() {
        if bs.iter().flatten().any(|&l| l >= radix[t]) {
            return Err(Error::AlphabetMismatch("block letter outside the track alphabet".into()));
        }
    }
    let sizes: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
    let mut offs = vec![0usize; m];
    for t in 1..m {
        offs[t] = offs[t - 1] + sizes[t - 1];
    }
    let mut stride = vec![1usize; m];
    let mut total = 1usize;
    for t in 0..m {
        stride[t] = total;
        total = total.checked_mul(sizes[t] + 1).filter(|&x| x <= caps.states).ok_or_else(|| {
            Error::CapExceeded(format!("more than {} block pointer combinations", caps.states))
        })?;
    }
    let decode = |p: usize| -> Vec<usize> { (0..m).map(|t| (p / stride[t]) % (sizes[t] + 1)).collect() };
    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by_key(|&p| decode(p).iter().sum::<usize>());
    let pad = d.tracks().pad_letter();

    let mut at: Vec<BTreeMap<u32, T>> = vec![BTreeMap::new(); total];
    at[0].insert(d.initial(), zero);
    let mut result = empty;
    for p in order {
        let incoming = core::mem::take(&mut at[p]);
        if incoming.is_empty() {
            continue;
        }
        let pv = decode(p);
        let coords: Vec<usize> = (0..m).filter(|&t| pv[t] < sizes[t]).map(|t| offs[t] + pv[t]).collect();
        let step = |q: u32| -> u32 {
            if m == 1 && pv[0] < sizes[0] {
                blocks[0][pv[0]].iter().fold(q, |s, &l| d.step(s, &[l]))
            } else {
                let letter: Vec<u32> = (0..m).map(|t| if pv[t] < sizes[t] { blocks[t][pv[t]][0] } else { pad[t] }).collect();
                d.step(q, &letter)
            }
        };
        let mut after: BTreeMap<u32, T> = BTreeMap::new();
        for (q, v) in incoming {
            let mut first: BTreeMap<u32, usize> = BTreeMap::new();
            let mut seq = Vec::new();
            let mut cur = q;
            while !first.contains_key(&cur) {
                first.insert(cur, seq.len());
                seq.push(cur);
                cur = step(cur);
            }
            let start = first[&cur];
            let lambda = (seq.len() - start) as u64;
            for (l, &q2) in seq.iter().enumerate() {
                let add = shift(&v, &coords, l, (l >= start).then_some(lambda))?;
                if is_empty(&add) {
                    continue;
                }
                let merged = match after.get(&q2) {
                    Some(e) => union(e, &add)?,
                    None => add,
                };
                after.insert(q2, merged);
            }
        }
        for (q2, v) in after {
            if coords.is_empty() && d.is_final(q2) {
                result = union(&result, &v)?;
            }
            for t in 0..m {
                if pv[t] < sizes[t] {
                    let v = arrive(&v, t, pv[t] + 1)?;
                    if is_empty(&v) {
                        continue;
                    }
                    let slot = &mut at[p + stride[t]];
                    let merged = match slot.get(&q2) {
                        Some(e) => union(e, &v)?,
                        None => v,
                    };
                    slot.insert(q2, merged);
                }
            }
        }
    }
    Ok(result)
}

/// Sorted distinct letters with 0 added.
pub(crate) fn letter_list(zero: &Element, letters: impl IntoIterator<Item = Element>) -> Vec<Element> {
    let mut v: Vec<Element> = letters.into_iter().collect();
    v.push(zero.clone());
    v.sort();
    v.dedup();
    v
}

/// {(𝐤₁,…,𝐤_m) : ([𝐚₁^{𝐤₁}]_{F^s}, …, [𝐚_m^{𝐤_m}]_{F^s}) ∈ X}, where
/// [𝐚^𝐤] is the word a₁^{k₁}⋯a_n^{k_n}. Coordinates are listed tuple by
/// tuple.
pub fn exponent_relation(x: &AutomaticSet, tuples: &[Vec<Element>], s: u32) -> Result<PresburgerRel> {
    exponent_relation_within(x, tuples, s, None)
}

/// `exponent_relation` intersected with the product of `filters`, one per
/// tuple; see `block_exponents_within`.
pub fn exponent_relation_within(x: &AutomaticSet, tuples: &[Vec<Element>], s: u32, filters: Option<&[PresburgerRel]>) -> Result<PresburgerRel> {
    let m = x.arity();
    if tuples.len() != m {
        return Err(Error::ArityMismatch { expected: m, got: tuples.len() });
    }
    let g = x.group();
    let mut canon = Vec::with_capacity(m);
    for a in tuples {
        canon.push(a.iter().map(|e| g.canonical(e)).collect::<Result<Vec<_>>>()?);
    }
    let letters = letter_list(&g.zero(), canon.iter().flatten().cloned());
    let d = x.letter_language(&letters, s)?;
    let idx = |e: &Element| letters.binary_search(e).expect("listed letter") as u32;
    let blocks: Vec<Vec<Vec<u32>>> = canon.iter().map(|a| a.iter().map(|e| vec![idx(e)]).collect()).collect();
    block_exponents_within(&d, &blocks, filters, x.caps())
}
