//! Exact word counting.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use super::dfa::Dfa;

/// Successor multiplicities of every state: (target, number of letters).
pub(crate) fn transfer(d: &Dfa) -> Vec<Vec<(u32, BigUint)>> {
    (0..d.states() as u32).map(|q| d.mdd.leaf_counts(d.trans_node(q), d.tracks.radix())).collect()
}

/// Number of accepted words of length n, for n = 0..=max.
pub fn exact_counts(d: &Dfa, max: usize) -> Vec<BigUint> {
    let t = transfer(d);
    let mut cur = vec![BigUint::zero(); d.states()];
    cur[d.initial() as usize] = BigUint::from(1u32);
    let mut out = Vec::with_capacity(max + 1);
    for n in 0..=max {
        out.push(cur.iter().enumerate().filter(|(q, _)| d.is_final(*q as u32)).fold(BigUint::zero(), |a, (_, c)| a + c));
        if n == max {
            break;
        }
        let mut next = vec![BigUint::zero(); d.states()];
        for (q, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (s, m) in &t[q] {
                next[*s as usize] += c * m;
            }
        }
        cur = next;
    }
    out
}

/// Number of accepted words of length at most n.
pub fn count_words(d: &Dfa, n: usize) -> BigUint {
    exact_counts(d, n).into_iter().sum()
}

/// Cumulative counts for n = 0..=max.
pub fn growth_profile(d: &Dfa, max: usize) -> Vec<BigUint> {
    let mut acc = BigUint::zero();
    exact_counts(d, max)
        .into_iter()
        .map(|c| {
            acc += c;
            acc.clone()
        })
        .collect()
}
