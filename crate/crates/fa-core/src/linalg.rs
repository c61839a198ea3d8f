//! Exact integer matrix arithmetic.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> Matrix {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn from_i64(rows: &[&[i64]]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

pub fn mul_vec(a: &Matrix, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(BigInt::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

pub fn pow(a: &Matrix, mut e: u32) -> Matrix {
    let mut result = identity(a.len());
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    result
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(a: &Matrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

fn minor(a: &Matrix, row: usize, col: usize) -> Matrix {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Adjugate, so that `a * adjugate(a) = det(a) * I`.
pub fn adjugate(a: &Matrix) -> Matrix {
    let n = a.len();
    if n == 1 {
        return vec![vec![BigInt::one()]];
    }
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let d = det(&minor(a, i, j));
            adj[j][i] = if (i + j) % 2 == 0 { d } else { -d };
        }
    }
    adj
}

/// Characteristic polynomial det(xI - a), coefficients lowest degree first.
pub fn charpoly(a: &Matrix) -> Vec<BigInt> {
    let n = a.len();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        mk = next;
        let am = mul(a, &mk);
        let tr = (0..n).fold(BigInt::zero(), |acc, i| acc + &am[i][i]);
        c[n - k] = -(tr / BigInt::from(k));
    }
    c
}

/// Upper-triangular basis of the row lattice spanned by `gens`, with positive
/// pivots on the diagonal and entries above each pivot reduced into
/// `[0, pivot)`. Returns `None` when the lattice does not have full rank `dim`.
pub fn echelon_basis(gens: &[Vec<BigInt>], dim: usize) -> Option<Matrix> {
    let mut rows: Vec<Vec<BigInt>> = gens.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut basis: Matrix = Vec::with_capacity(dim);
    for col in 0..dim {
        loop {
            let mut best: Option<usize> = None;
            for (i, r) in rows.iter().enumerate() {
                if !r[col].is_zero() && best.is_none_or(|b| r[col].abs() < rows[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { return None };
            let pivot = rows[p].clone();
            let mut done = true;
            for (i, r) in rows.iter_mut().enumerate() {
                if i == p || r[col].is_zero() {
                    continue;
                }
                let q = r[col].div_floor(&pivot[col]);
                for (x, y) in r.iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
                if !r[col].is_zero() {
                    done = false;
                }
            }
            if done {
                let mut row = rows.swap_remove(p);
                if row[col].is_negative() {
                    for x in row.iter_mut() {
                        *x = -x.clone();
                    }
                }
                basis.push(row);
                rows.retain(|r| r.iter().any(|x| !x.is_zero()));
                break;
            }
        }
    }
    for j in 1..dim {
        for i in 0..j {
            let q = basis[i][j].div_floor(&basis[j][j]);
            if !q.is_zero() {
                let bj = basis[j].clone();
                for (x, y) in basis[i].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
            }
        }
    }
    Some(basis)
}

/// Smith invariant factors d_1 | d_2 | ... of a square matrix (absolute values).
pub fn smith_invariants(a: &Matrix) -> Vec<BigInt> {
    let n = a.len();
    let mut m = a.clone();
    let mut out = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                out.extend((t..n).map(|_| BigInt::zero()));
                return out;
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..n {
                let q = m[i][t].div_floor(&m[t][t]);
                let pivot_row = m[t].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut() {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !(&m[i][j] % &m[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    let row = m[i].clone();
                    for (x, y) in m[t].iter_mut().zip(&row) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        out.push(m[t][t].abs());
    }
    out
}
