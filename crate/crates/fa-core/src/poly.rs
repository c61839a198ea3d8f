//! Dense polynomials over the rationals, lowest degree first.
//!
//! Only what the eigenvalue gate needs: gcd, reversal, the Schur-Cohn test
//! and Sturm root counting.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn from_ints(c: &[BigInt]) -> Poly {
        let mut p = Poly(c.iter().map(|x| BigRational::from_integer(x.clone())).collect());
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|x| x.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Poly(self.0.iter().map(|c| c / &l).collect())
    }

    /// x^n p(1/x) where n is the degree.
    pub fn reversed(&self) -> Poly {
        let mut c = self.0.clone();
        c.reverse();
        let mut p = Poly(c);
        p.trim();
        p
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        let mut p = Poly((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect());
        p.trim();
        p
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        let mut p = Poly((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect());
        p.trim();
        p
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(Vec::new());
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] = &c[i + j] + a * b;
            }
        }
        let mut p = Poly(c);
        p.trim();
        p
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        let mut p = Poly(self.0.iter().map(|c| c * k).collect());
        p.trim();
        p
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        let mut p = Poly(
            self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect(),
        );
        p.trim();
        p
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let dd = d.degree();
        let dl = d.lead();
        if r.is_zero() || r.degree() < dd {
            return (Poly(Vec::new()), r);
        }
        let mut q = vec![BigRational::zero(); r.degree() - dd + 1];
        while !r.is_zero() && r.degree() >= dd {
            let k = r.degree() - dd;
            let f = r.lead() / &dl;
            for (i, c) in d.0.iter().enumerate() {
                r.0[i + k] = &r.0[i + k] - &f * c;
            }
            q[k] = f;
            r.trim();
        }
        let mut qp = Poly(q);
        qp.trim();
        (qp, r)
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Substitute x -> k x.
    pub fn scale_arg(&self, k: &BigRational) -> Poly {
        let mut pw = BigRational::one();
        let mut out = Vec::with_capacity(self.0.len());
        for c in &self.0 {
            out.push(c * &pw);
            pw = &pw * k;
        }
        let mut p = Poly(out);
        p.trim();
        p
    }

    /// True when every complex root lies strictly inside the unit disk
    /// (Schur-Cohn recursion). Constants are trivially stable.
    pub fn schur_stable(&self) -> bool {
        let mut p = self.clone();
        loop {
            if p.is_zero() {
                return false;
            }
            let n = p.degree();
            if n == 0 {
                return true;
            }
            let a0 = p.0[0].clone();
            let an = p.0[n].clone();
            if a0.abs() >= an.abs() {
                return false;
            }
            let q: Vec<BigRational> = (1..=n).map(|k| &an * &p.0[k] - &a0 * &p.0[n - k]).collect();
            p = Poly(q);
            p.trim();
        }
    }

    /// Number of distinct real roots in the closed interval [a, b], by Sturm's theorem.
    pub fn real_roots_in(&self, a: &BigRational, b: &BigRational) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let g = self.gcd(&self.derivative());
        let (sq, _) = self.divrem(&g);
        let mut seq = vec![sq.clone(), sq.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].divrem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-BigRational::one()));
        }
        let changes = |x: &BigRational| {
            let vals: Vec<BigRational> = seq.iter().map(|p| p.eval(x)).filter(|v| !v.is_zero()).collect();
            vals.windows(2).filter(|w| w[0].is_positive() != w[1].is_positive()).count()
        };
        let root_at_a = usize::from(sq.eval(a).is_zero());
        changes(a) - changes(b) + root_at_a
    }
}
