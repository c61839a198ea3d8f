//! Finitely generated abelian groups with an injective endomorphism F whose
//! image has finite index.
//!
//! Supported presentations: a free lattice with an integer matrix, the
//! integers with multiplication by a base, the polynomial ring over a prime
//! field with multiplication by t, and a lattice with a finite torsion part
//! and a block lower-triangular matrix.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Largest torsion subgroup for which the inverse of F is tabulated.
pub const TORSION_TABLE_CAP: usize = 1 << 16;

/// A group element as a coordinate vector. Lattice elements have one entry per
/// coordinate (torsion entries reduced into `[0, n_i)`); polynomials list their
/// coefficients lowest degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Element(pub Vec<BigInt>);

impl Element {
    pub fn from_i64s(v: &[i64]) -> Element {
        Element(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    /// Bit length of the largest coordinate.
    pub fn bits(&self) -> u64 {
        self.0.iter().map(|x| x.bits()).max().unwrap_or(0)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    /// Z^m with F given by a nonsingular integer matrix.
    FreeLattice { endo: Matrix },
    /// Z with F = multiplication by d, |d| >= 2.
    IntegerBase { d: BigInt },
    /// F_p[t] with F = multiplication by t.
    PolyRing { p: u32 },
    /// Z^rank x (Z/n_1 x ... x Z/n_k) with a (rank+k)-square block matrix
    /// `[[M, 0], [K, N]]`; torsion rows are read modulo their n_i.
    LatticeWithTorsion { rank: usize, torsion: Vec<BigInt>, endo: Matrix },
}

#[derive(Clone, Debug)]
enum Kind {
    Lattice { m: Matrix },
    Poly { p: u32 },
    Torsion { rank: usize, torsion: Vec<BigInt>, m: Matrix, ninv: Vec<u32> },
}

/// A validated group with its endomorphism.
#[derive(Clone, Debug)]
pub struct Group {
    spec: GroupSpec,
    kind: Kind,
}

impl PartialEq for Group {
    fn eq(&self, o: &Group) -> bool {
        self.spec == o.spec
    }
}
impl Eq for Group {}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn square(m: &Matrix, n: usize) -> bool {
    m.len() == n && m.iter().all(|r| r.len() == n)
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Group> {
        let kind = match &spec {
            GroupSpec::FreeLattice { endo } => {
                if endo.is_empty() || !square(endo, endo.len()) {
                    return Err(Error::InvalidGroup("endomorphism matrix must be square and nonempty".into()));
                }
                if linalg::det(endo).is_zero() {
                    return Err(Error::InvalidGroup("endomorphism matrix is singular".into()));
                }
                Kind::Lattice { m: endo.clone() }
            }
            GroupSpec::IntegerBase { d } => {
                if d.abs() < BigInt::from(2) {
                    return Err(Error::InvalidGroup(format!("base {d} must satisfy |d| >= 2")));
                }
                Kind::Lattice { m: vec![vec![d.clone()]] }
            }
            GroupSpec::PolyRing { p } => {
                if !is_prime(*p) {
                    return Err(Error::InvalidGroup(format!("{p} is not prime")));
                }
                Kind::Poly { p: *p }
            }
            GroupSpec::LatticeWithTorsion { rank, torsion, endo } => Self::validate_torsion(*rank, torsion, endo)?,
        };
        Ok(Group { spec, kind })
    }

    fn validate_torsion(rank: usize, torsion: &[BigInt], endo: &Matrix) -> Result<Kind> {
        let k = torsion.len();
        let n = rank + k;
        if rank == 0 {
            return Err(Error::InvalidGroup("free rank must be positive".into()));
        }
        if !square(endo, n) {
            return Err(Error::InvalidGroup(format!("endomorphism must be {n}x{n}")));
        }
        if torsion.iter().any(|t| t < &BigInt::from(2)) {
            return Err(Error::InvalidGroup("torsion orders must be at least 2".into()));
        }
        for i in 0..rank {
            for j in rank..n {
                if !endo[i][j].is_zero() {
                    return Err(Error::InvalidGroup("torsion must map into torsion (upper-right block must vanish)".into()));
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                if !((&torsion[j] * &endo[rank + i][rank + j]) % &torsion[i]).is_zero() {
                    return Err(Error::InvalidGroup(format!("torsion block entry ({i},{j}) is not well defined")));
                }
            }
        }
        let mut m = endo.clone();
        for i in 0..k {
            for x in m[rank + i].iter_mut() {
                *x = x.mod_floor(&torsion[i]);
            }
        }
        let free: Matrix = m[..rank].iter().map(|r| r[..rank].to_vec()).collect();
        if linalg::det(&free).is_zero() {
            return Err(Error::InvalidGroup("free block is singular".into()));
        }
        let sizes: Vec<usize> = torsion.iter().map(|t| t.to_usize().unwrap_or(usize::MAX)).collect();
        let h = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s)).filter(|&h| h <= TORSION_TABLE_CAP);
        let Some(h) = h else {
            return Err(Error::InvalidGroup(format!("torsion subgroup larger than {TORSION_TABLE_CAP}")));
        };
        let mut ninv = vec![u32::MAX; h];
        for idx in 0..h {
            let y = torsion_decode(idx, &sizes);
            let img: Vec<usize> = (0..k)
                .map(|i| {
                    let s = (0..k).fold(BigInt::zero(), |acc, j| acc + &m[rank + i][rank + j] * BigInt::from(y[j]));
                    s.mod_floor(&torsion[i]).to_usize().unwrap()
                })
                .collect();
            let t = torsion_encode(&img, &sizes);
            if ninv[t] != u32::MAX {
                return Err(Error::InvalidGroup("F is not injective on the torsion subgroup".into()));
            }
            ninv[t] = idx as u32;
        }
        Ok(Kind::Torsion { rank, torsion: torsion.to_vec(), m, ninv })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn is_poly(&self) -> bool {
        matches!(self.kind, Kind::Poly { .. })
    }

    /// Coordinate count for lattice-type groups, `None` for polynomial rings.
    pub fn dim(&self) -> Option<usize> {
        match &self.kind {
            Kind::Lattice { m } => Some(m.len()),
            Kind::Poly { .. } => None,
            Kind::Torsion { m, .. } => Some(m.len()),
        }
    }

    /// The matrix of F on the free part, `None` for polynomial rings.
    pub fn free_matrix(&self) -> Option<Matrix> {
        match &self.kind {
            Kind::Lattice { m } => Some(m.clone()),
            Kind::Poly { .. } => None,
            Kind::Torsion { rank, m, .. } => Some(m[..*rank].iter().map(|r| r[..*rank].to_vec()).collect()),
        }
    }

    pub fn zero(&self) -> Element {
        match self.dim() {
            Some(n) => Element(vec![BigInt::zero(); n]),
            None => Element(Vec::new()),
        }
    }

    pub fn is_zero(&self, a: &Element) -> bool {
        a.0.iter().all(|x| x.is_zero())
    }

    /// Checks and normalizes an element given in any representative form.
    pub fn canonical(&self, a: &Element) -> Result<Element> {
        match &self.kind {
            Kind::Lattice { m } => {
                if a.0.len() != m.len() {
                    return Err(Error::InvalidElement(format!("{a} has {} coordinates, expected {}", a.0.len(), m.len())));
                }
                Ok(a.clone())
            }
            Kind::Poly { p } => {
                let p = BigInt::from(*p);
                let mut v: Vec<BigInt> = a.0.iter().map(|c| c.mod_floor(&p)).collect();
                while v.last().is_some_and(|c| c.is_zero()) {
                    v.pop();
                }
                Ok(Element(v))
            }
            Kind::Torsion { rank, torsion, .. } => {
                if a.0.len() != rank + torsion.len() {
                    return Err(Error::InvalidElement(format!(
                        "{a} has {} coordinates, expected {}",
                        a.0.len(),
                        rank + torsion.len()
                    )));
                }
                let mut v = a.0.clone();
                for (i, t) in torsion.iter().enumerate() {
                    v[rank + i] = v[rank + i].mod_floor(t);
                }
                Ok(Element(v))
            }
        }
    }

    fn norm(&self, v: Vec<BigInt>) -> Element {
        match &self.kind {
            Kind::Lattice { .. } => Element(v),
            _ => self.canonical(&Element(v)).expect("well-formed element"),
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let n = a.0.len().max(b.0.len());
        let z = BigInt::zero();
        self.norm((0..n).map(|i| a.0.get(i).unwrap_or(&z) + b.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        let n = a.0.len().max(b.0.len());
        let z = BigInt::zero();
        self.norm((0..n).map(|i| a.0.get(i).unwrap_or(&z) - b.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn neg(&self, a: &Element) -> Element {
        self.norm(a.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, k: &BigInt, a: &Element) -> Element {
        self.norm(a.0.iter().map(|x| k * x).collect())
    }

    /// F^r(a).
    pub fn apply(&self, a: &Element, r: u32) -> Element {
        match &self.kind {
            Kind::Poly { .. } => {
                if a.0.is_empty() {
                    return a.clone();
                }
                let mut v = vec![BigInt::zero(); r as usize];
                v.extend(a.0.iter().cloned());
                Element(v)
            }
            Kind::Lattice { m } => {
                let mut v = a.0.clone();
                for _ in 0..r {
                    v = linalg::mul_vec(m, &v);
                }
                Element(v)
            }
            Kind::Torsion { m, .. } => {
                let mut v = a.clone();
                for _ in 0..r {
                    v = self.norm(linalg::mul_vec(m, &v.0));
                }
                v
            }
        }
    }

    /// Data for F^r: application, preimages and coset reduction.
    pub fn power(&self, r: u32) -> FPower {
        FPower::new(self, r)
    }

    /// Sum of F^(r i) w_i over the word, least significant letter first.
    pub fn eval_word(&self, word: &[Element], r: u32) -> Element {
        let fp = self.power(r);
        self.eval_word_with(&fp, word)
    }

    pub fn eval_word_with(&self, fp: &FPower, word: &[Element]) -> Element {
        let mut acc = self.zero();
        for w in word.iter().rev() {
            acc = self.add(&fp.apply(&acc), w);
        }
        acc
    }

    /// A generating set: unit vectors (and their torsion counterparts), or 1 and t.
    pub fn generators(&self) -> Vec<Element> {
        match &self.kind {
            Kind::Poly { .. } => vec![Element(vec![BigInt::one()]), Element(vec![BigInt::zero(), BigInt::one()])],
            _ => {
                let n = self.dim().unwrap();
                (0..n)
                    .map(|i| {
                        let mut v = vec![BigInt::zero(); n];
                        v[i] = BigInt::one();
                        Element(v)
                    })
                    .collect()
            }
        }
    }

    pub fn coset_system(&self, r: u32) -> CosetSystem {
        let fp = self.power(r);
        let reps = fp.reps();
        let invariants = fp.invariants();
        CosetSystem { r, reps, invariants, fp }
    }

    pub fn describe(&self) -> String {
        match &self.spec {
            GroupSpec::FreeLattice { endo } => format!("Z^{} with matrix endomorphism", endo.len()),
            GroupSpec::IntegerBase { d } => format!("Z with multiplication by {d}"),
            GroupSpec::PolyRing { p } => format!("F_{p}[t] with multiplication by t"),
            GroupSpec::LatticeWithTorsion { rank, torsion, .. } => {
                let t: Vec<String> = torsion.iter().map(|n| format!("Z/{n}")).collect();
                format!("Z^{rank} x {}", t.join(" x "))
            }
        }
    }
}

fn torsion_decode(mut idx: usize, sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .map(|&s| {
            let d = idx % s;
            idx /= s;
            d
        })
        .collect()
}

fn torsion_encode(y: &[usize], sizes: &[usize]) -> usize {
    y.iter().zip(sizes).rev().fold(0, |acc, (&d, &s)| acc * s + d)
}

/// Precomputed data for F^r on the free coordinates.
#[derive(Clone, Debug)]
struct FreePower {
    det: BigInt,
    adj: Matrix,
    echelon: Matrix,
}

impl FreePower {
    fn new(mr: &Matrix) -> FreePower {
        let det = linalg::det(mr);
        let adj = linalg::adjugate(mr);
        let n = mr.len();
        let cols: Vec<Vec<BigInt>> = (0..n).map(|j| (0..n).map(|i| mr[i][j].clone()).collect()).collect();
        let echelon = linalg::echelon_basis(&cols, n).expect("nonsingular");
        FreePower { det, adj, echelon }
    }

    fn preimage(&self, a: &[BigInt]) -> Option<Vec<BigInt>> {
        let x = linalg::mul_vec(&self.adj, a);
        x.into_iter()
            .map(|v| {
                let (q, r) = v.div_rem(&self.det);
                r.is_zero().then_some(q)
            })
            .collect()
    }

    fn reduce(&self, a: &mut [BigInt]) {
        for (i, b) in self.echelon.iter().enumerate() {
            let q = a[i].div_floor(&b[i]);
            if !q.is_zero() {
                for (x, y) in a.iter_mut().zip(b) {
                    *x -= &q * y;
                }
            }
        }
    }

    fn boxes(&self) -> Vec<BigInt> {
        self.echelon.iter().enumerate().map(|(i, b)| b[i].clone()).collect()
    }
}

/// F^r with everything needed to invert it and reduce modulo its image.
#[derive(Clone, Debug)]
pub struct FPower {
    group: Group,
    r: u32,
    matrix: Option<Matrix>,
    free: Option<FreePower>,
    int_base: Option<BigInt>,
}

impl FPower {
    fn new(g: &Group, r: u32) -> FPower {
        let (matrix, free) = match &g.kind {
            Kind::Poly { .. } => (None, None),
            Kind::Lattice { m } => {
                let mr = linalg::pow(m, r);
                let f = FreePower::new(&mr);
                (Some(mr), Some(f))
            }
            Kind::Torsion { rank, torsion, m, .. } => {
                let mut mr = linalg::identity(m.len());
                for _ in 0..r {
                    mr = linalg::mul(m, &mr);
                    for (i, t) in torsion.iter().enumerate() {
                        for x in mr[rank + i].iter_mut() {
                            *x = x.mod_floor(t);
                        }
                    }
                }
                let free: Matrix = mr[..*rank].iter().map(|row| row[..*rank].to_vec()).collect();
                let f = FreePower::new(&free);
                (Some(mr), Some(f))
            }
        };
        let int_base = match &g.spec {
            GroupSpec::IntegerBase { d } => Some(num_traits::pow(d.clone(), r as usize)),
            _ => None,
        };
        FPower { group: g.clone(), r, matrix, free, int_base }
    }

    pub fn exponent(&self) -> u32 {
        self.r
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn apply(&self, a: &Element) -> Element {
        if let Some(d) = &self.int_base {
            return Element(vec![&a.0[0] * d]);
        }
        match &self.matrix {
            Some(m) => self.group.norm(linalg::mul_vec(m, &a.0)),
            None => self.group.apply(a, self.r),
        }
    }

    /// The unique x with F^r x = a, if it exists.
    pub fn preimage(&self, a: &Element) -> Option<Element> {
        if let Some(d) = &self.int_base {
            let (q, r) = a.0[0].div_rem(d);
            return r.is_zero().then(|| Element(vec![q]));
        }
        match &self.group.kind {
            Kind::Poly { .. } => {
                let r = self.r as usize;
                if a.0.len() <= r {
                    return a.0.iter().all(|c| c.is_zero()).then(|| Element(Vec::new()));
                }
                a.0[..r].iter().all(|c| c.is_zero()).then(|| Element(a.0[r..].to_vec()))
            }
            Kind::Lattice { .. } => self.free.as_ref().unwrap().preimage(&a.0).map(Element),
            Kind::Torsion { rank, torsion, ninv, .. } => {
                let rank = *rank;
                let x = self.free.as_ref().unwrap().preimage(&a.0[..rank])?;
                let m = self.matrix.as_ref().unwrap();
                let k = torsion.len();
                let sizes: Vec<usize> = torsion.iter().map(|t| t.to_usize().unwrap()).collect();
                let b: Vec<usize> = (0..k)
                    .map(|i| {
                        let kx = (0..rank).fold(BigInt::zero(), |acc, j| acc + &m[rank + i][j] * &x[j]);
                        (&a.0[rank + i] - kx).mod_floor(&torsion[i]).to_usize().unwrap()
                    })
                    .collect();
                let mut idx = torsion_encode(&b, &sizes);
                for _ in 0..self.r {
                    idx = ninv[idx] as usize;
                }
                let y = torsion_decode(idx, &sizes);
                let mut v = x;
                v.extend(y.into_iter().map(BigInt::from));
                Some(Element(v))
            }
        }
    }

    /// The canonical representative of a modulo the image of F^r.
    pub fn reduce(&self, a: &Element) -> Element {
        if let Some(d) = &self.int_base {
            return Element(vec![a.0[0].mod_floor(&d.abs())]);
        }
        match &self.group.kind {
            Kind::Poly { .. } => {
                let mut v: Vec<BigInt> = a.0.iter().take(self.r as usize).cloned().collect();
                while v.last().is_some_and(|c| c.is_zero()) {
                    v.pop();
                }
                Element(v)
            }
            Kind::Lattice { .. } => {
                let mut v = a.0.clone();
                self.free.as_ref().unwrap().reduce(&mut v);
                Element(v)
            }
            Kind::Torsion { rank, .. } => {
                let mut v = a.0.clone();
                self.free.as_ref().unwrap().reduce(&mut v[..*rank]);
                for x in v[*rank..].iter_mut() {
                    *x = BigInt::zero();
                }
                Element(v)
            }
        }
    }

    /// Index of the image of F^r.
    pub fn index(&self) -> BigInt {
        match &self.group.kind {
            Kind::Poly { p } => num_traits::pow(BigInt::from(*p), self.r as usize),
            _ => self.free.as_ref().unwrap().det.abs(),
        }
    }

    /// Invariant factors of the quotient by the image of F^r (trivial factors dropped).
    pub fn invariants(&self) -> Vec<BigInt> {
        match &self.group.kind {
            Kind::Poly { p } => vec![BigInt::from(*p); self.r as usize],
            Kind::Lattice { .. } => {
                linalg::smith_invariants(self.matrix.as_ref().unwrap()).into_iter().filter(|d| !d.is_one()).collect()
            }
            Kind::Torsion { rank, .. } => {
                let m = self.matrix.as_ref().unwrap();
                let free: Matrix = m[..*rank].iter().map(|row| row[..*rank].to_vec()).collect();
                linalg::smith_invariants(&free).into_iter().filter(|d| !d.is_one()).collect()
            }
        }
    }

    /// All canonical representatives in ascending order.
    pub fn reps(&self) -> Vec<Element> {
        match &self.group.kind {
            Kind::Poly { p } => {
                let r = self.r as usize;
                let total = (*p as usize).pow(r as u32);
                let mut out: Vec<Element> = (0..total)
                    .map(|mut i| {
                        let mut v: Vec<BigInt> = (0..r)
                            .map(|_| {
                                let d = i % *p as usize;
                                i /= *p as usize;
                                BigInt::from(d)
                            })
                            .collect();
                        while v.last().is_some_and(|c| c.is_zero()) {
                            v.pop();
                        }
                        Element(v)
                    })
                    .collect();
                out.sort();
                out
            }
            _ => {
                let boxes = self.free.as_ref().unwrap().boxes();
                let extra = self.group.dim().unwrap() - boxes.len();
                let mut out = Vec::new();
                let mut cur = vec![BigInt::zero(); boxes.len()];
                loop {
                    let mut v = cur.clone();
                    v.extend((0..extra).map(|_| BigInt::zero()));
                    out.push(Element(v));
                    let mut i = boxes.len();
                    loop {
                        if i == 0 {
                            return out;
                        }
                        i -= 1;
                        cur[i] += 1;
                        if cur[i] < boxes[i] {
                            break;
                        }
                        cur[i] = BigInt::zero();
                    }
                }
            }
        }
    }
}

/// Exactly one representative per coset of the image of F^r.
#[derive(Clone, Debug)]
pub struct CosetSystem {
    pub r: u32,
    pub reps: Vec<Element>,
    pub invariants: Vec<BigInt>,
    fp: FPower,
}

impl CosetSystem {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Position of the representative congruent to a.
    pub fn index_of(&self, a: &Element) -> usize {
        let rep = self.fp.reduce(a);
        self.reps.binary_search(&rep).expect("reduction yields a listed representative")
    }

    pub fn power(&self) -> &FPower {
        &self.fp
    }
}
