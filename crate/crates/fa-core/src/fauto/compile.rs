//! First-order formulas over (Γ, +) compiled to automata.
//!
//! Variables become tracks over a common digit alphabet; a subformula is
//! compiled to a DFA over the sorted tracks of its free variables and
//! cylindrified when combined with others.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::carry::{CarrySystem, Equation, Term};
use crate::automata::{Dfa, Tracks};
use crate::error::{Caps, Error, Result};
use crate::group::{Element, FPower, Group};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Const(Element),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Scale(BigInt, Box<Expr>),
    /// F^k applied to the expression.
    Endo(u32, Box<Expr>),
}

impl Expr {
    pub fn var(s: &str) -> Expr {
        Expr::Var(s.to_string())
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn scale(k: i64, a: Expr) -> Expr {
        Expr::Scale(BigInt::from(k), Box::new(a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Eq(Expr, Expr),
    /// a ≤ b as ∃d. a + d = b; meaningful over ℕ.
    Le(Expr, Expr),
    /// a ≡ r (mod c) as ∃q. a = c·q + r; meaningful over ℕ.
    Mod(Expr, u64, u64),
    In(String, Vec<Expr>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Expr, b: Expr) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn member(set: &str, args: Vec<Expr>) -> Formula {
        Formula::In(set.to_string(), args)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(f))
    }

    pub fn all<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        fs.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    pub fn any<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        fs.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    /// Free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let add = |e: &Expr, bound: &Vec<String>, out: &mut Vec<String>| {
            let mut vs = Vec::new();
            expr_vars(e, &mut vs);
            for v in vs {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) | Formula::Le(a, b) => {
                add(a, bound, out);
                add(b, bound, out);
            }
            Formula::Mod(a, _, _) => add(a, bound, out),
            Formula::In(_, args) => args.iter().for_each(|a| add(a, bound, out)),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

fn expr_vars(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone())
            }
        }
        Expr::Const(_) => {}
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            expr_vars(a, out);
            expr_vars(b, out);
        }
        Expr::Scale(_, a) | Expr::Endo(_, a) => expr_vars(a, out),
    }
}

/// Linear form Σ coeff·F^shift(var) + constant.
struct Linear {
    terms: BTreeMap<(String, u32), BigInt>,
    constant: Element,
}

/// Compiles formulas over one digit system. `sets` maps names to
/// (arity, DFA over that many tracks of the same digits).
pub struct Engine<'a> {
    fp: FPower,
    digits: Vec<Element>,
    sets: &'a BTreeMap<String, (usize, Dfa)>,
    caps: Caps,
    vars: Vec<String>,
    fresh: usize,
}

type Compiled = (Vec<usize>, Dfa);

impl<'a> Engine<'a> {
    pub fn new(fp: FPower, digits: Vec<Element>, sets: &'a BTreeMap<String, (usize, Dfa)>, caps: Caps) -> Engine<'a> {
        Engine { fp, digits, sets, caps, vars: Vec::new(), fresh: 0 }
    }

    fn group(&self) -> &Group {
        self.fp.group()
    }

    fn one_track(&self) -> Tracks {
        let zero = self.group().zero();
        let pad = self.digits.iter().position(|d| *d == zero).expect("digits contain 0") as u32;
        Tracks::single(self.digits.len() as u32, pad)
    }

    fn tracks(&self, k: usize) -> Tracks {
        self.one_track().repeat(k)
    }

    fn var_id(&mut self, v: &str) -> usize {
        match self.vars.iter().position(|x| x == v) {
            Some(i) => i,
            None => {
                self.vars.push(v.to_string());
                self.vars.len() - 1
            }
        }
    }

    fn fresh_var(&mut self) -> String {
        self.fresh += 1;
        format!("#{}", self.fresh)
    }

    /// DFA over the tracks of `free`, in that order. Every free variable of
    /// the formula must be listed.
    pub fn compile(&mut self, f: &Formula, free: &[&str]) -> Result<Dfa> {
        self.vars.clear();
        for v in free {
            if self.vars.iter().any(|x| x == v) {
                return Err(Error::Parse(format!("variable {v} listed twice")));
            }
            self.vars.push(v.to_string());
        }
        for v in f.free_vars() {
            if !free.contains(&v.as_str()) {
                return Err(Error::Parse(format!("unbound variable {v}")));
            }
        }
        let (vars, d) = self.rec(f)?;
        let all: Vec<usize> = (0..free.len()).collect();
        self.widen(&vars, &d, &all)
    }

    fn constant(&self, truth: bool) -> Compiled {
        let t = self.tracks(0);
        (Vec::new(), if truth { Dfa::universal(t) } else { Dfa::empty(t) })
    }

    fn widen(&self, vars: &[usize], d: &Dfa, to: &[usize]) -> Result<Dfa> {
        if vars == to {
            return Ok(d.clone());
        }
        let map: Vec<usize> = vars.iter().map(|v| to.binary_search(v).expect("subset")).collect();
        d.cylindrify(&self.tracks(to.len()), &map)
    }

    fn combine(&self, a: Compiled, b: Compiled, op: impl Fn(bool, bool) -> bool) -> Result<Compiled> {
        let mut vars = a.0.clone();
        vars.extend(b.0.iter().copied());
        vars.sort_unstable();
        vars.dedup();
        let da = self.widen(&a.0, &a.1, &vars)?;
        let db = self.widen(&b.0, &b.1, &vars)?;
        let d = da.product(&db, op)?;
        self.check_size(&d)?;
        Ok((vars, d))
    }

    fn check_size(&self, d: &Dfa) -> Result<()> {
        if d.states() > self.caps.states {
            return Err(Error::CapExceeded(format!("intermediate automaton with {} states", d.states())));
        }
        Ok(())
    }

    fn linear(&self, e: &Expr) -> Result<Linear> {
        let g = self.group();
        Ok(match e {
            Expr::Var(v) => {
                let mut terms = BTreeMap::new();
                terms.insert((v.clone(), 0), BigInt::one());
                Linear { terms, constant: g.zero() }
            }
            Expr::Const(c) => Linear { terms: BTreeMap::new(), constant: g.canonical(c)? },
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let sign = if matches!(e, Expr::Sub(..)) { -BigInt::one() } else { BigInt::one() };
                let mut l = self.linear(a)?;
                let r = self.linear(b)?;
                for (k, c) in r.terms {
                    *l.terms.entry(k).or_insert_with(BigInt::zero) += &sign * c;
                }
                l.constant = g.add(&l.constant, &g.scale(&sign, &r.constant));
                l
            }
            Expr::Scale(k, a) => {
                let mut l = self.linear(a)?;
                for c in l.terms.values_mut() {
                    *c *= k;
                }
                l.constant = g.scale(k, &l.constant);
                l
            }
            Expr::Endo(k, a) => {
                let l = self.linear(a)?;
                Linear {
                    terms: l.terms.into_iter().map(|((v, s), c)| ((v, s + k), c)).collect(),
                    constant: g.apply(&l.constant, *k),
                }
            }
        })
    }

    fn equation(&mut self, lhs: &Expr, rhs: &Expr) -> Result<Compiled> {
        let mut l = self.linear(&Expr::Sub(Box::new(lhs.clone()), Box::new(rhs.clone())))?;
        l.terms.retain(|_, c| !c.is_zero());
        let mut vars: Vec<usize> = l.terms.keys().map(|(v, _)| v.clone()).collect::<Vec<_>>().iter().map(|v| self.var_id(v)).collect();
        vars.sort_unstable();
        vars.dedup();
        if vars.is_empty() {
            return Ok(self.constant(self.group().is_zero(&l.constant)));
        }
        let terms = l
            .terms
            .iter()
            .map(|((v, s), c)| {
                let id = self.vars.iter().position(|x| x == v).unwrap();
                Term { track: vars.binary_search(&id).unwrap(), coeff: c.clone(), shift: *s }
            })
            .collect();
        let sys = CarrySystem { alphabets: vec![self.digits.clone(); vars.len()], equations: vec![Equation { terms, constant: l.constant }] };
        let (d, _) = sys.automaton(&self.fp, self.caps.carry)?;
        Ok((vars, d))
    }

    fn project(&self, c: Compiled, var: usize) -> Result<Compiled> {
        let (vars, d) = c;
        match vars.binary_search(&var) {
            Err(_) => Ok((vars, d)),
            Ok(pos) => {
                let p = d.project(&[pos], true)?;
                self.check_size(&p)?;
                let rest = vars.into_iter().filter(|&v| v != var).collect();
                Ok((rest, p))
            }
        }
    }

    fn rec(&mut self, f: &Formula) -> Result<Compiled> {
        match f {
            Formula::True => Ok(self.constant(true)),
            Formula::False => Ok(self.constant(false)),
            Formula::Eq(a, b) => self.equation(a, b),
            Formula::Le(a, b) => {
                let d = self.fresh_var();
                let body = Formula::Eq(Expr::add(a.clone(), Expr::Var(d.clone())), b.clone());
                self.rec(&Formula::Exists(d, Box::new(body)))
            }
            Formula::Mod(a, c, r) => {
                if *c == 0 {
                    return Err(Error::Parse("modulus must be positive".into()));
                }
                let q = self.fresh_var();
                let g = self.group();
                let rhs = Expr::add(Expr::Scale(BigInt::from(*c), Box::new(Expr::Var(q.clone()))), Expr::Const(g.scale(&BigInt::from(*r), &self.unit()?)));
                self.rec(&Formula::Exists(q, Box::new(Formula::Eq(a.clone(), rhs))))
            }
            Formula::In(name, args) => self.membership(name, args),
            Formula::Not(a) => {
                let (vars, d) = self.rec(a)?;
                Ok((vars, d.complement().minimize()))
            }
            Formula::And(a, b) => {
                let ca = self.rec(a)?;
                if ca.1.is_empty() {
                    return Ok(self.constant(false));
                }
                let cb = self.rec(b)?;
                self.combine(ca, cb, |x, y| x && y)
            }
            Formula::Or(a, b) => {
                let ca = self.rec(a)?;
                let cb = self.rec(b)?;
                self.combine(ca, cb, |x, y| x || y)
            }
            Formula::Exists(v, body) => {
                let (id, saved) = self.bind(v);
                let c = self.rec(body);
                self.unbind(v, saved);
                self.project(c?, id)
            }
            Formula::Forall(v, body) => {
                let neg = Formula::not(Formula::Exists(v.clone(), Box::new(Formula::not((**body).clone()))));
                self.rec(&neg)
            }
        }
    }

    /// The integer 1 as a group element (ℤ-like groups only).
    fn unit(&self) -> Result<Element> {
        match self.group().dim() {
            Some(1) => Ok(Element::from_i64s(&[1])),
            _ => Err(Error::Unsupported("congruences need a one-dimensional integer group".into())),
        }
    }

    /// Gives the bound variable a fresh track id; shadowed names are restored
    /// afterwards.
    fn bind(&mut self, v: &str) -> (usize, Option<usize>) {
        let saved = self.vars.iter().position(|x| x == v);
        if let Some(i) = saved {
            self.vars[i] = format!("#shadow{i}");
        }
        self.vars.push(v.to_string());
        (self.vars.len() - 1, saved)
    }

    fn unbind(&mut self, v: &str, saved: Option<usize>) {
        let i = self.vars.iter().rposition(|x| x == v).expect("bound");
        self.vars[i] = format!("#dead{i}");
        if let Some(s) = saved {
            self.vars[s] = v.to_string();
        }
    }

    fn membership(&mut self, name: &str, args: &[Expr]) -> Result<Compiled> {
        let (arity, d) = self.sets.get(name).cloned().ok_or_else(|| Error::Parse(format!("unknown set {name}")))?;
        if arity != args.len() {
            return Err(Error::ArityMismatch { expected: arity, got: args.len() });
        }
        let direct: Option<Vec<usize>> = args
            .iter()
            .map(|a| match a {
                Expr::Var(v) => Some(self.var_id(v)),
                _ => None,
            })
            .collect();
        if let Some(ids) = direct {
            if ids.windows(2).all(|w| w[0] < w[1]) {
                return Ok((ids, d));
            }
        }
        // Fresh variables u₁ < … < u_m with uᵢ = argᵢ.
        let names: Vec<String> = (0..arity).map(|_| self.fresh_var()).collect();
        let ids: Vec<(usize, Option<usize>)> = names.iter().map(|n| self.bind(n)).collect();
        let inner = {
            let u: Vec<usize> = ids.iter().map(|x| x.0).collect();
            let mut acc: Compiled = (u, d);
            let mut res = Ok(());
            for (n, a) in names.iter().zip(args) {
                match self.equation(&Expr::Var(n.clone()), a) {
                    Ok(c) => match self.combine(acc.clone(), c, |x, y| x && y) {
                        Ok(v) => acc = v,
                        Err(e) => {
                            res = Err(e);
                            break;
                        }
                    },
                    Err(e) => {
                        res = Err(e);
                        break;
                    }
                }
            }
            res.map(|_| acc)
        };
        let mut c = inner?;
        for (n, (id, saved)) in names.iter().zip(ids).rev() {
            c = self.project(c, id)?;
            self.unbind(n, saved);
        }
        Ok(c)
    }
}
