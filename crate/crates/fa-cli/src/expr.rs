//! Set expressions.
//!
//! ```text
//! S ::= S | S        union (loosest)
//!     | S & S        intersection
//!     | S + S        elementwise sum
//!     | !S           complement
//!     | (S) | name
//!     | lang(path) | cycle(elem, delta) | powers(elem) | order(elem)
//!     | finite(tuple, ...) | whole(m) | empty(m)
//!     | translate(S, tuple) | exists/i(S) | exists(S, i)
//! ```
//!
//! Elements are JSON arrays or bare integers; a tuple of several elements
//! is an array of elements. `exists/i` projects away coordinate i
//! (counting from 0).

use std::collections::BTreeMap;

use fa_core::fauto::{compile_formula, f_cycle, f_powers, order_set, reps, AutomaticSet, Expr as Term, Formula};
use fa_core::spanning::SpanningSet;
use serde_json::Value;

use crate::formats::{elem_from, tuple_from};
use crate::workspace::Workspace;
use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum SetExpr {
    Name(String),
    Lang(String),
    Cycle(Value, u32),
    Powers(Value),
    Order(Value),
    Finite(Vec<Value>),
    Whole(usize),
    Empty(usize),
    Translate(Box<SetExpr>, Value),
    Exists(Box<SetExpr>, usize),
    Not(Box<SetExpr>),
    Sum(Box<SetExpr>, Box<SetExpr>),
    And(Box<SetExpr>, Box<SetExpr>),
    Or(Box<SetExpr>, Box<SetExpr>),
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

fn err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::usage(msg))
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), CliError> {
        if self.eat(c) {
            Ok(())
        } else {
            err(format!("expected '{}' at offset {}", c as char, self.i))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
            self.i += 1;
        }
        (self.i > start).then(|| String::from_utf8_lossy(&self.s[start..self.i]).into_owned())
    }

    fn number(&mut self) -> Result<u64, CliError> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i]).ok().and_then(|t| t.parse().ok()).ok_or_else(|| CliError::usage(format!("expected a number at offset {start}")))
    }

    /// A JSON array with balanced brackets, or a possibly negative integer.
    fn literal(&mut self) -> Result<Value, CliError> {
        self.ws();
        let start = self.i;
        if self.s.get(self.i) == Some(&b'[') {
            let mut depth = 0;
            while self.i < self.s.len() {
                match self.s[self.i] {
                    b'[' => depth += 1,
                    b']' => depth -= 1,
                    _ => {}
                }
                self.i += 1;
                if depth == 0 {
                    break;
                }
            }
        } else {
            if self.s.get(self.i) == Some(&b'-') {
                self.i += 1;
            }
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
        }
        let text = String::from_utf8_lossy(&self.s[start..self.i]);
        serde_json::from_str(&text).map_err(|_| CliError::usage(format!("bad element literal {text:?}")))
    }

    /// Raw text up to the matching ')', quotes stripped.
    fn path(&mut self) -> Result<String, CliError> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i] != b')' {
            self.i += 1;
        }
        let p = String::from_utf8_lossy(&self.s[start..self.i]).trim().trim_matches('"').to_string();
        if p.is_empty() {
            return err("lang() needs a file");
        }
        Ok(p)
    }

    fn union(&mut self) -> Result<SetExpr, CliError> {
        let mut e = self.inter()?;
        while self.eat(b'|') {
            e = SetExpr::Or(Box::new(e), Box::new(self.inter()?));
        }
        Ok(e)
    }

    fn inter(&mut self) -> Result<SetExpr, CliError> {
        let mut e = self.sum()?;
        while self.eat(b'&') {
            e = SetExpr::And(Box::new(e), Box::new(self.sum()?));
        }
        Ok(e)
    }

    fn sum(&mut self) -> Result<SetExpr, CliError> {
        let mut e = self.unary()?;
        while self.eat(b'+') {
            e = SetExpr::Sum(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<SetExpr, CliError> {
        if self.eat(b'!') {
            return Ok(SetExpr::Not(Box::new(self.unary()?)));
        }
        if self.eat(b'(') {
            let e = self.union()?;
            self.expect(b')')?;
            return Ok(e);
        }
        let Some(id) = self.ident() else {
            return err(format!("expected a set at offset {}", self.i));
        };
        if id == "exists" && self.eat(b'/') {
            let i = self.number()? as usize;
            self.expect(b'(')?;
            let e = self.union()?;
            self.expect(b')')?;
            return Ok(SetExpr::Exists(Box::new(e), i));
        }
        if !self.eat(b'(') {
            return Ok(SetExpr::Name(id));
        }
        let e = match id.as_str() {
            "lang" => SetExpr::Lang(self.path()?),
            "cycle" => {
                let a = self.literal()?;
                self.expect(b',')?;
                SetExpr::Cycle(a, self.number()? as u32)
            }
            "powers" => SetExpr::Powers(self.literal()?),
            "order" => SetExpr::Order(self.literal()?),
            "finite" => {
                let mut ts = vec![self.literal()?];
                while self.eat(b',') {
                    ts.push(self.literal()?);
                }
                SetExpr::Finite(ts)
            }
            "whole" => SetExpr::Whole(self.number()? as usize),
            "empty" => SetExpr::Empty(self.number()? as usize),
            "translate" => {
                let s = self.union()?;
                self.expect(b',')?;
                SetExpr::Translate(Box::new(s), self.literal()?)
            }
            "exists" => {
                let s = self.union()?;
                self.expect(b',')?;
                SetExpr::Exists(Box::new(s), self.number()? as usize)
            }
            other => return err(format!("unknown set constructor {other:?}")),
        };
        self.expect(b')')?;
        Ok(e)
    }
}

pub fn parse(text: &str) -> Result<SetExpr, CliError> {
    let mut p = Parser { s: text.as_bytes(), i: 0 };
    let e = p.union()?;
    p.ws();
    if p.i != p.s.len() {
        return err(format!("unexpected input at offset {}: {:?}", p.i, &text[p.i..]));
    }
    Ok(e)
}

impl SetExpr {
    /// Names and files in the expression, in reading order.
    fn carriers<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            SetExpr::Name(n) | SetExpr::Lang(n) => out.push(n),
            SetExpr::Translate(a, _) | SetExpr::Exists(a, _) | SetExpr::Not(a) => a.carriers(out),
            SetExpr::Sum(a, b) | SetExpr::And(a, b) | SetExpr::Or(a, b) => {
                a.carriers(out);
                b.carriers(out);
            }
            _ => {}
        }
    }
}

/// Evaluates over `span`; without one, over the spanning set of the first
/// name or file that brings its own.
pub fn eval(e: &SetExpr, ws: &Workspace, span: Option<&SpanningSet>) -> Result<AutomaticSet, CliError> {
    let span = match span {
        Some(s) => s.clone(),
        None => {
            let mut names = Vec::new();
            e.carriers(&mut names);
            match names.iter().find_map(|n| ws.set(n, None).ok()) {
                Some(a) => a.span().clone(),
                None => return err("no set in the expression carries a spanning set; give one with --span or --group"),
            }
        }
    };
    go(e, ws, &span)
}

fn go(e: &SetExpr, ws: &Workspace, span: &SpanningSet) -> Result<AutomaticSet, CliError> {
    let caps = ws.caps;
    Ok(match e {
        SetExpr::Name(n) => ws.set(n, Some(span))?,
        SetExpr::Lang(p) => ws.set(p, Some(span))?,
        SetExpr::Cycle(a, d) => f_cycle(span, &elem_from(a)?, *d, caps)?,
        SetExpr::Powers(a) => f_powers(span, &elem_from(a)?, caps)?,
        SetExpr::Order(a) => order_set(span, &elem_from(a)?, caps)?,
        SetExpr::Finite(ts) => {
            let m = match &ts[0] {
                Value::Array(xs) if xs.iter().all(Value::is_array) && !xs.is_empty() => xs.len(),
                _ => 1,
            };
            let tuples = ts.iter().map(|t| tuple_from(t, m)).collect::<Result<Vec<_>, _>>()?;
            AutomaticSet::finite(span, &tuples, m, caps)?
        }
        SetExpr::Whole(m) => AutomaticSet::whole(span, *m, caps),
        SetExpr::Empty(m) => AutomaticSet::empty(span, *m, caps),
        SetExpr::Translate(a, t) => {
            let a = go(a, ws, span)?;
            let t = tuple_from(t, a.arity())?;
            a.translate(&t)?
        }
        SetExpr::Exists(a, i) => {
            let a = go(a, ws, span)?;
            project(&a, *i)?
        }
        SetExpr::Not(a) => go(a, ws, span)?.complement(),
        SetExpr::Sum(a, b) => reps::sum(&go(a, ws, span)?, &go(b, ws, span)?)?,
        SetExpr::And(a, b) => go(a, ws, span)?.intersect(&go(b, ws, span)?)?,
        SetExpr::Or(a, b) => go(a, ws, span)?.union(&go(b, ws, span)?)?,
    })
}

/// {(x_j)_{j≠i} : ∃x_i (x_0, …, x_{m−1}) ∈ A}.
fn project(a: &AutomaticSet, i: usize) -> Result<AutomaticSet, CliError> {
    let m = a.arity();
    if i >= m {
        return err(format!("cannot project coordinate {i} of a set of arity {m}"));
    }
    let names: Vec<String> = (0..m).map(|j| format!("x{j}")).collect();
    let body = Formula::exists(&names[i], Formula::member("A", names.iter().map(|n| Term::var(n)).collect()));
    let free: Vec<&str> = names.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, n)| n.as_str()).collect();
    let mut sets = BTreeMap::new();
    sets.insert(String::from("A"), a.clone());
    Ok(compile_formula(a.span(), &body, &free, &sets, *a.caps())?)
}
