//! Formula syntax over (ℕ, +).
//!
//! ```text
//! F ::= F | F  |  F & F  |  !F  |  exists v. F  |  forall v. F  |  (F)
//!     | E = E  |  E != E  |  E <= E  |  E < E  |  E >= E  |  E > E
//!     | E mod c = r  |  true  |  false
//! E ::= E + E  |  c * E  |  c  |  v  |  (E)
//! ```
//! `|` binds loosest, then `&`, then `!`; quantifiers extend as far right
//! as possible.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::nat;
use crate::error::{Error, Result};
use crate::fauto::{Expr, Formula};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Sym(&'static str),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    const SYMS: [&str; 14] = ["<=", ">=", "!=", "+", "*", "=", "<", ">", "!", "&", "|", "(", ")", "."];
    'outer: while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[start..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| Error::Parse(format!("number too large: {t}")))?));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '\'') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
            continue;
        }
        for sym in SYMS {
            let sc: Vec<char> = sym.chars().collect();
            if cs[i..].starts_with(&sc) {
                out.push(Tok::Sym(sym));
                i += sc.len();
                continue 'outer;
            }
        }
        return Err(Error::Parse(format!("unexpected character '{c}' at {i}")));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "exists" | "forall" | "mod" | "true" | "false")
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{sym}'")))
        }
    }

    fn error(&self, what: &str) -> Error {
        match self.peek() {
            Some(t) => Error::Parse(format!("{what} at token {} ({t:?})", self.pos)),
            None => Error::Parse(format!("{what} at end of input")),
        }
    }

    fn number(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("expected a number")),
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected a variable")),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut f = self.conj()?;
        while self.eat("|") {
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat("&") {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat("!") {
            return Ok(Formula::not(self.unary()?));
        }
        for (kw, is_exists) in [("exists", true), ("forall", false)] {
            if self.eat_word(kw) {
                let mut vars = alloc::vec![self.ident()?];
                while !self.eat(".") {
                    vars.push(self.ident()?);
                }
                let mut body = self.formula()?;
                for v in vars.iter().rev() {
                    body = if is_exists { Formula::exists(v, body) } else { Formula::forall(v, body) };
                }
                return Ok(body);
            }
        }
        if self.eat_word("true") {
            return Ok(Formula::True);
        }
        if self.eat_word("false") {
            return Ok(Formula::False);
        }
        if matches!(self.peek(), Some(Tok::Sym("("))) {
            let save = self.pos;
            self.pos += 1;
            if let Ok(f) = self.formula() {
                if self.eat(")") {
                    return Ok(f);
                }
            }
            self.pos = save;
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        let lhs = self.expr()?;
        if self.eat_word("mod") {
            let c = self.number()?;
            self.expect("=")?;
            let r = self.number()?;
            if c == 0 {
                return Err(Error::Parse("modulus must be positive".into()));
            }
            return Ok(Formula::Mod(lhs, c, r));
        }
        let op = match self.peek() {
            Some(Tok::Sym(s)) if matches!(*s, "=" | "!=" | "<=" | "<" | ">=" | ">") => *s,
            _ => return Err(self.error("expected a comparison")),
        };
        self.pos += 1;
        let rhs = self.expr()?;
        let one = || Expr::Const(nat(1));
        Ok(match op {
            "=" => Formula::Eq(lhs, rhs),
            "!=" => Formula::not(Formula::Eq(lhs, rhs)),
            "<=" => Formula::Le(lhs, rhs),
            ">=" => Formula::Le(rhs, lhs),
            "<" => Formula::Le(Expr::add(lhs, one()), rhs),
            _ => Formula::Le(Expr::add(rhs, one()), lhs),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        while self.eat("+") {
            e = Expr::add(e, self.term()?);
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if self.eat("*") {
                    let inner = self.term()?;
                    Ok(Expr::Scale(BigInt::from(n), Box::new(inner)))
                } else {
                    Ok(Expr::Const(nat(n)))
                }
            }
            Some(Tok::Ident(_)) => Ok(Expr::Var(self.ident()?)),
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

pub fn parse_formula(s: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}
