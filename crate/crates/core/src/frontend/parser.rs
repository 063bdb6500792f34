//! Recursive-descent parser for the formula language.
//!
//! ```text
//! formula := quant | iff
//! quant   := ("exists" | "forall") ident ":" ("real" | "int") "." formula
//! iff     := imp {"<->" imp}
//! imp     := or ["->" imp]
//! or      := and {"or" and}
//! and     := not {"and" not}
//! not     := "not" not | quant | "(" formula ")" | "true" | "false" | atom
//! atom    := term rel term {rel term}
//! term    := ["-"] addend {("+" | "-") addend}
//! addend  := [number "*"] ident | number
//! number  := int | int "/" int | "(" ["-"] int ["/" int] ")"
//! ```
//!
//! A chain `a <= b < c` is the conjunction of its links. `#` starts a comment.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ast::{Atom, Formula, Rel, Sort};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

const SYMBOLS: [&str; 16] = [
    "<->", "->", "<=", ">=", "!=", "(", ")", ":", ".", "+", "-", "*", "/", "<", ">", "=",
];

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            column += i - start;
            out.push((Tok::Int(s.parse().expect("digits")), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            column += i - start;
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
            return Err(Error::Parse {
                line,
                column,
                message: format!("unexpected character `{c}`"),
            });
        };
        i += sym.len();
        column += sym.len();
        out.push((Tok::Sym(sym), pos));
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

const KEYWORDS: [&str; 9] = ["exists", "forall", "real", "int", "and", "or", "not", "true", "false"];

/// Surface term `Σ coeffs·x + constant` with rational coefficients.
#[derive(Debug, Clone, Default)]
struct Term {
    coeffs: BTreeMap<String, BigRational>,
    constant: BigRational,
}

impl Term {
    fn add(&mut self, other: Term, sign: &BigRational) {
        for (x, a) in other.coeffs {
            *self.coeffs.entry(x).or_insert_with(BigRational::zero) += a * sign;
        }
        self.constant += other.constant * sign;
    }
}

/// `lhs rel rhs` as integer atoms over `Σ a·x ≤|<|= c`.
fn normalize(lhs: Term, rel: &str, rhs: Term) -> Formula {
    let mut diff = lhs;
    diff.add(rhs, &-BigRational::one());
    // diff.coeffs · x + diff.constant  rel  0
    let mut den = BigInt::one();
    for a in diff.coeffs.values().chain(std::iter::once(&diff.constant)) {
        den = den.lcm(a.denom());
    }
    let scale = BigRational::from_integer(den);
    let coeffs: Vec<(String, BigInt)> = diff
        .coeffs
        .iter()
        .map(|(x, a)| (x.clone(), (a * &scale).to_integer()))
        .collect();
    let constant = -(&diff.constant * &scale).to_integer();
    let neg = |cs: &[(String, BigInt)]| -> Vec<(String, BigInt)> {
        cs.iter().map(|(x, a)| (x.clone(), -a)).collect()
    };
    let atom = |cs: Vec<(String, BigInt)>, rel, c| Formula::Atom(Atom::new(cs, rel, c));
    match rel {
        "<=" => atom(coeffs, Rel::Le, constant),
        "<" => atom(coeffs, Rel::Lt, constant),
        "=" => atom(coeffs, Rel::Eq, constant),
        ">=" => atom(neg(&coeffs), Rel::Le, -constant),
        ">" => atom(neg(&coeffs), Rel::Lt, -constant),
        "!=" => Formula::or(
            atom(coeffs.clone(), Rel::Lt, constant.clone()),
            atom(neg(&coeffs), Rel::Lt, -constant),
        ),
        _ => unreachable!("not a relation"),
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    /// Variables bound on the current path.
    scope: Vec<(String, Sort)>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let p = self.pos();
        Err(Error::Parse {
            line: p.line,
            column: p.column,
            message: message.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        if self.is_kw(k) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", self.describe()))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.i += 1;
                Ok(s)
            }
            _ => self.error(format!("expected a variable name, found {}", self.describe())),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        if self.is_kw("exists") || self.is_kw("forall") {
            return self.quant();
        }
        self.iff()
    }

    fn quant(&mut self) -> Result<Formula> {
        let universal = self.is_kw("forall");
        self.i += 1;
        let at = self.pos();
        let name = self.ident()?;
        self.expect_sym(":")?;
        let sort = if self.eat_kw("real") {
            Sort::Real
        } else if self.eat_kw("int") {
            Sort::Int
        } else {
            return self.error(format!("expected `real` or `int`, found {}", self.describe()));
        };
        if let Some((_, s)) = self.scope.iter().find(|(n, _)| *n == name) {
            if *s != sort {
                return Err(Error::SortClash(name));
            }
            return Err(Error::Parse {
                line: at.line,
                column: at.column,
                message: format!("variable `{name}` is already bound here"),
            });
        }
        self.expect_sym(".")?;
        self.scope.push((name.clone(), sort));
        let body = self.formula();
        self.scope.pop();
        let body = Box::new(body?);
        Ok(if universal {
            Formula::Forall(name, sort, body)
        } else {
            Formula::Exists(name, sort, body)
        })
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut f = self.imp()?;
        while self.eat_sym("<->") {
            f = Formula::Iff(Box::new(f), Box::new(self.imp()?));
        }
        Ok(f)
    }

    fn imp(&mut self) -> Result<Formula> {
        let f = self.or()?;
        if self.eat_sym("->") {
            return Ok(Formula::Implies(Box::new(f), Box::new(self.imp()?)));
        }
        Ok(f)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while self.eat_kw("or") {
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.not()?;
        while self.eat_kw("and") {
            f = Formula::and(f, self.not()?);
        }
        Ok(f)
    }

    fn not(&mut self) -> Result<Formula> {
        if self.eat_kw("not") {
            return Ok(Formula::not(self.not()?));
        }
        if self.is_kw("exists") || self.is_kw("forall") {
            return self.quant();
        }
        if self.eat_kw("true") {
            return Ok(Formula::Bool(true));
        }
        if self.eat_kw("false") {
            return Ok(Formula::Bool(false));
        }
        if self.is_sym("(") {
            // Either a parenthesized formula or an atom starting with a
            // parenthesized number; keep whichever gets further.
            let start = self.i;
            self.i += 1;
            let as_formula = self.formula().and_then(|f| self.expect_sym(")").map(|_| f));
            match as_formula {
                Ok(f) => return Ok(f),
                Err(e1) => {
                    let reached = self.i;
                    self.i = start;
                    return match self.atom() {
                        Ok(f) => Ok(f),
                        Err(e2) => Err(if reached > self.i { e1 } else { e2 }),
                    };
                }
            }
        }
        self.atom()
    }

    fn rel(&mut self) -> Option<&'static str> {
        for r in ["<=", "<", "=", ">=", ">", "!="] {
            if self.eat_sym(r) {
                return Some(r);
            }
        }
        None
    }

    fn atom(&mut self) -> Result<Formula> {
        let mut lhs = self.term()?;
        let Some(mut rel) = self.rel() else {
            return self.error(format!("expected a relation, found {}", self.describe()));
        };
        let mut parts = Vec::new();
        loop {
            let rhs = self.term()?;
            parts.push(normalize(lhs, rel, rhs.clone()));
            match self.rel() {
                Some(r) => {
                    rel = r;
                    lhs = rhs;
                }
                None => break,
            }
        }
        Ok(Formula::all(parts))
    }

    fn number(&mut self) -> Result<Option<BigRational>> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.i += 1;
                if self.eat_sym("/") {
                    let d = self.denominator()?;
                    return Ok(Some(BigRational::new(n, d)));
                }
                Ok(Some(BigRational::from_integer(n)))
            }
            Tok::Sym("(") => {
                self.i += 1;
                let negative = self.eat_sym("-");
                let Tok::Int(n) = self.peek().clone() else {
                    return self.error(format!("expected a number, found {}", self.describe()));
                };
                self.i += 1;
                let mut v = BigRational::from_integer(n);
                if self.eat_sym("/") {
                    v /= BigRational::from_integer(self.denominator()?);
                }
                self.expect_sym(")")?;
                Ok(Some(if negative { -v } else { v }))
            }
            _ => Ok(None),
        }
    }

    fn denominator(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(d) if !d.is_zero() => {
                self.i += 1;
                Ok(d)
            }
            Tok::Int(_) => self.error("division by zero"),
            _ => self.error(format!("expected a denominator, found {}", self.describe())),
        }
    }

    fn addend(&mut self) -> Result<Term> {
        let mut t = Term::default();
        if let Some(v) = self.number()? {
            if self.eat_sym("*") {
                let x = self.ident()?;
                t.coeffs.insert(x, v);
            } else {
                t.constant = v;
            }
            return Ok(t);
        }
        if matches!(self.peek(), Tok::Ident(_)) {
            let x = self.ident()?;
            t.coeffs.insert(x, BigRational::one());
            return Ok(t);
        }
        self.error(format!("expected a term, found {}", self.describe()))
    }

    fn term(&mut self) -> Result<Term> {
        let mut t = Term::default();
        let one = BigRational::one();
        let first = if self.eat_sym("-") { -one.clone() } else { one.clone() };
        t.add(self.addend()?, &first);
        loop {
            let sign = if self.eat_sym("+") {
                one.clone()
            } else if self.eat_sym("-") {
                -one.clone()
            } else {
                break;
            };
            t.add(self.addend()?, &sign);
        }
        Ok(t)
    }
}

/// Parse a formula; see the module documentation for the grammar.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        i: 0,
        scope: Vec::new(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after the formula", p.describe()));
    }
    Ok(f)
}

/// Parse a comma-separated assignment `x=3/2,y=-7`.
pub fn parse_point(text: &str) -> Result<Vec<(String, BigRational)>> {
    let mut out: Vec<(String, BigRational)> = Vec::new();
    for (k, item) in text.split(',').enumerate() {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let bad = |m: &str| Error::Parse {
            line: 1,
            column: k + 1,
            message: format!("{m} in `{item}`"),
        };
        let (name, value) = item.split_once('=').ok_or_else(|| bad("expected name=value"))?;
        let name = name.trim().to_string();
        let value: BigRational = value.trim().parse().map_err(|_| bad("not a rational"))?;
        if out.iter().any(|(n, _)| *n == name) {
            return Err(bad("variable assigned twice"));
        }
        out.push((name, value));
    }
    Ok(out)
}
