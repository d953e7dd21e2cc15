//! Observational proposition language: abstract syntax, a recursive-descent
//! parser, pretty-printing, and the standardness check.
//!
//! Grammar (whitespace-insensitive between tokens):
//!
//! ```text
//! prop    = or_expr ;
//! or_expr = and_expr { "|" and_expr } ;
//! and_expr = unary { "&" unary } ;
//! unary   = "!" unary | "(" prop ")" | atom ;
//! atom    = IDENT "<=" NUM | IDENT "=" NUM
//!         | IDENT "in" "(" NUM "," NUM "]"
//!         | "eq" "(" IDENT "," IDENT ")"
//!         | "joint" "(" IDENT "," IDENT { "," IDENT } ")" ;
//! IDENT   = letter { letter | digit | "_" } ;  NUM = ["-"] digits ["." digits] ;
//! ```

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use core::fmt;

use crate::spectral::Observable;
use crate::{Error, TolerancePolicy};

/// Parse tree of an observational proposition over named observables.
#[derive(Debug, Clone, PartialEq)]
pub enum Prop {
    /// `X <= x`
    Leq(String, f64),
    /// `X = x`, surface syntax for the eigen-atom formula.
    EqConst(String, f64),
    /// `X in (a, b]` with `a < b`.
    InInterval(String, f64, f64),
    /// `eq(X, Y)`, quantum equality of two observables.
    EqObs(String, String),
    /// `joint(X1, ..., Xn)`, joint determinateness (n >= 2).
    Joint(Vec<String>),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
}

/// Parse failure with the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntaxError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.pos, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Leq,
    Eq,
    Or,
    And,
    Not,
    LParen,
    RParen,
    RBracket,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'|' => {
                toks.push((i, Tok::Or));
                i += 1;
            }
            b'&' => {
                toks.push((i, Tok::And));
                i += 1;
            }
            b'!' => {
                toks.push((i, Tok::Not));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b']' => {
                toks.push((i, Tok::RBracket));
                i += 1;
            }
            b',' => {
                toks.push((i, Tok::Comma));
                i += 1;
            }
            b'<' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'=' {
                    toks.push((i, Tok::Leq));
                    i += 2;
                } else {
                    return Err(SyntaxError {
                        pos: i,
                        message: "expected `<=`".to_string(),
                    });
                }
            }
            b'=' => {
                toks.push((i, Tok::Eq));
                i += 1;
            }
            b'-' | b'0'..=b'9' => {
                let start = i;
                if b == b'-' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(SyntaxError {
                            pos: start,
                            message: "expected digits after `-`".to_string(),
                        });
                    }
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(SyntaxError {
                            pos: start,
                            message: "expected digits after `.`".to_string(),
                        });
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let lit = &text[start..i];
                let value: f64 = lit.parse().map_err(|_| SyntaxError {
                    pos: start,
                    message: format!("malformed number `{lit}`"),
                })?;
                toks.push((start, Tok::Num(value)));
            }
            _ if b.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(SyntaxError {
                    pos: i,
                    message: format!(
                        "unexpected character `{}`",
                        text[i..].chars().next().unwrap()
                    ),
                });
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), SyntaxError> {
        let pos = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(SyntaxError {
                pos,
                message: format!("expected {what}"),
            }),
        }
    }

    fn expect_ident(&mut self) -> Result<String, SyntaxError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => Err(SyntaxError {
                pos,
                message: "expected an observable name".to_string(),
            }),
        }
    }

    fn expect_num(&mut self) -> Result<f64, SyntaxError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(v),
            _ => Err(SyntaxError {
                pos,
                message: "expected a number".to_string(),
            }),
        }
    }

    fn or_expr(&mut self) -> Result<Prop, SyntaxError> {
        let mut node = self.and_expr()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            let rhs = self.and_expr()?;
            node = Prop::Or(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn and_expr(&mut self) -> Result<Prop, SyntaxError> {
        let mut node = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            let rhs = self.unary()?;
            node = Prop::And(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn unary(&mut self) -> Result<Prop, SyntaxError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.bump();
                Ok(Prop::Not(Box::new(self.unary()?)))
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.or_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Prop, SyntaxError> {
        let pos = self.here();
        let name = self.expect_ident()?;
        // `eq` and `joint` act as keywords when followed by `(`.
        if name == "eq" && self.peek() == Some(&Tok::LParen) {
            self.bump();
            let a = self.expect_ident()?;
            self.expect(Tok::Comma, "`,`")?;
            let b = self.expect_ident()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Prop::EqObs(a, b));
        }
        if name == "joint" && self.peek() == Some(&Tok::LParen) {
            self.bump();
            let mut names = alloc::vec![self.expect_ident()?];
            self.expect(Tok::Comma, "`,`")?;
            names.push(self.expect_ident()?);
            while self.peek() == Some(&Tok::Comma) {
                self.bump();
                names.push(self.expect_ident()?);
            }
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Prop::Joint(names));
        }
        match self.bump() {
            Some(Tok::Leq) => Ok(Prop::Leq(name, self.expect_num()?)),
            Some(Tok::Eq) => Ok(Prop::EqConst(name, self.expect_num()?)),
            Some(Tok::Ident(kw)) if kw == "in" => {
                self.expect(Tok::LParen, "`(`")?;
                let a = self.expect_num()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.expect_num()?;
                self.expect(Tok::RBracket, "`]`")?;
                if a >= b {
                    return Err(SyntaxError {
                        pos,
                        message: format!("empty interval ({a}, {b}]"),
                    });
                }
                Ok(Prop::InInterval(name, a, b))
            }
            _ => Err(SyntaxError {
                pos,
                message: "expected `<=`, `=`, or `in` after the observable name".to_string(),
            }),
        }
    }
}

/// Parse a proposition; errors carry the byte offset of the failure.
pub fn parse(text: &str) -> Result<Prop, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let prop = p.or_expr()?;
    if p.pos != p.toks.len() {
        return Err(SyntaxError {
            pos: p.here(),
            message: "unexpected trailing input".to_string(),
        });
    }
    Ok(prop)
}

impl Prop {
    fn precedence(&self) -> u8 {
        match self {
            Prop::Or(..) => 1,
            Prop::And(..) => 2,
            Prop::Not(..) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, parent: u8) -> fmt::Result {
        let prec = self.precedence();
        let need_parens = prec < parent;
        if need_parens {
            write!(f, "(")?;
        }
        match self {
            Prop::Leq(name, x) => write!(f, "{name} <= {x}")?,
            Prop::EqConst(name, x) => write!(f, "{name} = {x}")?,
            Prop::InInterval(name, a, b) => write!(f, "{name} in ({a}, {b}]")?,
            Prop::EqObs(a, b) => write!(f, "eq({a}, {b})")?,
            Prop::Joint(names) => {
                write!(f, "joint(")?;
                for (i, n) in names.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{n}")?;
                }
                write!(f, ")")?;
            }
            Prop::Not(inner) => {
                write!(f, "!")?;
                inner.fmt_prec(f, 4)?;
            }
            // The parser is left-associative, so a right-nested child of the
            // same precedence needs parentheses to round-trip structurally.
            Prop::And(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, " & ")?;
                r.fmt_prec(f, 3)?;
            }
            Prop::Or(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " | ")?;
                r.fmt_prec(f, 2)?;
            }
        }
        if need_parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// All observable names appearing in the AST.
pub fn names_in(ast: &Prop) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_names(ast, &mut out);
    out
}

fn collect_names(ast: &Prop, out: &mut BTreeSet<String>) {
    match ast {
        Prop::Leq(n, _) | Prop::EqConst(n, _) | Prop::InInterval(n, _, _) => {
            out.insert(n.clone());
        }
        Prop::EqObs(a, b) => {
            out.insert(a.clone());
            out.insert(b.clone());
        }
        Prop::Joint(names) => {
            for n in names {
                out.insert(n.clone());
            }
        }
        Prop::Not(inner) => collect_names(inner, out),
        Prop::And(l, r) | Prop::Or(l, r) => {
            collect_names(l, out);
            collect_names(r, out);
        }
    }
}

fn contains_extended_atom(ast: &Prop) -> bool {
    match ast {
        Prop::EqObs(..) | Prop::Joint(..) => true,
        Prop::Not(inner) => contains_extended_atom(inner),
        Prop::And(l, r) | Prop::Or(l, r) => contains_extended_atom(l) || contains_extended_atom(r),
        _ => false,
    }
}

/// Standardness (W1): every pair of referenced observables commutes and the
/// AST contains no extended atoms (`eq`, `joint`).
pub fn is_standard(
    ast: &Prop,
    observables: &BTreeMap<String, Observable>,
    tol: &TolerancePolicy,
) -> Result<bool, Error> {
    if contains_extended_atom(ast) {
        return Ok(false);
    }
    let names: Vec<String> = names_in(ast).into_iter().collect();
    for n in &names {
        if !observables.contains_key(n) {
            return Err(Error::UnknownObservable(n.clone()));
        }
    }
    for (i, a) in names.iter().enumerate() {
        for b in names.iter().skip(i + 1) {
            let x = observables[a].matrix();
            let y = observables[b].matrix();
            if x.commutator(y).max_abs() > tol.op_eq {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
