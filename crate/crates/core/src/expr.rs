//! A small expression language for operators on `V`.
//!
//! ```text
//! sum  := prod (("+" | "-") prod)*
//! prod := [scalar "*"] comp
//! comp := pow ("o" pow)*
//! pow  := atom ["^" nat]
//! atom := "U" | "D" | "I" | "x" | "y" | "partial" | "integ"
//!       | "family[" pattern "]" | "com(" sum "," sum ")" | "(" sum ")"
//! scalar := ["-"] nat ["/" nat]
//! ```
//!
//! `x` and `y` are the normal-form names of `U` and `D`. `a o b` applies `b`
//! first. Operators at one level associate to the left.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::freemodule::{op_combine, Combine, NamedOperator, Operator};
use crate::normalform::{
    family_check, family_operator, FamilyPattern, FamilyRejection, FamilyVerdict, GradedFamily,
};
use crate::ring::{Ring, RingError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    U,
    D,
    I,
    X,
    Y,
    Partial,
    Integ,
}

impl Atom {
    const ALL: [Atom; 7] = [
        Atom::U,
        Atom::D,
        Atom::I,
        Atom::X,
        Atom::Y,
        Atom::Partial,
        Atom::Integ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Atom::U => "U",
            Atom::D => "D",
            Atom::I => "I",
            Atom::X => "x",
            Atom::Y => "y",
            Atom::Partial => "partial",
            Atom::Integ => "integ",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Atom(Atom),
    Family(FamilyPattern),
    Scale(BigRational, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    /// `Compose(f, g)` is `f o g`.
    Compose(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Com(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("`{atom}` is not available over {ring}")]
    Capability { atom: String, ring: Ring },
    #[error("`family[{pattern}]`: {rejection}")]
    NotSummable {
        pattern: String,
        rejection: FamilyRejection,
    },
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(BigInt),
    Family(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::Family(p) => write!(f, "`family[{p}]`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let mut out = Vec::new();
    let advance = |i: &mut usize, line: &mut usize, column: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *column = 1;
        } else {
            *column += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut column, c);
            continue;
        }
        let (l0, c0) = (line, column);
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                let ch = chars[i];
                advance(&mut i, &mut line, &mut column, ch);
            }
            let word: String = chars[start..i].iter().collect();
            if word == "family" && chars.get(i) == Some(&'[') {
                advance(&mut i, &mut line, &mut column, '[');
                let start = i;
                while i < chars.len() && chars[i] != ']' {
                    let ch = chars[i];
                    advance(&mut i, &mut line, &mut column, ch);
                }
                if i == chars.len() {
                    return Err(ParseError {
                        line,
                        column,
                        expected: vec!["`]`".into()],
                        found: Tok::End.to_string(),
                    });
                }
                let body: String = chars[start..i].iter().collect();
                advance(&mut i, &mut line, &mut column, ']');
                Tok::Family(body)
            } else {
                Tok::Ident(word)
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                let ch = chars[i];
                advance(&mut i, &mut line, &mut column, ch);
            }
            let digits: String = chars[start..i].iter().collect();
            Tok::Nat(digits.parse().expect("ascii digits"))
        } else if "+-*/^(),".contains(c) {
            advance(&mut i, &mut line, &mut column, c);
            Tok::Sym(c)
        } else {
            return Err(ParseError {
                line,
                column,
                expected: vec!["an operator expression".into()],
                found: format!("`{c}`"),
            });
        };
        out.push(Lexed {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Lexed {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let at = &self.toks[self.pos];
        ParseError {
            line: at.line,
            column: at.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: at.tok.to_string(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{c}`")]))
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.prod()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.prod()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.prod()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn prod(&mut self) -> Result<Expr, ParseError> {
        let starts_scalar = matches!(self.peek(), Tok::Nat(_))
            || (*self.peek() == Tok::Sym('-') && matches!(self.peek2(), Tok::Nat(_)));
        if !starts_scalar {
            return self.comp();
        }
        let negative = *self.peek() == Tok::Sym('-');
        if negative {
            self.bump();
        }
        let Tok::Nat(num) = self.bump() else {
            unreachable!("checked above")
        };
        let mut c = BigRational::from_integer(num);
        if *self.peek() == Tok::Sym('/') {
            self.bump();
            match self.peek().clone() {
                Tok::Nat(d) if d != BigInt::from(0) => {
                    self.bump();
                    c /= BigRational::from_integer(d);
                }
                _ => return Err(self.error(&["a nonzero denominator"])),
            }
        }
        if negative {
            c = -c;
        }
        self.expect('*')?;
        Ok(Expr::Scale(c, Box::new(self.comp()?)))
    }

    fn comp(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.pow()?;
        while *self.peek() == Tok::Ident("o".into()) {
            self.bump();
            acc = Expr::Compose(Box::new(acc), Box::new(self.pow()?));
        }
        Ok(acc)
    }

    fn pow(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Nat(k) => match u32::try_from(k) {
                Ok(k) => {
                    self.bump();
                    Ok(Expr::Pow(Box::new(base), k))
                }
                Err(_) => Err(self.error(&["an exponent below 2^32"])),
            },
            _ => Err(self.error(&["a natural exponent"])),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        const ATOMS: &[&str] = &[
            "`U`",
            "`D`",
            "`I`",
            "`x`",
            "`y`",
            "`partial`",
            "`integ`",
            "`family[...]`",
            "`com(`",
            "`(`",
        ];
        match self.peek().clone() {
            Tok::Ident(name) if name == "com" && *self.peek2() == Tok::Sym('(') => {
                self.bump();
                self.bump();
                let a = self.sum()?;
                self.expect(',')?;
                let b = self.sum()?;
                self.expect(')')?;
                Ok(Expr::Com(Box::new(a), Box::new(b)))
            }
            Tok::Ident(name) => match Atom::ALL.iter().find(|a| a.name() == name) {
                Some(&a) => {
                    self.bump();
                    Ok(Expr::Atom(a))
                }
                None => Err(self.error(ATOMS)),
            },
            Tok::Family(body) => match FamilyPattern::parse(&body) {
                Ok(p) => {
                    self.bump();
                    Ok(Expr::Family(p))
                }
                Err(_) => Err(self.error(&["a word pattern such as `family[x^{n} y^{n}]`"])),
            },
            Tok::Sym('(') => {
                self.bump();
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(self.error(ATOMS)),
        }
    }
}

/// Parses a complete expression.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["`+`", "`-`", "`o`", "`^`", "end of input"]));
    }
    Ok(e)
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Expr, ParseError> {
        parse(s)
    }
}

// Binding strength: sum 1, prod 2, comp 3, pow 4, atom 5.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Scale(..) => 2,
        Expr::Compose(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Atom(_) | Expr::Family(_) | Expr::Com(..) => 5,
    }
}

struct AtLeast<'a>(&'a Expr, u8);

impl fmt::Display for AtLeast<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if level(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Atom(a) => f.write_str(a.name()),
            Expr::Family(p) => write!(f, "family[{p}]"),
            Expr::Scale(c, e) => {
                if c.is_integer() {
                    write!(f, "{} * {}", c.numer(), AtLeast(e, 3))
                } else {
                    write!(f, "{}/{} * {}", c.numer(), c.denom(), AtLeast(e, 3))
                }
            }
            Expr::Add(a, b) => write!(f, "{} + {}", AtLeast(a, 1), AtLeast(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", AtLeast(a, 1), AtLeast(b, 2)),
            Expr::Compose(a, b) => write!(f, "{} o {}", AtLeast(a, 3), AtLeast(b, 4)),
            Expr::Pow(a, k) => write!(f, "{}^{k}", AtLeast(a, 5)),
            Expr::Com(a, b) => write!(f, "com({a}, {b})"),
        }
    }
}

/// Family patterns are checked for grading on members `0..=DEFAULT_HORIZON`
/// by [`eval`].
pub const DEFAULT_HORIZON: usize = 32;

/// Builds the operator denoted by `e` over `ring`.
pub fn eval(e: &Expr, ring: Ring) -> Result<Operator, EvalError> {
    eval_within(e, ring, DEFAULT_HORIZON)
}

/// As [`eval`], checking family gradings on members `0..=horizon`. Images of
/// `e_m` with `m ≤ horizon` are then well defined.
pub fn eval_within(e: &Expr, ring: Ring, horizon: usize) -> Result<Operator, EvalError> {
    let go = |e: &Expr| eval_within(e, ring, horizon);
    Ok(match e {
        Expr::Atom(a) => {
            let which = match a {
                Atom::U | Atom::X => NamedOperator::Raise,
                Atom::D | Atom::Y => NamedOperator::Lower,
                Atom::I => NamedOperator::Identity,
                Atom::Partial => NamedOperator::Derivative,
                Atom::Integ => NamedOperator::Integral,
            };
            Operator::named(which, ring).map_err(|err| match err {
                RingError::NeedsRationals { .. } => EvalError::Capability {
                    atom: a.name().into(),
                    ring,
                },
                other => other.into(),
            })?
        }
        Expr::Family(p) => {
            let fam = GradedFamily::from_pattern(ring, p);
            if let FamilyVerdict::Rejected { index, ydeg } = family_check(&fam, horizon) {
                return Err(EvalError::NotSummable {
                    pattern: p.to_string(),
                    rejection: FamilyRejection { index, ydeg },
                });
            }
            family_operator(&fam)
        }
        Expr::Scale(c, inner) => {
            let c = ring.from_rational(c).map_err(|_| EvalError::Capability {
                atom: c.to_string(),
                ring,
            })?;
            op_combine(Combine::Scale(&c, &go(inner)?))?
        }
        Expr::Add(a, b) => op_combine(Combine::Add(&go(a)?, &go(b)?))?,
        Expr::Sub(a, b) => op_combine(Combine::Sub(&go(a)?, &go(b)?))?,
        Expr::Compose(a, b) => op_combine(Combine::Compose(&go(a)?, &go(b)?))?,
        Expr::Pow(a, k) => op_combine(Combine::Power(&go(a)?, *k))?,
        Expr::Com(a, b) => op_combine(Combine::Commutator(&go(a)?, &go(b)?))?,
    })
}
