//! Recursive descent parser for the system language.
//!
//! ```text
//! system := stmt+
//! stmt   := NAME "=" poly ";"
//! poly   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := RATIONAL | VAR | factor "^" NAT | "(" poly ")" | "-" factor
//! ```
//!
//! Division is accepted only by a nonzero constant.

use std::collections::BTreeMap;

use num::{BigInt, Zero};
use thiserror::Error;

use crate::algebra::{BiPoly, Num, Rational, UPoly};
use crate::io::print::poly_to_string;
use crate::system::{from_matrix, ConstrainedSystem, MatrixWarning, SystemError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("{line}:{col}: not a polynomial (division by a non-constant)")]
    NonPolynomial { line: usize, col: usize },
    #[error("{line}:{col}: division by zero")]
    DivisionByZero { line: usize, col: usize },
    #[error("missing statement for {0}")]
    Missing(&'static str),
    #[error("{0} assigned twice")]
    Duplicate(String),
    #[error("diagonal and matrix statements mixed")]
    MixedForms,
}

/// Parsed input: either the diagonal form or the matrix form.
#[derive(Clone, Debug, PartialEq)]
pub enum SystemSource {
    Diagonalized { delta: BiPoly, p: BiPoly, q: BiPoly },
    Matrix { a: [[BiPoly; 2]; 2], f: [BiPoly; 2] },
}

const DIAGONAL: [&str; 3] = ["delta", "P", "Q"];
const MATRIX: [&str; 6] = ["A11", "A12", "A21", "A22", "F1", "F2"];

impl SystemSource {
    pub fn from_system(sys: &ConstrainedSystem) -> Self {
        SystemSource::Diagonalized { delta: sys.delta.clone(), p: sys.p(), q: sys.q() }
    }

    /// The constrained system, diagonalizing a matrix source.
    pub fn to_system(&self) -> Result<(ConstrainedSystem, Vec<MatrixWarning>), SystemError> {
        match self {
            SystemSource::Diagonalized { delta, p, q } => Ok((ConstrainedSystem::new(delta.clone(), p, q), vec![])),
            SystemSource::Matrix { a, f } => from_matrix(a, f),
        }
    }
}

/// Canonical text; `parse_system` inverts it.
pub fn print_source(src: &SystemSource) -> String {
    match src {
        SystemSource::Diagonalized { delta, p, q } => {
            format!("delta = {}; P = {}; Q = {};", poly_to_string(delta), poly_to_string(p), poly_to_string(q))
        }
        SystemSource::Matrix { a, f } => {
            let parts = [&a[0][0], &a[0][1], &a[1][0], &a[1][1], &f[0], &f[1]];
            MATRIX.iter().zip(parts).map(|(n, p)| format!("{n} = {};", poly_to_string(p))).collect::<Vec<_>>().join(" ")
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Int(BigInt),
    Sym(char),
    End,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { chars: s.char_indices().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(&(_, c)) = self.chars.peek() else {
                out.push((Tok::End, line, col));
                return Ok(out);
            };
            if c.is_ascii_digit() {
                let mut s = String::new();
                while let Some(&(_, d)) = self.chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    self.bump();
                }
                out.push((Tok::Int(s.parse().unwrap()), line, col));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let mut s = String::new();
                while let Some(&(_, d)) = self.chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_') {
                        break;
                    }
                    s.push(d);
                    self.bump();
                }
                out.push((Tok::Name(s), line, col));
            } else if "=;+-*/^()".contains(c) {
                self.bump();
                out.push((Tok::Sym(c), line, col));
            } else {
                return Err(ParseError::Syntax { line, col, expected: "a number, variable or operator".into() });
            }
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    /// Name read as `x` when parsing a univariate polynomial.
    alias: Option<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].1, self.toks[self.pos].2)
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Syntax { line, col, expected: expected.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&format!("'{c}'"))
        }
    }

    fn poly(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if *self.peek() == Tok::Sym('/') {
                let (line, col) = self.here();
                self.pos += 1;
                let d = self.power()?;
                if !d.is_constant() {
                    return Err(ParseError::NonPolynomial { line, col });
                }
                let c = d.coeff((0, 0));
                if c.is_zero() {
                    return Err(ParseError::DivisionByZero { line, col });
                }
                acc = acc.scale(&crate::algebra::Coef::inv(&c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<BiPoly, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().clone() {
                Tok::Int(n) => {
                    self.pos += 1;
                    let k: u32 = n.try_into().or_else(|_| self.fail("a small exponent"))?;
                    Ok(base.pow(k))
                }
                _ => self.fail("a natural exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<BiPoly, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(BiPoly::constant(Num::from(Rational::from_integer(n))))
            }
            Tok::Name(v) if v == "x" || self.alias.as_deref() == Some(v.as_str()) => {
                self.pos += 1;
                Ok(BiPoly::x())
            }
            Tok::Name(v) if v == "y" && self.alias.is_none() => {
                self.pos += 1;
                Ok(BiPoly::y())
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let p = self.poly()?;
                self.expect(')')?;
                Ok(p)
            }
            Tok::Sym('-') => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            _ => self.fail("a number, x, y or '('"),
        }
    }

    fn statement(&mut self) -> Result<(String, BiPoly), ParseError> {
        let name = match self.peek().clone() {
            Tok::Name(n) if DIAGONAL.contains(&n.as_str()) || MATRIX.contains(&n.as_str()) => n,
            _ => return self.fail("one of delta, P, Q, A11, A12, A21, A22, F1, F2"),
        };
        self.pos += 1;
        self.expect('=')?;
        let p = self.poly()?;
        self.expect(';')?;
        Ok((name, p))
    }
}

pub fn parse_system(text: &str) -> Result<SystemSource, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut ps = Parser { toks, pos: 0, alias: None };
    let mut seen: BTreeMap<String, BiPoly> = BTreeMap::new();
    while *ps.peek() != Tok::End {
        let (n, p) = ps.statement()?;
        if seen.insert(n.clone(), p).is_some() {
            return Err(ParseError::Duplicate(n));
        }
    }
    if seen.is_empty() {
        return ps.fail("a statement");
    }
    let diagonal = seen.keys().any(|k| DIAGONAL.contains(&k.as_str()));
    let matrix = seen.keys().any(|k| MATRIX.contains(&k.as_str()));
    if diagonal && matrix {
        return Err(ParseError::MixedForms);
    }
    let mut take = |name: &'static str| seen.remove(name).ok_or(ParseError::Missing(name));
    if diagonal {
        Ok(SystemSource::Diagonalized { delta: take("delta")?, p: take("P")?, q: take("Q")? })
    } else {
        let a = [[take("A11")?, take("A12")?], [take("A21")?, take("A22")?]];
        Ok(SystemSource::Matrix { a, f: [take("F1")?, take("F2")?] })
    }
}

/// A rational univariate polynomial in `var`, as printed by `upoly_text`.
pub fn parse_upoly(text: &str, var: &str) -> Result<UPoly, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut ps = Parser { toks, pos: 0, alias: Some(var.to_string()) };
    let p = ps.poly()?;
    if *ps.peek() != Tok::End {
        return ps.fail("end of input");
    }
    let mut c = vec![Rational::zero(); p.deg_x().max(0) as usize + 1];
    for (e, v) in p.terms() {
        c[e.0 as usize] = v.as_rational().expect("rational literal").clone();
    }
    Ok(UPoly::new(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_fold_source() {
        let s = parse_system("delta = x*y; P = y; Q = x^2;").unwrap();
        assert_eq!(
            s,
            SystemSource::Diagonalized { delta: BiPoly::from_ints(&[(1, 1, 1)]), p: BiPoly::y(), q: BiPoly::from_ints(&[(1, 2, 0)]) }
        );
        assert_eq!(print_source(&s), "delta = x*y; P = y; Q = x^2;");
    }

    #[test]
    fn final_example_source() {
        let s = parse_system("delta = y; P = 2*x; Q = -y;").unwrap();
        assert_eq!(print_source(&s), "delta = y; P = 2*x; Q = -y;");
    }

    #[test]
    fn rejects_division_by_variable() {
        assert_eq!(parse_system("delta = 1; P = y/x; Q = 1;"), Err(ParseError::NonPolynomial { line: 1, col: 17 }));
    }

    #[test]
    fn rationals_and_zero() {
        let s = parse_system("delta = 1;\nP = 0;\nQ = 1 - 3/2*y^2;").unwrap();
        assert_eq!(print_source(&s), "delta = 1; P = 0; Q = 1 - (3/2)*y^2;");
        assert_eq!(parse_system(&print_source(&s)).unwrap(), s);
        let s = parse_system("delta = (x - 1)^2 - (1/3)*(y + x)*y; P = -(-x); Q = 2;").unwrap();
        assert_eq!(parse_system(&print_source(&s)).unwrap(), s);
    }

    #[test]
    fn locations() {
        match parse_system("delta = x*y;\nP = y +;\nQ = 1;") {
            Err(ParseError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 8)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_system("delta = x; P = y;"), Err(ParseError::Missing("Q"))));
        assert!(matches!(parse_system("delta = x; F1 = y;"), Err(ParseError::MixedForms)));
        assert!(matches!(parse_system("z = 1;"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn univariate() {
        let p = parse_upoly("3*t^2-2", "t").unwrap();
        assert_eq!(p, UPoly::from_ints(&[-2, 0, 3]));
        let q = UPoly::new(vec![Rational::new(3.into(), 2.into()), Rational::zero(), Rational::new((-1).into(), 7.into())]);
        assert_eq!(parse_upoly(&crate::io::print::upoly_text(&q, "t"), "t").unwrap(), q);
        assert!(parse_upoly("t*y", "t").is_err());
    }

    #[test]
    fn matrix_source() {
        let s = parse_system("A11 = y; A12 = 0; A21 = 0; A22 = x; F1 = 1; F2 = x*y;").unwrap();
        assert_eq!(parse_system(&print_source(&s)).unwrap(), s);
        let (sys, _) = s.to_system().unwrap();
        assert_eq!(sys.delta, BiPoly::from_ints(&[(1, 1, 1)]));
    }
}
