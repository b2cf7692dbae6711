//! Recursive-descent parser for the ASCII equation syntax.
//!
//! ```text
//! eqset    := equation ("or" equation)*
//! equation := expr "=" expr
//! expr     := term (("+" | "-") term)*
//! term     := factor ("*" factor | factor-starting-with "x" "(" "sqrt")*
//! factor   := ["-"] atom ["^" posint]
//! atom     := integer ["/" posint] | "x" | "(" expr ")" | "sqrt" "(" expr ")"
//! ```
//!
//! A minus sign in front of a bare numeric literal folds into the constant
//! (`-3` is `Const(-3)`); in front of anything else it builds a `Neg` node.
//! Binary minus negates the first factor of the following term the same way,
//! so `a - 2*x` and `a + -2*x` parse identically.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::expr::{EqSet, Equation, Expr};
use crate::rational::Rational;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;
/// Deepest bracket nesting accepted.
pub const MAX_NESTING: usize = 128;
/// Longest integer literal accepted, in digits.
pub const MAX_DIGITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {expected}, found {found}")]
    Syntax { offset: usize, expected: String, found: String },
    #[error("unknown variable `{name}` at offset {offset}; only `x` is allowed")]
    Variable { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::Variable { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Equals,
    X,
    Sqrt,
    Or,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Equals => "`=`".into(),
            Tok::X => "`x`".into(),
            Tok::Sqrt => "`sqrt`".into(),
            Tok::Or => "`or`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Equals,
            d if d.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i - start > MAX_DIGITS {
                    return Err(ParseError::Syntax {
                        offset: start,
                        expected: format!("a number of at most {MAX_DIGITS} digits"),
                        found: "a longer number".into(),
                    });
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((Tok::Int(digits.parse().expect("ascii digits")), start));
                continue;
            }
            a if a.is_alphabetic() || a == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "x" => Tok::X,
                    "sqrt" => Tok::Sqrt,
                    "or" => Tok::Or,
                    _ if word.starts_with('x') && word[1..].chars().all(|c| c.is_ascii_digit()) => {
                        return Err(ParseError::Syntax {
                            offset: start + 1,
                            expected: "an operator after `x`".into(),
                            found: format!("`{}`", &word[1..]),
                        });
                    }
                    _ => return Err(ParseError::Variable { offset: start, name: word }),
                };
                out.push((tok, start));
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    offset: start,
                    expected: "a number, `x`, an operator or a bracket".into(),
                    found: format!("`{other}`"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

/// A parsed factor together with whether it was a bare numeric literal
/// (no brackets, no exponent, no sign), which is what a leading minus folds into.
struct Factor {
    expr: Expr,
    bare_literal: bool,
}

fn negate_factor(f: Factor) -> Expr {
    match f.expr {
        Expr::Const(c) if f.bare_literal => Expr::Const(-c),
        other => Expr::neg(other),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected: expected.to_string(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn eqset(&mut self) -> Result<EqSet, ParseError> {
        let mut equations = vec![self.equation()?];
        while *self.peek() == Tok::Or {
            self.bump();
            equations.push(self.equation()?);
        }
        if *self.peek() != Tok::End {
            return Err(self.error("`or`, an operator, or end of input"));
        }
        Ok(EqSet::new(equations))
    }

    fn equation(&mut self) -> Result<Equation, ParseError> {
        let lhs = self.expr()?;
        self.expect(Tok::Equals, "`=` or an operator")?;
        let rhs = self.expr()?;
        Ok(Equation::new(lhs, rhs))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term(false)?];
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.term(false)?);
                }
                Tok::Minus => {
                    self.bump();
                    terms.push(self.term(true)?);
                }
                _ => break,
            }
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self, negate: bool) -> Result<Expr, ParseError> {
        let first = self.factor()?;
        let mut factors = vec![if negate { negate_factor(first) } else { first.expr }];
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    factors.push(self.factor()?.expr);
                }
                Tok::X | Tok::LParen | Tok::Sqrt => factors.push(self.factor()?.expr),
                _ => break,
            }
        }
        Ok(Expr::prod(factors))
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let minus = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let atom = self.atom()?;
        let atom = if *self.peek() == Tok::Caret {
            self.bump();
            let exp = self.exponent()?;
            Factor { expr: Expr::pow(atom.expr, exp), bare_literal: false }
        } else {
            atom
        };
        if minus {
            Ok(Factor { expr: negate_factor(atom), bare_literal: false })
        } else {
            Ok(atom)
        }
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Int(n) if !n.is_zero() => {
                self.bump();
                match u32::try_from(&n) {
                    Ok(e) if e <= MAX_EXPONENT => Ok(e),
                    _ => Err(ParseError::Syntax {
                        offset,
                        expected: format!("an exponent of at most {MAX_EXPONENT}"),
                        found: format!("`{n}`"),
                    }),
                }
            }
            _ => Err(self.error("a positive integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Factor, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.peek().clone() {
                        Tok::Int(d) if d.is_positive() => {
                            self.bump();
                            let r = Rational::new_raw(n, d).expect("positive denominator");
                            Ok(Factor { expr: Expr::Const(r), bare_literal: true })
                        }
                        _ => Err(self.error("a positive integer denominator")),
                    }
                } else {
                    Ok(Factor { expr: Expr::Const(Rational::from_integer(n)), bare_literal: true })
                }
            }
            Tok::X => {
                self.bump();
                Ok(Factor { expr: Expr::Var, bare_literal: false })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.nested()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Factor { expr: inner, bare_literal: false })
            }
            Tok::Sqrt => {
                self.bump();
                self.expect(Tok::LParen, "`(` after `sqrt`")?;
                let inner = self.nested()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Factor { expr: Expr::sqrt(inner), bare_literal: false })
            }
            _ => Err(self.error("a number, `x`, `(` or `sqrt`")),
        }
    }

    fn nested(&mut self) -> Result<Expr, ParseError> {
        if self.depth >= MAX_NESTING {
            return Err(self.error(&format!("at most {MAX_NESTING} nested brackets")));
        }
        self.depth += 1;
        let e = self.expr();
        self.depth -= 1;
        e
    }
}

/// Parses one or more equations joined by `or`.
pub fn parse_eqset(text: &str) -> Result<EqSet, ParseError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0, depth: 0 }.eqset()
}

/// Parses a single expression (no `=`).
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, depth: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("an operator or end of input"));
    }
    Ok(e)
}
