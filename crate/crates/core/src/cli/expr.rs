//! Tiny expression grammar for symbols and complex constants.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary | unary)*      juxtaposition multiplies: "2z", "0.5i"
//! unary   := ('+' | '-') unary | power
//! power   := primary ('^' unary)?                    exponent must be a real constant
//! primary := number | 'z' | 'i' | '(' expr ')'
//! ```
//!
//! Expressions expand to truncated series; constants such as `0.3+0.4i` or
//! `i/2` evaluate to a single complex number.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Complex64),
    Z,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Z,
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Expression(msg.into())
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            'z' | 'Z' => out.push(Token::Z),
            'i' | 'j' => out.push(Token::I),
            '+' => out.push(Token::Plus),
            '-' | '\u{2212}' => out.push(Token::Minus),
            '*' => out.push(Token::Star),
            '/' => out.push(Token::Slash),
            '^' => out.push(Token::Caret),
            '(' => out.push(Token::LParen),
            ')' => out.push(Token::RParen),
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let v: f64 = text
                    .parse()
                    .map_err(|_| err(format!("bad number '{text}'")))?;
                out.push(Token::Num(v));
                continue;
            }
            other => return Err(err(format!("unexpected character '{other}'"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Num(_) | Token::Z | Token::I | Token::LParen) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Token::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if let Some(Token::Caret) = self.peek() {
            self.bump();
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Token::Num(v)) => Ok(Expr::Num(Complex64::new(v, 0.0))),
            Some(Token::I) => Ok(Expr::Num(Complex64::new(0.0, 1.0))),
            Some(Token::Z) => Ok(Expr::Z),
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(e),
                    _ => Err(err("missing ')'")),
                }
            }
            Some(t) => Err(err(format!("unexpected token {t:?}"))),
            None => Err(err("unexpected end of expression")),
        }
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        let tokens = tokenize(src)?;
        if tokens.is_empty() {
            return Err(err("empty expression"));
        }
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(err(format!("trailing input after position {}", p.pos)));
        }
        Ok(e)
    }

    pub fn contains_z(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Z => true,
            Expr::Neg(a) => a.contains_z(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.contains_z() || b.contains_z(),
        }
    }

    /// Value of a `z`-free expression.
    pub fn to_constant(&self) -> Result<Complex64> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Z => return Err(err("expected a constant, found z")),
            Expr::Neg(a) => -a.to_constant()?,
            Expr::Add(a, b) => a.to_constant()? + b.to_constant()?,
            Expr::Sub(a, b) => a.to_constant()? - b.to_constant()?,
            Expr::Mul(a, b) => a.to_constant()? * b.to_constant()?,
            Expr::Div(a, b) => {
                let d = b.to_constant()?;
                if d == Complex64::new(0.0, 0.0) {
                    return Err(err("division by zero"));
                }
                a.to_constant()? / d
            }
            Expr::Pow(a, b) => {
                let base = a.to_constant()?;
                let e = b.to_constant()?;
                match integer_exponent(e) {
                    Some(k) if k >= 0 => base.powu(k as u32),
                    _ => base.powc(e),
                }
            }
        })
    }

    /// Pointwise value, principal branches for non-integer powers.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Z => z,
            Expr::Neg(a) => -a.evaluate(z),
            Expr::Add(a, b) => a.evaluate(z) + b.evaluate(z),
            Expr::Sub(a, b) => a.evaluate(z) - b.evaluate(z),
            Expr::Mul(a, b) => a.evaluate(z) * b.evaluate(z),
            Expr::Div(a, b) => a.evaluate(z) / b.evaluate(z),
            Expr::Pow(a, b) => {
                let base = a.evaluate(z);
                let e = b.evaluate(z);
                match integer_exponent(e) {
                    Some(k) if k.unsigned_abs() <= i32::MAX as u64 => base.powi(k as i32),
                    _ => base.powc(e),
                }
            }
        }
    }

    /// Taylor expansion through degree `n`.
    pub fn to_series(&self, n: usize) -> Result<TruncatedSeries> {
        if !self.contains_z() {
            return Ok(TruncatedSeries::constant(self.to_constant()?, n));
        }
        Ok(match self {
            Expr::Num(v) => TruncatedSeries::constant(*v, n),
            Expr::Z => TruncatedSeries::identity(n),
            Expr::Neg(a) => -a.to_series(n)?,
            Expr::Add(a, b) => a.to_series(n)? + b.to_series(n)?,
            Expr::Sub(a, b) => a.to_series(n)? - b.to_series(n)?,
            Expr::Mul(a, b) => a.to_series(n)? * b.to_series(n)?,
            Expr::Div(a, b) => a
                .to_series(n)?
                .divide(&b.to_series(n)?)
                .map_err(|_| err("denominator must not vanish at z = 0"))?,
            Expr::Pow(a, b) => {
                if b.contains_z() {
                    return Err(err("exponent must be a constant"));
                }
                let e = b.to_constant()?;
                if e.im != 0.0 {
                    return Err(err("exponent of a series must be real"));
                }
                let base = a.to_series(n)?;
                match integer_exponent(e) {
                    Some(k) if k >= 0 => base.powi(k as u32),
                    Some(k) => base
                        .reciprocal()
                        .map_err(|_| err("negative power of a series vanishing at 0"))?
                        .powi((-k) as u32),
                    None => base
                        .powf(e.re)
                        .map_err(|_| err("fractional power of a series vanishing at 0"))?,
                }
            }
        })
    }
}

fn integer_exponent(e: Complex64) -> Option<i64> {
    (e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() <= 1e6).then_some(e.re as i64)
}

/// Parses `"re+imi"`-style constants (any `z`-free expression).
pub fn parse_complex(src: &str) -> Result<Complex64> {
    Expr::parse(src)?.to_constant()
}
