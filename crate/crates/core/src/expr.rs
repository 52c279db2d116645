//! Expression front-end for functions given as text.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?            right-associative
//! atom  := number | 'x' | 'n' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! func  := sin | cos | tan | exp | ln | sqrt | abs | floor | sign
//! ```
//!
//! `n` is an alias of `x` for sequences. Evaluation is plain `f64`
//! arithmetic; NaN and infinities are returned to the caller as values.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::net::Net;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: expected {expected}")]
pub struct ParseError {
    /// Byte offset into the input; `input.len()` means end of input.
    pub offset: usize,
    pub expected: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Abs,
    Floor,
    Sign,
}

impl Builtin {
    pub const ALL: [Builtin; 9] = [
        Builtin::Sin,
        Builtin::Cos,
        Builtin::Tan,
        Builtin::Exp,
        Builtin::Ln,
        Builtin::Sqrt,
        Builtin::Abs,
        Builtin::Floor,
        Builtin::Sign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Sin => "sin",
            Builtin::Cos => "cos",
            Builtin::Tan => "tan",
            Builtin::Exp => "exp",
            Builtin::Ln => "ln",
            Builtin::Sqrt => "sqrt",
            Builtin::Abs => "abs",
            Builtin::Floor => "floor",
            Builtin::Sign => "sign",
        }
    }

    pub fn lookup(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn apply(self, v: f64) -> f64 {
        match self {
            Builtin::Sin => v.sin(),
            Builtin::Cos => v.cos(),
            Builtin::Tan => v.tan(),
            Builtin::Exp => v.exp(),
            Builtin::Ln => v.ln(),
            Builtin::Sqrt => v.sqrt(),
            Builtin::Abs => v.abs(),
            Builtin::Floor => v.floor(),
            Builtin::Sign => {
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    // keeps NaN, maps both zeros to 0
                    v * 0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Number(f64),
    Var,
    Unary(UnaryOp, Box<Ast>),
    Binary(BinaryOp, Box<Ast>, Box<Ast>),
    Call(Builtin, Box<Ast>),
}

impl Ast {
    pub fn binary(op: BinaryOp, l: Ast, r: Ast) -> Ast {
        Ast::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn call(f: Builtin, arg: Ast) -> Ast {
        Ast::Call(f, Box::new(arg))
    }

    pub fn neg(a: Ast) -> Ast {
        Ast::Unary(UnaryOp::Neg, Box::new(a))
    }

    /// Wraps the expression as a net on real-indexed directions.
    pub fn to_net(&self) -> Net {
        let ast = self.clone();
        Net::real(self.to_string(), move |x| evaluate(&ast, x))
    }
}

/// Fully parenthesised rendering; parsing it back yields the same tree.
impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ast::Number(v) => write!(f, "{v}"),
            Ast::Var => write!(f, "x"),
            Ast::Unary(UnaryOp::Neg, a) => write!(f, "(-{a})"),
            Ast::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Ast::Call(b, a) => write!(f, "{}({a})", b.name()),
        }
    }
}

impl FromStr for Ast {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse(s)
    }
}

pub fn evaluate(ast: &Ast, x: f64) -> f64 {
    match ast {
        Ast::Number(v) => *v,
        Ast::Var => x,
        Ast::Unary(UnaryOp::Neg, a) => -evaluate(a, x),
        Ast::Binary(op, l, r) => {
            let (a, b) = (evaluate(l, x), evaluate(r, x));
            match op {
                BinaryOp::Add => a + b,
                BinaryOp::Sub => a - b,
                BinaryOp::Mul => a * b,
                BinaryOp::Div => a / b,
                BinaryOp::Pow => a.powf(b),
            }
        }
        Ast::Call(b, a) => b.apply(evaluate(a, x)),
    }
}

pub fn parse(input: &str) -> Result<Ast, ParseError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0 };
    let ast = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("operator or end of input"));
    }
    Ok(ast)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinaryOp::Add,
                Some(b'-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Ast::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinaryOp::Mul,
                Some(b'/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Ast::binary(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if self.eat(b'-') {
            return Ok(Ast::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.unary()?;
            return Ok(Ast::binary(BinaryOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("\")\""));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            _ => Err(self.error("number, variable, constant, function or \"(\"")),
        }
    }

    fn number(&mut self) -> Result<Ast, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.src.get(p.pos).is_some_and(u8::is_ascii_digit) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            self.pos = start;
            return Err(self.error("digits"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // not an exponent; leave `e` for the next token
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Ast::Number(v)),
            _ => {
                self.pos = start;
                Err(self.error("finite number"))
            }
        }
    }

    fn identifier(&mut self) -> Result<Ast, ParseError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        if self.peek() == Some(b'(') {
            let Some(func) = Builtin::lookup(name) else {
                self.pos = start;
                return Err(self.error("one of sin, cos, tan, exp, ln, sqrt, abs, floor, sign"));
            };
            self.pos += 1;
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.error("\")\""));
            }
            return Ok(Ast::call(func, arg));
        }
        match name {
            "x" | "n" => Ok(Ast::Var),
            "pi" => Ok(Ast::Number(std::f64::consts::PI)),
            "e" => Ok(Ast::Number(std::f64::consts::E)),
            _ => {
                self.pos = start;
                Err(self.error("variable x or n, constant pi or e, or a function call"))
            }
        }
    }
}
