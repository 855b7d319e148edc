//! Scalar expressions in the variables `t`, `u` and `r`.
//!
//! Problem files carry the nonlinearity, the weight and the comparison
//! functions as plain strings. This module turns them into an immutable
//! [`Expr`] tree that can be evaluated from any number of threads.
//!
//! # Grammar
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | variable | func '(' expr ')' | '(' expr ')'
//! number  := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits]
//!          | '.' digits [exponent]
//! variable:= 't' | 'u' | 'r'
//! func    := 'sqrt' | 'log' | 'exp' | 'abs' | 'sin' | 'cos'
//! ```
//!
//! `^` binds tighter than unary minus, so `-u^2` is `-(u^2)`, and it is
//! right-associative (`2^3^2` is `2^9`). Its right operand may carry a
//! sign: `u^-1` is `u^(-1)`. Whitespace is ignored and identifiers are
//! case-sensitive. There is no implicit multiplication: `2u` is rejected.

use std::fmt;

use thiserror::Error;

/// A variable an expression may reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    U,
    R,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::U => "u",
            Var::R => "r",
        }
    }

    fn from_name(name: &str) -> Option<Var> {
        match name {
            "t" => Some(Var::T),
            "u" => Some(Var::U),
            "r" => Some(Var::R),
            _ => None,
        }
    }
}

/// The set of variables an expression is allowed to use, fixed by the
/// role the expression plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarSet {
    t: bool,
    u: bool,
    r: bool,
}

impl VarSet {
    /// `f(t, u)`
    pub const TU: VarSet = VarSet { t: true, u: true, r: false };
    /// `h(r, u)`
    pub const RU: VarSet = VarSet { t: false, u: true, r: true };
    /// `q(t)`, `b(t)`, `m(t)`
    pub const T: VarSet = VarSet { t: true, u: false, r: false };
    pub const ALL: VarSet = VarSet { t: true, u: true, r: true };

    pub fn contains(&self, var: Var) -> bool {
        match var {
            Var::T => self.t,
            Var::U => self.u,
            Var::R => self.r,
        }
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [Var::T, Var::U, Var::R]
            .into_iter()
            .filter(|v| self.contains(*v))
            .map(Var::name)
            .collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sqrt,
    Log,
    Exp,
    Abs,
    Sin,
    Cos,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Sqrt, Func::Log, Func::Exp, Func::Abs, Func::Sin, Func::Cos];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Log => "log",
            Func::Exp => "exp",
            Func::Abs => "abs",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree. Literals produced by the parser are always
/// non-negative; a leading minus becomes [`Expr::Neg`].
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Values for the variables of an expression. Unset variables are an
/// error only if the expression actually reads them.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Bindings {
    pub t: Option<f64>,
    pub u: Option<f64>,
    pub r: Option<f64>,
}

impl Bindings {
    pub fn tu(t: f64, u: f64) -> Self {
        Bindings { t: Some(t), u: Some(u), r: None }
    }

    pub fn ru(r: f64, u: f64) -> Self {
        Bindings { t: None, u: Some(u), r: Some(r) }
    }

    pub fn t(t: f64) -> Self {
        Bindings { t: Some(t), u: None, r: None }
    }

    fn get(&self, var: Var) -> Option<f64> {
        match var {
            Var::T => self.t,
            Var::U => self.u,
            Var::R => self.r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("variable `{name}` at byte {offset} is not allowed here (allowed: {allowed})")]
    VariableNotAllowed { name: String, offset: usize, allowed: String },
    #[error("variable `{0}` is not bound")]
    Unbound(&'static str),
    #[error("domain error in `{subexpr}`: {reason}")]
    Domain { subexpr: String, reason: &'static str },
}

impl Expr {
    /// Parses `source`, rejecting any variable outside `allowed`.
    pub fn parse(source: &str, allowed: VarSet) -> Result<Expr, ExprError> {
        let tokens = tokenize(source)?;
        let mut parser = Parser { tokens: &tokens, pos: 0, allowed, end: source.len() };
        if tokens.is_empty() {
            return Err(ExprError::Syntax { offset: 0, message: "empty expression".into() });
        }
        let expr = parser.expr()?;
        if let Some(tok) = parser.peek() {
            return Err(ExprError::Syntax {
                offset: tok.offset,
                message: format!("unexpected {}", tok.kind.describe()),
            });
        }
        Ok(expr)
    }

    pub fn num(value: f64) -> Expr {
        Expr::Num(value)
    }

    /// True when the tree reads `var` anywhere.
    pub fn uses(&self, var: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(v) => *v == var,
            Expr::Neg(a) | Expr::Call(_, a) => a.uses(var),
            Expr::Bin(_, a, b) => a.uses(var) || b.uses(var),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Call(_, a) => 1 + a.depth(),
            Expr::Bin(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn eval(&self, env: &Bindings) -> Result<f64, ExprError> {
        match self {
            Expr::Num(v) => Ok(*v),
            Expr::Var(v) => env.get(*v).ok_or(ExprError::Unbound(v.name())),
            Expr::Neg(a) => Ok(-a.eval(env)?),
            Expr::Bin(op, a, b) => {
                let x = a.eval(env)?;
                let y = b.eval(env)?;
                match op {
                    BinOp::Add => Ok(x + y),
                    BinOp::Sub => Ok(x - y),
                    BinOp::Mul => Ok(x * y),
                    BinOp::Div => {
                        if y == 0.0 {
                            Err(self.domain("division by zero"))
                        } else {
                            Ok(x / y)
                        }
                    }
                    BinOp::Pow => pow(x, y).map_err(|reason| self.domain(reason)),
                }
            }
            Expr::Call(func, a) => {
                let x = a.eval(env)?;
                match func {
                    Func::Sqrt if x < 0.0 => Err(self.domain("square root of a negative number")),
                    Func::Sqrt => Ok(x.sqrt()),
                    Func::Log if x <= 0.0 => Err(self.domain("logarithm of a non-positive number")),
                    Func::Log => Ok(x.ln()),
                    Func::Exp => Ok(x.exp()),
                    Func::Abs => Ok(x.abs()),
                    Func::Sin => Ok(x.sin()),
                    Func::Cos => Ok(x.cos()),
                }
            }
        }
    }

    /// Shorthand for `eval(&Bindings::tu(t, u))`.
    pub fn eval_tu(&self, t: f64, u: f64) -> Result<f64, ExprError> {
        self.eval(&Bindings::tu(t, u))
    }

    fn domain(&self, reason: &'static str) -> ExprError {
        ExprError::Domain { subexpr: self.to_string(), reason }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            Expr::Num(_) | Expr::Var(_) | Expr::Call(..) => 5,
        }
    }
}

/// Largest exponent magnitude handled by repeated squaring.
const MAX_INT_EXPONENT: f64 = 1_048_576.0;

pub(crate) fn pow(base: f64, exponent: f64) -> Result<f64, &'static str> {
    if exponent.fract() == 0.0 && exponent.abs() <= MAX_INT_EXPONENT {
        let n = exponent.abs() as u64;
        if exponent < 0.0 {
            if base == 0.0 {
                return Err("zero raised to a negative power");
            }
            return Ok(1.0 / powi_exact(base, n));
        }
        return Ok(powi_exact(base, n));
    }
    if base < 0.0 {
        return Err("negative base with a non-integer exponent");
    }
    if base == 0.0 {
        return if exponent > 0.0 { Ok(0.0) } else { Err("zero raised to a negative power") };
    }
    Ok(base.powf(exponent))
}

fn powi_exact(mut base: f64, mut n: u64) -> f64 {
    let mut acc = 1.0;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        n >>= 1;
        if n > 0 {
            base *= base;
        }
    }
    acc
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_operand(f, a, a.precedence() < 3)
            }
            Expr::Call(func, a) => write!(f, "{}({})", func.name(), a),
            Expr::Bin(op, a, b) => {
                let p = self.precedence();
                let (left_parens, right_parens) = match op {
                    BinOp::Pow => (a.precedence() <= 4, b.precedence() < 3),
                    _ => (a.precedence() < p, b.precedence() <= p),
                };
                write_operand(f, a, left_parens)?;
                write!(f, "{}", op.symbol())?;
                write_operand(f, b, right_parens)
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Num(v) => format!("number {v}"),
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Op(c) => format!("`{c}`"),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' | b'.' => {
                i = scan_number(bytes, i)?;
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ExprError::Syntax {
                    offset: start,
                    message: format!("malformed number `{text}`"),
                })?;
                tokens.push(Token { kind: TokenKind::Num(value), offset: start });
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(Token { kind: TokenKind::Ident(src[start..i].to_string()), offset: start });
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                tokens.push(Token { kind: TokenKind::Op(c as char), offset: start });
                i += 1;
            }
            b'(' => {
                tokens.push(Token { kind: TokenKind::LParen, offset: start });
                i += 1;
            }
            b')' => {
                tokens.push(Token { kind: TokenKind::RParen, offset: start });
                i += 1;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ExprError::Syntax { offset: start, message: format!("unexpected character `{ch}`") });
            }
        }
    }
    Ok(tokens)
}

fn scan_number(bytes: &[u8], mut i: usize) -> Result<usize, ExprError> {
    let start = i;
    let digits = |i: &mut usize| {
        let s = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        *i - s
    };
    let mut mantissa = digits(&mut i);
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        mantissa += digits(&mut i);
    }
    if mantissa == 0 {
        return Err(ExprError::Syntax { offset: start, message: "expected digits".into() });
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if digits(&mut j) == 0 {
            return Err(ExprError::Syntax { offset: i, message: "missing exponent digits".into() });
        }
        i = j;
    }
    Ok(i)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    allowed: VarSet,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self) -> Option<char> {
        match self.peek() {
            Some(Token { kind: TokenKind::Op(c), .. }) => Some(*c),
            _ => None,
        }
    }

    fn next_offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let offset = self.next_offset();
        let Some(tok) = self.peek().cloned() else {
            return Err(ExprError::Syntax { offset, message: "unexpected end of expression".into() });
        };
        self.pos += 1;
        match tok.kind {
            TokenKind::Num(v) => {
                self.reject_juxtaposition()?;
                Ok(Expr::Num(v))
            }
            TokenKind::Ident(name) => {
                if let Some(func) = Func::from_name(&name) {
                    self.expect_lparen(&name)?;
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                let Some(var) = Var::from_name(&name) else {
                    return Err(ExprError::UnknownIdentifier { name, offset });
                };
                if !self.allowed.contains(var) {
                    return Err(ExprError::VariableNotAllowed {
                        name,
                        offset,
                        allowed: self.allowed.to_string(),
                    });
                }
                Ok(Expr::Var(var))
            }
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            other => Err(ExprError::Syntax { offset, message: format!("unexpected {}", other.describe()) }),
        }
    }

    // `2u`, `2(u)` and `2 3` would otherwise surface as a generic
    // "unexpected token" error; name the actual mistake.
    fn reject_juxtaposition(&self) -> Result<(), ExprError> {
        match self.peek() {
            Some(Token { kind: TokenKind::Ident(_) | TokenKind::LParen | TokenKind::Num(_), offset }) => {
                Err(ExprError::Syntax {
                    offset: *offset,
                    message: "implicit multiplication is not supported; write `*`".into(),
                })
            }
            _ => Ok(()),
        }
    }

    fn expect_lparen(&mut self, func: &str) -> Result<(), ExprError> {
        match self.peek() {
            Some(Token { kind: TokenKind::LParen, .. }) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(ExprError::Syntax {
                offset: self.next_offset(),
                message: format!("expected `(` after `{func}`"),
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        match self.peek() {
            Some(Token { kind: TokenKind::RParen, .. }) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(ExprError::Syntax { offset: self.next_offset(), message: "expected `)`".into() }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        Expr::parse(s, VarSet::TU).unwrap()
    }

    fn ev(s: &str, u: f64) -> Result<f64, ExprError> {
        p(s).eval_tu(0.0, u)
    }

    // Independent evaluator that only knows about numbers and the
    // arithmetic written out in the test source.
    fn hand_eval_sqrt_plus_half(u: f64) -> f64 {
        u.sqrt() + u / 2.0
    }

    #[test]
    fn parses_rational_nonlinearity() {
        let e = p("u^2/(1+u)");
        let expected = Expr::Bin(
            BinOp::Div,
            Box::new(Expr::Bin(BinOp::Pow, Box::new(Expr::Var(Var::U)), Box::new(Expr::Num(2.0)))),
            Box::new(Expr::Bin(BinOp::Add, Box::new(Expr::Num(1.0)), Box::new(Expr::Var(Var::U)))),
        );
        assert_eq!(e, expected);
        assert_eq!(e.eval_tu(0.3, 3.0).unwrap(), 9.0 / 4.0);
    }

    #[test]
    fn identity() {
        assert_eq!(ev("u", 3.0).unwrap(), 3.0);
    }

    #[test]
    fn sqrt_plus_half() {
        assert_eq!(ev("sqrt(u)+u/2", 4.0).unwrap(), 4.0);
        assert_eq!(ev("sqrt(u)+u/2", 4.0).unwrap(), hand_eval_sqrt_plus_half(4.0));
    }

    #[test]
    fn small_evaluations() {
        assert_eq!(ev("u/(1+u)", 1.0).unwrap(), 0.5);
        assert_eq!(ev("u^3+u/2", 2.0).unwrap(), 9.0);
        assert_eq!(ev("-u^2", 3.0).unwrap(), -9.0);
        assert_eq!(ev("2^3^2", 0.0).unwrap(), 512.0);
        assert_eq!(ev("u^-1", 4.0).unwrap(), 0.25);
        assert_eq!(ev("2.5e-1*u", 4.0).unwrap(), 1.0);
        assert_eq!(ev(".5E+1", 0.0).unwrap(), 5.0);
        assert_eq!(ev("  1 -\t2 - 3 ", 0.0).unwrap(), -4.0);
        assert_eq!(ev("8/4/2", 0.0).unwrap(), 1.0);
    }

    #[test]
    fn singular_power_at_zero() {
        let err = ev("u^(-1)", 0.0).unwrap_err();
        assert!(matches!(err, ExprError::Domain { ref subexpr, .. } if subexpr == "u^-1.0"), "{err}");
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(ev("sqrt(u)", -1.0), Err(ExprError::Domain { .. })));
        assert!(matches!(ev("log(u)", 0.0), Err(ExprError::Domain { .. })));
        assert!(matches!(ev("1/u", 0.0), Err(ExprError::Domain { .. })));
        assert!(matches!(ev("u^0.5", -4.0), Err(ExprError::Domain { .. })));
        assert_eq!(ev("u^0.5", 0.0).unwrap(), 0.0);
        assert_eq!(ev("u^3", -2.0).unwrap(), -8.0);
    }

    #[test]
    fn integer_powers_are_exact() {
        let x = 1.1_f64;
        assert_eq!(pow(x, 3.0).unwrap(), x * x * x);
        assert_eq!(pow(3.0, 0.0).unwrap(), 1.0);
        assert_eq!(pow(0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let err = Expr::parse("2u", VarSet::TU).unwrap_err();
        assert_eq!(err, ExprError::Syntax { offset: 1, message: "implicit multiplication is not supported; write `*`".into() });
        assert!(matches!(Expr::parse("1 + ", VarSet::TU), Err(ExprError::Syntax { offset: 4, .. })));
        assert!(matches!(Expr::parse("(u", VarSet::TU), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(Expr::parse("u $ 2", VarSet::TU), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(Expr::parse("", VarSet::TU), Err(ExprError::Syntax { offset: 0, .. })));
        assert!(matches!(Expr::parse("1e", VarSet::TU), Err(ExprError::Syntax { .. })));
        assert!(matches!(Expr::parse("sqrt u", VarSet::TU), Err(ExprError::Syntax { offset: 5, .. })));
    }

    #[test]
    fn identifiers_are_checked() {
        assert_eq!(
            Expr::parse("u + x", VarSet::TU),
            Err(ExprError::UnknownIdentifier { name: "x".into(), offset: 4 })
        );
        assert!(matches!(Expr::parse("U", VarSet::TU), Err(ExprError::UnknownIdentifier { .. })));
        assert!(matches!(
            Expr::parse("r*u", VarSet::TU),
            Err(ExprError::VariableNotAllowed { offset: 0, .. })
        ));
        assert!(matches!(Expr::parse("u", VarSet::T), Err(ExprError::VariableNotAllowed { .. })));
        assert!(Expr::parse("r^2*u", VarSet::RU).is_ok());
    }

    #[test]
    fn precedence_matches_explicit_grouping() {
        let all = VarSet::ALL;
        assert_eq!(Expr::parse("t+u*r", all), Expr::parse("t+(u*r)", all));
        assert_eq!(Expr::parse("t-u-r", all), Expr::parse("(t-u)-r", all));
        assert_eq!(Expr::parse("-t^2", all), Expr::parse("-(t^2)", all));
        assert_eq!(Expr::parse("t^u^r", all), Expr::parse("t^(u^r)", all));
        assert_eq!(Expr::parse("-t*u", all), Expr::parse("(-t)*u", all));
    }

    #[test]
    fn unbound_variable() {
        assert_eq!(p("t+u").eval(&Bindings::t(1.0)), Err(ExprError::Unbound("u")));
    }

    #[test]
    fn display_reparses() {
        for src in ["u^2/(1+u)", "-(u+1)^2", "(-u)^2", "u^-t", "2^3^2", "(2^3)^2", "a", "t-(u-1)", "t/(u/2)", "exp(-t)*sin(u)"] {
            let Ok(e) = Expr::parse(src, VarSet::TU) else { continue };
            assert_eq!(Expr::parse(&e.to_string(), VarSet::TU).unwrap(), e, "{src} -> {e}");
        }
    }
}
