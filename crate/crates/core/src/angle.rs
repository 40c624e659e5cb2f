//! Angle expressions.
//!
//! Schedules carry pulse areas and phases in exact textual form such as
//! `pi*sqrt(2)` or `2*pi/sqrt(6)`. The grammar is
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := number | 'pi' | 'sqrt' '(' expr ')' | '-' factor | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. Evaluation is done in double-double arithmetic so
//! that the `f64` result is correctly rounded in practice and large pulse
//! areas keep their fractional part.

use std::fmt;

use thiserror::Error;

use crate::dd::Dd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
    #[error("square root of a negative value at position {pos}")]
    NegativeSqrt { pos: usize },
}

/// Parsed angle expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    Sqrt(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self) -> Result<Dd, ExprError> {
        // positions are not tracked in the tree; report 0 for evaluation errors
        self.eval_at(0)
    }

    fn eval_at(&self, pos: usize) -> Result<Dd, ExprError> {
        Ok(match self {
            Expr::Num(x) => Dd::from_f64(*x),
            Expr::Pi => Dd::PI,
            Expr::Sqrt(e) => e.eval_at(pos)?.sqrt().ok_or(ExprError::NegativeSqrt { pos })?,
            Expr::Neg(e) => -e.eval_at(pos)?,
            Expr::Add(a, b) => a.eval_at(pos)? + b.eval_at(pos)?,
            Expr::Sub(a, b) => a.eval_at(pos)? - b.eval_at(pos)?,
            Expr::Mul(a, b) => a.eval_at(pos)? * b.eval_at(pos)?,
            Expr::Div(a, b) => {
                let d = b.eval_at(pos)?;
                if d.is_zero() {
                    return Err(ExprError::DivisionByZero { pos });
                }
                a.eval_at(pos)? / d
            }
        })
    }
}

/// Fully parenthesized rendering; parsing it back yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Pi => write!(f, "pi"),
            Expr::Sqrt(e) => write!(f, "sqrt({e})"),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                match &self.src[start..self.pos] {
                    b"pi" => Ok(Expr::Pi),
                    b"sqrt" => {
                        self.expect(b'(')?;
                        let e = self.expr()?;
                        self.expect(b')')?;
                        Ok(Expr::Sqrt(Box::new(e)))
                    }
                    other => {
                        self.pos = start;
                        Err(self.error(format!(
                            "unknown identifier '{}'",
                            String::from_utf8_lossy(other)
                        )))
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected character '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr, ExprError> {
        let start = self.pos;
        let digits = |p: &mut Parser| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
                return Err(self.error("malformed exponent"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>()
            .map(Expr::Num)
            .map_err(|_| ExprError::Syntax {
                pos: start,
                message: "malformed number".into(),
            })
    }
}

/// Parse an angle expression into its syntax tree.
pub fn parse_expr(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

/// Parse and evaluate an angle expression, in radians.
pub fn parse_angle_expression(text: &str) -> Result<f64, ExprError> {
    Ok(parse_expr(text)?.eval()?.to_f64())
}

/// Format a value with 17 significant digits, enough to round-trip any `f64`.
pub fn format_radians(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let s = format!("{x:.16e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..16).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let plain = format!("{x:.decimals$}");
        let trimmed = plain.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_string()
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{exp}")
    }
}

/// An angle in radians together with its source text.
#[derive(Debug, Clone)]
pub struct Angle {
    text: String,
    value: Dd,
}

impl Angle {
    pub fn parse(text: &str) -> Result<Angle, ExprError> {
        let value = parse_expr(text)?.eval()?;
        Ok(Angle {
            text: text.trim().to_string(),
            value,
        })
    }

    /// Angle from a numeric value, stored as a 17-digit decimal.
    pub fn from_radians(x: f64) -> Angle {
        Angle {
            text: format_radians(x),
            value: Dd::from_f64(x),
        }
    }

    pub fn zero() -> Angle {
        Angle {
            text: "0".into(),
            value: Dd::ZERO,
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn radians(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn value(&self) -> Dd {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Negated angle; negating twice restores the original text.
    pub fn negated(&self) -> Angle {
        Angle {
            text: negate_text(&self.text),
            value: -self.value,
        }
    }
}

impl PartialEq for Angle {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
            && self.value.hi.to_bits() == other.value.hi.to_bits()
            && self.value.lo.to_bits() == other.value.lo.to_bits()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

// true if `s` has a '+' or '-' outside parentheses that is not a leading sign
fn has_top_level_additive(s: &str) -> bool {
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > 0 => {
                // exponent sign inside a number literal
                let prev = bytes[i - 1];
                let in_exponent = (prev == b'e' || prev == b'E')
                    && i >= 2
                    && (bytes[i - 2].is_ascii_digit() || bytes[i - 2] == b'.');
                // unary minus after an operator
                let after_op = matches!(prev, b'*' | b'/' | b'(' | b'+' | b'-');
                if !in_exponent && !after_op {
                    return true;
                }
            }
            _ => {}
        }
    }
    false
}

// "-(" ... ")" where the outer parentheses match each other
fn wrapped_negation(s: &str) -> Option<&str> {
    let inner = s.strip_prefix("-(")?.strip_suffix(')')?;
    let mut depth = 0i32;
    for c in inner.bytes() {
        match c {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    (depth == 0).then_some(inner)
}

fn negate_text(s: &str) -> String {
    if s == "0" {
        return s.to_string();
    }
    if let Some(inner) = wrapped_negation(s) {
        return inner.to_string();
    }
    if let Some(rest) = s.strip_prefix('-') {
        if !rest.starts_with('-') && !has_top_level_additive(rest) {
            return rest.to_string();
        }
    }
    if has_top_level_additive(s) || s.starts_with('-') {
        format!("-({s})")
    } else {
        format!("-{s}")
    }
}
