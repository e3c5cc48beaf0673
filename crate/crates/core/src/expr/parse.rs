use num_traits::Zero;
use thiserror::Error;

use super::Expr;
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at offset {offset}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub offset: usize,
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, offset: usize) -> Self {
        ParseError { kind, offset }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected {found}, expected {expected}")]
    UnexpectedToken { found: String, expected: &'static str },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("variable x{index} exceeds dimension {dimension}")]
    VariableOutOfRange { index: usize, dimension: usize },
    #[error("exponent must be a rational constant")]
    NonConstantExponent,
    #[error("division by literal zero")]
    DivisionByLiteralZero,
    #[error("numeric literal out of range")]
    NumberOutOfRange,
    #[error("function nets need dimension >= 1")]
    ZeroDimension,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(r) => format!("number {r}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().unwrap();
        let start = i;
        match c {
            c if c.is_whitespace() => {
                i += c.len_utf8();
                continue;
            }
            '+' => out.push((Tok::Plus, start)),
            '-' => out.push((Tok::Minus, start)),
            '*' => out.push((Tok::Star, start)),
            '/' => out.push((Tok::Slash, start)),
            '^' => out.push((Tok::Caret, start)),
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            'λ' => out.push((Tok::Ident("lambda".into()), start)),
            c if c.is_ascii_digit() || c == '.' => {
                let (value, len) = lex_number(&text[i..]).map_err(|k| ParseError::new(k, start))?;
                out.push((Tok::Num(value), start));
                i += len;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = text[i..]
                    .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                    .unwrap_or(text.len() - i);
                out.push((Tok::Ident(text[i..i + len].to_string()), start));
                i += len;
                continue;
            }
            other => return Err(ParseError::new(ParseErrorKind::UnexpectedChar(other), start)),
        }
        i += c.len_utf8();
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Reads `digits[.digits][e[+-]digits]` exactly.
fn lex_number(s: &str) -> Result<(Rational, usize), ParseErrorKind> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut numer: i64 = 0;
    let mut denom: i64 = 1;
    let mut digits = 0;
    let push = |acc: i64, d: u8| -> Result<i64, ParseErrorKind> {
        acc.checked_mul(10)
            .and_then(|v| v.checked_add((d - b'0') as i64))
            .ok_or(ParseErrorKind::NumberOutOfRange)
    };
    while i < b.len() && b[i].is_ascii_digit() {
        numer = push(numer, b[i])?;
        i += 1;
        digits += 1;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        while i < b.len() && b[i].is_ascii_digit() {
            numer = push(numer, b[i])?;
            denom = denom.checked_mul(10).ok_or(ParseErrorKind::NumberOutOfRange)?;
            i += 1;
            digits += 1;
        }
    }
    if digits == 0 {
        return Err(ParseErrorKind::UnexpectedChar('.'));
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        let mut negative = false;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            negative = b[j] == b'-';
            j += 1;
        }
        let exp_start = j;
        let mut exp: u32 = 0;
        while j < b.len() && b[j].is_ascii_digit() {
            exp = exp
                .checked_mul(10)
                .and_then(|v| v.checked_add((b[j] - b'0') as u32))
                .ok_or(ParseErrorKind::NumberOutOfRange)?;
            j += 1;
        }
        // a bare `e` is left for the identifier lexer (and will fail there)
        if j > exp_start {
            let scale = 10i64.checked_pow(exp).ok_or(ParseErrorKind::NumberOutOfRange)?;
            if negative {
                denom = denom.checked_mul(scale).ok_or(ParseErrorKind::NumberOutOfRange)?;
            } else {
                numer = numer.checked_mul(scale).ok_or(ParseErrorKind::NumberOutOfRange)?;
            }
            i = j;
        }
    }
    Ok((Rational::new(numer, denom), i))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    dimension: usize,
}

pub(super) fn parse(text: &str, dimension: usize) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        dimension,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        other => Err(p.unexpected(other.clone(), "operator or end of input")),
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

    fn unexpected(&self, found: Tok, expected: &'static str) -> ParseError {
        let kind = match found {
            Tok::End => ParseErrorKind::UnexpectedEnd,
            other => ParseErrorKind::UnexpectedToken {
                found: other.describe(),
                expected,
            },
        };
        ParseError::new(kind, self.offset())
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(self.peek().clone(), expected))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let rhs = self.unary()?;
                    lhs = match (lhs.as_const(), rhs.as_const()) {
                        (_, Some(d)) if d.is_zero() => {
                            return Err(ParseError::new(ParseErrorKind::DivisionByLiteralZero, at))
                        }
                        (Some(n), Some(d)) => Expr::Const(n / d),
                        _ => Expr::Div(Box::new(lhs), Box::new(rhs)),
                    };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.unary()?;
            return Ok(match inner {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::Mul(Box::new(Expr::int(-1)), Box::new(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exponent = match self.peek() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                e
            }
            Tok::Minus => {
                self.bump();
                match self.bump() {
                    Tok::Num(n) => Expr::Const(-n),
                    _ => return Err(ParseError::new(ParseErrorKind::NonConstantExponent, at)),
                }
            }
            Tok::Num(_) => match self.bump() {
                Tok::Num(n) => Expr::Const(n),
                _ => unreachable!(),
            },
            Tok::End => return Err(ParseError::new(ParseErrorKind::UnexpectedEnd, at)),
            _ => return Err(ParseError::new(ParseErrorKind::NonConstantExponent, at)),
        };
        match exponent {
            Expr::Const(q) => Ok(Expr::Pow(Box::new(base), q)),
            _ => Err(ParseError::new(ParseErrorKind::NonConstantExponent, at)),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(n) => Ok(Expr::Const(n)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(name, at),
            Tok::End => Err(ParseError::new(ParseErrorKind::UnexpectedEnd, at)),
            other => Err(ParseError::new(
                ParseErrorKind::UnexpectedToken {
                    found: other.describe(),
                    expected: "operand",
                },
                at,
            )),
        }
    }

    fn identifier(&mut self, name: String, at: usize) -> Result<Expr, ParseError> {
        let func: Option<fn(Box<Expr>) -> Expr> = match name.as_str() {
            "lambda" => return Ok(Expr::Lambda),
            "sin" => Some(Expr::Sin),
            "cos" => Some(Expr::Cos),
            "exp" => Some(Expr::Exp),
            "log" => Some(Expr::Log),
            "abs" => Some(Expr::Abs),
            _ => None,
        };
        if let Some(build) = func {
            self.expect(Tok::LParen, "`(`")?;
            let arg = self.expr()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(build(Box::new(arg)));
        }
        if let Some(digits) = name.strip_prefix('x') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                let index: usize = digits
                    .parse()
                    .map_err(|_| ParseError::new(ParseErrorKind::NumberOutOfRange, at))?;
                if index == 0 || index > self.dimension {
                    return Err(ParseError::new(
                        ParseErrorKind::VariableOutOfRange {
                            index,
                            dimension: self.dimension,
                        },
                        at,
                    ));
                }
                return Ok(Expr::Var(index));
            }
        }
        Err(ParseError::new(ParseErrorKind::UnknownIdentifier(name), at))
    }
}
