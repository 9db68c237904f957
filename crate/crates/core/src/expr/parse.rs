use std::f64::consts::PI;

use super::diff::build;
use super::{Expression, ExprError, Func, Link, Result, VARIABLES};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
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

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' if bytes.get(i + 1) == Some(&b'*') => {
                i += 1;
                Tok::Caret
            }
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let s = &text[start..i];
                let v: f64 = s.parse().map_err(|_| ExprError::Syntax {
                    offset: start,
                    message: format!("malformed number '{s}'"),
                })?;
                out.push((Tok::Num(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(ExprError::Syntax {
                    offset: start,
                    message: format!("unexpected character '{}'", text[start..].chars().next().unwrap()),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    var: Option<String>,
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

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(ExprError::Syntax { offset: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Link> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = build::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = build::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Link> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = build::mul(lhs, self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = build::div(lhs, self.unary()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Link> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(build::neg(self.unary()?))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Link> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let at = self.offset();
            let exponent = self.unary()?;
            match exponent.as_const() {
                Some(c) => Ok(build::pow(base, c)),
                None => Err(ExprError::Syntax { offset: at, message: "exponent must be a constant".into() }),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Link> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(build::konst(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(name) => {
                if name == "pi" {
                    return Ok(build::konst(PI));
                }
                if let Some(func) = Func::from_name(&name) {
                    if *self.peek() != Tok::LParen {
                        return self.err(format!("expected '(' after {name}"));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    if *self.peek() != Tok::RParen {
                        return self.err("expected ')'");
                    }
                    self.bump();
                    return Ok(build::func(func, arg));
                }
                if VARIABLES.contains(&name.as_str()) {
                    match &self.var {
                        Some(v) if *v != name => {
                            return Err(ExprError::Syntax {
                                offset: at,
                                message: format!("second free variable '{name}' (already using '{v}')"),
                            })
                        }
                        _ => self.var = Some(name),
                    }
                    return Ok(build::var());
                }
                Err(ExprError::UnknownIdentifier { name, offset: at })
            }
            Tok::End => Err(ExprError::Syntax { offset: at, message: "unexpected end of input".into() }),
            other => Err(ExprError::Syntax { offset: at, message: format!("unexpected token {other:?}") }),
        }
    }
}

pub(super) fn parse(text: &str) -> Result<Expression> {
    if text.trim().is_empty() {
        return Err(ExprError::Syntax { offset: 0, message: "empty expression".into() });
    }
    let mut p = Parser { toks: tokenize(text)?, pos: 0, var: None };
    let root = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    let var = p.var.unwrap_or_else(|| "t".to_string());
    Ok(Expression::from_node(root, &var))
}
