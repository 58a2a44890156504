//! Lexer and recursive-descent parser for the expression language.
//!
//! Precedence, loosest to tightest: `+`/`-`, then `*`/`/`, then unary
//! minus, then `^` (wedge, and power on scalars). Identifiers cover
//! coordinates `x1..x9`, basis forms `dx12...`, basis multivectors `e6`,
//! built-in names and function calls like `contract(e6^e7, starphi0)`.

use num_bigint::BigInt;

use crate::CliError;
use g2calc::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(Rational, Span),
    Ident(String, Span),
    Neg(Box<Expr>, Span),
    Binary(Op, Box<Expr>, Box<Expr>, Span),
    Call(String, Vec<Expr>, Span),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Number(_, s)
            | Expr::Ident(_, s)
            | Expr::Neg(_, s)
            | Expr::Binary(_, _, _, s)
            | Expr::Call(_, _, s) => *s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Wedge,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn lex(src: &str) -> Result<Vec<(Token, usize)>, CliError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '+' => out.push((Token::Plus, i)),
            // tolerate the typographic minus sign
            '-' | '\u{2212}' => out.push((Token::Minus, i)),
            '*' => out.push((Token::Star, i)),
            '/' => out.push((Token::Slash, i)),
            '^' => out.push((Token::Caret, i)),
            '(' => out.push((Token::LParen, i)),
            ')' => out.push((Token::RParen, i)),
            ',' => out.push((Token::Comma, i)),
            '0'..='9' => {
                let mut end = i + 1;
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        end = j + 1;
                        chars.next();
                    } else {
                        break;
                    }
                }
                let n: BigInt = src[i..end].parse().expect("digits");
                out.push((Token::Number(n), i));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut end = i + 1;
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = j + 1;
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((Token::Ident(src[i..end].to_string()), i));
            }
            other => {
                return Err(CliError::Parse {
                    message: format!("unexpected character '{other}'"),
                    pos: i,
                })
            }
        }
    }
    Ok(out)
}

pub fn parse(src: &str) -> Result<Expr, CliError> {
    let tokens = lex(src)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        len: src.len(),
    };
    let e = p.additive()?;
    if let Some((_, at)) = p.peek() {
        return Err(CliError::Parse {
            message: "trailing input after expression".to_string(),
            pos: at,
        });
    }
    Ok(e)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<(&Token, usize)> {
        self.tokens.get(self.pos).map(|(t, at)| (t, *at))
    }

    fn bump(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Token, what: &str) -> Result<usize, CliError> {
        match self.bump() {
            Some((t, at)) if &t == want => Ok(at),
            Some((_, at)) => Err(CliError::Parse {
                message: format!("expected {what}"),
                pos: at,
            }),
            None => Err(CliError::Parse {
                message: format!("expected {what}, found end of input"),
                pos: self.len,
            }),
        }
    }

    fn additive(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.multiplicative()?;
        while let Some((t, at)) = self.peek() {
            let op = match t {
                Token::Plus => Op::Add,
                Token::Minus => Op::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.multiplicative()?;
            // spans of binary nodes point at the operator for diagnostics
            let span = Span {
                start: at,
                end: rhs.span().end,
            };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn multiplicative(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.unary()?;
        while let Some((t, at)) = self.peek() {
            let op = match t {
                Token::Star => Op::Mul,
                Token::Slash => Op::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            let span = Span {
                start: at,
                end: rhs.span().end,
            };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, CliError> {
        if let Some((Token::Minus, at)) = self.peek() {
            self.bump();
            let inner = self.unary()?;
            let span = Span {
                start: at,
                end: inner.span().end,
            };
            return Ok(Expr::Neg(Box::new(inner), span));
        }
        self.wedge()
    }

    fn wedge(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.atom()?;
        while let Some((Token::Caret, at)) = self.peek() {
            self.bump();
            let rhs = self.atom()?;
            let span = Span {
                start: at,
                end: rhs.span().end,
            };
            lhs = Expr::Binary(Op::Wedge, Box::new(lhs), Box::new(rhs), span);
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Expr, CliError> {
        match self.bump() {
            Some((Token::Number(n), at)) => Ok(Expr::Number(
                Rational::from_integer(n.clone()),
                Span {
                    start: at,
                    end: at + n.to_string().len(),
                },
            )),
            Some((Token::Ident(name), at)) => {
                let span = Span {
                    start: at,
                    end: at + name.len(),
                };
                if let Some((Token::LParen, _)) = self.peek() {
                    self.bump();
                    let mut args = Vec::new();
                    if !matches!(self.peek(), Some((Token::RParen, _))) {
                        loop {
                            args.push(self.additive()?);
                            match self.peek() {
                                Some((Token::Comma, _)) => {
                                    self.bump();
                                }
                                _ => break,
                            }
                        }
                    }
                    let close = self.expect(&Token::RParen, "')'")?;
                    Ok(Expr::Call(
                        name,
                        args,
                        Span {
                            start: at,
                            end: close + 1,
                        },
                    ))
                } else {
                    Ok(Expr::Ident(name, span))
                }
            }
            Some((Token::LParen, _)) => {
                let inner = self.additive()?;
                self.expect(&Token::RParen, "')'")?;
                Ok(inner)
            }
            Some((t, at)) => Err(CliError::Parse {
                message: format!("unexpected token {t:?}"),
                pos: at,
            }),
            None => Err(CliError::Parse {
                message: "unexpected end of input".to_string(),
                pos: self.len,
            }),
        }
    }
}
