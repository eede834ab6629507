//! Recursive descent parser for `x = <expr>; y = <expr>`.
//!
//! ```text
//! curve   := "x" "=" expr ";" "y" "=" expr [";"]
//! expr    := term (("+" | "-") term)*
//! term    := power (("*" | "/") power)*
//! power   := unary ("^" ["-"] integer)*
//! unary   := "-" unary | primary
//! primary := number | "t" | "pi" | ("sin" | "cos") "(" expr ")" | "(" expr ")"
//! ```

use super::expr::Expr;
use crate::error::{CurveError, Result};

const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text.parse().map_err(|_| CurveError::Syntax {
                line: tl,
                col: tc,
                message: format!("malformed number `{text}`"),
            })?;
            out.push(Token {
                tok: Tok::Num(value),
                line: tl,
                col: tc,
            });
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: tl,
                col: tc,
            });
        } else if "+-*/^();=".contains(c) {
            i += 1;
            out.push(Token {
                tok: Tok::Sym(c),
                line: tl,
                col: tc,
            });
        } else {
            return Err(CurveError::Syntax {
                line: tl,
                col: tc,
                message: format!("unexpected character {c:?}"),
            });
        }
        col += i - start;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, tok: &Token, message: impl Into<String>) -> CurveError {
        CurveError::Syntax {
            line: tok.line,
            col: tok.col,
            message: message.into(),
        }
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        let tok = self.bump();
        if tok.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Err(self.error_at(&tok, format!("expected `{c}`, found {}", Self::describe(&tok.tok))))
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<()> {
        let tok = self.bump();
        match &tok.tok {
            Tok::Ident(s) if s == name => Ok(()),
            other => Err(self.error_at(&tok, format!("expected `{name}`, found {}", Self::describe(other)))),
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let tok = self.peek().clone();
            return Err(self.error_at(&tok, "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        loop {
            match self.peek().tok {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                Tok::Sym('/') => {
                    let slash = self.bump();
                    let rhs = self.power()?;
                    if rhs.depends_on_t() {
                        return Err(self.error_at(&slash, "division by an expression in t is not supported"));
                    }
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.unary()?;
        while self.peek().tok == Tok::Sym('^') {
            let caret = self.bump();
            let negative = if self.peek().tok == Tok::Sym('-') {
                self.bump();
                true
            } else {
                false
            };
            let tok = self.bump();
            let n = match tok.tok {
                Tok::Num(v) if v.fract() == 0.0 && v <= i32::MAX as f64 => v as i32,
                ref other => {
                    return Err(self.error_at(
                        &tok,
                        format!("exponent must be an integer literal, found {}", Self::describe(other)),
                    ))
                }
            };
            let n = if negative { -n } else { n };
            if n < 0 && base.depends_on_t() {
                return Err(self.error_at(&caret, "negative powers of expressions in t are not supported"));
            }
            base = Expr::Pow(Box::new(base), n);
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Sym('-') {
            self.bump();
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        let tok = self.bump();
        match &tok.tok {
            Tok::Num(v) => Ok(Expr::Num(*v)),
            Tok::Ident(name) => match name.as_str() {
                "t" => Ok(Expr::T),
                "pi" => Ok(Expr::Pi),
                "sin" | "cos" => {
                    self.expect_sym('(')?;
                    let arg = self.expr()?;
                    self.expect_sym(')')?;
                    Ok(if name == "sin" {
                        Expr::Sin(Box::new(arg))
                    } else {
                        Expr::Cos(Box::new(arg))
                    })
                }
                _ => Err(CurveError::UnknownIdentifier {
                    name: name.clone(),
                    line: tok.line,
                    col: tok.col,
                }),
            },
            Tok::Sym('(') => {
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            other => Err(self.error_at(&tok, format!("expected an expression, found {}", Self::describe(other)))),
        }
    }
}

/// Parses `x = ...; y = ...`.
pub fn parse_pair(src: &str) -> Result<(Expr, Expr)> {
    let mut p = Parser {
        tokens: lex(src)?,
        pos: 0,
        depth: 0,
    };
    p.expect_ident("x")?;
    p.expect_sym('=')?;
    let x = p.expr()?;
    p.expect_sym(';')?;
    p.expect_ident("y")?;
    p.expect_sym('=')?;
    let y = p.expr()?;
    if p.peek().tok == Tok::Sym(';') {
        p.bump();
    }
    let tok = p.peek().clone();
    if tok.tok != Tok::Eof {
        return Err(p.error_at(&tok, format!("unexpected {} after curve", Parser::describe(&tok.tok))));
    }
    Ok((x, y))
}

/// Parses a single expression.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser {
        tokens: lex(src)?,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    let tok = p.peek().clone();
    if tok.tok != Tok::Eof {
        return Err(p.error_at(&tok, format!("unexpected {}", Parser::describe(&tok.tok))));
    }
    Ok(e)
}
