//! Reader for the QASM subset written by the exporter.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::gates;
use crate::sim::Circuit;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Str(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            let (ln, col) = (li + 1, i + 1);
            if ch.is_whitespace() {
                i += 1;
            } else if ch == '/' && chars.get(i + 1) == Some(&'/') {
                break;
            } else if ch.is_ascii_alphabetic() || ch == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Ident(s),
                    line: ln,
                    col,
                });
            } else if ch.is_ascii_digit() || ch == '.' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    i += 1;
                    if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                        i += 1;
                    }
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let s: String = chars[start..i].iter().collect();
                let v = s
                    .parse::<f64>()
                    .map_err(|_| err(ln, col, format!("malformed number `{s}`")))?;
                out.push(Token {
                    tok: Tok::Num(v),
                    line: ln,
                    col,
                });
            } else if ch == '"' {
                let start = i + 1;
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(err(ln, col, "unterminated string"));
                }
                let s: String = chars[start..i].iter().collect();
                i += 1;
                out.push(Token {
                    tok: Tok::Str(s),
                    line: ln,
                    col,
                });
            } else if "()[],;+-*/>{}".contains(ch) {
                out.push(Token {
                    tok: Tok::Sym(ch),
                    line: ln,
                    col,
                });
                i += 1;
            } else {
                return Err(err(ln, col, format!("unexpected character `{ch}`")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Position reported when input runs out.
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.col))
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(err(l, c, message))
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn sym(&mut self, s: char) -> Result<()> {
        match self.peek() {
            Some(Token {
                tok: Tok::Sym(c), ..
            }) if *c == s => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected `{s}`")),
        }
    }

    fn is_sym(&self, s: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(c), .. }) if *c == s)
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s), ..
            }) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail("expected an identifier"),
        }
    }

    fn index(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Token {
                tok: Tok::Num(v), ..
            }) if v.fract() == 0.0 && *v >= 0.0 => {
                let v = *v as usize;
                self.pos += 1;
                Ok(v)
            }
            _ => self.fail("expected a non-negative integer"),
        }
    }

    fn expr(&mut self) -> Result<f64> {
        let mut v = self.term()?;
        loop {
            if self.is_sym('+') {
                self.pos += 1;
                v += self.term()?;
            } else if self.is_sym('-') {
                self.pos += 1;
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64> {
        let mut v = self.unary()?;
        loop {
            if self.is_sym('*') {
                self.pos += 1;
                v *= self.unary()?;
            } else if self.is_sym('/') {
                self.pos += 1;
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64> {
        if self.is_sym('-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        if self.is_sym('+') {
            self.pos += 1;
            return self.unary();
        }
        if self.is_sym('(') {
            self.pos += 1;
            let v = self.expr()?;
            self.sym(')')?;
            return Ok(v);
        }
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(v)
            }
            Some(Tok::Ident(s)) if s == "pi" => {
                self.pos += 1;
                Ok(PI)
            }
            _ => self.fail("expected an angle expression"),
        }
    }

    fn qubit(&mut self, reg: &str, n: usize) -> Result<usize> {
        let (l, c) = self.here();
        let name = self.ident()?;
        if name != reg {
            return Err(err(l, c, format!("unknown register `{name}`")));
        }
        self.sym('[')?;
        let (il, ic) = self.here();
        let q = self.index()?;
        if q >= n {
            return Err(err(
                il,
                ic,
                format!("qubit {q} out of range for {reg}[{n}]"),
            ));
        }
        self.sym(']')?;
        Ok(q)
    }
}

/// Parses QASM written by [`super::export_qasm`] (or any text in the same
/// subset) into a circuit of fixed gates.
pub fn import_qasm(text: &str) -> Result<(Circuit<f64>, usize)> {
    let toks = lex(text)?;
    let end = (text.lines().count().max(1), 1);
    let mut p = Parser { toks, pos: 0, end };

    match p.peek() {
        Some(Token {
            tok: Tok::Ident(s), ..
        }) if s == "OPENQASM" => p.pos += 1,
        _ => return p.fail("missing OPENQASM header"),
    }
    match p.next() {
        Some(Token {
            tok: Tok::Num(v), ..
        }) if v == 2.0 => {}
        Some(t) => return Err(err(t.line, t.col, "only OPENQASM 2.0 is supported")),
        None => return p.fail("missing OPENQASM version"),
    }
    p.sym(';')?;
    if matches!(p.peek(), Some(Token { tok: Tok::Ident(s), .. }) if s == "include") {
        p.pos += 1;
        match p.next() {
            Some(Token {
                tok: Tok::Str(_), ..
            }) => {}
            _ => {
                p.pos -= 1;
                return p.fail("expected an include file name");
            }
        }
        p.sym(';')?;
    }
    match p.peek() {
        Some(Token {
            tok: Tok::Ident(s), ..
        }) if s == "qreg" => p.pos += 1,
        _ => return p.fail("missing qreg declaration"),
    }
    let reg = p.ident()?;
    p.sym('[')?;
    let (nl, nc) = p.here();
    let n = p.index()?;
    if n == 0 {
        return Err(err(nl, nc, "register needs at least one qubit"));
    }
    p.sym(']')?;
    p.sym(';')?;

    let mut circuit = Circuit::new(n);
    while let Some(t) = p.peek().cloned() {
        let Tok::Ident(name) = &t.tok else {
            return p.fail("expected a gate name");
        };
        let arity = match name.as_str() {
            "u3" => 3,
            "rz" => 1,
            "sx" | "x" | "cx" => 0,
            "qreg" => return p.fail("only one qreg is supported"),
            other => return p.fail(format!("unsupported statement `{other}`")),
        };
        p.pos += 1;
        let mut args = Vec::new();
        if p.is_sym('(') {
            p.pos += 1;
            loop {
                args.push(p.expr()?);
                if p.is_sym(',') {
                    p.pos += 1;
                } else {
                    break;
                }
            }
            p.sym(')')?;
        }
        if args.len() != arity {
            return Err(err(
                t.line,
                t.col,
                format!("`{name}` takes {arity} parameter(s), got {}", args.len()),
            ));
        }
        if let Some(bad) = args.iter().find(|a| !a.is_finite()) {
            return Err(err(t.line, t.col, format!("non-finite angle {bad}")));
        }
        let q0 = p.qubit(&reg, n)?;
        if name == "cx" {
            p.sym(',')?;
            let q1 = p.qubit(&reg, n)?;
            if q0 == q1 {
                return Err(err(t.line, t.col, "cx control and target coincide"));
            }
            circuit.push_cnot(q0, q1);
        } else {
            let m = match name.as_str() {
                "u3" => gates::u3(args[0], args[1], args[2]),
                "rz" => gates::rz(args[0]),
                "sx" => gates::sx(),
                _ => crate::linalg::pauli::x(),
            };
            circuit.push_fixed1q(q0, m)?;
        }
        p.sym(';')?;
    }
    Ok((circuit, n))
}
