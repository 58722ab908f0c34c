//! Recursive-descent parser for the expression language.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | 'lam' | '(' expr ')'
//!         | 'a' '(' label ')' | 'ad' '(' label ')' | 'phi' '(' label ')'
//!         | 'form' '(' list ';' list ')'
//! label  := (IDENT | 'xi' '(' list ';' list ')') '*'*
//! list   := (label (',' label)*)?
//! ```

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;

use crate::expr::{FormFactor, Polynomial};
use crate::label::{canonical_label, Label, Mode};
use crate::rational::Rational;

const KEYWORDS: [&str; 6] = ["a", "ad", "phi", "form", "xi", "lam"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: expected {}, found {found}", expected.join(" | "))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown symbol `{name}` at {line}:{column}")]
    UnknownSymbol {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("{what} at {line}:{column}")]
    Invalid {
        what: &'static str,
        line: usize,
        column: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => alloc::format!("`{s}`"),
        Tok::Int(s) => alloc::format!("`{s}`"),
        Tok::Sym(c) => alloc::format!("`{c}`"),
        Tok::Eof => "end of input".to_owned(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1usize, 1usize);
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            column += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                column: c0,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            column += i - start;
            out.push(Token {
                tok: Tok::Int(chars[start..i].iter().collect()),
                line: l0,
                column: c0,
            });
            continue;
        }
        if "+-*/^(),;".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line: l0,
                column: c0,
            });
            column += 1;
            i += 1;
            continue;
        }
        return Err(ParseError::Syntax {
            line: l0,
            column: c0,
            expected: alloc::vec!["expression"],
            found: alloc::format!("`{c}`"),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    mode: Mode,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        let t = self.peek();
        ParseError::Syntax {
            line: t.line,
            column: t.column,
            expected,
            found: describe(&t.tok),
        }
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: char, name: &'static str) -> Result<(), ParseError> {
        if self.at_sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(alloc::vec![name]))
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.at_sym('+') {
                self.bump();
                acc = acc + self.term()?;
            } else if self.at_sym('-') {
                self.bump();
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while self.at_sym('*') {
            self.bump();
            acc = acc * self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.at_sym('-') {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if !self.at_sym('^') {
            return Ok(base);
        }
        self.bump();
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(s) => {
                self.bump();
                let n: u32 = s.parse().map_err(|_| ParseError::Invalid {
                    what: "exponent too large",
                    line: t.line,
                    column: t.column,
                })?;
                Ok(base.pow(n))
            }
            _ => Err(self.error(alloc::vec!["integer exponent"])),
        }
    }

    fn int(&mut self, s: &str, t: &Token) -> Result<i128, ParseError> {
        s.parse().map_err(|_| ParseError::Invalid {
            what: "integer literal too large",
            line: t.line,
            column: t.column,
        })
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(s) => {
                self.bump();
                let n = self.int(s, &t)?;
                let mut d = 1;
                if self.at_sym('/') {
                    self.bump();
                    let td = self.peek().clone();
                    match &td.tok {
                        Tok::Int(ds) => {
                            self.bump();
                            d = self.int(ds, &td)?;
                            if d == 0 {
                                return Err(ParseError::Invalid {
                                    what: "zero denominator",
                                    line: td.line,
                                    column: td.column,
                                });
                            }
                        }
                        _ => return Err(self.error(alloc::vec!["denominator"])),
                    }
                }
                Ok(Polynomial::constant(Rational::new(n, d)))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')', "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "lam" => Ok(Polynomial::lam()),
                    "a" | "ad" | "phi" => {
                        self.expect_sym('(', "`(`")?;
                        let l = self.label()?;
                        self.expect_sym(')', "`)`")?;
                        Ok(match name.as_str() {
                            "a" => Polynomial::annihilator(&l, self.mode),
                            "ad" => Polynomial::creator(&l, self.mode),
                            _ => Polynomial::field(&l, self.mode),
                        })
                    }
                    "form" => {
                        self.expect_sym('(', "`(`")?;
                        let (anti, lin) = self.slot_lists()?;
                        self.expect_sym(')', "`)`")?;
                        if anti.len() + lin.len() < 2 {
                            return Err(ParseError::Invalid {
                                what: "form needs at least two arguments",
                                line: t.line,
                                column: t.column,
                            });
                        }
                        Ok(Polynomial::form(FormFactor::new(anti, lin, self.mode)))
                    }
                    "xi" => Err(ParseError::Invalid {
                        what: "xi is a label, not an operator expression",
                        line: t.line,
                        column: t.column,
                    }),
                    _ => Err(ParseError::UnknownSymbol {
                        name: name.clone(),
                        line: t.line,
                        column: t.column,
                    }),
                }
            }
            _ => Err(self.error(alloc::vec![
                "number", "`lam`", "`a`", "`ad`", "`phi`", "`form`", "`(`", "`-`"
            ])),
        }
    }

    fn slot_lists(&mut self) -> Result<(Vec<Label>, Vec<Label>), ParseError> {
        let anti = self.list()?;
        self.expect_sym(';', "`;`")?;
        let lin = self.list()?;
        Ok((anti, lin))
    }

    fn list(&mut self) -> Result<Vec<Label>, ParseError> {
        let mut out = Vec::new();
        if !matches!(self.peek().tok, Tok::Ident(_)) {
            return Ok(out);
        }
        out.push(self.label()?);
        while self.at_sym(',') {
            self.bump();
            out.push(self.label()?);
        }
        Ok(out)
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        let t = self.peek().clone();
        let mut l = match &t.tok {
            Tok::Ident(name) if name == "xi" => {
                self.bump();
                self.expect_sym('(', "`(`")?;
                let (anti, lin) = self.slot_lists()?;
                self.expect_sym(')', "`)`")?;
                if anti.len() + lin.len() < 2 {
                    return Err(ParseError::Invalid {
                        what: "xi needs at least two arguments",
                        line: t.line,
                        column: t.column,
                    });
                }
                Label::xi(anti, lin)
            }
            Tok::Ident(name) if KEYWORDS.contains(&name.as_str()) => {
                return Err(ParseError::Invalid {
                    what: "keyword used as a label",
                    line: t.line,
                    column: t.column,
                })
            }
            Tok::Ident(name) => {
                self.bump();
                Label::external(name)
            }
            _ => return Err(self.error(alloc::vec!["label"])),
        };
        while self.at_sym('*') {
            self.bump();
            l = l.star();
        }
        Ok(canonical_label(&l, self.mode))
    }
}

/// Parses `text` into a canonical polynomial.
pub fn parse(text: &str, mode: Mode) -> Result<Polynomial, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, mode };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error(alloc::vec!["`+`", "`-`", "`*`", "end of input"]));
    }
    Ok(e)
}

/// Parses a single label such as `f*` or `xi(g;f)`.
pub fn parse_label(text: &str, mode: Mode) -> Result<Label, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, mode };
    let l = p.label()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error(alloc::vec!["end of input"]));
    }
    Ok(l)
}
