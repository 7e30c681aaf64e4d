//! Text syntax for simple types and terms.
//!
//! ```text
//! t    ::= ident | '\' ident [':' type] '.' t | t t | '(' t ')'
//! type ::= 'o' | type '->' type | '(' type ')'
//! ```
//! `λ` may replace `\`, `→` may replace `->`, and `#` starts a line comment.

use std::sync::Arc;

use thiserror::Error;

use super::term::{Name, Term};
use super::types::SimpleType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Character cursor shared by the term parsers of both calculi.
pub(crate) struct Cursor {
    chars: Vec<char>,
    pub(crate) pos: usize,
}

impl Cursor {
    pub(crate) fn new(src: &str) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0 }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..self.pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        ParseError { line, column, message: message.into() }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c == '#' {
                while self.pos < self.chars.len() && self.chars[self.pos] != '\n' {
                    self.pos += 1;
                }
            } else if c.is_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    pub(crate) fn peek_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let mut i = self.pos;
        for c in s.chars() {
            if self.chars.get(i) != Some(&c) {
                return false;
            }
            i += 1;
        }
        true
    }

    pub(crate) fn eat(&mut self, s: &str) -> bool {
        if self.peek_str(s) {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                while self.pos < self.chars.len() && is_ident_char(self.chars[self.pos]) {
                    self.pos += 1;
                }
                Ok(self.chars[start..self.pos].iter().collect())
            }
            _ => Err(self.error("expected an identifier")),
        }
    }

    pub(crate) fn peek_ident(&mut self) -> bool {
        matches!(self.peek(), Some(c) if is_ident_start(c))
    }
}

fn parse_type_inner(c: &mut Cursor) -> Result<SimpleType, ParseError> {
    let dom = match c.peek() {
        Some('(') => {
            c.expect("(")?;
            let t = parse_type_inner(c)?;
            c.expect(")")?;
            t
        }
        Some('o') => {
            let w = c.ident()?;
            if w != "o" {
                return Err(c.error(format!("unknown base type `{w}`")));
            }
            SimpleType::Base
        }
        _ => return Err(c.error("expected a type")),
    };
    if c.eat("->") || c.eat("→") {
        let cod = parse_type_inner(c)?;
        Ok(SimpleType::arrow(dom, cod))
    } else {
        Ok(dom)
    }
}

pub fn parse_type(src: &str) -> Result<SimpleType, ParseError> {
    let mut c = Cursor::new(src);
    let t = parse_type_inner(&mut c)?;
    if !c.at_end() {
        return Err(c.error("trailing input after type"));
    }
    Ok(t)
}

fn parse_abs(c: &mut Cursor) -> Result<Term, ParseError> {
    let mut binders: Vec<(Name, Option<SimpleType>)> = Vec::new();
    loop {
        let x = c.ident()?;
        let ann = if c.eat(":") { Some(parse_type_inner(c)?) } else { None };
        binders.push((Arc::from(x), ann.clone()));
        if ann.is_some() || !c.peek_ident() {
            break;
        }
    }
    c.expect(".")?;
    let mut body = parse_term_inner(c)?;
    for (x, ann) in binders.into_iter().rev() {
        body = Term::Abs(x, ann, Arc::new(body));
    }
    Ok(body)
}

fn parse_term_inner(c: &mut Cursor) -> Result<Term, ParseError> {
    let mut acc: Option<Term> = None;
    loop {
        let mut bare_abs = false;
        let next = match c.peek() {
            Some('\\') | Some('λ') => {
                c.pos += 1;
                bare_abs = true;
                Some(parse_abs(c)?)
            }
            Some('(') => {
                c.expect("(")?;
                let t = parse_term_inner(c)?;
                c.expect(")")?;
                Some(t)
            }
            Some(ch) if is_ident_start(ch) => Some(Term::Var(Arc::from(c.ident()?))),
            _ => None,
        };
        match next {
            None => break,
            Some(t) => {
                acc = Some(match acc {
                    None => t,
                    Some(f) => Term::App(Arc::new(f), Arc::new(t)),
                });
                // An abstraction extends as far right as possible.
                if bare_abs {
                    break;
                }
            }
        }
    }
    acc.ok_or_else(|| c.error("expected a term"))
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut c = Cursor::new(src);
    let t = parse_term_inner(&mut c)?;
    if !c.at_end() {
        return Err(c.error("trailing input after term"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stlc::term::{app, lams, var};

    #[test]
    fn parses_numerals_and_application() {
        let t = parse_term("\\f. \\x. f (f x)").unwrap();
        assert!(t.alpha_eq(&lams(&["f", "x"], app(var("f"), app(var("f"), var("x"))))));
        let t = parse_term("λf x. f x  # trailing comment").unwrap();
        assert!(t.alpha_eq(&lams(&["f", "x"], app(var("f"), var("x")))));
        assert!(parse_term("a b c").unwrap().alpha_eq(&app(app(var("a"), var("b")), var("c"))));
    }

    #[test]
    fn types_are_right_associative() {
        let t = parse_type("(o -> o) -> o -> o").unwrap();
        assert_eq!(t, SimpleType::nat());
        assert_eq!(parse_type("o → o").unwrap().to_string(), "o -> o");
    }

    #[test]
    fn annotations() {
        let t = parse_term("\\x:o -> o. x").unwrap();
        match t {
            Term::Abs(_, Some(ty), _) => assert_eq!(ty.to_string(), "o -> o"),
            _ => panic!("annotation lost"),
        }
    }

    #[test]
    fn print_parse_roundtrip() {
        for src in ["\\x. x", "(\\x. x x) (\\y. y)", "f (\\x:(o -> o) -> o. x) z", "\\f. \\x'. f (f x')"] {
            let t = parse_term(src).unwrap();
            let again = parse_term(&t.to_string()).unwrap();
            assert!(t.alpha_eq(&again), "{src}");
        }
        assert!(parse_term("\\x. ").is_err());
        assert!(parse_term("(x").is_err());
    }
}
