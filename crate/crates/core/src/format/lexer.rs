//! Tokens of the machine description files.

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub line: usize,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

const SINGLE: &[char] = &['{', '}', ';', ',', ':', '~', '[', ']', '(', ')', '='];

/// Split into words and punctuation; `#` comments run to the end of the line.
pub fn tokenize(src: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = text.chars().collect();
        let mut k = 0;
        while k < chars.len() {
            let c = chars[k];
            if c.is_whitespace() {
                k += 1;
            } else if (c == '-' && chars.get(k + 1) == Some(&'>')) || (c == ':' && chars.get(k + 1) == Some(&'=')) {
                out.push(Token { text: chars[k..k + 2].iter().collect(), line });
                k += 2;
            } else if SINGLE.contains(&c) {
                out.push(Token { text: c.to_string(), line });
                k += 1;
            } else {
                let start = k;
                while k < chars.len()
                    && !chars[k].is_whitespace()
                    && !SINGLE.contains(&chars[k])
                    && !(chars[k] == '-' && chars.get(k + 1) == Some(&'>'))
                {
                    k += 1;
                }
                out.push(Token { text: chars[start..k].iter().collect(), line });
            }
        }
    }
    out
}

/// A cursor over tokens.
pub struct Tokens {
    toks: Rc<[Token]>,
    pos: usize,
    last_line: usize,
}

impl Tokens {
    pub fn new(toks: Vec<Token>) -> Self {
        let last_line = toks.last().map(|t| t.line).unwrap_or(1);
        Tokens { toks: toks.into(), pos: 0, last_line }
    }

    pub fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|t| t.text.as_str())
    }

    pub fn peek_at(&self, k: usize) -> Option<&str> {
        self.toks.get(self.pos + k).map(|t| t.text.as_str())
    }

    pub fn line(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.line).unwrap_or(self.last_line)
    }

    pub fn error(&self, message: impl Into<String>) -> FormatError {
        FormatError { line: self.line(), message: message.into() }
    }

    pub fn next(&mut self) -> Result<String, FormatError> {
        let t = self.toks.get(self.pos).ok_or_else(|| self.error("unexpected end of input"))?;
        self.pos += 1;
        Ok(t.text.clone())
    }

    pub fn eat(&mut self, s: &str) -> bool {
        if self.peek() == Some(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, s: &str) -> Result<(), FormatError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`, found `{}`", self.peek().unwrap_or("end of input"))))
        }
    }

    /// Current position, for re-reading a span later with [`Tokens::fork`].
    pub fn pos_marker(&self) -> usize {
        self.pos
    }

    pub fn fork(&self, pos: usize) -> Tokens {
        Tokens { toks: self.toks.clone(), pos, last_line: self.last_line }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_punctuation() {
        let t: Vec<String> = tokenize("delta q a -> q { X := X a ; Y := a( X< , () ) } # c").into_iter().map(|t| t.text).collect();
        assert_eq!(t, ["delta", "q", "a", "->", "q", "{", "X", ":=", "X", "a", ";", "Y", ":=", "a", "(", "X<", ",", "(", ")", ")", "}"]);
    }
}
