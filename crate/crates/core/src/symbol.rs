//! Symbols, words and ordered alphabets shared by every machine model.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A letter of some alphabet. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(s: &str) -> Self {
        Symbol(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The underlined copy `_c` of this letter, used by squaring.
    pub fn underlined(&self) -> Symbol {
        Symbol::new(&format!("_{}", self.0))
    }

    pub fn is_underlined(&self) -> bool {
        self.0.starts_with('_')
    }

    /// The letter with one level of underlining removed, if any.
    pub fn plain(&self) -> Symbol {
        match self.0.strip_prefix('_') {
            Some(rest) => Symbol::new(rest),
            None => self.clone(),
        }
    }

    /// True when the symbol can be embedded verbatim in a lambda-term identifier.
    pub fn is_ident_safe(&self) -> bool {
        let mut chars = self.0.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("alphabet must not be empty")]
    Empty,
    #[error("duplicate symbol `{0}` in alphabet")]
    Duplicate(Symbol),
    #[error("symbol `{0}` is not in the alphabet")]
    SymbolNotInAlphabet(Symbol),
}

/// An ordered finite set of distinct symbols. The order fixes the argument
/// order of every Church encoding built over it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<Symbol>,
    {
        let symbols: Vec<Symbol> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(AlphabetError::Empty);
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(AlphabetError::Duplicate(s.clone()));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Convenience for tests and examples: one symbol per character.
    pub fn from_chars(s: &str) -> Self {
        Alphabet::new(s.chars().map(|c| Symbol::new(&c.to_string())))
            .expect("from_chars needs distinct characters")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn get(&self, i: usize) -> &Symbol {
        &self.symbols[i]
    }

    pub fn index_of(&self, s: &Symbol) -> Option<usize> {
        self.symbols.iter().position(|x| x == s)
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.index_of(s).is_some()
    }

    pub fn check_word(&self, w: &Word) -> Result<(), AlphabetError> {
        for s in w.iter() {
            if !self.contains(s) {
                return Err(AlphabetError::SymbolNotInAlphabet(s.clone()));
            }
        }
        Ok(())
    }

    /// `Γ ∪ Γ̲`: the alphabet followed by underlined copies of each letter.
    pub fn with_underlined(&self) -> Alphabet {
        let mut symbols = self.symbols.clone();
        symbols.extend(self.symbols.iter().map(Symbol::underlined));
        Alphabet { symbols }
    }

    /// Letters all one character long, so words print without separators.
    pub fn is_single_char(&self) -> bool {
        self.symbols.iter().all(|s| s.as_str().chars().count() == 1)
    }

    /// Every word of length `0..=max_len` in length-then-lexicographic order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.len());
            for w in &layer {
                for s in &self.symbols {
                    let mut v = w.clone();
                    v.push(s.clone());
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Parse a word literal. Single-character alphabets may write letters
    /// back to back; otherwise letters are whitespace separated.
    pub fn parse_word(&self, text: &str) -> Result<Word, AlphabetError> {
        let text = text.trim();
        let trimmed = text.trim_matches('"');
        let mut word = Word::empty();
        if trimmed.is_empty() || trimmed == "ε" || trimmed == "eps" {
            return Ok(word);
        }
        if self.is_single_char() && !trimmed.contains(char::is_whitespace) {
            for c in trimmed.chars() {
                word.push(Symbol::new(&c.to_string()));
            }
        } else {
            for tok in trimmed.split_whitespace() {
                word.push(Symbol::new(tok));
            }
        }
        self.check_word(&word)?;
        Ok(word)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.symbols.iter().map(Symbol::as_str).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite sequence of symbols.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_symbols(v: Vec<Symbol>) -> Self {
        Word(v)
    }

    /// One symbol per character.
    pub fn from_chars(s: &str) -> Self {
        Word(s.chars().map(|c| Symbol::new(&c.to_string())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s)
    }

    pub fn extend(&mut self, other: &Word) {
        self.0.extend(other.0.iter().cloned())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend(other);
        w
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().cloned().collect())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.0.iter()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<T: IntoIterator<Item = Symbol>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let compact = self.0.iter().all(|s| s.as_str().chars().count() == 1);
        let parts: Vec<&str> = self.0.iter().map(Symbol::as_str).collect();
        if compact {
            f.write_str(&parts.concat())
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_rejects_duplicates_and_empty() {
        assert_eq!(Alphabet::new(Vec::<&str>::new()), Err(AlphabetError::Empty));
        assert!(matches!(Alphabet::new(["a", "a"]), Err(AlphabetError::Duplicate(_))));
    }

    #[test]
    fn word_enumeration_counts() {
        let ab = Alphabet::from_chars("ab");
        assert_eq!(ab.words_up_to(3).len(), 1 + 2 + 4 + 8);
    }

    #[test]
    fn parse_word_literals() {
        let ab = Alphabet::from_chars("ab");
        assert_eq!(ab.parse_word("\"abba\"").unwrap(), Word::from_chars("abba"));
        assert_eq!(ab.parse_word("").unwrap(), Word::empty());
        assert!(ab.parse_word("abc").is_err());
        let multi = Alphabet::new(["foo", "bar"]).unwrap();
        let w = multi.parse_word("foo bar foo").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.to_string(), "foo bar foo");
    }

    #[test]
    fn underlining() {
        let c = Symbol::new("1");
        assert_eq!(c.underlined().as_str(), "_1");
        assert_eq!(c.underlined().plain(), c);
        assert!(Symbol::new("a_1").is_ident_safe());
        assert!(!Symbol::new("1").is_ident_safe());
    }
}
