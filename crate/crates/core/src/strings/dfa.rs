use std::collections::HashMap;

use thiserror::Error;

use crate::symbol::{Alphabet, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DfaError {
    #[error("automaton has no states")]
    NoStates,
    #[error("missing transition for state {0} on `{1}`")]
    MissingTransition(String, Symbol),
}

/// A complete deterministic finite automaton.
#[derive(Clone, Debug)]
pub struct Dfa {
    pub name: String,
    pub alphabet: Alphabet,
    pub states: Vec<String>,
    pub initial: usize,
    pub accepting: Vec<bool>,
    delta: Vec<usize>,
}

impl Dfa {
    /// `delta` is keyed by (state, letter index).
    pub fn new(
        name: &str,
        alphabet: Alphabet,
        states: Vec<String>,
        initial: usize,
        accepting: Vec<bool>,
        delta: &HashMap<(usize, usize), usize>,
    ) -> Result<Self, DfaError> {
        if states.is_empty() {
            return Err(DfaError::NoStates);
        }
        let mut table = Vec::with_capacity(states.len() * alphabet.len());
        for q in 0..states.len() {
            for a in 0..alphabet.len() {
                let t = delta
                    .get(&(q, a))
                    .ok_or_else(|| DfaError::MissingTransition(states[q].clone(), alphabet.get(a).clone()))?;
                table.push(*t);
            }
        }
        Ok(Dfa { name: name.into(), alphabet, states, initial, accepting, delta: table })
    }

    pub fn next(&self, q: usize, a: usize) -> usize {
        self.delta[q * self.alphabet.len() + a]
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let mut q = self.initial;
        for s in w {
            q = self.next(q, self.alphabet.index_of(s).expect("letter in alphabet"));
        }
        self.accepting[q]
    }

    /// Words with an even number of occurrences of `letter`.
    pub fn even_count(alphabet: &Alphabet, letter: &Symbol) -> Dfa {
        let mut delta = HashMap::new();
        for q in 0..2 {
            for (a, s) in alphabet.symbols().iter().enumerate() {
                delta.insert((q, a), if s == letter { 1 - q } else { q });
            }
        }
        Dfa::new("even", alphabet.clone(), vec!["even".into(), "odd".into()], 0, vec![true, false], &delta)
            .expect("complete automaton")
    }

    /// Nonempty words starting with `letter`.
    pub fn starts_with(alphabet: &Alphabet, letter: &Symbol) -> Dfa {
        let mut delta = HashMap::new();
        for (a, s) in alphabet.symbols().iter().enumerate() {
            delta.insert((0, a), if s == letter { 1 } else { 2 });
            delta.insert((1, a), 1);
            delta.insert((2, a), 2);
        }
        Dfa::new(
            "starts-with",
            alphabet.clone(),
            vec!["start".into(), "yes".into(), "no".into()],
            0,
            vec![false, true, false],
            &delta,
        )
        .expect("complete automaton")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_a() {
        let ab = Alphabet::from_chars("ab");
        let d = Dfa::even_count(&ab, &Symbol::new("a"));
        assert!(d.accepts(&Word::from_chars("aba")));
        assert!(!d.accepts(&Word::from_chars("ab")));
        assert!(d.accepts(&Word::empty()));
    }
}
