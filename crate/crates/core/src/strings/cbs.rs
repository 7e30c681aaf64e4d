//! Composition by substitution.

use thiserror::Error;

use crate::symbol::{Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CbsError {
    #[error("index `{0}` has no function in the family")]
    IndexOutOfFamily(Symbol),
}

pub type StringFn<'a> = &'a (dyn Fn(&Word) -> Word + Sync);

/// `g_{i₁}(w) … g_{i_k}(w)` where `f(w) = i₁ … i_k`.
pub fn cbs(f: StringFn<'_>, family: &[(Symbol, StringFn<'_>)], w: &Word) -> Result<Word, CbsError> {
    let mut out = Word::empty();
    for i in f(w).iter() {
        let g = family
            .iter()
            .find(|(s, _)| s == i)
            .map(|(_, g)| g)
            .ok_or_else(|| CbsError::IndexOutOfFamily(i.clone()))?;
        out.extend(&g(w));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Alphabet;

    #[test]
    fn power_example() {
        let f = |w: &Word| Word::from_symbols(vec![Symbol::new("a"); w.len()]);
        let id = |w: &Word| w.clone();
        let fam: Vec<(Symbol, StringFn)> = vec![(Symbol::new("a"), &id)];
        assert_eq!(cbs(&f, &fam, &Word::from_chars("ab")).unwrap(), Word::from_chars("abab"));
        let none = |_: &Word| Word::empty();
        for w in Alphabet::from_chars("ab").words_up_to(3) {
            assert_eq!(cbs(&none, &fam, &w).unwrap(), Word::empty());
            let expected_len = w.len() * w.len();
            assert_eq!(cbs(&f, &fam, &w).unwrap().len(), expected_len);
        }
        let g = |_: &Word| Word::from_chars("z");
        assert!(cbs(&g, &fam, &Word::from_chars("a")).is_err());
    }
}
