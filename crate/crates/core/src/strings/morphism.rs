use std::fmt;

use thiserror::Error;

use crate::symbol::{Alphabet, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("no image given for `{0}`")]
    MissingImage(Symbol),
    #[error("image symbol `{0}` is not in the target alphabet")]
    BadImage(Symbol),
    #[error("`{0}` is not in the source alphabet")]
    NotInSource(Symbol),
}

/// A monoid morphism `source* → target*`, given on letters.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    pub source: Alphabet,
    pub target: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    /// `images[i]` is the image of the `i`-th source letter.
    pub fn new(source: Alphabet, target: Alphabet, images: Vec<Word>) -> Result<Self, MorphismError> {
        if images.len() < source.len() {
            return Err(MorphismError::MissingImage(source.get(images.len()).clone()));
        }
        for w in &images {
            for s in w {
                if !target.contains(s) {
                    return Err(MorphismError::BadImage(s.clone()));
                }
            }
        }
        Ok(Morphism { source, target, images })
    }

    pub fn from_pairs(source: Alphabet, target: Alphabet, pairs: &[(Symbol, Word)]) -> Result<Self, MorphismError> {
        let mut images = Vec::with_capacity(source.len());
        for s in source.symbols() {
            match pairs.iter().find(|(a, _)| a == s) {
                Some((_, w)) => images.push(w.clone()),
                None => return Err(MorphismError::MissingImage(s.clone())),
            }
        }
        for (a, _) in pairs {
            if !source.contains(a) {
                return Err(MorphismError::NotInSource(a.clone()));
            }
        }
        Morphism::new(source, target, images)
    }

    pub fn identity(sigma: &Alphabet) -> Self {
        let images = sigma.symbols().iter().map(|s| Word::from_symbols(vec![s.clone()])).collect();
        Morphism { source: sigma.clone(), target: sigma.clone(), images }
    }

    pub fn image(&self, i: usize) -> &Word {
        &self.images[i]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Letterwise image concatenation. Panics on letters outside the source.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Word::empty();
        for s in w {
            out.extend(&self.images[self.source.index_of(s).expect("letter in source alphabet")]);
        }
        out
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Morphism {
        let images = self.images.iter().map(|w| other.apply(w)).collect();
        Morphism { source: self.source.clone(), target: other.target.clone(), images }
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .source
            .symbols()
            .iter()
            .zip(&self.images)
            .map(|(s, w)| format!("{s} -> {w}"))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_examples() {
        let ab = Alphabet::from_chars("ab");
        let phi = Morphism::new(ab.clone(), ab.clone(), vec![Word::from_chars("ab"), Word::empty()]).unwrap();
        assert_eq!(phi.apply(&Word::from_chars("ba")), Word::from_chars("ab"));
        assert_eq!(phi.apply(&Word::empty()), Word::empty());
        let id = Morphism::identity(&ab);
        for w in ab.words_up_to(4) {
            assert_eq!(id.apply(&w), w);
            assert_eq!(phi.then(&phi).apply(&w), phi.apply(&phi.apply(&w)));
        }
    }

    #[test]
    fn rejects_bad_images() {
        let a = Alphabet::from_chars("a");
        assert!(Morphism::new(a.clone(), a.clone(), vec![Word::from_chars("b")]).is_err());
        assert!(Morphism::new(a.clone(), a, vec![]).is_err());
    }
}
