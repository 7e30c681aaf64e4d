use crate::symbol::{Alphabet, Word};

use super::morphism::Morphism;

/// `h′ ∘ h_{w₁} ∘ … ∘ h_{w_n}(d)`.
#[derive(Clone, Debug)]
pub struct Hdt0l {
    pub name: String,
    pub input: Alphabet,
    pub work: Alphabet,
    pub output: Alphabet,
    pub init: Word,
    /// One endomorphism of the working alphabet per input letter.
    pub rules: Vec<Morphism>,
    pub fin: Morphism,
}

impl Hdt0l {
    pub fn run(&self, w: &Word) -> Word {
        let mut x = self.init.clone();
        for s in w.symbols().iter().rev() {
            let i = self.input.index_of(s).expect("input letter in alphabet");
            x = self.rules[i].apply(&x);
        }
        self.fin.apply(&x)
    }

    /// `Δ = {x}`, `d = x`, `h_c(x) = xx` for every input letter, `h′(x) = a`.
    pub fn doubling(input: &Alphabet) -> Hdt0l {
        let work = Alphabet::from_chars("x");
        let output = Alphabet::from_chars("a");
        let dbl = Morphism::new(work.clone(), work.clone(), vec![Word::from_chars("xx")]).expect("valid images");
        Hdt0l {
            name: "doubling".into(),
            input: input.clone(),
            work: work.clone(),
            output: output.clone(),
            init: Word::from_chars("x"),
            rules: vec![dbl; input.len()],
            fin: Morphism::new(work, output, vec![Word::from_chars("a")]).expect("valid images"),
        }
    }

    /// `w ↦ w · reverse(w)` as an HDT0L system. The working word is
    /// bracketed by markers `L … R`; each letter is inserted just inside them.
    pub fn palindrome(sigma: &Alphabet) -> Hdt0l {
        let mut work_syms: Vec<String> = sigma.symbols().iter().map(|s| s.to_string()).collect();
        work_syms.push("L".into());
        work_syms.push("R".into());
        let work = Alphabet::new(work_syms.iter().map(String::as_str)).expect("markers are fresh");
        let (l, r) = (work.get(sigma.len()).clone(), work.get(sigma.len() + 1).clone());
        let letters = || sigma.symbols().iter().map(|s| Word::from_symbols(vec![s.clone()]));
        let rules = sigma
            .symbols()
            .iter()
            .map(|c| {
                let mut images: Vec<Word> = letters().collect();
                images.push(Word::from_symbols(vec![l.clone(), c.clone()]));
                images.push(Word::from_symbols(vec![c.clone(), r.clone()]));
                Morphism::new(work.clone(), work.clone(), images).expect("valid images")
            })
            .collect();
        let mut fin_images: Vec<Word> = letters().collect();
        fin_images.push(Word::empty());
        fin_images.push(Word::empty());
        Hdt0l {
            name: "palindrome".into(),
            input: sigma.clone(),
            work: work.clone(),
            output: sigma.clone(),
            init: Word::from_symbols(vec![l, r]),
            rules,
            fin: Morphism::new(work, sigma.clone(), fin_images).expect("valid images"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_examples() {
        let ab = Alphabet::from_chars("ab");
        let sys = Hdt0l::doubling(&ab);
        assert_eq!(sys.run(&Word::from_chars("bb")), Word::from_chars("aaaa"));
        assert_eq!(sys.run(&Word::empty()), Word::from_chars("a"));
        for w in ab.words_up_to(4) {
            assert_eq!(sys.run(&w).len(), 1 << w.len());
        }
    }

    #[test]
    fn palindrome_system() {
        let ab = Alphabet::from_chars("ab");
        let sys = Hdt0l::palindrome(&ab);
        for w in ab.words_up_to(5) {
            assert_eq!(sys.run(&w), w.concat(&w.reversed()));
        }
    }

    #[test]
    fn run_is_a_monoid_action() {
        // The working word after w·v is H(w)(H(v)(d)).
        let ab = Alphabet::from_chars("ab");
        let sys = Hdt0l::palindrome(&ab);
        let act = |w: &Word, start: &Word| {
            let mut x = start.clone();
            for s in w.symbols().iter().rev() {
                x = sys.rules[ab.index_of(s).unwrap()].apply(&x);
            }
            x
        };
        for w in ab.words_up_to(3) {
            for v in ab.words_up_to(2) {
                let whole = act(&w.concat(&v), &sys.init);
                assert_eq!(whole, act(&w, &act(&v, &sys.init)));
                assert_eq!(sys.run(&w.concat(&v)), sys.fin.apply(&whole));
            }
        }
    }
}
