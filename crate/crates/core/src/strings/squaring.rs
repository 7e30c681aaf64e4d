//! Squaring with underlining, directly and as four register transducers.

use std::collections::HashMap;

use crate::symbol::{Alphabet, Word};

use super::transducer::{reverse_transducer, Item, RegisterTransducer, RtBuilder, RtTransition};

/// Concatenation over `i` of `w` with its `i`-th letter underlined.
pub fn squaring(w: &Word) -> Word {
    let n = w.len();
    let mut out = Word::empty();
    for i in 0..n {
        for (j, s) in w.iter().enumerate() {
            out.push(if i == j { s.underlined() } else { s.clone() });
        }
    }
    out
}

fn single_state(
    name: &str,
    input: &Alphabet,
    output: &Alphabet,
    registers: &[&str],
    out: RegWordSpec,
    updates: impl Fn(usize) -> Vec<Vec<Item>>,
) -> RegisterTransducer {
    let delta: HashMap<(usize, usize), RtTransition> =
        (0..input.len()).map(|a| ((0, a), RtTransition { target: 0, updates: updates(a) })).collect();
    RtBuilder {
        name: name.into(),
        input: input.clone(),
        output: output.clone(),
        registers: registers.iter().map(|s| s.to_string()).collect(),
        states: vec!["q".into()],
        initial: 0,
        output_fn: vec![out],
        delta,
        complete: false,
    }
    .build()
    .expect("well-formed pipeline machine")
}

type RegWordSpec = Vec<Item>;

/// Four register transducers whose composite is `squaring` over `gamma`:
///
/// 1. `O := O P c̲; P := P c`, output `O`: the blocks `w_{<i} c̲_i`;
/// 2. reverse;
/// 3. on `c̲`: `O := O H c̲; H := H c`, on `c`: `O := O c`, output `O`;
/// 4. reverse.
pub fn squaring_pipeline(gamma: &Alphabet) -> [RegisterTransducer; 4] {
    let both = gamma.with_underlined();
    let n = gamma.len();
    let (o, p) = (Item::Reg(0), Item::Reg(1));
    let first = single_state("squaring-1", gamma, &both, &["O", "P"], vec![o.clone()], |a| {
        let c = gamma.get(a).clone();
        vec![vec![o.clone(), p.clone(), Item::Letter(c.underlined())], vec![p.clone(), Item::Letter(c)]]
    });
    let third = single_state("squaring-3", &both, &both, &["O", "H"], vec![o.clone()], |a| {
        let s = both.get(a).clone();
        if a >= n {
            vec![vec![o.clone(), p.clone(), Item::Letter(s.clone())], vec![p.clone(), Item::Letter(s.plain())]]
        } else {
            vec![vec![o.clone(), Item::Letter(s)], vec![p.clone()]]
        }
    });
    [first, reverse_transducer(&both), third, reverse_transducer(&both)]
}

pub fn run_pipeline(machines: &[RegisterTransducer], w: &Word) -> Word {
    machines.iter().fold(w.clone(), |acc, m| m.run(&acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squaring_example() {
        let w = Word::from_chars("1234");
        let expected: Vec<&str> = "_1 2 3 4 1 _2 3 4 1 2 _3 4 1 2 3 _4".split(' ').collect();
        let got: Vec<String> = squaring(&w).iter().map(|s| s.to_string()).collect();
        assert_eq!(got, expected);
        assert_eq!(squaring(&Word::empty()), Word::empty());
    }

    #[test]
    fn squaring_length() {
        let ab = Alphabet::from_chars("ab");
        for w in ab.words_up_to(6) {
            assert_eq!(squaring(&w).len(), w.len() * w.len());
        }
    }

    #[test]
    fn pipeline_agrees() {
        let g = Alphabet::from_chars("12");
        let p = squaring_pipeline(&g);
        for w in g.words_up_to(5) {
            assert_eq!(run_pipeline(&p, &w), squaring(&w), "{w}");
        }
        let g4 = Alphabet::from_chars("1234");
        let w = Word::from_chars("1234");
        assert_eq!(run_pipeline(&squaring_pipeline(&g4), &w), squaring(&w));
    }
}
