//! Seeded random machines and terms for the differential suites.
//!
//! Everything is drawn from a ChaCha stream, so a seed fixes the output on
//! every platform.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::stlc::normalize::is_normal;
use crate::stlc::term::{app, lam, var, Term};
use crate::stlc::{infer_type, TypingContext};
use crate::strings::dfa::Dfa;
use crate::strings::transducer::{Item, RegWord, RegisterTransducer, RtBuilder, RtTransition};
use crate::symbol::{Alphabet, Symbol};

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size bounds of generated machines.
#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub max_states: usize,
    pub max_registers: usize,
    /// Upper bound on letters added to one update or output word.
    pub max_letters: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { max_states: 3, max_registers: 3, max_letters: 2 }
    }
}

const REGISTER_NAMES: [&str; 6] = ["X", "Y", "Z", "U", "V", "W"];

/// Shuffle `regs` together with up to `max_letters` random output letters.
fn mix(rng: &mut GenRng, regs: Vec<usize>, output: &Alphabet, max_letters: usize) -> RegWord {
    let mut w: RegWord = regs.into_iter().map(Item::Reg).collect();
    for _ in 0..rng.gen_range(0..=max_letters) {
        let c = output.get(rng.gen_range(0..output.len())).clone();
        let at = rng.gen_range(0..=w.len());
        w.insert(at, Item::Letter(c));
    }
    w
}

/// Each register goes to at most one of `slots` words.
fn copyless_split(rng: &mut GenRng, k: usize, slots: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); slots];
    for r in 0..k {
        let s = rng.gen_range(0..=slots);
        if s < slots {
            out[s].push(r);
        }
    }
    out
}

/// A random register transducer; with `copyless` set, every update and
/// every output word uses each register at most once.
pub fn random_rt(rng: &mut GenRng, name: &str, input: &Alphabet, output: &Alphabet, p: GenParams, copyless: bool) -> RegisterTransducer {
    let n = rng.gen_range(1..=p.max_states.max(1));
    let k = rng.gen_range(0..=p.max_registers.min(REGISTER_NAMES.len()));
    let regs_for = |rng: &mut GenRng, slots: usize| -> Vec<Vec<usize>> {
        if copyless {
            copyless_split(rng, k, slots)
        } else {
            (0..slots).map(|_| (0..rng.gen_range(0..=k + 1)).filter(|_| k > 0).map(|_| rng.gen_range(0..k)).collect()).collect()
        }
    };
    let mut delta = HashMap::new();
    for q in 0..n {
        for a in 0..input.len() {
            let updates = regs_for(rng, k).into_iter().map(|rs| mix(rng, rs, output, p.max_letters)).collect();
            delta.insert((q, a), RtTransition { target: rng.gen_range(0..n), updates });
        }
    }
    let output_fn = (0..n)
        .map(|_| {
            let rs = regs_for(rng, 1).pop().unwrap_or_default();
            mix(rng, rs, output, p.max_letters)
        })
        .collect();
    RtBuilder {
        name: name.into(),
        input: input.clone(),
        output: output.clone(),
        registers: REGISTER_NAMES[..k].iter().map(|r| r.to_string()).collect(),
        states: (0..n).map(|q| format!("q{q}")).collect(),
        initial: 0,
        output_fn,
        delta,
        complete: false,
    }
    .build()
    .expect("generated transducers are well formed")
}

pub fn random_dfa(rng: &mut GenRng, name: &str, alphabet: &Alphabet, max_states: usize) -> Dfa {
    let n = rng.gen_range(1..=max_states.max(1));
    let mut delta = HashMap::new();
    for q in 0..n {
        for a in 0..alphabet.len() {
            delta.insert((q, a), rng.gen_range(0..n));
        }
    }
    let accepting = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    Dfa::new(name, alphabet.clone(), (0..n).map(|q| format!("s{q}")).collect(), 0, accepting, &delta).expect("total")
}

/// A composition-by-substitution instance: an outer SST into the index
/// alphabet and one SST per index.
pub struct CbsInstance {
    pub f: RegisterTransducer,
    pub family: Vec<(Symbol, RegisterTransducer)>,
}

pub fn random_cbs(rng: &mut GenRng, gamma: &Alphabet, index: &Alphabet, sigma: &Alphabet, p: GenParams) -> CbsInstance {
    let f = random_rt(rng, "outer", gamma, index, p, true);
    let family = index.symbols().iter().map(|i| (i.clone(), random_rt(rng, &format!("g_{i}"), gamma, sigma, p, true))).collect();
    CbsInstance { f, family }
}

fn random_term(rng: &mut GenRng, scope: &mut Vec<String>, depth: usize, counter: &mut usize) -> Term {
    let choice = if depth == 0 { 0 } else { rng.gen_range(0..6) };
    match choice {
        0 | 1 if !scope.is_empty() => var(scope.choose(rng).expect("non-empty")),
        0..=2 => {
            *counter += 1;
            let x = format!("x{counter}");
            scope.push(x.clone());
            let body = random_term(rng, scope, depth.saturating_sub(1), counter);
            scope.pop();
            lam(&x, body)
        }
        _ => {
            let f = random_term(rng, scope, depth - 1, counter);
            let a = random_term(rng, scope, depth - 1, counter);
            app(f, a)
        }
    }
}

/// `count` closed, simply typable terms that still contain a redex.
pub fn typable_redex_corpus(rng: &mut GenRng, count: usize, max_depth: usize) -> Vec<Term> {
    let mut out = Vec::with_capacity(count);
    let mut counter = 0;
    while out.len() < count {
        let f = random_term(rng, &mut Vec::new(), max_depth, &mut counter);
        let a = random_term(rng, &mut Vec::new(), max_depth, &mut counter);
        let t = app(f, a);
        if !is_normal(&t) && infer_type(&TypingContext::new(), &t).is_ok() {
            out.push(t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::transducer::erase_registers;

    #[test]
    fn copyless_generation_is_copyless_and_deterministic() {
        let ab = Alphabet::from_chars("ab");
        let mut r1 = rng(7);
        let mut r2 = rng(7);
        for i in 0..30 {
            let t = random_rt(&mut r1, "t", &ab, &ab, GenParams::default(), true);
            assert!(t.check_copyless().passes(), "machine {i}");
            let u = random_rt(&mut r2, "t", &ab, &ab, GenParams::default(), true);
            assert_eq!(t.output_fn, u.output_fn);
        }
        let copying = (0..40).map(|_| random_rt(&mut r1, "t", &ab, &ab, GenParams::default(), false)).filter(|t| !t.check_copyless().passes()).count();
        assert!(copying > 0);
        assert!(erase_registers(&mix(&mut r1, vec![], &ab, 0)).is_empty());
    }

    #[test]
    fn corpus_terms_are_typable_redexes() {
        let c = typable_redex_corpus(&mut rng(1), 20, 3);
        assert_eq!(c.len(), 20);
        assert!(c.iter().all(|t| !is_normal(t)));
    }
}
