//! Register transducers: forward runs, the copyless condition and the
//! backward propagation of output functions.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::symbol::{Alphabet, Symbol, Word};

/// One letter of a word over `Σ ∪ R`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Item {
    Letter(Symbol),
    Reg(usize),
}

/// A word over the output alphabet and the registers.
pub type RegWord = Vec<Item>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RtTransition {
    pub target: usize,
    /// `u(r)` for each register in declaration order.
    pub updates: Vec<RegWord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RtError {
    #[error("machine has no states")]
    NoStates,
    #[error("`{0}` declared twice")]
    Duplicate(String),
    #[error("register `{0}` clashes with an alphabet symbol")]
    RegisterClash(String),
    #[error("missing transition for state {0} on `{1}`")]
    MissingTransition(String, Symbol),
    #[error("symbol `{0}` is not in the output alphabet")]
    UnknownOutputSymbol(Symbol),
}

/// `G : Q → (Σ ∪ R)*`.
pub type OutputFunction = Vec<RegWord>;

/// A deterministic register transducer with a total transition function.
#[derive(Clone, Debug)]
pub struct RegisterTransducer {
    pub name: String,
    pub input: Alphabet,
    pub output: Alphabet,
    pub registers: Vec<Arc<str>>,
    pub states: Vec<String>,
    pub initial: usize,
    pub output_fn: OutputFunction,
    delta: Vec<RtTransition>,
}

pub struct RtBuilder {
    pub name: String,
    pub input: Alphabet,
    pub output: Alphabet,
    pub registers: Vec<String>,
    pub states: Vec<String>,
    pub initial: usize,
    pub output_fn: OutputFunction,
    /// Keyed by (state, input letter index).
    pub delta: HashMap<(usize, usize), RtTransition>,
    /// Fill missing transitions with a self-loop and identity updates.
    pub complete: bool,
}

impl RtBuilder {
    pub fn build(self) -> Result<RegisterTransducer, RtError> {
        if self.states.is_empty() {
            return Err(RtError::NoStates);
        }
        for (i, s) in self.states.iter().enumerate() {
            if self.states[..i].contains(s) {
                return Err(RtError::Duplicate(s.clone()));
            }
        }
        for (i, r) in self.registers.iter().enumerate() {
            if self.registers[..i].contains(r) {
                return Err(RtError::Duplicate(r.clone()));
            }
            let sym = Symbol::new(r);
            if self.input.contains(&sym) || self.output.contains(&sym) {
                return Err(RtError::RegisterClash(r.clone()));
            }
        }
        let identity: Vec<RegWord> = (0..self.registers.len()).map(|r| vec![Item::Reg(r)]).collect();
        let mut map = self.delta;
        let mut delta = Vec::new();
        for q in 0..self.states.len() {
            for a in 0..self.input.len() {
                match map.remove(&(q, a)) {
                    Some(t) => delta.push(t),
                    None if self.complete => delta.push(RtTransition { target: q, updates: identity.clone() }),
                    None => return Err(RtError::MissingTransition(self.states[q].clone(), self.input.get(a).clone())),
                }
            }
        }
        let check = |w: &RegWord| -> Result<(), RtError> {
            for it in w {
                if let Item::Letter(s) = it {
                    if !self.output.contains(s) {
                        return Err(RtError::UnknownOutputSymbol(s.clone()));
                    }
                }
            }
            Ok(())
        };
        for t in &delta {
            t.updates.iter().try_for_each(check)?;
        }
        self.output_fn.iter().try_for_each(check)?;
        Ok(RegisterTransducer {
            name: self.name,
            input: self.input,
            output: self.output,
            registers: self.registers.iter().map(|r| Arc::from(r.as_str())).collect(),
            states: self.states,
            initial: self.initial,
            output_fn: self.output_fn,
            delta,
        })
    }
}

/// State and register store.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub state: usize,
    pub store: Vec<Word>,
}

fn substitute_store(w: &RegWord, store: &[Word]) -> Word {
    let mut out = Word::empty();
    for it in w {
        match it {
            Item::Letter(s) => out.push(s.clone()),
            Item::Reg(r) => out.extend(&store[*r]),
        }
    }
    out
}

/// Replace each register `r` in `w` by `s(r)`; letters are fixed.
pub fn substitute_regs(w: &RegWord, s: &[RegWord]) -> RegWord {
    let mut out = Vec::new();
    for it in w {
        match it {
            Item::Letter(_) => out.push(it.clone()),
            Item::Reg(r) => out.extend(s[*r].iter().cloned()),
        }
    }
    out
}

/// Drop every register occurrence.
pub fn erase_registers(w: &RegWord) -> Word {
    w.iter()
        .filter_map(|it| match it {
            Item::Letter(s) => Some(s.clone()),
            Item::Reg(_) => None,
        })
        .collect()
}

/// A place where the copyless condition fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CopylessViolation {
    Transition { state: String, letter: Symbol, register: String, count: usize },
    Output { state: String, register: String, count: usize },
}

impl fmt::Display for CopylessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopylessViolation::Transition { state, letter, register, count } => {
                write!(f, "transition ({state}, {letter}) uses register {register} {count} times")
            }
            CopylessViolation::Output { state, register, count } => {
                write!(f, "output of {state} uses register {register} {count} times")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CopylessReport {
    pub violations: Vec<CopylessViolation>,
}

impl CopylessReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CopylessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passes() {
            return f.write_str("copyless");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn count_regs<'a>(words: impl IntoIterator<Item = &'a RegWord>, n: usize) -> Vec<usize> {
    let mut counts = vec![0; n];
    for w in words {
        for it in w {
            if let Item::Reg(r) = it {
                counts[*r] += 1;
            }
        }
    }
    counts
}

impl RegisterTransducer {
    pub fn transition(&self, state: usize, letter: usize) -> &RtTransition {
        &self.delta[state * self.input.len() + letter]
    }

    pub fn initial_config(&self) -> Configuration {
        Configuration { state: self.initial, store: vec![Word::empty(); self.registers.len()] }
    }

    pub fn step(&self, c: &Configuration, letter: usize) -> Configuration {
        let t = self.transition(c.state, letter);
        Configuration {
            state: t.target,
            store: t.updates.iter().map(|u| substitute_store(u, &c.store)).collect(),
        }
    }

    /// Forward semantics. Panics if `w` is not over the input alphabet.
    pub fn run(&self, w: &Word) -> Word {
        let mut c = self.initial_config();
        for s in w {
            let a = self.input.index_of(s).expect("input letter in alphabet");
            c = self.step(&c, a);
        }
        substitute_store(&self.output_fn[c.state], &c.store)
    }

    pub fn check_copyless(&self) -> CopylessReport {
        let mut report = CopylessReport::default();
        let n = self.registers.len();
        for q in 0..self.states.len() {
            for a in 0..self.input.len() {
                let t = self.transition(q, a);
                for (r, &count) in count_regs(&t.updates, n).iter().enumerate() {
                    if count > 1 {
                        report.violations.push(CopylessViolation::Transition {
                            state: self.states[q].clone(),
                            letter: self.input.get(a).clone(),
                            register: self.registers[r].to_string(),
                            count,
                        });
                    }
                }
            }
        }
        for (q, w) in self.output_fn.iter().enumerate() {
            for (r, &count) in count_regs([w], n).iter().enumerate() {
                if count > 1 {
                    report.violations.push(CopylessViolation::Output {
                        state: self.states[q].clone(),
                        register: self.registers[r].to_string(),
                        count,
                    });
                }
            }
        }
        report
    }

    /// `δ^O(a, G) = q ↦ s*_{a,q}(G(q′_{a,q}))`.
    pub fn delta_o(&self, letter: usize, g: &OutputFunction) -> OutputFunction {
        (0..self.states.len())
            .map(|q| {
                let t = self.transition(q, letter);
                substitute_regs(&g[t.target], &t.updates)
            })
            .collect()
    }

    /// `δ^O(w₁, … δ^O(w_n, F) …)`.
    pub fn delta_o_word(&self, w: &Word) -> OutputFunction {
        let mut g = self.output_fn.clone();
        for s in w.symbols().iter().rev() {
            let a = self.input.index_of(s).expect("input letter in alphabet");
            g = self.delta_o(a, &g);
        }
        g
    }

    /// Semantics through a right-to-left fold of `δ^O`.
    pub fn backward_run(&self, w: &Word) -> Word {
        erase_registers(&self.delta_o_word(w)[self.initial])
    }

    pub fn max_word_len(&self) -> usize {
        let upd = self.delta.iter().flat_map(|t| t.updates.iter()).map(Vec::len);
        upd.chain(self.output_fn.iter().map(Vec::len)).max().unwrap_or(0)
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, &RtTransition)> {
        let k = self.input.len();
        self.delta.iter().enumerate().map(move |(i, t)| (i / k, i % k, t))
    }

    pub fn format_regword(&self, w: &RegWord) -> String {
        if w.is_empty() {
            return "eps".into();
        }
        w.iter()
            .map(|it| match it {
                Item::Letter(s) => s.to_string(),
                Item::Reg(r) => self.registers[*r].to_string(),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// The two-register machine computing `w · reverse(w)` over `sigma`.
pub fn xy_transducer(sigma: &Alphabet) -> RegisterTransducer {
    let mut delta = HashMap::new();
    for (a, s) in sigma.symbols().iter().enumerate() {
        let x = vec![Item::Reg(0), Item::Letter(s.clone())];
        let y = vec![Item::Letter(s.clone()), Item::Reg(1)];
        delta.insert((0, a), RtTransition { target: 0, updates: vec![x, y] });
    }
    RtBuilder {
        name: "xy".into(),
        input: sigma.clone(),
        output: sigma.clone(),
        registers: vec!["X".into(), "Y".into()],
        states: vec!["q".into()],
        initial: 0,
        output_fn: vec![vec![Item::Reg(0), Item::Reg(1)]],
        delta,
        complete: false,
    }
    .build()
    .expect("well-formed machine")
}

/// Two-register copyless machine computing `reverse(w)`.
pub fn reverse_transducer(sigma: &Alphabet) -> RegisterTransducer {
    let mut delta = HashMap::new();
    for (a, s) in sigma.symbols().iter().enumerate() {
        let x = vec![Item::Reg(0), Item::Letter(s.clone())];
        let y = vec![Item::Letter(s.clone()), Item::Reg(1)];
        delta.insert((0, a), RtTransition { target: 0, updates: vec![x, y] });
    }
    RtBuilder {
        name: "reverse".into(),
        input: sigma.clone(),
        output: sigma.clone(),
        registers: vec!["X".into(), "Y".into()],
        states: vec!["q".into()],
        initial: 0,
        output_fn: vec![vec![Item::Reg(1)]],
        delta,
        complete: false,
    }
    .build()
    .expect("well-formed machine")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab")
    }

    #[test]
    fn xy_runs() {
        let t = xy_transducer(&ab());
        assert_eq!(t.run(&Word::from_chars("ab")), Word::from_chars("abba"));
        assert_eq!(t.run(&Word::empty()), Word::empty());
        assert!(t.check_copyless().passes());
    }

    #[test]
    fn delta_o_example() {
        // δ^O(a, F) with F(q) = XY is q ↦ X a a Y.
        let t = xy_transducer(&ab());
        let g = t.delta_o(0, &t.output_fn);
        assert_eq!(t.format_regword(&g[0]), "X a a Y");
        let eps: OutputFunction = vec![vec![]];
        assert_eq!(t.delta_o(0, &eps), eps);
    }

    #[test]
    fn backward_matches_forward() {
        let t = xy_transducer(&ab());
        for w in ab().words_up_to(6) {
            assert_eq!(t.backward_run(&w), t.run(&w));
        }
    }

    #[test]
    fn copyless_violations_reported() {
        let mut delta = HashMap::new();
        delta.insert((0, 0), RtTransition { target: 0, updates: vec![vec![Item::Reg(0), Item::Reg(0)]] });
        let t = RtBuilder {
            name: "dup".into(),
            input: Alphabet::from_chars("a"),
            output: Alphabet::from_chars("a"),
            registers: vec!["X".into()],
            states: vec!["q".into()],
            initial: 0,
            output_fn: vec![vec![Item::Reg(0), Item::Reg(0)]],
            delta,
            complete: false,
        }
        .build()
        .unwrap();
        let report = t.check_copyless();
        assert_eq!(report.violations.len(), 2);
        assert!(matches!(&report.violations[0], CopylessViolation::Transition { register, count: 2, .. } if register == "X"));
        // Starting from ε, X := XX stays ε.
        assert_eq!(t.run(&Word::from_chars("aaa")), Word::empty());
    }

    #[test]
    fn missing_transitions() {
        let mk = |complete| RtBuilder {
            name: "partial".into(),
            input: ab(),
            output: ab(),
            registers: vec!["X".into()],
            states: vec!["q".into()],
            initial: 0,
            output_fn: vec![vec![Item::Reg(0)]],
            delta: [((0, 0), RtTransition { target: 0, updates: vec![vec![Item::Reg(0), Item::Letter("a".into())]] })]
                .into_iter()
                .collect(),
            complete,
        };
        assert!(matches!(mk(false).build(), Err(RtError::MissingTransition(..))));
        let t = mk(true).build().unwrap();
        assert_eq!(t.run(&Word::from_chars("abab")), Word::from_chars("aa"));
    }
}
