//! Compile machines, run them directly, and compare the two on every input
//! in a bounded range.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::codec::{Codec, Value};
use crate::eal_compile::{compile_brtt, compile_sst, EalCompileError, EalRunError, EalProgram};
use crate::format::program::Program;
use crate::format::Machine;
use crate::stlc::NormalizeError;
use crate::stlc_compile::{
    compile_dfa, compile_hdt0l, compile_morphism, compile_register_transducer, compile_rtt, compose_programs, CompileError,
    RunError, TypedProgram,
};
use crate::strings::morphism::Morphism;
use crate::strings::transducer::{Item, RegisterTransducer, RtBuilder, RtTransition};
use crate::trees::tree::BinTree;

/// Exhaustive ranges stay below these.
pub const MAX_LEN: usize = 8;
pub const MAX_NODES: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Stlc,
    Eal,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Stlc => "stlc",
            Target::Eal => "eal",
        })
    }
}

#[derive(Debug, Error)]
pub enum CompileFailure {
    #[error(transparent)]
    Stlc(#[from] CompileError),
    #[error(transparent)]
    Eal(#[from] EalCompileError),
    #[error("{0}")]
    Unsupported(String),
}

/// The morphism as a one-state, one-register transducer.
fn morphism_transducer(name: &str, phi: &Morphism) -> RegisterTransducer {
    let delta = (0..phi.source.len())
        .map(|a| {
            let mut u = vec![Item::Reg(0)];
            u.extend(phi.image(a).iter().cloned().map(Item::Letter));
            ((0, a), RtTransition { target: 0, updates: vec![u] })
        })
        .collect();
    RtBuilder {
        name: name.into(),
        input: phi.source.clone(),
        output: phi.target.clone(),
        registers: vec!["X".into()],
        states: vec!["q".into()],
        initial: 0,
        output_fn: vec![vec![Item::Reg(0)]],
        delta,
        complete: false,
    }
    .build()
    .expect("a morphism gives a total transducer")
}

pub fn compile_machine(m: &Machine, target: Target) -> Result<Program, CompileFailure> {
    Ok(match (m, target) {
        (Machine::Transducer { rt, .. }, Target::Stlc) => Program::Stlc(compile_register_transducer(rt)?),
        (Machine::Transducer { rt, .. }, Target::Eal) => Program::Eal(compile_sst(rt)?),
        (Machine::Hdt0l(h), Target::Stlc) => Program::Stlc(compile_hdt0l(h)?),
        (Machine::Tree { rtt, .. }, Target::Stlc) => Program::Stlc(compile_rtt(rtt)?),
        (Machine::Tree { rtt, conflicts, .. }, Target::Eal) => Program::Eal(compile_brtt(rtt, conflicts)?),
        (Machine::Dfa(d), Target::Stlc) => Program::Stlc(compile_dfa(d)),
        (Machine::Morphism { morphism, .. }, Target::Stlc) => Program::Stlc(compile_morphism(morphism)?),
        (Machine::Morphism { name, morphism }, Target::Eal) => Program::Eal(compile_sst(&morphism_transducer(name, morphism))?),
        (Machine::Hdt0l(_), Target::Eal) => {
            return Err(CompileFailure::Unsupported("HDT0L systems are not regular; compile them with --target stlc".into()))
        }
        (Machine::Dfa(_), Target::Eal) => return Err(CompileFailure::Unsupported("automata compile only with --target stlc".into())),
    })
}

pub fn input_codec(m: &Machine) -> Codec {
    match m {
        Machine::Transducer { rt, .. } => Codec::Str(rt.input.clone()),
        Machine::Hdt0l(h) => Codec::Str(h.input.clone()),
        Machine::Tree { rtt, .. } => Codec::Tree(rtt.input.clone()),
        Machine::Dfa(d) => Codec::Str(d.alphabet.clone()),
        Machine::Morphism { morphism, .. } => Codec::Str(morphism.source.clone()),
    }
}

/// The direct semantics; `None` when `v` does not fit the input codec.
pub fn run_machine(m: &Machine, v: &Value) -> Option<Value> {
    Some(match (m, v) {
        (Machine::Transducer { rt, .. }, Value::Str(w)) => Value::Str(rt.run(w)),
        (Machine::Hdt0l(h), Value::Str(w)) => Value::Str(h.run(w)),
        (Machine::Tree { rtt, .. }, Value::Tree(t)) => Value::Tree(rtt.run(t)),
        (Machine::Dfa(d), Value::Str(w)) => Value::Bool(d.accepts(w)),
        (Machine::Morphism { morphism, .. }, Value::Str(w)) => Value::Str(morphism.apply(w)),
        _ => return None,
    })
}

/// Inputs in enumeration order: by length or size, then lexicographically.
pub fn inputs(codec: &Codec, max_len: usize, max_nodes: usize) -> Vec<Value> {
    match codec {
        Codec::Str(a) => a.words_up_to(max_len).into_iter().map(Value::Str).collect(),
        Codec::Tree(a) => BinTree::enumerate(a, max_nodes).into_iter().map(Value::Tree).collect(),
        Codec::Bool => vec![Value::Bool(false), Value::Bool(true)],
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Mismatch { input: Value, expected: Value, got: Value },
    Run { input: Value, message: String },
    FuelExhausted { input: Value, fuel: u64 },
    /// A β-step moved the substituted argument to another exponential depth.
    DepthViolation { input: Value, steps: u64 },
}

impl Failure {
    pub fn input(&self) -> &Value {
        match self {
            Failure::Mismatch { input, .. }
            | Failure::Run { input, .. }
            | Failure::FuelExhausted { input, .. }
            | Failure::DepthViolation { input, .. } => input,
        }
    }
}

fn show(v: &Value) -> String {
    match v {
        Value::Str(w) if w.is_empty() => "ε".into(),
        v => v.to_string(),
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Mismatch { input, expected, got } => {
                write!(f, "mismatch on {}: expected {}, program gave {}", show(input), show(expected), show(got))
            }
            Failure::Run { input, message } => write!(f, "error on {}: {message}", show(input)),
            Failure::FuelExhausted { input, fuel } => write!(f, "fuel of {fuel} steps exhausted on {}", show(input)),
            Failure::DepthViolation { input, steps } => write!(f, "{steps} depth-changing steps on {}", show(input)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiffReport {
    pub name: String,
    pub target: Target,
    pub checked: usize,
    pub beta_steps: u64,
    /// The first failing input in enumeration order.
    pub failure: Option<Failure>,
}

impl DiffReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "pass {} [{}]: {} inputs, {} beta steps", self.name, self.target, self.checked, self.beta_steps),
            Some(e) => write!(f, "FAIL {} [{}]: {e}", self.name, self.target),
        }
    }
}

fn from_stlc(input: &Value, e: RunError, fuel: u64) -> Failure {
    match e {
        RunError::Normalize(NormalizeError::FuelExhausted(_)) => Failure::FuelExhausted { input: input.clone(), fuel },
        e => Failure::Run { input: input.clone(), message: e.to_string() },
    }
}

fn from_eal(input: &Value, e: EalRunError, fuel: u64) -> Failure {
    match e {
        EalRunError::Normalize(NormalizeError::FuelExhausted(_)) => Failure::FuelExhausted { input: input.clone(), fuel },
        e => Failure::Run { input: input.clone(), message: e.to_string() },
    }
}

/// Output and step count of one program run.
pub fn eval_program(p: &Program, v: &Value, fuel: u64) -> Result<(Value, u64), Failure> {
    match p {
        Program::Stlc(p) => eval_stlc(p, v, fuel),
        Program::Eal(p) => eval_eal(p, v, fuel),
    }
}

fn eval_stlc(p: &TypedProgram, v: &Value, fuel: u64) -> Result<(Value, u64), Failure> {
    let arg = crate::stlc_compile::encode_value(&p.input, v).map_err(|e| from_stlc(v, e, fuel))?;
    let (nf, steps) = crate::stlc::normalize::beta_normalize_counting(&crate::stlc::term::app(p.term.clone(), arg), fuel)
        .map_err(|e| from_stlc(v, e.into(), fuel))?;
    let out = crate::stlc_compile::decode_normal(&p.output, &nf).map_err(|e| from_stlc(v, e.into(), fuel))?;
    Ok((out, steps))
}

fn eval_eal(p: &EalProgram, v: &Value, fuel: u64) -> Result<(Value, u64), Failure> {
    let (out, trace) = p.apply_traced(v, fuel).map_err(|e| from_eal(v, e, fuel))?;
    if trace.depth_violations > 0 {
        return Err(Failure::DepthViolation { input: v.clone(), steps: trace.depth_violations });
    }
    Ok((out, trace.steps()))
}

/// Compare `p` with `oracle` on every input, in parallel; results are
/// gathered in input order so the reported failure is the first one.
pub fn difftest_program(
    name: &str,
    p: &Program,
    oracle: &(dyn Fn(&Value) -> Value + Sync),
    inputs: &[Value],
    fuel: u64,
) -> DiffReport {
    let target = match p {
        Program::Stlc(_) => Target::Stlc,
        Program::Eal(_) => Target::Eal,
    };
    let results: Vec<Result<u64, Failure>> = inputs
        .par_iter()
        .map(|v| {
            let (got, steps) = eval_program(p, v, fuel)?;
            let expected = oracle(v);
            if got == expected {
                Ok(steps)
            } else {
                Err(Failure::Mismatch { input: v.clone(), expected, got })
            }
        })
        .collect();
    let mut report = DiffReport { name: name.into(), target, checked: 0, beta_steps: 0, failure: None };
    for r in results {
        match r {
            Ok(s) => {
                report.checked += 1;
                report.beta_steps += s;
            }
            Err(e) => {
                report.failure = Some(e);
                break;
            }
        }
    }
    report
}

pub fn difftest_machine(m: &Machine, target: Target, max_len: usize, max_nodes: usize, fuel: u64) -> Result<DiffReport, CompileFailure> {
    let p = compile_machine(m, target)?;
    let ins = inputs(&input_codec(m), max_len, max_nodes);
    let oracle = |v: &Value| run_machine(m, v).expect("inputs follow the machine's codec");
    Ok(difftest_program(m.name(), &p, &oracle, &ins, fuel))
}

/// Consecutive string machines whose alphabets line up (a final automaton
/// is allowed), composed into one simply typed program.
pub fn compose_chain(ms: &[Machine]) -> Result<Option<TypedProgram>, CompileFailure> {
    let (_, init) = ms.split_last().ok_or_else(|| CompileFailure::Unsupported("no machine".into()))?;
    if init.iter().any(|m| matches!(m, Machine::Tree { .. } | Machine::Dfa(_))) {
        return Ok(None);
    }
    let mut composite: Option<TypedProgram> = None;
    for m in ms {
        let Program::Stlc(p) = compile_machine(m, Target::Stlc)? else { unreachable!("stlc target") };
        composite = Some(match composite {
            None => p,
            Some(c) if c.output == p.input => compose_programs(&c, &p)?,
            Some(_) => return Ok(None),
        });
    }
    Ok(composite)
}

/// The composite of a chain compared with running the machines in sequence.
pub fn difftest_chain(ms: &[Machine], max_len: usize, fuel: u64) -> Result<Option<DiffReport>, CompileFailure> {
    if ms.len() < 2 {
        return Ok(None);
    }
    let Some(composite) = compose_chain(ms)? else { return Ok(None) };
    let oracle = |v: &Value| ms.iter().fold(v.clone(), |acc, m| run_machine(m, &acc).expect("chained codecs"));
    let ins = inputs(&composite.input, max_len, 0);
    let names: Vec<&str> = ms.iter().map(Machine::name).collect();
    Ok(Some(difftest_program(&names.join(" ; "), &Program::Stlc(composite), &oracle, &ins, fuel)))
}
