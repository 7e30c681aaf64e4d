//! Machine description files.
//!
//! A file holds one or more blocks, each opened by a header keyword:
//!
//! ```text
//! register-transducer xy
//!   input a b        output a b        registers X Y
//!   states q0        initial q0
//!   delta q0 a -> q0 { X := X a ; Y := a Y }
//!   delta q0 b -> q0 { X := X b ; Y := b Y }
//!   out q0 = X Y
//! ```
//!
//! Other headers: `sst` (a register transducer that must be copyless),
//! `hdt0l`, `rtt`, `brtt`, `dfa`, `morphism` and `squaring-pipeline`.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::lexer::{tokenize, FormatError, Tokens};
use crate::strings::dfa::Dfa;
use crate::strings::hdt0l::Hdt0l;
use crate::strings::morphism::Morphism;
use crate::strings::squaring::squaring_pipeline;
use crate::strings::transducer::{Item, RegWord, RegisterTransducer, RtBuilder, RtTransition};
use crate::symbol::{Alphabet, Symbol, Word};
use crate::trees::expr::{HoleExpr, Side, TVar, TreeExpr};
use crate::trees::rtt::{ConflictRelation, Rtt, RttBuilder, RttTransition};

const HEADERS: &[&str] = &["register-transducer", "sst", "hdt0l", "rtt", "brtt", "dfa", "morphism", "squaring-pipeline"];

const KEYWORDS: &[&str] = &[
    "input",
    "output",
    "registers",
    "states",
    "initial",
    "delta",
    "out",
    "work",
    "init",
    "rule",
    "final",
    "tree-registers",
    "hole-registers",
    "conflict",
    "alphabet",
    "accept",
    "map",
];

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Fill missing transitions with identity self-loops, and missing
    /// register updates with `X := X`.
    pub complete_delta: bool,
}

#[derive(Clone, Debug)]
pub enum Machine {
    Transducer { rt: RegisterTransducer, require_copyless: bool },
    Hdt0l(Hdt0l),
    Tree { rtt: Rtt, conflicts: ConflictRelation, bounded: bool },
    Dfa(Dfa),
    Morphism { name: String, morphism: Morphism },
}

impl Machine {
    pub fn name(&self) -> &str {
        match self {
            Machine::Transducer { rt, .. } => &rt.name,
            Machine::Hdt0l(h) => &h.name,
            Machine::Tree { rtt, .. } => &rtt.name,
            Machine::Dfa(d) => &d.name,
            Machine::Morphism { name, .. } => name,
        }
    }
}

fn is_header(t: Option<&str>) -> bool {
    t.is_some_and(|t| HEADERS.contains(&t))
}

fn is_boundary(t: Option<&str>) -> bool {
    t.is_none_or(|t| HEADERS.contains(&t) || KEYWORDS.contains(&t))
}

/// Names until the next keyword or header.
fn names(ts: &mut Tokens, what: &str) -> Result<Vec<String>, FormatError> {
    let mut out = Vec::new();
    while !is_boundary(ts.peek()) {
        let t = ts.next()?;
        if t.len() == 1 && "{};,:~[]()=".contains(&t) {
            return Err(ts.error(format!("unexpected `{t}` in {what}")));
        }
        out.push(t);
    }
    if out.is_empty() {
        return Err(ts.error(format!("empty {what}")));
    }
    Ok(out)
}

fn alphabet(ts: &mut Tokens, what: &str) -> Result<Alphabet, FormatError> {
    let line = ts.line();
    let syms = names(ts, what)?;
    for s in &syms {
        if s.starts_with('_') {
            return Err(FormatError { line, message: format!("symbol `{s}` may not start with `_`") });
        }
    }
    Alphabet::new(syms.iter().map(String::as_str)).map_err(|e| FormatError { line, message: e.to_string() })
}

fn one(ts: &mut Tokens, what: &str) -> Result<String, FormatError> {
    let v = names(ts, what)?;
    if v.len() != 1 {
        return Err(ts.error(format!("{what} takes one name")));
    }
    Ok(v.into_iter().next().expect("one name"))
}

fn index(list: &[String], name: &str, what: &str, line: usize) -> Result<usize, FormatError> {
    list.iter().position(|s| s == name).ok_or_else(|| FormatError { line, message: format!("unknown {what} `{name}`") })
}

fn letter(sigma: &Alphabet, name: &str, line: usize) -> Result<usize, FormatError> {
    sigma
        .index_of(&Symbol::new(name))
        .ok_or_else(|| FormatError { line, message: format!("`{name}` is not in the alphabet {sigma}") })
}

fn need<T>(v: Option<T>, what: &str, ts: &Tokens) -> Result<T, FormatError> {
    v.ok_or_else(|| ts.error(format!("missing `{what}`")))
}

/// A word over `Σ ∪ R` up to one of the `stops` (or a keyword).
fn reg_word(ts: &mut Tokens, sigma: &Alphabet, regs: &[String], stops: &[&str]) -> Result<RegWord, FormatError> {
    let mut w = Vec::new();
    while let Some(t) = ts.peek() {
        if stops.contains(&t) || is_boundary(Some(t)) {
            break;
        }
        let line = ts.line();
        let t = ts.next()?;
        if t == "eps" || t == "ε" {
            continue;
        }
        if let Some(r) = regs.iter().position(|r| *r == t) {
            w.push(Item::Reg(r));
        } else if sigma.contains(&Symbol::new(&t)) {
            w.push(Item::Letter(Symbol::new(&t)));
        } else {
            return Err(FormatError { line, message: format!("`{t}` is neither a register nor an output letter") });
        }
    }
    Ok(w)
}

fn plain_word(ts: &mut Tokens, sigma: &Alphabet, stops: &[&str]) -> Result<Word, FormatError> {
    let w = reg_word(ts, sigma, &[], stops)?;
    Ok(w.into_iter()
        .map(|i| match i {
            Item::Letter(s) => s,
            Item::Reg(_) => unreachable!("no registers"),
        })
        .collect())
}

fn parse_transducer(ts: &mut Tokens, opts: ParseOptions, require_copyless: bool) -> Result<Machine, FormatError> {
    let start = ts.line();
    let name = ts.next()?;
    let (mut input, mut output, mut registers, mut states, mut initial) = (None, None, Vec::new(), None, None);
    let mut deltas = Vec::new();
    let mut outs = Vec::new();
    while !ts.at_end() && !is_header(ts.peek()) {
        let line = ts.line();
        match ts.next()?.as_str() {
            "input" => input = Some(alphabet(ts, "input alphabet")?),
            "output" => output = Some(alphabet(ts, "output alphabet")?),
            "registers" => registers = names(ts, "registers")?,
            "states" => states = Some(names(ts, "states")?),
            "initial" => initial = Some(one(ts, "initial")?),
            "delta" => {
                let q = ts.next()?;
                let a = ts.next()?;
                ts.expect("->")?;
                let q2 = ts.next()?;
                ts.expect("{")?;
                let mut ups = Vec::new();
                while !ts.eat("}") {
                    let r = ts.next()?;
                    ts.expect(":=")?;
                    ups.push((ts.line(), r, ts.pos_marker()));
                    // Words are resolved once the alphabets are known.
                    while !matches!(ts.peek(), Some(";") | Some("}") | None) {
                        ts.next()?;
                    }
                    ts.eat(";");
                }
                deltas.push((line, q, a, q2, ups));
            }
            "out" => {
                let q = ts.next()?;
                ts.expect("=")?;
                outs.push((line, q, ts.pos_marker()));
                while !is_boundary(ts.peek()) {
                    ts.next()?;
                }
            }
            t => return Err(FormatError { line, message: format!("unexpected `{t}` in register transducer") }),
        }
    }
    let input = need(input, "input", ts)?;
    let output = need(output, "output", ts)?;
    let states = need(states, "states", ts)?;
    let initial = index(&states, &need(initial, "initial", ts)?, "state", start)?;
    let mut delta = HashMap::new();
    for (line, q, a, q2, ups) in deltas {
        let (qi, ai, q2i) = (index(&states, &q, "state", line)?, letter(&input, &a, line)?, index(&states, &q2, "state", line)?);
        let mut updates: Vec<Option<RegWord>> = vec![None; registers.len()];
        for (uline, r, at) in ups {
            let ri = index(&registers, &r, "register", uline)?;
            if updates[ri].is_some() {
                return Err(FormatError { line: uline, message: format!("register `{r}` updated twice") });
            }
            let mut sub = ts.fork(at);
            updates[ri] = Some(reg_word(&mut sub, &output, &registers, &[";", "}"])?);
        }
        let updates = updates
            .into_iter()
            .enumerate()
            .map(|(r, u)| match u {
                Some(u) => Ok(u),
                None if opts.complete_delta => Ok(vec![Item::Reg(r)]),
                None => Err(FormatError { line, message: format!("no update for register `{}` (use --complete-delta)", registers[r]) }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if delta.insert((qi, ai), RtTransition { target: q2i, updates }).is_some() {
            return Err(FormatError { line, message: format!("duplicate transition for {q} on {a}") });
        }
    }
    let mut output_fn: Vec<Option<RegWord>> = vec![None; states.len()];
    for (line, q, at) in outs {
        let qi = index(&states, &q, "state", line)?;
        let mut sub = ts.fork(at);
        output_fn[qi] = Some(reg_word(&mut sub, &output, &registers, &[])?);
    }
    let output_fn = output_fn
        .into_iter()
        .enumerate()
        .map(|(q, o)| o.ok_or_else(|| FormatError { line: start, message: format!("no output for state `{}`", states[q]) }))
        .collect::<Result<Vec<_>, _>>()?;
    let rt = RtBuilder { name, input, output, registers, states, initial, output_fn, delta, complete: opts.complete_delta }
        .build()
        .map_err(|e| FormatError { line: start, message: e.to_string() })?;
    Ok(Machine::Transducer { rt, require_copyless })
}

fn parse_hdt0l(ts: &mut Tokens) -> Result<Machine, FormatError> {
    let start = ts.line();
    let name = ts.next()?;
    let (mut input, mut work, mut output, mut init) = (None, None, None, None);
    let mut rules: Vec<(usize, String, Vec<(String, usize)>)> = Vec::new();
    let mut fin = None;
    let pairs = |ts: &mut Tokens| -> Result<Vec<(String, usize)>, FormatError> {
        let mut v = Vec::new();
        loop {
            let x = ts.next()?;
            ts.expect("->")?;
            v.push((x, ts.pos_marker()));
            while !matches!(ts.peek(), Some(",")) && !is_boundary(ts.peek()) {
                ts.next()?;
            }
            if !ts.eat(",") {
                return Ok(v);
            }
        }
    };
    while !ts.at_end() && !is_header(ts.peek()) {
        let line = ts.line();
        match ts.next()?.as_str() {
            "input" => input = Some(alphabet(ts, "input alphabet")?),
            "work" => work = Some(alphabet(ts, "working alphabet")?),
            "output" => output = Some(alphabet(ts, "output alphabet")?),
            "init" => init = Some(ts.pos_marker()),
            "rule" => {
                let c = ts.next()?;
                ts.expect(":")?;
                rules.push((line, c, pairs(ts)?));
            }
            "final" => {
                ts.expect(":")?;
                fin = Some((line, pairs(ts)?));
            }
            t => return Err(FormatError { line, message: format!("unexpected `{t}` in hdt0l") }),
        }
        if let Some(at) = init {
            if ts.pos_marker() == at {
                while !is_boundary(ts.peek()) {
                    ts.next()?;
                }
            }
        }
    }
    let input = need(input, "input", ts)?;
    let work = need(work, "work", ts)?;
    let output = need(output, "output", ts)?;
    let init = plain_word(&mut ts.fork(need(init, "init", ts)?), &work, &[])?;
    let morphism = |line: usize, target: &Alphabet, ps: &[(String, usize)]| -> Result<Morphism, FormatError> {
        let mut pairs = Vec::new();
        for (x, at) in ps {
            pairs.push((Symbol::new(x), plain_word(&mut ts.fork(*at), target, &[","])?));
        }
        Morphism::from_pairs(work.clone(), target.clone(), &pairs).map_err(|e| FormatError { line, message: e.to_string() })
    };
    let mut by_letter: Vec<Option<Morphism>> = vec![None; input.len()];
    for (line, c, ps) in &rules {
        let i = letter(&input, c, *line)?;
        by_letter[i] = Some(morphism(*line, &work, ps)?);
    }
    let rules = by_letter
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| FormatError { line: start, message: format!("no rule for `{}`", input.get(i)) }))
        .collect::<Result<Vec<_>, _>>()?;
    let (fline, fpairs) = need(fin, "final", ts)?;
    let fin = morphism(fline, &output, &fpairs)?;
    Ok(Machine::Hdt0l(Hdt0l { name, input, work, output, init, rules, fin }))
}

/// Untyped tree expression, before tree/hole kinds are known.
enum RawExpr {
    Leaf,
    Hole,
    Var(TVar),
    Node(Symbol, Box<RawExpr>, Box<RawExpr>),
    Plug(Box<RawExpr>, Box<RawExpr>),
}

fn raw_expr(ts: &mut Tokens) -> Result<RawExpr, FormatError> {
    let mut e = raw_atom(ts)?;
    while ts.eat("[") {
        let arg = raw_expr(ts)?;
        ts.expect("]")?;
        e = RawExpr::Plug(Box::new(e), Box::new(arg));
    }
    Ok(e)
}

fn raw_atom(ts: &mut Tokens) -> Result<RawExpr, FormatError> {
    if ts.eat("(") {
        ts.expect(")")?;
        return Ok(RawExpr::Leaf);
    }
    let t = ts.next()?;
    if t == "box" || t == "□" {
        return Ok(RawExpr::Hole);
    }
    if ts.eat("(") {
        let l = raw_expr(ts)?;
        ts.expect(",")?;
        let r = raw_expr(ts)?;
        ts.expect(")")?;
        return Ok(RawExpr::Node(Symbol::new(&t), Box::new(l), Box::new(r)));
    }
    if let Some(name) = t.strip_suffix('<') {
        return Ok(RawExpr::Var(TVar::sided(name, Side::Left)));
    }
    if let Some(name) = t.strip_suffix('>') {
        return Ok(RawExpr::Var(TVar::sided(name, Side::Right)));
    }
    Ok(RawExpr::Var(TVar::plain(&t)))
}

struct Kinds<'a> {
    tree: &'a [String],
    hole: &'a [String],
    line: usize,
}

impl Kinds<'_> {
    fn err<T>(&self, m: String) -> Result<T, FormatError> {
        Err(FormatError { line: self.line, message: m })
    }

    fn is_hole(&self, e: &RawExpr) -> Result<bool, FormatError> {
        Ok(match e {
            RawExpr::Leaf => false,
            RawExpr::Hole => true,
            RawExpr::Var(v) => {
                if self.hole.iter().any(|h| **h == *v.name) {
                    true
                } else if self.tree.iter().any(|h| **h == *v.name) {
                    false
                } else {
                    return self.err(format!("unknown register `{}`", v.name));
                }
            }
            RawExpr::Node(_, l, r) => match (self.is_hole(l)?, self.is_hole(r)?) {
                (true, true) => return self.err("a node may contain at most one hole".into()),
                (a, b) => a || b,
            },
            RawExpr::Plug(h, t) => {
                if !self.is_hole(h)? {
                    return self.err("only one-hole expressions can be plugged".into());
                }
                self.is_hole(t)?
            }
        })
    }

    fn tree(&self, e: &RawExpr) -> Result<TreeExpr, FormatError> {
        if self.is_hole(e)? {
            return self.err("expected a tree expression, found a one-hole expression".into());
        }
        Ok(match e {
            RawExpr::Leaf => TreeExpr::Leaf,
            RawExpr::Var(v) => TreeExpr::Var(v.clone()),
            RawExpr::Node(a, l, r) => TreeExpr::Node(a.clone(), Box::new(self.tree(l)?), Box::new(self.tree(r)?)),
            RawExpr::Plug(h, t) => TreeExpr::Plug(Box::new(self.hole_expr(h)?), Box::new(self.tree(t)?)),
            RawExpr::Hole => unreachable!("checked above"),
        })
    }

    fn hole_expr(&self, e: &RawExpr) -> Result<HoleExpr, FormatError> {
        if !self.is_hole(e)? {
            return self.err("expected a one-hole expression, found a tree expression".into());
        }
        Ok(match e {
            RawExpr::Hole => HoleExpr::Hole,
            RawExpr::Var(v) => HoleExpr::Var(v.clone()),
            RawExpr::Node(a, l, r) => {
                if self.is_hole(l)? {
                    HoleExpr::NodeL(a.clone(), Box::new(self.hole_expr(l)?), Box::new(self.tree(r)?))
                } else {
                    HoleExpr::NodeR(a.clone(), Box::new(self.tree(l)?), Box::new(self.hole_expr(r)?))
                }
            }
            RawExpr::Plug(h, t) => HoleExpr::Compose(Box::new(self.hole_expr(h)?), Box::new(self.hole_expr(t)?)),
            RawExpr::Leaf => unreachable!("checked above"),
        })
    }
}

fn parse_tree_machine(ts: &mut Tokens, bounded: bool) -> Result<Machine, FormatError> {
    let start = ts.line();
    let name = ts.next()?;
    let (mut input, mut output, mut states, mut initial) = (None, None, None, None);
    let (mut tree_regs, mut hole_regs) = (Vec::new(), Vec::new());
    let mut conflicts = Vec::new();
    let mut deltas = Vec::new();
    let mut outs = Vec::new();
    while !ts.at_end() && !is_header(ts.peek()) {
        let line = ts.line();
        match ts.next()?.as_str() {
            "input" => input = Some(alphabet(ts, "input alphabet")?),
            "output" => output = Some(alphabet(ts, "output alphabet")?),
            "tree-registers" => tree_regs = names(ts, "tree registers")?,
            "hole-registers" => hole_regs = names(ts, "hole registers")?,
            "states" => states = Some(names(ts, "states")?),
            "initial" => initial = Some(one(ts, "initial")?),
            "conflict" => loop {
                let x = ts.next()?;
                ts.expect("~")?;
                let y = ts.next()?;
                conflicts.push((x, y));
                if !ts.eat(",") {
                    break;
                }
            },
            "delta" => {
                let (ql, qr, a) = (ts.next()?, ts.next()?, ts.next()?);
                ts.expect("->")?;
                let q2 = ts.next()?;
                ts.expect("{")?;
                let mut ups = Vec::new();
                while !ts.eat("}") {
                    let uline = ts.line();
                    let r = ts.next()?;
                    ts.expect(":=")?;
                    ups.push((uline, r, raw_expr(ts)?));
                    if !ts.eat(";") {
                        ts.expect("}")?;
                        break;
                    }
                }
                deltas.push((line, ql, qr, a, q2, ups));
            }
            "out" => {
                let q = ts.next()?;
                ts.expect("=")?;
                outs.push((line, q, raw_expr(ts)?));
            }
            t => return Err(FormatError { line, message: format!("unexpected `{t}` in tree transducer") }),
        }
    }
    let input = need(input, "input", ts)?;
    let output = need(output, "output", ts)?;
    let states = need(states, "states", ts)?;
    let initial = index(&states, &need(initial, "initial", ts)?, "state", start)?;
    let mut delta = HashMap::new();
    for (line, ql, qr, a, q2, ups) in deltas {
        let key = (index(&states, &ql, "state", line)?, index(&states, &qr, "state", line)?, letter(&input, &a, line)?);
        let target = index(&states, &q2, "state", line)?;
        let kinds = Kinds { tree: &tree_regs, hole: &hole_regs, line };
        let mut tree_updates: Vec<Option<TreeExpr>> = vec![None; tree_regs.len()];
        let mut hole_updates: Vec<Option<HoleExpr>> = vec![None; hole_regs.len()];
        for (uline, r, e) in ups {
            let kinds = Kinds { line: uline, ..kinds };
            if let Some(i) = tree_regs.iter().position(|t| *t == r) {
                tree_updates[i] = Some(kinds.tree(&e)?);
            } else if let Some(i) = hole_regs.iter().position(|t| *t == r) {
                hole_updates[i] = Some(kinds.hole_expr(&e)?);
            } else {
                return Err(FormatError { line: uline, message: format!("unknown register `{r}`") });
            }
        }
        let missing = |names: &[String], i: usize| FormatError { line, message: format!("no update for register `{}`", names[i]) };
        let tree_updates = tree_updates.into_iter().enumerate().map(|(i, u)| u.ok_or_else(|| missing(&tree_regs, i))).collect::<Result<_, _>>()?;
        let hole_updates = hole_updates.into_iter().enumerate().map(|(i, u)| u.ok_or_else(|| missing(&hole_regs, i))).collect::<Result<_, _>>()?;
        if delta.insert(key, RttTransition { target, tree_updates, hole_updates }).is_some() {
            return Err(FormatError { line, message: "duplicate transition".into() });
        }
    }
    let mut output_fn: Vec<Option<TreeExpr>> = vec![None; states.len()];
    for (line, q, e) in outs {
        let qi = index(&states, &q, "state", line)?;
        output_fn[qi] = Some(Kinds { tree: &tree_regs, hole: &hole_regs, line }.tree(&e)?);
    }
    let output_fn = output_fn
        .into_iter()
        .enumerate()
        .map(|(q, o)| o.ok_or_else(|| FormatError { line: start, message: format!("no output for state `{}`", states[q]) }))
        .collect::<Result<Vec<_>, _>>()?;
    let rtt = RttBuilder { name, input, output, states, initial, tree_regs, hole_regs, output_fn, delta }
        .build()
        .map_err(|e| FormatError { line: start, message: e.to_string() })?;
    let conflicts = ConflictRelation::new(rtt.carrier(), &conflicts).map_err(|e| FormatError { line: start, message: e.to_string() })?;
    Ok(Machine::Tree { rtt, conflicts, bounded })
}

fn parse_dfa(ts: &mut Tokens) -> Result<Machine, FormatError> {
    let start = ts.line();
    let name = ts.next()?;
    let (mut alpha, mut states, mut initial, mut accept) = (None, None, None, Vec::new());
    let mut deltas = Vec::new();
    while !ts.at_end() && !is_header(ts.peek()) {
        let line = ts.line();
        match ts.next()?.as_str() {
            "alphabet" | "input" => alpha = Some(alphabet(ts, "alphabet")?),
            "states" => states = Some(names(ts, "states")?),
            "initial" => initial = Some(one(ts, "initial")?),
            "accept" => {
                if !is_boundary(ts.peek()) {
                    accept = names(ts, "accepting states")?;
                }
            }
            "delta" => {
                let (q, a) = (ts.next()?, ts.next()?);
                ts.expect("->")?;
                deltas.push((line, q, a, ts.next()?));
            }
            t => return Err(FormatError { line, message: format!("unexpected `{t}` in dfa") }),
        }
    }
    let alpha = need(alpha, "alphabet", ts)?;
    let states = need(states, "states", ts)?;
    let initial = index(&states, &need(initial, "initial", ts)?, "state", start)?;
    let mut accepting = vec![false; states.len()];
    for q in &accept {
        accepting[index(&states, q, "state", start)?] = true;
    }
    let mut delta = HashMap::new();
    for (line, q, a, q2) in deltas {
        delta.insert((index(&states, &q, "state", line)?, letter(&alpha, &a, line)?), index(&states, &q2, "state", line)?);
    }
    let dfa = Dfa::new(&name, alpha, states, initial, accepting, &delta).map_err(|e| FormatError { line: start, message: e.to_string() })?;
    Ok(Machine::Dfa(dfa))
}

fn parse_morphism(ts: &mut Tokens) -> Result<Machine, FormatError> {
    let start = ts.line();
    let name = ts.next()?;
    let (mut input, mut output) = (None, None);
    let mut maps = Vec::new();
    while !ts.at_end() && !is_header(ts.peek()) {
        let line = ts.line();
        match ts.next()?.as_str() {
            "input" => input = Some(alphabet(ts, "input alphabet")?),
            "output" => output = Some(alphabet(ts, "output alphabet")?),
            "map" => loop {
                let c = ts.next()?;
                ts.expect("->")?;
                maps.push((c, ts.pos_marker()));
                while !matches!(ts.peek(), Some(",")) && !is_boundary(ts.peek()) {
                    ts.next()?;
                }
                if !ts.eat(",") {
                    break;
                }
            },
            t => return Err(FormatError { line, message: format!("unexpected `{t}` in morphism") }),
        }
    }
    let input = need(input, "input", ts)?;
    let output = need(output, "output", ts)?;
    let mut pairs = Vec::new();
    for (c, at) in maps {
        pairs.push((Symbol::new(&c), plain_word(&mut ts.fork(at), &output, &[","])?));
    }
    let morphism = Morphism::from_pairs(input, output, &pairs).map_err(|e| FormatError { line: start, message: e.to_string() })?;
    Ok(Machine::Morphism { name, morphism })
}

pub fn parse_machines(src: &str, opts: ParseOptions) -> Result<Vec<Machine>, FormatError> {
    let mut ts = Tokens::new(tokenize(src));
    let mut out = Vec::new();
    while !ts.at_end() {
        let line = ts.line();
        match ts.next()?.as_str() {
            "register-transducer" => out.push(parse_transducer(&mut ts, opts, false)?),
            "sst" => out.push(parse_transducer(&mut ts, opts, true)?),
            "hdt0l" => out.push(parse_hdt0l(&mut ts)?),
            "rtt" => out.push(parse_tree_machine(&mut ts, false)?),
            "brtt" => out.push(parse_tree_machine(&mut ts, true)?),
            "dfa" => out.push(parse_dfa(&mut ts)?),
            "morphism" => out.push(parse_morphism(&mut ts)?),
            "squaring-pipeline" => {
                let _name = ts.next()?;
                ts.expect("input")?;
                let gamma = alphabet(&mut ts, "input alphabet")?;
                for rt in squaring_pipeline(&gamma) {
                    out.push(Machine::Transducer { rt, require_copyless: false });
                }
            }
            t => return Err(FormatError { line, message: format!("expected a machine header, found `{t}`") }),
        }
    }
    if out.is_empty() {
        return Err(FormatError { line: 1, message: "no machine in file".into() });
    }
    Ok(out)
}

fn syms(a: &Alphabet) -> String {
    a.symbols().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

fn word_text(w: &Word) -> String {
    if w.is_empty() {
        "eps".into()
    } else {
        w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
    }
}

/// Render a machine in the format read by [`parse_machines`].
pub fn write_machine(m: &Machine) -> String {
    let mut s = String::new();
    match m {
        Machine::Transducer { rt, require_copyless } => {
            let header = if *require_copyless { "sst" } else { "register-transducer" };
            let _ = writeln!(s, "{header} {}", rt.name);
            let _ = writeln!(s, "  input {}  output {}", syms(&rt.input), syms(&rt.output));
            if !rt.registers.is_empty() {
                let regs: Vec<&str> = rt.registers.iter().map(|r| &**r).collect();
                let _ = writeln!(s, "  registers {}", regs.join(" "));
            }
            let _ = writeln!(s, "  states {}  initial {}", rt.states.join(" "), rt.states[rt.initial]);
            for (q, a, tr) in rt.transitions() {
                let ups: Vec<String> =
                    tr.updates.iter().enumerate().map(|(r, u)| format!("{} := {}", rt.registers[r], rt.format_regword(u))).collect();
                let _ = writeln!(s, "  delta {} {} -> {} {{ {} }}", rt.states[q], rt.input.get(a), rt.states[tr.target], ups.join(" ; "));
            }
            for (q, o) in rt.output_fn.iter().enumerate() {
                let _ = writeln!(s, "  out {} = {}", rt.states[q], rt.format_regword(o));
            }
        }
        Machine::Hdt0l(h) => {
            let _ = writeln!(s, "hdt0l {}", h.name);
            let _ = writeln!(s, "  input {}  work {}  output {}", syms(&h.input), syms(&h.work), syms(&h.output));
            let _ = writeln!(s, "  init {}", word_text(&h.init));
            let images = |m: &Morphism| {
                m.source.symbols().iter().enumerate().map(|(i, x)| format!("{x} -> {}", word_text(m.image(i)))).collect::<Vec<_>>().join(" , ")
            };
            for (i, r) in h.rules.iter().enumerate() {
                let _ = writeln!(s, "  rule {}: {}", h.input.get(i), images(r));
            }
            let _ = writeln!(s, "  final: {}", images(&h.fin));
        }
        Machine::Tree { rtt, conflicts, bounded } => {
            let _ = writeln!(s, "{} {}", if *bounded { "brtt" } else { "rtt" }, rtt.name);
            let _ = writeln!(s, "  input {}  output {}", syms(&rtt.input), syms(&rtt.output));
            let join = |v: &[std::sync::Arc<str>]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" ");
            if !rtt.tree_regs.is_empty() {
                let _ = writeln!(s, "  tree-registers {}", join(&rtt.tree_regs));
            }
            if !rtt.hole_regs.is_empty() {
                let _ = writeln!(s, "  hole-registers {}", join(&rtt.hole_regs));
            }
            let pairs = conflicts.pairs();
            if !pairs.is_empty() {
                let ps: Vec<String> = pairs.iter().map(|(x, y)| format!("{x} ~ {y}")).collect();
                let _ = writeln!(s, "  conflict {}", ps.join(" , "));
            }
            let _ = writeln!(s, "  states {}  initial {}", rtt.states.join(" "), rtt.states[rtt.initial]);
            for (l, r, a) in rtt.transition_keys() {
                let tr = rtt.transition(l, r, a);
                let mut ups: Vec<String> = rtt.tree_regs.iter().zip(&tr.tree_updates).map(|(x, e)| format!("{x} := {e}")).collect();
                ups.extend(rtt.hole_regs.iter().zip(&tr.hole_updates).map(|(x, e)| format!("{x} := {e}")));
                let _ = writeln!(
                    s,
                    "  delta {} {} {} -> {} {{ {} }}",
                    rtt.states[l],
                    rtt.states[r],
                    rtt.input.get(a),
                    rtt.states[tr.target],
                    ups.join(" ; ")
                );
            }
            for (q, e) in rtt.output_fn.iter().enumerate() {
                let _ = writeln!(s, "  out {} = {e}", rtt.states[q]);
            }
        }
        Machine::Dfa(d) => {
            let _ = writeln!(s, "dfa {}", d.name);
            let acc: Vec<&str> = d.states.iter().zip(&d.accepting).filter(|(_, a)| **a).map(|(q, _)| q.as_str()).collect();
            let _ = writeln!(s, "  alphabet {}  states {}  initial {}", syms(&d.alphabet), d.states.join(" "), d.states[d.initial]);
            let _ = writeln!(s, "  accept {}", acc.join(" "));
            for q in 0..d.states.len() {
                for a in 0..d.alphabet.len() {
                    let _ = writeln!(s, "  delta {} {} -> {}", d.states[q], d.alphabet.get(a), d.states[d.next(q, a)]);
                }
            }
        }
        Machine::Morphism { name, morphism } => {
            let _ = writeln!(s, "morphism {name}");
            let _ = writeln!(s, "  input {}  output {}", syms(&morphism.source), syms(&morphism.target));
            let maps: Vec<String> = morphism
                .source
                .symbols()
                .iter()
                .enumerate()
                .map(|(i, x)| format!("{x} -> {}", word_text(morphism.image(i))))
                .collect();
            let _ = writeln!(s, "  map {}", maps.join(" , "));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::transducer::xy_transducer;
    use crate::trees::examples;

    const XY: &str = "
register-transducer xy
  input a b        output a b        registers X Y
  states q0        initial q0
  delta q0 a -> q0 { X := X a ; Y := a Y }
  delta q0 b -> q0 { X := X b ; Y := b Y }
  out q0 = X Y
";

    fn single(src: &str) -> Machine {
        parse_machines(src, ParseOptions::default()).unwrap().remove(0)
    }

    #[test]
    fn xy_file() {
        let Machine::Transducer { rt, .. } = single(XY) else { panic!() };
        assert_eq!(rt.run(&Word::from_chars("ab")), Word::from_chars("abba"));
        let again = write_machine(&Machine::Transducer { rt: rt.clone(), require_copyless: false });
        let Machine::Transducer { rt: back, .. } = single(&again) else { panic!() };
        assert_eq!(write_machine(&Machine::Transducer { rt: back, require_copyless: false }), again);
        let built = xy_transducer(&Alphabet::from_chars("ab"));
        for w in Alphabet::from_chars("ab").words_up_to(4) {
            assert_eq!(rt.run(&w), built.run(&w));
        }
    }

    #[test]
    fn missing_pieces() {
        let partial = XY.replace("  delta q0 b -> q0 { X := X b ; Y := b Y }\n", "");
        let e = parse_machines(&partial, ParseOptions::default()).unwrap_err();
        assert!(e.message.contains("missing transition"), "{e}");
        assert!(parse_machines(&partial, ParseOptions { complete_delta: true }).is_ok());
        let no_y = XY.replace(" ; Y := a Y", "");
        assert!(parse_machines(&no_y, ParseOptions::default()).is_err());
        let Machine::Transducer { rt, .. } = parse_machines(&no_y, ParseOptions { complete_delta: true }).unwrap().remove(0) else {
            panic!()
        };
        assert_eq!(rt.run(&Word::from_chars("ab")), Word::from_chars("abb"));
        let bad = XY.replace("X a ;", "X z ;");
        assert_eq!(parse_machines(&bad, ParseOptions::default()).unwrap_err().line, 5);
        assert!(parse_machines(&XY.replace("input a b", "input _a b"), ParseOptions::default()).is_err());
    }

    #[test]
    fn hdt0l_file() {
        let src = "hdt0l double input a b work x output a init x\n  rule a: x -> x x\n  rule b: x -> x x\n  final: x -> a\n";
        let Machine::Hdt0l(h) = single(src) else { panic!() };
        assert_eq!(h.run(&Word::from_chars("bb")), Word::from_chars("aaaa"));
        let Machine::Hdt0l(back) = single(&write_machine(&Machine::Hdt0l(h.clone()))) else { panic!() };
        assert_eq!(back.run(&Word::from_chars("aba")), h.run(&Word::from_chars("aba")));
    }

    #[test]
    fn tree_files_roundtrip() {
        let sigma = Alphabet::from_chars("ab");
        let (swap, rel) = examples::conditional_swap(&sigma);
        for (rtt, conflicts) in [(examples::spine(&sigma), None), (examples::mirror(&sigma), None), (swap, Some(rel))] {
            let conflicts = conflicts.unwrap_or_else(|| ConflictRelation::identity(rtt.carrier()));
            let text = write_machine(&Machine::Tree { rtt: rtt.clone(), conflicts: conflicts.clone(), bounded: true });
            let Machine::Tree { rtt: back, conflicts: c2, .. } = single(&text) else { panic!() };
            assert_eq!(c2.pairs(), conflicts.pairs());
            for t in crate::trees::tree::BinTree::enumerate(&sigma, 7) {
                assert_eq!(back.run(&t), rtt.run(&t), "{text}");
            }
        }
        let bad = "rtt r input a output a tree-registers X states q initial q\n delta q q a -> q { X := box }\n out q = X";
        assert!(parse_machines(bad, ParseOptions::default()).unwrap_err().message.contains("one-hole"));
    }

    #[test]
    fn dfa_morphism_and_pipeline() {
        let src = "dfa even alphabet a b states e o initial e accept e\n delta e a -> o\n delta o a -> e\n delta e b -> e\n delta o b -> o\n\
                   morphism m input a b output a b map a -> a b , b -> eps\n\
                   squaring-pipeline sq input 1 2\n";
        let ms = parse_machines(src, ParseOptions::default()).unwrap();
        assert_eq!(ms.len(), 6);
        let Machine::Dfa(d) = &ms[0] else { panic!() };
        assert!(d.accepts(&Word::from_chars("aba")));
        let Machine::Morphism { morphism, .. } = &ms[1] else { panic!() };
        assert_eq!(morphism.apply(&Word::from_chars("ba")), Word::from_chars("ab"));
        for m in &ms[..2] {
            let text = write_machine(m);
            assert_eq!(write_machine(&single(&text)), text);
        }
    }
}
