//! Register tree transducers, conflict relations and the BRTT condition.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::expr::{AnyExpr, HoleExpr, Side, TVar, TreeExpr};
use super::tree::{BinTree, OneHoleTree};
use crate::symbol::{Alphabet, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RttError {
    #[error("machine has no states")]
    NoStates,
    #[error("register `{0}` declared twice")]
    DuplicateRegister(String),
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("missing transition for ({0}, {1}, {2})")]
    MissingTransition(String, String, Symbol),
    #[error("{context}: {message}")]
    BadExpression { context: String, message: String },
    #[error("output label `{0}` is not in the output alphabet")]
    LabelNotInOutput(Symbol),
    #[error("at most {max} registers are supported, got {got}")]
    TooManyRegisters { max: usize, got: usize },
    #[error("unknown register `{0}` in conflict relation")]
    UnknownConflictRegister(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RttTransition {
    pub target: usize,
    pub tree_updates: Vec<TreeExpr>,
    pub hole_updates: Vec<HoleExpr>,
}

/// A register tree transducer. States and registers are ordered by
/// declaration; that order fixes every index used by the compilers.
#[derive(Clone, Debug)]
pub struct Rtt {
    pub name: String,
    pub input: Alphabet,
    pub output: Alphabet,
    pub states: Vec<String>,
    pub initial: usize,
    pub tree_regs: Vec<Arc<str>>,
    pub hole_regs: Vec<Arc<str>>,
    pub output_fn: Vec<TreeExpr>,
    delta: Vec<RttTransition>,
}

/// Position of one transition: `δ(q◁, q▷, a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionId {
    pub left: String,
    pub right: String,
    pub label: Symbol,
}

impl fmt::Display for TransitionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "delta({}, {}, {})", self.left, self.right, self.label)
    }
}

/// A run-time configuration: state and register contents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RttConfig {
    pub state: usize,
    pub tree: Vec<BinTree>,
    pub hole: Vec<OneHoleTree>,
}

pub struct RttBuilder {
    pub name: String,
    pub input: Alphabet,
    pub output: Alphabet,
    pub states: Vec<String>,
    pub initial: usize,
    pub tree_regs: Vec<String>,
    pub hole_regs: Vec<String>,
    pub output_fn: Vec<TreeExpr>,
    /// Keyed by (left state, right state, input label index).
    pub delta: HashMap<(usize, usize, usize), RttTransition>,
}

impl RttBuilder {
    pub fn build(self) -> Result<Rtt, RttError> {
        if self.states.is_empty() {
            return Err(RttError::NoStates);
        }
        for (i, s) in self.states.iter().enumerate() {
            if self.states[..i].contains(s) {
                return Err(RttError::DuplicateState(s.clone()));
            }
        }
        let all: Vec<&String> = self.tree_regs.iter().chain(self.hole_regs.iter()).collect();
        for (i, r) in all.iter().enumerate() {
            if all[..i].contains(r) {
                return Err(RttError::DuplicateRegister((*r).clone()));
            }
        }
        let nq = self.states.len();
        let mut delta = Vec::with_capacity(self.input.len() * nq * nq);
        let mut map = self.delta;
        for a in 0..self.input.len() {
            for ql in 0..nq {
                for qr in 0..nq {
                    let tr = map.remove(&(ql, qr, a)).ok_or_else(|| {
                        RttError::MissingTransition(self.states[ql].clone(), self.states[qr].clone(), self.input.get(a).clone())
                    })?;
                    delta.push(tr);
                }
            }
        }
        let rtt = Rtt {
            name: self.name,
            input: self.input,
            output: self.output,
            states: self.states,
            initial: self.initial,
            tree_regs: self.tree_regs.iter().map(|s| Arc::from(s.as_str())).collect(),
            hole_regs: self.hole_regs.iter().map(|s| Arc::from(s.as_str())).collect(),
            output_fn: self.output_fn,
            delta,
        };
        rtt.validate()?;
        Ok(rtt)
    }
}

impl Rtt {
    pub fn transition(&self, left: usize, right: usize, label: usize) -> &RttTransition {
        let nq = self.states.len();
        &self.delta[(label * nq + left) * nq + right]
    }

    pub fn transition_id(&self, left: usize, right: usize, label: usize) -> TransitionId {
        TransitionId {
            left: self.states[left].clone(),
            right: self.states[right].clone(),
            label: self.input.get(label).clone(),
        }
    }

    /// Every `(q◁, q▷, a)` in label-major order.
    pub fn transition_keys(&self) -> Vec<(usize, usize, usize)> {
        let nq = self.states.len();
        let mut out = Vec::new();
        for a in 0..self.input.len() {
            for l in 0..nq {
                for r in 0..nq {
                    out.push((l, r, a));
                }
            }
        }
        out
    }

    pub fn tree_index(&self, name: &str) -> Option<usize> {
        self.tree_regs.iter().position(|r| &**r == name)
    }

    pub fn hole_index(&self, name: &str) -> Option<usize> {
        self.hole_regs.iter().position(|r| &**r == name)
    }

    /// All registers, tree registers first.
    pub fn carrier(&self) -> Vec<Arc<str>> {
        self.tree_regs.iter().chain(self.hole_regs.iter()).cloned().collect()
    }

    fn validate(&self) -> Result<(), RttError> {
        let check_vars = |context: String, tree_vars: Vec<TVar>, hole_vars: Vec<TVar>, sided: bool| -> Result<(), RttError> {
            for v in &tree_vars {
                if self.tree_index(&v.name).is_none() || v.side.is_some() != sided {
                    return Err(RttError::BadExpression { context, message: format!("`{v}` is not a tree-register reference here") });
                }
            }
            for v in &hole_vars {
                if self.hole_index(&v.name).is_none() || v.side.is_some() != sided {
                    return Err(RttError::BadExpression { context, message: format!("`{v}` is not a hole-register reference here") });
                }
            }
            Ok(())
        };
        for (q, e) in self.output_fn.iter().enumerate() {
            let (t, h) = split_tree(e);
            check_vars(format!("output of state {}", self.states[q]), t, h, false)?;
        }
        if self.output_fn.len() != self.states.len() {
            return Err(RttError::BadExpression { context: "output".into(), message: "one output expression per state required".into() });
        }
        let mut labels = BTreeSet::new();
        for e in &self.output_fn {
            e.labels(&mut labels);
        }
        for (l, r, a) in self.transition_keys() {
            let tr = self.transition(l, r, a);
            let ctx = self.transition_id(l, r, a).to_string();
            if tr.target >= self.states.len() || tr.tree_updates.len() != self.tree_regs.len() || tr.hole_updates.len() != self.hole_regs.len() {
                return Err(RttError::BadExpression { context: ctx, message: "malformed transition".into() });
            }
            for e in &tr.tree_updates {
                let (t, h) = split_tree(e);
                check_vars(ctx.clone(), t, h, true)?;
                e.labels(&mut labels);
            }
            for e in &tr.hole_updates {
                let (t, h) = split_hole(e);
                check_vars(ctx.clone(), t, h, true)?;
                e.labels(&mut labels);
            }
        }
        for a in labels {
            if !self.output.contains(&a) {
                return Err(RttError::LabelNotInOutput(a));
            }
        }
        Ok(())
    }

    pub fn initial_config(&self) -> RttConfig {
        RttConfig {
            state: self.initial,
            tree: vec![BinTree::Leaf; self.tree_regs.len()],
            hole: vec![OneHoleTree::Hole; self.hole_regs.len()],
        }
    }

    /// The configuration reached at the root of `t`.
    pub fn run_config(&self, t: &BinTree) -> RttConfig {
        match t {
            BinTree::Leaf => self.initial_config(),
            BinTree::Node(a, l, r) => {
                let cl = self.run_config(l);
                let cr = self.run_config(r);
                let label = self.input.index_of(a).expect("input label in alphabet");
                self.step(&cl, &cr, label)
            }
        }
    }

    /// Combine sibling configurations through `δ(q◁, q▷, a)`.
    pub fn step(&self, cl: &RttConfig, cr: &RttConfig, label: usize) -> RttConfig {
        let tr = self.transition(cl.state, cr.state, label);
        let pick = |v: &TVar| match v.side {
            Some(Side::Left) => cl,
            _ => cr,
        };
        let rho = |v: &TVar| self.tree_index(&v.name).map(|i| pick(v).tree[i].clone());
        let rho_h = |v: &TVar| self.hole_index(&v.name).map(|i| pick(v).hole[i].clone());
        RttConfig {
            state: tr.target,
            tree: tr.tree_updates.iter().map(|e| e.eval_with(&rho, &rho_h).expect("validated update")).collect(),
            hole: tr.hole_updates.iter().map(|e| e.eval_with(&rho, &rho_h).expect("validated update")).collect(),
        }
    }

    pub fn output_of(&self, c: &RttConfig) -> BinTree {
        let rho = |v: &TVar| self.tree_index(&v.name).map(|i| c.tree[i].clone());
        let rho_h = |v: &TVar| self.hole_index(&v.name).map(|i| c.hole[i].clone());
        self.output_fn[c.state].eval_with(&rho, &rho_h).expect("validated output")
    }

    /// Direct bottom-up semantics.
    pub fn run(&self, t: &BinTree) -> BinTree {
        self.output_of(&self.run_config(t))
    }

    /// For every internal node (post-order), the set of registers whose
    /// value at that node flows into the final output.
    pub fn output_relevant_sets(&self, t: &BinTree) -> Vec<BTreeSet<Arc<str>>> {
        let root = self.run_config(t);
        let used: BTreeSet<Arc<str>> = self.output_fn[root.state].occurrences().into_iter().map(|v| v.name).collect();
        let mut out = Vec::new();
        self.relevant_walk(t, used, &mut out);
        out
    }

    fn relevant_walk(&self, t: &BinTree, used: BTreeSet<Arc<str>>, out: &mut Vec<BTreeSet<Arc<str>>>) {
        if let BinTree::Node(a, l, r) = t {
            let cl = self.run_config(l);
            let cr = self.run_config(r);
            let label = self.input.index_of(a).expect("input label in alphabet");
            let tr = self.transition(cl.state, cr.state, label);
            let mut left = BTreeSet::new();
            let mut right = BTreeSet::new();
            for y in &used {
                for v in self.update_of(tr, y).occurrences() {
                    match v.side {
                        Some(Side::Left) => left.insert(v.name),
                        _ => right.insert(v.name),
                    };
                }
            }
            self.relevant_walk(l, left, out);
            self.relevant_walk(r, right, out);
        }
        out.push(used);
    }

    /// The update expression of register `y` in `tr`.
    pub fn update_of<'a>(&self, tr: &'a RttTransition, y: &str) -> AnyExpr<'a> {
        match self.tree_index(y) {
            Some(i) => AnyExpr::Tree(&tr.tree_updates[i]),
            None => AnyExpr::Hole(&tr.hole_updates[self.hole_index(y).expect("declared register")]),
        }
    }

    /// Update of the `k`-th register of the carrier (tree registers first).
    pub fn update_at<'a>(&self, tr: &'a RttTransition, k: usize) -> AnyExpr<'a> {
        if k < self.tree_regs.len() {
            AnyExpr::Tree(&tr.tree_updates[k])
        } else {
            AnyExpr::Hole(&tr.hole_updates[k - self.tree_regs.len()])
        }
    }
}

fn split_tree(e: &TreeExpr) -> (Vec<TVar>, Vec<TVar>) {
    let mut t = Vec::new();
    let mut h = Vec::new();
    split_t(e, &mut t, &mut h);
    (t, h)
}

fn split_hole(e: &HoleExpr) -> (Vec<TVar>, Vec<TVar>) {
    let mut t = Vec::new();
    let mut h = Vec::new();
    split_h(e, &mut t, &mut h);
    (t, h)
}

fn split_t(e: &TreeExpr, t: &mut Vec<TVar>, h: &mut Vec<TVar>) {
    match e {
        TreeExpr::Leaf => {}
        TreeExpr::Var(v) => t.push(v.clone()),
        TreeExpr::Node(_, a, b) => {
            split_t(a, t, h);
            split_t(b, t, h);
        }
        TreeExpr::Plug(a, b) => {
            split_h(a, t, h);
            split_t(b, t, h);
        }
    }
}

fn split_h(e: &HoleExpr, t: &mut Vec<TVar>, h: &mut Vec<TVar>) {
    match e {
        HoleExpr::Hole => {}
        HoleExpr::Var(v) => h.push(v.clone()),
        HoleExpr::NodeL(_, a, b) | HoleExpr::NodeR(_, b, a) => {
            split_h(a, t, h);
            split_t(b, t, h);
        }
        HoleExpr::Compose(a, b) => {
            split_h(a, t, h);
            split_h(b, t, h);
        }
    }
}

pub const MAX_CONFLICT_CARRIER: usize = 16;

/// A reflexive, symmetric relation over a finite ordered carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictRelation {
    carrier: Vec<Arc<str>>,
    matrix: Vec<Vec<bool>>,
}

impl ConflictRelation {
    /// The reflexive symmetric closure of `pairs`.
    pub fn new(carrier: Vec<Arc<str>>, pairs: &[(String, String)]) -> Result<Self, RttError> {
        let n = carrier.len();
        let mut matrix = vec![vec![false; n]; n];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in pairs {
            let i = carrier.iter().position(|c| **c == **a).ok_or_else(|| RttError::UnknownConflictRegister(a.clone()))?;
            let j = carrier.iter().position(|c| **c == **b).ok_or_else(|| RttError::UnknownConflictRegister(b.clone()))?;
            matrix[i][j] = true;
            matrix[j][i] = true;
        }
        Ok(ConflictRelation { carrier, matrix })
    }

    pub fn identity(carrier: Vec<Arc<str>>) -> Self {
        ConflictRelation::new(carrier, &[]).expect("no pairs")
    }

    pub fn carrier(&self) -> &[Arc<str>] {
        &self.carrier
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.carrier.iter().position(|c| &**c == name)
    }

    pub fn conflicts(&self, i: usize, j: usize) -> bool {
        self.matrix[i][j]
    }

    pub fn conflicts_by_name(&self, a: &str, b: &str) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.matrix[i][j],
            _ => false,
        }
    }

    /// Declared non-reflexive pairs, each once.
    pub fn pairs(&self) -> Vec<(Arc<str>, Arc<str>)> {
        let mut out = Vec::new();
        for i in 0..self.carrier.len() {
            for j in i + 1..self.carrier.len() {
                if self.matrix[i][j] {
                    out.push((self.carrier[i].clone(), self.carrier[j].clone()));
                }
            }
        }
        out
    }

    pub fn is_nonconflicting(&self, mask: u32) -> bool {
        let n = self.carrier.len();
        for i in 0..n {
            if mask & (1 << i) == 0 {
                continue;
            }
            for j in i + 1..n {
                if mask & (1 << j) != 0 && self.matrix[i][j] {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_nonconflicting_names<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> bool {
        let idx: Vec<usize> = names.into_iter().filter_map(|n| self.index_of(n)).collect();
        idx.iter().enumerate().all(|(k, &i)| idx[k + 1..].iter().all(|&j| i == j || !self.matrix[i][j]))
    }

    /// Every non-conflicting subset as a bitmask over the carrier, ascending.
    pub fn nonconflicting_subsets(&self) -> Result<Vec<u32>, RttError> {
        let n = self.carrier.len();
        if n > MAX_CONFLICT_CARRIER {
            return Err(RttError::TooManyRegisters { max: MAX_CONFLICT_CARRIER, got: n });
        }
        Ok((0..(1u32 << n)).filter(|&m| self.is_nonconflicting(m)).collect())
    }

    pub fn mask_names(&self, mask: u32) -> Vec<Arc<str>> {
        (0..self.carrier.len()).filter(|i| mask & (1 << i) != 0).map(|i| self.carrier[i].clone()).collect()
    }
}

/// Why a machine fails the BRTT condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BrttViolation {
    OutputNotLinear { state: String, var: TVar },
    OutputConflicting { state: String, vars: Vec<TVar> },
    UpdateNotLinear { transition: TransitionId, register: String, var: TVar },
    /// Two registers of a non-conflicting set read the same child register.
    SharedSource { transition: TransitionId, registers: (String, String), var: TVar },
    /// The union of sources of a non-conflicting set is conflicting.
    ConflictingSources { transition: TransitionId, registers: Vec<String>, vars: (TVar, TVar) },
}

impl fmt::Display for BrttViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BrttViolation::OutputNotLinear { state, var } => write!(f, "output of {state} uses {var} more than once"),
            BrttViolation::OutputConflicting { state, vars } => {
                write!(f, "output of {state} uses conflicting registers {:?}", vars)
            }
            BrttViolation::UpdateNotLinear { transition, register, var } => {
                write!(f, "{transition}: update of {register} uses {var} more than once")
            }
            BrttViolation::SharedSource { transition, registers, var } => write!(
                f,
                "{transition}: non-conflicting registers {} and {} both read {var}",
                registers.0, registers.1
            ),
            BrttViolation::ConflictingSources { transition, registers, vars } => write!(
                f,
                "{transition}: sources of {:?} include conflicting {} and {}",
                registers, vars.0, vars.1
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BrttReport {
    pub violations: Vec<BrttViolation>,
}

impl BrttReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for BrttReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn first_duplicate(occ: &[TVar]) -> Option<TVar> {
    occ.iter().enumerate().find(|(i, v)| occ[..*i].contains(v)).map(|(_, v)| v.clone())
}

/// Conflict on sided variables: never across sides.
fn lifted_conflict(rel: &ConflictRelation, a: &TVar, b: &TVar) -> bool {
    a.side == b.side && rel.conflicts_by_name(&a.name, &b.name)
}

/// Consistency of an expression: linear, and its variables non-conflicting.
pub fn check_consistency(e: AnyExpr<'_>, rel: &ConflictRelation) -> bool {
    let occ = e.occurrences();
    first_duplicate(&occ).is_none() && rel.is_nonconflicting_names(occ.iter().map(|v| &*v.name))
}

fn check_outputs(rtt: &Rtt, rel: &ConflictRelation, report: &mut BrttReport) {
    for (q, e) in rtt.output_fn.iter().enumerate() {
        let occ = e.occurrences();
        if let Some(var) = first_duplicate(&occ) {
            report.violations.push(BrttViolation::OutputNotLinear { state: rtt.states[q].clone(), var });
        }
        if !rel.is_nonconflicting_names(occ.iter().map(|v| &*v.name)) {
            report.violations.push(BrttViolation::OutputConflicting { state: rtt.states[q].clone(), vars: occ });
        }
    }
}

fn check_update_linearity(rtt: &Rtt, carrier: &[Arc<str>], tr: &RttTransition, id: &TransitionId, report: &mut BrttReport) {
    for (k, y) in carrier.iter().enumerate() {
        if let Some(var) = first_duplicate(&rtt.update_at(tr, k).occurrences()) {
            report.violations.push(BrttViolation::UpdateNotLinear { transition: id.clone(), register: y.to_string(), var });
        }
    }
}

/// The BRTT condition in its non-conflicting-subset form.
pub fn check_brtt(rtt: &Rtt, rel: &ConflictRelation) -> Result<BrttReport, RttError> {
    let mut report = BrttReport::default();
    check_outputs(rtt, rel, &mut report);
    let carrier = rtt.carrier();
    let subsets = rel.nonconflicting_subsets()?;
    for (l, r, a) in rtt.transition_keys() {
        let tr = rtt.transition(l, r, a);
        let id = rtt.transition_id(l, r, a);
        check_update_linearity(rtt, &carrier, tr, &id, &mut report);
        let sources: Vec<BTreeSet<TVar>> = (0..carrier.len()).map(|k| rtt.update_at(tr, k).vars()).collect();
        let mut seen_shared = BTreeSet::new();
        let mut seen_conflict = BTreeSet::new();
        for &p in &subsets {
            let members: Vec<usize> = (0..carrier.len()).filter(|i| p & (1 << i) != 0).collect();
            for (x, &i) in members.iter().enumerate() {
                for &j in &members[x + 1..] {
                    if let Some(v) = sources[i].intersection(&sources[j]).next() {
                        if seen_shared.insert((i, j)) {
                            report.violations.push(BrttViolation::SharedSource {
                                transition: id.clone(),
                                registers: (carrier[i].to_string(), carrier[j].to_string()),
                                var: v.clone(),
                            });
                        }
                    }
                }
            }
            let union: Vec<&TVar> = members.iter().flat_map(|&i| sources[i].iter()).collect();
            'outer: for (x, u) in union.iter().enumerate() {
                for v in &union[x + 1..] {
                    if u != v && lifted_conflict(rel, u, v) {
                        let key = ((*u).clone(), (*v).clone());
                        if seen_conflict.insert(key) {
                            report.violations.push(BrttViolation::ConflictingSources {
                                transition: id.clone(),
                                registers: members.iter().map(|&i| carrier[i].to_string()).collect(),
                                vars: ((*u).clone(), (*v).clone()),
                            });
                        }
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The BRTT condition in its original pairwise form: whenever `x₁ ⌢ x₂`
/// and `(x₁, z)`, `(x₂, z)` are read by the updates of `y₁`, `y₂`, then
/// `y₁ ⌢ y₂`.
pub fn check_brtt_original(rtt: &Rtt, rel: &ConflictRelation) -> BrttReport {
    let mut report = BrttReport::default();
    for (q, e) in rtt.output_fn.iter().enumerate() {
        if !check_consistency(AnyExpr::Tree(e), rel) {
            let occ = e.occurrences();
            match first_duplicate(&occ) {
                Some(var) => report.violations.push(BrttViolation::OutputNotLinear { state: rtt.states[q].clone(), var }),
                None => report.violations.push(BrttViolation::OutputConflicting { state: rtt.states[q].clone(), vars: occ }),
            }
        }
    }
    let carrier = rtt.carrier();
    for (l, r, a) in rtt.transition_keys() {
        let tr = rtt.transition(l, r, a);
        let id = rtt.transition_id(l, r, a);
        // Consistency of each update with the lifted relation.
        for (k, y) in carrier.iter().enumerate() {
            let occ = rtt.update_at(tr, k).occurrences();
            if let Some(var) = first_duplicate(&occ) {
                report.violations.push(BrttViolation::UpdateNotLinear { transition: id.clone(), register: y.to_string(), var });
            }
        }
        let sources: Vec<Vec<TVar>> = (0..carrier.len()).map(|k| rtt.update_at(tr, k).occurrences()).collect();
        for (y1, s1) in sources.iter().enumerate() {
            for (y2, s2) in sources.iter().enumerate() {
                if y1 > y2 || rel.conflicts(y1, y2) {
                    continue;
                }
                let bad = s1.iter().find_map(|u| s2.iter().find(|v| lifted_conflict(rel, u, v)).map(|v| (u.clone(), v.clone())));
                if let Some((u, v)) = bad {
                    report.violations.push(BrttViolation::ConflictingSources {
                        transition: id.clone(),
                        registers: vec![carrier[y1].to_string(), carrier[y2].to_string()],
                        vars: (u, v),
                    });
                }
            }
            // Within one expression, distinct conflicting variables.
            for (x, u) in s1.iter().enumerate() {
                if let Some(v) = s1[x + 1..].iter().find(|v| *v != u && lifted_conflict(rel, u, v)) {
                    report.violations.push(BrttViolation::ConflictingSources {
                        transition: id.clone(),
                        registers: vec![carrier[y1].to_string()],
                        vars: (u.clone(), v.clone()),
                    });
                    break;
                }
            }
        }
    }
    report
}
