//! Tree expressions over tree-valued and one-hole-valued variables.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::tree::{BinTree, OneHoleTree};
use crate::symbol::Symbol;

/// Which child a register reference reads from.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn marker(self) -> char {
        match self {
            Side::Left => '<',
            Side::Right => '>',
        }
    }
}

/// A variable of an expression: a register name, optionally tagged with the
/// child it is read from (`X<`, `X>`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TVar {
    pub name: Arc<str>,
    pub side: Option<Side>,
}

impl TVar {
    pub fn plain(name: &str) -> TVar {
        TVar { name: Arc::from(name), side: None }
    }

    pub fn sided(name: &str, side: Side) -> TVar {
        TVar { name: Arc::from(name), side: Some(side) }
    }
}

impl fmt::Display for TVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if let Some(s) = self.side {
            write!(f, "{}", s.marker())?;
        }
        Ok(())
    }
}

impl fmt::Debug for TVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `E, F ::= ⟨⟩ | x | a⟨E, F⟩ | E′[E]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TreeExpr {
    Leaf,
    Var(TVar),
    Node(Symbol, Box<TreeExpr>, Box<TreeExpr>),
    Plug(Box<HoleExpr>, Box<TreeExpr>),
}

/// `E′, F′ ::= □ | x′ | a⟨E′, E⟩ | a⟨E, E′⟩ | E′[F′]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum HoleExpr {
    Hole,
    Var(TVar),
    NodeL(Symbol, Box<HoleExpr>, Box<TreeExpr>),
    NodeR(Symbol, Box<TreeExpr>, Box<HoleExpr>),
    Compose(Box<HoleExpr>, Box<HoleExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(TVar),
}

/// Either kind of expression, for code that treats updates uniformly.
#[derive(Clone, Copy)]
pub enum AnyExpr<'a> {
    Tree(&'a TreeExpr),
    Hole(&'a HoleExpr),
}

impl AnyExpr<'_> {
    pub fn occurrences(&self) -> Vec<TVar> {
        match self {
            AnyExpr::Tree(e) => e.occurrences(),
            AnyExpr::Hole(e) => e.occurrences(),
        }
    }

    pub fn vars(&self) -> BTreeSet<TVar> {
        self.occurrences().into_iter().collect()
    }
}

/// Every variable occurring in the expression, duplicates kept, left to right.
fn occ_tree(e: &TreeExpr, out: &mut Vec<TVar>) {
    match e {
        TreeExpr::Leaf => {}
        TreeExpr::Var(v) => out.push(v.clone()),
        TreeExpr::Node(_, l, r) => {
            occ_tree(l, out);
            occ_tree(r, out);
        }
        TreeExpr::Plug(h, t) => {
            occ_hole(h, out);
            occ_tree(t, out);
        }
    }
}

fn occ_hole(e: &HoleExpr, out: &mut Vec<TVar>) {
    match e {
        HoleExpr::Hole => {}
        HoleExpr::Var(v) => out.push(v.clone()),
        HoleExpr::NodeL(_, h, t) => {
            occ_hole(h, out);
            occ_tree(t, out);
        }
        HoleExpr::NodeR(_, t, h) => {
            occ_tree(t, out);
            occ_hole(h, out);
        }
        HoleExpr::Compose(a, b) => {
            occ_hole(a, out);
            occ_hole(b, out);
        }
    }
}

pub type TreeEnv = HashMap<TVar, BinTree>;
pub type HoleEnv = HashMap<TVar, OneHoleTree>;

impl TreeExpr {
    pub fn node(a: impl Into<Symbol>, l: TreeExpr, r: TreeExpr) -> TreeExpr {
        TreeExpr::Node(a.into(), Box::new(l), Box::new(r))
    }

    pub fn var(v: TVar) -> TreeExpr {
        TreeExpr::Var(v)
    }

    pub fn occurrences(&self) -> Vec<TVar> {
        let mut out = Vec::new();
        occ_tree(self, &mut out);
        out
    }

    pub fn labels(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            TreeExpr::Leaf | TreeExpr::Var(_) => {}
            TreeExpr::Node(a, l, r) => {
                out.insert(a.clone());
                l.labels(out);
                r.labels(out);
            }
            TreeExpr::Plug(h, t) => {
                h.labels(out);
                t.labels(out);
            }
        }
    }

    pub fn eval(&self, rho: &TreeEnv, rho_h: &HoleEnv) -> Result<BinTree, EvalError> {
        self.eval_with(&|v| rho.get(v).cloned(), &|v| rho_h.get(v).cloned())
    }

    pub fn eval_with(
        &self,
        rho: &dyn Fn(&TVar) -> Option<BinTree>,
        rho_h: &dyn Fn(&TVar) -> Option<OneHoleTree>,
    ) -> Result<BinTree, EvalError> {
        match self {
            TreeExpr::Leaf => Ok(BinTree::Leaf),
            TreeExpr::Var(v) => rho(v).ok_or_else(|| EvalError::UnboundVariable(v.clone())),
            TreeExpr::Node(a, l, r) => Ok(BinTree::Node(
                a.clone(),
                Arc::new(l.eval_with(rho, rho_h)?),
                Arc::new(r.eval_with(rho, rho_h)?),
            )),
            TreeExpr::Plug(h, t) => Ok(h.eval_with(rho, rho_h)?.plug(&t.eval_with(rho, rho_h)?)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            TreeExpr::Leaf | TreeExpr::Var(_) => 1,
            TreeExpr::Node(_, l, r) => 1 + l.size() + r.size(),
            TreeExpr::Plug(h, t) => 1 + h.size() + t.size(),
        }
    }
}

impl HoleExpr {
    pub fn occurrences(&self) -> Vec<TVar> {
        let mut out = Vec::new();
        occ_hole(self, &mut out);
        out
    }

    pub fn labels(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            HoleExpr::Hole | HoleExpr::Var(_) => {}
            HoleExpr::NodeL(a, h, t) | HoleExpr::NodeR(a, t, h) => {
                out.insert(a.clone());
                h.labels(out);
                t.labels(out);
            }
            HoleExpr::Compose(a, b) => {
                a.labels(out);
                b.labels(out);
            }
        }
    }

    pub fn eval(&self, rho: &TreeEnv, rho_h: &HoleEnv) -> Result<OneHoleTree, EvalError> {
        self.eval_with(&|v| rho.get(v).cloned(), &|v| rho_h.get(v).cloned())
    }

    pub fn eval_with(
        &self,
        rho: &dyn Fn(&TVar) -> Option<BinTree>,
        rho_h: &dyn Fn(&TVar) -> Option<OneHoleTree>,
    ) -> Result<OneHoleTree, EvalError> {
        match self {
            HoleExpr::Hole => Ok(OneHoleTree::Hole),
            HoleExpr::Var(v) => rho_h(v).ok_or_else(|| EvalError::UnboundVariable(v.clone())),
            HoleExpr::NodeL(a, h, t) => Ok(OneHoleTree::NodeL(
                a.clone(),
                Arc::new(h.eval_with(rho, rho_h)?),
                Arc::new(t.eval_with(rho, rho_h)?),
            )),
            HoleExpr::NodeR(a, t, h) => Ok(OneHoleTree::NodeR(
                a.clone(),
                Arc::new(t.eval_with(rho, rho_h)?),
                Arc::new(h.eval_with(rho, rho_h)?),
            )),
            HoleExpr::Compose(a, b) => Ok(a.eval_with(rho, rho_h)?.compose(&b.eval_with(rho, rho_h)?)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            HoleExpr::Hole | HoleExpr::Var(_) => 1,
            HoleExpr::NodeL(_, h, t) | HoleExpr::NodeR(_, t, h) => 1 + h.size() + t.size(),
            HoleExpr::Compose(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for TreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeExpr::Leaf => f.write_str("()"),
            TreeExpr::Var(v) => write!(f, "{v}"),
            TreeExpr::Node(a, l, r) => write!(f, "{a}({l}, {r})"),
            TreeExpr::Plug(h, t) => write!(f, "{h}[{t}]"),
        }
    }
}

impl fmt::Display for HoleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HoleExpr::Hole => f.write_str("box"),
            HoleExpr::Var(v) => write!(f, "{v}"),
            HoleExpr::NodeL(a, h, t) => write!(f, "{a}({h}, {t})"),
            HoleExpr::NodeR(a, t, h) => write!(f, "{a}({t}, {h})"),
            HoleExpr::Compose(a, b) => write!(f, "{a}[{b}]"),
        }
    }
}

impl fmt::Debug for TreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Debug for HoleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_examples() {
        let x = TVar::plain("x");
        let y = TVar::plain("y");
        let xh = TVar::plain("x'");
        let u = BinTree::node("b", BinTree::Leaf, BinTree::Leaf);
        let h = OneHoleTree::NodeR("a".into(), Arc::new(BinTree::Leaf), Arc::new(OneHoleTree::Hole));
        let rho: TreeEnv = [(x.clone(), u.clone()), (y.clone(), BinTree::Leaf)].into_iter().collect();
        let rho_h: HoleEnv = [(xh.clone(), h.clone())].into_iter().collect();
        assert_eq!(TreeExpr::Var(x.clone()).eval(&rho, &rho_h).unwrap(), u);
        let e = TreeExpr::Plug(Box::new(HoleExpr::Var(xh)), Box::new(TreeExpr::Var(y)));
        assert_eq!(e.eval(&rho, &rho_h).unwrap(), h.plug(&BinTree::Leaf));
        let unbound = TreeExpr::Var(TVar::plain("z"));
        assert!(matches!(unbound.eval(&rho, &rho_h), Err(EvalError::UnboundVariable(_))));
    }

    #[test]
    fn occurrences_keep_duplicates() {
        let x = TVar::sided("X", Side::Left);
        let e = TreeExpr::node("a", TreeExpr::Var(x.clone()), TreeExpr::Var(x.clone()));
        assert_eq!(e.occurrences(), vec![x.clone(), x]);
        assert_eq!(e.to_string(), "a(X<, X<)");
    }
}
