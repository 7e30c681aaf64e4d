//! Small reference machines used by tests, the generator and the CLI.

use std::collections::HashMap;

use super::expr::{HoleExpr, Side, TVar, TreeExpr};
use super::rtt::{ConflictRelation, Rtt, RttBuilder, RttTransition};
use crate::symbol::Alphabet;

fn tv(name: &str, side: Side) -> TreeExpr {
    TreeExpr::Var(TVar::sided(name, side))
}

fn single_state(name: &str, sigma: &Alphabet, update: impl Fn(&crate::symbol::Symbol) -> TreeExpr) -> Rtt {
    let mut delta = HashMap::new();
    for (a, s) in sigma.symbols().iter().enumerate() {
        delta.insert((0, 0, a), RttTransition { target: 0, tree_updates: vec![update(s)], hole_updates: vec![] });
    }
    RttBuilder {
        name: name.into(),
        input: sigma.clone(),
        output: sigma.clone(),
        states: vec!["q".into()],
        initial: 0,
        tree_regs: vec!["X".into()],
        hole_regs: vec![],
        output_fn: vec![TreeExpr::Var(TVar::plain("X"))],
        delta,
    }
    .build()
    .expect("well-formed example")
}

/// `X := a⟨X<, X>⟩`, output `X`.
pub fn identity(sigma: &Alphabet) -> Rtt {
    single_state("identity", sigma, |s| TreeExpr::node(s.clone(), tv("X", Side::Left), tv("X", Side::Right)))
}

/// `X := a⟨X>, X<⟩`, output `X`.
pub fn mirror(sigma: &Alphabet) -> Rtt {
    single_state("mirror", sigma, |s| TreeExpr::node(s.clone(), tv("X", Side::Right), tv("X", Side::Left)))
}

/// Copies the tree, swapping the root's children when the root carries the
/// second letter. Registers `X` (copy) and `Y` (copy with top swap) both
/// read `X<` and `X>`, so they must be declared in conflict.
pub fn conditional_swap(sigma: &Alphabet) -> (Rtt, ConflictRelation) {
    assert!(sigma.len() >= 2, "needs at least two letters");
    let mut delta = HashMap::new();
    for (a, s) in sigma.symbols().iter().enumerate() {
        let target = if a == 1 { 1 } else { 0 };
        for ql in 0..2 {
            for qr in 0..2 {
                delta.insert(
                    (ql, qr, a),
                    RttTransition {
                        target,
                        tree_updates: vec![
                            TreeExpr::node(s.clone(), tv("X", Side::Left), tv("X", Side::Right)),
                            TreeExpr::node(s.clone(), tv("X", Side::Right), tv("X", Side::Left)),
                        ],
                        hole_updates: vec![],
                    },
                );
            }
        }
    }
    let rtt = RttBuilder {
        name: "conditional-swap".into(),
        input: sigma.clone(),
        output: sigma.clone(),
        states: vec!["qa".into(), "qb".into()],
        initial: 0,
        tree_regs: vec!["X".into(), "Y".into()],
        hole_regs: vec![],
        output_fn: vec![TreeExpr::Var(TVar::plain("X")), TreeExpr::Var(TVar::plain("Y"))],
        delta,
    }
    .build()
    .expect("well-formed example");
    let rel = ConflictRelation::new(rtt.carrier(), &[("X".into(), "Y".into())]).expect("registers exist");
    (rtt, rel)
}

/// A copyless machine using a hole register: `X := X>`,
/// `H := H<[a⟨□, X<⟩]`, output `H[X]`.
pub fn spine(sigma: &Alphabet) -> Rtt {
    let mut delta = HashMap::new();
    for (a, s) in sigma.symbols().iter().enumerate() {
        delta.insert(
            (0, 0, a),
            RttTransition {
                target: 0,
                tree_updates: vec![tv("X", Side::Right)],
                hole_updates: vec![HoleExpr::Compose(
                    Box::new(HoleExpr::Var(TVar::sided("H", Side::Left))),
                    Box::new(HoleExpr::NodeL(s.clone(), Box::new(HoleExpr::Hole), Box::new(tv("X", Side::Left)))),
                )],
            },
        );
    }
    RttBuilder {
        name: "spine".into(),
        input: sigma.clone(),
        output: sigma.clone(),
        states: vec!["q".into()],
        initial: 0,
        tree_regs: vec!["X".into()],
        hole_regs: vec!["H".into()],
        output_fn: vec![TreeExpr::Plug(
            Box::new(HoleExpr::Var(TVar::plain("H"))),
            Box::new(TreeExpr::Var(TVar::plain("X"))),
        )],
        delta,
    }
    .build()
    .expect("well-formed example")
}
