//! Binary trees, one-hole trees, tree expressions and register tree transducers.

pub mod examples;
pub mod expr;
pub mod rtt;
pub mod tree;

pub use expr::{HoleExpr, Side, TVar, TreeExpr};
pub use rtt::{check_brtt, check_brtt_original, BrttReport, ConflictRelation, Rtt, RttBuilder, RttTransition};
pub use tree::{parse_tree, BinTree, OneHoleTree};
