//! What a program consumes and produces, and the values exchanged.

use std::fmt;

use crate::stlc::types::SimpleType;
use crate::symbol::{Alphabet, Word};
use crate::trees::tree::BinTree;

/// The data type on one side of a compiled program.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Codec {
    Str(Alphabet),
    Tree(Alphabet),
    Bool,
}

impl Codec {
    /// The simple type of the Church encodings of this codec.
    pub fn simple_type(&self) -> SimpleType {
        match self {
            Codec::Str(a) => SimpleType::str_type(a.len()),
            Codec::Tree(a) => SimpleType::tree_type(a.len()),
            Codec::Bool => SimpleType::bool_type(),
        }
    }

    pub fn alphabet(&self) -> Option<&Alphabet> {
        match self {
            Codec::Str(a) | Codec::Tree(a) => Some(a),
            Codec::Bool => None,
        }
    }
}

impl fmt::Display for Codec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let syms = |a: &Alphabet| a.symbols().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
        match self {
            Codec::Str(a) => write!(f, "string {}", syms(a)),
            Codec::Tree(a) => write!(f, "tree {}", syms(a)),
            Codec::Bool => f.write_str("bool"),
        }
    }
}

/// A decoded value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Value {
    Str(Word),
    Tree(BinTree),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Str(w) => write!(f, "{w}"),
            Value::Tree(t) => write!(f, "{t}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}
