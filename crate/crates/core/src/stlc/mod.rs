//! Simply typed λ-calculus: terms, types, normalization and inference.

pub mod infer;
pub mod normalize;
pub mod parse;
pub mod term;
pub mod types;

pub use infer::{check_type, infer_type, PrincipalType, TypeError, TypingContext};
pub use normalize::{alpha_eta_equal, beta_normalize, NormalizeError, DEFAULT_FUEL};
pub use parse::{parse_term, parse_type, ParseError};
pub use term::Term;
pub use types::SimpleType;

/// `A[B]`.
pub fn type_substitute(a: &SimpleType, b: &SimpleType) -> SimpleType {
    a.substitute_base(b)
}
