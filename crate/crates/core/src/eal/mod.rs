//! Elementary affine lambda calculus: types, terms, reduction and typing
//! derivations.

pub mod derivation;
pub mod encode;
pub mod normalize;
pub mod parse;
pub mod script;
pub mod term;
pub mod types;

pub use derivation::{annotate, check_derivation, derive, ATerm, Derivation, DerivationError, Rule, TriContext, TypingError};
pub use encode::{eal_decode_string, eal_decode_tree, eal_encode_string, eal_encode_tree, fin_encode, EalDecodeError};
pub use normalize::{eal_normalize, eal_normalize_traced, ReductionTrace};
pub use term::ETerm;
pub use types::EType;
pub use parse::{parse_eterm, parse_etype};
pub use script::{read_derivation, write_derivation, ScriptError};
