//! String transducers and their direct semantics.

pub mod cbs;
pub mod dfa;
pub mod hdt0l;
pub mod morphism;
pub mod squaring;
pub mod transducer;

pub use cbs::cbs;
pub use dfa::Dfa;
pub use hdt0l::Hdt0l;
pub use morphism::Morphism;
pub use squaring::{run_pipeline, squaring, squaring_pipeline};
pub use transducer::{Item, OutputFunction, RegWord, RegisterTransducer, RtBuilder, RtTransition};
