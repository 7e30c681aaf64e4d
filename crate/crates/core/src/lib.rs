pub mod church;
pub mod cli;
pub mod stlc;
pub mod strings;
pub mod symbol;
pub mod trees;
pub mod codec;
pub mod stlc_compile;
pub mod eal;
pub mod eal_compile;
pub mod format;
pub mod difftest;
pub mod gen;
