//! Text formats for machines and compiled programs.

pub mod lexer;
pub mod machine;
pub mod program;

pub use lexer::FormatError;
pub use machine::{parse_machines, write_machine, Machine, ParseOptions};
pub use program::{read_program, write_program, Program, ProgramError};
