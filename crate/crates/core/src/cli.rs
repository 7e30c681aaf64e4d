//! The `chtr` command line.
//!
//! Exit codes: 0 success, 1 semantic or validation failure, 2 parse or usage
//! error, 3 reduction budget exhausted.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::codec::{Codec, Value};
use crate::difftest::{
    compile_machine, compose_chain, difftest_chain, difftest_machine, difftest_program, eval_program, input_codec, inputs,
    run_machine, CompileFailure, DiffReport, Failure, Target, MAX_LEN, MAX_NODES,
};
use crate::format::{parse_machines, read_program, write_program, Machine, ParseOptions, Program, ProgramError};
use crate::gen::{random_rt, rng, GenParams};
use crate::stlc::DEFAULT_FUEL;
use crate::symbol::Alphabet;
use crate::trees::tree::parse_tree;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SEMANTIC: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TargetArg {
    Stlc,
    Eal,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Stlc => Target::Stlc,
            TargetArg::Eal => Target::Eal,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "chtr", version, about = "Compile transducers to Church-encoded lambda terms and test them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct MachineArgs {
    /// Machine description file.
    pub file: PathBuf,
    /// Use only the machine with this name.
    #[arg(long)]
    pub machine: Option<String>,
    /// Complete missing transitions and register updates with identities.
    #[arg(long)]
    pub complete_delta: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the machines of a file (in sequence) on one input.
    Run {
        #[command(flatten)]
        m: MachineArgs,
        /// Input word (letters, or space separated symbols) or tree such as `a((), ())`.
        input: String,
    },
    /// Compile to a program file; a chain of string machines is composed.
    Compile {
        #[command(flatten)]
        m: MachineArgs,
        #[arg(long, value_enum, default_value = "stlc")]
        target: TargetArg,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Parse and re-check a program file.
    Check { program: PathBuf },
    /// Apply a program file to an input.
    Eval {
        program: PathBuf,
        input: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Compare compiled programs with direct semantics on every input in range.
    Difftest {
        /// Machine file; without it, random copyless transducers are tested.
        file: Option<PathBuf>,
        #[arg(long)]
        machine: Option<String>,
        #[arg(long)]
        complete_delta: bool,
        /// Both targets are tested when absent.
        #[arg(long, value_enum)]
        target: Option<TargetArg>,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        #[arg(long, default_value_t = 7)]
        max_nodes: usize,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random machines when no file is given.
        #[arg(long, default_value_t = 10)]
        random: usize,
    },
}

/// What a command printed and how it ended.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

fn read_file(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| Outcome::fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_machines(m: &MachineArgs) -> Result<Vec<Machine>, Outcome> {
    let src = read_file(&m.file)?;
    let ms = parse_machines(&src, ParseOptions { complete_delta: m.complete_delta })
        .map_err(|e| Outcome::fail(EXIT_PARSE, format!("{}: {e}", m.file.display())))?;
    select(ms, m.machine.as_deref())
}

fn select(ms: Vec<Machine>, name: Option<&str>) -> Result<Vec<Machine>, Outcome> {
    match name {
        None => Ok(ms),
        Some(n) => {
            let picked: Vec<Machine> = ms.into_iter().filter(|m| m.name() == n).collect();
            if picked.is_empty() {
                Err(Outcome::fail(EXIT_SEMANTIC, format!("no machine named `{n}`")))
            } else {
                Ok(picked)
            }
        }
    }
}

pub fn parse_value(codec: &Codec, text: &str) -> Result<Value, String> {
    match codec {
        Codec::Str(a) => a.parse_word(text).map(Value::Str).map_err(|e| e.to_string()),
        Codec::Tree(a) => {
            let t = parse_tree(text).map_err(|e| e.to_string())?;
            t.check_labels(a).map_err(|e| e.to_string())?;
            Ok(Value::Tree(t))
        }
        Codec::Bool => text.trim().parse::<bool>().map(Value::Bool).map_err(|_| "expected true or false".into()),
    }
}

fn show(v: &Value) -> String {
    match v {
        Value::Str(w) if w.is_empty() => "ε".into(),
        v => v.to_string(),
    }
}

fn cmd_run(m: &MachineArgs, input: &str) -> Outcome {
    let ms = match load_machines(m) {
        Ok(ms) => ms,
        Err(o) => return o,
    };
    let mut v = match parse_value(&input_codec(&ms[0]), input) {
        Ok(v) => v,
        Err(e) => return Outcome::fail(EXIT_PARSE, format!("input: {e}")),
    };
    for mach in &ms {
        v = match run_machine(mach, &v) {
            Some(out) => out,
            None => return Outcome::fail(EXIT_SEMANTIC, format!("`{}` cannot read the previous output", mach.name())),
        };
    }
    Outcome { code: EXIT_OK, stdout: format!("{}\n", show(&v)), stderr: String::new() }
}

fn compile_failure(e: CompileFailure) -> Outcome {
    Outcome::fail(EXIT_SEMANTIC, e)
}

fn cmd_compile(m: &MachineArgs, target: Target, output: Option<&Path>) -> Outcome {
    let ms = match load_machines(m) {
        Ok(ms) => ms,
        Err(o) => return o,
    };
    let program = if ms.len() == 1 {
        match compile_machine(&ms[0], target) {
            Ok(p) => p,
            Err(e) => return compile_failure(e),
        }
    } else {
        if target == Target::Eal {
            return Outcome::fail(EXIT_SEMANTIC, "several machines in file; pick one with --machine");
        }
        match compose_chain(&ms) {
            Ok(Some(p)) => Program::Stlc(p),
            Ok(None) => return Outcome::fail(EXIT_SEMANTIC, "the machines do not form a chain of string functions"),
            Err(e) => return compile_failure(e),
        }
    };
    let text = write_program(&program);
    if let Err(e) = read_program(&text) {
        return Outcome::fail(EXIT_SEMANTIC, format!("emitted program does not re-check: {e}"));
    }
    match output {
        None => Outcome { code: EXIT_OK, stdout: text, stderr: String::new() },
        Some(path) => match fs::write(path, &text) {
            Ok(()) => Outcome { code: EXIT_OK, stdout: String::new(), stderr: format!("wrote {}\n", path.display()) },
            Err(e) => Outcome::fail(EXIT_SEMANTIC, format!("{}: {e}", path.display())),
        },
    }
}

fn load_program(path: &Path) -> Result<Program, Outcome> {
    let src = read_file(path)?;
    read_program(&src).map_err(|e| match e {
        ProgramError::Syntax { .. } => Outcome::fail(EXIT_PARSE, format!("{}: {e}", path.display())),
        ProgramError::Check(_) => Outcome::fail(EXIT_SEMANTIC, format!("{}: {e}", path.display())),
    })
}

fn cmd_check(path: &Path) -> Outcome {
    match load_program(path) {
        Err(o) => o,
        Ok(p) => {
            let (target, ty) = match &p {
                Program::Stlc(p) => ("stlc", p.claimed_type().to_string()),
                Program::Eal(p) => ("eal", p.ty().to_string()),
            };
            let mut out = format!("ok [{target}] {} -> {}\n  type: {ty}\n", p.input(), p.output());
            if let Program::Eal(p) = &p {
                let _ = writeln!(out, "  derivation: {} nodes", p.derivation.node_count());
            }
            Outcome { code: EXIT_OK, stdout: out, stderr: String::new() }
        }
    }
}

fn failure_code(f: &Failure) -> i32 {
    match f {
        Failure::FuelExhausted { .. } => EXIT_RESOURCE,
        _ => EXIT_SEMANTIC,
    }
}

fn cmd_eval(path: &Path, input: &str, fuel: u64) -> Outcome {
    let p = match load_program(path) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let v = match parse_value(p.input(), input) {
        Ok(v) => v,
        Err(e) => return Outcome::fail(EXIT_PARSE, format!("input: {e}")),
    };
    match eval_program(&p, &v, fuel) {
        Ok((out, _)) => Outcome { code: EXIT_OK, stdout: format!("{}\n", show(&out)), stderr: String::new() },
        Err(f) => Outcome::fail(failure_code(&f), f),
    }
}

struct DiffArgs {
    target: Option<Target>,
    max_len: usize,
    max_nodes: usize,
    fuel: u64,
}

/// Targets a machine is tested against when none is requested.
fn default_targets(m: &Machine) -> Vec<Target> {
    match m {
        Machine::Transducer { rt, require_copyless } if *require_copyless || rt.check_copyless().passes() => {
            vec![Target::Stlc, Target::Eal]
        }
        Machine::Tree { bounded: true, .. } | Machine::Morphism { .. } => vec![Target::Stlc, Target::Eal],
        _ => vec![Target::Stlc],
    }
}

fn summarize(reports: &[DiffReport], notes: &str) -> Outcome {
    let mut out = String::from(notes);
    for r in reports {
        let _ = writeln!(out, "{r}");
    }
    let code = reports.iter().find_map(|r| r.failure.as_ref()).map(failure_code).unwrap_or(EXIT_OK);
    let _ = writeln!(out, "{} of {} suites passed", reports.iter().filter(|r| r.passed()).count(), reports.len());
    Outcome { code, stdout: out, stderr: String::new() }
}

fn cmd_difftest_file(ms: &[Machine], a: &DiffArgs) -> Outcome {
    let mut reports = Vec::new();
    for m in ms {
        let targets = a.target.map(|t| vec![t]).unwrap_or_else(|| default_targets(m));
        for t in targets {
            match difftest_machine(m, t, a.max_len, a.max_nodes, a.fuel) {
                Ok(r) => reports.push(r),
                Err(e) => return compile_failure(e),
            }
        }
    }
    if a.target != Some(Target::Eal) {
        match difftest_chain(ms, a.max_len, a.fuel) {
            Ok(Some(r)) => reports.push(r),
            Ok(None) => {}
            Err(e) => return compile_failure(e),
        }
    }
    summarize(&reports, "")
}

fn cmd_difftest_random(seed: u64, count: usize, a: &DiffArgs) -> Outcome {
    let ab = Alphabet::from_chars("ab");
    let params = GenParams { max_states: 3, max_registers: 2, max_letters: 2 };
    let mut g = rng(seed);
    let notes = format!("random copyless transducers: seed {seed}, {count} machines, {params:?}\n");
    let mut reports = Vec::new();
    for i in 0..count {
        let rt = random_rt(&mut g, &format!("random-{i}"), &ab, &ab, params, true);
        let m = Machine::Transducer { rt, require_copyless: true };
        let targets = a.target.map(|t| vec![t]).unwrap_or_else(|| vec![Target::Stlc, Target::Eal]);
        for t in targets {
            match compile_machine(&m, t) {
                Ok(p) => {
                    let ins = inputs(&input_codec(&m), a.max_len, 0);
                    let oracle = |v: &Value| run_machine(&m, v).expect("string input");
                    reports.push(difftest_program(m.name(), &p, &oracle, &ins, a.fuel));
                }
                Err(e) => return compile_failure(e),
            }
        }
    }
    summarize(&reports, &notes)
}

pub fn execute(cli: Cli) -> Outcome {
    match cli.command {
        Command::Run { m, input } => cmd_run(&m, &input),
        Command::Compile { m, target, output } => cmd_compile(&m, target.into(), output.as_deref()),
        Command::Check { program } => cmd_check(&program),
        Command::Eval { program, input, fuel } => cmd_eval(&program, &input, fuel),
        Command::Difftest { file, machine, complete_delta, target, max_len, max_nodes, fuel, seed, random } => {
            if max_len > MAX_LEN || max_nodes > MAX_NODES {
                return Outcome::fail(EXIT_PARSE, format!("ranges are capped at --max-len {MAX_LEN} and --max-nodes {MAX_NODES}"));
            }
            let a = DiffArgs { target: target.map(Into::into), max_len, max_nodes, fuel };
            match file {
                None => cmd_difftest_random(seed, random, &a),
                Some(file) => match load_machines(&MachineArgs { file, machine, complete_delta }) {
                    Ok(ms) => cmd_difftest_file(&ms, &a),
                    Err(o) => o,
                },
            }
        }
    }
}

/// Parse `args` (program name first) and run; usage errors exit with 2.
pub fn run_cli<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_parse_by_codec() {
        let ab = Alphabet::from_chars("ab");
        assert_eq!(parse_value(&Codec::Str(ab.clone()), "ab").unwrap().to_string(), "ab");
        assert!(parse_value(&Codec::Str(ab.clone()), "abc").is_err());
        assert!(parse_value(&Codec::Tree(ab.clone()), "a((), b((), ()))").is_ok());
        assert!(parse_value(&Codec::Tree(ab), "c((), ())").is_err());
    }

    #[test]
    fn ranges_are_capped() {
        let o = run_cli(["chtr", "difftest", "--max-len", "9"]);
        assert_eq!(o.code, EXIT_PARSE);
        assert_eq!(run_cli(["chtr", "frobnicate"]).code, EXIT_PARSE);
    }

    #[test]
    fn random_difftest_is_deterministic() {
        let args = ["chtr", "difftest", "--seed", "3", "--random", "3", "--max-len", "3"];
        let a = run_cli(args);
        assert_eq!(a.code, EXIT_OK, "{}", a.stdout);
        assert_eq!(a.stdout, run_cli(args).stdout);
    }
}
