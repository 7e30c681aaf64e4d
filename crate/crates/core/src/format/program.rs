//! Program files: a compiled term together with its codecs and claimed type.
//!
//! ```text
//! [codec]
//! target = eal
//! input = string a b
//! output = string a b
//! promoted = false
//!
//! [type]
//! forall 'a. ...
//!
//! [term]
//! \z. ...
//!
//! [derivation]
//! forall-intro : ...
//! ```
//!
//! Simply typed programs carry `instance = TYPE` instead of `promoted` and
//! have no `[derivation]` section. Reading re-checks everything.

use std::fmt::Write as _;

use thiserror::Error;

use crate::codec::Codec;
use crate::eal::{parse_eterm, parse_etype, read_derivation, write_derivation, TriContext};
use crate::eal_compile::EalProgram;
use crate::stlc::{parse_term, parse_type};
use crate::stlc_compile::TypedProgram;
use crate::symbol::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("program does not check: {0}")]
    Check(String),
}

#[derive(Clone, Debug)]
pub enum Program {
    Stlc(TypedProgram),
    Eal(EalProgram),
}

impl Program {
    pub fn input(&self) -> &Codec {
        match self {
            Program::Stlc(p) => &p.input,
            Program::Eal(p) => &p.input,
        }
    }

    pub fn output(&self) -> &Codec {
        match self {
            Program::Stlc(p) => &p.output,
            Program::Eal(p) => &p.output,
        }
    }
}

pub fn write_program(p: &Program) -> String {
    let mut s = String::from("[codec]\n");
    match p {
        Program::Stlc(p) => {
            let _ = writeln!(s, "target = stlc\ninput = {}\noutput = {}\ninstance = {}", p.input, p.output, p.instance);
            let _ = writeln!(s, "\n[type]\n{}\n\n[term]\n{}", p.claimed_type(), p.term);
        }
        Program::Eal(p) => {
            let _ = writeln!(s, "target = eal\ninput = {}\noutput = {}\npromoted = {}", p.input, p.output, p.promoted);
            let _ = writeln!(s, "\n[type]\n{}\n\n[term]\n{}", p.ty(), p.term());
            let _ = write!(s, "\n[derivation]\n{}", write_derivation(&p.derivation));
        }
    }
    s
}

struct Section {
    name: String,
    line: usize,
    body: String,
}

fn sections(src: &str) -> Result<Vec<Section>, ProgramError> {
    let mut out: Vec<Section> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let t = raw.trim();
        if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            if out.iter().any(|s| s.name == name) {
                return Err(ProgramError::Syntax { line: i + 1, message: format!("section [{name}] given twice") });
            }
            out.push(Section { name: name.to_string(), line: i + 2, body: String::new() });
        } else if let Some(cur) = out.last_mut() {
            cur.body.push_str(raw);
            cur.body.push('\n');
        } else if !t.is_empty() && !t.starts_with('#') {
            return Err(ProgramError::Syntax { line: i + 1, message: "text before the first section".into() });
        }
    }
    Ok(out)
}

fn codec(text: &str, line: usize) -> Result<Codec, ProgramError> {
    let mut words = text.split_whitespace();
    let err = |m: String| ProgramError::Syntax { line, message: m };
    let kind = words.next().ok_or_else(|| err("empty codec".into()))?;
    if kind == "bool" {
        return Ok(Codec::Bool);
    }
    let alpha = Alphabet::new(words).map_err(|e| err(e.to_string()))?;
    match kind {
        "string" => Ok(Codec::Str(alpha)),
        "tree" => Ok(Codec::Tree(alpha)),
        k => Err(err(format!("unknown codec `{k}`"))),
    }
}

fn shift(e: crate::stlc::ParseError, base: usize) -> ProgramError {
    ProgramError::Syntax { line: base + e.line - 1, message: format!("column {}: {}", e.column, e.message) }
}

pub fn read_program(src: &str) -> Result<Program, ProgramError> {
    let secs = sections(src)?;
    let get = |name: &str| -> Result<&Section, ProgramError> {
        secs.iter().find(|s| s.name == name).ok_or_else(|| ProgramError::Syntax { line: 1, message: format!("missing section [{name}]") })
    };
    for s in &secs {
        if !["codec", "type", "term", "derivation"].contains(&s.name.as_str()) {
            return Err(ProgramError::Syntax { line: s.line - 1, message: format!("unknown section [{}]", s.name) });
        }
    }
    let c = get("codec")?;
    let mut keys: Vec<(usize, &str, &str)> = Vec::new();
    for (i, raw) in c.body.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (k, v) = t.split_once('=').ok_or(ProgramError::Syntax { line: c.line + i, message: "expected `key = value`".into() })?;
        keys.push((c.line + i, k.trim(), v.trim()));
    }
    let key = |k: &str| -> Result<(usize, &str), ProgramError> {
        keys.iter()
            .find(|(_, kk, _)| *kk == k)
            .map(|(l, _, v)| (*l, *v))
            .ok_or_else(|| ProgramError::Syntax { line: c.line, message: format!("missing `{k}` in [codec]") })
    };
    let (tl, target) = key("target")?;
    let (il, input) = key("input")?;
    let (ol, output) = key("output")?;
    let (input, output) = (codec(input, il)?, codec(output, ol)?);
    let ty = get("type")?;
    let term = get("term")?;
    match target {
        "stlc" => {
            let (nl, inst) = key("instance")?;
            let instance = parse_type(inst).map_err(|e| shift(e, nl))?;
            let claimed = parse_type(&ty.body).map_err(|e| shift(e, ty.line))?;
            let t = parse_term(&term.body).map_err(|e| shift(e, term.line))?;
            let p = TypedProgram { term: t, input, output, instance };
            if p.claimed_type() != claimed {
                return Err(ProgramError::Check(format!("[type] says {claimed}, codecs give {}", p.claimed_type())));
            }
            if !p.check() {
                return Err(ProgramError::Check(format!("term does not have type {claimed}")));
            }
            Ok(Program::Stlc(p))
        }
        "eal" => {
            let (pl, promoted) = key("promoted")?;
            let promoted = promoted
                .parse::<bool>()
                .map_err(|_| ProgramError::Syntax { line: pl, message: "`promoted` is true or false".into() })?;
            let claimed = parse_etype(&ty.body).map_err(|e| shift(e, ty.line))?;
            let t = parse_eterm(&term.body).map_err(|e| shift(e, term.line))?;
            let d = get("derivation")?;
            let derivation = read_derivation(&TriContext::new(), &t, &d.body).map_err(|e| ProgramError::Check(e.to_string()))?;
            if !derivation.ty.alpha_eq(&claimed) {
                return Err(ProgramError::Check(format!("[type] says {claimed}, derivation proves {}", derivation.ty)));
            }
            let p = EalProgram { derivation, input, output, promoted };
            p.check_hygiene().map_err(|e| ProgramError::Check(e.to_string()))?;
            Ok(Program::Eal(p))
        }
        t => Err(ProgramError::Syntax { line: tl, message: format!("unknown target `{t}`") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::Value;
    use crate::eal_compile::compile_sst;
    use crate::stlc::DEFAULT_FUEL;
    use crate::stlc_compile::compile_register_transducer;
    use crate::strings::transducer::xy_transducer;
    use crate::symbol::Word;

    #[test]
    fn roundtrip_both_targets() {
        let rt = xy_transducer(&Alphabet::from_chars("ab"));
        let v = Value::Str(Word::from_chars("ab"));
        for p in [Program::Stlc(compile_register_transducer(&rt).unwrap()), Program::Eal(compile_sst(&rt).unwrap())] {
            let text = write_program(&p);
            let back = read_program(&text).unwrap();
            assert_eq!(write_program(&back), text);
            let out = match back {
                Program::Stlc(p) => p.apply(&v, DEFAULT_FUEL).unwrap(),
                Program::Eal(p) => p.apply(&v, DEFAULT_FUEL).unwrap(),
            };
            assert_eq!(out, Value::Str(Word::from_chars("abba")));
        }
    }

    #[test]
    fn tampering_is_caught() {
        let rt = xy_transducer(&Alphabet::from_chars("ab"));
        let text = write_program(&Program::Eal(compile_sst(&rt).unwrap()));
        let bad = text.replace("promoted = false", "promoted = true");
        assert!(matches!(read_program(&bad), Err(ProgramError::Check(_))));
        let bad = text.replace("[derivation]", "[derivations]");
        assert!(matches!(read_program(&bad), Err(ProgramError::Syntax { .. })));
        let stlc = write_program(&Program::Stlc(compile_register_transducer(&rt).unwrap()));
        let bad = stlc.replace("input = string a b", "input = string a b c");
        assert!(read_program(&bad).is_err());
        let bad = stlc.replace("[term]\n", "[term]\n(");
        assert!(matches!(read_program(&bad), Err(ProgramError::Syntax { .. })));
    }
}
