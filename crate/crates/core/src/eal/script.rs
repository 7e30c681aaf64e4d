//! Text form of derivations: one line per node, indented by depth.
//!
//! ```text
//! abs : 'a -o 'a
//!   var-lin : 'a
//! ```
//! Contexts and subjects are not written; they are rebuilt from the term
//! while reading, with the splitting policy of the derivation builder.

use std::fmt::Write as _;

use thiserror::Error;

use super::derivation::{Derivation, Rule, TriContext};
use super::parse::parse_etype_at;
use super::term::ETerm;
use super::types::EType;
use crate::stlc::parse::{Cursor, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: rule `{rule}` does not fit the term")]
    Shape { line: usize, rule: String },
    #[error("derivation script ended early")]
    Truncated,
    #[error("trailing lines after the derivation")]
    Trailing,
}

pub fn write_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    let mut stack = vec![(d, 0usize)];
    while let Some((d, depth)) = stack.pop() {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push_str(d.rule.name());
        if let Rule::ForallElim(t) = &d.rule {
            let _ = write!(out, " {t}");
        }
        let _ = writeln!(out, " : {}", d.ty);
        for p in d.premises.iter().rev() {
            stack.push((p, depth + 1));
        }
    }
    out
}

struct Line {
    number: usize,
    depth: usize,
    rule: String,
    inst: Option<EType>,
    ty: EType,
}

fn parse_line(number: usize, raw: &str) -> Result<Line, ScriptError> {
    let syntax = |e: ParseError| ScriptError::Syntax { line: number, message: e.message };
    let indent = raw.len() - raw.trim_start_matches(' ').len();
    if !indent.is_multiple_of(2) {
        return Err(ScriptError::Syntax { line: number, message: "odd indentation".into() });
    }
    let body = raw.trim();
    let (rule, rest) = body.split_once(' ').unwrap_or((body, ""));
    let mut c = Cursor::new(rest);
    let inst = if rule == "forall-elim" { Some(parse_etype_at(&mut c).map_err(syntax)?) } else { None };
    c.expect(":").map_err(syntax)?;
    let ty = parse_etype_at(&mut c).map_err(syntax)?;
    if !c.at_end() {
        return Err(ScriptError::Syntax { line: number, message: "trailing text".into() });
    }
    Ok(Line { number, depth: indent / 2, rule: rule.to_string(), inst, ty })
}

struct Reader {
    lines: Vec<Line>,
    next: usize,
}

impl Reader {
    fn take(&mut self, depth: usize) -> Result<&Line, ScriptError> {
        let l = self.lines.get(self.next).ok_or(ScriptError::Truncated)?;
        if l.depth != depth {
            return Err(ScriptError::Syntax { line: l.number, message: format!("expected depth {depth}") });
        }
        self.next += 1;
        Ok(&self.lines[self.next - 1])
    }

    fn node(&mut self, ctx: &TriContext, term: &ETerm, depth: usize) -> Result<Derivation, ScriptError> {
        let line = self.take(depth)?;
        let (number, rule_name, inst, ty) = (line.number, line.rule.clone(), line.inst.clone(), line.ty.clone());
        let shape = || ScriptError::Shape { line: number, rule: rule_name.clone() };
        let (rule, premises) = match (rule_name.as_str(), term) {
            ("var-lin", ETerm::Var(_)) => (Rule::VarLinear, vec![]),
            ("var-tmp", ETerm::Var(_)) => (Rule::VarTemporary, vec![]),
            ("abs", ETerm::Abs(x, b)) | ("bang-abs", ETerm::BangAbs(x, b)) => {
                let EType::Lolli(dom, _) = &ty else { return Err(shape()) };
                let mut inner = ctx.clone();
                let rule = if rule_name == "abs" {
                    inner.linear.insert(x.clone(), (**dom).clone());
                    Rule::Abs
                } else {
                    inner.banged.insert(x.clone(), (**dom).clone());
                    Rule::BangAbs
                };
                (rule, vec![self.node(&inner, b, depth + 1)?])
            }
            ("app", ETerm::App(f, u)) => {
                let fv_u = u.free_vars();
                let mut left = ctx.clone();
                let mut right = ctx.clone();
                right.linear.clear();
                for (x, t) in &ctx.linear {
                    if fv_u.contains(x) {
                        left.linear.remove(x);
                        right.linear.insert(x.clone(), t.clone());
                    }
                }
                let pf = self.node(&left, f, depth + 1)?;
                let pu = self.node(&right, u, depth + 1)?;
                (Rule::App, vec![pf, pu])
            }
            ("forall-intro", _) => (Rule::ForallIntro, vec![self.node(ctx, term, depth + 1)?]),
            ("forall-elim", _) => {
                let inst = inst.ok_or_else(shape)?;
                (Rule::ForallElim(inst), vec![self.node(ctx, term, depth + 1)?])
            }
            ("promote", ETerm::Bang(t)) => {
                let mut inner = TriContext::new();
                for (x, s) in &ctx.banged {
                    let EType::Bang(s) = s else { return Err(shape()) };
                    inner.temporary.insert(x.clone(), (**s).clone());
                }
                (Rule::Promotion, vec![self.node(&inner, t, depth + 1)?])
            }
            _ => return Err(shape()),
        };
        Ok(Derivation { rule, ctx: ctx.clone(), term: term.clone(), ty, premises })
    }
}

/// Rebuild the derivation of `ctx ⊢ term` described by `script`. The result
/// still has to pass [`super::derivation::check_derivation`].
pub fn read_derivation(ctx: &TriContext, term: &ETerm, script: &str) -> Result<Derivation, ScriptError> {
    let mut lines = Vec::new();
    for (i, raw) in script.lines().enumerate() {
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        lines.push(parse_line(i + 1, raw)?);
    }
    let mut r = Reader { lines, next: 0 };
    let d = r.node(ctx, term, 0)?;
    if r.next != r.lines.len() {
        return Err(ScriptError::Trailing);
    }
    Ok(d)
}
