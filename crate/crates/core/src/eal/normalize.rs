//! Normal-order reduction under the linear and the bang rule.
//!
//! A `(λ!x. t) v` whose argument does not reduce to a bang is left in
//! place; such stuck applications are ordinary parts of a normal form.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::term::ETerm;
use crate::stlc::normalize::NormalizeError;
use crate::stlc::term::Name;

type Db = Arc<Node>;

struct Node {
    kind: Kind,
    loose: u32,
}

enum Kind {
    Bound(u32),
    Free(Name),
    Lam(Name, Db),
    BangLam(Name, Db),
    App(Db, Db),
    Bang(Db),
}

fn bound(i: u32) -> Db {
    Arc::new(Node { kind: Kind::Bound(i), loose: i + 1 })
}

fn free(x: Name) -> Db {
    Arc::new(Node { kind: Kind::Free(x), loose: 0 })
}

fn lam(x: Name, b: Db) -> Db {
    let loose = b.loose.saturating_sub(1);
    Arc::new(Node { kind: Kind::Lam(x, b), loose })
}

fn bang_lam(x: Name, b: Db) -> Db {
    let loose = b.loose.saturating_sub(1);
    Arc::new(Node { kind: Kind::BangLam(x, b), loose })
}

fn app(f: Db, a: Db) -> Db {
    let loose = f.loose.max(a.loose);
    Arc::new(Node { kind: Kind::App(f, a), loose })
}

fn bang(b: Db) -> Db {
    let loose = b.loose;
    Arc::new(Node { kind: Kind::Bang(b), loose })
}

fn to_db(t: &ETerm, ctx: &mut Vec<Name>) -> Db {
    match t {
        ETerm::Var(x) => match ctx.iter().rposition(|n| n == x) {
            Some(i) => bound((ctx.len() - 1 - i) as u32),
            None => free(x.clone()),
        },
        ETerm::Abs(x, b) | ETerm::BangAbs(x, b) => {
            ctx.push(x.clone());
            let body = to_db(b, ctx);
            ctx.pop();
            if matches!(t, ETerm::Abs(..)) {
                lam(x.clone(), body)
            } else {
                bang_lam(x.clone(), body)
            }
        }
        ETerm::App(f, a) => app(to_db(f, ctx), to_db(a, ctx)),
        ETerm::Bang(b) => bang(to_db(b, ctx)),
    }
}

fn shift(t: &Db, d: u32, cutoff: u32) -> Db {
    if t.loose <= cutoff || d == 0 {
        return t.clone();
    }
    match &t.kind {
        Kind::Bound(i) => bound(if *i >= cutoff { i + d } else { *i }),
        Kind::Free(_) => t.clone(),
        Kind::Lam(x, b) => lam(x.clone(), shift(b, d, cutoff + 1)),
        Kind::BangLam(x, b) => bang_lam(x.clone(), shift(b, d, cutoff + 1)),
        Kind::App(f, a) => app(shift(f, d, cutoff), shift(a, d, cutoff)),
        Kind::Bang(b) => bang(shift(b, d, cutoff)),
    }
}

fn subst(t: &Db, k: u32, v: &Db) -> Db {
    if t.loose <= k {
        return t.clone();
    }
    match &t.kind {
        Kind::Bound(i) => {
            if *i == k {
                shift(v, k, 0)
            } else {
                bound(i - 1)
            }
        }
        Kind::Free(_) => t.clone(),
        Kind::Lam(x, b) => lam(x.clone(), subst(b, k + 1, v)),
        Kind::BangLam(x, b) => bang_lam(x.clone(), subst(b, k + 1, v)),
        Kind::App(f, a) => app(subst(f, k, v), subst(a, k, v)),
        Kind::Bang(b) => bang(subst(b, k, v)),
    }
}

// Relative bang depths of the occurrences of index `k`.
fn occurrence_depths(t: &Db, k: u32, d: usize, out: &mut Vec<usize>) {
    if t.loose <= k {
        return;
    }
    match &t.kind {
        Kind::Bound(i) => {
            if *i == k {
                out.push(d)
            }
        }
        Kind::Free(_) => {}
        Kind::Lam(_, b) | Kind::BangLam(_, b) => occurrence_depths(b, k + 1, d, out),
        Kind::App(f, a) => {
            occurrence_depths(f, k, d, out);
            occurrence_depths(a, k, d, out);
        }
        Kind::Bang(b) => occurrence_depths(b, k, d + 1, out),
    }
}

/// Counts gathered while normalizing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub linear_steps: u64,
    pub bang_steps: u64,
    /// Steps at which the substituted argument landed at a different depth
    /// from the one it started at.
    pub depth_violations: u64,
    /// Largest absolute bang depth at which a redex was contracted.
    pub max_redex_depth: usize,
}

impl ReductionTrace {
    pub fn steps(&self) -> u64 {
        self.linear_steps + self.bang_steps
    }
}

struct Machine {
    left: u64,
    limit: u64,
    traced: bool,
    trace: ReductionTrace,
}

impl Machine {
    fn tick(&mut self) -> Result<(), NormalizeError> {
        if self.left == 0 {
            return Err(NormalizeError::FuelExhausted(self.limit));
        }
        self.left -= 1;
        Ok(())
    }

    // `want` is the depth inside the body at which the argument lands
    // without changing its own depth.
    fn record(&mut self, body: &Db, want: usize, depth: usize, bang_rule: bool) {
        if bang_rule {
            self.trace.bang_steps += 1;
        } else {
            self.trace.linear_steps += 1;
        }
        self.trace.max_redex_depth = self.trace.max_redex_depth.max(depth);
        if self.traced {
            let mut ds = Vec::new();
            occurrence_depths(body, 0, 0, &mut ds);
            if ds.iter().any(|&d| d != want) {
                self.trace.depth_violations += 1;
            }
        }
    }

    fn nf(&mut self, t: &Db, depth: usize) -> Result<Db, NormalizeError> {
        let mut t = t.clone();
        loop {
            match &t.kind {
                Kind::Lam(x, b) => return Ok(lam(x.clone(), self.nf(b, depth)?)),
                Kind::BangLam(x, b) => return Ok(bang_lam(x.clone(), self.nf(b, depth)?)),
                Kind::Bang(b) => return Ok(bang(self.nf(b, depth + 1)?)),
                _ => {}
            }
            let mut args = Vec::new();
            let mut head = t.clone();
            while let Kind::App(f, a) = &head.kind {
                args.push(a.clone());
                let f = f.clone();
                head = f;
            }
            args.reverse();
            if args.is_empty() {
                return Ok(t);
            }
            match &head.kind {
                Kind::Lam(_, body) => {
                    self.tick()?;
                    self.record(body, 0, depth, false);
                    let mut r = subst(body, 0, &args[0]);
                    for a in &args[1..] {
                        r = app(r, a.clone());
                    }
                    t = r;
                    continue;
                }
                Kind::BangLam(x, body) => {
                    let arg = if matches!(args[0].kind, Kind::Bang(_)) {
                        args[0].clone()
                    } else {
                        self.nf(&args[0], depth)?
                    };
                    if let Kind::Bang(u) = &arg.kind {
                        self.tick()?;
                        self.record(body, 1, depth, true);
                        let mut r = subst(body, 0, u);
                        for a in &args[1..] {
                            r = app(r, a.clone());
                        }
                        t = r;
                        continue;
                    }
                    let mut out = app(bang_lam(x.clone(), self.nf(body, depth)?), arg);
                    for a in &args[1..] {
                        out = app(out, self.nf(a, depth)?);
                    }
                    return Ok(out);
                }
                _ => {
                    let mut out = self.nf(&head, depth)?;
                    for a in &args {
                        out = app(out, self.nf(a, depth)?);
                    }
                    return Ok(out);
                }
            }
        }
    }
}

fn free_names(t: &Db, out: &mut BTreeSet<Name>) {
    match &t.kind {
        Kind::Free(x) => {
            out.insert(x.clone());
        }
        Kind::Bound(_) => {}
        Kind::Lam(_, b) | Kind::BangLam(_, b) | Kind::Bang(b) => free_names(b, out),
        Kind::App(f, a) => {
            free_names(f, out);
            free_names(a, out);
        }
    }
}

fn from_db(t: &Db, scope: &mut Vec<Name>, taken: &BTreeSet<Name>) -> ETerm {
    match &t.kind {
        Kind::Bound(i) => ETerm::Var(scope[scope.len() - 1 - *i as usize].clone()),
        Kind::Free(x) => ETerm::Var(x.clone()),
        Kind::Lam(x, b) | Kind::BangLam(x, b) => {
            let mut name = x.to_string();
            while taken.contains(name.as_str()) || scope.iter().any(|n| **n == name) {
                name.push('\'');
            }
            let name: Name = Arc::from(name);
            scope.push(name.clone());
            let body = Arc::new(from_db(b, scope, taken));
            scope.pop();
            if matches!(t.kind, Kind::Lam(..)) {
                ETerm::Abs(name, body)
            } else {
                ETerm::BangAbs(name, body)
            }
        }
        Kind::App(f, a) => ETerm::App(Arc::new(from_db(f, scope, taken)), Arc::new(from_db(a, scope, taken))),
        Kind::Bang(b) => ETerm::Bang(Arc::new(from_db(b, scope, taken))),
    }
}

fn run(t: &ETerm, fuel: u64, traced: bool) -> Result<(ETerm, ReductionTrace), NormalizeError> {
    let db = to_db(t, &mut Vec::new());
    let mut m = Machine { left: fuel, limit: fuel, traced, trace: ReductionTrace::default() };
    let r = m.nf(&db, 0)?;
    let mut taken = BTreeSet::new();
    free_names(&r, &mut taken);
    Ok((from_db(&r, &mut Vec::new(), &taken), m.trace))
}

pub fn eal_normalize(t: &ETerm, fuel: u64) -> Result<ETerm, NormalizeError> {
    run(t, fuel, false).map(|(t, _)| t)
}

/// Normalize while checking, at every contraction, that the argument keeps
/// its bang depth.
pub fn eal_normalize_traced(t: &ETerm, fuel: u64) -> Result<(ETerm, ReductionTrace), NormalizeError> {
    run(t, fuel, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eal::term::{eapp, ebang, ebang_lam, elam, evar};

    #[test]
    fn two_rules() {
        let t = eapp(ebang_lam("x", ebang(evar("x"))), ebang(evar("y")));
        assert!(eal_normalize(&t, 10).unwrap().alpha_eq(&ebang(evar("y"))));
        let t = eapp(elam("x", evar("x")), evar("y"));
        assert!(eal_normalize(&t, 10).unwrap().alpha_eq(&evar("y")));
    }

    #[test]
    fn stuck_bang_redex_survives() {
        let t = eapp(ebang_lam("x", ebang(evar("x"))), evar("y"));
        assert!(eal_normalize(&t, 10).unwrap().alpha_eq(&t));
    }

    #[test]
    fn argument_reduced_to_bang_fires() {
        // (λ!x. !x) ((λy. y) !z)
        let t = eapp(ebang_lam("x", ebang(evar("x"))), eapp(elam("y", evar("y")), ebang(evar("z"))));
        let (r, trace) = eal_normalize_traced(&t, 10).unwrap();
        assert!(r.alpha_eq(&ebang(evar("z"))));
        assert_eq!(trace.linear_steps, 1);
        assert_eq!(trace.bang_steps, 1);
        assert_eq!(trace.depth_violations, 0);
    }

    #[test]
    fn unstratified_step_is_flagged() {
        // λx. !x violates stratification; contracting it moves y one level down.
        let t = eapp(elam("x", ebang(evar("x"))), evar("y"));
        let (_, trace) = eal_normalize_traced(&t, 10).unwrap();
        assert_eq!(trace.depth_violations, 1);
    }

    #[test]
    fn agrees_with_single_steps() {
        let t = eapp(
            elam("f", eapp(evar("f"), ebang(evar("a")))),
            ebang_lam("x", ebang(eapp(evar("x"), evar("x")))),
        );
        let mut cur = t.clone();
        while let Some(n) = cur.beta_step() {
            cur = n;
        }
        assert!(eal_normalize(&t, 100).unwrap().alpha_eq(&cur));
    }
}
