//! β-normalization. Terms are converted to a nameless representation,
//! reduced, and read back with fresh names chosen from the original binders.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use super::term::{Name, Term};
use super::types::SimpleType;

pub const DEFAULT_FUEL: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("reduction budget of {0} steps exhausted")]
    FuelExhausted(u64),
}

type Db = Arc<Node>;

struct Node {
    kind: Kind,
    // One more than the largest loose de Bruijn index; 0 for closed nodes.
    loose: u32,
}

enum Kind {
    Bound(u32),
    Free(Name),
    Lam(Name, Option<SimpleType>, Db),
    App(Db, Db),
}

fn bound(i: u32) -> Db {
    Arc::new(Node { kind: Kind::Bound(i), loose: i + 1 })
}

fn free(x: Name) -> Db {
    Arc::new(Node { kind: Kind::Free(x), loose: 0 })
}

fn lam(x: Name, ann: Option<SimpleType>, b: Db) -> Db {
    let loose = b.loose.saturating_sub(1);
    Arc::new(Node { kind: Kind::Lam(x, ann, b), loose })
}

fn app(f: Db, a: Db) -> Db {
    let loose = f.loose.max(a.loose);
    Arc::new(Node { kind: Kind::App(f, a), loose })
}

fn to_db(t: &Term, ctx: &mut Vec<Name>) -> Db {
    match t {
        Term::Var(x) => match ctx.iter().rposition(|n| n == x) {
            Some(i) => bound((ctx.len() - 1 - i) as u32),
            None => free(x.clone()),
        },
        Term::Abs(x, ann, b) => {
            ctx.push(x.clone());
            let body = to_db(b, ctx);
            ctx.pop();
            lam(x.clone(), ann.clone(), body)
        }
        Term::App(f, a) => app(to_db(f, ctx), to_db(a, ctx)),
    }
}

fn shift(t: &Db, d: u32, cutoff: u32) -> Db {
    if t.loose <= cutoff || d == 0 {
        return t.clone();
    }
    match &t.kind {
        Kind::Bound(i) => bound(if *i >= cutoff { i + d } else { *i }),
        Kind::Free(_) => t.clone(),
        Kind::Lam(x, ann, b) => lam(x.clone(), ann.clone(), shift(b, d, cutoff + 1)),
        Kind::App(f, a) => app(shift(f, d, cutoff), shift(a, d, cutoff)),
    }
}

// Replace index `k` by `v` (shifted by `k`) and lower indices above `k`.
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
        Kind::Lam(x, ann, b) => lam(x.clone(), ann.clone(), subst(b, k + 1, v)),
        Kind::App(f, a) => app(subst(f, k, v), subst(a, k, v)),
    }
}

struct Budget {
    left: u64,
    limit: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<(), NormalizeError> {
        if self.left == 0 {
            return Err(NormalizeError::FuelExhausted(self.limit));
        }
        self.left -= 1;
        Ok(())
    }
}

// Leftmost-outermost: reduce head redexes first, then arguments left to right.
fn nf(t: &Db, budget: &mut Budget) -> Result<Db, NormalizeError> {
    let mut t = t.clone();
    loop {
        if let Kind::Lam(x, ann, b) = &t.kind {
            return Ok(lam(x.clone(), ann.clone(), nf(b, budget)?));
        }
        let mut args = Vec::new();
        let mut head = t.clone();
        while let Kind::App(f, a) = &head.kind {
            args.push(a.clone());
            let f = f.clone();
            head = f;
        }
        args.reverse();
        if let Kind::Lam(_, _, body) = &head.kind {
            if !args.is_empty() {
                budget.tick()?;
                let mut r = subst(body, 0, &args[0]);
                for a in &args[1..] {
                    r = app(r, a.clone());
                }
                t = r;
                continue;
            }
        }
        let mut out = head;
        for a in &args {
            out = app(out, nf(a, budget)?);
        }
        return Ok(out);
    }
}

fn free_names(t: &Db, out: &mut BTreeSet<Name>) {
    match &t.kind {
        Kind::Free(x) => {
            out.insert(x.clone());
        }
        Kind::Bound(_) => {}
        Kind::Lam(_, _, b) => free_names(b, out),
        Kind::App(f, a) => {
            free_names(f, out);
            free_names(a, out);
        }
    }
}

// Binder names are kept when no enclosing binder or free variable uses them.
fn from_db(t: &Db, scope: &mut Vec<Name>, taken: &BTreeSet<Name>) -> Term {
    match &t.kind {
        Kind::Bound(i) => Term::Var(scope[scope.len() - 1 - *i as usize].clone()),
        Kind::Free(x) => Term::Var(x.clone()),
        Kind::Lam(x, ann, b) => {
            let mut name = x.to_string();
            while taken.contains(name.as_str()) || scope.iter().any(|n| **n == name) {
                name.push('\'');
            }
            let name: Name = Arc::from(name);
            scope.push(name.clone());
            let body = from_db(b, scope, taken);
            scope.pop();
            Term::Abs(name, ann.clone(), Arc::new(body))
        }
        Kind::App(f, a) => Term::App(Arc::new(from_db(f, scope, taken)), Arc::new(from_db(a, scope, taken))),
    }
}

fn read_back(t: &Db) -> Term {
    let mut taken = BTreeSet::new();
    free_names(t, &mut taken);
    from_db(t, &mut Vec::new(), &taken)
}

/// Normal-order β-normalization with a step budget.
pub fn beta_normalize(t: &Term, fuel: u64) -> Result<Term, NormalizeError> {
    let db = to_db(t, &mut Vec::new());
    let mut budget = Budget { left: fuel, limit: fuel };
    let r = nf(&db, &mut budget)?;
    Ok(read_back(&r))
}

/// Like [`beta_normalize`] but also reports the number of contractions.
pub fn beta_normalize_counting(t: &Term, fuel: u64) -> Result<(Term, u64), NormalizeError> {
    let db = to_db(t, &mut Vec::new());
    let mut budget = Budget { left: fuel, limit: fuel };
    let r = nf(&db, &mut budget)?;
    Ok((read_back(&r), fuel - budget.left))
}

/// One leftmost-outermost β-step, or `None` when `t` is normal.
pub fn beta_step(t: &Term) -> Option<Term> {
    match t {
        Term::Var(_) => None,
        Term::Abs(x, ann, b) => beta_step(b).map(|b| Term::Abs(x.clone(), ann.clone(), Arc::new(b))),
        Term::App(f, a) => {
            if let Term::Abs(x, _, body) = &**f {
                return Some(body.substitute(x, a));
            }
            if let Some(f2) = beta_step(f) {
                return Some(Term::App(Arc::new(f2), a.clone()));
            }
            beta_step(a).map(|a2| Term::App(f.clone(), Arc::new(a2)))
        }
    }
}

pub fn is_normal(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Abs(_, _, b) => is_normal(b),
        Term::App(f, a) => !matches!(&**f, Term::Abs(..)) && is_normal(f) && is_normal(a),
    }
}

// Normalization by evaluation: a second complete strategy, used to
// cross-check normal order.

#[derive(Clone)]
enum Val {
    Closure(Name, Option<SimpleType>, Env, Db),
    Neutral(Head, Vec<Val>),
}

#[derive(Clone)]
enum Head {
    Level(u32),
    Free(Name),
}

type Env = Option<Arc<EnvCell>>;

struct EnvCell {
    val: Val,
    next: Env,
}

fn env_get(env: &Env, i: u32) -> Val {
    let mut cur = env;
    let mut i = i;
    loop {
        let cell = cur.as_ref().expect("index within environment");
        if i == 0 {
            return cell.val.clone();
        }
        i -= 1;
        cur = &cell.next;
    }
}

fn env_push(env: &Env, v: Val) -> Env {
    Some(Arc::new(EnvCell { val: v, next: env.clone() }))
}

fn eval(t: &Db, env: &Env, budget: &mut Budget) -> Result<Val, NormalizeError> {
    match &t.kind {
        Kind::Bound(i) => Ok(env_get(env, *i)),
        Kind::Free(x) => Ok(Val::Neutral(Head::Free(x.clone()), Vec::new())),
        Kind::Lam(x, ann, b) => Ok(Val::Closure(x.clone(), ann.clone(), env.clone(), b.clone())),
        Kind::App(f, a) => {
            let fv = eval(f, env, budget)?;
            let av = eval(a, env, budget)?;
            apply(fv, av, budget)
        }
    }
}

fn apply(f: Val, a: Val, budget: &mut Budget) -> Result<Val, NormalizeError> {
    match f {
        Val::Closure(_, _, env, body) => {
            budget.tick()?;
            eval(&body, &env_push(&env, a), budget)
        }
        Val::Neutral(h, mut args) => {
            args.push(a);
            Ok(Val::Neutral(h, args))
        }
    }
}

fn quote(v: &Val, depth: u32, budget: &mut Budget) -> Result<Db, NormalizeError> {
    match v {
        Val::Closure(x, ann, env, body) => {
            let arg = Val::Neutral(Head::Level(depth), Vec::new());
            let bv = eval(body, &env_push(env, arg), budget)?;
            Ok(lam(x.clone(), ann.clone(), quote(&bv, depth + 1, budget)?))
        }
        Val::Neutral(h, args) => {
            let mut out = match h {
                Head::Level(l) => bound(depth - 1 - l),
                Head::Free(x) => free(x.clone()),
            };
            for a in args {
                out = app(out, quote(a, depth, budget)?);
            }
            Ok(out)
        }
    }
}

/// Normalization by evaluation. Applicative order under closures, so the
/// step count differs from normal order; the normal form does not.
pub fn normalize_nbe(t: &Term, fuel: u64) -> Result<Term, NormalizeError> {
    let db = to_db(t, &mut Vec::new());
    let mut budget = Budget { left: fuel, limit: fuel };
    let v = eval(&db, &None, &mut budget)?;
    let r = quote(&v, 0, &mut budget)?;
    Ok(read_back(&r))
}

/// Equality of β-normal terms up to α and η, ignoring annotations.
pub fn alpha_eta_equal(t: &Term, u: &Term) -> bool {
    t.erase_annotations().eta_reduce().alpha_eq(&u.erase_annotations().eta_reduce())
}
