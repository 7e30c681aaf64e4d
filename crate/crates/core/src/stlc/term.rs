use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::types::SimpleType;

pub type Name = Arc<str>;

/// Simply typed lambda terms with optional binder annotations.
///
/// Equality on terms used anywhere in the crate is [`Term::alpha_eq`];
/// the derived `PartialEq` is syntactic and only exists for containers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Abs(Name, Option<SimpleType>, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
}

pub fn var(x: &str) -> Term {
    Term::Var(Arc::from(x))
}

pub fn lam(x: &str, body: Term) -> Term {
    Term::Abs(Arc::from(x), None, Arc::new(body))
}

pub fn lam_t(x: &str, ty: SimpleType, body: Term) -> Term {
    Term::Abs(Arc::from(x), Some(ty), Arc::new(body))
}

/// `λx_1. … λx_n. body`.
pub fn lams<S: AsRef<str>>(xs: &[S], body: Term) -> Term {
    xs.iter().rev().fold(body, |acc, x| lam(x.as_ref(), acc))
}

/// Annotated `λx_1:A_1. … λx_n:A_n. body`.
pub fn lams_t<S: AsRef<str>>(xs: &[(S, SimpleType)], body: Term) -> Term {
    xs.iter()
        .rev()
        .fold(body, |acc, (x, ty)| lam_t(x.as_ref(), ty.clone(), acc))
}

pub fn app(f: Term, a: Term) -> Term {
    Term::App(Arc::new(f), Arc::new(a))
}

/// `f a_1 … a_n`.
pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
    args.into_iter().fold(f, app)
}

impl Term {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Abs(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
        }
    }

    pub fn occurs_free(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => &**y == x,
            Term::Abs(y, _, b) => &**y != x && b.occurs_free(x),
            Term::App(f, a) => f.occurs_free(x) || a.occurs_free(x),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Abs(_, _, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Capture-avoiding `self{x := u}`.
    pub fn substitute(&self, x: &str, u: &Term) -> Term {
        let fv_u = u.free_vars();
        self.subst_inner(x, u, &fv_u)
    }

    fn subst_inner(&self, x: &str, u: &Term, fv_u: &BTreeSet<Name>) -> Term {
        match self {
            Term::Var(y) => {
                if &**y == x {
                    u.clone()
                } else {
                    self.clone()
                }
            }
            Term::App(f, a) => app(f.subst_inner(x, u, fv_u), a.subst_inner(x, u, fv_u)),
            Term::Abs(y, ann, body) => {
                if &**y == x || !body.occurs_free(x) {
                    return self.clone();
                }
                if fv_u.contains(y) {
                    let mut avoid = body.free_vars();
                    avoid.extend(fv_u.iter().cloned());
                    avoid.insert(Arc::from(x));
                    let fresh = fresh_name(y, &avoid);
                    let renamed = body.subst_inner(y, &var(&fresh), &BTreeSet::from([Arc::from(fresh.as_str())]));
                    Term::Abs(Arc::from(fresh.as_str()), ann.clone(), Arc::new(renamed.subst_inner(x, u, fv_u)))
                } else {
                    Term::Abs(y.clone(), ann.clone(), Arc::new(body.subst_inner(x, u, fv_u)))
                }
            }
        }
    }

    /// α-equivalence, annotations included.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        fn go(a: &Term, b: &Term, ea: &mut Vec<Name>, eb: &mut Vec<Name>) -> bool {
            match (a, b) {
                (Term::Var(x), Term::Var(y)) => {
                    let ix = ea.iter().rposition(|n| n == x);
                    let iy = eb.iter().rposition(|n| n == y);
                    match (ix, iy) {
                        (Some(i), Some(j)) => ea.len() - i == eb.len() - j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (Term::Abs(x, ta, ba), Term::Abs(y, tb, bb)) => {
                    if ta != tb {
                        return false;
                    }
                    ea.push(x.clone());
                    eb.push(y.clone());
                    let r = go(ba, bb, ea, eb);
                    ea.pop();
                    eb.pop();
                    r
                }
                (Term::App(f, a1), Term::App(g, a2)) => go(f, g, ea, eb) && go(a1, a2, ea, eb),
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// Drop every binder annotation.
    pub fn erase_annotations(&self) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::Abs(x, _, b) => Term::Abs(x.clone(), None, Arc::new(b.erase_annotations())),
            Term::App(f, a) => app(f.erase_annotations(), a.erase_annotations()),
        }
    }

    /// Apply `o := b` to every binder annotation. This is the term-level
    /// counterpart of typing a term at a base-substituted type.
    pub fn substitute_base_in_annotations(&self, b: &SimpleType) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::Abs(x, ann, body) => Term::Abs(
                x.clone(),
                ann.as_ref().map(|t| t.substitute_base(b)),
                Arc::new(body.substitute_base_in_annotations(b)),
            ),
            Term::App(f, a) => app(f.substitute_base_in_annotations(b), a.substitute_base_in_annotations(b)),
        }
    }

    /// Contract every η-redex `λx. t x` with `x ∉ FV(t)`, bottom-up.
    pub fn eta_reduce(&self) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::App(f, a) => app(f.eta_reduce(), a.eta_reduce()),
            Term::Abs(x, ann, b) => {
                let b = b.eta_reduce();
                if let Term::App(f, a) = &b {
                    if let Term::Var(y) = &**a {
                        if y == x && !f.occurs_free(x) {
                            return (**f).clone();
                        }
                    }
                }
                Term::Abs(x.clone(), ann.clone(), Arc::new(b))
            }
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    /// Strip up to `n` leading abstractions.
    pub fn strip_lambdas(&self, n: usize) -> (Vec<Name>, &Term) {
        let mut names = Vec::new();
        let mut t = self;
        while names.len() < n {
            match t {
                Term::Abs(x, _, b) => {
                    names.push(x.clone());
                    t = b;
                }
                _ => break,
            }
        }
        (names, t)
    }

    fn fmt_term(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Abs(x, ann, b) => {
                match ann {
                    Some(t) => write!(f, "\\{x}:{t}. ")?,
                    None => write!(f, "\\{x}. ")?,
                }
                b.fmt_term(f)
            }
            Term::App(func, a) => {
                match &**func {
                    Term::Abs(..) => {
                        f.write_str("(")?;
                        func.fmt_term(f)?;
                        f.write_str(")")?;
                    }
                    _ => func.fmt_term(f)?,
                }
                f.write_str(" ")?;
                match &**a {
                    Term::Var(_) => a.fmt_term(f),
                    _ => {
                        f.write_str("(")?;
                        a.fmt_term(f)?;
                        f.write_str(")")
                    }
                }
            }
            Term::Var(x) => f.write_str(x),
        }
    }
}

/// Prime `base` until it avoids every name in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> String {
    let mut candidate = format!("{base}'");
    while avoid.contains(candidate.as_str()) {
        candidate.push('\'');
    }
    candidate
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_term(f)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
