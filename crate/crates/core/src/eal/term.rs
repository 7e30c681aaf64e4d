use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::stlc::term::{fresh_name, Name};

/// `t, u ::= x | λx. t | λ!x. t | t u | !t`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ETerm {
    Var(Name),
    Abs(Name, Arc<ETerm>),
    BangAbs(Name, Arc<ETerm>),
    App(Arc<ETerm>, Arc<ETerm>),
    Bang(Arc<ETerm>),
}

pub fn evar(x: &str) -> ETerm {
    ETerm::Var(Arc::from(x))
}

pub fn elam(x: &str, body: ETerm) -> ETerm {
    ETerm::Abs(Arc::from(x), Arc::new(body))
}

pub fn ebang_lam(x: &str, body: ETerm) -> ETerm {
    ETerm::BangAbs(Arc::from(x), Arc::new(body))
}

pub fn eapp(f: ETerm, a: ETerm) -> ETerm {
    ETerm::App(Arc::new(f), Arc::new(a))
}

pub fn eapps(f: ETerm, args: impl IntoIterator<Item = ETerm>) -> ETerm {
    args.into_iter().fold(f, eapp)
}

pub fn ebang(t: ETerm) -> ETerm {
    ETerm::Bang(Arc::new(t))
}

/// Which binder a violation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinderKind {
    Linear,
    Bang,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearityViolation {
    pub binder: Name,
    pub occurrences: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratificationViolation {
    pub binder: Name,
    pub kind: BinderKind,
    pub depth: usize,
}

impl fmt::Display for LinearityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ{} binds a variable used {} times", self.binder, self.occurrences)
    }
}

impl fmt::Display for StratificationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (b, want) = match self.kind {
            BinderKind::Linear => ("λ", 0),
            BinderKind::Bang => ("λ!", 1),
        };
        write!(f, "{b}{} has an occurrence at depth {} (expected {want})", self.binder, self.depth)
    }
}

impl ETerm {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            ETerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            ETerm::Abs(x, b) | ETerm::BangAbs(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            ETerm::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            ETerm::Bang(b) => b.collect_free(bound, out),
        }
    }

    pub fn occurs_free(&self, x: &str) -> bool {
        match self {
            ETerm::Var(y) => &**y == x,
            ETerm::Abs(y, b) | ETerm::BangAbs(y, b) => &**y != x && b.occurs_free(x),
            ETerm::App(f, a) => f.occurs_free(x) || a.occurs_free(x),
            ETerm::Bang(b) => b.occurs_free(x),
        }
    }

    /// Bang depths of the free occurrences of `x`.
    pub fn occurrence_depths(&self, x: &str) -> Vec<usize> {
        fn go(t: &ETerm, x: &str, d: usize, out: &mut Vec<usize>) {
            match t {
                ETerm::Var(y) => {
                    if &**y == x {
                        out.push(d)
                    }
                }
                ETerm::Abs(y, b) | ETerm::BangAbs(y, b) => {
                    if &**y != x {
                        go(b, x, d, out)
                    }
                }
                ETerm::App(f, a) => {
                    go(f, x, d, out);
                    go(a, x, d, out);
                }
                ETerm::Bang(b) => go(b, x, d + 1, out),
            }
        }
        let mut out = Vec::new();
        go(self, x, 0, &mut out);
        out
    }

    pub fn size(&self) -> usize {
        match self {
            ETerm::Var(_) => 1,
            ETerm::Abs(_, b) | ETerm::BangAbs(_, b) | ETerm::Bang(b) => 1 + b.size(),
            ETerm::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Capture-avoiding `self{x := u}`.
    pub fn substitute(&self, x: &str, u: &ETerm) -> ETerm {
        let fv = u.free_vars();
        self.subst_with(x, u, &fv)
    }

    fn subst_with(&self, x: &str, u: &ETerm, fv: &BTreeSet<Name>) -> ETerm {
        match self {
            ETerm::Var(y) => {
                if &**y == x {
                    u.clone()
                } else {
                    self.clone()
                }
            }
            ETerm::App(f, a) => eapp(f.subst_with(x, u, fv), a.subst_with(x, u, fv)),
            ETerm::Bang(b) => ebang(b.subst_with(x, u, fv)),
            ETerm::Abs(y, b) | ETerm::BangAbs(y, b) => {
                if &**y == x || !b.occurs_free(x) {
                    return self.clone();
                }
                let (y2, b2) = if fv.contains(y) {
                    let mut avoid = fv.clone();
                    avoid.extend(b.free_vars());
                    let fresh = fresh_name(y, &avoid);
                    let renamed = b.substitute(y, &evar(&fresh));
                    (Arc::from(fresh), renamed)
                } else {
                    (y.clone(), (**b).clone())
                };
                let body = Arc::new(b2.subst_with(x, u, fv));
                match self {
                    ETerm::Abs(..) => ETerm::Abs(y2, body),
                    _ => ETerm::BangAbs(y2, body),
                }
            }
        }
    }

    pub fn alpha_eq(&self, other: &ETerm) -> bool {
        fn go(a: &ETerm, b: &ETerm, ea: &mut Vec<Name>, eb: &mut Vec<Name>) -> bool {
            match (a, b) {
                (ETerm::Var(x), ETerm::Var(y)) => {
                    let ix = ea.iter().rposition(|n| n == x);
                    let iy = eb.iter().rposition(|n| n == y);
                    match (ix, iy) {
                        (Some(i), Some(j)) => ea.len() - i == eb.len() - j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (ETerm::Abs(x, s), ETerm::Abs(y, t)) | (ETerm::BangAbs(x, s), ETerm::BangAbs(y, t)) => {
                    ea.push(x.clone());
                    eb.push(y.clone());
                    let r = go(s, t, ea, eb);
                    ea.pop();
                    eb.pop();
                    r
                }
                (ETerm::App(f, a), ETerm::App(g, c)) => go(f, g, ea, eb) && go(a, c, ea, eb),
                (ETerm::Bang(s), ETerm::Bang(t)) => go(s, t, ea, eb),
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// Syntactic equality that short-circuits on shared subterms.
    pub fn same(&self, other: &ETerm) -> bool {
        fn arc_same(a: &Arc<ETerm>, b: &Arc<ETerm>) -> bool {
            Arc::ptr_eq(a, b) || a.same(b)
        }
        match (self, other) {
            (ETerm::Var(x), ETerm::Var(y)) => x == y,
            (ETerm::Abs(x, s), ETerm::Abs(y, t)) | (ETerm::BangAbs(x, s), ETerm::BangAbs(y, t)) => {
                x == y && arc_same(s, t)
            }
            (ETerm::App(f, a), ETerm::App(g, c)) => arc_same(f, g) && arc_same(a, c),
            (ETerm::Bang(s), ETerm::Bang(t)) => arc_same(s, t),
            _ => false,
        }
    }

    /// Every plain λ binds a variable occurring at most once.
    pub fn check_linearity(&self) -> Vec<LinearityViolation> {
        let mut out = Vec::new();
        self.walk_binders(&mut |kind, x, body| {
            if kind == BinderKind::Linear {
                let n = body.occurrence_depths(x).len();
                if n > 1 {
                    out.push(LinearityViolation { binder: x.clone(), occurrences: n });
                }
            }
        });
        out
    }

    /// λ-bound occurrences sit at depth 0 and λ!-bound ones at depth 1,
    /// counting only the bangs inside the binder's body.
    pub fn check_stratification(&self) -> Vec<StratificationViolation> {
        let mut out = Vec::new();
        self.walk_binders(&mut |kind, x, body| {
            let want = match kind {
                BinderKind::Linear => 0,
                BinderKind::Bang => 1,
            };
            for d in body.occurrence_depths(x) {
                if d != want {
                    out.push(StratificationViolation { binder: x.clone(), kind, depth: d });
                }
            }
        });
        out
    }

    fn walk_binders(&self, visit: &mut dyn FnMut(BinderKind, &Name, &ETerm)) {
        match self {
            ETerm::Var(_) => {}
            ETerm::Abs(x, b) => {
                visit(BinderKind::Linear, x, b);
                b.walk_binders(visit);
            }
            ETerm::BangAbs(x, b) => {
                visit(BinderKind::Bang, x, b);
                b.walk_binders(visit);
            }
            ETerm::App(f, a) => {
                f.walk_binders(visit);
                a.walk_binders(visit);
            }
            ETerm::Bang(b) => b.walk_binders(visit),
        }
    }

    /// `(λx. t) u` or `(λ!x. t) (!u)`.
    pub fn is_redex(&self) -> bool {
        match self {
            ETerm::App(f, a) => match &**f {
                ETerm::Abs(..) => true,
                ETerm::BangAbs(..) => matches!(&**a, ETerm::Bang(_)),
                _ => false,
            },
            _ => false,
        }
    }

    pub fn is_normal(&self) -> bool {
        if self.is_redex() {
            return false;
        }
        match self {
            ETerm::Var(_) => true,
            ETerm::Abs(_, b) | ETerm::BangAbs(_, b) | ETerm::Bang(b) => b.is_normal(),
            ETerm::App(f, a) => f.is_normal() && a.is_normal(),
        }
    }

    /// One leftmost-outermost step, or `None` at a normal form.
    pub fn beta_step(&self) -> Option<ETerm> {
        match self {
            ETerm::Var(_) => None,
            ETerm::Abs(x, b) => b.beta_step().map(|b| ETerm::Abs(x.clone(), Arc::new(b))),
            ETerm::BangAbs(x, b) => b.beta_step().map(|b| ETerm::BangAbs(x.clone(), Arc::new(b))),
            ETerm::Bang(b) => b.beta_step().map(|b| ETerm::Bang(Arc::new(b))),
            ETerm::App(f, a) => {
                match (&**f, &**a) {
                    (ETerm::Abs(x, body), _) => return Some(body.substitute(x, a)),
                    (ETerm::BangAbs(x, body), ETerm::Bang(u)) => return Some(body.substitute(x, u)),
                    _ => {}
                }
                if let Some(f2) = f.beta_step() {
                    return Some(ETerm::App(Arc::new(f2), a.clone()));
                }
                a.beta_step().map(|a2| ETerm::App(f.clone(), Arc::new(a2)))
            }
        }
    }

    fn fmt_term(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ETerm::Var(x) => f.write_str(x),
            ETerm::Abs(x, b) => {
                write!(f, "\\{x}. ")?;
                b.fmt_term(f)
            }
            ETerm::BangAbs(x, b) => {
                write!(f, "\\!{x}. ")?;
                b.fmt_term(f)
            }
            ETerm::Bang(b) => {
                f.write_str("!")?;
                b.fmt_atom(f)
            }
            ETerm::App(g, a) => {
                match &**g {
                    ETerm::Abs(..) | ETerm::BangAbs(..) => g.fmt_atom(f)?,
                    _ => g.fmt_term(f)?,
                }
                f.write_str(" ")?;
                a.fmt_atom(f)
            }
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ETerm::Var(_) | ETerm::Bang(_) => self.fmt_term(f),
            _ => {
                f.write_str("(")?;
                self.fmt_term(f)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for ETerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_term(f)
    }
}

impl fmt::Debug for ETerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
