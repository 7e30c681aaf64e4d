//! Typing derivations `Γ | Δ | Θ ⊢ t : σ`: an annotated-term builder and
//! an independent checker.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::term::ETerm;
use super::types::{bang, lolli, EType};
use crate::stlc::term::Name;

/// Linear (`Γ`), non-linear (`Δ`) and temporary (`Θ`) assumptions.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct TriContext {
    pub linear: BTreeMap<Name, EType>,
    pub banged: BTreeMap<Name, EType>,
    pub temporary: BTreeMap<Name, EType>,
}

impl TriContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// `∅ | ∅ | Θ`.
    pub fn temporaries<'a>(vars: impl IntoIterator<Item = (&'a str, EType)>) -> Self {
        TriContext { temporary: vars.into_iter().map(|(x, t)| (Arc::from(x), t)).collect(), ..Self::default() }
    }

    pub fn binds(&self, x: &str) -> bool {
        self.linear.contains_key(x) || self.banged.contains_key(x) || self.temporary.contains_key(x)
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.linear.keys().chain(self.banged.keys()).chain(self.temporary.keys()).cloned().collect()
    }

    fn type_var_free(&self, a: &str) -> bool {
        self.linear.values().chain(self.banged.values()).chain(self.temporary.values()).any(|t| t.occurs_free(a))
    }

    fn well_formed(&self) -> Result<(), String> {
        for x in self.linear.keys() {
            if self.banged.contains_key(x) || self.temporary.contains_key(x) {
                return Err(format!("`{x}` is bound in two zones"));
            }
        }
        for x in self.banged.keys() {
            if self.temporary.contains_key(x) {
                return Err(format!("`{x}` is bound in two zones"));
            }
        }
        for (x, t) in &self.linear {
            if !t.is_linear() {
                return Err(format!("linear zone assigns non-linear type {t} to `{x}`"));
            }
        }
        for (x, t) in &self.banged {
            if !matches!(t, EType::Bang(_)) {
                return Err(format!("non-linear zone assigns {t} to `{x}`, which is not a !-type"));
            }
        }
        Ok(())
    }
}

fn zone_eq(a: &BTreeMap<Name, EType>, b: &BTreeMap<Name, EType>) -> bool {
    a.len() == b.len() && a.iter().all(|(x, t)| b.get(x).is_some_and(|u| t.alpha_eq(u)))
}

impl fmt::Display for TriContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zone = |m: &BTreeMap<Name, EType>| m.iter().map(|(x, t)| format!("{x} : {t}")).collect::<Vec<_>>().join(", ");
        write!(f, "{} | {} | {}", zone(&self.linear), zone(&self.banged), zone(&self.temporary))
    }
}

impl fmt::Debug for TriContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    VarLinear,
    VarTemporary,
    Abs,
    BangAbs,
    App,
    ForallIntro,
    /// Carries the instantiating type.
    ForallElim(EType),
    Promotion,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::VarLinear => "var-lin",
            Rule::VarTemporary => "var-tmp",
            Rule::Abs => "abs",
            Rule::BangAbs => "bang-abs",
            Rule::App => "app",
            Rule::ForallIntro => "forall-intro",
            Rule::ForallElim(_) => "forall-elim",
            Rule::Promotion => "promote",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Derivation {
    pub rule: Rule,
    pub ctx: TriContext,
    pub term: ETerm,
    pub ty: EType,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::node_count).sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("bad derivation node at {path:?} ({rule}): {message}")]
pub struct DerivationError {
    /// Premise indices from the root.
    pub path: Vec<usize>,
    pub rule: &'static str,
    pub message: String,
}

fn same_term(a: &ETerm, b: &ETerm) -> bool {
    a.same(b)
}

fn check_node(d: &Derivation, path: &mut Vec<usize>) -> Result<(), DerivationError> {
    let fail = |path: &Vec<usize>, m: String| DerivationError { path: path.clone(), rule: d.rule.name(), message: m };
    d.ctx.well_formed().map_err(|m| fail(path, m))?;
    if !d.ty.is_well_formed() {
        return Err(fail(path, format!("type {} is not well formed", d.ty)));
    }
    let arity = match d.rule {
        Rule::VarLinear | Rule::VarTemporary => 0,
        Rule::App => 2,
        _ => 1,
    };
    if d.premises.len() != arity {
        return Err(fail(path, format!("expected {arity} premises, found {}", d.premises.len())));
    }
    let p = |i: usize| &d.premises[i];
    match &d.rule {
        Rule::VarLinear | Rule::VarTemporary => {
            let ETerm::Var(x) = &d.term else {
                return Err(fail(path, "subject is not a variable".into()));
            };
            let zone = if d.rule == Rule::VarLinear { &d.ctx.linear } else { &d.ctx.temporary };
            match zone.get(x) {
                Some(t) if t.alpha_eq(&d.ty) => {}
                Some(t) => return Err(fail(path, format!("`{x}` has type {t}, not {}", d.ty))),
                None => return Err(fail(path, format!("`{x}` is not in the expected zone"))),
            }
        }
        Rule::Abs | Rule::BangAbs => {
            let (x, body) = match (&d.rule, &d.term) {
                (Rule::Abs, ETerm::Abs(x, b)) | (Rule::BangAbs, ETerm::BangAbs(x, b)) => (x, b),
                _ => return Err(fail(path, "subject does not match the abstraction kind".into())),
            };
            let EType::Lolli(dom, cod) = &d.ty else {
                return Err(fail(path, format!("type {} is not an implication", d.ty)));
            };
            if d.ctx.binds(x) {
                return Err(fail(path, format!("`{x}` is already bound")));
            }
            let mut expect = d.ctx.clone();
            if d.rule == Rule::Abs {
                if !dom.is_linear() {
                    return Err(fail(path, format!("λ-bound `{x}` gets non-linear type {dom}")));
                }
                expect.linear.insert(x.clone(), (**dom).clone());
            } else {
                if !matches!(**dom, EType::Bang(_)) {
                    return Err(fail(path, format!("λ!-bound `{x}` gets type {dom}, not a !-type")));
                }
                expect.banged.insert(x.clone(), (**dom).clone());
            }
            let q = p(0);
            if !ctx_eq(&q.ctx, &expect) || !same_term(&q.term, body) || !q.ty.alpha_eq(cod) {
                return Err(fail(path, "premise does not match the abstraction".into()));
            }
        }
        Rule::App => {
            let ETerm::App(t, u) = &d.term else {
                return Err(fail(path, "subject is not an application".into()));
            };
            let (l, r) = (p(0), p(1));
            if !same_term(&l.term, t) || !same_term(&r.term, u) {
                return Err(fail(path, "premise subjects do not match".into()));
            }
            if !zone_eq(&l.ctx.banged, &d.ctx.banged)
                || !zone_eq(&r.ctx.banged, &d.ctx.banged)
                || !zone_eq(&l.ctx.temporary, &d.ctx.temporary)
                || !zone_eq(&r.ctx.temporary, &d.ctx.temporary)
            {
                return Err(fail(path, "premises must share Δ and Θ".into()));
            }
            for x in l.ctx.linear.keys() {
                if r.ctx.linear.contains_key(x) {
                    return Err(fail(path, format!("linear `{x}` is given to both premises")));
                }
            }
            let mut joined = l.ctx.linear.clone();
            joined.extend(r.ctx.linear.iter().map(|(x, t)| (x.clone(), t.clone())));
            if !zone_eq(&joined, &d.ctx.linear) {
                return Err(fail(path, "linear zones do not split the conclusion's".into()));
            }
            let EType::Lolli(dom, cod) = &l.ty else {
                return Err(fail(path, format!("function has type {}", l.ty)));
            };
            if !dom.alpha_eq(&r.ty) || !cod.alpha_eq(&d.ty) {
                return Err(fail(path, format!("cannot apply {} to {}", l.ty, r.ty)));
            }
        }
        Rule::ForallIntro => {
            let EType::Forall(a, s) = &d.ty else {
                return Err(fail(path, "type is not a ∀".into()));
            };
            let q = p(0);
            if !ctx_eq(&q.ctx, &d.ctx) || !same_term(&q.term, &d.term) || !q.ty.alpha_eq(s) {
                return Err(fail(path, "premise does not match".into()));
            }
            if !s.is_strictly_linear() {
                return Err(fail(path, format!("∀ over {s}, which is not strictly linear")));
            }
            if d.ctx.type_var_free(a) {
                return Err(fail(path, format!("'{a} is free in the context")));
            }
        }
        Rule::ForallElim(inst) => {
            let q = p(0);
            if !ctx_eq(&q.ctx, &d.ctx) || !same_term(&q.term, &d.term) {
                return Err(fail(path, "premise does not match".into()));
            }
            let EType::Forall(a, s) = &q.ty else {
                return Err(fail(path, format!("premise type {} is not a ∀", q.ty)));
            };
            if !inst.is_linear() {
                return Err(fail(path, format!("'{a} instantiated with non-linear {inst}")));
            }
            if !s.substitute(a, inst).alpha_eq(&d.ty) {
                return Err(fail(path, "instantiation does not give the conclusion".into()));
            }
        }
        Rule::Promotion => {
            let ETerm::Bang(t) = &d.term else {
                return Err(fail(path, "subject is not a !-term".into()));
            };
            let EType::Bang(sigma) = &d.ty else {
                return Err(fail(path, "type is not a !-type".into()));
            };
            let q = p(0);
            if !q.ctx.linear.is_empty() || !q.ctx.banged.is_empty() {
                return Err(fail(path, "premise must have empty Γ and Δ".into()));
            }
            if !same_term(&q.term, t) || !q.ty.alpha_eq(sigma) {
                return Err(fail(path, "premise does not match".into()));
            }
            for (x, t) in &q.ctx.temporary {
                match d.ctx.banged.get(x) {
                    Some(u) if u.alpha_eq(&bang(t.clone())) => {}
                    _ => return Err(fail(path, format!("`{x}` : !{t} missing from the conclusion's Δ"))),
                }
            }
        }
    }
    for (i, q) in d.premises.iter().enumerate() {
        path.push(i);
        check_node(q, path)?;
        path.pop();
    }
    Ok(())
}

fn ctx_eq(a: &TriContext, b: &TriContext) -> bool {
    zone_eq(&a.linear, &b.linear) && zone_eq(&a.banged, &b.banged) && zone_eq(&a.temporary, &b.temporary)
}

/// Check every node against its rule schema.
pub fn check_derivation(d: &Derivation) -> Result<(), DerivationError> {
    check_node(d, &mut Vec::new())
}

/// A term carrying enough annotations to rebuild its derivation.
#[derive(Clone, Debug)]
pub enum ATerm {
    Var(Name),
    Abs(Name, EType, Box<ATerm>),
    /// The annotation is the full `!σ`.
    BangAbs(Name, EType, Box<ATerm>),
    App(Box<ATerm>, Box<ATerm>),
    Bang(Box<ATerm>),
    Gen(Name, Box<ATerm>),
    Inst(Box<ATerm>, EType),
}

pub fn avar(x: &str) -> ATerm {
    ATerm::Var(Arc::from(x))
}

pub fn alam(x: &str, ty: EType, body: ATerm) -> ATerm {
    ATerm::Abs(Arc::from(x), ty, Box::new(body))
}

/// `λx_1:A_1. … λx_n:A_n. body`.
pub fn alams(xs: &[(String, EType)], body: ATerm) -> ATerm {
    xs.iter().rev().fold(body, |acc, (x, t)| alam(x, t.clone(), acc))
}

/// `λ!x : !σ. body`, given `σ`.
pub fn abang_lam(x: &str, sigma: EType, body: ATerm) -> ATerm {
    ATerm::BangAbs(Arc::from(x), bang(sigma), Box::new(body))
}

pub fn aapp(f: ATerm, a: ATerm) -> ATerm {
    ATerm::App(Box::new(f), Box::new(a))
}

pub fn aapps(f: ATerm, args: impl IntoIterator<Item = ATerm>) -> ATerm {
    args.into_iter().fold(f, aapp)
}

pub fn abang(t: ATerm) -> ATerm {
    ATerm::Bang(Box::new(t))
}

pub fn agen(a: &str, t: ATerm) -> ATerm {
    ATerm::Gen(Arc::from(a), Box::new(t))
}

pub fn ainst(t: ATerm, ty: EType) -> ATerm {
    ATerm::Inst(Box::new(t), ty)
}

impl ATerm {
    pub fn erase(&self) -> ETerm {
        match self {
            ATerm::Var(x) => ETerm::Var(x.clone()),
            ATerm::Abs(x, _, b) => ETerm::Abs(x.clone(), Arc::new(b.erase())),
            ATerm::BangAbs(x, _, b) => ETerm::BangAbs(x.clone(), Arc::new(b.erase())),
            ATerm::App(f, a) => ETerm::App(Arc::new(f.erase()), Arc::new(a.erase())),
            ATerm::Bang(b) => ETerm::Bang(Arc::new(b.erase())),
            ATerm::Gen(_, b) | ATerm::Inst(b, _) => b.erase(),
        }
    }

    fn free_into(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            ATerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            ATerm::Abs(x, _, b) | ATerm::BangAbs(x, _, b) => {
                bound.push(x.clone());
                b.free_into(bound, out);
                bound.pop();
            }
            ATerm::App(f, a) => {
                f.free_into(bound, out);
                a.free_into(bound, out);
            }
            ATerm::Bang(b) | ATerm::Gen(_, b) | ATerm::Inst(b, _) => b.free_into(bound, out),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.free_into(&mut Vec::new(), &mut out);
        out
    }
}

/// Recover the annotated term a derivation proves, so that it can be
/// embedded in a larger term and derived again.
pub fn annotate(d: &Derivation) -> ATerm {
    let p = |i: usize| Box::new(annotate(&d.premises[i]));
    match (&d.rule, &d.term, &d.ty) {
        (Rule::VarLinear | Rule::VarTemporary, ETerm::Var(x), _) => ATerm::Var(x.clone()),
        (Rule::Abs, ETerm::Abs(x, _), EType::Lolli(dom, _)) => ATerm::Abs(x.clone(), (**dom).clone(), p(0)),
        (Rule::BangAbs, ETerm::BangAbs(x, _), EType::Lolli(dom, _)) => ATerm::BangAbs(x.clone(), (**dom).clone(), p(0)),
        (Rule::App, _, _) => ATerm::App(p(0), p(1)),
        (Rule::Promotion, _, _) => ATerm::Bang(p(0)),
        (Rule::ForallIntro, _, EType::Forall(a, _)) => ATerm::Gen(a.clone(), p(0)),
        (Rule::ForallElim(t), _, _) => ATerm::Inst(p(0), t.clone()),
        _ => panic!("annotate: derivation node does not match its rule; check it first"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypingError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("`{0}` is non-linear and can only be used under a bang")]
    BangedUsedDirectly(String),
    #[error("linear variable `{0}` is used more than once")]
    LinearReuse(String),
    #[error("`{0}` cannot be used under a bang")]
    EscapesPromotion(String),
    #[error("`{0}` is already bound")]
    Shadowing(String),
    #[error("{0}")]
    Mismatch(String),
}

/// Builds derivations; renames binders that would shadow a bound name.
struct Builder {
    // Source name to name in the built term.
    renames: Vec<(Name, Name)>,
}

impl Builder {
    fn resolve(&self, x: &Name) -> Name {
        self.renames.iter().rev().find(|(s, _)| s == x).map(|(_, t)| t.clone()).unwrap_or_else(|| x.clone())
    }

    fn fresh_binder(&self, x: &Name, ctx: &TriContext, body: &ATerm) -> Name {
        if !ctx.binds(x) {
            return x.clone();
        }
        let free: BTreeSet<Name> = body.free_vars().iter().map(|v| self.resolve(v)).collect();
        let mut cand = format!("{x}'");
        while ctx.binds(&cand) || free.contains(cand.as_str()) {
            cand.push('\'');
        }
        Arc::from(cand)
    }

    fn build(&mut self, ctx: &TriContext, a: &ATerm) -> Result<Derivation, TypingError> {
        match a {
            ATerm::Var(x0) => {
                let x = self.resolve(x0);
                let term = ETerm::Var(x.clone());
                if let Some(t) = ctx.linear.get(&x) {
                    Ok(Derivation { rule: Rule::VarLinear, ctx: ctx.clone(), term, ty: t.clone(), premises: vec![] })
                } else if let Some(t) = ctx.temporary.get(&x) {
                    Ok(Derivation { rule: Rule::VarTemporary, ctx: ctx.clone(), term, ty: t.clone(), premises: vec![] })
                } else if ctx.banged.contains_key(&x) {
                    Err(TypingError::BangedUsedDirectly(x.to_string()))
                } else {
                    Err(TypingError::Unbound(x.to_string()))
                }
            }
            ATerm::Abs(x0, dom, body) | ATerm::BangAbs(x0, dom, body) => {
                let is_bang = matches!(a, ATerm::BangAbs(..));
                if is_bang && !matches!(dom, EType::Bang(_)) {
                    return Err(TypingError::Mismatch(format!("λ!{x0} annotated with {dom}, not a !-type")));
                }
                if !is_bang && !dom.is_linear() {
                    return Err(TypingError::Mismatch(format!("λ{x0} annotated with non-linear {dom}")));
                }
                let x = self.fresh_binder(x0, ctx, body);
                let mut inner = ctx.clone();
                if is_bang {
                    inner.banged.insert(x.clone(), dom.clone());
                } else {
                    inner.linear.insert(x.clone(), dom.clone());
                }
                self.renames.push((x0.clone(), x.clone()));
                let p = self.build(&inner, body);
                self.renames.pop();
                let p = p?;
                let (rule, term) = if is_bang {
                    (Rule::BangAbs, ETerm::BangAbs(x, Arc::new(p.term.clone())))
                } else {
                    (Rule::Abs, ETerm::Abs(x, Arc::new(p.term.clone())))
                };
                Ok(Derivation { rule, ctx: ctx.clone(), term, ty: lolli(dom.clone(), p.ty.clone()), premises: vec![p] })
            }
            ATerm::App(f, u) => {
                let fv_f: BTreeSet<Name> = f.free_vars().iter().map(|v| self.resolve(v)).collect();
                let fv_u: BTreeSet<Name> = u.free_vars().iter().map(|v| self.resolve(v)).collect();
                let mut left = ctx.clone();
                let mut right = ctx.clone();
                right.linear.clear();
                for (x, t) in &ctx.linear {
                    if fv_u.contains(x) {
                        if fv_f.contains(x) {
                            return Err(TypingError::LinearReuse(x.to_string()));
                        }
                        left.linear.remove(x);
                        right.linear.insert(x.clone(), t.clone());
                    }
                }
                let pf = self.build(&left, f)?;
                let pu = self.build(&right, u)?;
                let EType::Lolli(dom, cod) = &pf.ty else {
                    return Err(TypingError::Mismatch(format!("applying a term of type {}", pf.ty)));
                };
                if !dom.alpha_eq(&pu.ty) {
                    return Err(TypingError::Mismatch(format!("function expects {dom} but argument has {}", pu.ty)));
                }
                let ty = (**cod).clone();
                let term = ETerm::App(Arc::new(pf.term.clone()), Arc::new(pu.term.clone()));
                Ok(Derivation { rule: Rule::App, ctx: ctx.clone(), term, ty, premises: vec![pf, pu] })
            }
            ATerm::Bang(t) => {
                for v in t.free_vars() {
                    let v = self.resolve(&v);
                    if ctx.linear.contains_key(&v) || ctx.temporary.contains_key(&v) {
                        return Err(TypingError::EscapesPromotion(v.to_string()));
                    }
                }
                let inner = TriContext {
                    temporary: ctx
                        .banged
                        .iter()
                        .map(|(x, t)| match t {
                            EType::Bang(s) => (x.clone(), (**s).clone()),
                            _ => unreachable!("Δ holds only !-types"),
                        })
                        .collect(),
                    ..TriContext::default()
                };
                let p = self.build(&inner, t)?;
                let term = ETerm::Bang(Arc::new(p.term.clone()));
                Ok(Derivation { rule: Rule::Promotion, ctx: ctx.clone(), term, ty: bang(p.ty.clone()), premises: vec![p] })
            }
            ATerm::Gen(alpha, t) => {
                if ctx.type_var_free(alpha) {
                    return Err(TypingError::Mismatch(format!("'{alpha} is free in the context")));
                }
                let p = self.build(ctx, t)?;
                if !p.ty.is_strictly_linear() {
                    return Err(TypingError::Mismatch(format!("cannot generalize {}", p.ty)));
                }
                let ty = EType::Forall(alpha.clone(), Arc::new(p.ty.clone()));
                Ok(Derivation { rule: Rule::ForallIntro, ctx: ctx.clone(), term: p.term.clone(), ty, premises: vec![p] })
            }
            ATerm::Inst(t, inst) => {
                if !inst.is_linear() {
                    return Err(TypingError::Mismatch(format!("instantiation with non-linear {inst}")));
                }
                let p = self.build(ctx, t)?;
                let EType::Forall(alpha, s) = &p.ty else {
                    return Err(TypingError::Mismatch(format!("instantiating {}", p.ty)));
                };
                let ty = s.substitute(alpha, inst);
                Ok(Derivation {
                    rule: Rule::ForallElim(inst.clone()),
                    ctx: ctx.clone(),
                    term: p.term.clone(),
                    ty,
                    premises: vec![p],
                })
            }
        }
    }
}

/// Derive `ctx ⊢ a`. Binders that would clash with names already in scope
/// are primed, so the subject of the result may differ from `a.erase()` by
/// α-renaming.
pub fn derive(ctx: &TriContext, a: &ATerm) -> Result<Derivation, TypingError> {
    Builder { renames: Vec::new() }.build(ctx, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eal::types::tvar;

    #[test]
    fn variable_rule() {
        let ctx = TriContext { linear: [(Arc::from("x"), tvar("a"))].into_iter().collect(), ..Default::default() };
        let d = derive(&ctx, &avar("x")).unwrap();
        assert_eq!(d.rule, Rule::VarLinear);
        check_derivation(&d).unwrap();
    }

    #[test]
    fn bang_identity() {
        // ⊢ λ!x. !x : !σ ⊸ !σ
        let sigma = lolli(tvar("a"), tvar("a"));
        let t = abang_lam("x", sigma.clone(), abang(avar("x")));
        let d = derive(&TriContext::new(), &t).unwrap();
        check_derivation(&d).unwrap();
        assert!(d.ty.alpha_eq(&lolli(bang(sigma.clone()), bang(sigma))));
        assert_eq!(d.premises[0].premises[0].rule, Rule::VarTemporary);
    }

    #[test]
    fn bang_instantiation_rejected() {
        let id = agen("a", alam("x", tvar("a"), avar("x")));
        let mut d = derive(&TriContext::new(), &ainst(id, tvar("b"))).unwrap();
        check_derivation(&d).unwrap();
        // Tamper: claim an instantiation at !b.
        d.rule = Rule::ForallElim(bang(tvar("b")));
        d.ty = lolli(bang(tvar("b")), bang(tvar("b")));
        let e = check_derivation(&d).unwrap_err();
        assert!(e.message.contains("non-linear"));
    }

    #[test]
    fn builder_rejects_misuse() {
        let a = tvar("a");
        let dup = alam("f", lolli(a.clone(), lolli(a.clone(), a.clone())), alam("x", a.clone(), aapps(avar("f"), [avar("x"), avar("x")])));
        assert!(matches!(derive(&TriContext::new(), &dup), Err(TypingError::LinearReuse(_))));
        let deref = abang_lam("x", a.clone(), avar("x"));
        assert!(matches!(derive(&TriContext::new(), &deref), Err(TypingError::BangedUsedDirectly(_))));
        let lin_under_bang = alam("x", a.clone(), abang(avar("x")));
        assert!(matches!(derive(&TriContext::new(), &lin_under_bang), Err(TypingError::EscapesPromotion(_))));
    }

    #[test]
    fn shadowing_is_renamed() {
        let a = tvar("a");
        let t = alam("x", a.clone(), aapp(alam("x", a.clone(), avar("x")), avar("x")));
        let d = derive(&TriContext::new(), &t).unwrap();
        check_derivation(&d).unwrap();
        assert!(d.term.alpha_eq(&t.erase()));
        let again = derive(&TriContext::new(), &annotate(&d)).unwrap();
        assert!(again.term.alpha_eq(&d.term) && again.ty.alpha_eq(&d.ty));
    }
}
