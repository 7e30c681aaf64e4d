//! Principal simple types by first-order unification.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use super::term::{Name, Term};
use super::types::SimpleType;

pub type TypingContext = BTreeMap<Name, SimpleType>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("term is not typable: {0}")]
    NotTypable(String),
    #[error("unbound variable `{0}`")]
    Unbound(String),
}

/// A simple type that may still contain type variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Ty {
    Var(u32),
    Base,
    Arrow(Box<Ty>, Box<Ty>),
}

impl Ty {
    fn from_simple(t: &SimpleType) -> Ty {
        match t {
            SimpleType::Base => Ty::Base,
            SimpleType::Arrow(d, c) => Ty::Arrow(Box::new(Ty::from_simple(d)), Box::new(Ty::from_simple(c))),
        }
    }

    /// Instantiate every remaining variable at `o`.
    pub fn ground(&self) -> SimpleType {
        match self {
            Ty::Var(_) | Ty::Base => SimpleType::Base,
            Ty::Arrow(d, c) => SimpleType::arrow(d.ground(), c.ground()),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Ty::Var(_) => false,
            Ty::Base => true,
            Ty::Arrow(d, c) => d.is_ground() && c.is_ground(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, left: bool, names: &mut HashMap<u32, String>) -> fmt::Result {
        match self {
            Ty::Base => f.write_str("o"),
            Ty::Var(v) => {
                let next = names.len();
                let name = names.entry(*v).or_insert_with(|| var_name(next)).clone();
                f.write_str(&name)
            }
            Ty::Arrow(d, c) => {
                if left {
                    f.write_str("(")?;
                }
                d.fmt_prec(f, true, names)?;
                f.write_str(" -> ")?;
                c.fmt_prec(f, false, names)?;
                if left {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

fn var_name(i: usize) -> String {
    let letter = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        format!("'{letter}")
    } else {
        format!("'{letter}{}", i / 26)
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, false, &mut HashMap::new())
    }
}

impl fmt::Debug for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The most general type of a term; variables are implicitly quantified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalType(pub Ty);

impl PrincipalType {
    pub fn ground(&self) -> SimpleType {
        self.0.ground()
    }

    /// True when `target` is an instance of this type.
    pub fn admits(&self, target: &SimpleType) -> bool {
        let mut u = Unifier::default();
        u.unify(&self.0, &Ty::from_simple(target)).is_ok()
    }
}

impl fmt::Display for PrincipalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Default)]
struct Unifier {
    next: u32,
    subst: HashMap<u32, Ty>,
}

impl Unifier {
    fn fresh(&mut self) -> Ty {
        let v = self.next;
        self.next += 1;
        Ty::Var(v)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Var(v) => match self.subst.get(v) {
                Some(b) => self.resolve(b),
                None => t.clone(),
            },
            Ty::Base => Ty::Base,
            Ty::Arrow(d, c) => Ty::Arrow(Box::new(self.resolve(d)), Box::new(self.resolve(c))),
        }
    }

    fn occurs(&self, v: u32, t: &Ty) -> bool {
        match t {
            Ty::Var(w) => match self.subst.get(w) {
                Some(b) => self.occurs(v, b),
                None => *w == v,
            },
            Ty::Base => false,
            Ty::Arrow(d, c) => self.occurs(v, d) || self.occurs(v, c),
        }
    }

    fn walk(&self, t: &Ty) -> Ty {
        let mut t = t.clone();
        while let Ty::Var(v) = &t {
            match self.subst.get(v) {
                Some(b) => t = b.clone(),
                None => break,
            }
        }
        t
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> Result<(), String> {
        let a = self.walk(a);
        let b = self.walk(b);
        match (&a, &b) {
            (Ty::Var(x), Ty::Var(y)) if x == y => Ok(()),
            (Ty::Var(x), other) | (other, Ty::Var(x)) => {
                if self.occurs(*x, other) {
                    return Err(format!("occurs check: {} in {}", Ty::Var(*x), self.resolve(other)));
                }
                self.subst.insert(*x, other.clone());
                Ok(())
            }
            (Ty::Base, Ty::Base) => Ok(()),
            (Ty::Arrow(d1, c1), Ty::Arrow(d2, c2)) => {
                self.unify(d1, d2)?;
                self.unify(c1, c2)
            }
            _ => Err(format!("cannot unify {} with {}", self.resolve(&a), self.resolve(&b))),
        }
    }

    fn infer(&mut self, env: &mut Vec<(Name, Ty)>, t: &Term) -> Result<Ty, TypeError> {
        match t {
            Term::Var(x) => env
                .iter()
                .rev()
                .find(|(n, _)| n == x)
                .map(|(_, ty)| ty.clone())
                .ok_or_else(|| TypeError::Unbound(x.to_string())),
            Term::Abs(x, ann, b) => {
                let dom = match ann {
                    Some(a) => Ty::from_simple(a),
                    None => self.fresh(),
                };
                env.push((x.clone(), dom.clone()));
                let cod = self.infer(env, b);
                env.pop();
                Ok(Ty::Arrow(Box::new(dom), Box::new(cod?)))
            }
            Term::App(f, a) => {
                let tf = self.infer(env, f)?;
                let ta = self.infer(env, a)?;
                let r = self.fresh();
                self.unify(&tf, &Ty::Arrow(Box::new(ta), Box::new(r.clone())))
                    .map_err(TypeError::NotTypable)?;
                Ok(r)
            }
        }
    }
}

fn normalize_vars(t: &Ty, map: &mut HashMap<u32, u32>) -> Ty {
    match t {
        Ty::Var(v) => {
            let n = map.len() as u32;
            Ty::Var(*map.entry(*v).or_insert(n))
        }
        Ty::Base => Ty::Base,
        Ty::Arrow(d, c) => {
            let d = normalize_vars(d, map);
            Ty::Arrow(Box::new(d), Box::new(normalize_vars(c, map)))
        }
    }
}

/// Principal type of `t` under `ctx`. Binder annotations act as constraints.
pub fn infer_type(ctx: &TypingContext, t: &Term) -> Result<PrincipalType, TypeError> {
    let mut u = Unifier::default();
    let mut env: Vec<(Name, Ty)> = ctx.iter().map(|(k, v)| (k.clone(), Ty::from_simple(v))).collect();
    let ty = u.infer(&mut env, t)?;
    let resolved = u.resolve(&ty);
    Ok(PrincipalType(normalize_vars(&resolved, &mut HashMap::new())))
}

/// True iff `t` has type `target` under `ctx`.
pub fn check_type(ctx: &TypingContext, t: &Term, target: &SimpleType) -> bool {
    let mut u = Unifier::default();
    let mut env: Vec<(Name, Ty)> = ctx.iter().map(|(k, v)| (k.clone(), Ty::from_simple(v))).collect();
    match u.infer(&mut env, t) {
        Ok(ty) => u.unify(&ty, &Ty::from_simple(target)).is_ok(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stlc::term::{app, lam, lam_t, lams, var};

    fn two() -> Term {
        lams(&["f", "x"], app(var("f"), app(var("f"), var("x"))))
    }

    #[test]
    fn numeral_principal_type() {
        let p = infer_type(&TypingContext::new(), &two()).unwrap();
        assert_eq!(p.to_string(), "('a -> 'a) -> 'a -> 'a");
        assert_eq!(p.ground(), SimpleType::nat());
    }

    #[test]
    fn identity_is_polymorphic() {
        let p = infer_type(&TypingContext::new(), &lam("x", var("x"))).unwrap();
        assert_eq!(p.to_string(), "'a -> 'a");
        assert!(check_type(&TypingContext::new(), &lam("x", var("x")), &SimpleType::arrow(SimpleType::Base, SimpleType::Base)));
    }

    #[test]
    fn self_application_rejected() {
        let r = infer_type(&TypingContext::new(), &lam("x", app(var("x"), var("x"))));
        assert!(matches!(r, Err(TypeError::NotTypable(_))));
    }

    #[test]
    fn checks_at_substituted_types() {
        let ctx = TypingContext::new();
        assert!(check_type(&ctx, &two(), &SimpleType::nat()));
        let oo = SimpleType::arrow(SimpleType::Base, SimpleType::Base);
        assert!(check_type(&ctx, &two(), &SimpleType::nat().substitute_base(&oo)));
        assert!(!check_type(&ctx, &two(), &SimpleType::bool_type()));
    }

    #[test]
    fn identity_at_nat_is_an_instance() {
        // (o→o)→(o→o) is an instance of 'a → 'a.
        assert!(check_type(&TypingContext::new(), &lam("x", var("x")), &SimpleType::nat()));
    }

    #[test]
    fn annotations_constrain() {
        let t = lam_t("x", SimpleType::Base, var("x"));
        assert!(!check_type(&TypingContext::new(), &t, &SimpleType::nat()));
        assert_eq!(infer_type(&TypingContext::new(), &t).unwrap().0, Ty::Arrow(Box::new(Ty::Base), Box::new(Ty::Base)));
    }

    #[test]
    fn context_lookup() {
        let mut ctx = TypingContext::new();
        ctx.insert("f".into(), SimpleType::arrow(SimpleType::Base, SimpleType::Base));
        ctx.insert("x".into(), SimpleType::Base);
        assert!(check_type(&ctx, &app(var("f"), app(var("f"), var("x"))), &SimpleType::Base));
        assert!(matches!(infer_type(&ctx, &var("y")), Err(TypeError::Unbound(_))));
    }
}
