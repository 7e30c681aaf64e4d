use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::stlc::term::Name;

/// Types of the elementary affine calculus.
///
/// ```text
/// A ::= α | S          (linear)
/// S ::= σ ⊸ τ | ∀α. S  (strictly linear)
/// σ ::= A | !σ
/// ```
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum EType {
    Var(Name),
    Lolli(Arc<EType>, Arc<EType>),
    Forall(Name, Arc<EType>),
    Bang(Arc<EType>),
}

pub fn tvar(a: &str) -> EType {
    EType::Var(Arc::from(a))
}

pub fn lolli(a: EType, b: EType) -> EType {
    EType::Lolli(Arc::new(a), Arc::new(b))
}

/// `a_1 ⊸ … ⊸ a_n ⊸ b`.
pub fn lollis(doms: impl IntoIterator<Item = EType>, cod: EType) -> EType {
    let doms: Vec<EType> = doms.into_iter().collect();
    doms.into_iter().rev().fold(cod, |acc, d| lolli(d, acc))
}

pub fn forall(a: &str, body: EType) -> EType {
    EType::Forall(Arc::from(a), Arc::new(body))
}

pub fn bang(a: EType) -> EType {
    EType::Bang(Arc::new(a))
}

impl EType {
    pub fn is_strictly_linear(&self) -> bool {
        matches!(self, EType::Lolli(..) | EType::Forall(..))
    }

    pub fn is_linear(&self) -> bool {
        !matches!(self, EType::Bang(_))
    }

    /// Every `∀` body is strictly linear, recursively.
    pub fn is_well_formed(&self) -> bool {
        match self {
            EType::Var(_) => true,
            EType::Lolli(a, b) => a.is_well_formed() && b.is_well_formed(),
            EType::Forall(_, s) => s.is_strictly_linear() && s.is_well_formed(),
            EType::Bang(a) => a.is_well_formed(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            EType::Var(a) => {
                if !bound.contains(a) {
                    out.insert(a.clone());
                }
            }
            EType::Lolli(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            EType::Forall(a, s) => {
                bound.push(a.clone());
                s.collect_free(bound, out);
                bound.pop();
            }
            EType::Bang(a) => a.collect_free(bound, out),
        }
    }

    pub fn occurs_free(&self, a: &str) -> bool {
        match self {
            EType::Var(b) => &**b == a,
            EType::Lolli(x, y) => x.occurs_free(a) || y.occurs_free(a),
            EType::Forall(b, s) => &**b != a && s.occurs_free(a),
            EType::Bang(x) => x.occurs_free(a),
        }
    }

    /// Capture-avoiding `self{a := t}`.
    pub fn substitute(&self, a: &str, t: &EType) -> EType {
        match self {
            EType::Var(b) => {
                if &**b == a {
                    t.clone()
                } else {
                    self.clone()
                }
            }
            EType::Lolli(x, y) => lolli(x.substitute(a, t), y.substitute(a, t)),
            EType::Bang(x) => bang(x.substitute(a, t)),
            EType::Forall(b, s) => {
                if &**b == a || !s.occurs_free(a) {
                    return self.clone();
                }
                if t.occurs_free(b) {
                    let mut avoid = t.free_vars();
                    avoid.extend(s.free_vars());
                    let mut fresh = format!("{b}'");
                    while avoid.contains(fresh.as_str()) {
                        fresh.push('\'');
                    }
                    let renamed = s.substitute(b, &tvar(&fresh));
                    forall(&fresh, renamed.substitute(a, t))
                } else {
                    EType::Forall(b.clone(), Arc::new(s.substitute(a, t)))
                }
            }
        }
    }

    /// Equality up to renaming of `∀`-bound variables.
    pub fn alpha_eq(&self, other: &EType) -> bool {
        fn go(a: &EType, b: &EType, ea: &mut Vec<Name>, eb: &mut Vec<Name>) -> bool {
            match (a, b) {
                (EType::Var(x), EType::Var(y)) => {
                    let ix = ea.iter().rposition(|n| n == x);
                    let iy = eb.iter().rposition(|n| n == y);
                    match (ix, iy) {
                        (Some(i), Some(j)) => ea.len() - i == eb.len() - j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (EType::Lolli(a1, b1), EType::Lolli(a2, b2)) => go(a1, a2, ea, eb) && go(b1, b2, ea, eb),
                (EType::Bang(a1), EType::Bang(a2)) => go(a1, a2, ea, eb),
                (EType::Forall(x, s1), EType::Forall(y, s2)) => {
                    ea.push(x.clone());
                    eb.push(y.clone());
                    let r = go(s1, s2, ea, eb);
                    ea.pop();
                    eb.pop();
                    r
                }
                _ => false,
            }
        }
        std::ptr::eq(self, other) || go(self, other, &mut Vec::new(), &mut Vec::new())
    }

    pub fn size(&self) -> usize {
        match self {
            EType::Var(_) => 1,
            EType::Lolli(a, b) => 1 + a.size() + b.size(),
            EType::Forall(_, s) => 1 + s.size(),
            EType::Bang(a) => 1 + a.size(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            EType::Var(a) => write!(f, "'{a}"),
            EType::Bang(a) => {
                f.write_str("!")?;
                a.fmt_prec(f, 2)
            }
            EType::Lolli(a, b) => {
                if prec > 0 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 1)?;
                f.write_str(" -o ")?;
                b.fmt_prec(f, 0)?;
                if prec > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            EType::Forall(a, s) => {
                if prec > 0 {
                    f.write_str("(")?;
                }
                write!(f, "forall '{a}. ")?;
                s.fmt_prec(f, 0)?;
                if prec > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for EType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for EType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `∀α. α^n ⊸ α`.
pub fn fin_type(n: usize, alpha: &str) -> EType {
    let a = tvar(alpha);
    forall(alpha, lollis(std::iter::repeat_n(a.clone(), n), a))
}

/// `(!(α ⊸ α))^n ⊸ !(α ⊸ α)` over the given `α`.
pub fn str_type_at(n: usize, alpha: &EType) -> EType {
    let endo = bang(lolli(alpha.clone(), alpha.clone()));
    lollis(std::iter::repeat_n(endo.clone(), n), endo)
}

/// `∀α. Str_Σ[α]`.
pub fn str_type(n: usize) -> EType {
    forall("a", str_type_at(n, &tvar("a")))
}

/// `(!(α ⊸ α ⊸ α))^n ⊸ !α ⊸ !α`.
pub fn tree_type_at(n: usize, alpha: &EType) -> EType {
    let node = bang(lolli(alpha.clone(), lolli(alpha.clone(), alpha.clone())));
    lollis(std::iter::repeat_n(node, n), lolli(bang(alpha.clone()), bang(alpha.clone())))
}

pub fn tree_type(n: usize) -> EType {
    forall("a", tree_type_at(n, &tvar("a")))
}

/// `∀β. (σ_1 ⊸ … ⊸ σ_m ⊸ β) ⊸ β`.
pub fn tensor_type(components: &[EType], beta: &str) -> EType {
    let b = tvar(beta);
    forall(beta, lolli(lollis(components.iter().cloned(), b.clone()), b))
}

/// `∀γ. (∀β. β ⊸ (β ⊸ A_1) ⊸ … ⊸ (β ⊸ A_m) ⊸ γ) ⊸ γ`.
pub fn with_type(components: &[EType], beta: &str, gamma: &str) -> EType {
    let b = tvar(beta);
    let g = tvar(gamma);
    let inner = forall(
        beta,
        lolli(b.clone(), lollis(components.iter().map(|a| lolli(b.clone(), a.clone())), g.clone())),
    );
    forall(gamma, lolli(inner, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        let a = tvar("a");
        assert!(a.is_linear() && !a.is_strictly_linear());
        assert!(!bang(a.clone()).is_linear());
        assert!(fin_type(3, "b").is_strictly_linear());
        assert!(!forall("a", a.clone()).is_well_formed());
        assert!(str_type(2).is_well_formed());
    }

    #[test]
    fn substitution_and_alpha() {
        assert!(fin_type(2, "a").alpha_eq(&fin_type(2, "b")));
        let t = forall("b", lolli(tvar("a"), tvar("b")));
        let s = t.substitute("a", &tvar("b"));
        // The bound b must be renamed away from the incoming free b.
        assert!(s.alpha_eq(&forall("c", lolli(tvar("b"), tvar("c")))));
        assert_eq!(str_type(1).to_string(), "forall 'a. !('a -o 'a) -o !('a -o 'a)");
    }
}
