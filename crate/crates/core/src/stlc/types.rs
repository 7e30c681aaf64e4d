use std::fmt;
use std::sync::Arc;

/// Simple types over the single base type `o`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum SimpleType {
    Base,
    Arrow(Arc<SimpleType>, Arc<SimpleType>),
}

impl SimpleType {
    pub fn arrow(dom: SimpleType, cod: SimpleType) -> SimpleType {
        SimpleType::Arrow(Arc::new(dom), Arc::new(cod))
    }

    /// `A^n → B`.
    pub fn arrows(doms: impl IntoIterator<Item = SimpleType>, cod: SimpleType) -> SimpleType {
        let doms: Vec<SimpleType> = doms.into_iter().collect();
        doms.into_iter().rev().fold(cod, |acc, d| SimpleType::arrow(d, acc))
    }

    pub fn repeat_arrow(dom: &SimpleType, n: usize, cod: SimpleType) -> SimpleType {
        SimpleType::arrows(std::iter::repeat_n(dom.clone(), n), cod)
    }

    /// `A[B]`: replace every occurrence of `o` in `self` by `b`.
    pub fn substitute_base(&self, b: &SimpleType) -> SimpleType {
        match self {
            SimpleType::Base => b.clone(),
            SimpleType::Arrow(d, c) => SimpleType::arrow(d.substitute_base(b), c.substitute_base(b)),
        }
    }

    /// `Nat = (o → o) → o → o`.
    pub fn nat() -> SimpleType {
        SimpleType::str_type(1)
    }

    /// `Bool = o → o → o`.
    pub fn bool_type() -> SimpleType {
        SimpleType::arrows([SimpleType::Base, SimpleType::Base], SimpleType::Base)
    }

    /// `Str_Σ = (o → o)^|Σ| → o → o`.
    pub fn str_type(letters: usize) -> SimpleType {
        let endo = SimpleType::arrow(SimpleType::Base, SimpleType::Base);
        SimpleType::repeat_arrow(&endo, letters, endo.clone())
    }

    /// `BT_Σ = (o → o → o)^|Σ| → o → o`.
    pub fn tree_type(letters: usize) -> SimpleType {
        let node = SimpleType::bool_type();
        SimpleType::repeat_arrow(&node, letters, SimpleType::arrow(SimpleType::Base, SimpleType::Base))
    }

    /// `∂BT_Σ = BT_Σ → BT_Σ`.
    pub fn hole_tree_type(letters: usize) -> SimpleType {
        let bt = SimpleType::tree_type(letters);
        SimpleType::arrow(bt.clone(), bt)
    }

    pub fn size(&self) -> usize {
        match self {
            SimpleType::Base => 1,
            SimpleType::Arrow(d, c) => 1 + d.size() + c.size(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, left_of_arrow: bool) -> fmt::Result {
        match self {
            SimpleType::Base => f.write_str("o"),
            SimpleType::Arrow(d, c) => {
                if left_of_arrow {
                    f.write_str("(")?;
                }
                d.fmt_prec(f, true)?;
                f.write_str(" -> ")?;
                c.fmt_prec(f, false)?;
                if left_of_arrow {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, false)
    }
}

impl fmt::Debug for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
