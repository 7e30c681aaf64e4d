use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::symbol::{Alphabet, Symbol};

/// Binary trees with labelled internal nodes and unlabelled leaves.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinTree {
    Leaf,
    Node(Symbol, Arc<BinTree>, Arc<BinTree>),
}

impl BinTree {
    pub fn node(label: impl Into<Symbol>, left: BinTree, right: BinTree) -> BinTree {
        BinTree::Node(label.into(), Arc::new(left), Arc::new(right))
    }

    /// Total number of nodes, leaves included.
    pub fn size(&self) -> usize {
        match self {
            BinTree::Leaf => 1,
            BinTree::Node(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn internal_nodes(&self) -> usize {
        match self {
            BinTree::Leaf => 0,
            BinTree::Node(_, l, r) => 1 + l.internal_nodes() + r.internal_nodes(),
        }
    }

    pub fn mirror(&self) -> BinTree {
        match self {
            BinTree::Leaf => BinTree::Leaf,
            BinTree::Node(a, l, r) => BinTree::Node(a.clone(), Arc::new(r.mirror()), Arc::new(l.mirror())),
        }
    }

    pub fn check_labels(&self, sigma: &Alphabet) -> Result<(), TreeError> {
        match self {
            BinTree::Leaf => Ok(()),
            BinTree::Node(a, l, r) => {
                if !sigma.contains(a) {
                    return Err(TreeError::LabelNotInAlphabet(a.clone()));
                }
                l.check_labels(sigma)?;
                r.check_labels(sigma)
            }
        }
    }

    /// Every tree over `sigma` with at most `max_nodes` nodes (leaves
    /// included), ordered by size.
    pub fn enumerate(sigma: &Alphabet, max_nodes: usize) -> Vec<BinTree> {
        // by_internal[k] holds all trees with exactly k internal nodes.
        let max_internal = max_nodes.saturating_sub(1) / 2;
        if max_nodes == 0 {
            return Vec::new();
        }
        let mut by_internal: Vec<Vec<Arc<BinTree>>> = vec![vec![Arc::new(BinTree::Leaf)]];
        for k in 1..=max_internal {
            let mut layer = Vec::new();
            for a in sigma.symbols() {
                for left_k in 0..k {
                    let right_k = k - 1 - left_k;
                    for l in &by_internal[left_k] {
                        for r in &by_internal[right_k] {
                            layer.push(Arc::new(BinTree::Node(a.clone(), l.clone(), r.clone())));
                        }
                    }
                }
            }
            by_internal.push(layer);
        }
        by_internal.into_iter().flatten().map(|t| (*t).clone()).collect()
    }
}

impl fmt::Display for BinTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinTree::Leaf => f.write_str("()"),
            BinTree::Node(a, l, r) => write!(f, "{a}({l}, {r})"),
        }
    }
}

impl fmt::Debug for BinTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Binary trees with exactly one leaf replaced by the hole `□`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum OneHoleTree {
    Hole,
    /// The hole is in the left subtree.
    NodeL(Symbol, Arc<OneHoleTree>, Arc<BinTree>),
    /// The hole is in the right subtree.
    NodeR(Symbol, Arc<BinTree>, Arc<OneHoleTree>),
}

impl OneHoleTree {
    /// `T′[U]`.
    pub fn plug(&self, u: &BinTree) -> BinTree {
        match self {
            OneHoleTree::Hole => u.clone(),
            OneHoleTree::NodeL(a, h, r) => BinTree::Node(a.clone(), Arc::new(h.plug(u)), r.clone()),
            OneHoleTree::NodeR(a, l, h) => BinTree::Node(a.clone(), l.clone(), Arc::new(h.plug(u))),
        }
    }

    /// `T′[U′]`, again a one-hole tree.
    pub fn compose(&self, u: &OneHoleTree) -> OneHoleTree {
        match self {
            OneHoleTree::Hole => u.clone(),
            OneHoleTree::NodeL(a, h, r) => OneHoleTree::NodeL(a.clone(), Arc::new(h.compose(u)), r.clone()),
            OneHoleTree::NodeR(a, l, h) => OneHoleTree::NodeR(a.clone(), l.clone(), Arc::new(h.compose(u))),
        }
    }

    pub fn check_labels(&self, sigma: &Alphabet) -> Result<(), TreeError> {
        match self {
            OneHoleTree::Hole => Ok(()),
            OneHoleTree::NodeL(a, h, t) | OneHoleTree::NodeR(a, t, h) => {
                if !sigma.contains(a) {
                    return Err(TreeError::LabelNotInAlphabet(a.clone()));
                }
                h.check_labels(sigma)?;
                t.check_labels(sigma)
            }
        }
    }
}

impl fmt::Display for OneHoleTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OneHoleTree::Hole => f.write_str("box"),
            OneHoleTree::NodeL(a, h, r) => write!(f, "{a}({h}, {r})"),
            OneHoleTree::NodeR(a, l, h) => write!(f, "{a}({l}, {h})"),
        }
    }
}

impl fmt::Debug for OneHoleTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("label `{0}` is not in the alphabet")]
    LabelNotInAlphabet(Symbol),
    #[error("malformed tree literal at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
}

fn is_label_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | '[' | ']' | '#')
}

/// Parse `T ::= '()' | label '(' T ',' T ')'`.
pub fn parse_tree(src: &str) -> Result<BinTree, TreeError> {
    let chars: Vec<char> = src.chars().collect();
    let mut pos = 0;
    let t = parse_tree_at(&chars, &mut pos)?;
    skip_ws(&chars, &mut pos);
    if pos != chars.len() {
        return Err(TreeError::Syntax { offset: pos, message: "trailing input".into() });
    }
    Ok(t)
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn expect(chars: &[char], pos: &mut usize, c: char) -> Result<(), TreeError> {
    skip_ws(chars, pos);
    if chars.get(*pos) == Some(&c) {
        *pos += 1;
        Ok(())
    } else {
        Err(TreeError::Syntax { offset: *pos, message: format!("expected `{c}`") })
    }
}

fn parse_tree_at(chars: &[char], pos: &mut usize) -> Result<BinTree, TreeError> {
    skip_ws(chars, pos);
    if chars.get(*pos) == Some(&'(') {
        *pos += 1;
        expect(chars, pos, ')')?;
        return Ok(BinTree::Leaf);
    }
    let start = *pos;
    while *pos < chars.len() && is_label_char(chars[*pos]) {
        *pos += 1;
    }
    if start == *pos {
        return Err(TreeError::Syntax { offset: *pos, message: "expected `()` or a label".into() });
    }
    let label: String = chars[start..*pos].iter().collect();
    expect(chars, pos, '(')?;
    let l = parse_tree_at(chars, pos)?;
    expect(chars, pos, ',')?;
    let r = parse_tree_at(chars, pos)?;
    expect(chars, pos, ')')?;
    Ok(BinTree::node(Symbol::new(&label), l, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf() -> BinTree {
        BinTree::Leaf
    }

    #[test]
    fn plugging_holes() {
        let u = BinTree::node("b", leaf(), leaf());
        assert_eq!(OneHoleTree::Hole.plug(&u), u);
        let t = OneHoleTree::NodeL("a".into(), Arc::new(OneHoleTree::Hole), Arc::new(leaf()));
        assert_eq!(t.plug(&u), BinTree::node("a", u.clone(), leaf()));
    }

    #[test]
    fn enumeration_counts() {
        // Catalan(k) * 2^k trees with k internal nodes over two labels.
        let ab = Alphabet::from_chars("ab");
        let catalan = [1usize, 1, 2, 5, 14, 42, 132, 429];
        let expected: usize = (0..=7).map(|k| catalan[k] << k).sum();
        assert_eq!(BinTree::enumerate(&ab, 15).len(), expected);
        assert_eq!(expected, 64_979);
        assert!(BinTree::enumerate(&ab, 15).iter().all(|t| t.size() <= 15));
        assert_eq!(BinTree::enumerate(&ab, 2).len(), 1);
    }

    #[test]
    fn literal_roundtrip() {
        let t = parse_tree("a(b((), ()), ())").unwrap();
        assert_eq!(t, BinTree::node("a", BinTree::node("b", leaf(), leaf()), leaf()));
        assert_eq!(parse_tree(&t.to_string()).unwrap(), t);
        assert!(parse_tree("a((),").is_err());
    }

    #[test]
    fn mirror_example() {
        let t = parse_tree("a(b((),()),())").unwrap();
        assert_eq!(t.mirror(), parse_tree("a((),b((),()))").unwrap());
    }
}
