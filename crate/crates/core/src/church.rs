//! Church encodings in the simply typed λ-calculus.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::stlc::normalize::{beta_normalize, NormalizeError, DEFAULT_FUEL};
use crate::stlc::term::{app, apps, lams, var, Name, Term};
use crate::symbol::{Alphabet, AlphabetError, Symbol, Word};
use crate::trees::tree::{BinTree, OneHoleTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("not a string encoding: {0}")]
    NotAStringEncoding(String),
    #[error("not a boolean encoding: {0}")]
    NotABoolEncoding(String),
    #[error("not a tree encoding: {0}")]
    NotATreeEncoding(String),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

/// Binder name for the `i`-th letter: `f_<sym>` when the symbol is a valid
/// identifier fragment, `f<i>` (1-based) otherwise.
pub fn letter_binder(sigma: &Alphabet, i: usize) -> String {
    let s = sigma.get(i);
    if s.is_ident_safe() {
        format!("f_{s}")
    } else {
        format!("f{}", i + 1)
    }
}

pub fn letter_binders(sigma: &Alphabet) -> Vec<String> {
    (0..sigma.len()).map(|i| letter_binder(sigma, i)).collect()
}

/// `f_{i_1} (… (f_{i_n} x) …)` for the letters of `w`.
pub fn string_spine(w: &Word, sigma: &Alphabet, fs: &[String], x: Term) -> Result<Term, AlphabetError> {
    let mut body = x;
    for s in w.symbols().iter().rev() {
        let i = sigma.index_of(s).ok_or_else(|| AlphabetError::SymbolNotInAlphabet(s.clone()))?;
        body = app(var(&fs[i]), body);
    }
    Ok(body)
}

pub fn encode_string(w: &Word, sigma: &Alphabet) -> Result<Term, AlphabetError> {
    let fs = letter_binders(sigma);
    let body = string_spine(w, sigma, &fs, var("x"))?;
    let mut binders = fs;
    binders.push("x".into());
    Ok(lams(&binders, body))
}

/// Church numeral `n̄ = λf. λx. f^n x`.
pub fn encode_nat(n: usize) -> Term {
    let mut body = var("x");
    for _ in 0..n {
        body = app(var("f"), body);
    }
    lams(&["f", "x"], body)
}

/// Strip `k` binders from a normal term, η-expanding when it has fewer.
pub(crate) fn eta_open(t: &Term, k: usize) -> (Vec<Name>, Term) {
    let (mut names, body) = t.strip_lambdas(k);
    let mut body = body.clone();
    if names.len() < k {
        let mut avoid: BTreeSet<Name> = t.free_vars();
        avoid.extend(names.iter().cloned());
        collect_bound(&body, &mut avoid);
        let mut n = 0;
        while names.len() < k {
            let v = loop {
                n += 1;
                let cand: Name = Arc::from(format!("eta{n}").as_str());
                if !avoid.contains(&cand) {
                    break cand;
                }
            };
            body = app(body, Term::Var(v.clone()));
            names.push(v);
        }
    }
    (names, body)
}

fn collect_bound(t: &Term, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(_) => {}
        Term::Abs(x, _, b) => {
            out.insert(x.clone());
            collect_bound(b, out);
        }
        Term::App(f, a) => {
            collect_bound(f, out);
            collect_bound(a, out);
        }
    }
}

fn bound_index(names: &[Name], t: &Term) -> Option<usize> {
    match t {
        Term::Var(x) => names.iter().rposition(|n| n == x),
        _ => None,
    }
}

/// Read a word off a β-normal term.
pub fn decode_string_normal(t: &Term, sigma: &Alphabet) -> Result<Word, DecodeError> {
    let n = sigma.len();
    let (names, body) = eta_open(t, n + 1);
    let bad = || DecodeError::NotAStringEncoding(t.to_string());
    // The letter binders must be distinct from each other and from x for the
    // spine to be unambiguous; normal-form readback guarantees this.
    let mut out = Vec::new();
    let mut cur = &body;
    loop {
        match cur {
            Term::Var(_) => {
                if bound_index(&names, cur) == Some(n) {
                    return Ok(Word::from_symbols(out));
                }
                return Err(bad());
            }
            Term::App(f, a) => match bound_index(&names, f) {
                Some(i) if i < n => {
                    out.push(sigma.get(i).clone());
                    cur = a;
                }
                _ => return Err(bad()),
            },
            Term::Abs(..) => return Err(bad()),
        }
    }
}

pub fn decode_string(t: &Term, sigma: &Alphabet) -> Result<Word, DecodeError> {
    decode_string_with_fuel(t, sigma, DEFAULT_FUEL)
}

pub fn decode_string_with_fuel(t: &Term, sigma: &Alphabet, fuel: u64) -> Result<Word, DecodeError> {
    decode_string_normal(&beta_normalize(t, fuel)?, sigma)
}

pub fn encode_bool(b: bool) -> Term {
    lams(&["x", "y"], var(if b { "x" } else { "y" }))
}

pub fn decode_bool_normal(t: &Term) -> Result<bool, DecodeError> {
    let (names, body) = eta_open(t, 2);
    match bound_index(&names, &body) {
        Some(0) => Ok(true),
        Some(1) => Ok(false),
        _ => Err(DecodeError::NotABoolEncoding(t.to_string())),
    }
}

pub fn decode_bool(t: &Term) -> Result<bool, DecodeError> {
    decode_bool_normal(&beta_normalize(t, DEFAULT_FUEL)?)
}

/// `T̂` relative to the letter variables `fs` and leaf variable `x`.
pub fn tree_body(t: &BinTree, sigma: &Alphabet, fs: &[String], x: &Term) -> Result<Term, AlphabetError> {
    match t {
        BinTree::Leaf => Ok(x.clone()),
        BinTree::Node(a, l, r) => {
            let i = sigma.index_of(a).ok_or_else(|| AlphabetError::SymbolNotInAlphabet(a.clone()))?;
            Ok(apps(var(&fs[i]), [tree_body(l, sigma, fs, x)?, tree_body(r, sigma, fs, x)?]))
        }
    }
}

pub fn encode_tree(t: &BinTree, sigma: &Alphabet) -> Result<Term, AlphabetError> {
    let fs = letter_binders(sigma);
    let body = tree_body(t, sigma, &fs, &var("x"))?;
    let mut binders = fs;
    binders.push("x".into());
    Ok(lams(&binders, body))
}

/// The one-hole tree as a function of the tree filling its hole, relative
/// to letter variables `fs`.
pub fn hole_tree_body(t: &OneHoleTree, sigma: &Alphabet, fs: &[String], x: &Term, hole: Term) -> Result<Term, AlphabetError> {
    let idx = |a: &Symbol| sigma.index_of(a).ok_or_else(|| AlphabetError::SymbolNotInAlphabet(a.clone()));
    match t {
        OneHoleTree::Hole => Ok(hole),
        OneHoleTree::NodeL(a, h, r) => Ok(apps(
            var(&fs[idx(a)?]),
            [hole_tree_body(h, sigma, fs, x, hole)?, tree_body(r, sigma, fs, x)?],
        )),
        OneHoleTree::NodeR(a, l, h) => Ok(apps(
            var(&fs[idx(a)?]),
            [tree_body(l, sigma, fs, x)?, hole_tree_body(h, sigma, fs, x, hole)?],
        )),
    }
}

fn decode_tree_body(t: &Term, names: &[Name], sigma: &Alphabet, whole: &Term) -> Result<BinTree, DecodeError> {
    let n = sigma.len();
    let bad = || DecodeError::NotATreeEncoding(whole.to_string());
    if bound_index(names, t) == Some(n) {
        return Ok(BinTree::Leaf);
    }
    let (head, args) = t.spine();
    match (bound_index(names, head), args.as_slice()) {
        (Some(i), [l, r]) if i < n => Ok(BinTree::node(
            sigma.get(i).clone(),
            decode_tree_body(l, names, sigma, whole)?,
            decode_tree_body(r, names, sigma, whole)?,
        )),
        _ => Err(bad()),
    }
}

pub fn decode_tree_normal(t: &Term, sigma: &Alphabet) -> Result<BinTree, DecodeError> {
    let (names, body) = eta_open(t, sigma.len() + 1);
    decode_tree_body(&body, &names, sigma, t)
}

pub fn decode_tree(t: &Term, sigma: &Alphabet) -> Result<BinTree, DecodeError> {
    decode_tree_with_fuel(t, sigma, DEFAULT_FUEL)
}

pub fn decode_tree_with_fuel(t: &Term, sigma: &Alphabet, fuel: u64) -> Result<BinTree, DecodeError> {
    decode_tree_normal(&beta_normalize(t, fuel)?, sigma)
}

/// `λf⃗. λx. u f⃗ (v f⃗ x)`, the concatenation of two encoded strings.
pub fn concat_term(u: Term, v: Term, sigma: &Alphabet) -> Term {
    let fs = letter_binders(sigma);
    let fvars: Vec<Term> = fs.iter().map(|f| var(f)).collect();
    let inner = app(apps(v, fvars.clone()), var("x"));
    let body = app(apps(u, fvars), inner);
    let mut binders = fs;
    binders.push("x".into());
    lams(&binders, body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stlc::infer::{check_type, TypingContext};
    use crate::stlc::parse::parse_term;
    use crate::stlc::types::SimpleType;
    use crate::stlc::term::lam;

    #[test]
    fn string_examples() {
        let ab = Alphabet::from_chars("ab");
        let e = encode_string(&Word::empty(), &ab).unwrap();
        assert!(e.alpha_eq(&parse_term("\\f_a. \\f_b. \\x. x").unwrap()));
        let e = encode_string(&Word::from_chars("ab"), &ab).unwrap();
        assert!(e.alpha_eq(&parse_term("\\f_a. \\f_b. \\x. f_a (f_b x)").unwrap()));
        let one = Alphabet::from_chars("1");
        assert!(encode_string(&Word::from_chars("11"), &one).unwrap().alpha_eq(&encode_nat(2)));
        assert!(encode_string(&Word::from_chars("c"), &ab).is_err());
    }

    #[test]
    fn eta_short_numeral_decodes() {
        let one = Alphabet::from_chars("1");
        assert_eq!(decode_string(&lam("f", var("f")), &one).unwrap(), Word::from_chars("1"));
        let bad = parse_term("\\f. \\x. x f").unwrap();
        assert!(decode_string(&bad, &one).is_err());
    }

    #[test]
    fn roundtrip_and_types() {
        let abc = Alphabet::from_chars("abc");
        let ty = SimpleType::str_type(3);
        for w in abc.words_up_to(4) {
            let t = encode_string(&w, &abc).unwrap();
            assert_eq!(decode_string(&t, &abc).unwrap(), w);
            assert!(check_type(&TypingContext::new(), &t, &ty));
        }
    }

    #[test]
    fn booleans() {
        assert!(decode_bool(&encode_bool(true)).unwrap());
        assert!(!decode_bool(&encode_bool(false)).unwrap());
        assert!(decode_bool(&parse_term("\\x. \\y. x y").unwrap()).is_err());
    }

    #[test]
    fn tree_examples() {
        let a = Alphabet::from_chars("a");
        let t = BinTree::node("a", BinTree::Leaf, BinTree::Leaf);
        let e = encode_tree(&t, &a).unwrap();
        assert!(e.alpha_eq(&parse_term("\\f_a. \\x. f_a x x").unwrap()));
        assert_eq!(decode_tree(&e, &a).unwrap(), t);
        let leaf = encode_tree(&BinTree::Leaf, &a).unwrap();
        assert!(leaf.alpha_eq(&parse_term("\\f. \\x. x").unwrap()));
    }

    #[test]
    fn concatenation() {
        let ab = Alphabet::from_chars("ab");
        let u = encode_string(&Word::from_chars("ab"), &ab).unwrap();
        let v = encode_string(&Word::from_chars("bba"), &ab).unwrap();
        assert_eq!(decode_string(&concat_term(u, v, &ab), &ab).unwrap(), Word::from_chars("abbba"));
    }

    #[test]
    fn non_identifier_symbols_get_indexed_binders() {
        let digits = Alphabet::from_chars("12");
        assert_eq!(letter_binders(&digits), vec!["f1", "f2"]);
        let t = encode_string(&Word::from_chars("21"), &digits).unwrap();
        assert_eq!(t.to_string(), "\\f1. \\f2. \\x. f2 (f1 x)");
    }
}
