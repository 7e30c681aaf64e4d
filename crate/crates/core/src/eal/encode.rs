//! Church encodings and the second-order connectives of the affine calculus.

use std::cell::Cell;
use std::sync::Arc;

use thiserror::Error;

use super::derivation::{aapp, aapps, abang, abang_lam, agen, ainst, alam, alams, avar, ATerm};
use super::normalize::eal_normalize;
use super::term::ETerm;
use super::types::{bang, fin_type, lolli, lollis, tensor_type, tvar, with_type, EType};
use crate::church::letter_binders;
use crate::stlc::normalize::{NormalizeError, DEFAULT_FUEL};
use crate::symbol::{Alphabet, AlphabetError, Word};
use crate::trees::tree::BinTree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EalDecodeError {
    #[error("term is not a string encoding")]
    NotAStringEncoding,
    #[error("term is not a tree encoding")]
    NotATreeEncoding,
    #[error("expected a !-term")]
    NotABang,
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expected {expected} components, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

/// Supplies binder and type-variable names that are unique within one
/// construction.
#[derive(Default)]
pub struct Fresh {
    next: Cell<usize>,
}

impl Fresh {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn name(&self, prefix: &str) -> String {
        let n = self.next.get() + 1;
        self.next.set(n);
        format!("{prefix}{n}")
    }

    pub fn names(&self, prefix: &str, k: usize) -> Vec<String> {
        (0..k).map(|_| self.name(prefix)).collect()
    }
}

fn endo(a: &EType) -> EType {
    lolli(a.clone(), a.clone())
}

/// `f_{i_1} (… (f_{i_n} x) …)`.
pub fn string_body(w: &Word, sigma: &Alphabet, fs: &[String], x: ATerm) -> Result<ATerm, AlphabetError> {
    let mut body = x;
    for s in w.iter().rev() {
        let i = sigma.index_of(s).ok_or_else(|| AlphabetError::SymbolNotInAlphabet(s.clone()))?;
        body = aapp(avar(&fs[i]), body);
    }
    Ok(body)
}

/// `Λα. λ!f_1. … λ!f_n. !(λx. f_{i_1} (… (f_{i_k} x) …))`.
pub fn string_aterm(w: &Word, sigma: &Alphabet) -> Result<ATerm, AlphabetError> {
    let a = tvar("a");
    let fs = letter_binders(sigma);
    let body = abang(alam("x", a.clone(), string_body(w, sigma, &fs, avar("x"))?));
    let t = fs.iter().rev().fold(body, |acc, f| abang_lam(f, endo(&a), acc));
    Ok(agen("a", t))
}

pub fn eal_encode_string(w: &Word, sigma: &Alphabet) -> Result<ETerm, AlphabetError> {
    Ok(string_aterm(w, sigma)?.erase())
}

fn strip_bang_lams(t: &ETerm, n: usize) -> Option<(Vec<Arc<str>>, &ETerm)> {
    let mut names = Vec::new();
    let mut cur = t;
    for _ in 0..n {
        match cur {
            ETerm::BangAbs(x, b) => {
                names.push(x.clone());
                cur = b;
            }
            _ => return None,
        }
    }
    Some((names, cur))
}

/// Decode a normal form.
pub fn eal_decode_string_normal(t: &ETerm, sigma: &Alphabet) -> Result<Word, EalDecodeError> {
    let err = EalDecodeError::NotAStringEncoding;
    let (fs, rest) = strip_bang_lams(t, sigma.len()).ok_or(err.clone())?;
    let ETerm::Bang(body) = rest else { return Err(err) };
    let mut out = Word::empty();
    match &**body {
        ETerm::Abs(x, spine) => {
            let mut cur: &ETerm = spine;
            loop {
                match cur {
                    ETerm::Var(y) if y == x => break,
                    ETerm::App(f, a) => {
                        let ETerm::Var(g) = &**f else { return Err(err) };
                        let i = fs.iter().position(|n| n == g).ok_or(err.clone())?;
                        if fs[i + 1..].contains(g) || **g == **x {
                            return Err(err);
                        }
                        out.push(sigma.get(i).clone());
                        cur = a;
                    }
                    _ => return Err(err),
                }
            }
        }
        // η-short single letter: !(f_i).
        ETerm::Var(g) => {
            let i = fs.iter().rposition(|n| n == g).ok_or(err.clone())?;
            out.push(sigma.get(i).clone());
        }
        _ => return Err(err),
    }
    Ok(out)
}

pub fn eal_decode_string(t: &ETerm, sigma: &Alphabet) -> Result<Word, EalDecodeError> {
    eal_decode_string_normal(&eal_normalize(t, DEFAULT_FUEL)?, sigma)
}

/// `T̃` over `f⃗` and `x`.
pub fn tree_body(t: &BinTree, sigma: &Alphabet, fs: &[String], x: &str) -> Result<ATerm, AlphabetError> {
    Ok(match t {
        BinTree::Leaf => avar(x),
        BinTree::Node(a, l, r) => {
            let i = sigma.index_of(a).ok_or_else(|| AlphabetError::SymbolNotInAlphabet(a.clone()))?;
            aapps(avar(&fs[i]), [tree_body(l, sigma, fs, x)?, tree_body(r, sigma, fs, x)?])
        }
    })
}

/// `Λα. λ!f_1. … λ!f_n. λ!x. !T̃`.
pub fn tree_aterm(t: &BinTree, sigma: &Alphabet) -> Result<ATerm, AlphabetError> {
    let a = tvar("a");
    let fs = letter_binders(sigma);
    let node = lolli(a.clone(), endo(&a));
    let body = abang_lam("x", a.clone(), abang(tree_body(t, sigma, &fs, "x")?));
    let t = fs.iter().rev().fold(body, |acc, f| abang_lam(f, node.clone(), acc));
    Ok(agen("a", t))
}

pub fn eal_encode_tree(t: &BinTree, sigma: &Alphabet) -> Result<ETerm, AlphabetError> {
    Ok(tree_aterm(t, sigma)?.erase())
}

pub fn eal_decode_tree_normal(t: &ETerm, sigma: &Alphabet) -> Result<BinTree, EalDecodeError> {
    let err = EalDecodeError::NotATreeEncoding;
    let (names, rest) = strip_bang_lams(t, sigma.len() + 1).ok_or(err.clone())?;
    let ETerm::Bang(body) = rest else { return Err(err) };
    let (fs, x) = names.split_at(sigma.len());
    let x = &x[0];
    fn go(t: &ETerm, fs: &[Arc<str>], x: &Arc<str>, sigma: &Alphabet) -> Option<BinTree> {
        match t {
            ETerm::Var(y) if y == x => Some(BinTree::Leaf),
            ETerm::App(fl, r) => {
                let ETerm::App(f, l) = &**fl else { return None };
                let ETerm::Var(g) = &**f else { return None };
                let i = fs.iter().rposition(|n| n == g)?;
                if g == x {
                    return None;
                }
                Some(BinTree::Node(sigma.get(i).clone(), Arc::new(go(l, fs, x, sigma)?), Arc::new(go(r, fs, x, sigma)?)))
            }
            _ => None,
        }
    }
    go(body, fs, x, sigma).ok_or(err)
}

pub fn eal_decode_tree(t: &ETerm, sigma: &Alphabet) -> Result<BinTree, EalDecodeError> {
    eal_decode_tree_normal(&eal_normalize(t, DEFAULT_FUEL)?, sigma)
}

/// `π_i = Λβ. λx_1. … λx_n. x_i`, 1-based.
pub fn fin_aterm(i: usize, n: usize, fresh: &Fresh) -> Result<ATerm, EncodeError> {
    if i == 0 || i > n {
        return Err(EncodeError::IndexOutOfRange { index: i, n });
    }
    let beta = fresh.name("b");
    let xs: Vec<(String, EType)> = fresh.names("y", n).into_iter().map(|x| (x, tvar(&beta))).collect();
    let body = avar(&xs[i - 1].0);
    Ok(agen(&beta, alams(&xs, body)))
}

/// `λx_1. … λx_n. x_i`.
pub fn fin_encode(i: usize, n: usize) -> Result<ETerm, EncodeError> {
    if i == 0 || i > n {
        return Err(EncodeError::IndexOutOfRange { index: i, n });
    }
    let xs: Vec<String> = if n == 1 { vec!["x".into()] } else { (1..=n).map(|k| format!("x{k}")).collect() };
    let mut t = ETerm::Var(Arc::from(xs[i - 1].as_str()));
    for x in xs.iter().rev() {
        t = ETerm::Abs(Arc::from(x.as_str()), Arc::new(t));
    }
    Ok(t)
}

/// `Λβ. λk. k t_1 … t_m` at `σ_1 ⊗ … ⊗ σ_m`.
pub fn tensor_intro(components: Vec<ATerm>, types: &[EType], fresh: &Fresh) -> Result<ATerm, EncodeError> {
    if components.len() != types.len() {
        return Err(EncodeError::ArityMismatch { expected: types.len(), got: components.len() });
    }
    let beta = fresh.name("b");
    let k = fresh.name("k");
    let kty = lollis(types.iter().cloned(), tvar(&beta));
    Ok(agen(&beta, alam(&k, kty, aapps(avar(&k), components))))
}

/// `p@C f` for `f : σ_1 ⊸ … ⊸ σ_m ⊸ C`.
pub fn tensor_elim(p: ATerm, result: &EType, f: ATerm) -> ATerm {
    aapp(ainst(p, result.clone()), f)
}

/// `Λγ. λk. (k@B) r g_1 … g_m` at `A_1 & … & A_m`, where `r : B` is the
/// shared resource and each `g_j : B ⊸ A_j` is free of linear variables.
pub fn with_intro(resource: ATerm, resource_ty: &EType, components: Vec<ATerm>, types: &[EType], fresh: &Fresh) -> Result<ATerm, EncodeError> {
    if components.len() != types.len() {
        return Err(EncodeError::ArityMismatch { expected: types.len(), got: components.len() });
    }
    let gamma = fresh.name("c");
    let beta = fresh.name("b");
    let k = fresh.name("k");
    let b = tvar(&beta);
    let kty = super::types::forall(
        &beta,
        lolli(b.clone(), lollis(types.iter().map(|a| lolli(b.clone(), a.clone())), tvar(&gamma))),
    );
    let body = aapps(aapp(ainst(avar(&k), resource_ty.clone()), resource), components);
    Ok(agen(&gamma, alam(&k, kty, body)))
}

/// `(w@A_j) (Λβ. λr. λg_1. … λg_m. g_j r)`, 1-based.
pub fn with_project(w: ATerm, types: &[EType], j: usize, fresh: &Fresh) -> Result<ATerm, EncodeError> {
    if j == 0 || j > types.len() {
        return Err(EncodeError::IndexOutOfRange { index: j, n: types.len() });
    }
    let beta = fresh.name("b");
    let b = tvar(&beta);
    let r = fresh.name("r");
    let gs: Vec<(String, EType)> = types.iter().map(|a| (fresh.name("g"), lolli(b.clone(), a.clone()))).collect();
    let sel = agen(&beta, alam(&r, b.clone(), alams(&gs, aapp(avar(&gs[j - 1].0), avar(&r)))));
    Ok(aapp(ainst(w, types[j - 1].clone()), sel))
}

/// Component order of [`with_tensor_distribute`]: pair `(i, j)` sits at
/// index `i * |B| + j`.
pub fn distribute_types(left: &[EType], right: &[EType], fresh: &Fresh) -> Vec<EType> {
    let mut out = Vec::new();
    for a in left {
        for b in right {
            out.push(tensor_type(&[a.clone(), b.clone()], &fresh.name("b")));
        }
    }
    out
}

/// `(A_1 & … & A_m) ⊗ (B_1 & … & B_n) ⊸ &_{i,j} (A_i ⊗ B_j)`.
pub fn with_tensor_distribute(left: &[EType], right: &[EType], fresh: &Fresh) -> Result<(ATerm, EType), EncodeError> {
    let wl = with_type(left, &fresh.name("b"), &fresh.name("c"));
    let wr = with_type(right, &fresh.name("b"), &fresh.name("c"));
    let pair_ty = tensor_type(&[wl.clone(), wr.clone()], &fresh.name("b"));
    let targets = distribute_types(left, right, fresh);
    let result = with_type(&targets, &fresh.name("b"), &fresh.name("c"));
    let p = fresh.name("p");
    let (l, r) = (fresh.name("l"), fresh.name("r"));
    let mut comps = Vec::new();
    for i in 0..left.len() {
        for j in 0..right.len() {
            let d = fresh.name("d");
            let (l2, r2) = (fresh.name("l"), fresh.name("r"));
            let pair = tensor_intro(
                vec![with_project(avar(&l2), left, i + 1, fresh)?, with_project(avar(&r2), right, j + 1, fresh)?],
                &[left[i].clone(), right[j].clone()],
                fresh,
            )?;
            let target = &targets[i * right.len() + j];
            let body = tensor_elim(avar(&d), target, alams(&[(l2, wl.clone()), (r2, wr.clone())], pair));
            comps.push(alam(&d, pair_ty.clone(), body));
        }
    }
    let resource = tensor_intro(vec![avar(&l), avar(&r)], &[wl.clone(), wr.clone()], fresh)?;
    let inner = with_intro(resource, &pair_ty, comps, &targets, fresh)?;
    let body = tensor_elim(avar(&p), &result, alams(&[(l, wl.clone()), (r, wr.clone())], inner));
    Ok((alam(&p, pair_ty.clone(), body), lolli(pair_ty, result)))
}

/// `λ!x. !(t x)` at `!A ⊸ !B` for a closed `t : A ⊸ B`.
pub fn bang_promote(t: ATerm, dom: &EType, fresh: &Fresh) -> ATerm {
    let x = fresh.name("s");
    abang_lam(&x, dom.clone(), abang(aapp(t, avar(&x))))
}

/// `Fin(n)` with a fresh bound name.
pub fn fin(n: usize, fresh: &Fresh) -> EType {
    fin_type(n, &fresh.name("b"))
}

pub fn banged(t: EType) -> EType {
    bang(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eal::derivation::{check_derivation, derive, TriContext};
    use crate::eal::term::{eapps, evar};
    use crate::eal::types::{str_type, tree_type};

    #[test]
    fn strings_roundtrip_and_type() {
        let ab = Alphabet::from_chars("ab");
        for w in ab.words_up_to(4) {
            let a = string_aterm(&w, &ab).unwrap();
            let d = derive(&TriContext::new(), &a).unwrap();
            check_derivation(&d).unwrap();
            assert!(d.ty.alpha_eq(&str_type(2)));
            assert!(d.term.check_linearity().is_empty());
            assert!(d.term.check_stratification().is_empty());
            assert_eq!(eal_decode_string(&d.term, &ab).unwrap(), w);
        }
        let e = eal_encode_string(&Word::empty(), &ab).unwrap();
        assert_eq!(e.to_string(), "\\!f_a. \\!f_b. !(\\x. x)");
    }

    #[test]
    fn trees_roundtrip_and_type() {
        let ab = Alphabet::from_chars("ab");
        for t in BinTree::enumerate(&ab, 7) {
            let a = tree_aterm(&t, &ab).unwrap();
            let d = derive(&TriContext::new(), &a).unwrap();
            check_derivation(&d).unwrap();
            assert!(d.ty.alpha_eq(&tree_type(2)));
            assert_eq!(eal_decode_tree(&d.term, &ab).unwrap(), t);
        }
    }

    #[test]
    fn fin_projections() {
        assert_eq!(fin_encode(2, 3).unwrap().to_string(), "\\x1. \\x2. \\x3. x2");
        assert_eq!(fin_encode(1, 1).unwrap().to_string(), "\\x. x");
        assert!(fin_encode(4, 3).is_err());
        let t = eapps(fin_encode(3, 3).unwrap(), [evar("p"), evar("q"), evar("r")]);
        assert!(eal_normalize(&t, 10).unwrap().alpha_eq(&evar("r")));
        let fresh = Fresh::new();
        let d = derive(&TriContext::new(), &fin_aterm(2, 3, &fresh).unwrap()).unwrap();
        check_derivation(&d).unwrap();
        assert!(d.ty.alpha_eq(&fin_type(3, "z")));
    }

    fn ctx_ab() -> TriContext {
        TriContext::temporaries([("u", tvar("a")), ("v", lolli(tvar("a"), tvar("a")))])
    }

    #[test]
    fn tensor_roundtrip() {
        let fresh = Fresh::new();
        let a = tvar("a");
        let types = [a.clone(), endo(&a)];
        let p = tensor_intro(vec![avar("u"), avar("v")], &types, &fresh).unwrap();
        let first = tensor_elim(p, &a, alams(&[("x".into(), a.clone()), ("y".into(), endo(&a))], avar("x")));
        let d = derive(&ctx_ab(), &first).unwrap();
        check_derivation(&d).unwrap();
        assert!(d.ty.alpha_eq(&a));
        assert!(eal_normalize(&d.term, 100).unwrap().alpha_eq(&evar("u")));
    }

    #[test]
    fn with_projection() {
        let fresh = Fresh::new();
        let a = tvar("a");
        let types = [a.clone(), a.clone()];
        // Resource u, components λr. r and λr. v r.
        let w = with_intro(
            avar("u"),
            &a,
            vec![alam("r", a.clone(), avar("r")), alam("r", a.clone(), aapp(avar("v"), avar("r")))],
            &types,
            &fresh,
        )
        .unwrap();
        let t = with_project(w, &types, 2, &fresh).unwrap();
        let d = derive(&ctx_ab(), &t).unwrap();
        check_derivation(&d).unwrap();
        let nf = eal_normalize(&d.term, 100).unwrap();
        assert!(nf.alpha_eq(&crate::eal::term::eapp(evar("v"), evar("u"))));
    }

    #[test]
    fn distribute_all_pairs() {
        let fresh = Fresh::new();
        let a = tvar("a");
        let left = [a.clone(), endo(&a)];
        let right = [a.clone(), a.clone(), endo(&a)];
        let (dist, ty) = with_tensor_distribute(&left, &right, &fresh).unwrap();
        let d = derive(&TriContext::new(), &dist).unwrap();
        check_derivation(&d).unwrap();
        assert!(d.ty.alpha_eq(&ty));
        assert!(d.term.check_linearity().is_empty());
        // Build concrete with-values and check every projected pair.
        let ctx = TriContext::temporaries([("u", a.clone()), ("v", endo(&a)), ("w", a.clone())]);
        let mk_left = |fresh: &Fresh| {
            with_intro(
                avar("u"),
                &a,
                vec![alam("r", a.clone(), avar("r")), alam("r", a.clone(), avar("v"))],
                &left,
                fresh,
            )
            .unwrap()
        };
        let mk_right = |fresh: &Fresh| {
            with_intro(
                avar("w"),
                &a,
                vec![alam("r", a.clone(), avar("r")), alam("r", a.clone(), avar("u")), alam("r", a.clone(), avar("v"))],
                &right,
                fresh,
            )
            .unwrap()
        };
        let wl = with_type(&left, "b", "c");
        let wr = with_type(&right, "b", "c");
        let left_vals = [evar("u"), evar("v")];
        let right_vals = [evar("w"), evar("u"), evar("v")];
        let targets = distribute_types(&left, &right, &fresh);
        for i in 0..2 {
            for j in 0..3 {
                let pair = tensor_intro(vec![mk_left(&fresh), mk_right(&fresh)], &[wl.clone(), wr.clone()], &fresh).unwrap();
                let dist = with_tensor_distribute(&left, &right, &fresh).unwrap().0;
                let proj = with_project(aapp(dist, pair), &targets, i * 3 + j + 1, &fresh).unwrap();
                let k = tensor_elim(
                    proj,
                    &tvar("z"),
                    alams(&[("x".into(), left[i].clone()), ("y".into(), right[j].clone())], aapp(aapp(avar("K"), avar("x")), avar("y"))),
                );
                let mut ctx = ctx.clone();
                ctx.temporary.insert(Arc::from("K"), lollis([left[i].clone(), right[j].clone()], tvar("z")));
                let d = derive(&ctx, &k).unwrap();
                check_derivation(&d).unwrap();
                let nf = eal_normalize(&d.term, 10_000).unwrap();
                let expect = eapps(evar("K"), [left_vals[i].clone(), right_vals[j].clone()]);
                assert!(nf.alpha_eq(&expect), "pair ({i},{j}) gave {nf}");
            }
        }
    }

    #[test]
    fn promotion() {
        let fresh = Fresh::new();
        let a = tvar("a");
        let id = alam("y", a.clone(), avar("y"));
        let p = bang_promote(id, &a, &fresh);
        let d = derive(&TriContext::new(), &p).unwrap();
        check_derivation(&d).unwrap();
        assert!(d.term.check_stratification().is_empty());
        let applied = crate::eal::term::eapp(d.term.clone(), crate::eal::term::ebang(evar("v")));
        assert!(eal_normalize(&applied, 10).unwrap().alpha_eq(&crate::eal::term::ebang(evar("v"))));
    }
}
