//! Compilers from copyless machines to elementary affine terms.
//!
//! Every compiler builds an annotated term and derives it, so each program
//! carries a checkable typing derivation.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::church::letter_binders;
use crate::codec::{Codec, Value};
use crate::eal::derivation::{
    aapp, aapps, abang, abang_lam, agen, ainst, alam, alams, annotate, avar, check_derivation, derive, ATerm, Derivation,
    TriContext, TypingError,
};
use crate::eal::encode::{
    bang_promote, distribute_types, eal_decode_string_normal, eal_decode_tree_normal, eal_encode_string, eal_encode_tree,
    fin_aterm, tensor_elim, tensor_intro, with_intro, with_project, with_tensor_distribute, EalDecodeError, EncodeError, Fresh,
};
use crate::eal::normalize::{eal_normalize, eal_normalize_traced, ReductionTrace};
use crate::eal::term::{eapp, eapps, ebang, evar, ETerm};
use crate::eal::types::{bang, fin_type, lolli, lollis, str_type, tensor_type, tree_type, tvar, with_type, EType};
use crate::stlc::normalize::NormalizeError;
use crate::strings::transducer::{CopylessReport, Item, OutputFunction, RegWord, RegisterTransducer};
use crate::symbol::{AlphabetError, Symbol, Word};
use crate::trees::expr::{HoleExpr, Side, TVar, TreeExpr};
use crate::trees::rtt::{check_brtt, BrttReport, ConflictRelation, Rtt, RttError};

/// The type variable of the output encoding.
const ALPHA: &str = "a";

/// Subset enumeration in the tree compiler is exponential in this.
pub const MAX_BRTT_REGISTERS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EalCompileError {
    #[error("transducer is not copyless:\n{0}")]
    NotCopyless(CopylessReport),
    #[error("not a valid BRTT:\n{0}")]
    NotValidBrtt(BrttReport),
    #[error("{got} registers exceed the limit of {max}")]
    TooManyRegisters { max: usize, got: usize },
    #[error("family does not match the index alphabet: {0}")]
    IndexMismatch(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("emitted term does not type: {0}")]
    Typing(#[from] TypingError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Rtt(#[from] RttError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EalRunError {
    #[error("input does not match the program's input codec")]
    CodecMismatch,
    #[error(transparent)]
    Encode(#[from] AlphabetError),
    #[error(transparent)]
    Decode(#[from] EalDecodeError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

/// A closed affine program with its derivation.
#[derive(Clone, Debug)]
pub struct EalProgram {
    pub derivation: Derivation,
    pub input: Codec,
    pub output: Codec,
    /// `!In ⊸ !Out` rather than `In ⊸ Out`.
    pub promoted: bool,
}

fn codec_type(c: &Codec) -> Option<EType> {
    match c {
        Codec::Str(a) => Some(str_type(a.len())),
        Codec::Tree(a) => Some(tree_type(a.len())),
        Codec::Bool => None,
    }
}

/// `In ⊸ Out`, or `!In ⊸ !Out`.
pub fn program_type(input: &Codec, output: &Codec, promoted: bool) -> Option<EType> {
    let (i, o) = (codec_type(input)?, codec_type(output)?);
    Some(if promoted { lolli(bang(i), bang(o)) } else { lolli(i, o) })
}

/// Why a program fails hygiene.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HygieneError {
    #[error("linearity: {0}")]
    Linearity(String),
    #[error("stratification: {0}")]
    Stratification(String),
    #[error("derivation: {0}")]
    Derivation(String),
    #[error("derivation proves {got}, expected {expected}")]
    WrongType { got: String, expected: String },
}

impl EalProgram {
    pub fn from_source(source: &ATerm, input: Codec, output: Codec, promoted: bool) -> Result<Self, EalCompileError> {
        let derivation = derive(&TriContext::new(), source)?;
        let p = EalProgram { derivation, input, output, promoted };
        let expected = p.expected_type().ok_or_else(|| EalCompileError::TypeMismatch("boolean codec".into()))?;
        if !p.ty().alpha_eq(&expected) {
            return Err(EalCompileError::TypeMismatch(format!("built {}, expected {expected}", p.ty())));
        }
        Ok(p)
    }

    pub fn term(&self) -> &ETerm {
        &self.derivation.term
    }

    pub fn ty(&self) -> &EType {
        &self.derivation.ty
    }

    pub fn expected_type(&self) -> Option<EType> {
        program_type(&self.input, &self.output, self.promoted)
    }

    pub fn source(&self) -> ATerm {
        annotate(&self.derivation)
    }

    /// Linearity, stratification, derivation checking and the claimed type.
    pub fn check_hygiene(&self) -> Result<(), HygieneError> {
        let t = self.term();
        if let Some(v) = t.check_linearity().first() {
            return Err(HygieneError::Linearity(v.to_string()));
        }
        if let Some(v) = t.check_stratification().first() {
            return Err(HygieneError::Stratification(v.to_string()));
        }
        check_derivation(&self.derivation).map_err(|e| HygieneError::Derivation(e.to_string()))?;
        if !self.derivation.ctx.linear.is_empty() || !self.derivation.ctx.banged.is_empty() || !self.derivation.ctx.temporary.is_empty() {
            return Err(HygieneError::Derivation("program is not closed".into()));
        }
        match self.expected_type() {
            Some(e) if e.alpha_eq(self.ty()) => Ok(()),
            e => Err(HygieneError::WrongType {
                got: self.ty().to_string(),
                expected: e.map(|e| e.to_string()).unwrap_or_else(|| "a string or tree program".into()),
            }),
        }
    }

    fn applied(&self, v: &Value) -> Result<ETerm, EalRunError> {
        let arg = match (&self.input, v) {
            (Codec::Str(a), Value::Str(w)) => eal_encode_string(w, a)?,
            (Codec::Tree(a), Value::Tree(t)) => eal_encode_tree(t, a)?,
            _ => return Err(EalRunError::CodecMismatch),
        };
        let arg = if self.promoted { ebang(arg) } else { arg };
        Ok(eapp(self.term().clone(), arg))
    }

    fn decode(&self, nf: &ETerm) -> Result<Value, EalRunError> {
        let nf = if self.promoted {
            match nf {
                ETerm::Bang(b) => &**b,
                _ => return Err(EalDecodeError::NotABang.into()),
            }
        } else {
            nf
        };
        Ok(match &self.output {
            Codec::Str(a) => Value::Str(eal_decode_string_normal(nf, a)?),
            Codec::Tree(a) => Value::Tree(eal_decode_tree_normal(nf, a)?),
            Codec::Bool => return Err(EalRunError::CodecMismatch),
        })
    }

    pub fn apply_normal(&self, v: &Value, fuel: u64) -> Result<ETerm, EalRunError> {
        Ok(eal_normalize(&self.applied(v)?, fuel)?)
    }

    pub fn apply(&self, v: &Value, fuel: u64) -> Result<Value, EalRunError> {
        self.decode(&self.apply_normal(v, fuel)?)
    }

    /// Like [`EalProgram::apply`], also reporting the reduction trace.
    pub fn apply_traced(&self, v: &Value, fuel: u64) -> Result<(Value, ReductionTrace), EalRunError> {
        let (nf, trace) = eal_normalize_traced(&self.applied(v)?, fuel)?;
        Ok((self.decode(&nf)?, trace))
    }
}

fn endo(a: &EType) -> EType {
    lolli(a.clone(), a.clone())
}

fn ident(fresh: &Fresh, a: &EType) -> ATerm {
    let y = fresh.name("y");
    alam(&y, a.clone(), avar(&y))
}

/// A term together with the context it is typed in.
#[derive(Clone, Debug)]
pub struct RelativeTerm {
    pub source: ATerm,
    pub ctx: TriContext,
}

impl RelativeTerm {
    pub fn derive(&self) -> Result<Derivation, TypingError> {
        derive(&self.ctx, &self.source)
    }

    pub fn term(&self) -> ETerm {
        self.source.erase()
    }
}

/// Binder of register `r` inside relative encodings.
fn reg_binder(name: &str) -> String {
    format!("r_{name}")
}

fn spine(w: &RegWord, rt: &RegisterTransducer, fs: &[String], ps: &[String], x: ATerm) -> ATerm {
    let mut body = x;
    for it in w.iter().rev() {
        let head = match it {
            Item::Letter(s) => &fs[rt.output.index_of(s).expect("output letter")],
            Item::Reg(j) => &ps[*j],
        };
        body = aapp(avar(head), body);
    }
    body
}

fn letter_ctx(fs: &[String], a: &EType) -> TriContext {
    TriContext::temporaries(fs.iter().map(|f| (f.as_str(), endo(a))))
}

struct SstParts {
    fs: Vec<String>,
    ps: Vec<String>,
    a_ty: EType,
    fhat: ATerm,
    ds: Vec<ATerm>,
}

impl SstParts {
    fn new(rt: &RegisterTransducer, fresh: &Fresh) -> Self {
        let a = tvar(ALPHA);
        let (nq, nr) = (rt.states.len(), rt.registers.len());
        let fs = letter_binders(&rt.output);
        let ps: Vec<String> = rt.registers.iter().map(|r| reg_binder(r)).collect();
        let c_ty = lollis(std::iter::repeat_n(endo(&a), nr), endo(&a));
        let fin_ty = fin_type(nq, &fresh.name("b"));
        let a_ty = lolli(fin_ty.clone(), c_ty.clone());
        let pbind: Vec<(String, EType)> = ps.iter().map(|p| (p.clone(), endo(&a))).collect();
        let rel = |w: &RegWord| {
            let x = fresh.name("x");
            alam(&x, a.clone(), spine(w, rt, &fs, &ps, avar(&x)))
        };
        // Ĝ = λy. (y@C) Ĝ(1) … Ĝ(|Q|)
        let y = fresh.name("y");
        let cands: Vec<ATerm> = rt.output_fn.iter().map(|w| alams(&pbind, rel(w))).collect();
        let fhat = alam(&y, fin_ty.clone(), aapps(ainst(avar(&y), c_ty.clone()), cands));
        // d_i = λg. λy. (y@(A⊸C)) T_{i,1} … T_{i,|Q|} g
        let ds = (0..rt.input.len())
            .map(|i| {
                let ts: Vec<ATerm> = (0..nq)
                    .map(|q| {
                        let tr = rt.transition(q, i);
                        let g = fresh.name("g");
                        let pi = fin_aterm(tr.target + 1, nq, fresh).expect("state in range");
                        let args = std::iter::once(pi).chain(tr.updates.iter().map(&rel));
                        alam(&g, a_ty.clone(), alams(&pbind, aapps(avar(&g), args)))
                    })
                    .collect();
                let (g, y) = (fresh.name("g"), fresh.name("y"));
                let dispatch = aapps(ainst(avar(&y), lolli(a_ty.clone(), c_ty.clone())), ts);
                alam(&g, a_ty.clone(), alam(&y, fin_ty.clone(), aapp(dispatch, avar(&g))))
            })
            .collect();
        SstParts { fs, ps, a_ty, fhat, ds }
    }
}

/// `ω̃ = λx. χ(c₁)(… χ(c_n) x …)`, typed with the letters as temporaries and
/// the registers as linear variables.
pub fn tilde_encode(w: &RegWord, rt: &RegisterTransducer) -> RelativeTerm {
    let a = tvar(ALPHA);
    let fs = letter_binders(&rt.output);
    let ps: Vec<String> = rt.registers.iter().map(|r| reg_binder(r)).collect();
    let mut ctx = letter_ctx(&fs, &a);
    for p in &ps {
        ctx.linear.insert(Arc::from(p.as_str()), endo(&a));
    }
    RelativeTerm { source: alam("x", a.clone(), spine(w, rt, &fs, &ps, avar("x"))), ctx }
}

/// `ω̂ = λp_1. … λp_{|R|}. ω̃`.
pub fn hat_encode(w: &RegWord, rt: &RegisterTransducer) -> RelativeTerm {
    let a = tvar(ALPHA);
    let fs = letter_binders(&rt.output);
    let ps: Vec<(String, EType)> = rt.registers.iter().map(|r| (reg_binder(r), endo(&a))).collect();
    let names: Vec<String> = ps.iter().map(|p| p.0.clone()).collect();
    let body = alam("x", a.clone(), spine(w, rt, &fs, &names, avar("x")));
    RelativeTerm { source: alams(&ps, body), ctx: letter_ctx(&fs, &a) }
}

/// `Ĝ = λy. y Ĝ(1) … Ĝ(|Q|)` at `Fin(|Q|) ⊸ (α⊸α)^{|R|} ⊸ α ⊸ α`.
pub fn hat_output(g: &OutputFunction, rt: &RegisterTransducer) -> RelativeTerm {
    let mut machine = rt.clone();
    machine.output_fn = g.clone();
    let parts = SstParts::new(&machine, &Fresh::new());
    RelativeTerm { source: parts.fhat, ctx: letter_ctx(&parts.fs, &tvar(ALPHA)) }
}

/// `λz. Λα. λ!f⃗. (λ!h. !(h F̂ π_{q_I} id … id)) (z@A !d⃗)` at `Str_Γ ⊸ Str_Σ`.
pub fn compile_sst(rt: &RegisterTransducer) -> Result<EalProgram, EalCompileError> {
    let report = rt.check_copyless();
    if !report.passes() {
        return Err(EalCompileError::NotCopyless(report));
    }
    let fresh = Fresh::new();
    let a = tvar(ALPHA);
    let parts = SstParts::new(rt, &fresh);
    let (h, z) = (fresh.name("h"), fresh.name("z"));
    let init = fin_aterm(rt.initial + 1, rt.states.len(), &fresh)?;
    let ids: Vec<ATerm> = (0..rt.registers.len()).map(|_| ident(&fresh, &a)).collect();
    let u = aapps(aapp(aapp(avar(&h), parts.fhat.clone()), init), ids);
    let a_ty = parts.a_ty.clone();
    let iterate = aapps(ainst(avar(&z), a_ty.clone()), parts.ds.iter().cloned().map(abang));
    let body = aapp(abang_lam(&h, endo(&a_ty), abang(u)), iterate);
    let body = parts.fs.iter().rev().fold(body, |acc, f| abang_lam(f, endo(&a), acc));
    let source = alam(&z, str_type(rt.input.len()), agen(ALPHA, body));
    EalProgram::from_source(&source, Codec::Str(rt.input.clone()), Codec::Str(rt.output.clone()), false)
}

/// The output function represented by `h F̂` after reading `w`, recovered
/// from normal forms with the letters, registers and `x` left free.
pub fn sst_backward_output(rt: &RegisterTransducer, w: &Word, fuel: u64) -> Result<OutputFunction, EalRunError> {
    let parts = SstParts::new(rt, &Fresh::new());
    let wbar = eal_encode_string(w, &rt.input)?;
    let h = eal_normalize(&eapps(wbar, parts.ds.iter().map(|d| ebang(d.erase()))), fuel)?;
    let ETerm::Bang(h) = h else { return Err(EalDecodeError::NotABang.into()) };
    let g = eapp((*h).clone(), parts.fhat.erase());
    let mut out = Vec::new();
    for q in 0..rt.states.len() {
        let pi = fin_aterm(q + 1, rt.states.len(), &Fresh::new()).expect("state in range").erase();
        let args = std::iter::once(pi).chain(parts.ps.iter().map(|p| evar(p))).chain([evar("x")]);
        let nf = eal_normalize(&eapps(g.clone(), args), fuel)?;
        out.push(decode_regword(&nf, rt, &parts)?);
    }
    Ok(out)
}

fn decode_regword(t: &ETerm, rt: &RegisterTransducer, parts: &SstParts) -> Result<RegWord, EalRunError> {
    let mut out = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            ETerm::Var(x) if &**x == "x" => return Ok(out),
            ETerm::App(f, arg) => {
                let ETerm::Var(head) = &**f else { break };
                if let Some(i) = parts.fs.iter().position(|n| **n == **head) {
                    out.push(Item::Letter(rt.output.get(i).clone()));
                } else if let Some(j) = parts.ps.iter().position(|n| **n == **head) {
                    out.push(Item::Reg(j));
                } else {
                    break;
                }
                cur = arg;
            }
            _ => break,
        }
    }
    Err(EalDecodeError::NotAStringEncoding.into())
}

/// `!Str_Γ ⊸ !Str_Σ` from `Str_Γ ⊸ Str_Σ`.
pub fn promote_program(p: &EalProgram) -> Result<EalProgram, EalCompileError> {
    if p.promoted {
        return Err(EalCompileError::TypeMismatch("program is already promoted".into()));
    }
    let dom = codec_type(&p.input).ok_or_else(|| EalCompileError::TypeMismatch("boolean codec".into()))?;
    let source = bang_promote(p.source(), &dom, &Fresh::new());
    EalProgram::from_source(&source, p.input.clone(), p.output.clone(), true)
}

/// `λ!s. (λ!x. λ!y⃗. !s′) (f !s) (g₁ !s) … (g_k !s)` with
/// `s′ = Λα. λ!f⃗. (x@α) (y₁@α !f⃗) … (y_k@α !f⃗)`.
pub fn compile_cbs(f: &EalProgram, family: &[(Symbol, EalProgram)]) -> Result<EalProgram, EalCompileError> {
    let mismatch = |m: String| Err(EalCompileError::IndexMismatch(m));
    let (Codec::Str(gamma), Codec::Str(index)) = (&f.input, &f.output) else {
        return Err(EalCompileError::TypeMismatch("CbS needs string programs".into()));
    };
    if !f.promoted || family.iter().any(|(_, g)| !g.promoted) {
        return Err(EalCompileError::TypeMismatch("CbS needs promoted programs".into()));
    }
    if family.len() != index.len() {
        return mismatch(format!("{} functions for {} indices", family.len(), index.len()));
    }
    let mut ordered = Vec::new();
    for s in index.symbols() {
        match family.iter().find(|(t, _)| t == s) {
            Some((_, g)) => ordered.push(g),
            None => return mismatch(format!("no function for `{s}`")),
        }
    }
    let sigma = match ordered.first().map(|g| &g.output) {
        Some(Codec::Str(s)) => s.clone(),
        Some(_) => return Err(EalCompileError::TypeMismatch("family must produce strings".into())),
        // An empty index alphabet cannot occur; alphabets are non-empty.
        None => return mismatch("empty family".into()),
    };
    for g in &ordered {
        if g.input != f.input || g.output != Codec::Str(sigma.clone()) {
            return Err(EalCompileError::TypeMismatch("family members disagree on alphabets".into()));
        }
    }
    let fresh = Fresh::new();
    let a = tvar(ALPHA);
    let fs = letter_binders(&sigma);
    let (s, x) = (fresh.name("s"), fresh.name("x"));
    let ys = fresh.names("y", ordered.len());
    let blocks = ys.iter().map(|y| aapps(ainst(avar(y), a.clone()), fs.iter().map(|f| abang(avar(f)))));
    let inner = aapps(ainst(avar(&x), a.clone()), blocks);
    let s2 = agen(ALPHA, fs.iter().rev().fold(inner, |acc, f| abang_lam(f, endo(&a), acc)));
    let mut body = abang(s2);
    for y in ys.iter().rev() {
        body = abang_lam(y, str_type(sigma.len()), body);
    }
    let head = abang_lam(&x, str_type(index.len()), body);
    let args = std::iter::once(f).chain(ordered.iter().copied()).map(|p| aapp(p.source(), abang(avar(&s))));
    let source = abang_lam(&s, str_type(gamma.len()), aapps(head, args));
    EalProgram::from_source(&source, f.input.clone(), Codec::Str(sigma), true)
}

/// Shared state of the tree compiler.
struct TreeCompiler<'a> {
    rtt: &'a Rtt,
    rel: &'a ConflictRelation,
    fresh: Fresh,
    alpha: EType,
    fs: Vec<String>,
    leaf: String,
    /// Non-conflicting subsets, as carrier bitmasks.
    subsets: Vec<u32>,
    index: BTreeMap<u32, usize>,
    /// `T_P` for each subset.
    comps: Vec<EType>,
    fin: EType,
    w: EType,
    a: EType,
}

impl<'a> TreeCompiler<'a> {
    fn new(rtt: &'a Rtt, rel: &'a ConflictRelation) -> Result<Self, EalCompileError> {
        let fresh = Fresh::new();
        let alpha = tvar(ALPHA);
        let subsets = rel.nonconflicting_subsets()?;
        let index = subsets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut tc = TreeCompiler {
            rtt,
            rel,
            fs: letter_binders(&rtt.output),
            leaf: fresh.name("x"),
            subsets,
            index,
            comps: vec![],
            fin: fin_type(rtt.states.len(), &fresh.name("b")),
            w: alpha.clone(),
            a: alpha.clone(),
            alpha,
            fresh,
        };
        tc.comps = tc.subsets.iter().map(|&m| tc.tensor_of(m)).collect();
        tc.w = with_type(&tc.comps, &tc.fresh.name("b"), &tc.fresh.name("c"));
        tc.a = tensor_type(&[tc.fin.clone(), tc.w.clone()], &tc.fresh.name("b"));
        Ok(tc)
    }

    fn is_tree_reg(&self, k: usize) -> bool {
        self.rtt.tree_index(&self.rel.carrier()[k]).is_some()
    }

    fn reg_type(&self, k: usize) -> EType {
        if self.is_tree_reg(k) {
            self.alpha.clone()
        } else {
            endo(&self.alpha)
        }
    }

    fn members(&self, mask: u32) -> Vec<usize> {
        (0..self.rel.carrier().len()).filter(|i| mask & (1 << i) != 0).collect()
    }

    fn tensor_of(&self, mask: u32) -> EType {
        let parts: Vec<EType> = self.members(mask).into_iter().map(|k| self.reg_type(k)).collect();
        tensor_type(&parts, &self.fresh.name("b"))
    }

    fn mask_of<'v>(&self, vars: impl IntoIterator<Item = &'v TVar>) -> u32 {
        vars.into_iter().fold(0, |m, v| m | 1 << self.rel.index_of(&v.name).expect("declared register"))
    }

    fn subset_index(&self, mask: u32) -> Result<usize, EalCompileError> {
        self.index.get(&mask).copied().ok_or_else(|| {
            let names = self.rel.mask_names(mask).iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ");
            EalCompileError::TypeMismatch(format!("register set {{{names}}} is conflicting"))
        })
    }

    fn letter(&self, a: &Symbol) -> ATerm {
        avar(&self.fs[self.rtt.output.index_of(a).expect("output label")])
    }

    fn tree(&self, e: &TreeExpr, env: &BTreeMap<TVar, String>) -> ATerm {
        match e {
            TreeExpr::Leaf => avar(&self.leaf),
            TreeExpr::Var(v) => avar(&env[v]),
            TreeExpr::Node(a, l, r) => aapps(self.letter(a), [self.tree(l, env), self.tree(r, env)]),
            TreeExpr::Plug(h, t) => aapp(self.hole(h, env), self.tree(t, env)),
        }
    }

    fn hole(&self, e: &HoleExpr, env: &BTreeMap<TVar, String>) -> ATerm {
        let wrap = |body: &dyn Fn(ATerm) -> ATerm| {
            let y = self.fresh.name("y");
            alam(&y, self.alpha.clone(), body(avar(&y)))
        };
        match e {
            HoleExpr::Hole => ident(&self.fresh, &self.alpha),
            HoleExpr::Var(v) => avar(&env[v]),
            HoleExpr::NodeL(a, h, t) => wrap(&|y| aapps(self.letter(a), [aapp(self.hole(h, env), y), self.tree(t, env)])),
            HoleExpr::NodeR(a, t, h) => wrap(&|y| aapps(self.letter(a), [self.tree(t, env), aapp(self.hole(h, env), y)])),
            HoleExpr::Compose(h1, h2) => wrap(&|y| aapp(self.hole(h1, env), aapp(self.hole(h2, env), y))),
        }
    }

    /// `λv⃗. body` binding the components of the tensor over `mask`, read
    /// from `side`.
    fn bind_tensor(&self, mask: u32, side: Option<Side>, env: &mut BTreeMap<TVar, String>) -> Vec<(String, EType)> {
        self.members(mask)
            .into_iter()
            .map(|k| {
                let name = self.fresh.name("v");
                let reg = &self.rel.carrier()[k];
                let var = match side {
                    Some(s) => TVar::sided(reg, s),
                    None => TVar::plain(reg),
                };
                env.insert(var, name.clone());
                (name, self.reg_type(k))
            })
            .collect()
    }

    /// The tensor of register values over `mask`, each given by `value`.
    fn tensor_over(&self, mask: u32, value: impl Fn(usize) -> ATerm) -> Result<ATerm, EalCompileError> {
        let ks = self.members(mask);
        let types: Vec<EType> = ks.iter().map(|&k| self.reg_type(k)).collect();
        Ok(tensor_intro(ks.into_iter().map(value).collect(), &types, &self.fresh)?)
    }

    /// `L`: the initial state with every tree register `x` and every hole
    /// register `λy. y`.
    fn leaf_config(&self) -> Result<ATerm, EalCompileError> {
        let resource_ty = endo(&self.alpha);
        let mut gs = Vec::new();
        for &m in &self.subsets {
            let r = self.fresh.name("r");
            let t = self.tensor_over(m, |k| if self.is_tree_reg(k) { avar(&self.leaf) } else { ident(&self.fresh, &self.alpha) })?;
            gs.push(alam(&r, resource_ty.clone(), t));
        }
        let w = with_intro(ident(&self.fresh, &self.alpha), &resource_ty, gs, &self.comps, &self.fresh)?;
        let pi = fin_aterm(self.rtt.initial + 1, self.rtt.states.len(), &self.fresh)?;
        Ok(tensor_intro(vec![pi, w], &[self.fin.clone(), self.w.clone()], &self.fresh)?)
    }

    /// `D ⊸ A` for the transition `(q◁, q▷, a)`.
    fn branch(&self, left: usize, right: usize, label: usize, d_ty: &EType, pairs: &[EType]) -> Result<ATerm, EalCompileError> {
        let tr = self.rtt.transition(left, right, label);
        let m = self.subsets.len();
        let mut gs = Vec::new();
        for &p in &self.subsets {
            let sources: Vec<TVar> =
                self.members(p).into_iter().flat_map(|k| self.rtt.update_at(tr, k).occurrences()).collect();
            let side_mask = |s: Side| self.mask_of(sources.iter().filter(|v| v.side == Some(s)));
            let (il, ir) = (self.subset_index(side_mask(Side::Left))?, self.subset_index(side_mask(Side::Right))?);
            let target = &self.comps[self.index[&p]];
            let mut env = BTreeMap::new();
            let lv = self.bind_tensor(self.subsets[il], Some(Side::Left), &mut env);
            let rv = self.bind_tensor(self.subsets[ir], Some(Side::Right), &mut env);
            let values = self.tensor_over(p, |k| match self.rtt.update_at(tr, k) {
                crate::trees::expr::AnyExpr::Tree(e) => self.tree(e, &env),
                crate::trees::expr::AnyExpr::Hole(e) => self.hole(e, &env),
            })?;
            let (d, l, r) = (self.fresh.name("d"), self.fresh.name("l"), self.fresh.name("r"));
            let inner = tensor_elim(avar(&r), target, alams(&rv, values));
            let inner = tensor_elim(avar(&l), target, alams(&lv, inner));
            let pair = with_project(avar(&d), pairs, il * m + ir + 1, &self.fresh)?;
            let body = tensor_elim(pair, target, alams(&[(l, self.comps[il].clone()), (r, self.comps[ir].clone())], inner));
            gs.push(alam(&d, d_ty.clone(), body));
        }
        let d = self.fresh.name("d");
        let w = with_intro(avar(&d), d_ty, gs, &self.comps, &self.fresh)?;
        let pi = fin_aterm(tr.target + 1, self.rtt.states.len(), &self.fresh)?;
        let conf = tensor_intro(vec![pi, w], &[self.fin.clone(), self.w.clone()], &self.fresh)?;
        Ok(alam(&d, d_ty.clone(), conf))
    }

    /// `N_i : A ⊸ A ⊸ A`.
    fn node(&self, label: usize) -> Result<ATerm, EalCompileError> {
        let nq = self.rtt.states.len();
        let (dist, dist_ty) = with_tensor_distribute(&self.comps, &self.comps, &self.fresh)?;
        let EType::Lolli(_, d_ty) = &dist_ty else { unreachable!("distribution is an implication") };
        let d_ty = (**d_ty).clone();
        let pairs = distribute_types(&self.comps, &self.comps, &self.fresh);
        let d_to_a = lolli(d_ty.clone(), self.a.clone());
        let mut brs = Vec::new();
        for ql in 0..nq {
            let s = self.fresh.name("s");
            let cands = (0..nq).map(|qr| self.branch(ql, qr, label, &d_ty, &pairs)).collect::<Result<Vec<_>, _>>()?;
            brs.push(alam(&s, self.fin.clone(), aapps(ainst(avar(&s), d_to_a.clone()), cands)));
        }
        let (cl, cr) = (self.fresh.name("c"), self.fresh.name("c"));
        let (sl, bl, sr, br) = (self.fresh.name("s"), self.fresh.name("b"), self.fresh.name("s"), self.fresh.name("b"));
        let both = tensor_intro(vec![avar(&bl), avar(&br)], &[self.w.clone(), self.w.clone()], &self.fresh)?;
        let dispatch = aapps(
            ainst(avar(&sl), lolli(self.fin.clone(), d_to_a.clone())),
            brs.into_iter().chain([avar(&sr), aapp(dist, both)]),
        );
        let sw = |s: &String, b: &String| vec![(s.clone(), self.fin.clone()), (b.clone(), self.w.clone())];
        let inner = tensor_elim(avar(&cr), &self.a, alams(&sw(&sr, &br), dispatch));
        let outer = tensor_elim(avar(&cl), &self.a, alams(&sw(&sl, &bl), inner));
        Ok(alams(&[(cl, self.a.clone()), (cr, self.a.clone())], outer))
    }

    /// `h@α (λs. λb. (s@(W⊸α)) O_1 … O_{|Q|} b)`.
    fn output(&self, h: &str) -> Result<ATerm, EalCompileError> {
        let mut outs = Vec::new();
        for e in &self.rtt.output_fn {
            let p = self.mask_of(e.occurrences().iter());
            let i = self.subset_index(p)?;
            let mut env = BTreeMap::new();
            let vs = self.bind_tensor(p, None, &mut env);
            let w = self.fresh.name("w");
            let proj = with_project(avar(&w), &self.comps, i + 1, &self.fresh)?;
            outs.push(alam(&w, self.w.clone(), tensor_elim(proj, &self.alpha, alams(&vs, self.tree(e, &env)))));
        }
        let (s, b) = (self.fresh.name("s"), self.fresh.name("b"));
        let pick = aapps(ainst(avar(&s), lolli(self.w.clone(), self.alpha.clone())), outs.into_iter().chain([avar(&b)]));
        Ok(tensor_elim(avar(h), &self.alpha, alams(&[(s, self.fin.clone()), (b, self.w.clone())], pick)))
    }

    fn program(&self) -> Result<ATerm, EalCompileError> {
        let alpha = &self.alpha;
        let (z, h) = (self.fresh.name("z"), self.fresh.name("h"));
        let mut args = Vec::new();
        for i in 0..self.rtt.input.len() {
            args.push(abang(self.node(i)?));
        }
        args.push(abang(self.leaf_config()?));
        let fold = aapps(ainst(avar(&z), self.a.clone()), args);
        let body = aapp(abang_lam(&h, self.a.clone(), abang(self.output(&h)?)), fold);
        let body = abang_lam(&self.leaf, alpha.clone(), body);
        let node_ty = lolli(alpha.clone(), endo(alpha));
        let body = self.fs.iter().rev().fold(body, |acc, f| abang_lam(f, node_ty.clone(), acc));
        Ok(alam(&z, tree_type(self.rtt.input.len()), agen(ALPHA, body)))
    }
}

/// `λz. Λα. λ!f⃗. λ!x. (λ!h. !u) (z@A !N⃗ !L)` at `BT_Γ ⊸ BT_Σ`, with
/// configurations `A = Fin(|Q|) ⊗ &_P (⊗_{k∈P} ty(k))` over the
/// non-conflicting register sets `P`.
pub fn compile_brtt(rtt: &Rtt, rel: &ConflictRelation) -> Result<EalProgram, EalCompileError> {
    let n = rel.carrier().len();
    if n > MAX_BRTT_REGISTERS {
        return Err(EalCompileError::TooManyRegisters { max: MAX_BRTT_REGISTERS, got: n });
    }
    let report = check_brtt(rtt, rel)?;
    if !report.passes() {
        return Err(EalCompileError::NotValidBrtt(report));
    }
    let tc = TreeCompiler::new(rtt, rel)?;
    let source = tc.program()?;
    EalProgram::from_source(&source, Codec::Tree(rtt.input.clone()), Codec::Tree(rtt.output.clone()), false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stlc::normalize::DEFAULT_FUEL;
    use crate::strings::transducer::{xy_transducer, RtBuilder, RtTransition};
    use crate::symbol::Alphabet;
    use crate::trees::examples;
    use crate::trees::tree::BinTree;
    use std::collections::HashMap;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab")
    }

    #[test]
    fn xy_worked_example() {
        let rt = xy_transducer(&ab());
        let p = compile_sst(&rt).unwrap();
        p.check_hygiene().unwrap();
        let out = p.apply(&Value::Str(Word::from_chars("ab")), DEFAULT_FUEL).unwrap();
        assert_eq!(out, Value::Str(Word::from_chars("abba")));
        for w in ab().words_up_to(4) {
            let (out, trace) = p.apply_traced(&Value::Str(w.clone()), DEFAULT_FUEL).unwrap();
            assert_eq!(out, Value::Str(rt.run(&w)));
            assert_eq!(trace.depth_violations, 0);
        }
    }

    #[test]
    fn backward_coherence() {
        let rt = xy_transducer(&ab());
        for w in ab().words_up_to(3) {
            assert_eq!(sst_backward_output(&rt, &w, DEFAULT_FUEL).unwrap(), rt.delta_o_word(&w));
        }
    }

    fn copying() -> RegisterTransducer {
        let sigma = Alphabet::from_chars("a");
        let mut delta = HashMap::new();
        delta.insert((0, 0), RtTransition { target: 0, updates: vec![vec![Item::Reg(0), Item::Reg(0)]] });
        RtBuilder {
            name: "dup".into(),
            input: sigma.clone(),
            output: sigma,
            registers: vec!["X".into()],
            states: vec!["q".into()],
            initial: 0,
            output_fn: vec![vec![Item::Reg(0)]],
            delta,
            complete: false,
        }
        .build()
        .unwrap()
    }

    #[test]
    fn relative_encodings() {
        let rt = xy_transducer(&ab());
        let w = vec![Item::Reg(0), Item::Letter("a".into()), Item::Letter("a".into()), Item::Reg(1)];
        let hat = hat_encode(&w, &rt);
        let d = hat.derive().unwrap();
        check_derivation(&d).unwrap();
        assert!(hat.term().check_linearity().is_empty());
        assert!(tilde_encode(&w, &rt).derive().is_ok());
        // A repeated register is exactly a linearity failure at its binder.
        let dup = vec![Item::Reg(0), Item::Reg(0)];
        let bad = hat_encode(&dup, &rt);
        assert!(matches!(bad.derive(), Err(TypingError::LinearReuse(x)) if x == "r_X"));
        let v = bad.term().check_linearity();
        assert_eq!(v.len(), 1);
        assert_eq!(&*v[0].binder, "r_X");
        let g = hat_output(&rt.output_fn, &rt);
        check_derivation(&g.derive().unwrap()).unwrap();
    }

    #[test]
    fn copying_transducer_is_refused() {
        assert!(matches!(compile_sst(&copying()), Err(EalCompileError::NotCopyless(_))));
    }

    #[test]
    fn promotion_agrees() {
        let rt = xy_transducer(&ab());
        let p = compile_sst(&rt).unwrap();
        let q = promote_program(&p).unwrap();
        q.check_hygiene().unwrap();
        for w in ab().words_up_to(3) {
            let v = Value::Str(w);
            assert_eq!(q.apply(&v, DEFAULT_FUEL).unwrap(), p.apply(&v, DEFAULT_FUEL).unwrap());
        }
    }

    #[test]
    fn cbs_power() {
        // f(w) = a^{|w|}, g_a = id: w ↦ w^{|w|}.
        let a = Alphabet::from_chars("a");
        let mut delta = HashMap::new();
        for i in 0..2 {
            delta.insert((0, i), RtTransition { target: 0, updates: vec![vec![Item::Reg(0), Item::Letter("a".into())]] });
        }
        let count = RtBuilder {
            name: "count".into(),
            input: ab(),
            output: a.clone(),
            registers: vec!["X".into()],
            states: vec!["q".into()],
            initial: 0,
            output_fn: vec![vec![Item::Reg(0)]],
            delta,
            complete: false,
        }
        .build()
        .unwrap();
        let f = promote_program(&compile_sst(&count).unwrap()).unwrap();
        let id = promote_program(&compile_sst(&crate::strings::transducer::reverse_transducer(&ab())).unwrap()).unwrap();
        let p = compile_cbs(&f, &[(Symbol::new("a"), id)]).unwrap();
        p.check_hygiene().unwrap();
        let out = p.apply(&Value::Str(Word::from_chars("ab")), DEFAULT_FUEL).unwrap();
        assert_eq!(out, Value::Str(Word::from_chars("baba")));
        assert!(matches!(compile_cbs(&f, &[]), Err(EalCompileError::IndexMismatch(_))));
    }

    #[test]
    fn brtt_examples() {
        let sigma = ab();
        let cases = [
            (examples::identity(&sigma), None),
            (examples::mirror(&sigma), None),
            (examples::conditional_swap(&sigma).0, Some(examples::conditional_swap(&sigma).1)),
            (examples::spine(&sigma), None),
        ];
        for (rtt, rel) in cases {
            let rel = rel.unwrap_or_else(|| ConflictRelation::identity(rtt.carrier()));
            let p = compile_brtt(&rtt, &rel).unwrap();
            p.check_hygiene().unwrap();
            for t in BinTree::enumerate(&sigma, 7) {
                let out = p.apply(&Value::Tree(t.clone()), DEFAULT_FUEL).unwrap();
                assert_eq!(out, Value::Tree(rtt.run(&t)), "{} on {t}", rtt.name);
            }
        }
    }
}
