//! Compilers from machines to simply typed λ-terms.

use thiserror::Error;

use crate::church::{self, letter_binders, DecodeError};
use crate::codec::{Codec, Value};
use crate::stlc::infer::{check_type, TypingContext};
use crate::stlc::normalize::{beta_normalize, NormalizeError};
use crate::stlc::term::{app, apps, lam, lam_t, lams, lams_t, var, Term};
use crate::stlc::types::SimpleType;
use crate::strings::dfa::Dfa;
use crate::strings::hdt0l::Hdt0l;
use crate::strings::morphism::Morphism;
use crate::strings::transducer::{Item, RegWord, RegisterTransducer};
use crate::symbol::{Alphabet, AlphabetError};
use crate::trees::expr::{HoleExpr, Side, TVar, TreeExpr};
use crate::trees::rtt::Rtt;
use crate::trees::tree::{BinTree, OneHoleTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("input does not match the program's input codec")]
    CodecMismatch,
    #[error(transparent)]
    Encode(#[from] AlphabetError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

/// A term with its claimed type `input[instance] → output`.
#[derive(Clone, Debug)]
pub struct TypedProgram {
    pub term: Term,
    pub input: Codec,
    pub output: Codec,
    /// The type substituted for `o` in the input type.
    pub instance: SimpleType,
}

pub fn encode_value(codec: &Codec, v: &Value) -> Result<Term, RunError> {
    match (codec, v) {
        (Codec::Str(a), Value::Str(w)) => Ok(church::encode_string(w, a)?),
        (Codec::Tree(a), Value::Tree(t)) => Ok(church::encode_tree(t, a)?),
        (Codec::Bool, Value::Bool(b)) => Ok(church::encode_bool(*b)),
        _ => Err(RunError::CodecMismatch),
    }
}

pub fn decode_normal(codec: &Codec, t: &Term) -> Result<Value, DecodeError> {
    match codec {
        Codec::Str(a) => church::decode_string_normal(t, a).map(Value::Str),
        Codec::Tree(a) => church::decode_tree_normal(t, a).map(Value::Tree),
        Codec::Bool => church::decode_bool_normal(t).map(Value::Bool),
    }
}

impl TypedProgram {
    pub fn claimed_type(&self) -> SimpleType {
        SimpleType::arrow(self.input.simple_type().substitute_base(&self.instance), self.output.simple_type())
    }

    pub fn check(&self) -> bool {
        check_type(&TypingContext::new(), &self.term, &self.claimed_type())
    }

    /// Normal form of the program applied to the encoding of `v`.
    pub fn apply_normal(&self, v: &Value, fuel: u64) -> Result<Term, RunError> {
        let arg = encode_value(&self.input, v)?;
        Ok(beta_normalize(&app(self.term.clone(), arg), fuel)?)
    }

    pub fn apply(&self, v: &Value, fuel: u64) -> Result<Value, RunError> {
        Ok(decode_normal(&self.output, &self.apply_normal(v, fuel)?)?)
    }
}

fn vars(names: &[String]) -> Vec<Term> {
    names.iter().map(|n| var(n)).collect()
}

fn endo() -> SimpleType {
    SimpleType::arrow(SimpleType::Base, SimpleType::Base)
}

/// `λz. λf⃗. z (φ(g₁)‾ f⃗) … (φ(g_k)‾ f⃗)` at `Str_Γ → Str_Σ`.
pub fn compile_morphism(phi: &Morphism) -> Result<TypedProgram, CompileError> {
    let fs = letter_binders(&phi.target);
    let mut args = Vec::new();
    for w in phi.images() {
        args.push(apps(church::encode_string(w, &phi.target)?, vars(&fs)));
    }
    let term = lam("z", lams(&fs, apps(var("z"), args)));
    Ok(TypedProgram {
        term,
        input: Codec::Str(phi.source.clone()),
        output: Codec::Str(phi.target.clone()),
        instance: SimpleType::Base,
    })
}

/// `λz. u′ (z u₁ … u_k d̄)` at `Str_Γ[Str_Δ] → Str_Σ`.
pub fn compile_hdt0l(sys: &Hdt0l) -> Result<TypedProgram, CompileError> {
    let fin = compile_morphism(&sys.fin)?.term;
    let mut args = Vec::new();
    for h in &sys.rules {
        args.push(compile_morphism(h)?.term);
    }
    args.push(church::encode_string(&sys.init, &sys.work)?);
    let term = lam("z", app(fin, apps(var("z"), args)));
    Ok(TypedProgram {
        term,
        input: Codec::Str(sys.input.clone()),
        output: Codec::Str(sys.output.clone()),
        instance: SimpleType::str_type(sys.work.len()),
    })
}

/// `λx. χ(c₁) (… (χ(c_n) x) …)`, letters to `fs`, registers to `ps`.
fn relative_word(w: &RegWord, sigma: &Alphabet, fs: &[String], ps: &[String]) -> Term {
    let mut body = var("x");
    for it in w.iter().rev() {
        let head = match it {
            Item::Letter(s) => var(&fs[sigma.index_of(s).expect("validated output letter")]),
            Item::Reg(r) => var(&ps[*r]),
        };
        body = app(head, body);
    }
    lam("x", body)
}

/// Compile a register transducer by folding backward output propagation
/// over the input. With `C = (o→o)^|R| → o → o` and `Fin = C^|Q| → C`,
/// the fold runs at `A = Fin → C`:
///
/// `λz. λf⃗. z d₁ … d_|Γ| F̂ π_{q_I} id … id`
///
/// where `d_i = λg. λy. y (λp⃗. g π_{q′} s̃(r₁) … s̃(r_|R|)) …` rebuilds
/// `δ^O(c_i, G)` from `G`, and `F̂ = λy. y F̂(1) … F̂(|Q|)`.
pub fn compile_register_transducer(rt: &RegisterTransducer) -> Result<TypedProgram, CompileError> {
    let nq = rt.states.len();
    let nr = rt.registers.len();
    let fs = letter_binders(&rt.output);
    let ps: Vec<String> = (1..=nr).map(|i| format!("p{i}")).collect();
    let cs: Vec<String> = (1..=nq).map(|i| format!("c{i}")).collect();
    let proj = |q: usize| lams(&cs, var(&cs[q]));
    let output_hat = |w: &RegWord| lams(&ps, relative_word(w, &rt.output, &fs, &ps));
    let mut ds = Vec::new();
    for a in 0..rt.input.len() {
        let branches = (0..nq).map(|q| {
            let t = rt.transition(q, a);
            let updated = t.updates.iter().map(|u| relative_word(u, &rt.output, &fs, &ps));
            lams(&ps, apps(app(var("g"), proj(t.target)), updated))
        });
        ds.push(lams(&["g", "y"], apps(var("y"), branches)));
    }
    let f_hat = lam("y", apps(var("y"), rt.output_fn.iter().map(output_hat)));
    let ids = (0..nr).map(|_| lam("x", var("x")));
    let body = apps(apps(apps(var("z"), ds), [f_hat, proj(rt.initial)]), ids);
    let term = lam("z", lams(&fs, body));
    let c = SimpleType::repeat_arrow(&endo(), nr, endo());
    let fin = SimpleType::repeat_arrow(&c, nq, c.clone());
    Ok(TypedProgram {
        term,
        input: Codec::Str(rt.input.clone()),
        output: Codec::Str(rt.output.clone()),
        instance: SimpleType::arrow(fin, c),
    })
}

/// Type-annotated binders `f⃗ : o → o → o`, `x : o` for tree encodings.
fn tree_binders(fs: &[String]) -> Vec<(String, SimpleType)> {
    let mut b: Vec<(String, SimpleType)> = fs.iter().map(|f| (f.clone(), SimpleType::bool_type())).collect();
    b.push(("x".into(), SimpleType::Base));
    b
}

struct TreeCompiler<'a> {
    sigma: &'a Alphabet,
    fs: Vec<String>,
    bt: SimpleType,
}

impl<'a> TreeCompiler<'a> {
    fn new(sigma: &'a Alphabet) -> Self {
        TreeCompiler { sigma, fs: letter_binders(sigma), bt: SimpleType::tree_type(sigma.len()) }
    }

    fn hole_type(&self) -> SimpleType {
        SimpleType::arrow(self.bt.clone(), self.bt.clone())
    }

    /// `λf⃗. λx. body`, annotated.
    fn wrap(&self, body: Term) -> Term {
        lams_t(&tree_binders(&self.fs), body)
    }

    fn open(&self, t: Term) -> Term {
        app(apps(t, vars(&self.fs)), var("x"))
    }

    fn letter(&self, a: &crate::symbol::Symbol) -> Result<Term, CompileError> {
        let i = self.sigma.index_of(a).ok_or_else(|| AlphabetError::SymbolNotInAlphabet(a.clone()))?;
        Ok(var(&self.fs[i]))
    }

    fn tree(&self, t: &BinTree) -> Result<Term, CompileError> {
        Ok(lams_t(&tree_binders(&self.fs), church::tree_body(t, self.sigma, &self.fs, &var("x"))?))
    }

    /// `𝒞(T′)`.
    fn hole_tree(&self, t: &OneHoleTree) -> Result<Term, CompileError> {
        let z = |body: Term| lam_t("z", self.bt.clone(), body);
        Ok(match t {
            OneHoleTree::Hole => z(var("z")),
            OneHoleTree::NodeL(a, h, u) => z(self.wrap(apps(
                self.letter(a)?,
                [self.open(app(self.hole_tree(h)?, var("z"))), self.open(self.tree(u)?)],
            ))),
            OneHoleTree::NodeR(a, u, h) => z(self.wrap(apps(
                self.letter(a)?,
                [self.open(self.tree(u)?), self.open(app(self.hole_tree(h)?, var("z")))],
            ))),
        })
    }

    /// A `BT` term for `E`, with variables resolved through `name`.
    fn tree_expr(&self, e: &TreeExpr, name: &dyn Fn(&TVar, bool) -> Option<String>) -> Result<Term, CompileError> {
        Ok(match e {
            TreeExpr::Leaf => self.wrap(var("x")),
            TreeExpr::Var(v) => var(&name(v, false).ok_or_else(|| CompileError::UnboundVariable(v.to_string()))?),
            TreeExpr::Node(a, l, r) => self.wrap(apps(
                self.letter(a)?,
                [self.open(self.tree_expr(l, name)?), self.open(self.tree_expr(r, name)?)],
            )),
            TreeExpr::Plug(h, t) => app(self.hole_expr(h, name)?, self.tree_expr(t, name)?),
        })
    }

    /// A `∂BT` term for `E′`.
    fn hole_expr(&self, e: &HoleExpr, name: &dyn Fn(&TVar, bool) -> Option<String>) -> Result<Term, CompileError> {
        let z = |body: Term| lam_t("z", self.bt.clone(), body);
        Ok(match e {
            HoleExpr::Hole => z(var("z")),
            HoleExpr::Var(v) => var(&name(v, true).ok_or_else(|| CompileError::UnboundVariable(v.to_string()))?),
            HoleExpr::NodeL(a, h, t) => z(self.wrap(apps(
                self.letter(a)?,
                [self.open(app(self.hole_expr(h, name)?, var("z"))), self.open(self.tree_expr(t, name)?)],
            ))),
            HoleExpr::NodeR(a, t, h) => z(self.wrap(apps(
                self.letter(a)?,
                [self.open(self.tree_expr(t, name)?), self.open(app(self.hole_expr(h, name)?, var("z")))],
            ))),
            HoleExpr::Compose(a, b) => z(app(self.hole_expr(a, name)?, app(self.hole_expr(b, name)?, var("z")))),
        })
    }
}

/// `𝒞(T′) : ∂BT_Σ`.
pub fn compile_hole_tree(t: &OneHoleTree, sigma: &Alphabet) -> Result<Term, CompileError> {
    TreeCompiler::new(sigma).hole_tree(t)
}

/// Either side of an expression compilation.
pub enum ExprRef<'a> {
    Tree(&'a TreeExpr),
    Hole(&'a HoleExpr),
}

/// `𝒞(E) : BT^|V| → ∂BT^|V′| → BT` (or `→ ∂BT`), binding `tree_vars`
/// then `hole_vars` in order.
pub fn compile_expr(e: ExprRef<'_>, tree_vars: &[TVar], hole_vars: &[TVar], sigma: &Alphabet) -> Result<Term, CompileError> {
    let tc = TreeCompiler::new(sigma);
    let tnames: Vec<String> = (1..=tree_vars.len()).map(|i| format!("v{i}")).collect();
    let hnames: Vec<String> = (1..=hole_vars.len()).map(|i| format!("w{i}")).collect();
    let name = |v: &TVar, hole: bool| -> Option<String> {
        if hole {
            hole_vars.iter().position(|h| h == v).map(|i| hnames[i].clone())
        } else {
            tree_vars.iter().position(|t| t == v).map(|i| tnames[i].clone())
        }
    };
    let body = match e {
        ExprRef::Tree(t) => tc.tree_expr(t, &name)?,
        ExprRef::Hole(h) => tc.hole_expr(h, &name)?,
    };
    let mut binders: Vec<(String, SimpleType)> = tnames.iter().map(|n| (n.clone(), tc.bt.clone())).collect();
    binders.extend(hnames.iter().map(|n| (n.clone(), tc.hole_type())));
    Ok(lams_t(&binders, body))
}

/// Compile a register tree transducer with continuation-passing
/// configurations. With `B = BT^|R| → ∂BT^|R′| → BT` and
/// `A = B^|Q| → BT`, a configuration is `λk⃗. k_q T̄₁ … 𝒞(T′₁) …` and the
/// program is `λz. (z N₁ … N_|Γ| L) u₁ … u_|Q|`.
pub fn compile_rtt(rtt: &Rtt) -> Result<TypedProgram, CompileError> {
    let sigma = &rtt.output;
    let tc = TreeCompiler::new(sigma);
    let nq = rtt.states.len();
    let nr = rtt.tree_regs.len();
    let nh = rtt.hole_regs.len();
    let bt = tc.bt.clone();
    let dbt = tc.hole_type();
    let b_ty = SimpleType::arrows(
        std::iter::repeat_n(bt.clone(), nr).chain(std::iter::repeat_n(dbt.clone(), nh)),
        bt.clone(),
    );
    let a_ty = SimpleType::repeat_arrow(&b_ty, nq, bt.clone());
    let ks: Vec<(String, SimpleType)> = (1..=nq).map(|q| (format!("k{q}"), b_ty.clone())).collect();
    let k_names: Vec<String> = ks.iter().map(|(k, _)| k.clone()).collect();

    // Register binders of one side: tree registers, then hole registers.
    let side_binders = |suffix: &str| -> Vec<(String, SimpleType)> {
        let mut v: Vec<(String, SimpleType)> = (1..=nr).map(|i| (format!("r{i}{suffix}"), bt.clone())).collect();
        v.extend((1..=nh).map(|i| (format!("h{i}{suffix}"), dbt.clone())));
        v
    };
    let left = side_binders("l");
    let right = side_binders("r");

    // Variables of update expressions: (r,◁)… (r,▷)… then (r′,◁)… (r′,▷)….
    let sided = |names: &[std::sync::Arc<str>]| -> Vec<TVar> {
        let mut v: Vec<TVar> = names.iter().map(|n| TVar::sided(n, Side::Left)).collect();
        v.extend(names.iter().map(|n| TVar::sided(n, Side::Right)));
        v
    };
    let upd_tree_vars = sided(&rtt.tree_regs);
    let upd_hole_vars = sided(&rtt.hole_regs);
    let upd_args: Vec<Term> = {
        let mut v: Vec<Term> = left[..nr].iter().chain(&right[..nr]).map(|(n, _)| var(n)).collect();
        v.extend(left[nr..].iter().chain(&right[nr..]).map(|(n, _)| var(n)));
        v
    };

    let conf = |q: usize, args: Vec<Term>| lams_t(&ks, apps(var(&k_names[q]), args));

    let mut ns = Vec::new();
    for a in 0..rtt.input.len() {
        let mut hs = Vec::new();
        for ql in 0..nq {
            let mut conts = Vec::new();
            for qr in 0..nq {
                let tr = rtt.transition(ql, qr, a);
                let mut args = Vec::new();
                for e in &tr.tree_updates {
                    let c = compile_expr(ExprRef::Tree(e), &upd_tree_vars, &upd_hole_vars, sigma)?;
                    args.push(apps(c, upd_args.clone()));
                }
                for e in &tr.hole_updates {
                    let c = compile_expr(ExprRef::Hole(e), &upd_tree_vars, &upd_hole_vars, sigma)?;
                    args.push(apps(c, upd_args.clone()));
                }
                let m = conf(tr.target, args);
                conts.push(lams_t(&right, apps(m, vars(&k_names))));
            }
            hs.push(lams_t(&left, apps(var("cr"), conts)));
        }
        let n = lams_t(
            &[("cl".to_string(), a_ty.clone()), ("cr".to_string(), a_ty.clone())],
            lams_t(&ks, apps(var("cl"), hs)),
        );
        ns.push(n);
    }

    let mut init_args = Vec::new();
    for _ in 0..nr {
        init_args.push(tc.tree(&BinTree::Leaf)?);
    }
    for _ in 0..nh {
        init_args.push(tc.hole_tree(&OneHoleTree::Hole)?);
    }
    let l = conf(rtt.initial, init_args);

    let out_tree_vars: Vec<TVar> = rtt.tree_regs.iter().map(|n| TVar::plain(n)).collect();
    let out_hole_vars: Vec<TVar> = rtt.hole_regs.iter().map(|n| TVar::plain(n)).collect();
    let out_binders = side_binders("");
    let mut us = Vec::new();
    for e in &rtt.output_fn {
        let c = compile_expr(ExprRef::Tree(e), &out_tree_vars, &out_hole_vars, sigma)?;
        us.push(lams_t(&out_binders, apps(c, out_binders.iter().map(|(n, _)| var(n)))));
    }

    let z_ty = SimpleType::tree_type(rtt.input.len()).substitute_base(&a_ty);
    let mut fold_args = ns;
    fold_args.push(l);
    let term = lam_t("z", z_ty, apps(apps(var("z"), fold_args), us));
    Ok(TypedProgram {
        term,
        input: Codec::Tree(rtt.input.clone()),
        output: Codec::Tree(rtt.output.clone()),
        instance: a_ty,
    })
}

/// Decide a regular language at `Str_Σ[B] → Bool` with `B = Bool^|Q| → Bool`.
/// A value of `B` maps a one-hot state vector to acceptance of the rest of
/// the input: `λz. z F₁ … F_|Σ| X e⃗_{q₀}`.
pub fn compile_dfa(dfa: &Dfa) -> TypedProgram {
    let nq = dfa.states.len();
    let bool_ty = SimpleType::bool_type();
    let bs: Vec<(String, SimpleType)> = (1..=nq).map(|i| (format!("b{i}"), bool_ty.clone())).collect();
    let tf = [("t".to_string(), SimpleType::Base), ("e".to_string(), SimpleType::Base)];
    // λt. λe. b_{p₁} t (b_{p₂} t (… e)) over the given states.
    let any = |states: Vec<usize>| {
        let mut body = var("e");
        for p in states.into_iter().rev() {
            body = apps(var(&bs[p].0), [var("t"), body]);
        }
        lams_t(&tf, body)
    };
    let x = lams_t(&bs, any((0..nq).filter(|&q| dfa.accepting[q]).collect()));
    let b_ty = SimpleType::repeat_arrow(&bool_ty, nq, bool_ty.clone());
    let mut letters = Vec::new();
    for a in 0..dfa.alphabet.len() {
        let next = (0..nq).map(|j| any((0..nq).filter(|&p| dfa.next(p, a) == j).collect()));
        letters.push(lam_t("g", b_ty.clone(), lams_t(&bs, apps(var("g"), next))));
    }
    let onehot = (0..nq).map(|q| church::encode_bool(q == dfa.initial));
    let z_ty = SimpleType::str_type(dfa.alphabet.len()).substitute_base(&b_ty);
    let term = lam_t("z", z_ty, apps(apps(apps(var("z"), letters), [x]), onehot));
    TypedProgram { term, input: Codec::Str(dfa.alphabet.clone()), output: Codec::Bool, instance: b_ty }
}

/// `λx. t′ (t[A′] x)` at `input(t)[A[A′]] → output(t′)`.
pub fn compose_programs(t: &TypedProgram, t2: &TypedProgram) -> Result<TypedProgram, CompileError> {
    if t.output != t2.input {
        return Err(CompileError::TypeMismatch(format!(
            "first program produces {} but second consumes {}",
            t.output, t2.input
        )));
    }
    let inner = t.term.substitute_base_in_annotations(&t2.instance);
    let fresh = fresh_top_binder(&[&inner, &t2.term]);
    let term = lam(&fresh, app(t2.term.clone(), app(inner, var(&fresh))));
    Ok(TypedProgram {
        term,
        input: t.input.clone(),
        output: t2.output.clone(),
        instance: t.instance.substitute_base(&t2.instance),
    })
}

/// Program deciding `f⁻¹(L)` from a program for `f` and a decider for `L`.
pub fn compose_preimage(t: &TypedProgram, u: &TypedProgram) -> Result<TypedProgram, CompileError> {
    if u.output != Codec::Bool {
        return Err(CompileError::TypeMismatch("second program must produce a boolean".into()));
    }
    compose_programs(t, u)
}

fn fresh_top_binder(terms: &[&Term]) -> String {
    let mut n = 0;
    loop {
        let cand = if n == 0 { "s".to_string() } else { format!("s{n}") };
        if terms.iter().all(|t| !t.occurs_free(&cand)) {
            return cand;
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stlc::normalize::DEFAULT_FUEL;
    use crate::strings::transducer::xy_transducer;
    use crate::symbol::{Symbol, Word};

    fn s(w: &str) -> Value {
        Value::Str(Word::from_chars(w))
    }

    #[test]
    fn morphism_example() {
        let ab = Alphabet::from_chars("ab");
        let phi = Morphism::new(ab.clone(), ab.clone(), vec![Word::from_chars("ab"), Word::empty()]).unwrap();
        let p = compile_morphism(&phi).unwrap();
        assert!(p.check());
        assert_eq!(p.claimed_type(), SimpleType::arrow(SimpleType::str_type(2), SimpleType::str_type(2)));
        assert_eq!(p.apply(&s("ba"), DEFAULT_FUEL).unwrap(), s("ab"));
    }

    #[test]
    fn hdt0l_doubling() {
        let sys = Hdt0l::doubling(&Alphabet::from_chars("ab"));
        let p = compile_hdt0l(&sys).unwrap();
        assert!(p.check());
        assert_eq!(p.apply(&s("bb"), DEFAULT_FUEL).unwrap(), s("aaaa"));
        assert_eq!(p.apply(&s(""), DEFAULT_FUEL).unwrap(), s("a"));
    }

    #[test]
    fn register_transducer_xy() {
        let ab = Alphabet::from_chars("ab");
        let rt = xy_transducer(&ab);
        let p = compile_register_transducer(&rt).unwrap();
        assert!(p.check());
        for w in ab.words_up_to(4) {
            assert_eq!(p.apply(&Value::Str(w.clone()), DEFAULT_FUEL).unwrap(), Value::Str(rt.run(&w)));
        }
    }

    #[test]
    fn hole_tree_plugging() {
        let ab = Alphabet::from_chars("ab");
        let id = compile_hole_tree(&OneHoleTree::Hole, &ab).unwrap();
        assert!(id.erase_annotations().alpha_eq(&lam("z", var("z"))));
        let h = OneHoleTree::NodeL("a".into(), OneHoleTree::Hole.into(), BinTree::Leaf.into());
        let u = BinTree::node("b", BinTree::Leaf, BinTree::Leaf);
        let t = app(compile_hole_tree(&h, &ab).unwrap(), church::encode_tree(&u, &ab).unwrap());
        assert_eq!(church::decode_tree(&t, &ab).unwrap(), h.plug(&u));
    }

    #[test]
    fn dfa_even() {
        let ab = Alphabet::from_chars("ab");
        let d = Dfa::even_count(&ab, &Symbol::new("a"));
        let p = compile_dfa(&d);
        assert!(p.check());
        for w in ab.words_up_to(5) {
            assert_eq!(p.apply(&Value::Str(w.clone()), DEFAULT_FUEL).unwrap(), Value::Bool(d.accepts(&w)));
        }
    }

    #[test]
    fn preimage_of_even_under_palindrome() {
        let ab = Alphabet::from_chars("ab");
        let t = compile_hdt0l(&Hdt0l::palindrome(&ab)).unwrap();
        let u = compile_dfa(&Dfa::even_count(&ab, &Symbol::new("a")));
        let c = compose_preimage(&t, &u).unwrap();
        assert!(c.check());
        for w in ab.words_up_to(4) {
            assert_eq!(c.apply(&Value::Str(w), DEFAULT_FUEL).unwrap(), Value::Bool(true));
        }
    }

    fn rtt_agrees(rtt: &Rtt, max_nodes: usize) {
        let p = compile_rtt(rtt).unwrap();
        assert!(p.check(), "{} does not type", rtt.name);
        for t in BinTree::enumerate(&rtt.input, max_nodes) {
            assert_eq!(p.apply(&Value::Tree(t.clone()), DEFAULT_FUEL).unwrap(), Value::Tree(rtt.run(&t)), "{} on {t}", rtt.name);
        }
    }

    #[test]
    fn rtt_examples() {
        use crate::trees::examples;
        let ab = Alphabet::from_chars("ab");
        rtt_agrees(&examples::identity(&ab), 7);
        rtt_agrees(&examples::mirror(&ab), 7);
        rtt_agrees(&examples::conditional_swap(&ab).0, 7);
        rtt_agrees(&examples::spine(&ab), 7);
    }

    #[test]
    fn expression_compile() {
        let ab = Alphabet::from_chars("ab");
        let x = TVar::plain("x");
        let y = TVar::plain("y");
        let h = TVar::plain("h");
        let e = TreeExpr::node(
            "a",
            TreeExpr::Plug(Box::new(HoleExpr::Var(h.clone())), Box::new(TreeExpr::Var(y.clone()))),
            TreeExpr::Var(x.clone()),
        );
        let c = compile_expr(ExprRef::Tree(&e), &[x.clone(), y.clone()], std::slice::from_ref(&h), &ab).unwrap();
        let u = BinTree::node("b", BinTree::Leaf, BinTree::Leaf);
        let hv = OneHoleTree::NodeR("a".into(), BinTree::Leaf.into(), OneHoleTree::Hole.into());
        let t = apps(c, [
            church::encode_tree(&u, &ab).unwrap(),
            church::encode_tree(&BinTree::Leaf, &ab).unwrap(),
            compile_hole_tree(&hv, &ab).unwrap(),
        ]);
        let env = [(x, u), (y, BinTree::Leaf)].into_iter().collect();
        let henv = [(h, hv)].into_iter().collect();
        assert_eq!(church::decode_tree(&t, &ab).unwrap(), e.eval(&env, &henv).unwrap());
        let bad = compile_expr(ExprRef::Tree(&TreeExpr::Var(TVar::plain("q"))), &[], &[], &ab);
        assert!(matches!(bad, Err(CompileError::UnboundVariable(_))));
    }

    #[test]
    fn composition_mismatch() {
        let ab = Alphabet::from_chars("ab");
        let d = compile_dfa(&Dfa::even_count(&ab, &Symbol::new("a")));
        assert!(matches!(compose_programs(&d, &d), Err(CompileError::TypeMismatch(_))));
    }
}
