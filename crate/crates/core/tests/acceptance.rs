//! Acceptance suite: one line per criterion, exact comparisons throughout.
//!
//! Runs without the test harness so the lines always reach the output.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use church_transducers::church::{decode_string_normal, decode_tree_normal, encode_string, encode_tree};
use church_transducers::codec::Value;
use church_transducers::eal::{eal_decode_string, eal_decode_tree, eal_encode_string, eal_encode_tree, ETerm};
use church_transducers::eal_compile::{
    compile_brtt, compile_cbs, compile_sst, hat_encode, promote_program, EalCompileError, EalProgram,
};
use church_transducers::format::{parse_machines, Machine, ParseOptions};
use church_transducers::gen::{random_cbs, random_dfa, random_rt, rng, typable_redex_corpus, GenParams};
use church_transducers::stlc::infer::{check_type, infer_type, TypingContext};
use church_transducers::stlc::normalize::beta_step;
use church_transducers::stlc::types::SimpleType;
use church_transducers::stlc::DEFAULT_FUEL;
use church_transducers::stlc_compile::{compile_dfa, compile_hdt0l, compile_register_transducer, compile_rtt, compose_preimage};
use church_transducers::strings::cbs::cbs;
use church_transducers::strings::hdt0l::Hdt0l;
use church_transducers::strings::squaring::{run_pipeline, squaring_pipeline};
use church_transducers::strings::transducer::{xy_transducer, Item, RegisterTransducer};
use church_transducers::symbol::{Alphabet, Symbol, Word};
use church_transducers::trees::examples;
use church_transducers::trees::rtt::ConflictRelation;
use church_transducers::trees::tree::BinTree;

/// Depth-changing β-steps seen in every affine normalization of the suite.
static DEPTH_VIOLATIONS: AtomicU64 = AtomicU64::new(0);
static TRACED_STEPS: AtomicU64 = AtomicU64::new(0);

type Verdict = Result<String, String>;

fn ab() -> Alphabet {
    Alphabet::from_chars("ab")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Run an affine program and record its reduction trace.
fn eal_run(p: &EalProgram, v: &Value) -> Result<Value, String> {
    let (out, trace) = p.apply_traced(v, DEFAULT_FUEL).map_err(|e| format!("on {v}: {e}"))?;
    DEPTH_VIOLATIONS.fetch_add(trace.depth_violations, Ordering::Relaxed);
    TRACED_STEPS.fetch_add(trace.steps(), Ordering::Relaxed);
    Ok(out)
}

fn word(w: &Word) -> Value {
    Value::Str(w.clone())
}

fn c1_worked_example() -> Verdict {
    let p = compile_sst(&xy_transducer(&ab())).map_err(|e| e.to_string())?;
    let words = ab().words_up_to(6);
    for w in &words {
        let expected = w.concat(&w.reversed());
        let got = eal_run(&p, &word(w))?;
        ensure(got == word(&expected), || format!("{w}: got {got}, expected {expected}"))?;
    }
    Ok(format!("{} words, |w| <= 6", words.len()))
}

/// Squaring with underlining, straight from its definition.
fn squaring_oracle(w: &Word) -> Word {
    let n = w.len();
    let mut out = Word::empty();
    for i in 0..n {
        for (j, c) in w.iter().enumerate() {
            out.push(if i == j { c.underlined() } else { c.clone() });
        }
    }
    out
}

fn c2_squaring() -> Verdict {
    let gamma = Alphabet::from_chars("1234");
    let pipe = squaring_pipeline(&gamma);
    let example = run_pipeline(&pipe, &Word::from_chars("1234"));
    let verbatim = "_1 2 3 4 1 _2 3 4 1 2 _3 4 1 2 3 _4";
    ensure(example.to_string() == verbatim, || format!("1234 gave {example}"))?;
    let words = gamma.words_up_to(4);
    for w in &words {
        let got = run_pipeline(&pipe, w);
        ensure(got == squaring_oracle(w), || format!("{w}: got {got}"))?;
    }
    Ok(format!("{} words, 1234 -> {verbatim}", words.len()))
}

fn c3_hdt0l_growth() -> Verdict {
    let sys = Hdt0l::doubling(&ab());
    let p = compile_hdt0l(&sys).map_err(|e| e.to_string())?;
    let delta = SimpleType::str_type(sys.work.len());
    let expected_ty = SimpleType::arrow(SimpleType::str_type(2).substitute_base(&delta), SimpleType::str_type(sys.output.len()));
    ensure(p.claimed_type() == expected_ty && p.check(), || format!("type {} does not check", p.claimed_type()))?;
    for w in ab().words_up_to(4) {
        let direct = sys.run(&w);
        let Value::Str(compiled) = p.apply(&word(&w), DEFAULT_FUEL).map_err(|e| e.to_string())? else {
            return Err("not a string".into());
        };
        let want = 1usize << w.len();
        ensure(direct.len() == want && compiled == direct, || format!("{w}: direct {}, compiled {}", direct.len(), compiled.len()))?;
    }
    Ok("|output| = 2^|w| for |w| <= 4, direct and compiled".into())
}

fn c4_backward() -> Verdict {
    let mut g = rng(4);
    let params = GenParams { max_states: 3, max_registers: 3, max_letters: 2 };
    let machines: Vec<RegisterTransducer> = (0..24).map(|i| random_rt(&mut g, &format!("r{i}"), &ab(), &ab(), params, i % 2 == 0)).collect();
    let mut checked = 0;
    for rt in &machines {
        for w in ab().words_up_to(5) {
            ensure(rt.backward_run(&w) == rt.run(&w), || format!("{} on {w}", rt.name))?;
            checked += 1;
        }
    }
    let copying = machines.iter().filter(|m| !m.check_copyless().passes()).count();
    Ok(format!("{} machines ({copying} copying), {checked} runs", machines.len()))
}

fn c5_rtt_stlc() -> Verdict {
    let trees = BinTree::enumerate(&ab(), 15);
    for (rtt, oracle) in [(examples::identity(&ab()), BinTree::clone as fn(&BinTree) -> BinTree), (examples::mirror(&ab()), BinTree::mirror)] {
        let p = compile_rtt(&rtt).map_err(|e| e.to_string())?;
        ensure(p.check(), || format!("{} does not type", rtt.name))?;
        for t in &trees {
            let got = p.apply(&Value::Tree(t.clone()), DEFAULT_FUEL).map_err(|e| e.to_string())?;
            ensure(got == Value::Tree(rtt.run(t)) && got == Value::Tree(oracle(t)), || format!("{} on {t}: {got}", rtt.name))?;
        }
    }
    Ok(format!("identity and mirror on {} trees with <= 15 nodes", trees.len()))
}

fn c6_preimage() -> Verdict {
    let mut g = rng(6);
    let params = GenParams { max_states: 2, max_registers: 2, max_letters: 1 };
    let mut fs: Vec<RegisterTransducer> = vec![xy_transducer(&ab())];
    fs.extend((0..5).map(|i| random_rt(&mut g, &format!("f{i}"), &ab(), &ab(), params, i % 2 == 1)));
    let mut checked = 0;
    for (k, f) in fs.iter().enumerate() {
        let dfa = random_dfa(&mut g, &format!("L{k}"), &ab(), 3);
        let t = compile_register_transducer(f).map_err(|e| e.to_string())?;
        let pre = compose_preimage(&t, &compile_dfa(&dfa)).map_err(|e| e.to_string())?;
        ensure(pre.check(), || format!("preimage program {k} does not type"))?;
        for w in ab().words_up_to(5) {
            let got = pre.apply(&word(&w), DEFAULT_FUEL).map_err(|e| e.to_string())?;
            let want = dfa.accepts(&f.run(&w));
            ensure(got == Value::Bool(want), || format!("pair {k} on {w}: got {got}, expected {want}"))?;
            checked += 1;
        }
    }
    Ok(format!("{} (f, L) pairs, {checked} decisions", fs.len()))
}

const IDENTITY_SST: &str = "sst id input a b output a b registers X states q initial q
  delta q a -> q { X := X a }  delta q b -> q { X := X b }  out q = X";
const COUNT_SST: &str = "sst count input a b output i registers X states q initial q
  delta q a -> q { X := X i }  delta q b -> q { X := X i }  out q = X";
const COPYING_RT: &str = "register-transducer copying input a output a registers X states q initial q
  delta q a -> q { X := X X a }  out q = X";

fn transducer(src: &str) -> RegisterTransducer {
    match parse_machines(src, ParseOptions::default()).expect("fixture parses").remove(0) {
        Machine::Transducer { rt, .. } => rt,
        _ => unreachable!("fixture is a transducer"),
    }
}

fn c7_hygiene() -> Verdict {
    let mut programs: Vec<(String, EalProgram)> = Vec::new();
    let xy = compile_sst(&xy_transducer(&ab())).map_err(|e| e.to_string())?;
    programs.push(("xy promoted".into(), promote_program(&xy).map_err(|e| e.to_string())?));
    programs.push(("xy".into(), xy));
    let mut g = rng(7);
    for i in 0..10 {
        let rt = random_rt(&mut g, &format!("s{i}"), &ab(), &ab(), GenParams { max_states: 3, max_registers: 2, max_letters: 2 }, true);
        programs.push((rt.name.clone(), compile_sst(&rt).map_err(|e| e.to_string())?));
    }
    let (swap, rel) = examples::conditional_swap(&ab());
    for (rtt, rel) in [
        (examples::identity(&ab()), None),
        (examples::mirror(&ab()), None),
        (examples::spine(&ab()), None),
        (swap, Some(rel)),
    ] {
        let rel = rel.unwrap_or_else(|| ConflictRelation::identity(rtt.carrier()));
        programs.push((rtt.name.clone(), compile_brtt(&rtt, &rel).map_err(|e| e.to_string())?));
    }
    let count = promote_program(&compile_sst(&transducer(COUNT_SST)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let id = promote_program(&compile_sst(&transducer(IDENTITY_SST)).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    programs.push(("power".into(), compile_cbs(&count, &[(Symbol::new("i"), id)]).map_err(|e| e.to_string())?));
    for (name, p) in &programs {
        p.check_hygiene().map_err(|e| format!("{name}: {e}"))?;
    }
    let copying = transducer(COPYING_RT);
    ensure(matches!(compile_sst(&copying), Err(EalCompileError::NotCopyless(_))), || "copying transducer was accepted".into())?;
    let xy = xy_transducer(&ab());
    let dup = hat_encode(&[Item::Reg(0), Item::Letter(Symbol::new("a")), Item::Reg(0)].to_vec(), &xy);
    let v = dup.term().check_linearity();
    ensure(v.len() == 1 && &*v[0].binder == "r_X", || format!("duplicated register gave {v:?}"))?;
    Ok(format!("{} programs clean; copying refused; duplicate caught at r_X", programs.len()))
}

fn c8_cbs() -> Verdict {
    let lift = |rt: &RegisterTransducer| -> Result<EalProgram, String> {
        promote_program(&compile_sst(rt).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
    };
    let words = ab().words_up_to(4);
    let count = transducer(COUNT_SST);
    let id = transducer(IDENTITY_SST);
    let power = compile_cbs(&lift(&count)?, &[(Symbol::new("i"), lift(&id)?)]).map_err(|e| e.to_string())?;
    let ab_out = eal_run(&power, &word(&Word::from_chars("ab")))?;
    ensure(ab_out == word(&Word::from_chars("abab")), || format!("ab gave {ab_out}"))?;
    let f = |w: &Word| count.run(w);
    let g = |w: &Word| id.run(w);
    for w in &words {
        let want = cbs(&f, &[(Symbol::new("i"), &g)], w).map_err(|e| e.to_string())?;
        let got = eal_run(&power, &word(w))?;
        ensure(got == word(&want), || format!("power on {w}: got {got}, expected {want}"))?;
    }
    let mut rg = rng(8);
    let index = Alphabet::from_chars("ij");
    let params = GenParams { max_states: 2, max_registers: 2, max_letters: 1 };
    for k in 0..5 {
        let inst = random_cbs(&mut rg, &ab(), &index, &ab(), params);
        let fam: Vec<(Symbol, EalProgram)> = inst.family.iter().map(|(s, rt)| Ok((s.clone(), lift(rt)?))).collect::<Result<_, String>>()?;
        let p = compile_cbs(&lift(&inst.f)?, &fam).map_err(|e| e.to_string())?;
        let fo = |w: &Word| inst.f.run(w);
        let gs: Vec<Box<dyn Fn(&Word) -> Word + Sync>> =
            inst.family.iter().map(|(_, rt)| Box::new(move |w: &Word| rt.run(w)) as Box<dyn Fn(&Word) -> Word + Sync>).collect();
        let family: Vec<(Symbol, &(dyn Fn(&Word) -> Word + Sync))> =
            inst.family.iter().zip(&gs).map(|((s, _), g)| (s.clone(), g.as_ref())).collect();
        for w in &words {
            let want = cbs(&fo, &family, w).map_err(|e| e.to_string())?;
            let got = eal_run(&p, &word(w))?;
            ensure(got == word(&want), || format!("instance {k} on {w}: got {got}, expected {want}"))?;
        }
    }
    Ok(format!("w^|w| and 5 random instances on {} words", words.len()))
}

fn c9_brtt() -> Verdict {
    let trees = BinTree::enumerate(&ab(), 9);
    let (swap, rel) = examples::conditional_swap(&ab());
    let has_conflict = !rel.pairs().is_empty();
    let cases = [
        (examples::identity(&ab()), None, Some(BinTree::clone as fn(&BinTree) -> BinTree)),
        (examples::mirror(&ab()), None, Some(BinTree::mirror as fn(&BinTree) -> BinTree)),
        (swap, Some(rel), None),
    ];
    for (rtt, rel, oracle) in cases {
        let rel = rel.unwrap_or_else(|| ConflictRelation::identity(rtt.carrier()));
        let p = compile_brtt(&rtt, &rel).map_err(|e| e.to_string())?;
        for t in &trees {
            let got = eal_run(&p, &Value::Tree(t.clone()))?;
            ensure(got == Value::Tree(rtt.run(t)), || format!("{} on {t}: got {got}", rtt.name))?;
            if let Some(o) = oracle {
                ensure(got == Value::Tree(o(t)), || format!("{} on {t} disagrees with the structural oracle", rtt.name))?;
            }
        }
    }
    ensure(has_conflict, || "conditional swap declares no conflict".into())?;
    Ok(format!("identity, mirror, conditional swap on {} trees with <= 9 nodes", trees.len()))
}

fn c10_meta() -> Verdict {
    let corpus = typable_redex_corpus(&mut rng(10), 100, 4);
    let mut steps = 0;
    for (k, t) in corpus.iter().enumerate() {
        let ty = infer_type(&TypingContext::new(), t).map_err(|e| e.to_string())?.ground();
        let mut cur = t.clone();
        for _ in 0..200 {
            let Some(next) = beta_step(&cur) else { break };
            ensure(check_type(&TypingContext::new(), &next, &ty), || format!("term {k} loses type {ty} after a step"))?;
            cur = next;
            steps += 1;
        }
    }
    let violations = DEPTH_VIOLATIONS.load(Ordering::Relaxed);
    let traced = TRACED_STEPS.load(Ordering::Relaxed);
    ensure(violations == 0 && traced > 0, || format!("{violations} depth-changing steps out of {traced}"))?;
    let words = ab().words_up_to(8);
    for w in &words {
        let s = encode_string(w, &ab()).map_err(|e| e.to_string())?;
        ensure(decode_string_normal(&s, &ab()).ok().as_ref() == Some(w), || format!("stlc string {w}"))?;
        let e: ETerm = eal_encode_string(w, &ab()).map_err(|e| e.to_string())?;
        ensure(eal_decode_string(&e, &ab()).ok().as_ref() == Some(w), || format!("eal string {w}"))?;
    }
    let trees = BinTree::enumerate(&ab(), 15);
    for t in &trees {
        let s = encode_tree(t, &ab()).map_err(|e| e.to_string())?;
        ensure(decode_tree_normal(&s, &ab()).ok().as_ref() == Some(t), || format!("stlc tree {t}"))?;
        let e = eal_encode_tree(t, &ab()).map_err(|e| e.to_string())?;
        ensure(eal_decode_tree(&e, &ab()).ok().as_ref() == Some(t), || format!("eal tree {t}"))?;
    }
    Ok(format!(
        "{} terms / {steps} steps keep their type; 0 of {traced} affine steps change depth; {} words and {} trees round-trip",
        corpus.len(),
        words.len(),
        trees.len()
    ))
}

fn main() {
    // Criterion 10 reads the traces gathered by the affine criteria, so it runs last.
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("worked example w.reverse(w) in EAL, |w| <= 6", c1_worked_example),
        ("squaring pipeline = squaring over {1,2,3,4}, |w| <= 4", c2_squaring),
        ("HDT0L doubling has |output| = 2^|w|", c3_hdt0l_growth),
        ("backward run = forward run on generated transducers", c4_backward),
        ("RTT to STLC agrees with run_rtt, <= 15 nodes", c5_rtt_stlc),
        ("preimage programs decide f^-1(L)", c6_preimage),
        ("EAL hygiene of emitted programs", c7_hygiene),
        ("CbS programs match the cbs oracle, |w| <= 4", c8_cbs),
        ("BRTT to EAL agrees with run_rtt, <= 9 nodes", c9_brtt),
        ("meta-invariants: subject reduction, depth, round-trips", c10_meta),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
