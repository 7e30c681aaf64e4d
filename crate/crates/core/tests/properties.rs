use proptest::prelude::*;

use church_transducers::church::{decode_string_normal, encode_string};
use church_transducers::codec::Value;
use church_transducers::eal::{eal_decode_string, eal_encode_string};
use church_transducers::eal_compile::compile_sst;
use church_transducers::format::{parse_machines, read_program, write_machine, write_program, Machine, ParseOptions, Program};
use church_transducers::gen::{random_rt, rng, typable_redex_corpus, GenParams};
use church_transducers::stlc::infer::{check_type, infer_type, TypingContext};
use church_transducers::stlc::normalize::beta_step;
use church_transducers::stlc::DEFAULT_FUEL;
use church_transducers::stlc_compile::compile_register_transducer;
use church_transducers::symbol::{Alphabet, Symbol, Word};

fn ab() -> Alphabet {
    Alphabet::from_chars("ab")
}

fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(vec!["a", "b"]), 0..=max)
        .prop_map(|v| Word::from_symbols(v.into_iter().map(Symbol::new).collect()))
}

fn params() -> GenParams {
    GenParams { max_states: 3, max_registers: 2, max_letters: 2 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn string_encodings_roundtrip(w in word_strategy(12)) {
        let t = encode_string(&w, &ab()).unwrap();
        prop_assert_eq!(decode_string_normal(&t, &ab()).unwrap(), w.clone());
        let e = eal_encode_string(&w, &ab()).unwrap();
        prop_assert_eq!(eal_decode_string(&e, &ab()).unwrap(), w);
    }

    #[test]
    fn backward_run_is_forward_run(seed in any::<u64>(), w in word_strategy(6)) {
        let rt = random_rt(&mut rng(seed), "r", &ab(), &ab(), GenParams::default(), false);
        prop_assert_eq!(rt.backward_run(&w), rt.run(&w));
    }

    #[test]
    fn machine_text_roundtrips(seed in any::<u64>()) {
        let rt = random_rt(&mut rng(seed), "r", &ab(), &ab(), GenParams::default(), seed % 2 == 0);
        let text = write_machine(&Machine::Transducer { rt: rt.clone(), require_copyless: false });
        let back = parse_machines(&text, ParseOptions::default()).unwrap();
        let Machine::Transducer { rt: parsed, .. } = &back[0] else { panic!("{text}") };
        for w in ab().words_up_to(4) {
            prop_assert_eq!(parsed.run(&w), rt.run(&w));
        }
        prop_assert_eq!(write_machine(&back[0]), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn compiled_ssts_agree_with_their_run(seed in any::<u64>(), w in word_strategy(4)) {
        let rt = random_rt(&mut rng(seed), "s", &ab(), &ab(), params(), true);
        let v = Value::Str(w.clone());
        let want = Value::Str(rt.run(&w));
        let eal = compile_sst(&rt).unwrap();
        eal.check_hygiene().unwrap();
        let (got, trace) = eal.apply_traced(&v, DEFAULT_FUEL).unwrap();
        prop_assert_eq!(&got, &want);
        prop_assert_eq!(trace.depth_violations, 0);
        let stlc = compile_register_transducer(&rt).unwrap();
        prop_assert_eq!(stlc.apply(&v, DEFAULT_FUEL).unwrap(), want);
    }

    #[test]
    fn program_files_roundtrip(seed in any::<u64>()) {
        let rt = random_rt(&mut rng(seed), "s", &ab(), &ab(), params(), true);
        for p in [Program::Eal(compile_sst(&rt).unwrap()), Program::Stlc(compile_register_transducer(&rt).unwrap())] {
            let text = write_program(&p);
            let back = read_program(&text).unwrap();
            prop_assert_eq!(write_program(&back), text);
        }
    }

    #[test]
    fn reduction_keeps_types(seed in any::<u64>()) {
        for t in typable_redex_corpus(&mut rng(seed), 5, 4) {
            let ty = infer_type(&TypingContext::new(), &t).unwrap().ground();
            let mut cur = t;
            for _ in 0..100 {
                let Some(next) = beta_step(&cur) else { break };
                prop_assert!(check_type(&TypingContext::new(), &next, &ty));
                cur = next;
            }
        }
    }
}
