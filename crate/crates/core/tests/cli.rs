use std::path::PathBuf;
use std::process::{Command, Output};

fn machine(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("machines").join(name)
}

fn chtr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chtr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn run_prints_direct_semantics() {
    let xy = machine("xy.sst");
    let o = chtr(&["run", xy.to_str().unwrap(), "ab"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "abba\n");
    assert_eq!(stdout(&chtr(&["run", xy.to_str().unwrap(), ""])), "ε\n");
    let o = chtr(&["run", machine("doubling.hdt0l").to_str().unwrap(), "bb"]);
    assert_eq!(stdout(&o), "aaaa\n");
    let o = chtr(&["run", machine("spine.brtt").to_str().unwrap(), "a(b((), ()), ())"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn compile_check_eval() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("xy.prog");
    let o = chtr(&["compile", machine("xy.sst").to_str().unwrap(), "--target", "eal", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = chtr(&["check", out.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("ok [eal]"));
    assert_eq!(stdout(&chtr(&["eval", out.to_str().unwrap(), "aab"])), "aabbaa\n");
    assert_eq!(chtr(&["eval", out.to_str().unwrap(), "aab", "--fuel", "5"]).status.code(), Some(3));
    assert_eq!(chtr(&["eval", out.to_str().unwrap(), "aac"]).status.code(), Some(2));

    let text = std::fs::read_to_string(&out).unwrap();
    let bad = dir.path().join("bad.prog");
    std::fs::write(&bad, text.replace("output = string a b", "output = string a")).unwrap();
    assert_eq!(chtr(&["check", bad.to_str().unwrap()]).status.code(), Some(1));
    std::fs::write(&bad, text.replace("[term]", "[terms]")).unwrap();
    assert_eq!(chtr(&["check", bad.to_str().unwrap()]).status.code(), Some(2));

    let o = chtr(&["compile", machine("doubling.hdt0l").to_str().unwrap()]);
    assert!(stdout(&o).contains("target = stlc"));
}

#[test]
fn copying_transducer_is_refused_by_the_affine_target() {
    let o = chtr(&["compile", machine("copying.rt").to_str().unwrap(), "--target", "eal"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("register X"));
    let o = chtr(&["compile", machine("copying.rt").to_str().unwrap(), "--target", "stlc"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("broken.sst");
    std::fs::write(&f, "sst broken input a output a registers X states q initial q\n delta q a -> q { X := X z }\n out q = X\n").unwrap();
    let o = chtr(&["run", f.to_str().unwrap(), "a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    std::fs::write(&f, "sst partial input a b output a registers X states q initial q\n delta q a -> q { X := X a }\n out q = X\n").unwrap();
    assert_eq!(chtr(&["run", f.to_str().unwrap(), "ab"]).status.code(), Some(2));
    let o = chtr(&["run", f.to_str().unwrap(), "ab", "--complete-delta"]);
    assert_eq!(stdout(&o), "a\n");
}

#[test]
fn difftest_examples() {
    let o = chtr(&["difftest", machine("xy.sst").to_str().unwrap(), "--max-len", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("pass xy [stlc]: 127 inputs") && s.contains("pass xy [eal]: 127 inputs"), "{s}");
    let o = chtr(&["difftest", machine("conditional-swap.brtt").to_str().unwrap(), "--max-nodes", "9"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = chtr(&["difftest", machine("preimage.chain").to_str().unwrap(), "--target", "stlc", "--max-len", "4"]);
    assert!(stdout(&o).contains("swap ; even-a"));
    let o = chtr(&["difftest", machine("xy.sst").to_str().unwrap(), "--fuel", "20"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn difftest_is_deterministic() {
    let args = ["difftest", "--seed", "11", "--random", "4", "--max-len", "4"];
    let a = chtr(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, chtr(&args).stdout);
}

#[test]
fn bundled_machines_parse() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("machines");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let src = std::fs::read_to_string(&path).unwrap();
        let ms = church_transducers::format::parse_machines(&src, Default::default())
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(!ms.is_empty());
        seen += 1;
    }
    assert!(seen >= 10);
}
