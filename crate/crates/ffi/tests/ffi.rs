use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use church_transducers_ffi::*;

const XY: &str = "sst xy input a b output a b registers X Y states q initial q
  delta q a -> q { X := X a ; Y := a Y }  delta q b -> q { X := X b ; Y := b Y }  out q = X Y";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    chtr_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let e = chtr_last_error();
    assert!(!e.is_null());
    CStr::from_ptr(e).to_string_lossy().into_owned()
}

#[test]
fn parse_run_compile_eval() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(chtr_machines_parse(c(XY).as_ptr(), false, &mut m), ChtrStatus::Ok);
        assert_eq!(chtr_machines_count(m), 1);
        let mut out = ptr::null_mut();
        assert_eq!(chtr_machines_run(m, 0, c("ab").as_ptr(), &mut out), ChtrStatus::Ok);
        assert_eq!(take(out), "abba");
        assert_eq!(chtr_machines_run(m, 3, c("ab").as_ptr(), &mut out), ChtrStatus::Semantic);

        for target in [ChtrTarget::Stlc, ChtrTarget::Eal] {
            let mut p = ptr::null_mut();
            assert_eq!(chtr_compile(m, 0, target, &mut p), ChtrStatus::Ok);
            assert_eq!(chtr_program_eval(p, c("aab").as_ptr(), 1_000_000, &mut out), ChtrStatus::Ok);
            assert_eq!(take(out), "aabbaa");
            assert_eq!(chtr_program_eval(p, c("aab").as_ptr(), 3, &mut out), ChtrStatus::Resource);
            assert!(last_error().contains("exhausted"));

            assert_eq!(chtr_program_write(p, &mut out), ChtrStatus::Ok);
            let text = take(out);
            let mut q = ptr::null_mut();
            assert_eq!(chtr_program_read(c(&text).as_ptr(), &mut q), ChtrStatus::Ok);
            assert_eq!(chtr_program_eval(q, c("").as_ptr(), 1_000_000, &mut out), ChtrStatus::Ok);
            assert_eq!(take(out), "");
            chtr_program_free(q);
            chtr_program_free(p);
        }
        chtr_machines_free(m);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(chtr_machines_parse(ptr::null(), false, &mut m), ChtrStatus::NullArg);
        assert_eq!(chtr_machines_parse(c("sst broken").as_ptr(), false, &mut m), ChtrStatus::Parse);
        let bad = [0xffu8, 0];
        assert_eq!(chtr_machines_parse(bad.as_ptr() as *const c_char, false, &mut m), ChtrStatus::InvalidUtf8);
        let copying = "register-transducer c input a output a registers X states q initial q delta q a -> q { X := X X } out q = X";
        assert_eq!(chtr_machines_parse(c(copying).as_ptr(), false, &mut m), ChtrStatus::Ok);
        let mut p = ptr::null_mut();
        assert_eq!(chtr_compile(m, 0, ChtrTarget::Eal, &mut p), ChtrStatus::Semantic);
        assert!(last_error().contains("copyless"));
        assert_eq!(chtr_compile(m, 0, ChtrTarget::Stlc, ptr::null_mut()), ChtrStatus::NullArg);
        let mut out = ptr::null_mut();
        assert_eq!(chtr_machines_run(m, 0, c("b").as_ptr(), &mut out), ChtrStatus::Parse);
        assert_eq!(chtr_program_read(c("[codec]\ntarget = x\n").as_ptr(), &mut p), ChtrStatus::Parse);
        assert_eq!(chtr_program_eval(ptr::null(), c("a").as_ptr(), 10, &mut out), ChtrStatus::NullArg);
        assert_eq!(chtr_machines_count(ptr::null()), 0);
        chtr_machines_free(m);
        chtr_machines_free(ptr::null_mut());
        chtr_program_free(ptr::null_mut());
        chtr_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_interface() {
    let h = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/church_transducers.h")).unwrap();
    for name in ["CHTR_STATUS_PANIC = 6", "typedef struct ChtrProgram ChtrProgram", "chtr_program_eval(", "chtr_last_error(void)"] {
        assert!(h.contains(name), "{name}");
    }
}

/// Links a small C program against the static library when a C compiler
/// and the library are available.
#[test]
fn c_program_links_and_runs() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::var_os("CARGO_TARGET_DIR").map(PathBuf::from).unwrap_or_else(|| root.join("../../target"));
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    let lib = target.join(profile).join("libchurch_transducers_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let dir = tempfile_dir();
    let src = dir.join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "church_transducers.h"
int main(void) {
    const char *src = "morphism m input a b output a b map a -> b , b -> a a";
    ChtrMachines *m = NULL;
    ChtrProgram *p = NULL;
    char *out = NULL;
    if (chtr_machines_parse(src, false, &m) != CHTR_STATUS_OK) return 10;
    if (chtr_compile(m, 0, CHTR_TARGET_EAL, &p) != CHTR_STATUS_OK) return 11;
    if (chtr_program_eval(p, "ab", 100000, &out) != CHTR_STATUS_OK) return 12;
    int ok = strcmp(out, "baa") == 0;
    printf("%s\n", out);
    chtr_string_free(out);
    chtr_program_free(p);
    chtr_machines_free(m);
    return ok ? 0 : 13;
}
"#,
    )
    .unwrap();
    let exe = dir.join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&run.stdout), "baa\n");
}

fn tempfile_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("chtr-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
