//! C interface to `church-transducers`.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `*_free` function. Every call returns a [`ChtrStatus`]; on
//! failure a message is available from [`chtr_last_error`] until the next
//! call on the same thread. Strings handed out by the library are released
//! with [`chtr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use church_transducers::codec::Value;
use church_transducers::difftest::{compile_machine, eval_program, input_codec, run_machine, Failure, Target};
use church_transducers::format::{parse_machines, read_program, write_program, Machine, ParseOptions, Program, ProgramError};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChtrStatus {
    Ok = 0,
    /// Validation failure: a check did not pass, or the input is out of the codec.
    Semantic = 1,
    Parse = 2,
    /// The reduction budget ran out.
    Resource = 3,
    NullArg = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChtrTarget {
    Stlc = 0,
    Eal = 1,
}

/// The machines of one description file.
pub struct ChtrMachines {
    machines: Vec<Machine>,
}

/// A checked program.
pub struct ChtrProgram {
    program: Program,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let c = CString::new(message.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Res<T> = Result<T, ChtrStatus>;

fn fail<T>(status: ChtrStatus, message: impl Into<String>) -> Res<T> {
    set_error(message);
    Err(status)
}

/// Run `f`, turning panics into [`ChtrStatus::Panic`].
fn guard(f: impl FnOnce() -> Res<()>) -> ChtrStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ChtrStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            ChtrStatus::Panic
        }
    }
}

/// # Safety
/// `s` is null or a NUL-terminated string.
unsafe fn text<'a>(s: *const c_char, what: &str) -> Res<&'a str> {
    if s.is_null() {
        return fail(ChtrStatus::NullArg, format!("{what} is null"));
    }
    CStr::from_ptr(s).to_str().or_else(|_| fail(ChtrStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `out` is null or valid for a write.
unsafe fn put<T>(out: *mut *mut T, value: T) -> Res<()> {
    if out.is_null() {
        return fail(ChtrStatus::NullArg, "output pointer is null");
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// # Safety
/// `out` is null or valid for a write.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Res<()> {
    if out.is_null() {
        return fail(ChtrStatus::NullArg, "output pointer is null");
    }
    *out = CString::new(s).or_else(|_| fail(ChtrStatus::Semantic, "result contains a NUL byte"))?.into_raw();
    Ok(())
}

fn show(v: &Value) -> String {
    match v {
        Value::Str(w) if w.is_empty() => String::new(),
        v => v.to_string(),
    }
}

fn parse_input(codec: &church_transducers::codec::Codec, input: &str) -> Res<Value> {
    church_transducers::cli::parse_value(codec, input).or_else(|e| fail(ChtrStatus::Parse, format!("input: {e}")))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn chtr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn chtr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a machine description.
///
/// # Safety
/// `src` is a NUL-terminated string; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn chtr_machines_parse(src: *const c_char, complete_delta: bool, out: *mut *mut ChtrMachines) -> ChtrStatus {
    guard(|| {
        let src = text(src, "source")?;
        let machines = parse_machines(src, ParseOptions { complete_delta }).or_else(|e| fail(ChtrStatus::Parse, e.to_string()))?;
        put(out, ChtrMachines { machines })
    })
}

/// Number of machines in the handle; 0 for null.
///
/// # Safety
/// `m` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn chtr_machines_count(m: *const ChtrMachines) -> usize {
    m.as_ref().map_or(0, |m| m.machines.len())
}

/// # Safety
/// `m` is null or a handle from [`chtr_machines_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn chtr_machines_free(m: *mut ChtrMachines) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

unsafe fn machine<'a>(m: *const ChtrMachines, index: usize) -> Res<&'a Machine> {
    let m = m.as_ref().ok_or(()).or_else(|_| fail(ChtrStatus::NullArg, "machine handle is null"))?;
    match m.machines.get(index) {
        Some(x) => Ok(x),
        None => fail(ChtrStatus::Semantic, format!("no machine at index {index}")),
    }
}

/// Run machine `index` on `input`; the result is written to `out` (the
/// empty word is the empty string).
///
/// # Safety
/// `m` is a live handle, `input` a NUL-terminated string, `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn chtr_machines_run(m: *const ChtrMachines, index: usize, input: *const c_char, out: *mut *mut c_char) -> ChtrStatus {
    guard(|| {
        let mach = machine(m, index)?;
        let v = parse_input(&input_codec(mach), text(input, "input")?)?;
        let r = run_machine(mach, &v).expect("input parsed with the machine's codec");
        put_string(out, show(&r))
    })
}

/// Compile machine `index`.
///
/// # Safety
/// `m` is a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn chtr_compile(m: *const ChtrMachines, index: usize, target: ChtrTarget, out: *mut *mut ChtrProgram) -> ChtrStatus {
    guard(|| {
        let mach = machine(m, index)?;
        let t = match target {
            ChtrTarget::Stlc => Target::Stlc,
            ChtrTarget::Eal => Target::Eal,
        };
        let program = compile_machine(mach, t).or_else(|e| fail(ChtrStatus::Semantic, e.to_string()))?;
        put(out, ChtrProgram { program })
    })
}

/// Read and re-check a program file.
///
/// # Safety
/// `src` is a NUL-terminated string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn chtr_program_read(src: *const c_char, out: *mut *mut ChtrProgram) -> ChtrStatus {
    guard(|| {
        let program = read_program(text(src, "source")?).or_else(|e| {
            let status = match e {
                ProgramError::Syntax { .. } => ChtrStatus::Parse,
                ProgramError::Check(_) => ChtrStatus::Semantic,
            };
            fail(status, e.to_string())
        })?;
        put(out, ChtrProgram { program })
    })
}

/// Render a program in its file format.
///
/// # Safety
/// `p` is a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn chtr_program_write(p: *const ChtrProgram, out: *mut *mut c_char) -> ChtrStatus {
    guard(|| {
        let p = p.as_ref().ok_or(()).or_else(|_| fail(ChtrStatus::NullArg, "program handle is null"))?;
        put_string(out, write_program(&p.program))
    })
}

/// Normalize the program applied to `input` within `fuel` β-steps and
/// decode the result.
///
/// # Safety
/// `p` is a live handle, `input` a NUL-terminated string, `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn chtr_program_eval(p: *const ChtrProgram, input: *const c_char, fuel: u64, out: *mut *mut c_char) -> ChtrStatus {
    guard(|| {
        let p = p.as_ref().ok_or(()).or_else(|_| fail(ChtrStatus::NullArg, "program handle is null"))?;
        let v = parse_input(p.program.input(), text(input, "input")?)?;
        match eval_program(&p.program, &v, fuel) {
            Ok((r, _)) => put_string(out, show(&r)),
            Err(f @ Failure::FuelExhausted { .. }) => fail(ChtrStatus::Resource, f.to_string()),
            Err(f) => fail(ChtrStatus::Semantic, f.to_string()),
        }
    })
}

/// # Safety
/// `p` is null or a program handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn chtr_program_free(p: *mut ChtrProgram) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}
