//! C ABI over the tower-sbox library.
//!
//! Every fallible call returns a [`TsStatus`]; on failure a message is kept
//! per thread and read with [`ts_last_error`]. Tables are opaque handles
//! released with [`ts_table_free`]; strings returned by the library are
//! released with [`ts_string_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use libc::{c_char, size_t};
use tower_sbox::analysis::{analyze, parse_metrics, AnalysisOptions};
use tower_sbox::lut::{read_lut, write_lut, LutFormat};
use tower_sbox::netlist::{build_block, BlockId};
use tower_sbox::sbox::{builtin, SboxTable, TowerSbox};
use tower_sbox::tower;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Malformed = 4,
    Internal = 5,
}

/// Opaque lookup table.
pub struct TsTable(SboxTable);

/// Gate counts per kind and the symbolic critical path of one block.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TsCensus {
    pub xor_gates: u32,
    pub xnor_gates: u32,
    pub and_gates: u32,
    pub or_gates: u32,
    pub nand_gates: u32,
    pub nor_gates: u32,
    pub not_gates: u32,
    pub cpd_xor: u32,
    pub cpd_nand: u32,
    pub cpd_nor: u32,
    pub cpd_and: u32,
    pub cpd_not: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: TsStatus, msg: impl Into<String>) -> TsStatus {
    set_error(msg);
    status
}

/// Runs `f`, mapping panics to [`TsStatus::Internal`].
fn guard(f: impl FnOnce() -> TsStatus) -> TsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == TsStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(TsStatus::Internal, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, TsStatus> {
    if p.is_null() {
        return Err(fail(TsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(TsStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Message for the last failed call on this thread; empty after success.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ts_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The S-box applied to one word.
#[no_mangle]
pub extern "C" fn ts_sbox_forward(x: u16) -> u16 {
    TowerSbox::shipped().forward(x)
}

#[no_mangle]
pub extern "C" fn ts_sbox_inverse(y: u16) -> u16 {
    TowerSbox::shipped().inverse(y)
}

/// Tower-field product of two 16-bit words.
#[no_mangle]
pub extern "C" fn ts_mul16(a: u16, b: u16) -> u16 {
    tower::mul16(a, b)
}

/// Tower-field inverse; 0 maps to 0.
#[no_mangle]
pub extern "C" fn ts_inv16(a: u16) -> u16 {
    tower::inv16(a)
}

/// Creates a builtin table: proposed, proposed_inv, identity, gold16_K or
/// kasami16_K.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_table_builtin(name: *const c_char, out: *mut *mut TsTable) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return fail(TsStatus::NullPointer, "out is null");
        }
        let name = match str_arg(name, "name") {
            Ok(n) => n,
            Err(s) => return s,
        };
        match builtin(name) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(TsTable(t)));
                TsStatus::Ok
            }
            Err(e) => fail(TsStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Loads a LUT file (`.csv` is CSV, anything else binary).
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_table_load(path: *const c_char, out: *mut *mut TsTable) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return fail(TsStatus::NullPointer, "out is null");
        }
        let path = match str_arg(path, "path") {
            Ok(p) => p,
            Err(s) => return s,
        };
        match read_lut(Path::new(path)) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(TsTable(t)));
                TsStatus::Ok
            }
            Err(e @ tower_sbox::lut::LutError::Io { .. }) => fail(TsStatus::Io, e.to_string()),
            Err(e) => fail(TsStatus::Malformed, e.to_string()),
        }
    })
}

/// # Safety
/// `t` must come from this library and not be used afterwards; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn ts_table_free(t: *mut TsTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of entries.
///
/// # Safety
/// `t` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn ts_table_len(t: *const TsTable) -> size_t {
    t.as_ref().map_or(0, |t| t.0.len())
}

/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_table_get(t: *const TsTable, x: u32, out: *mut u16) -> TsStatus {
    guard(|| {
        let (Some(t), false) = (t.as_ref(), out.is_null()) else {
            return fail(TsStatus::NullPointer, "null argument");
        };
        if x as usize >= t.0.len() {
            return fail(TsStatus::InvalidArgument, format!("index {x} out of range"));
        }
        *out = t.0.get(x as usize);
        TsStatus::Ok
    })
}

/// SHA-256 of the little-endian table bytes as a hex string; free with
/// [`ts_string_free`].
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_table_sha256(t: *const TsTable, out: *mut *mut c_char) -> TsStatus {
    guard(|| {
        let (Some(t), false) = (t.as_ref(), out.is_null()) else {
            return fail(TsStatus::NullPointer, "null argument");
        };
        *out = CString::new(t.0.sha256_hex())
            .expect("hex has no NUL")
            .into_raw();
        TsStatus::Ok
    })
}

/// Writes the table atomically; `csv` selects CSV over binary.
///
/// # Safety
/// `t` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ts_table_write(
    t: *const TsTable,
    path: *const c_char,
    csv: bool,
) -> TsStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            return fail(TsStatus::NullPointer, "table is null");
        };
        let path = match str_arg(path, "path") {
            Ok(p) => p,
            Err(s) => return s,
        };
        let format = if csv { LutFormat::Csv } else { LutFormat::Bin };
        match write_lut(&t.0, Path::new(path), format) {
            Ok(()) => TsStatus::Ok,
            Err(e) => fail(TsStatus::Io, format!("{path}: {e}")),
        }
    })
}

/// Runs the metric suite and returns the JSON report; free with
/// [`ts_string_free`]. `metrics` is a comma-separated list or null for
/// all; `workers` 0 means the available parallelism.
///
/// # Safety
/// `t` must be a live handle, `metrics` null or NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ts_analyze(
    t: *const TsTable,
    metrics: *const c_char,
    workers: u32,
    out: *mut *mut c_char,
) -> TsStatus {
    guard(|| {
        let (Some(t), false) = (t.as_ref(), out.is_null()) else {
            return fail(TsStatus::NullPointer, "null argument");
        };
        let mut opts = AnalysisOptions::default();
        if !metrics.is_null() {
            let spec = match str_arg(metrics, "metrics") {
                Ok(s) => s,
                Err(s) => return s,
            };
            match parse_metrics(spec) {
                Ok(m) if !m.is_empty() => opts.metrics = m,
                Ok(_) => {}
                Err(e) => return fail(TsStatus::InvalidArgument, e.to_string()),
            }
        }
        if workers > 0 {
            opts.workers = workers as usize;
        }
        match analyze(&t.0, &opts, None) {
            Ok(r) => {
                *out = CString::new(r.to_json())
                    .expect("JSON has no NUL")
                    .into_raw();
                TsStatus::Ok
            }
            Err(e) => fail(TsStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn ts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Gate census and critical path of a catalog block such as "I16" or
/// "SCALE8_MU".
///
/// # Safety
/// `block` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_netlist_census(block: *const c_char, out: *mut TsCensus) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return fail(TsStatus::NullPointer, "out is null");
        }
        let name = match str_arg(block, "block") {
            Ok(n) => n,
            Err(s) => return s,
        };
        let id: BlockId = match name.parse() {
            Ok(id) => id,
            Err(e) => return fail(TsStatus::InvalidArgument, format!("{e}")),
        };
        let n = build_block(id);
        let c = n.census();
        let p = n.critical_path();
        *out = TsCensus {
            xor_gates: c.xor,
            xnor_gates: c.xnor,
            and_gates: c.and,
            or_gates: c.or,
            nand_gates: c.nand,
            nor_gates: c.nor,
            not_gates: c.not,
            cpd_xor: p.x,
            cpd_nand: p.na,
            cpd_nor: p.no,
            cpd_and: p.a,
            cpd_not: p.n,
        };
        TsStatus::Ok
    })
}
