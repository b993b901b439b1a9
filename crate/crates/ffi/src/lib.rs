//! C ABI over the `qftatlas` generator and verifier.
//!
//! Circuits cross the boundary as opaque [`QftCircuit`] handles. Every call
//! returns a [`QftStatus`]; on failure [`qft_last_error`] describes what went
//! wrong on the calling thread. Strings handed out by this library must be
//! released with [`qft_string_free`], circuits with [`qft_circuit_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qftatlas::bench::generate;
use qftatlas::circuit::{export_json, export_qasm, import_json};
use qftatlas::faults::FaultModel;
use qftatlas::topology::build_architecture;
use qftatlas::verify::verify;
use qftatlas::{ArchKind, Mode, ScheduledCircuit};

/// Opaque scheduled circuit.
pub struct QftCircuit {
    inner: ScheduledCircuit,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QftStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The generator rejected the request (bad size, unsupported fault set).
    GenerationFailed = 3,
    /// Circuit JSON could not be parsed.
    ParseFailed = 4,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QftArch {
    Lnn = 0,
    Grid = 1,
    Sycamore = 2,
    HeavyHex = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QftMode {
    Strict = 0,
    Relaxed = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QftMetrics {
    pub depth: usize,
    pub two_qubit_depth: usize,
    pub swap_count: usize,
    pub cphase_count: usize,
    pub h_count: usize,
    pub logical_qubits: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("nul bytes removed"));
}

fn fail(status: QftStatus, msg: impl Into<String>) -> QftStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> QftStatus) -> QftStatus {
    set_error("");
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(QftStatus::Internal, "panic inside qftatlas"))
}

impl From<QftArch> for ArchKind {
    fn from(a: QftArch) -> ArchKind {
        match a {
            QftArch::Lnn => ArchKind::Lnn,
            QftArch::Grid => ArchKind::Grid,
            QftArch::Sycamore => ArchKind::Sycamore,
            QftArch::HeavyHex => ArchKind::HeavyHex,
        }
    }
}

impl From<QftMode> for Mode {
    fn from(m: QftMode) -> Mode {
        match m {
            QftMode::Strict => Mode::Strict,
            QftMode::Relaxed => Mode::Relaxed,
        }
    }
}

fn hand_out(s: String, out: *mut *mut c_char) -> QftStatus {
    match CString::new(s) {
        Ok(c) => {
            // SAFETY: callers checked `out` for null.
            unsafe { *out = c.into_raw() };
            QftStatus::Ok
        }
        Err(_) => fail(QftStatus::Internal, "output contained a nul byte"),
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the
/// same thread and must not be freed.
#[no_mangle]
pub extern "C" fn qft_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn qft_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Generates a QFT schedule.
///
/// `size` is the line length for LNN, the side length for grid and
/// sycamore, and the qubit count for heavy-hex. `faulty` may be null when
/// `faulty_len` is zero.
///
/// # Safety
///
/// `faulty` must point to `faulty_len` readable `size_t` values unless
/// `faulty_len` is zero. `out` must be a valid pointer to writable storage
/// for one handle. On success `*out` owns a circuit to be released with
/// [`qft_circuit_free`].
#[no_mangle]
pub unsafe extern "C" fn qft_generate(
    arch: QftArch,
    size: usize,
    mode: QftMode,
    faulty: *const usize,
    faulty_len: usize,
    out: *mut *mut QftCircuit,
) -> QftStatus {
    guard(|| {
        if out.is_null() || (faulty.is_null() && faulty_len > 0) {
            return fail(QftStatus::NullPointer, "null pointer argument");
        }
        let faults: &[usize] = if faulty_len == 0 { &[] } else { std::slice::from_raw_parts(faulty, faulty_len) };
        match generate(arch.into(), size, mode.into(), &FaultModel::new(faults.iter().copied())) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(QftCircuit { inner }));
                QftStatus::Ok
            }
            Err(e) => fail(QftStatus::GenerationFailed, e.to_string()),
        }
    })
}

/// Parses a circuit from its JSON form.
///
/// # Safety
///
/// `json` must be a valid nul-terminated string and `out` a valid pointer
/// to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qft_circuit_from_json(json: *const c_char, out: *mut *mut QftCircuit) -> QftStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(QftStatus::NullPointer, "null pointer argument");
        }
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(e) => return fail(QftStatus::InvalidUtf8, e.to_string()),
        };
        match import_json(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(QftCircuit { inner }));
                QftStatus::Ok
            }
            Err(e) => fail(QftStatus::ParseFailed, e.to_string()),
        }
    })
}

unsafe fn render(circuit: *const QftCircuit, out: *mut *mut c_char, f: fn(&ScheduledCircuit) -> String) -> QftStatus {
    guard(|| {
        if circuit.is_null() || out.is_null() {
            return fail(QftStatus::NullPointer, "null pointer argument");
        }
        hand_out(f(&(*circuit).inner), out)
    })
}

/// Serializes a circuit to deterministic JSON.
///
/// # Safety
///
/// `circuit` must be a live handle from this library and `out` a valid
/// pointer. On success `*out` must be released with [`qft_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qft_circuit_to_json(circuit: *const QftCircuit, out: *mut *mut c_char) -> QftStatus {
    render(circuit, out, export_json)
}

/// Serializes a circuit to OpenQASM 2.0.
///
/// # Safety
///
/// Same contract as [`qft_circuit_to_json`].
#[no_mangle]
pub unsafe extern "C" fn qft_circuit_to_qasm(circuit: *const QftCircuit, out: *mut *mut c_char) -> QftStatus {
    render(circuit, out, export_qasm)
}

/// Depth and gate counts of a circuit.
///
/// # Safety
///
/// `circuit` must be a live handle and `out` a valid pointer to a
/// [`QftMetrics`].
#[no_mangle]
pub unsafe extern "C" fn qft_circuit_metrics(circuit: *const QftCircuit, out: *mut QftMetrics) -> QftStatus {
    guard(|| {
        if circuit.is_null() || out.is_null() {
            return fail(QftStatus::NullPointer, "null pointer argument");
        }
        let c = &(*circuit).inner;
        let m = c.metrics();
        *out = QftMetrics {
            depth: m.depth,
            two_qubit_depth: m.two_qubit_depth,
            swap_count: m.swap_count,
            cphase_count: m.cphase_count,
            h_count: m.h_count,
            logical_qubits: c.logical_count(),
        };
        QftStatus::Ok
    })
}

/// Verifies a circuit against its own architecture under `mode`.
///
/// `*ok` receives the verdict. When `report_json` is non-null it receives
/// the full JSON report, to be released with [`qft_string_free`].
///
/// # Safety
///
/// `circuit` must be a live handle, `ok` a valid pointer, and
/// `report_json` either null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qft_circuit_verify(
    circuit: *const QftCircuit,
    mode: QftMode,
    ok: *mut bool,
    report_json: *mut *mut c_char,
) -> QftStatus {
    guard(|| {
        if circuit.is_null() || ok.is_null() {
            return fail(QftStatus::NullPointer, "null pointer argument");
        }
        let c = &(*circuit).inner;
        let graph = match build_architecture(c.arch.kind, c.arch.size) {
            Ok(g) => g,
            Err(e) => return fail(QftStatus::InvalidArgument, e.to_string()),
        };
        let report = verify(c, &graph, mode.into(), None);
        *ok = report.ok;
        if report_json.is_null() {
            QftStatus::Ok
        } else {
            hand_out(report.to_json(), report_json)
        }
    })
}

/// Releases a circuit. Null is ignored.
///
/// # Safety
///
/// `circuit` must be null or a handle from this library that has not been
/// freed yet.
#[no_mangle]
pub unsafe extern "C" fn qft_circuit_free(circuit: *mut QftCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
///
/// `s` must be null or a string from this library that has not been freed
/// yet.
#[no_mangle]
pub unsafe extern "C" fn qft_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
