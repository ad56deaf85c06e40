//! Status codes and the thread-local last-error message.

use std::cell::RefCell;
use std::ffi::c_char;

use reanneal_core::Error;

/// Result of every fallible call. `RQ_STATUS_OK` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    InvalidParameter = 3,
    InsufficientData = 4,
    NonFinite = 5,
    ContractViolation = 6,
    ZeroGap = 7,
    Checkpoint = 8,
    Config = 9,
    Aborted = 10,
    Io = 11,
    BufferTooSmall = 12,
    Utf8 = 13,
    Panic = 14,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

pub(crate) fn set_last_error(message: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
}

pub(crate) fn clear_last_error() {
    LAST_ERROR.with(|e| e.borrow_mut().clear());
}

impl From<&Error> for RqStatus {
    fn from(err: &Error) -> Self {
        match err {
            Error::InvalidInput(_) => RqStatus::InvalidInput,
            Error::InvalidParameter(_) => RqStatus::InvalidParameter,
            Error::InsufficientData { .. } => RqStatus::InsufficientData,
            Error::NonFinite(_) => RqStatus::NonFinite,
            Error::ContractViolation(_) => RqStatus::ContractViolation,
            Error::ZeroGap => RqStatus::ZeroGap,
            Error::Checkpoint(_) => RqStatus::Checkpoint,
            Error::Config { .. } => RqStatus::Config,
            Error::Aborted { .. } => RqStatus::Aborted,
            Error::Io { .. } => RqStatus::Io,
        }
    }
}

/// Records `err` as the last error and returns its status code.
pub(crate) fn fail(status: RqStatus, message: impl Into<String>) -> RqStatus {
    set_last_error(message);
    status
}

pub(crate) fn from_error(err: Error) -> RqStatus {
    let status = RqStatus::from(&err);
    fail(status, err.to_string())
}

/// Copies the calling thread's last error message into `buf` as a
/// NUL-terminated string, truncating to `len - 1` bytes.
///
/// Returns the full message length in bytes, excluding the terminator, so a
/// caller can retry with a larger buffer. Passing a null `buf` only queries
/// the length.
///
/// # Safety
/// `buf` must be null or valid for `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn rq_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            // SAFETY: caller guarantees `len` writable bytes at `buf`.
            unsafe {
                std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}
