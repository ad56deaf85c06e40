//! C ABI over `reanneal-core`.
//!
//! Every fallible function returns an [`RqStatus`]; on failure the message is
//! available from [`rq_last_error_message`] on the same thread. Handles are
//! opaque and must be released with their matching `_free` function.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

mod error;
mod handles;

pub use error::{rq_last_error_message, RqStatus};
pub use handles::*;

use error::{clear_last_error, fail, from_error};

/// Runs `f`, mapping core errors and panics onto status codes.
pub(crate) fn guard<F>(f: F) -> RqStatus
where
    F: FnOnce() -> Result<(), RqStatus>,
{
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RqStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            fail(RqStatus::Panic, msg)
        }
    }
}

pub(crate) trait OrStatus<T> {
    fn or_status(self) -> Result<T, RqStatus>;
}

impl<T> OrStatus<T> for reanneal_core::Result<T> {
    fn or_status(self) -> Result<T, RqStatus> {
        self.map_err(from_error)
    }
}

pub(crate) fn non_null<T>(ptr: *const T, what: &str) -> Result<(), RqStatus> {
    if ptr.is_null() {
        Err(fail(RqStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `ptr` must be null or valid for `len` reads of `T`.
pub(crate) unsafe fn slice<'a, T>(
    ptr: *const T,
    len: usize,
    what: &str,
) -> Result<&'a [T], RqStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(ptr, what)?;
    // SAFETY: non-null and the caller vouches for `len` elements.
    Ok(unsafe { std::slice::from_raw_parts(ptr, len) })
}

/// # Safety
/// `ptr` must be null or valid for `len` writes of `T`.
pub(crate) unsafe fn slice_mut<'a, T>(
    ptr: *mut T,
    len: usize,
    what: &str,
) -> Result<&'a mut [T], RqStatus> {
    if len == 0 {
        return Ok(&mut []);
    }
    non_null(ptr, what)?;
    // SAFETY: non-null and the caller vouches for `len` elements.
    Ok(unsafe { std::slice::from_raw_parts_mut(ptr, len) })
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
pub(crate) unsafe fn str_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, RqStatus> {
    non_null(ptr, what)?;
    // SAFETY: checked non-null; caller guarantees termination.
    unsafe { CStr::from_ptr(ptr) }
        .to_str()
        .map_err(|e| fail(RqStatus::Utf8, format!("{what}: {e}")))
}

/// # Safety
/// Same as [`str_arg`].
pub(crate) unsafe fn path_arg(ptr: *const c_char, what: &str) -> Result<PathBuf, RqStatus> {
    // SAFETY: forwarded caller contract.
    unsafe { str_arg(ptr, what) }.map(PathBuf::from)
}

pub(crate) fn copy_out(src: &[f64], dst: &mut [f64]) -> Result<(), RqStatus> {
    if dst.len() < src.len() {
        return Err(fail(
            RqStatus::BufferTooSmall,
            format!(
                "output buffer holds {} values, {} needed",
                dst.len(),
                src.len()
            ),
        ));
    }
    dst[..src.len()].copy_from_slice(src);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Pseudo-Huber loss `κ²(√(1 + (δ/κ)²) − 1)`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn rq_huber_loss(td_error: f64, kappa: f64, out: *mut f64) -> RqStatus {
    guard(|| {
        non_null(out, "out")?;
        let v = reanneal_core::mlp::huber_loss(td_error, kappa).or_status()?;
        // SAFETY: checked non-null.
        unsafe { *out = v };
        Ok(())
    })
}

/// Optimal undiscounted and discounted returns of HoverTrap from its start
/// state, by value iteration to tolerance `tol`.
///
/// # Safety
/// `undiscounted`, `discounted` and `steps` must each be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn rq_hovertrap_optimum(
    gamma: f64,
    tol: f64,
    undiscounted: *mut f64,
    discounted: *mut f64,
    steps: *mut usize,
) -> RqStatus {
    guard(|| {
        non_null(undiscounted, "undiscounted")?;
        non_null(discounted, "discounted")?;
        non_null(steps, "steps")?;
        let table = reanneal_core::envs::value_iteration_oracle(gamma, tol).or_status()?;
        let (u, d, n) = table.greedy_rollout();
        // SAFETY: all three checked non-null.
        unsafe {
            *undiscounted = u;
            *discounted = d;
            *steps = n;
        }
        Ok(())
    })
}
