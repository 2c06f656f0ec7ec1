//! C interface to `composition-codec`.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `*_free` function. Every fallible call returns a
//! [`CcStatus`]; on failure [`cc_last_error_message`] describes the cause
//! until the next call on the same thread. Strings returned through out
//! pointers are NUL-terminated and must be released with [`cc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use composition_codec::channel::random_error;
use composition_codec::format::{parse_any, to_json, to_text};
use composition_codec::{
    decode_c, decode_r, fragment, params_c, params_r, BinaryString, CodeParamsC, CodeParamsR,
    CompositionMultiset, Error,
};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidString = 3,
    InvalidMessage = 4,
    InvalidMultiset = 5,
    MalformedInput = 6,
    InconsistentWeights = 7,
    CapacityExceeded = 8,
    NotACodeword = 9,
    TooLarge = 10,
    Uncorrectable = 11,
    AmbiguousDecode = 12,
    InvalidError = 13,
    Internal = 14,
}

impl From<&Error> for CcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidString(_) => CcStatus::InvalidString,
            Error::InvalidMessage(_) => CcStatus::InvalidMessage,
            Error::InvalidMultiset(_) | Error::DimensionMismatch { .. } => {
                CcStatus::InvalidMultiset
            }
            Error::MalformedInput { .. } => CcStatus::MalformedInput,
            Error::SymmetryViolation { .. }
            | Error::SigmaOutOfRange { .. }
            | Error::InconsistentMultiset(_) => CcStatus::InconsistentWeights,
            Error::CapacityExceeded | Error::RankOutOfRange { .. } => CcStatus::CapacityExceeded,
            Error::NotACodeword(_) | Error::InvalidSequence { .. } => CcStatus::NotACodeword,
            Error::TooLarge { .. } => CcStatus::TooLarge,
            Error::Uncorrectable(_) => CcStatus::Uncorrectable,
            Error::AmbiguousDecode(_) => CcStatus::AmbiguousDecode,
            Error::InvalidError(_) | Error::NoAdmissibleError => CcStatus::InvalidError,
            Error::NoValidPadding => CcStatus::Internal,
        }
    }
}

enum Params {
    Reconstruction(CodeParamsR),
    Correcting(CodeParamsC),
}

/// Code parameters for one message length.
pub struct CcCodec {
    params: Params,
}

/// A composition multiset.
pub struct CcMultiset {
    inner: CompositionMultiset,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(CcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(CcStatus::from(&e), e.to_string())
    }
}

/// Runs `f`, recording any failure or panic for [`cc_last_error_message`].
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CcStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CcStatus::Internal
        }
    }
}

fn null() -> Fail {
    Fail(CcStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(CcStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn out_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(CcStatus::Internal, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

/// Message of the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn cc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a codec for `k`-bit messages; `ecc` selects the single error correcting code.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cc_codec_new(k: usize, ecc: bool, out: *mut *mut CcCodec) -> CcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let params = if ecc {
            Params::Correcting(params_c(k)?)
        } else {
            Params::Reconstruction(params_r(k)?)
        };
        *out = Box::into_raw(Box::new(CcCodec { params }));
        Ok(())
    })
}

/// # Safety
/// `codec` must come from [`cc_codec_new`] and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn cc_codec_free(codec: *mut CcCodec) {
    if !codec.is_null() {
        drop(Box::from_raw(codec));
    }
}

/// Codeword length, or 0 for NULL.
///
/// # Safety
/// `codec` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_codec_length(codec: *const CcCodec) -> usize {
    match codec.as_ref().map(|c| &c.params) {
        Some(Params::Reconstruction(p)) => p.n,
        Some(Params::Correcting(p)) => p.n,
        None => 0,
    }
}

/// Encodes a message given as `0`/`1` characters.
///
/// # Safety
/// `codec` must be a live handle, `message` a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cc_codec_encode(
    codec: *const CcCodec,
    message: *const c_char,
    out: *mut *mut c_char,
) -> CcStatus {
    guard(|| {
        let codec = handle(codec)?;
        let m: BinaryString = read_str(message)?.parse()?;
        if out.is_null() {
            return Err(null());
        }
        let c = match &codec.params {
            Params::Reconstruction(p) => p.encode(&m)?,
            Params::Correcting(p) => p.encode(&m)?,
        };
        out_string(out, c.to_string())
    })
}

/// Decodes a multiset. `corrected_class` receives the repaired class, or 0
/// when no error was found; it may be NULL.
///
/// # Safety
/// Handles must be live, `out` valid for writes, `corrected_class` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cc_codec_decode(
    codec: *const CcCodec,
    multiset: *const CcMultiset,
    out: *mut *mut c_char,
    corrected_class: *mut usize,
) -> CcStatus {
    guard(|| {
        let codec = handle(codec)?;
        let c = &handle(multiset)?.inner;
        if out.is_null() {
            return Err(null());
        }
        let (message, class) = match &codec.params {
            Params::Reconstruction(p) => (decode_r(p, c)?, 0),
            Params::Correcting(p) => {
                let o = decode_c(p, c)?;
                (o.message, o.correction.map_or(0, |x| x.class))
            }
        };
        if !corrected_class.is_null() {
            *corrected_class = class;
        }
        out_string(out, message.to_string())
    })
}

/// Composition multiset of a `0`/`1` string.
///
/// # Safety
/// `s` must be NUL-terminated and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cc_fragment(s: *const c_char, out: *mut *mut CcMultiset) -> CcStatus {
    guard(|| {
        let s: BinaryString = read_str(s)?.parse()?;
        if out.is_null() {
            return Err(null());
        }
        *out = Box::into_raw(Box::new(CcMultiset {
            inner: fragment(&s),
        }));
        Ok(())
    })
}

/// Parses the canonical text or JSON form and checks class sizes.
///
/// # Safety
/// `text` must be NUL-terminated and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cc_multiset_parse(
    text: *const c_char,
    out: *mut *mut CcMultiset,
) -> CcStatus {
    guard(|| {
        let inner = parse_any(read_str(text)?)?;
        inner.validate()?;
        if out.is_null() {
            return Err(null());
        }
        *out = Box::into_raw(Box::new(CcMultiset { inner }));
        Ok(())
    })
}

/// Serializes to the canonical text form, or JSON when `json` is set.
///
/// # Safety
/// `multiset` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cc_multiset_serialize(
    multiset: *const CcMultiset,
    json: bool,
    out: *mut *mut c_char,
) -> CcStatus {
    guard(|| {
        let c = &handle(multiset)?.inner;
        if out.is_null() {
            return Err(null());
        }
        out_string(out, if json { to_json(c) } else { to_text(c) })
    })
}

/// Replaces `multiset` with a copy carrying one random composition error.
///
/// # Safety
/// `multiset` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cc_multiset_corrupt(multiset: *mut CcMultiset, seed: u64) -> CcStatus {
    guard(|| {
        let m = multiset.as_mut().ok_or_else(null)?;
        let (_, corrupted) = random_error(&m.inner, seed)?;
        m.inner = corrupted;
        Ok(())
    })
}

/// # Safety
/// `multiset` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn cc_multiset_free(multiset: *mut CcMultiset) {
    if !multiset.is_null() {
        drop(Box::from_raw(multiset));
    }
}

/// # Safety
/// `s` must be a string returned by this library, or NULL.
#[no_mangle]
pub unsafe extern "C" fn cc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
