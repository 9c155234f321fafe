//! C ABI for the interpolated receiver library.
//!
//! Fallible functions return an `IfirStatus`. Objects are opaque handles
//! created by `*_new`/`*_run` functions and released with the matching
//! `*_free`. After a failure, `ifir_last_error` describes the most recent
//! error on the calling thread. Complex vectors are passed as interleaved
//! `(re, im)` pairs of `double`.

use ifir_core::adaptive::Reference;
use ifir_core::analysis::{complexity_count, Algorithm, ComplexityParams};
use ifir_core::harness::receivers::DynReceiver;
use ifir_core::harness::{
    build_receiver, export_campaign, run_campaign, Campaign, Format, ScenarioConfig,
};
use ifir_core::linalg::{CVector, C64};
use ifir_core::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IfirStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidParameter = 3,
    DimensionMismatch = 4,
    Singular = 5,
    Unstable = 6,
    Config = 7,
    Io = 8,
    Serialization = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Output file format for `ifir_campaign_export`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IfirFormat {
    Csv = 0,
    Json = 1,
}

/// Per-symbol metric selected by `ifir_campaign_series`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IfirMetric {
    Mse = 0,
    SinrDb = 1,
    Ber = 2,
}

/// Rows of the operation-count tables.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IfirAlgorithm {
    LmsFull = 0,
    LmsInt = 1,
    LmsPd = 2,
    RlsFull = 3,
    RlsInt = 4,
    RlsPd = 5,
    CmvSgFull = 6,
    CmvSgInt = 7,
    CmvRlsFull = 8,
    CmvRlsInt = 9,
}

/// Campaign summary.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IfirSummary {
    pub runs: usize,
    pub final_mse: f64,
    pub final_sinr_db: f64,
    pub sinr_std_err: f64,
    pub ber: f64,
}

/// Opaque scenario configuration.
pub struct IfirConfig(ScenarioConfig);

/// Opaque Monte-Carlo campaign result.
pub struct IfirCampaign(Campaign);

/// Opaque adaptive receiver for user 0 of a configuration.
pub struct IfirReceiver {
    inner: DynReceiver,
    m: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(IfirStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidParameter(_) => IfirStatus::InvalidParameter,
            Error::DimensionMismatch { .. } => IfirStatus::DimensionMismatch,
            Error::Singular(_) => IfirStatus::Singular,
            Error::Unstable(_) => IfirStatus::Unstable,
            Error::Config(_) => IfirStatus::Config,
            Error::Write { .. } | Error::Io(_) => IfirStatus::Io,
            Error::Json(_) | Error::Csv(_) => IfirStatus::Serialization,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: IfirStatus, msg: &str) -> Failure {
    Failure(status, msg.to_owned())
}

/// Runs `f`, records any error message and converts panics to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> IfirStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IfirStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside the library".into());
            IfirStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(IfirStatus::NullPointer, "null handle"))
}

unsafe fn borrow_mut<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| fail(IfirStatus::NullPointer, "null pointer"))
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(IfirStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(IfirStatus::InvalidUtf8, "string is not valid UTF-8"))
}

unsafe fn complex_slice(p: *const f64, len: usize) -> Result<CVector, Failure> {
    if p.is_null() {
        return Err(fail(IfirStatus::NullPointer, "null vector"));
    }
    let raw = std::slice::from_raw_parts(p, 2 * len);
    Ok(CVector::from_iterator(
        len,
        raw.chunks_exact(2).map(|c| C64::new(c[0], c[1])),
    ))
}

/// Copies the last error message of this thread into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length
/// excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ifir_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Default configuration.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn ifir_config_default(out: *mut *mut IfirConfig) -> IfirStatus {
    guard(|| {
        let slot = borrow_mut(out)?;
        *slot = Box::into_raw(Box::new(IfirConfig(ScenarioConfig::default())));
        Ok(())
    })
}

/// Parses and validates a JSON configuration; missing fields take defaults.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn ifir_config_from_json(
    json: *const c_char,
    out: *mut *mut IfirConfig,
) -> IfirStatus {
    guard(|| {
        let slot = borrow_mut(out)?;
        let cfg = ScenarioConfig::from_json(c_str(json)?)?;
        *slot = Box::into_raw(Box::new(IfirConfig(cfg)));
        Ok(())
    })
}

/// Overrides the seed, run count and symbol count; zero keeps a value.
///
/// # Safety
/// `cfg` must be a handle from `ifir_config_*`.
#[no_mangle]
pub unsafe extern "C" fn ifir_config_set_run(
    cfg: *mut IfirConfig,
    seed: u64,
    runs: usize,
    symbols: usize,
) -> IfirStatus {
    guard(|| {
        let c = &mut borrow_mut(cfg)?.0;
        let mut next = c.clone();
        if seed != 0 {
            next.seed = seed;
        }
        if runs != 0 {
            next.runs = runs;
        }
        if symbols != 0 {
            next.symbols = symbols;
        }
        next.validate()?;
        *c = next;
        Ok(())
    })
}

/// Observation length `M` of a configuration.
///
/// # Safety
/// `cfg` must be a handle from `ifir_config_*`; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ifir_config_observation_len(
    cfg: *const IfirConfig,
    out: *mut usize,
) -> IfirStatus {
    guard(|| {
        *borrow_mut(out)? = borrow(cfg)?.0.m();
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a handle from `ifir_config_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ifir_config_free(cfg: *mut IfirConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Runs the Monte-Carlo campaign described by `cfg`.
///
/// # Safety
/// `cfg` must be a valid handle and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn ifir_campaign_run(
    cfg: *const IfirConfig,
    out: *mut *mut IfirCampaign,
) -> IfirStatus {
    guard(|| {
        let c = borrow(cfg)?;
        let slot = borrow_mut(out)?;
        *slot = Box::into_raw(Box::new(IfirCampaign(run_campaign(&c.0)?)));
        Ok(())
    })
}

/// # Safety
/// `campaign` must be a valid handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ifir_campaign_summary(
    campaign: *const IfirCampaign,
    out: *mut IfirSummary,
) -> IfirStatus {
    guard(|| {
        let s = borrow(campaign)?.0.mean.summary;
        *borrow_mut(out)? = IfirSummary {
            runs: s.runs,
            final_mse: s.final_mse,
            final_sinr_db: s.final_sinr_db,
            sinr_std_err: s.sinr_std_err,
            ber: s.ber,
        };
        Ok(())
    })
}

/// Number of symbols in the averaged series.
///
/// # Safety
/// `campaign` must be a valid handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ifir_campaign_len(
    campaign: *const IfirCampaign,
    out: *mut usize,
) -> IfirStatus {
    guard(|| {
        *borrow_mut(out)? = borrow(campaign)?.0.mean.len();
        Ok(())
    })
}

/// Copies the averaged per-symbol `metric` into `buf`, which must hold at
/// least `ifir_campaign_len` values.
///
/// # Safety
/// `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ifir_campaign_series(
    campaign: *const IfirCampaign,
    metric: IfirMetric,
    buf: *mut f64,
    len: usize,
) -> IfirStatus {
    guard(|| {
        let mean = &borrow(campaign)?.0.mean;
        let src = match metric {
            IfirMetric::Mse => &mean.mse,
            IfirMetric::SinrDb => &mean.sinr_db,
            IfirMetric::Ber => &mean.ber,
        };
        if buf.is_null() {
            return Err(fail(IfirStatus::NullPointer, "null buffer"));
        }
        if len < src.len() {
            return Err(Failure(
                IfirStatus::BufferTooSmall,
                format!("buffer holds {len} values, series has {}", src.len()),
            ));
        }
        std::ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
        Ok(())
    })
}

/// Writes the averaged series to `path`.
///
/// # Safety
/// Handles must be valid and `path` NUL terminated.
#[no_mangle]
pub unsafe extern "C" fn ifir_campaign_export(
    campaign: *const IfirCampaign,
    cfg: *const IfirConfig,
    path: *const c_char,
    format: IfirFormat,
) -> IfirStatus {
    guard(|| {
        let format = match format {
            IfirFormat::Csv => Format::Csv,
            IfirFormat::Json => Format::Json,
        };
        export_campaign(
            &borrow(campaign)?.0,
            &borrow(cfg)?.0,
            Path::new(c_str(path)?),
            format,
        )?;
        Ok(())
    })
}

/// # Safety
/// `campaign` must be null or a handle from `ifir_campaign_run` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ifir_campaign_free(campaign: *mut IfirCampaign) {
    if !campaign.is_null() {
        drop(Box::from_raw(campaign));
    }
}

/// Builds the configured receiver for a user with spreading code `code`
/// (`code_len` complex chips, equal to the configured spreading gain).
///
/// # Safety
/// `code` must point to `2 * code_len` doubles and `out` be a valid slot.
#[no_mangle]
pub unsafe extern "C" fn ifir_receiver_new(
    cfg: *const IfirConfig,
    code: *const f64,
    code_len: usize,
    out: *mut *mut IfirReceiver,
) -> IfirStatus {
    guard(|| {
        let c = &borrow(cfg)?.0;
        let slot = borrow_mut(out)?;
        if code_len != c.n {
            return Err(Failure(
                IfirStatus::DimensionMismatch,
                format!("code has {code_len} chips, configuration expects {}", c.n),
            ));
        }
        let code = complex_slice(code, code_len)?;
        let inner = build_receiver(c, &code)?;
        *slot = Box::into_raw(Box::new(IfirReceiver { inner, m: c.m() }));
        Ok(())
    })
}

unsafe fn observation(rx: &IfirReceiver, r: *const f64, r_len: usize) -> Result<CVector, Failure> {
    if r_len != rx.m {
        return Err(Failure(
            IfirStatus::DimensionMismatch,
            format!("observation has {r_len} samples, receiver expects {}", rx.m),
        ));
    }
    complex_slice(r, r_len)
}

/// Adapts on the received vector `r` (`r_len = M` complex samples). With
/// `trained != 0` the update uses the known `symbol`, otherwise it is blind.
/// The pre-update output is written to `out` as `(re, im)`.
///
/// # Safety
/// `r` must point to `2 * r_len` doubles and `out` to two writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ifir_receiver_update(
    rx: *mut IfirReceiver,
    r: *const f64,
    r_len: usize,
    trained: i32,
    symbol: f64,
    out: *mut f64,
) -> IfirStatus {
    guard(|| {
        let rx = borrow_mut(rx)?;
        let r = observation(rx, r, r_len)?;
        if out.is_null() {
            return Err(fail(IfirStatus::NullPointer, "null output"));
        }
        let reference = if trained != 0 {
            Reference::Symbol(symbol)
        } else {
            Reference::Blind
        };
        let x = rx.inner.update(&r, reference);
        *out = x.re;
        *out.add(1) = x.im;
        Ok(())
    })
}

/// Output of the current receiver for `r` without adapting.
///
/// # Safety
/// As for `ifir_receiver_update`.
#[no_mangle]
pub unsafe extern "C" fn ifir_receiver_output(
    rx: *const IfirReceiver,
    r: *const f64,
    r_len: usize,
    out: *mut f64,
) -> IfirStatus {
    guard(|| {
        let rx = borrow(rx)?;
        let r = observation(rx, r, r_len)?;
        if out.is_null() {
            return Err(fail(IfirStatus::NullPointer, "null output"));
        }
        let x = rx.inner.output(&r);
        *out = x.re;
        *out.add(1) = x.im;
        Ok(())
    })
}

/// # Safety
/// `rx` must be null or a handle from `ifir_receiver_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ifir_receiver_free(rx: *mut IfirReceiver) {
    if !rx.is_null() {
        drop(Box::from_raw(rx));
    }
}

/// Additions and multiplications per symbol of `alg`.
///
/// # Safety
/// `additions` and `multiplications` must be valid pointers.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ifir_complexity(
    alg: IfirAlgorithm,
    m: u64,
    l: u64,
    ni: u64,
    d: u64,
    lp: u64,
    additions: *mut u64,
    multiplications: *mut u64,
) -> IfirStatus {
    guard(|| {
        let alg = match alg {
            IfirAlgorithm::LmsFull => Algorithm::LmsFull,
            IfirAlgorithm::LmsInt => Algorithm::LmsInt,
            IfirAlgorithm::LmsPd => Algorithm::LmsPd,
            IfirAlgorithm::RlsFull => Algorithm::RlsFull,
            IfirAlgorithm::RlsInt => Algorithm::RlsInt,
            IfirAlgorithm::RlsPd => Algorithm::RlsPd,
            IfirAlgorithm::CmvSgFull => Algorithm::CmvSgFull,
            IfirAlgorithm::CmvSgInt => Algorithm::CmvSgInt,
            IfirAlgorithm::CmvRlsFull => Algorithm::CmvRlsFull,
            IfirAlgorithm::CmvRlsInt => Algorithm::CmvRlsInt,
        };
        let add = borrow_mut(additions)?;
        let mul = borrow_mut(multiplications)?;
        (*add, *mul) = complexity_count(alg, ComplexityParams { m, l, ni, d, lp })?;
        Ok(())
    })
}
