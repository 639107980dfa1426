//! C ABI for `ces-core`.
//!
//! Every function returns a [`CesStatus`] and writes its result through an
//! out-pointer; nothing is written on failure. Spectral parameters live
//! behind the opaque [`CesSpectralParams`] handle, created with
//! [`ces_params_new`] and released with [`ces_params_free`]. The message of
//! the most recent failure on the calling thread is available from
//! [`ces_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ces_core::potentials::{potential, superpotential, PotentialSpec, Sign};
use ces_core::scattering::{scattering_amplitude_minus, scattering_amplitude_plus};
use ces_core::solutions::{
    make_params, solution_v, solution_z, wronskian_closed, zero_energy_state, Branch,
    SpectralParams, ZeroEnergy,
};
use ces_core::special_fn::{gamma, hyp2f1, Hyp2F1Params};
use ces_core::Error;
use num_complex::Complex64;

pub const CES_SIGN_PLUS: c_int = 1;
pub const CES_SIGN_MINUS: c_int = -1;
pub const CES_BRANCH_I: c_int = 1;
pub const CES_BRANCH_II: c_int = 2;
pub const CES_PSI_MINUS: c_int = -1;
pub const CES_PSI_PLUS: c_int = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CesStatus {
    Ok = 0,
    NullPointer = 1,
    /// An argument is outside the function's domain.
    Domain = 2,
    /// Invalid parameter, sign, branch or selector.
    InvalidArgument = 3,
    /// Gamma or hypergeometric pole.
    Pole = 4,
    NonConvergence = 5,
    /// `c - a - b` is an integer and the connection formula is unavailable.
    Degenerate = 6,
    /// Any other numerical failure.
    Numerical = 7,
    /// The library panicked; this is a bug.
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CesComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for CesComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<CesComplex> for Complex64 {
    fn from(z: CesComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Opaque handle to the spectral parameters of one `(ω, m)`.
pub struct CesSpectralParams(SpectralParams);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn status_of(e: &Error) -> CesStatus {
    match e {
        Error::GammaPole(_) | Error::HypergeometricPole(_) => CesStatus::Pole,
        Error::NonConvergence { .. } => CesStatus::NonConvergence,
        Error::DegenerateConnection(_) => CesStatus::Degenerate,
        Error::Domain { .. } => CesStatus::Domain,
        Error::Parameter(_) | Error::Grid(_) => CesStatus::InvalidArgument,
        _ => CesStatus::Numerical,
    }
}

enum Failure {
    Status(CesStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn invalid(message: String) -> Failure {
    Failure::Status(CesStatus::InvalidArgument, message)
}

/// Run `body`, store its value in `out` and translate failures.
fn guard<T>(out: *mut T, body: impl FnOnce() -> Result<T, Failure>) -> CesStatus {
    if out.is_null() {
        set_last_error("output pointer is null".into());
        return CesStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(value)) => {
            // SAFETY: checked non-null above; the caller guarantees it is
            // valid for writes of T.
            unsafe { out.write(value) };
            CesStatus::Ok
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            CesStatus::Panic
        }
    }
}

fn sign_of(sign: c_int) -> Result<Sign, Failure> {
    match sign {
        CES_SIGN_PLUS => Ok(Sign::Plus),
        CES_SIGN_MINUS => Ok(Sign::Minus),
        other => Err(invalid(format!("sign must be +1 or -1, got {other}"))),
    }
}

fn branch_of(branch: c_int) -> Result<Branch, Failure> {
    match branch {
        CES_BRANCH_I => Ok(Branch::I),
        CES_BRANCH_II => Ok(Branch::II),
        other => Err(invalid(format!("branch must be 1 or 2, got {other}"))),
    }
}

/// # Safety
/// `params` must be null or a handle from [`ces_params_new`] not yet freed.
unsafe fn params_ref<'a>(params: *const CesSpectralParams) -> Result<&'a SpectralParams, Failure> {
    // SAFETY: forwarded to the caller.
    unsafe { params.as_ref() }
        .map(|p| &p.0)
        .ok_or_else(|| Failure::Status(CesStatus::NullPointer, "parameter handle is null".into()))
}

/// Human-readable name of a status code. The string is static; unknown
/// codes give "unknown status".
#[no_mangle]
pub extern "C" fn ces_status_name(status: c_int) -> *const c_char {
    let text: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer\0",
        2 => b"argument outside domain\0",
        3 => b"invalid argument\0",
        4 => b"pole\0",
        5 => b"no convergence\0",
        6 => b"degenerate connection\0",
        7 => b"numerical failure\0",
        8 => b"internal panic\0",
        _ => b"unknown status\0",
    };
    text.as_ptr().cast()
}

/// Message of the last failure on this thread, or null if there was none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ces_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Create the parameters for `(omega, m)`; `omega > 0`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn ces_params_new(
    omega: f64,
    m: f64,
    out: *mut *mut CesSpectralParams,
) -> CesStatus {
    guard(out, || {
        let p = make_params(omega, m)?;
        Ok(Box::into_raw(Box::new(CesSpectralParams(p))))
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `params` must be null or a handle from [`ces_params_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ces_params_free(params: *mut CesSpectralParams) {
    if !params.is_null() {
        // SAFETY: the handle came from Box::into_raw in ces_params_new.
        drop(unsafe { Box::from_raw(params) });
    }
}

/// `c1 = 2A1 + 1/2` of a handle.
///
/// # Safety
/// `params` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ces_params_c1(
    params: *const CesSpectralParams,
    out: *mut CesComplex,
) -> CesStatus {
    // SAFETY: forwarded to the caller.
    guard(out, || Ok(unsafe { params_ref(params) }?.c1().into()))
}

/// Superpotential `W(x) = -m / sqrt(e^x - 1)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ces_superpotential(x: f64, m: f64, out: *mut f64) -> CesStatus {
    guard(out, || Ok(superpotential(x, m)?))
}

/// Partner potential `V±(x, m)`, `sign` one of `CES_SIGN_*`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ces_potential(x: f64, m: f64, sign: c_int, out: *mut f64) -> CesStatus {
    guard(out, || {
        Ok(potential(x, PotentialSpec::new(m, sign_of(sign)?)?)?)
    })
}

/// Complex Gamma function.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ces_gamma(z: CesComplex, out: *mut CesComplex) -> CesStatus {
    guard(out, || Ok(gamma(z.into())?.into()))
}

/// ₂F₁(a, b; c; z) for real `0 <= z < 1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ces_hyp2f1(
    a: CesComplex,
    b: CesComplex,
    c: CesComplex,
    z: f64,
    out: *mut CesComplex,
) -> CesStatus {
    guard(out, || {
        let p = Hyp2F1Params::new(a.into(), b.into(), c.into())?;
        Ok(hyp2f1(&p, z)?.into())
    })
}

/// Exact solution of the `sign` partner in the z-family, at `z = e^{-x}`.
///
/// # Safety
/// `params` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ces_solution_z(
    params: *const CesSpectralParams,
    branch: c_int,
    sign: c_int,
    z: f64,
    out: *mut CesComplex,
) -> CesStatus {
    guard(out, || {
        // SAFETY: forwarded to the caller.
        let p = unsafe { params_ref(params) }?;
        Ok(solution_z(branch_of(branch)?, sign_of(sign)?, z, p)?.into())
    })
}

/// Exact solution of the `sign` partner in the v-family, at `v = 1 - e^{-x}`.
///
/// # Safety
/// `params` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ces_solution_v(
    params: *const CesSpectralParams,
    branch: c_int,
    sign: c_int,
    v: f64,
    out: *mut CesComplex,
) -> CesStatus {
    guard(out, || {
        // SAFETY: forwarded to the caller.
        let p = unsafe { params_ref(params) }?;
        Ok(solution_v(branch_of(branch)?, sign_of(sign)?, v, p)?.into())
    })
}

/// Wronskian in `x` of the z-family pair (I, II), `±2ω(c1 - 1)/m`.
///
/// # Safety
/// `params` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ces_wronskian(
    params: *const CesSpectralParams,
    sign: c_int,
    out: *mut CesComplex,
) -> CesStatus {
    guard(out, || {
        // SAFETY: forwarded to the caller.
        let p = unsafe { params_ref(params) }?;
        Ok(wronskian_closed(sign_of(sign)?, p).into())
    })
}

/// Scattering amplitude of `V+`, with `Y ~ S e^{iωx} - e^{-iωx}`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ces_scattering_plus(
    omega: f64,
    m: f64,
    out: *mut CesComplex,
) -> CesStatus {
    guard(out, || {
        Ok(scattering_amplitude_plus(omega, m)?.amplitude.into())
    })
}

/// Scattering amplitude of `V-`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ces_scattering_minus(
    omega: f64,
    m: f64,
    out: *mut CesComplex,
) -> CesStatus {
    guard(out, || {
        Ok(scattering_amplitude_minus(omega, m)?.amplitude.into())
    })
}

/// Zero-energy state; `which` is `CES_PSI_MINUS` or `CES_PSI_PLUS`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ces_zero_energy(
    x: f64,
    m: f64,
    which: c_int,
    out: *mut CesComplex,
) -> CesStatus {
    guard(out, || {
        let which = match which {
            CES_PSI_MINUS => ZeroEnergy::PsiMinus,
            CES_PSI_PLUS => ZeroEnergy::PsiPlus,
            other => return Err(invalid(format!("which must be -1 or 1, got {other}"))),
        };
        Ok(zero_energy_state(x, m, which)?.into())
    })
}
