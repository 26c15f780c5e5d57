//! C ABI over the betadyne library.
//!
//! Handles are opaque pointers created by `bd_*_new`-style constructors and
//! released with the matching `*_free`. Every function returns a
//! [`BdStatus`]; on failure [`bd_last_error_message`] describes the error
//! for the calling thread. Matrices are passed as separate real and
//! imaginary arrays in row-major order. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use betadyne::dynamics::{ensemble_average, EnsembleStats, TimeGrid};
use betadyne::linalg::{Ket, Operator, C64};
use betadyne::model::json::ModelJson;
use betadyne::model::{betadyne, liouvillian_matrix, nhh_beta, LindbladModel, UnravelingSpec};
use betadyne::scenarios::Scenario;
use betadyne::spectral::{coalescence_of, eigendecompose, find_ep, EpLocation, EpSearchOptions, SearchSpace};
use betadyne::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    NumericError = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Model plus the unraveling applied by the NHH and ensemble functions.
pub struct BdModel {
    model: LindbladModel,
    spec: UnravelingSpec,
}

pub struct BdEnsemble {
    stats: EnsembleStats,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BdCoalescence {
    pub min_gap: f64,
    pub max_overlap: f64,
    pub measure: f64,
    pub pair_first: usize,
    pub pair_second: usize,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BdEpResult {
    pub beta_re: f64,
    pub beta_im: f64,
    pub measure: f64,
    /// 1 when the measure reached the requested tolerance.
    pub converged: i32,
    pub iterations: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (BdStatus, String);

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn from_error(e: Error) -> Failure {
    let status = match e {
        Error::Json(_) | Error::Config(_) => BdStatus::ParseError,
        ref other if other.is_usage() => BdStatus::InvalidArgument,
        _ => BdStatus::NumericError,
    };
    (status, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BdStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            BdStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    (BdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (BdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn model_ref<'a>(m: *const BdModel) -> Result<&'a BdModel, Failure> {
    m.as_ref().ok_or_else(|| null("model"))
}

unsafe fn write_complex(op_values: &[C64], re: *mut f64, im: *mut f64, len: usize) -> Result<(), Failure> {
    if re.is_null() || im.is_null() {
        return Err(null("output buffer"));
    }
    if len < op_values.len() {
        return Err((BdStatus::BufferTooSmall, format!("buffer holds {len} values, {} needed", op_values.len())));
    }
    let re = std::slice::from_raw_parts_mut(re, op_values.len());
    let im = std::slice::from_raw_parts_mut(im, op_values.len());
    for (k, z) in op_values.iter().enumerate() {
        re[k] = z.re;
        im[k] = z.im;
    }
    Ok(())
}

unsafe fn write_real(values: &[f64], out: *mut f64, len: usize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    if len < values.len() {
        return Err((BdStatus::BufferTooSmall, format!("buffer holds {len} values, {} needed", values.len())));
    }
    std::slice::from_raw_parts_mut(out, values.len()).copy_from_slice(values);
    Ok(())
}

unsafe fn read_complex(re: *const f64, im: *const f64, n: usize) -> Result<Vec<C64>, Failure> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if re.is_null() || im.is_null() {
        return Err(null("input array"));
    }
    let re = std::slice::from_raw_parts(re, n);
    let im = std::slice::from_raw_parts(im, n);
    Ok(re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect())
}

fn boxed_model(model: LindbladModel, spec: UnravelingSpec, out: *mut *mut BdModel) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { *out = Box::into_raw(Box::new(BdModel { model, spec })) };
    Ok(())
}

/// Builds a model from the JSON model schema.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_model_from_json(json: *const c_char, out: *mut *mut BdModel) -> BdStatus {
    guard(|| {
        let text = c_str(json, "json")?;
        let m: ModelJson = serde_json::from_str(text).map_err(|e| from_error(e.into()))?;
        let (model, spec) = m.to_model().map_err(from_error)?;
        boxed_model(model, spec, out)
    })
}

/// Builds a named scenario. `params_json` may be null for defaults.
///
/// # Safety
/// `name` must be a nul-terminated string, `params_json` null or
/// nul-terminated, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_model_scenario(
    name: *const c_char,
    params_json: *const c_char,
    out: *mut *mut BdModel,
) -> BdStatus {
    guard(|| {
        let name = c_str(name, "name")?;
        Scenario::by_name(name).map_err(from_error)?;
        let params = if params_json.is_null() { "{}" } else { c_str(params_json, "params_json")? };
        let tagged =
            format!(r#"{{"scenario": {}, "params": {}}}"#, serde_json::to_string(name).expect("string"), params);
        let scenario: Scenario = serde_json::from_str(&tagged).map_err(|e| from_error(e.into()))?;
        let model = scenario.build().map_err(from_error)?;
        let spec = UnravelingSpec::standard(model.channels().len());
        boxed_model(model, spec, out)
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from a `bd_model_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bd_model_free(model: *mut BdModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bd_model_dim(model: *const BdModel, out: *mut usize) -> BdStatus {
    guard(|| {
        let m = model_ref(model)?;
        *out.as_mut().ok_or_else(|| null("out"))? = m.model.dim();
        Ok(())
    })
}

/// # Safety
/// `model` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bd_model_channel_count(model: *const BdModel, out: *mut usize) -> BdStatus {
    guard(|| {
        let m = model_ref(model)?;
        *out.as_mut().ok_or_else(|| null("out"))? = m.model.channels().len();
        Ok(())
    })
}

/// Sets one displacement per channel; any mixing matrix is dropped.
///
/// # Safety
/// `re` and `im` must point to `n` doubles each.
#[no_mangle]
pub unsafe extern "C" fn bd_model_set_betas(model: *mut BdModel, re: *const f64, im: *const f64, n: usize) -> BdStatus {
    guard(|| {
        let m = model.as_mut().ok_or_else(|| null("model"))?;
        let channels = m.model.channels().len();
        if n != channels {
            return Err((BdStatus::InvalidArgument, format!("model has {channels} channels, got {n} displacements")));
        }
        let betas = read_complex(re, im, n)?;
        m.spec = UnravelingSpec::displacements(betas).map_err(from_error)?;
        Ok(())
    })
}

/// No-jump Hamiltonian of the current unraveling, `dim * dim` values.
///
/// # Safety
/// `re` and `im` must point to `len` writable doubles each.
#[no_mangle]
pub unsafe extern "C" fn bd_model_nhh(model: *const BdModel, re: *mut f64, im: *mut f64, len: usize) -> BdStatus {
    guard(|| {
        let m = model_ref(model)?;
        let h = nhh_beta(&m.model, &m.spec).map_err(from_error)?;
        write_complex(h.as_slice(), re, im, len)
    })
}

/// Liouvillian on column-stacked density matrices, `dim^4` values.
///
/// # Safety
/// `re` and `im` must point to `len` writable doubles each.
#[no_mangle]
pub unsafe extern "C" fn bd_model_liouvillian(
    model: *const BdModel,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> BdStatus {
    guard(|| {
        let m = model_ref(model)?;
        let l = liouvillian_matrix(&m.model);
        write_complex(l.matrix().as_slice(), re, im, len)
    })
}

/// Eigenvalues of the no-jump Hamiltonian, `dim` values, sorted by
/// descending real part.
///
/// # Safety
/// `re` and `im` must point to `len` writable doubles each.
#[no_mangle]
pub unsafe extern "C" fn bd_model_nhh_eigenvalues(
    model: *const BdModel,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> BdStatus {
    guard(|| {
        let m = model_ref(model)?;
        let h = nhh_beta(&m.model, &m.spec).map_err(from_error)?;
        let sys = eigendecompose(h.operator()).map_err(from_error)?;
        write_complex(&sys.eigenvalues, re, im, len)
    })
}

/// # Safety
/// `model` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bd_model_coalescence(model: *const BdModel, out: *mut BdCoalescence) -> BdStatus {
    guard(|| {
        let m = model_ref(model)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let h = nhh_beta(&m.model, &m.spec).map_err(from_error)?;
        let r = eigendecompose(h.operator()).and_then(|s| coalescence_of(&s)).map_err(from_error)?;
        *out = BdCoalescence {
            min_gap: r.min_gap,
            max_overlap: r.max_overlap,
            measure: r.measure,
            pair_first: r.pair.0,
            pair_second: r.pair.1,
        };
        Ok(())
    })
}

/// Searches a complex box for a displacement, applied equally to every
/// channel, at which the no-jump Hamiltonian has an EP.
///
/// # Safety
/// `model` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bd_ep_find_beta(
    model: *const BdModel,
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
    tol: f64,
    out: *mut BdEpResult,
) -> BdStatus {
    guard(|| {
        let m = model_ref(model)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let n = m.model.channels().len();
        let family = |loc: EpLocation| -> betadyne::Result<Operator> {
            let beta = loc.as_complex().unwrap_or_default();
            Ok(nhh_beta(&m.model, &UnravelingSpec::uniform(n, beta))?.into_operator())
        };
        let space = SearchSpace::Complex { re: (re_min, re_max), im: (im_min, im_max) };
        let opts = EpSearchOptions { tol, ..Default::default() };
        let r = find_ep(family, &space, None, &opts).map_err(from_error)?;
        let beta = r.location.as_complex().unwrap_or_default();
        *out = BdEpResult {
            beta_re: beta.re,
            beta_im: beta.im,
            measure: r.report.measure,
            converged: r.converged as i32,
            iterations: r.iterations,
        };
        Ok(())
    })
}

/// Runs `trajectories` quantum-jump trajectories of the unraveled model.
///
/// # Safety
/// `psi_re` and `psi_im` must point to `dim` doubles each; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bd_ensemble_run(
    model: *const BdModel,
    psi_re: *const f64,
    psi_im: *const f64,
    dim: usize,
    t0: f64,
    t1: f64,
    steps: usize,
    trajectories: usize,
    seed: u64,
    out: *mut *mut BdEnsemble,
) -> BdStatus {
    guard(|| {
        let m = model_ref(model)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if dim != m.model.dim() {
            return Err((
                BdStatus::InvalidArgument,
                format!("state has {dim} amplitudes, model dimension is {}", m.model.dim()),
            ));
        }
        let psi = Ket::new(read_complex(psi_re, psi_im, dim)?).map_err(from_error)?;
        let grid = TimeGrid::new(t0, t1, steps).map_err(from_error)?;
        let unraveled = betadyne(&m.model, &m.spec).map_err(from_error)?;
        let stats = ensemble_average(&unraveled, &psi, &grid, trajectories, seed).map_err(from_error)?;
        *out = Box::into_raw(Box::new(BdEnsemble { stats }));
        Ok(())
    })
}

/// Number of time points; 0 for a null handle.
///
/// # Safety
/// `ens` must be null or a live ensemble handle.
#[no_mangle]
pub unsafe extern "C" fn bd_ensemble_len(ens: *const BdEnsemble) -> usize {
    ens.as_ref().map_or(0, |e| e.stats.times.len())
}

unsafe fn ensemble_ref<'a>(e: *const BdEnsemble) -> Result<&'a BdEnsemble, Failure> {
    e.as_ref().ok_or_else(|| null("ensemble"))
}

/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bd_ensemble_times(ens: *const BdEnsemble, out: *mut f64, len: usize) -> BdStatus {
    guard(|| write_real(&ensemble_ref(ens)?.stats.times, out, len))
}

/// Fraction of trajectories without any jump up to each time.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bd_ensemble_nojump_fraction(ens: *const BdEnsemble, out: *mut f64, len: usize) -> BdStatus {
    guard(|| write_real(&ensemble_ref(ens)?.stats.nojump_fraction, out, len))
}

/// Ensemble-averaged population of basis state `level` at each time.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bd_ensemble_population(
    ens: *const BdEnsemble,
    level: usize,
    out: *mut f64,
    len: usize,
) -> BdStatus {
    guard(|| {
        let e = ensemble_ref(ens)?;
        let dim = e.stats.mean_state[0].operator().dim();
        if level >= dim {
            return Err((BdStatus::InvalidArgument, format!("level {level} out of range for dimension {dim}")));
        }
        let pops: Vec<f64> = e.stats.mean_state.iter().map(|r| r.population(level)).collect();
        write_real(&pops, out, len)
    })
}

/// Releases an ensemble. Null is ignored.
///
/// # Safety
/// `ens` must come from [`bd_ensemble_run`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bd_ensemble_free(ens: *mut BdEnsemble) {
    if !ens.is_null() {
        drop(Box::from_raw(ens));
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn bd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn bd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
