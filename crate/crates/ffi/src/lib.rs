//! C ABI for `mvp-core`.
//!
//! Logs and models are opaque handles created and destroyed by this library.
//! Every function returns an [`MvpStatus`]; on failure a one-line message is
//! available from [`mvp_last_error_message`] on the calling thread. Strings
//! handed out (`char **out`) are owned by the caller and must be released with
//! [`mvp_string_free`]. Panics never cross the boundary.
//!
//! The header `include/mvp_ffi.h` is generated by the build script.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use mvp_core::{
    discover, export_csv, generate, load_csv, load_model, model_from_json, model_to_json,
    project_dfg, project_log_with, read_csv, render_mvp, save_model, write_classical_csv,
    CaseMerge, DatabaseEventLog, Decoration, Error, GeneratorParams, RenderOptions, Viewpoint,
};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    /// Malformed CSV, timestamp or JSON input.
    Parse = 4,
    /// Conflicting definitions of the same event or object.
    Consistency = 5,
    /// Structurally wrong input (headers, cells).
    Format = 6,
    /// Unknown event, object or class name.
    NotFound = 7,
    /// Argument outside its domain.
    Domain = 8,
    /// A model dump that does not match its own log.
    InvalidDump = 9,
    /// Output contains an interior NUL and cannot be returned as a C string.
    Encoding = 10,
    Panic = 11,
}

/// Opaque event log.
pub struct MvpLog {
    inner: Arc<DatabaseEventLog>,
}

/// Opaque discovered model.
pub struct MvpModel {
    inner: MvpModelInner,
}

type MvpModelInner = mvp_core::MvpModel;

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MvpGeneratorParams {
    pub n_events: usize,
    pub n_activities: usize,
    pub n_classes: usize,
    pub n_objects_per_class: usize,
    pub links_per_event: usize,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvpDecoration {
    Frequency = 0,
    Performance = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MvpRenderOptions {
    pub decoration: MvpDecoration,
    /// Dependency threshold in [-1, 1].
    pub threshold: f64,
    pub show_isolated: bool,
    pub palette_seed: u64,
}

/// Sizes of a model's parts.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MvpModelCounts {
    pub events: usize,
    pub objects: usize,
    pub activities: usize,
    pub classes: usize,
    pub e2o_edges: usize,
    pub e2e_edges: usize,
    pub a2a_edges: usize,
}

struct Failure {
    status: MvpStatus,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = match &err {
            Error::Io { .. } => MvpStatus::Io,
            Error::Csv(_) | Error::Json(_) | Error::Timestamp { .. } => MvpStatus::Parse,
            Error::Consistency { .. } => MvpStatus::Consistency,
            Error::Format { .. } => MvpStatus::Format,
            Error::UnknownObject(_) | Error::UnknownEvent(_) | Error::UnknownClass { .. } => {
                MvpStatus::NotFound
            }
            Error::Domain(_) => MvpStatus::Domain,
            Error::InvalidDump(_) => MvpStatus::InvalidDump,
        };
        Failure {
            status,
            message: err.to_string(),
        }
    }
}

impl Failure {
    fn new(status: MvpStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

/// Runs `f`, converting errors and panics into a status and recording the
/// message for [`mvp_last_error_message`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MvpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            MvpStatus::Ok
        }
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("internal panic: {what}"));
            MvpStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::new(MvpStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `s` is null or a valid NUL-terminated string.
unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure::new(MvpStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

/// # Safety
/// `p` is null or points to a live `T`.
unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `out` is null or valid for a pointer write.
unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// # Safety
/// `out` is null or valid for a pointer write.
unsafe fn put_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(text)
        .map_err(|_| Failure::new(MvpStatus::Encoding, "output contains a NUL byte"))?;
    *out = c.into_raw();
    Ok(())
}

/// # Safety
/// `classes` points to `n_classes` valid NUL-terminated strings.
unsafe fn class_list(
    classes: *const *const c_char,
    n_classes: usize,
) -> Result<Vec<String>, Failure> {
    if classes.is_null() {
        return Err(null("classes"));
    }
    std::slice::from_raw_parts(classes, n_classes)
        .iter()
        .map(|&c| str_arg(c, "class name").map(str::to_owned))
        .collect()
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mvp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned through a `char **out` parameter. Null is a no-op.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mvp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The generator defaults.
#[no_mangle]
pub extern "C" fn mvp_generator_params_default() -> MvpGeneratorParams {
    let p = GeneratorParams::default();
    MvpGeneratorParams {
        n_events: p.n_events,
        n_activities: p.n_activities,
        n_classes: p.n_classes,
        n_objects_per_class: p.n_objects_per_class,
        links_per_event: p.links_per_event,
        seed: p.seed,
    }
}

#[no_mangle]
pub extern "C" fn mvp_render_options_default() -> MvpRenderOptions {
    let o = RenderOptions::default();
    MvpRenderOptions {
        decoration: MvpDecoration::Frequency,
        threshold: o.threshold,
        show_isolated: o.show_isolated,
        palette_seed: o.palette_seed,
    }
}

/// # Safety
/// `path` is a NUL-terminated string; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mvp_log_load_csv(path: *const c_char, out: *mut *mut MvpLog) -> MvpStatus {
    guard(|| {
        let log = load_csv(str_arg(path, "path")?)?;
        put(
            out,
            MvpLog {
                inner: Arc::new(log),
            },
        )
    })
}

/// Parses columnar CSV text held in memory.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mvp_log_from_csv_text(
    text: *const c_char,
    out: *mut *mut MvpLog,
) -> MvpStatus {
    guard(|| {
        let log = read_csv(str_arg(text, "text")?.as_bytes())?;
        put(
            out,
            MvpLog {
                inner: Arc::new(log),
            },
        )
    })
}

/// # Safety
/// `params` points to a parameter block; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mvp_log_generate(
    params: *const MvpGeneratorParams,
    out: *mut *mut MvpLog,
) -> MvpStatus {
    guard(|| {
        let p = ref_arg(params, "params")?;
        let log = generate(&GeneratorParams {
            n_events: p.n_events,
            n_activities: p.n_activities,
            n_classes: p.n_classes,
            n_objects_per_class: p.n_objects_per_class,
            seed: p.seed,
            links_per_event: p.links_per_event,
        })?;
        put(
            out,
            MvpLog {
                inner: Arc::new(log),
            },
        )
    })
}

/// # Safety
/// `log` is a live handle; `path` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mvp_log_export_csv(log: *const MvpLog, path: *const c_char) -> MvpStatus {
    guard(|| {
        let log = ref_arg(log, "log")?;
        Ok(export_csv(&log.inner, str_arg(path, "path")?)?)
    })
}

/// Number of events in `log`, or 0 for a null handle.
///
/// # Safety
/// `log` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvp_log_event_count(log: *const MvpLog) -> usize {
    log.as_ref().map_or(0, |l| l.inner.events().len())
}

/// # Safety
/// `log` is null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mvp_log_free(log: *mut MvpLog) {
    if !log.is_null() {
        drop(Box::from_raw(log));
    }
}

/// Discovers a model. The log handle stays owned by the caller; the model
/// shares the log data and remains valid after the log handle is freed.
///
/// # Safety
/// `log` is a live handle; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mvp_discover(log: *const MvpLog, out: *mut *mut MvpModel) -> MvpStatus {
    guard(|| {
        let log = ref_arg(log, "log")?;
        put(
            out,
            MvpModel {
                inner: discover(Arc::clone(&log.inner)),
            },
        )
    })
}

/// # Safety
/// `model` is null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mvp_model_free(model: *mut MvpModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` is a live handle; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn mvp_model_counts(
    model: *const MvpModel,
    out: *mut MvpModelCounts,
) -> MvpStatus {
    guard(|| {
        let m: &MvpModelInner = &ref_arg(model, "model")?.inner;
        let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
        *out = MvpModelCounts {
            events: m.log.events().len(),
            objects: m.log.objects().len(),
            activities: m.log.activities().len(),
            classes: m.log.classes().len(),
            e2o_edges: m.e2o.edges.len(),
            e2e_edges: m.e2e.edges.len(),
            a2a_edges: m.a2a.len(),
        };
        Ok(())
    })
}

/// Serializes a model to its JSON dump.
///
/// # Safety
/// `model` is a live handle; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mvp_model_to_json(
    model: *const MvpModel,
    out: *mut *mut c_char,
) -> MvpStatus {
    guard(|| {
        let model = ref_arg(model, "model")?;
        put_string(out, model_to_json(&model.inner)?)
    })
}

/// Loads and verifies a JSON dump.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mvp_model_from_json(
    json: *const c_char,
    out: *mut *mut MvpModel,
) -> MvpStatus {
    guard(|| {
        let model = model_from_json(str_arg(json, "json")?)?;
        put(out, MvpModel { inner: model })
    })
}

/// # Safety
/// `model` is a live handle; `path` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mvp_model_save(model: *const MvpModel, path: *const c_char) -> MvpStatus {
    guard(|| {
        let model = ref_arg(model, "model")?;
        Ok(save_model(&model.inner, str_arg(path, "path")?)?)
    })
}

/// # Safety
/// `path` is a NUL-terminated string; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mvp_model_load(path: *const c_char, out: *mut *mut MvpModel) -> MvpStatus {
    guard(|| {
        let model = load_model(str_arg(path, "path")?)?;
        put(out, MvpModel { inner: model })
    })
}

/// Projects the model onto the viewpoint of `classes` and returns the
/// directly-follows graph as JSON (`nodes`, `edges` with counts).
///
/// # Safety
/// `model` is a live handle; `classes` points to `n_classes` NUL-terminated
/// strings; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mvp_project_dfg_json(
    model: *const MvpModel,
    classes: *const *const c_char,
    n_classes: usize,
    out: *mut *mut c_char,
) -> MvpStatus {
    guard(|| {
        let m = &ref_arg(model, "model")?.inner;
        let view = Viewpoint::new(&m.log, &class_list(classes, n_classes)?)?;
        put_string(out, project_dfg(m, &view)?.to_json()?)
    })
}

/// Projects the model onto the viewpoint of `classes` and returns the
/// classical log as `case_id,activity,timestamp` CSV. `connected` merges
/// whole connected groups of objects instead of one hop.
///
/// # Safety
/// As for [`mvp_project_dfg_json`].
#[no_mangle]
pub unsafe extern "C" fn mvp_project_log_csv(
    model: *const MvpModel,
    classes: *const *const c_char,
    n_classes: usize,
    connected: bool,
    out: *mut *mut c_char,
) -> MvpStatus {
    guard(|| {
        let m = &ref_arg(model, "model")?.inner;
        let view = Viewpoint::new(&m.log, &class_list(classes, n_classes)?)?;
        let merge = if connected {
            CaseMerge::Connected
        } else {
            CaseMerge::OneHop
        };
        let mut buf = Vec::new();
        write_classical_csv(&project_log_with(m, &view, merge)?, &mut buf)?;
        let text = String::from_utf8(buf)
            .map_err(|_| Failure::new(MvpStatus::Encoding, "projected log is not UTF-8"))?;
        put_string(out, text)
    })
}

/// Renders the model as DOT text. `opts` may be null for the defaults.
///
/// # Safety
/// `model` is a live handle; `opts` is null or valid; `out` is valid for a
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn mvp_render_dot(
    model: *const MvpModel,
    opts: *const MvpRenderOptions,
    out: *mut *mut c_char,
) -> MvpStatus {
    guard(|| {
        let m = &ref_arg(model, "model")?.inner;
        let o = opts
            .as_ref()
            .copied()
            .unwrap_or_else(|| mvp_render_options_default());
        let opts = RenderOptions {
            decoration: match o.decoration {
                MvpDecoration::Frequency => Decoration::Frequency,
                MvpDecoration::Performance => Decoration::Performance,
            },
            threshold: o.threshold,
            show_isolated: o.show_isolated,
            palette_seed: o.palette_seed,
        };
        put_string(out, render_mvp(m, &opts)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statuses_follow_error_kinds() {
        let f: Failure = Error::Domain("x".into()).into();
        assert_eq!(f.status, MvpStatus::Domain);
        let f: Failure = Error::UnknownClass {
            class: "c".into(),
            known: vec![],
        }
        .into();
        assert_eq!(f.status, MvpStatus::NotFound);
    }

    #[test]
    fn panics_become_status() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, MvpStatus::Panic);
        let msg = unsafe { CStr::from_ptr(mvp_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic: boom");
    }

    #[test]
    fn success_clears_message() {
        let _ = guard(|| Err(Failure::new(MvpStatus::Domain, "bad")));
        let _ = guard(|| Ok(()));
        let msg = unsafe { CStr::from_ptr(mvp_last_error_message()) };
        assert!(msg.to_bytes().is_empty());
    }
}
