use std::ffi::{c_char, CStr, CString};
use std::ptr;

use mvp_ffi::*;

const CSV: &str = "\
event_id,event_activity,event_timestamp,order,item
e1,create,2020-01-01 10:00:00,o1,
e2,pick,2020-01-01 10:05:00,,i1
e2,pick,2020-01-01 10:05:00,o1,
e3,ship,2020-01-01 11:00:00,o1,
e3,ship,2020-01-01 11:00:00,,i1
";

fn last_error() -> String {
    unsafe { CStr::from_ptr(mvp_last_error_message()) }
        .to_str()
        .unwrap()
        .to_owned()
}

/// Takes ownership of a returned string.
fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { mvp_string_free(s) };
    text
}

fn model_from_csv(text: &str) -> *mut MvpModel {
    let csv = CString::new(text).unwrap();
    let mut log = ptr::null_mut();
    let mut model = ptr::null_mut();
    unsafe {
        assert_eq!(mvp_log_from_csv_text(csv.as_ptr(), &mut log), MvpStatus::Ok);
        assert_eq!(mvp_discover(log, &mut model), MvpStatus::Ok);
        // The model keeps its own reference to the log data.
        mvp_log_free(log);
    }
    model
}

#[test]
fn discover_count_and_project() {
    let model = model_from_csv(CSV);
    let mut counts = MvpModelCounts::default();
    unsafe {
        assert_eq!(mvp_model_counts(model, &mut counts), MvpStatus::Ok);
    }
    assert_eq!(
        counts,
        MvpModelCounts {
            events: 3,
            objects: 2,
            activities: 3,
            classes: 2,
            e2o_edges: 5,
            e2e_edges: 3,
            a2a_edges: 3,
        }
    );

    let order = CString::new("order").unwrap();
    let classes = [order.as_ptr()];
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            mvp_project_dfg_json(model, classes.as_ptr(), 1, &mut out),
            MvpStatus::Ok
        );
    }
    let dfg = take(out);
    assert!(
        dfg.contains(r#""source": "create""#) && dfg.contains(r#""target": "ship""#),
        "{dfg}"
    );

    unsafe {
        assert_eq!(
            mvp_project_log_csv(model, classes.as_ptr(), 1, false, &mut out),
            MvpStatus::Ok
        );
    }
    let cases = take(out);
    assert_eq!(cases.lines().count(), 4, "{cases}");
    assert!(cases.starts_with("case_id,activity,timestamp\n"));

    unsafe {
        assert_eq!(mvp_render_dot(model, ptr::null(), &mut out), MvpStatus::Ok);
    }
    assert!(take(out).contains(r#"label="order\n1""#));
    unsafe { mvp_model_free(model) };
}

#[test]
fn json_and_file_round_trips() {
    let model = model_from_csv(CSV);
    let mut json = ptr::null_mut();
    let mut back = ptr::null_mut();
    unsafe {
        assert_eq!(mvp_model_to_json(model, &mut json), MvpStatus::Ok);
        assert_eq!(mvp_model_from_json(json, &mut back), MvpStatus::Ok);
    }
    let first = take(json);
    unsafe {
        assert_eq!(mvp_model_to_json(back, &mut json), MvpStatus::Ok);
    }
    assert_eq!(take(json), first);

    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("m.json").to_str().unwrap()).unwrap();
    let mut loaded = ptr::null_mut();
    unsafe {
        assert_eq!(mvp_model_save(model, path.as_ptr()), MvpStatus::Ok);
        assert_eq!(mvp_model_load(path.as_ptr(), &mut loaded), MvpStatus::Ok);
        assert_eq!(mvp_model_to_json(loaded, &mut json), MvpStatus::Ok);
    }
    assert_eq!(take(json), first);

    let csv_path = CString::new(dir.path().join("log.csv").to_str().unwrap()).unwrap();
    let params = MvpGeneratorParams {
        n_events: 50,
        ..mvp_generator_params_default()
    };
    let mut log = ptr::null_mut();
    let mut reread = ptr::null_mut();
    unsafe {
        assert_eq!(mvp_log_generate(&params, &mut log), MvpStatus::Ok);
        assert_eq!(mvp_log_export_csv(log, csv_path.as_ptr()), MvpStatus::Ok);
        assert_eq!(
            mvp_log_load_csv(csv_path.as_ptr(), &mut reread),
            MvpStatus::Ok
        );
        assert_eq!(mvp_log_event_count(reread), 50);
        mvp_log_free(log);
        mvp_log_free(reread);
        mvp_model_free(model);
        mvp_model_free(back);
        mvp_model_free(loaded);
    }
}

#[test]
fn failures_map_to_status_codes() {
    let mut log = ptr::null_mut();
    let mut model = ptr::null_mut();
    unsafe {
        assert_eq!(
            mvp_log_from_csv_text(ptr::null(), &mut log),
            MvpStatus::NullPointer
        );
        assert!(log.is_null());

        let bad_ts = CString::new("event_id,event_activity,event_timestamp\ne1,A,noon\n").unwrap();
        assert_eq!(
            mvp_log_from_csv_text(bad_ts.as_ptr(), &mut log),
            MvpStatus::Parse
        );
        assert!(last_error().contains("row 2"), "{}", last_error());

        let bad_header = CString::new("id,activity\n").unwrap();
        assert_eq!(
            mvp_log_from_csv_text(bad_header.as_ptr(), &mut log),
            MvpStatus::Format
        );

        let conflict = CString::new(
            "event_id,event_activity,event_timestamp,c\ne1,A,2020-01-01 00:00:00,\ne1,B,2020-01-01 00:00:00,\n",
        )
        .unwrap();
        assert_eq!(
            mvp_log_from_csv_text(conflict.as_ptr(), &mut log),
            MvpStatus::Consistency
        );

        let missing = CString::new("/nonexistent/dir/log.csv").unwrap();
        assert_eq!(mvp_log_load_csv(missing.as_ptr(), &mut log), MvpStatus::Io);

        let invalid = [0xffu8, 0];
        assert_eq!(
            mvp_log_from_csv_text(invalid.as_ptr() as *const c_char, &mut log),
            MvpStatus::InvalidUtf8
        );

        let zero = MvpGeneratorParams {
            n_events: 0,
            ..mvp_generator_params_default()
        };
        assert_eq!(mvp_log_generate(&zero, &mut log), MvpStatus::Domain);

        let garbage = CString::new("{}").unwrap();
        assert_eq!(
            mvp_model_from_json(garbage.as_ptr(), &mut model),
            MvpStatus::Parse
        );
    }

    let model = model_from_csv(CSV);
    let nope = CString::new("invoice").unwrap();
    let classes = [nope.as_ptr()];
    let mut out = ptr::null_mut();
    let opts = MvpRenderOptions {
        threshold: 3.0,
        ..mvp_render_options_default()
    };
    unsafe {
        assert_eq!(
            mvp_project_dfg_json(model, classes.as_ptr(), 1, &mut out),
            MvpStatus::NotFound
        );
        assert!(last_error().contains("invoice"));
        assert_eq!(
            mvp_project_dfg_json(model, classes.as_ptr(), 0, &mut out),
            MvpStatus::Domain
        );
        assert_eq!(mvp_render_dot(model, &opts, &mut out), MvpStatus::Domain);
        assert!(out.is_null());
        assert_eq!(
            mvp_render_dot(model, ptr::null(), ptr::null_mut()),
            MvpStatus::NullPointer
        );
        mvp_model_free(model);
        // Null handles are accepted by the release functions.
        mvp_model_free(ptr::null_mut());
        mvp_log_free(ptr::null_mut());
        mvp_string_free(ptr::null_mut());
    }
}

#[test]
fn tampered_dump_is_rejected() {
    let model = model_from_csv(CSV);
    let mut json = ptr::null_mut();
    unsafe { assert_eq!(mvp_model_to_json(model, &mut json), MvpStatus::Ok) };
    let text = take(json).replacen(r#""count": 1"#, r#""count": 7"#, 1);
    let tampered = CString::new(text).unwrap();
    let mut back = ptr::null_mut();
    unsafe {
        assert_eq!(
            mvp_model_from_json(tampered.as_ptr(), &mut back),
            MvpStatus::InvalidDump
        );
        mvp_model_free(model);
    }
}
