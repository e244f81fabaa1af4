use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use braidfix_ffi::*;

fn quick() -> BraidfixSolverConfig {
    BraidfixSolverConfig {
        seeds: 300,
        ..braidfix_solver_config_default()
    }
}

fn parse(word: &str) -> (BraidfixStatus, *mut BraidfixBraid) {
    let w = CString::new(word).unwrap();
    let mut out = ptr::null_mut();
    let s = unsafe { braidfix_braid_parse(w.as_ptr(), 0, &mut out) };
    (s, out)
}

#[test]
fn figure_eight_through_the_abi() {
    let (s, braid) = parse("1 -2 1 -2");
    assert_eq!(s, BraidfixStatus::Ok);
    unsafe {
        let mut strands = 0;
        assert_eq!(braidfix_braid_strands(braid, &mut strands), BraidfixStatus::Ok);
        assert_eq!(strands, 3);
        let mut knot = false;
        assert_eq!(braidfix_braid_is_knot(braid, &mut knot), BraidfixStatus::Ok);
        assert!(knot);

        let cfg = quick();
        let mut analysis = ptr::null_mut();
        assert_eq!(braidfix_analyze(braid, &cfg, &mut analysis), BraidfixStatus::Ok);
        let mut lambda = 99;
        assert_eq!(braidfix_analysis_lambda(analysis, &mut lambda), BraidfixStatus::Ok);
        assert_eq!(lambda, 0);
        let mut n = 0;
        assert_eq!(braidfix_analysis_class_count(analysis, &mut n), BraidfixStatus::Ok);
        assert_eq!(n, 2);
        let mut indices = Vec::new();
        for k in 0..n {
            let mut i = 0;
            assert_eq!(braidfix_analysis_class_index(analysis, k, &mut i), BraidfixStatus::Ok);
            indices.push(i);
        }
        indices.sort();
        assert_eq!(indices, vec![-1, 1]);
        let mut i = 0;
        assert_eq!(braidfix_analysis_class_index(analysis, 7, &mut i), BraidfixStatus::Domain);

        let mut json = ptr::null_mut();
        assert_eq!(braidfix_analysis_json(analysis, &mut json), BraidfixStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_string();
        braidfix_string_free(json);
        let report = braidfix::report::Report::from_json(&text).unwrap();
        assert_eq!(report.determinant, 5);

        braidfix_analysis_free(analysis);
        braidfix_braid_free(braid);
    }
}

#[test]
fn errors_map_to_codes_and_messages() {
    let (s, b) = parse("1 0");
    assert_eq!(s, BraidfixStatus::Parse);
    assert!(b.is_null());
    let msg = unsafe { CStr::from_ptr(braidfix_last_error()) };
    assert!(!msg.to_str().unwrap().is_empty());

    let (s, link) = parse("1 1");
    assert_eq!(s, BraidfixStatus::Ok);
    let mut analysis = ptr::null_mut();
    let s = unsafe { braidfix_analyze(link, &quick(), &mut analysis) };
    assert_eq!(s, BraidfixStatus::NotAKnot);
    assert!(analysis.is_null());
    let msg = unsafe { CStr::from_ptr(braidfix_last_error()) }.to_str().unwrap();
    assert!(msg.contains("closure is a link"));
    unsafe { braidfix_braid_free(link) };

    let mut bad_cfg = quick();
    bad_cfg.residual_tol = -1.0;
    let (_, tref) = parse("1 1 1");
    let s = unsafe { braidfix_analyze(tref, &bad_cfg, &mut analysis) };
    assert_eq!(s, BraidfixStatus::Domain);
    unsafe { braidfix_braid_free(tref) };

    let s = unsafe { braidfix_braid_parse(ptr::null(), 0, &mut ptr::null_mut()) };
    assert_eq!(s, BraidfixStatus::NullPointer);
    let s = unsafe { braidfix_analysis_lambda(ptr::null(), &mut 0) };
    assert_eq!(s, BraidfixStatus::NullPointer);
    unsafe {
        braidfix_braid_free(ptr::null_mut());
        braidfix_analysis_free(ptr::null_mut());
        braidfix_string_free(ptr::null_mut());
    }
}

#[test]
fn successful_call_clears_last_error() {
    let _ = parse("1 0");
    assert!(!braidfix_last_error().is_null());
    let (s, b) = parse("1");
    assert_eq!(s, BraidfixStatus::Ok);
    assert!(braidfix_last_error().is_null());
    unsafe { braidfix_braid_free(b) };
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(braidfix_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/braidfix.h")).unwrap();
    for name in [
        "braidfix_version",
        "braidfix_last_error",
        "braidfix_solver_config_default",
        "braidfix_braid_parse",
        "braidfix_braid_free",
        "braidfix_braid_strands",
        "braidfix_braid_is_knot",
        "braidfix_analyze",
        "braidfix_analysis_free",
        "braidfix_analysis_lambda",
        "braidfix_analysis_class_count",
        "braidfix_analysis_class_index",
        "braidfix_analysis_signature",
        "braidfix_analysis_determinant",
        "braidfix_analysis_json",
        "braidfix_string_free",
        "typedef struct BraidfixBraid BraidfixBraid",
        "BRAIDFIX_STATUS_DEGENERATE = 7",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// Directory holding the freshly built static library.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = artifact_dir().join("libbraidfix_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status();
    let Ok(status) = status else {
        eprintln!("skipping: no C compiler");
        return;
    };
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
