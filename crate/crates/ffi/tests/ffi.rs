use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use faultlattice_ffi::*;

fn last_error() -> String {
    let p = fl_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn full_grid(size: usize) -> *mut FlGrid {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { fl_grid_sample(size, 1.0, 0, &mut g) }, FlStatus::Ok);
    g
}

#[test]
fn grid_round_trip() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(fl_grid_sample(12, 0.7, 5, &mut g), FlStatus::Ok);
        assert_eq!(fl_grid_size(g), 12);
        let mut text = ptr::null_mut();
        assert_eq!(fl_grid_to_text(g, &mut text), FlStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(fl_grid_from_text(text, &mut h), FlStatus::Ok);
        assert_eq!(fl_grid_occupied_count(g), fl_grid_occupied_count(h));
        let mut occ = false;
        assert_eq!(fl_grid_is_occupied(h, 0, 0, &mut occ), FlStatus::Ok);
        assert_eq!(fl_grid_is_occupied(h, 12, 0, &mut occ), FlStatus::InvalidArgument);
        fl_string_free(text);
        fl_grid_free(g);
        fl_grid_free(h);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(fl_grid_sample(5, 1.5, 0, &mut g), FlStatus::InvalidArgument);
        assert!(last_error().contains("1.5"));
        assert!(g.is_null());
        assert_eq!(fl_grid_sample(5, 0.5, 0, ptr::null_mut()), FlStatus::NullPointer);
        let bad = CString::new("2 0.5 1\n10\n").unwrap();
        assert_eq!(fl_grid_from_text(bad.as_ptr(), &mut g), FlStatus::InvalidArgument);
        assert_eq!(fl_grid_size(ptr::null()), 0);
        fl_grid_free(ptr::null_mut());
        fl_string_free(ptr::null_mut());
        let mut out = 0.0;
        assert_eq!(fl_gamma_epsilon(1.0, 1.0, 0.65, 0.1, &mut out), FlStatus::InvalidArgument);
    }
}

#[test]
fn concentrate_full_grid() {
    unsafe {
        let g = full_grid(9);
        let mut c = ptr::null_mut();
        assert_eq!(fl_concentrate(g, 1, &mut c), FlStatus::Ok);
        assert_eq!(fl_concentration_rows(c), 3);
        assert_eq!(fl_concentration_qubit_count(c) + fl_concentration_measurement_count(c), 81);
        let mut json = ptr::null_mut();
        assert_eq!(fl_concentration_to_json(c, &mut json), FlStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert!(value["measurements"]["measurements"].is_array());
        fl_string_free(json);
        fl_concentration_free(c);
        let mut passed = false;
        assert_eq!(fl_verify(g, 1, &mut passed), FlStatus::Ok);
        assert!(passed);
        let mut m = 0;
        assert_eq!(fl_max_disjoint_crossings(g, &mut m), FlStatus::Ok);
        assert_eq!(m, 9);
        fl_grid_free(g);
    }
}

#[test]
fn not_applicable_and_oversize() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(fl_grid_sample(20, 0.2, 3, &mut g), FlStatus::Ok);
        let mut c = ptr::null_mut();
        assert_eq!(fl_concentrate(g, 0, &mut c), FlStatus::NotApplicable);
        assert!(c.is_null());
        fl_grid_free(g);
        let big = full_grid(30);
        let mut passed = true;
        assert_eq!(fl_verify(big, 0, &mut passed), FlStatus::InvalidArgument);
        assert!(last_error().contains("size limit"));
        fl_grid_free(big);
    }
}

#[test]
fn statistics() {
    unsafe {
        let (mut e, mut s) = (0.0, 0.0);
        assert_eq!(fl_crossing_probability(10, 1.0, 20, 0, &mut e, &mut s), FlStatus::Ok);
        assert_eq!((e, s), (1.0, 0.0));
        let mut g = 0.0;
        assert_eq!(fl_gamma_epsilon(0.5, 0.0, 0.9, 0.05, &mut g), FlStatus::Ok);
        assert_eq!(g, 0.5);
    }
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/faultlattice.h")).unwrap();
    for name in [
        "FL_STATUS_NULL_POINTER = 4",
        "typedef struct FlGrid FlGrid",
        "fl_grid_sample",
        "fl_concentrate",
        "fl_verify",
        "fl_last_error_message",
        "fl_gamma_epsilon",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

fn static_lib() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libfaultlattice_ffi.a");
    if !lib.exists() {
        let profile = match profile_dir.file_name().and_then(|n| n.to_str()) {
            Some("debug") => "dev",
            Some(other) => other,
            None => "dev",
        };
        let status = Command::new(env!("CARGO"))
            .args(["build", "-p", "faultlattice-ffi", "--lib", "--profile", profile, "--target-dir"])
            .arg(profile_dir.parent().unwrap())
            .current_dir(env!("CARGO_MANIFEST_DIR"))
            .status()
            .expect("cargo available");
        assert!(status.success());
    }
    lib
}

#[test]
fn c_program_links_against_static_library() {
    let lib = static_lib();
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "faultlattice.h"
int main(void) {
    FlGrid *g = NULL;
    if (fl_grid_sample(9, 1.0, 0, &g) != FL_STATUS_OK) return 1;
    FlConcentration *c = NULL;
    if (fl_concentrate(g, 0, &c) != FL_STATUS_OK) return 2;
    bool ok = false;
    if (fl_verify(g, 0, &ok) != FL_STATUS_OK || !ok) return 3;
    if (fl_grid_sample(4, 2.0, 0, &g) != FL_STATUS_INVALID_ARGUMENT) return 4;
    printf("%zu %zu\n", fl_concentration_rows(c), fl_concentration_cols(c));
    fl_concentration_free(c);
    fl_grid_free(g);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "3 3");
}
