use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use catlogic_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

const CHAIN: &str = r#"{"objects":["0","1"],"morphisms":[{"id":"i0","dom":"0","cod":"0"},{"id":"i1","dom":"1","cod":"1"},{"id":"u","dom":"0","cod":"1"}],"identity":{"0":"i0","1":"i1"}}"#;

#[test]
fn category_roundtrip() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(catlogic_category_from_json(c(CHAIN).as_ptr(), &mut h), CatlogicStatus::Ok);
        assert_eq!(catlogic_category_num_objects(h), 2);
        assert_eq!(catlogic_category_num_morphisms(h), 3);
        let mut k = CatlogicClassification::default();
        assert_eq!(catlogic_category_classify(h, &mut k), CatlogicStatus::Ok);
        assert!(k.is_lex && k.is_regular && k.is_exact);
        catlogic_category_free(h);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(catlogic_category_from_json(c("{").as_ptr(), &mut h), CatlogicStatus::InvalidInput);
        assert!(h.is_null());
        let msg = CStr::from_ptr(catlogic_last_error()).to_str().unwrap();
        assert!(msg.contains("EOF"), "{msg}");
        assert_eq!(catlogic_category_from_json(ptr::null(), &mut h), CatlogicStatus::NullPointer);
        let mut k = CatlogicClassification::default();
        assert_eq!(catlogic_category_classify(ptr::null(), &mut k), CatlogicStatus::NullPointer);
        let mut r = ptr::null_mut();
        assert_eq!(catlogic_ring_new(c("q7").as_ptr(), &mut r), CatlogicStatus::InvalidInput);
        catlogic_category_free(ptr::null_mut());
        catlogic_ring_free(ptr::null_mut());
        catlogic_string_free(ptr::null_mut());
    }
}

#[test]
fn pp_implication_over_z4() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(catlogic_ring_new(c("z4").as_ptr(), &mut r), CatlogicStatus::Ok);
        assert_eq!(catlogic_ring_size(r), 4);
        let mut out = true;
        assert_eq!(catlogic_pp_implies(r, c("E y: x = 2*y").as_ptr(), c("x = 0").as_ptr(), &mut out), CatlogicStatus::Ok);
        assert!(!out);
        assert_eq!(catlogic_pp_implies(r, c("x = 0").as_ptr(), c("E y: x = 2*y").as_ptr(), &mut out), CatlogicStatus::Ok);
        assert!(out);
        assert_eq!(catlogic_pp_implies(r, c("x = ").as_ptr(), c("x = 0").as_ptr(), &mut out), CatlogicStatus::InvalidInput);
        catlogic_ring_free(r);
    }
}

#[test]
fn empty_oracle_report() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(catlogic_oracle_suite(1, 0, &mut s), CatlogicStatus::Ok);
        let json: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(json["passed"], true);
        assert_eq!(json["checks"].as_array().unwrap().len(), 14);
        catlogic_string_free(s);
    }
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/catlogic.h")).unwrap();
    for name in ["catlogic_category_from_json", "catlogic_pp_implies", "catlogic_last_error", "CATLOGIC_STATUS_INVALID_INPUT"] {
        assert!(h.contains(name), "{name}");
    }
}

/// Compiles a C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libcatlogic_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = std::env::temp_dir().join(format!("catlogic-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "catlogic.h"
int main(void) {
    CatlogicRing *r = NULL;
    if (catlogic_ring_new("z6", &r) != CATLOGIC_STATUS_OK) return 10;
    bool out = false;
    if (catlogic_pp_implies(r, "x = 0", "E y: x = 3*y", &out) != CATLOGIC_STATUS_OK || !out) return 11;
    if (catlogic_pp_implies(r, "x = x", "x = 0", &out) != CATLOGIC_STATUS_OK || out) return 12;
    catlogic_ring_free(r);
    CatlogicCategory *c = NULL;
    if (catlogic_category_from_json("[]", &c) != CATLOGIC_STATUS_INVALID_INPUT) return 13;
    if (catlogic_last_error() == NULL) return 14;
    puts("ok");
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
