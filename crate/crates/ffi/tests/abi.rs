use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use grasspair_ffi::*;

fn matrix(rows: usize, cols: usize, re: &[f64]) -> *mut GpMatrix {
    let data: Vec<f64> = re.iter().flat_map(|&x| [x, 0.0]).collect();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { gp_matrix_new(rows, cols, data.as_ptr(), &mut m) },
        GpStatus::Ok
    );
    m
}

fn last_error() -> String {
    let p = gp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

// P projects onto e0, Q onto (cos θ, sin θ) in C^2.
fn rotated_pair(theta: f64) -> *mut GpPair {
    let (c, s) = (theta.cos(), theta.sin());
    let p = matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let q = matrix(2, 2, &[c * c, c * s, c * s, s * s]);
    let mut pair = ptr::null_mut();
    assert_eq!(unsafe { gp_pair_new(p, q, &mut pair) }, GpStatus::Ok);
    unsafe {
        gp_matrix_free(p);
        gp_matrix_free(q);
    }
    pair
}

#[test]
fn matrix_roundtrip_and_shape() {
    let m = matrix(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    unsafe {
        assert_eq!(gp_matrix_rows(m), 2);
        assert_eq!(gp_matrix_cols(m), 3);
        let mut buf = [0.0; 12];
        assert_eq!(gp_matrix_copy_data(m, buf.as_mut_ptr(), 12), GpStatus::Ok);
        assert_eq!(buf[10], 6.0);
        assert_eq!(gp_matrix_copy_data(m, buf.as_mut_ptr(), 4), GpStatus::InvalidArgument);
        gp_matrix_free(m);
    }
}

#[test]
fn matrix_from_json_reports_parse_errors() {
    let good = CString::new(r#"{"rows":1,"cols":1,"data":[[0.5,0.0]]}"#).unwrap();
    let bad = CString::new(r#"{"rows":2,"cols":1,"data":[[0.5,0.0]]}"#).unwrap();
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(gp_matrix_from_json(good.as_ptr(), &mut m), GpStatus::Ok);
        gp_matrix_free(m);
        assert_eq!(gp_matrix_from_json(bad.as_ptr(), &mut m), GpStatus::Parse);
        assert!(m.is_null());
    }
    assert!(last_error().contains("entries"));
}

#[test]
fn null_handles_are_rejected() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(gp_pair_new(ptr::null(), ptr::null(), &mut out), GpStatus::NullPointer);
        assert_eq!(gp_matrix_rows(ptr::null()), 0);
        assert!(gp_pair_distance(ptr::null()).is_nan());
        gp_pair_free(ptr::null_mut());
        gp_string_free(ptr::null_mut());
    }
}

#[test]
fn non_projection_is_rejected() {
    let p = matrix(2, 2, &[1.0, 1.0, 0.0, 0.0]);
    let mut pair = ptr::null_mut();
    unsafe {
        let st = gp_pair_new(p, p, &mut pair);
        assert!(st == GpStatus::NotProjection, "{st:?}");
        gp_matrix_free(p);
    }
}

#[test]
fn generic_pair_dims_angles_and_certificate() {
    let theta = 0.4;
    let pair = rotated_pair(theta);
    unsafe {
        let mut d = GpDims::default();
        assert_eq!(gp_pair_dims(pair, &mut d), GpStatus::Ok);
        assert_eq!((d.n, d.d11, d.d00, d.d10, d.d01, d.generic_dim), (2, 0, 0, 0, 0, 2));

        let mut count = 0;
        let mut angles = [0.0; 4];
        assert_eq!(gp_pair_angles(pair, angles.as_mut_ptr(), 4, &mut count), GpStatus::Ok);
        assert_eq!(count, 1);
        assert!((angles[0] - theta).abs() < 1e-12);
        assert!((gp_pair_distance(pair) - theta.sin()).abs() < 1e-12);

        let mut idx = 99;
        assert_eq!(gp_pair_fredholm_index(pair, &mut idx), GpStatus::Ok);
        assert_eq!(idx, 0);

        let mut cert = ptr::null_mut();
        assert_eq!(gp_pair_decide(pair, &mut cert), GpStatus::Ok);
        let (mut rs, mut rt, mut dps, mut dpt) = (0.0, 0.0, 0.0, 0.0);
        assert_eq!(
            gp_certificate_residuals(cert, &mut rs, &mut rt, &mut dps, &mut dpt),
            GpStatus::Ok
        );
        assert!(rs > 1e-8 && rt > 1e-8);
        assert!(dps < 1.0 && dpt < 1.0);
        let mut z = ptr::null_mut();
        assert_eq!(gp_certificate_basis(cert, &mut z), GpStatus::Ok);
        assert_eq!((gp_matrix_rows(z), gp_matrix_cols(z)), (2, 1));
        gp_matrix_free(z);
        gp_certificate_free(cert);

        let mut g = ptr::null_mut();
        assert_eq!(gp_pair_geodesic(pair, 1.0, &mut g), GpStatus::Ok);
        let mut buf = [0.0; 8];
        gp_matrix_copy_data(g, buf.as_mut_ptr(), 8);
        let expect = [
            theta.cos().powi(2),
            theta.cos() * theta.sin(),
            theta.cos() * theta.sin(),
            theta.sin().powi(2),
        ];
        for (k, e) in expect.iter().enumerate() {
            assert!((buf[2 * k] - e).abs() < 1e-10);
        }
        gp_matrix_free(g);
        gp_pair_free(pair);
    }
}

#[test]
fn rank_mismatch_has_no_complement() {
    let p = matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let q = matrix(2, 2, &[0.0; 4]);
    let mut pair = ptr::null_mut();
    unsafe {
        assert_eq!(gp_pair_new(p, q, &mut pair), GpStatus::Ok);
        let mut cert = ptr::null_mut();
        assert_eq!(gp_pair_decide(pair, &mut cert), GpStatus::NoComplement);
        assert!(cert.is_null());
        assert!(last_error().contains("rank"));
        let mut g = ptr::null_mut();
        assert_eq!(gp_pair_geodesic(pair, 0.5, &mut g), GpStatus::NoGeodesic);
        let mut idx = 0;
        gp_pair_fredholm_index(pair, &mut idx);
        assert_eq!(idx, 1);
        gp_pair_free(pair);
        gp_matrix_free(p);
        gp_matrix_free(q);
    }
}

#[test]
fn json_reports() {
    let pair = rotated_pair(0.3);
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(gp_pair_analyze_json(pair, 7, &mut s), GpStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(v["label"], "Delta_fin(1,1)");
        assert_eq!(v["seed"], 7);
        assert!(v["certificate"].is_object());
        gp_string_free(s);
        gp_pair_free(pair);

        let name = CString::new("codivisible_blaschke").unwrap();
        let params = CString::new(r#"{"n":1}"#).unwrap();
        let levels = [16usize, 32, 64];
        assert_eq!(
            gp_classify_example(name.as_ptr(), params.as_ptr(), levels.as_ptr(), 3, &mut s),
            GpStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(v["label"], "Gamma_1(1)");
        gp_string_free(s);

        let bogus = CString::new("no_such_example").unwrap();
        assert_eq!(
            gp_classify_example(bogus.as_ptr(), ptr::null(), levels.as_ptr(), 3, &mut s),
            GpStatus::InvalidArgument
        );
        assert!(s.is_null());
    }
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/grasspair.h")).unwrap();
    for sym in [
        "typedef struct GpMatrix GpMatrix",
        "typedef struct GpPair GpPair",
        "typedef struct GpCertificate GpCertificate",
        "GP_STATUS_NO_COMPLEMENT = 5",
        "gp_pair_decide",
        "gp_classify_example",
        "gp_last_error_message",
        "gp_string_free",
    ] {
        assert!(header.contains(sym), "missing {sym}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let profile_dir = target
        .parent()
        .unwrap()
        .join(if cfg!(debug_assertions) { "debug" } else { "release" });
    let lib = profile_dir.join("libgrasspair_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler not available");
        return;
    }
    let src = target.join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "grasspair.h"
int main(void) {
    double p[8] = {1,0, 0,0, 0,0, 0,0};
    double q[8] = {0.5,0, 0.5,0, 0.5,0, 0.5,0};
    GpMatrix *mp = NULL, *mq = NULL;
    GpPair *pair = NULL;
    GpCertificate *cert = NULL;
    if (gp_matrix_new(2, 2, p, &mp) || gp_matrix_new(2, 2, q, &mq)) return 1;
    if (gp_pair_new(mp, mq, &pair)) return 2;
    GpDims d;
    if (gp_pair_dims(pair, &d) || d.generic_dim != 2) return 3;
    if (gp_pair_decide(pair, &cert) != GP_STATUS_OK) return 4;
    gp_certificate_free(cert);
    gp_pair_free(pair);
    gp_matrix_free(mp);
    gp_matrix_free(mq);
    printf("ok\n");
    return 0;
}
"#,
    )
    .unwrap();
    let exe = target.join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
