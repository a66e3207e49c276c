//! Tests of the C ABI: handle lifecycle, status codes, error messages, and
//! curvature/report calls exercised exactly as a C caller would.

use homfin_ffi::*;
use std::ffi::{c_char, CStr, CString};

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe {
        let mut buf = vec![0i8; 256];
        let n = hf_last_error(buf.as_mut_ptr() as *mut c_char, buf.len());
        assert!(n < buf.len());
        CStr::from_ptr(buf.as_ptr() as *const c_char)
            .to_string_lossy()
            .into_owned()
    }
}

#[test]
fn algebra_lifecycle_and_residual() {
    unsafe {
        let mut a: *mut HfAlgebra = std::ptr::null_mut();
        assert_eq!(hf_algebra_new(c("G2").as_ptr(), 2, &mut a), HfStatus::Ok);
        let mut dim = 0usize;
        assert_eq!(hf_algebra_dim(a, &mut dim), HfStatus::Ok);
        assert_eq!(dim, 14);
        let mut res = f64::NAN;
        assert_eq!(hf_algebra_jacobi_residual(a, &mut res), HfStatus::Ok);
        assert!(res < 1e-10, "{res}");
        hf_algebra_free(a);
    }
}

#[test]
fn bad_family_reports_an_error_message() {
    unsafe {
        let mut a: *mut HfAlgebra = std::ptr::null_mut();
        let st = hf_algebra_new(c("Z9").as_ptr(), 2, &mut a);
        assert_ne!(st, HfStatus::Ok);
        assert!(!last_error().is_empty());
        assert_eq!(
            hf_algebra_new(std::ptr::null(), 2, &mut a),
            HfStatus::NullPointer
        );
    }
}

#[test]
fn split_and_curvature_through_the_abi() {
    unsafe {
        let mut s: *mut HfSplit = std::ptr::null_mut();
        assert_eq!(hf_split_case(c("C1").as_ptr(), &mut s), HfStatus::Ok);

        let mut dm = 0usize;
        assert_eq!(hf_split_dim_m(s, &mut dm), HfStatus::Ok);
        assert_eq!(dm, 9);
        let mut ns = 0usize;
        assert_eq!(hf_split_num_summands(s, &mut ns), HfStatus::Ok);
        assert_eq!(ns, 4);
        let mut dims = [0usize; 4];
        assert_eq!(
            hf_split_summand_dims(s, dims.as_mut_ptr(), dims.len()),
            HfStatus::Ok
        );
        assert_eq!(dims, [1, 4, 2, 2]);
        let mut gap = 0usize;
        assert_eq!(hf_split_rank_gap(s, &mut gap), HfStatus::Ok);
        assert_eq!(gap, 1);

        let coeffs = [1.0, 2.0, 0.5, 3.0];
        let mut n: *mut HfNorm = std::ptr::null_mut();
        assert_eq!(
            hf_norm_diagonal(s, coeffs.as_ptr(), coeffs.len(), &mut n),
            HfStatus::Ok
        );

        let mut k = f64::NAN;
        assert_eq!(
            hf_flag_curvature(
                s,
                n,
                c("u[2e1]").as_ptr(),
                c("u[2e2]").as_ptr(),
                1e-9,
                &mut k
            ),
            HfStatus::Ok
        );
        assert!(k.abs() < 1e-12, "{k}");

        // non-commuting flag: precondition failure with a message
        let st = hf_flag_curvature(
            s,
            n,
            c("u[2e1]").as_ptr(),
            c("u[e1+e2]").as_ptr(),
            1e-9,
            &mut k,
        );
        assert_eq!(st, HfStatus::PreconditionViolated);
        assert!(last_error().contains("[y, v]"), "{}", last_error());

        hf_norm_free(n);
        hf_split_free(s);
    }
}

#[test]
fn norm_eval_and_randers_through_the_abi() {
    unsafe {
        let mut s: *mut HfSplit = std::ptr::null_mut();
        assert_eq!(
            hf_split_case(c("AW_degenerate").as_ptr(), &mut s),
            HfStatus::Ok
        );
        let coeffs = [1.0, 1.0];
        let mut n: *mut HfNorm = std::ptr::null_mut();
        assert_eq!(
            hf_norm_randers(s, coeffs.as_ptr(), coeffs.len(), 0.3, &mut n),
            HfStatus::Ok
        );
        // F(+e_s) = 1 + b, F(-e_s) = 1 - b on the unit central direction
        let mut dm = 0usize;
        hf_split_dim_m(s, &mut dm);
        let mut y = vec![0.0f64; dm];
        y[dm - 1] = 1.0;
        let mut f = f64::NAN;
        assert_eq!(hf_norm_eval(s, n, y.as_ptr(), dm, &mut f), HfStatus::Ok);
        assert!((f - 1.3).abs() < 1e-12, "{f}");
        y[dm - 1] = -1.0;
        assert_eq!(hf_norm_eval(s, n, y.as_ptr(), dm, &mut f), HfStatus::Ok);
        assert!((f - 0.7).abs() < 1e-12, "{f}");
        // length mismatch is rejected
        assert_eq!(
            hf_norm_eval(s, n, y.as_ptr(), dm - 1, &mut f),
            HfStatus::InvalidArgument
        );
        hf_norm_free(n);
        hf_split_free(s);
    }
}

#[test]
fn verify_case_json_round_trips() {
    unsafe {
        let mut json: *mut std::ffi::c_char = std::ptr::null_mut();
        assert_eq!(
            hf_verify_case_json(c("C2").as_ptr(), 2, 20, 0, 1e-9, &mut json),
            HfStatus::Ok
        );
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        hf_string_free(json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["case_id"], "C2");
        assert_eq!(v["verdict"], "obstructed");
        assert_eq!(v["summand_dims"], serde_json::json!([3, 6]));
    }
}

#[test]
fn invalid_norm_shape_is_rejected() {
    unsafe {
        let mut s: *mut HfSplit = std::ptr::null_mut();
        assert_eq!(hf_split_case(c("C1").as_ptr(), &mut s), HfStatus::Ok);
        // randers shape needs a one-dimensional last summand; C1's reference
        // order ends with a 2-dimensional root plane
        let coeffs = [1.0, 1.0, 1.0];
        let mut n: *mut HfNorm = std::ptr::null_mut();
        let st = hf_norm_randers(s, coeffs.as_ptr(), coeffs.len(), 0.3, &mut n);
        assert_ne!(st, HfStatus::Ok);
        hf_split_free(s);
    }
}
