use std::ffi::CStr;
use std::ptr;

use cyclogap_ffi::*;

fn last_error() -> String {
    let p = cg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

unsafe fn coeffs(poly: *const CgPoly) -> Vec<i64> {
    let mut buf = vec![0; cg_poly_len(poly)];
    assert_eq!(cg_poly_coeffs(poly, buf.as_mut_ptr(), buf.len()), CgStatus::Ok);
    buf
}

#[test]
fn polynomials_round_trip() {
    unsafe {
        let mut phi = ptr::null_mut();
        assert_eq!(cg_phi(15, &mut phi), CgStatus::Ok);
        assert_eq!(coeffs(phi), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);

        let mut s = ptr::null_mut();
        assert_eq!(cg_poly_to_string(phi, &mut s), CgStatus::Ok);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "1 - x + x^3 - x^4 + x^5 - x^7 + x^8");
        cg_string_free(s);

        let mut gap = 0;
        assert_eq!(cg_poly_max_gap(phi, &mut gap), CgStatus::Ok);
        assert_eq!(gap, 2);
        cg_poly_free(phi);

        let mut psi = ptr::null_mut();
        assert_eq!(cg_psi(7, &mut psi), CgStatus::Ok);
        assert_eq!(coeffs(psi), vec![-1, 1]);
        cg_poly_free(psi);

        let mut short = [0i64; 1];
        let mut p = ptr::null_mut();
        assert_eq!(cg_poly_from_coeffs([3i64, 0, 5].as_ptr(), 3, &mut p), CgStatus::Ok);
        assert_eq!(cg_poly_coeffs(p, short.as_mut_ptr(), 1), CgStatus::BufferTooSmall);
        cg_poly_free(p);

        let mut zero = ptr::null_mut();
        assert_eq!(cg_poly_from_coeffs(ptr::null(), 0, &mut zero), CgStatus::Ok);
        assert_eq!(cg_poly_len(zero), 0);
        assert_eq!(cg_poly_max_gap(zero, &mut gap), CgStatus::InvalidArgument);
        cg_poly_free(zero);
    }
}

#[test]
fn assembly_matches_reference() {
    unsafe {
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(cg_assemble_phi_mp(105, 499, &mut a), CgStatus::Ok);
        assert_eq!(cg_phi(105 * 499, &mut b), CgStatus::Ok);
        assert_eq!(coeffs(a), coeffs(b));
        cg_poly_free(a);
        cg_poly_free(b);
    }
}

#[test]
fn gaps_and_reports() {
    unsafe {
        let mut gap = 0;
        assert_eq!(cg_gap(35, &mut gap), CgStatus::Ok);
        assert_eq!(gap, 4);
        assert_eq!(cg_max_gap_via_blocks(105, 211, &mut gap), CgStatus::Ok);
        assert_eq!(gap, 48);

        let mut report = ptr::null_mut();
        assert_eq!(cg_block_gap_report(3, 5, &mut report), CgStatus::Ok);
        assert_eq!(cg_gap_report_gap(report, &mut gap), CgStatus::Ok);
        assert_eq!(gap, 2);
        let mut needed = 0;
        assert_eq!(
            cg_gap_report_table(report, CgTable::BetweenR, ptr::null_mut(), 0, &mut needed),
            CgStatus::BufferTooSmall
        );
        assert_eq!(needed, 2);
        let mut buf = [0usize; 2];
        assert_eq!(
            cg_gap_report_table(report, CgTable::BetweenR, buf.as_mut_ptr(), 2, &mut needed),
            CgStatus::Ok
        );
        assert_eq!(buf, [2, 1]);
        cg_gap_report_free(report);
    }
}

#[test]
fn verification_handle() {
    unsafe {
        let mut v = ptr::null_mut();
        assert_eq!(cg_verify_instance(15, 53, &mut v), CgStatus::Ok);
        assert_eq!(cg_verification_all_passed(v), 1);
        assert_eq!(cg_check_count(), 13);
        assert_eq!(CStr::from_ptr(cg_check_name(0)).to_str().unwrap(), "relation_1");
        assert!(cg_check_name(13).is_null());
        let mut passed = 0;
        for k in 0..cg_check_count() {
            assert_eq!(cg_verification_check(v, k, &mut passed), CgStatus::Ok);
            assert_eq!(passed, 1);
        }
        assert_eq!(cg_verification_check(v, 99, &mut passed), CgStatus::InvalidArgument);

        let mut json = ptr::null_mut();
        assert_eq!(cg_verification_to_json(v, &mut json), CgStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(value["gap"], 8);
        cg_string_free(json);
        cg_verification_free(v);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    unsafe {
        let mut v = ptr::null_mut();
        assert_eq!(cg_verify_instance(9, 11, &mut v), CgStatus::NotSquarefree);
        assert!(last_error().contains("NotSquarefree"));
        assert!(v.is_null());
        assert_eq!(cg_verify_instance(4, 11, &mut v), CgStatus::NotOdd);
        assert_eq!(cg_verify_instance(15, 13, &mut v), CgStatus::PrimeNotLarger);
        assert_eq!(cg_verify_instance(15, 21, &mut v), CgStatus::NotPrime);

        let mut p = ptr::null_mut();
        assert_eq!(cg_phi(0, &mut p), CgStatus::InvalidArgument);
        assert_eq!(cg_phi(2_000_000, &mut p), CgStatus::CapExceeded);
        assert_eq!(cg_phi(5, ptr::null_mut()), CgStatus::NullPointer);

        assert_eq!(cg_gap(35, &mut 0), CgStatus::Ok);
        assert!(cg_last_error().is_null());

        cg_poly_free(ptr::null_mut());
        cg_verification_free(ptr::null_mut());
    }
}
