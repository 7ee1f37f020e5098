use std::ffi::{CStr, CString};
use std::ptr;

use ikorder_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ik_last_error()) }.to_str().unwrap().to_owned()
}

fn mixture(json: &str) -> *mut IkMixture {
    let json = CString::new(json).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ik_mixture_from_json(json.as_ptr(), &mut m) }, IkStatus::Ok, "{}", last_error());
    m
}

#[test]
fn single_component_evaluators() {
    let mut v = f64::NAN;
    unsafe {
        assert_eq!(ik_cdf(1.0, 1.0, 1.0, &mut v), IkStatus::Ok);
        assert_eq!(v, 0.5);
        assert_eq!(ik_sf(1.0, 1.0, 1.0, &mut v), IkStatus::Ok);
        assert_eq!(v, 0.5);
        assert_eq!(ik_pdf(1.0, 1.0, 1.0, &mut v), IkStatus::Ok);
        assert_eq!(v, 0.25);
        assert_eq!(ik_reversed_hazard(1.0, 1.0, 1.0, &mut v), IkStatus::Ok);
        assert_eq!(v, 0.5);
        assert_eq!(ik_quantile(1.0, 1.0, 0.5, &mut v), IkStatus::Ok);
        assert_eq!(v, 1.0);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut v = 7.0;
    unsafe {
        assert_eq!(ik_cdf(0.0, 1.0, 1.0, &mut v), IkStatus::InvalidParameter);
        assert!(last_error().contains("alpha"));
        assert_eq!(v, 7.0);
        assert_eq!(ik_cdf(1.0, 1.0, -1.0, &mut v), IkStatus::Domain);
        assert_eq!(ik_quantile(1.0, 1.0, 2.0, &mut v), IkStatus::Domain);
        assert_eq!(ik_cdf(1.0, 1.0, 1.0, ptr::null_mut()), IkStatus::NullPointer);
        let mut m = ptr::null_mut();
        let bad = CString::new("{not json").unwrap();
        assert_eq!(ik_mixture_from_json(bad.as_ptr(), &mut m), IkStatus::Json);
        assert!(m.is_null());
        assert_eq!(ik_mixture_from_json(ptr::null(), &mut m), IkStatus::NullPointer);
        assert_eq!(ik_mixture_sf(ptr::null(), 1.0, &mut v), IkStatus::NullPointer);
    }
}

#[test]
fn mixture_lifecycle() {
    let m = mixture(r#"{"weights":[0.5,0.5],"alpha":[1,2],"beta":[1,1]}"#);
    let mut n = 0;
    let (mut cdf, mut sf, mut pdf, mut rh) = (0.0, 0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(ik_mixture_len(m, &mut n), IkStatus::Ok);
        assert_eq!(n, 2);
        assert_eq!(ik_mixture_cdf(m, 1.0, &mut cdf), IkStatus::Ok);
        assert_eq!(ik_mixture_sf(m, 1.0, &mut sf), IkStatus::Ok);
        assert_eq!(ik_mixture_pdf(m, 1.0, &mut pdf), IkStatus::Ok);
        assert_eq!(ik_mixture_reversed_hazard(m, 1.0, &mut rh), IkStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(ik_mixture_to_json(m, &mut text), IkStatus::Ok);
        let back = CStr::from_ptr(text).to_str().unwrap().to_owned();
        ik_string_free(text);
        let m2 = mixture(&back);
        let mut cdf2 = 0.0;
        ik_mixture_cdf(m2, 1.0, &mut cdf2);
        assert_eq!(cdf, cdf2);
        ik_mixture_free(m2);
        ik_mixture_free(m);
        ik_mixture_free(ptr::null_mut());
    }
    assert_eq!(cdf, 0.5 * 0.5 + 0.5 * 0.75);
    assert!((cdf + sf - 1.0).abs() < 1e-15);
    assert!((rh - pdf / cdf).abs() < 1e-15);
}

#[test]
fn mixture_from_arrays() {
    let (w, a, b) = ([0.2, 0.8], [1.0, 2.0], [3.0, 0.5]);
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(ik_mixture_new(w.as_ptr(), a.as_ptr(), b.as_ptr(), 2, &mut m), IkStatus::Ok);
        ik_mixture_free(m);
        let w = [0.2, 0.2];
        assert_eq!(ik_mixture_new(w.as_ptr(), a.as_ptr(), b.as_ptr(), 2, &mut m), IkStatus::InvalidParameter);
    }
}

#[test]
fn order_check_through_handles() {
    // same components, weight moved towards the larger alpha
    let m1 = mixture(r#"{"weights":[0.7,0.3],"alpha":[1,3],"beta":[1,1]}"#);
    let m2 = mixture(r#"{"weights":[0.3,0.7],"alpha":[1,3],"beta":[1,1]}"#);
    let mut v = unsafe { std::mem::zeroed::<IkVerdict>() };
    unsafe {
        assert_eq!(ik_check_order(IkOrderKind::St, m2, m1, ptr::null(), &mut v), IkStatus::Ok);
        assert_eq!(v.status, IkOrderStatus::HoldsOnGrid);
        assert_eq!(v.has_witness, 0);
        assert!(v.witness_x.is_nan());
        assert_eq!(v.points, 2000);
        let grid = IkGrid { x_min: 0.01, x_max: 100.0, points: 300, log_spacing: 1 };
        assert_eq!(ik_check_order(IkOrderKind::St, m1, m2, &grid, &mut v), IkStatus::Ok);
        assert_eq!(v.status, IkOrderStatus::Violated);
        assert_eq!(v.has_witness, 1);
        assert!(v.witness_x >= 0.01 && v.witness_x <= 100.0);
        assert_eq!(v.points, 300);
        let bad = IkGrid { x_min: 10.0, x_max: 1.0, points: 5, log_spacing: 0 };
        assert_eq!(ik_check_order(IkOrderKind::St, m1, m2, &bad, &mut v), IkStatus::InvalidParameter);
        ik_mixture_free(m1);
        ik_mixture_free(m2);
    }
}

#[test]
fn default_grid() {
    let g = ik_grid_default();
    assert_eq!((g.x_min, g.x_max, g.points, g.log_spacing), (1e-4, 1e4, 2000, 1));
}

#[test]
fn check_case_report() {
    let case = CString::new(
        r#"{"theorem":"T3.12","alpha":[1,3],"beta":[2,1],"alpha_star":[4,5],"beta_star":[1,1],"p":[0.5,0.5],"p_star":[0.5,0.5]}"#,
    )
    .unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(ik_check_case(case.as_ptr(), &mut out), IkStatus::Ok, "{}", last_error());
        let report: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        ik_string_free(out);
        assert_eq!(report["theorem"], "T3.12");
        assert!(report["hypotheses"].as_array().unwrap().len() >= 2);
    }
}

#[test]
fn reproduce_fixture() {
    let id = CString::new("ex3.4").unwrap();
    let (mut out, mut ok) = (ptr::null_mut(), -1);
    unsafe {
        assert_eq!(ik_reproduce(id.as_ptr(), &mut out, &mut ok), IkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        ik_string_free(out);
        assert_eq!(ok, 1);
        assert_eq!(v[0]["id"], "ex3.4");
        let missing = CString::new("zz").unwrap();
        assert_eq!(ik_reproduce(missing.as_ptr(), &mut out, &mut ok), IkStatus::UnknownFixture);
    }
}

#[test]
fn k1_matches_core() {
    let mut v = 0.0;
    assert_eq!(unsafe { ik_k1(10.0, &mut v) }, IkStatus::Ok);
    assert_eq!(v, ikorder::oracles::k1(10.0).unwrap());
}

#[test]
fn last_error_is_per_thread() {
    let mut v = 0.0;
    unsafe { ik_cdf(-1.0, 1.0, 1.0, &mut v) };
    let other = std::thread::spawn(last_error).join().unwrap();
    assert!(other.is_empty());
    assert!(!last_error().is_empty());
}
