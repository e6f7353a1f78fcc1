use std::ffi::{c_char, CStr, CString};
use std::ptr;

use sadic_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { sadic_string_free(s) };
    out
}

fn last_error() -> String {
    take(sadic_last_error())
}

fn paper() -> *mut SadicFamily {
    let mut fam = ptr::null_mut();
    assert_eq!(unsafe { sadic_family_paper(&mut fam) }, SadicStatus::Ok);
    fam
}

fn mini() -> *mut SadicFamily {
    let mut fam = ptr::null_mut();
    assert_eq!(unsafe { sadic_family_mini(&mut fam) }, SadicStatus::Ok);
    fam
}

#[test]
fn hypothesis_and_parikh() {
    let fam = paper();
    let mut ok = false;
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { sadic_hypothesis_check(fam, 1, &mut ok, &mut json) }, SadicStatus::Ok);
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["level"], 1);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { sadic_parikh_uv(fam, 0, 2, &mut json) }, SadicStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["u"]["zeros"], "16842752");
    assert_eq!(v["u"]["ones"], "4456448");
    unsafe { sadic_family_free(fam) };
}

#[test]
fn complexity_values() {
    let fam = paper();
    let mut s = 0u8;
    for (n, expected) in [("0", 1), ("64", 2), ("65", 3), ("255", 3), ("256", 2), ("385", 3)] {
        let n = CString::new(n).unwrap();
        assert_eq!(unsafe { sadic_s_symbolic(fam, n.as_ptr(), &mut s) }, SadicStatus::Ok);
        assert_eq!(s, expected);
    }
    let mut out = ptr::null_mut();
    let n = CString::new("0").unwrap();
    assert_eq!(unsafe { sadic_p_symbolic(fam, n.as_ptr(), &mut out) }, SadicStatus::Ok);
    assert_eq!(take(out), "1");
    let n = CString::new("100").unwrap();
    assert_eq!(unsafe { sadic_p_symbolic(fam, n.as_ptr(), &mut out) }, SadicStatus::Ok);
    // 2n plus the 35 values k in (64, 99] with s(k) = 3
    assert_eq!(take(out), "235");
    let big = CString::new("2^160").unwrap();
    assert_eq!(unsafe { sadic_p_symbolic(fam, big.as_ptr(), &mut out) }, SadicStatus::Ok);
    let p: num_bigint::BigUint = take(out).parse().unwrap();
    let n = num_bigint::BigUint::from(1u32) << 160;
    assert!(p >= &n * 2u32 && p <= n * 3u32 + 1u32);
    unsafe { sadic_family_free(fam) };
}

#[test]
fn words_and_bounds() {
    let fam = mini();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sadic_generate_word(fam, 0, 1, SadicWhich::U, &mut out) }, SadicStatus::Ok);
    assert_eq!(take(out), "0000000011");
    assert_eq!(unsafe { sadic_generate_word(fam, 0, 0, SadicWhich::V, &mut out) }, SadicStatus::Ok);
    assert_eq!(take(out), "1");
    assert_eq!(unsafe { sadic_prefix(fam, 0, 12, &mut out) }, SadicStatus::Ok);
    assert_eq!(take(out), "000000001100");
    assert_eq!(unsafe { sadic_recurrence_bound(fam, 0, &mut out) }, SadicStatus::Ok);
    assert_eq!(take(out), "33");
    assert_eq!(unsafe { sadic_recurrence_bound(fam, 1, &mut out) }, SadicStatus::Ok);
    assert_eq!(take(out), "82000");
    unsafe { sadic_family_free(fam) };

    let fam = paper();
    assert_eq!(unsafe { sadic_excess_report_json(fam, 2, &mut out) }, SadicStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["floor_ok"], true);
    unsafe { sadic_family_free(fam) };
}

#[test]
fn desubstitution_roundtrip() {
    let fam = mini();
    // 1^2 σ_0(01) 0^8 1^2 with σ_0(0) = 0^8 1^2, σ_0(1) = 0^8 1^32
    let word = format!("11{}{}{}{}", "0".repeat(8) + "11", "0".repeat(8) + &"1".repeat(32), "0".repeat(8), "11");
    let word = CString::new(word).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sadic_desubstitute(fam, 0, word.as_ptr(), &mut out) }, SadicStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["s"], "1^2");
    assert_eq!(v["v"], "01");
    assert_eq!(v["p"], "0^8 1^2");
    unsafe { sadic_family_free(fam) };
}

#[test]
fn error_codes() {
    let l: Vec<CString> = ["2", "70"].iter().map(|s| CString::new(*s).unwrap()).collect();
    let m: Vec<CString> = ["8", "64"].iter().map(|s| CString::new(*s).unwrap()).collect();
    let n: Vec<CString> = ["32", "2^11"].iter().map(|s| CString::new(*s).unwrap()).collect();
    let ptrs = |v: &[CString]| v.iter().map(|c| c.as_ptr()).collect::<Vec<_>>();
    let (lp, mp, np) = (ptrs(&l), ptrs(&m), ptrs(&n));
    let mut fam = ptr::null_mut();
    let status = unsafe { sadic_family_custom(lp.as_ptr(), mp.as_ptr(), np.as_ptr(), 2, &mut fam) };
    assert_eq!(status, SadicStatus::Structure);
    assert!(last_error().contains("level 1"));
    assert!(fam.is_null());

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sadic_prefix(ptr::null(), 0, 4, &mut out) }, SadicStatus::NullPointer);

    let fam = paper();
    assert_eq!(unsafe { sadic_generate_word(fam, 0, 3, SadicWhich::U, &mut out) }, SadicStatus::SizeLimit);
    assert!(last_error().contains("materialization cap"));
    let bad = CString::new("0120").unwrap();
    assert_eq!(unsafe { sadic_desubstitute(fam, 0, bad.as_ptr(), &mut out) }, SadicStatus::InvalidArgument);
    let short = CString::new("0011").unwrap();
    assert_eq!(unsafe { sadic_desubstitute(fam, 0, short.as_ptr(), &mut out) }, SadicStatus::NotDecomposable);
    let missing = CString::new("/nonexistent/family.toml").unwrap();
    let mut other = ptr::null_mut();
    assert_eq!(unsafe { sadic_family_from_config(missing.as_ptr(), &mut other) }, SadicStatus::Config);

    // success clears the slot
    assert_eq!(unsafe { sadic_recurrence_bound(fam, 0, &mut out) }, SadicStatus::Ok);
    take(out);
    assert!(sadic_last_error().is_null());
    unsafe {
        sadic_family_free(fam);
        sadic_family_free(ptr::null_mut());
        sadic_string_free(ptr::null_mut());
    }
}
