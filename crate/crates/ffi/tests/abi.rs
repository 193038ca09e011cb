use std::ffi::{c_char, CStr, CString};
use std::ptr;

use rigiditylab_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    rl_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(rl_last_error())
        .to_string_lossy()
        .into_owned()
}

#[test]
fn term_round_trip_and_eval() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(
            rl_term_parse(c("dup( residues(2;{1}), 0)").as_ptr(), &mut t),
            RlStatus::Ok
        );
        let mut s = ptr::null_mut();
        assert_eq!(rl_term_render(t, &mut s), RlStatus::Ok);
        assert_eq!(take(s), "dup(residues(2;{1}),0)");
        let mut v = 99;
        assert_eq!(rl_term_eval_u64(t, 9, &mut v), RlStatus::Ok);
        assert_eq!(v, 0);
        assert_eq!(rl_term_eval_u64(t, 7, &mut v), RlStatus::Ok);
        assert_eq!(v, 3);
        rl_term_free(t);

        let mut big = ptr::null_mut();
        assert_eq!(
            rl_term_parse(c("mul(18446744073709551616)").as_ptr(), &mut big),
            RlStatus::Ok
        );
        assert_eq!(rl_term_eval_u64(big, 4, &mut v), RlStatus::Overflow);
        let mut s = ptr::null_mut();
        assert_eq!(rl_term_eval_dec(big, c("4").as_ptr(), &mut s), RlStatus::Ok);
        assert_eq!(take(s), "73786976294838206464");
        rl_term_free(big);
    }
}

#[test]
fn parse_errors_report_messages() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(
            rl_term_parse(c("frob(1)").as_ptr(), &mut t),
            RlStatus::Parse
        );
        assert!(t.is_null());
        assert!(last_error().contains("frob"));
        assert_eq!(rl_term_parse(ptr::null(), &mut t), RlStatus::NullArgument);
        let bad = [0xffu8, 0];
        assert_eq!(
            rl_term_parse(bad.as_ptr().cast(), &mut t),
            RlStatus::InvalidUtf8
        );
        let mut set = ptr::null_mut();
        assert_eq!(
            rl_set_parse(c("residues(0;{})").as_ptr(), &mut set),
            RlStatus::Parse
        );
        // a successful call clears the message
        assert_eq!(
            rl_set_parse(c("residues(2;{0})").as_ptr(), &mut set),
            RlStatus::Ok
        );
        assert!(rl_last_error().is_null());
        rl_set_free(set);
    }
}

#[test]
fn sets_and_almost_inclusion() {
    unsafe {
        let (mut s, mut t) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(
            rl_set_parse(c("residues(4;{2})").as_ptr(), &mut s),
            RlStatus::Ok
        );
        assert_eq!(
            rl_set_parse(c("residues(8;{4})").as_ptr(), &mut t),
            RlStatus::Ok
        );
        let mut yes = false;
        assert_eq!(rl_set_contains(s, 6, &mut yes), RlStatus::Ok);
        assert!(yes);
        let mut holds = true;
        let mut witness = ptr::null_mut();
        assert_eq!(
            rl_set_almost_subset(s, t, &mut holds, &mut witness),
            RlStatus::Ok
        );
        assert!(!holds);
        assert_eq!(take(witness), "2 mod 8");
        rl_set_free(t);

        let mut f = ptr::null_mut();
        assert_eq!(rl_set_family(1, &mut f), RlStatus::Ok);
        assert_eq!(
            rl_set_almost_subset(s, f, &mut holds, &mut witness),
            RlStatus::Ok
        );
        assert!(holds);
        assert!(witness.is_null());
        assert_eq!(rl_set_family(65, &mut f), RlStatus::Precondition);
        rl_set_free(f);
        rl_set_free(s);
    }
}

#[test]
fn oracles_and_duplication() {
    unsafe {
        let (mut a, mut s) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(
            rl_oracle_parse(c("set:residues(2;{1})").as_ptr(), &mut a),
            RlStatus::Ok
        );
        assert_eq!(
            rl_set_parse(c("residues(2;{1})").as_ptr(), &mut s),
            RlStatus::Ok
        );
        let mut b = ptr::null_mut();
        assert_eq!(rl_oracle_dup(s, 1, a, &mut b), RlStatus::Precondition);
        assert!(last_error().contains("c = 1"));
        assert_eq!(rl_oracle_dup(s, 0, a, &mut b), RlStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(rl_oracle_render(b, &mut r), RlStatus::Ok);
        assert_eq!(take(r), "dup:residues(2;{1}):0:set:residues(2;{1})");
        let bits: Vec<bool> = (0..4)
            .map(|i| {
                let mut bit = false;
                assert_eq!(rl_oracle_query(b, i, &mut bit), RlStatus::Ok);
                bit
            })
            .collect();
        assert_eq!(bits, [false, false, true, true]);
        let mut ok = false;
        assert_eq!(rl_dup_verify(a, s, 0, 1000, &mut ok), RlStatus::Ok);
        assert!(ok);
        rl_oracle_free(b);
        rl_oracle_free(a);
        rl_set_free(s);
    }
}

#[test]
fn test_level_measure() {
    unsafe {
        let mut k = ptr::null_mut();
        assert_eq!(rl_term_parse(c("add(1)").as_ptr(), &mut k), RlStatus::Ok);
        let (mut num, mut exp) = (ptr::null_mut(), 0u64);
        assert_eq!(
            rl_test_level_measure(k, 3, &mut num, &mut exp),
            RlStatus::Ok
        );
        assert_eq!((take(num).as_str(), exp), ("1", 3));
        rl_term_free(k);
        assert_eq!(rl_term_parse(c("id").as_ptr(), &mut k), RlStatus::Ok);
        assert_eq!(
            rl_test_level_measure(k, 1, &mut num, &mut exp),
            RlStatus::Precondition
        );
        rl_term_free(k);
    }
}

#[test]
fn null_handles_are_rejected() {
    unsafe {
        let mut v = 0;
        assert_eq!(
            rl_term_eval_u64(ptr::null(), 1, &mut v),
            RlStatus::NullArgument
        );
        let mut yes = false;
        assert_eq!(
            rl_set_contains(ptr::null(), 1, &mut yes),
            RlStatus::NullArgument
        );
        assert_eq!(
            rl_oracle_query(ptr::null(), 1, &mut yes),
            RlStatus::NullArgument
        );
        rl_term_free(ptr::null_mut());
        rl_set_free(ptr::null_mut());
        rl_oracle_free(ptr::null_mut());
        rl_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/rigiditylab.h");
    for name in [
        "typedef struct RlTerm RlTerm",
        "typedef struct RlSet RlSet",
        "typedef struct RlOracle RlOracle",
        "RL_STATUS_PRECONDITION = 4",
        "rl_term_parse",
        "rl_set_almost_subset",
        "rl_oracle_dup",
        "rl_test_level_measure",
        "rl_last_error",
        "rl_string_free",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
