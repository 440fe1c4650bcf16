use std::ffi::{CStr, CString};
use std::ptr;

use lattika_ffi::*;

const M3: &str = r#"{"n":5,"covers":[[0,1],[0,2],[0,3],[1,4],[2,4],[3,4]],"names":["0","a","b","c","1"]}"#;
const N5: &str = r#"{"n":5,"covers":[[0,1],[0,2],[1,3],[3,4],[2,4]],"names":["0","p","q","r","1"]}"#;

fn open(json: &str) -> *mut LattikaLattice {
    let src = CString::new(json).unwrap();
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { lattika_lattice_from_json(src.as_ptr(), &mut l) }, LattikaStatus::Ok);
    assert!(!l.is_null());
    l
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { lattika_string_free(s) };
    owned
}

fn last_error() -> String {
    let p = lattika_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn operations_on_the_diamond() {
    let l = open(M3);
    unsafe {
        let mut n = 0usize;
        assert_eq!(lattika_lattice_size(l, &mut n), LattikaStatus::Ok);
        assert_eq!(n, 5);
        let mut e = 0u32;
        assert_eq!(lattika_meet(l, 1, 2, &mut e), LattikaStatus::Ok);
        assert_eq!(e, 0);
        assert_eq!(lattika_join(l, 1, 2, &mut e), LattikaStatus::Ok);
        assert_eq!(e, 4);
        let mut b = false;
        assert_eq!(lattika_leq(l, 0, 3, &mut b), LattikaStatus::Ok);
        assert!(b);
        assert_eq!(lattika_is_modular(l, &mut b), LattikaStatus::Ok);
        assert!(b);
        let prop = CString::new("type1(all) and not uniform").unwrap();
        assert_eq!(lattika_check(l, prop.as_ptr(), &mut b), LattikaStatus::Ok);
        assert!(b);

        let mut s = ptr::null_mut();
        assert_eq!(lattika_classes_json(l, &mut s), LattikaStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(v["E"], serde_json::json!(["1"]));
        assert_eq!(v["P"]["a"], serde_json::json!(["b", "c"]));
        lattika_lattice_free(l);
    }
}

#[test]
fn canonical_forms_identify_isomorphic_inputs() {
    let relabeled = r#"{"n":5,"covers":[[4,1],[4,2],[4,3],[1,0],[2,0],[3,0]]}"#;
    let (a, b, c) = (open(M3), open(relabeled), open(N5));
    let form = |l| unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(lattika_canonical_form(l, &mut s), LattikaStatus::Ok);
        take_string(s)
    };
    assert_eq!(form(a), form(b));
    assert_ne!(form(a), form(c));
    unsafe {
        let mut modular = true;
        assert_eq!(lattika_is_modular(c, &mut modular), LattikaStatus::Ok);
        assert!(!modular);
        for l in [a, b, c] {
            lattika_lattice_free(l);
        }
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut l = ptr::null_mut();
        let bad = CString::new("{\"n\":2}").unwrap();
        assert_eq!(lattika_lattice_from_json(bad.as_ptr(), &mut l), LattikaStatus::Parse);
        assert!(l.is_null());
        assert!(last_error().contains("covers"));

        let not_lattice = CString::new(r#"{"n":3,"covers":[[0,1],[0,2]]}"#).unwrap();
        assert_eq!(lattika_lattice_from_json(not_lattice.as_ptr(), &mut l), LattikaStatus::NotALattice);

        assert_eq!(lattika_lattice_from_json(ptr::null(), &mut l), LattikaStatus::NullPointer);
        let mut n = 0usize;
        assert_eq!(lattika_lattice_size(ptr::null(), &mut n), LattikaStatus::NullPointer);

        let m3 = open(M3);
        let mut e = 0u32;
        assert_eq!(lattika_meet(m3, 0, 9, &mut e), LattikaStatus::OutOfRange);
        assert!(last_error().contains("out of range"));
        assert_eq!(lattika_meet(m3, 0, 1, ptr::null_mut()), LattikaStatus::NullPointer);
        let mut b = false;
        let junk = CString::new("type1(").unwrap();
        assert_eq!(lattika_check(m3, junk.as_ptr(), &mut b), LattikaStatus::Parse);
        lattika_lattice_free(m3);
        lattika_lattice_free(ptr::null_mut());
        lattika_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/lattika.h")).unwrap();
    for name in [
        "lattika_last_error",
        "lattika_lattice_from_json",
        "lattika_lattice_free",
        "lattika_lattice_size",
        "lattika_meet",
        "lattika_join",
        "lattika_leq",
        "lattika_is_modular",
        "lattika_check",
        "lattika_classes_json",
        "lattika_canonical_form",
        "lattika_string_free",
        "typedef struct LattikaLattice LattikaLattice",
        "LATTIKA_STATUS_OUT_OF_RANGE = 5",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
