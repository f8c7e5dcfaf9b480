use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use tower_sbox_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ts_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn builtin(name: &str) -> *mut TsTable {
    let name = CString::new(name).unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { ts_table_builtin(name.as_ptr(), &mut t) },
        TsStatus::Ok
    );
    assert!(!t.is_null());
    t
}

#[test]
fn scalar_entry_points() {
    let head = [
        0x0000, 0x8e51, 0x08b7, 0xd99c, 0x057a, 0x508a, 0xb339, 0xfbb0,
    ];
    for (x, &y) in head.iter().enumerate() {
        assert_eq!(ts_sbox_forward(x as u16), y);
        assert_eq!(ts_sbox_inverse(y), x as u16);
    }
    assert_eq!(ts_inv16(0), 0);
    for a in [1u16, 2, 0x1234, 0xffff, 0x8000] {
        assert_eq!(ts_mul16(a, ts_inv16(a)), 0xffff, "identity is all ones");
    }
}

#[test]
fn table_roundtrip_through_files() {
    let t = builtin("proposed");
    unsafe {
        assert_eq!(ts_table_len(t), 65536);
        let mut y = 0u16;
        assert_eq!(ts_table_get(t, 1, &mut y), TsStatus::Ok);
        assert_eq!(y, 0x8e51);
        assert_eq!(ts_table_get(t, 65536, &mut y), TsStatus::InvalidArgument);
        assert!(last_error().contains("out of range"));

        let mut hex = ptr::null_mut();
        assert_eq!(ts_table_sha256(t, &mut hex), TsStatus::Ok);
        assert_eq!(
            CStr::from_ptr(hex).to_str().unwrap(),
            "5efa322bcd70bba83e6d0fcf87004321403ebac933c27957144fb4495eb53321"
        );
        ts_string_free(hex);

        let dir = tempfile::tempdir().unwrap();
        for (file, csv) in [("s.bin", false), ("s.csv", true)] {
            let path = CString::new(dir.path().join(file).to_str().unwrap()).unwrap();
            assert_eq!(ts_table_write(t, path.as_ptr(), csv), TsStatus::Ok);
            let mut back = ptr::null_mut();
            assert_eq!(ts_table_load(path.as_ptr(), &mut back), TsStatus::Ok);
            for x in [0u32, 7, 0x1234, 0xffff] {
                let (mut a, mut b) = (0, 0);
                ts_table_get(t, x, &mut a);
                ts_table_get(back, x, &mut b);
                assert_eq!(a, b);
            }
            ts_table_free(back);
        }
        ts_table_free(t);
    }
}

#[test]
fn malformed_and_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.bin");
    std::fs::write(&short, vec![0u8; 131070]).unwrap();
    let short = CString::new(short.to_str().unwrap()).unwrap();
    let missing = CString::new(dir.path().join("nope.bin").to_str().unwrap()).unwrap();
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(ts_table_load(short.as_ptr(), &mut t), TsStatus::Malformed);
        assert!(last_error().contains("truncated"));
        assert_eq!(ts_table_load(missing.as_ptr(), &mut t), TsStatus::Io);
    }
    assert!(t.is_null());
}

#[test]
fn null_and_bad_arguments() {
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(ts_table_builtin(ptr::null(), &mut t), TsStatus::NullPointer);
        let bad = CString::new("gold16_0").unwrap();
        assert_eq!(
            ts_table_builtin(bad.as_ptr(), &mut t),
            TsStatus::InvalidArgument
        );
        assert!(!last_error().is_empty());
        assert_eq!(ts_table_len(ptr::null()), 0);
        ts_table_free(ptr::null_mut());
        ts_string_free(ptr::null_mut());
        let mut c = TsCensus::default();
        let name = CString::new("NOPE").unwrap();
        assert_eq!(
            ts_netlist_census(name.as_ptr(), &mut c),
            TsStatus::InvalidArgument
        );
    }
    let t = builtin("identity");
    assert_eq!(last_error(), "");
    unsafe { ts_table_free(t) };
}

#[test]
fn analysis_json() {
    let t = builtin("gold16_1");
    let metrics = CString::new("du,ad").unwrap();
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(ts_analyze(t, metrics.as_ptr(), 2, &mut json), TsStatus::Ok);
        let v: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        ts_string_free(json);
        let text = v.to_string();
        assert!(text.contains("\"du\":2"), "{text}");
        let bad = CString::new("du,bogus").unwrap();
        assert_eq!(
            ts_analyze(t, bad.as_ptr(), 1, &mut json),
            TsStatus::InvalidArgument
        );
        ts_table_free(t);
    }
}

#[test]
fn census_of_i4() {
    let mut c = TsCensus::default();
    let name = CString::new("I4").unwrap();
    assert_eq!(
        unsafe { ts_netlist_census(name.as_ptr(), &mut c) },
        TsStatus::Ok
    );
    assert_eq!(
        (c.xor_gates, c.nand_gates + c.nor_gates, c.not_gates),
        (2, 22, 4)
    );
    assert_eq!((c.cpd_xor, c.cpd_nand, c.cpd_nor, c.cpd_not), (0, 2, 3, 1));
}

#[test]
fn header_declares_every_entry_point() {
    let header = include_str!("../include/tower_sbox.h");
    for sym in [
        "TOWER_SBOX_H",
        "typedef struct TsTable TsTable",
        "TS_STATUS_MALFORMED",
        "ts_last_error",
        "ts_sbox_forward",
        "ts_sbox_inverse",
        "ts_mul16",
        "ts_inv16",
        "ts_table_builtin",
        "ts_table_load",
        "ts_table_free",
        "ts_table_len",
        "ts_table_get",
        "ts_table_sha256",
        "ts_table_write",
        "ts_analyze",
        "ts_string_free",
        "ts_netlist_census",
    ] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/tower_sbox.h");
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .output()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
