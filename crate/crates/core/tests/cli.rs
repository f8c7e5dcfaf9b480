//! End-to-end runs of the command-line tool.

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_tower-sbox");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_is_deterministic_and_bijective() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.bin"), dir.path().join("b.bin"));
    for f in [&a, &b] {
        let o = run(&["gen", "--out", p(f)]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(stdout(&o).contains("bijective: yes"));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes.len(), 131072);
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_eq!(&bytes[2..4], &0x8e51u16.to_le_bytes());
}

#[test]
fn gen_csv_and_inverse() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    assert_eq!(run(&["gen", "--out", p(&csv)]).status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 65536);
    assert_eq!(text.lines().nth(1), Some("0x0001,0x8e51"));

    let inv = dir.path().join("inv.bin");
    assert_eq!(
        run(&["gen", "--inverse", "--out", p(&inv)]).status.code(),
        Some(0)
    );
    let inv = std::fs::read(&inv).unwrap();
    assert_eq!(&inv[2 * 0x8e51..2 * 0x8e51 + 2], &1u16.to_le_bytes());
}

#[test]
fn analyze_reads_written_lut() {
    let dir = tempfile::tempdir().unwrap();
    let lut = dir.path().join("s.bin");
    assert_eq!(run(&["gen", "-q", "--out", p(&lut)]).status.code(), Some(0));
    let o = run(&["analyze", p(&lut), "--ad", "--fp", "-q"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ad"], 15);
    assert_eq!(v["fixed_points"], 6);
    assert_eq!(v["opposite_fixed_points"], 4);
    assert!(v.get("nl").is_none() || v["nl"].is_null());
}

#[test]
fn analyze_csv_output() {
    let o = run(&["analyze", "gold16_1", "--ad", "--format", "csv", "-q"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("name,n,m,bijective,nl"));
    assert!(lines
        .next()
        .unwrap()
        .starts_with("gold16_1,16,16,false,,,2,"));
}

#[test]
fn malformed_luts_exit_with_io_code() {
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.bin");
    std::fs::write(&short, vec![0u8; 131070]).unwrap();
    let o = run(&["analyze", p(&short), "--ad"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("truncated LUT: 65535 entries, expected 65536")
    );

    let odd = dir.path().join("odd.bin");
    std::fs::write(&odd, vec![0u8; 65535]).unwrap();
    assert_eq!(run(&["analyze", p(&odd), "--ad"]).status.code(), Some(3));

    let csv = dir.path().join("bad.csv");
    std::fs::write(&csv, "0x0000,0x0000\n0x0001,zz\n").unwrap();
    assert_eq!(run(&["analyze", p(&csv), "--ad"]).status.code(), Some(3));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "no_such_box"]).status.code(), Some(2));
    assert_eq!(
        run(&["analyze", "proposed", "--workers", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["netlist", "--block", "Q9"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_passes_with_shipped_fixtures() {
    let o = run(&["verify", "-q"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn verify_rejects_corrupted_affine_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let text = include_str!("../fixtures/affine_m.txt");
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let flipped: String = lines[3]
        .chars()
        .map(|c| if c == '0' { '1' } else { '0' })
        .collect();
    lines[3] = flipped;
    let bad = dir.path().join("m.txt");
    std::fs::write(&bad, lines.join("\n")).unwrap();
    let o = run(&["verify", "-q", "--no-netlists", "--affine-m", p(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_rejects_corrupted_conversion_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let text = include_str!("../fixtures/m_nt.txt");
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let row = lines.iter().position(|l| l.contains('1')).unwrap();
    let mut chars: Vec<char> = lines[row].chars().collect();
    let i = chars.iter().position(|c| *c == '0' || *c == '1').unwrap();
    chars[i] = if chars[i] == '0' { '1' } else { '0' };
    lines[row] = chars.into_iter().collect();
    let bad = dir.path().join("nt.txt");
    std::fs::write(&bad, lines.join("\n")).unwrap();
    let o = run(&["verify", "-q", "--no-netlists", "--m-nt", p(&bad)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn netlist_single_block_and_catalog() {
    let o = run(&["netlist", "I4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("# I4"));
    assert!(out.contains("2T_NA+3T_NO+T_N"));

    let o = run(&["netlist", "--block", "I16", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let o = run(&["netlist", "all", "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for name in ["M8", "I16", "MTN", "SCALE8_μ"] {
        assert!(out.contains(name), "{name} missing from census");
    }
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 19);
}
