//! LUT import/export.
//!
//! Binary: 65536 little-endian u16 words, no header (131072 bytes).
//! CSV: one `0x%04x,0x%04x` line per input, lowercase, inputs ascending.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::sbox::{SboxError, SboxTable};

pub const LUT_ENTRIES: usize = 1 << 16;
pub const LUT_BYTES: usize = 2 * LUT_ENTRIES;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LutFormat {
    Bin,
    Csv,
}

impl LutFormat {
    /// `.csv` selects CSV; anything else is binary.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Self::Csv,
            _ => Self::Bin,
        }
    }
}

#[derive(Debug, Error)]
pub enum LutError {
    #[error("truncated LUT: {got} entries, expected 65536")]
    Truncated { got: usize },
    #[error("oversized LUT: {got} entries, expected 65536")]
    Oversized { got: usize },
    #[error("binary LUT has an odd byte count ({0})")]
    OddLength(usize),
    #[error("line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error("line {line}: value {value:#x} is not a 16-bit word")]
    NotSixteenBit { line: usize, value: u64 },
    #[error("input {0:#06x} missing from CSV LUT")]
    MissingInput(u16),
    #[error(transparent)]
    Table(#[from] SboxError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

pub fn to_bin(t: &SboxTable) -> Vec<u8> {
    t.entries().iter().flat_map(|v| v.to_le_bytes()).collect()
}

pub fn to_csv(t: &SboxTable) -> String {
    let mut s = String::with_capacity(t.len() * 14);
    for (x, &y) in t.entries().iter().enumerate() {
        let _ = writeln!(s, "{x:#06x},{y:#06x}");
    }
    s
}

pub fn from_bin(bytes: &[u8], name: &str) -> Result<SboxTable, LutError> {
    if !bytes.len().is_multiple_of(2) {
        return Err(LutError::OddLength(bytes.len()));
    }
    let got = bytes.len() / 2;
    match got.cmp(&LUT_ENTRIES) {
        std::cmp::Ordering::Less => return Err(LutError::Truncated { got }),
        std::cmp::Ordering::Greater => return Err(LutError::Oversized { got }),
        _ => {}
    }
    let entries = bytes
        .chunks_exact(2)
        .map(|c| u16::from_le_bytes([c[0], c[1]]))
        .collect();
    Ok(SboxTable::new(name, 16, 16, entries, "binary LUT")?)
}

fn parse_word(s: &str, line: usize) -> Result<u16, LutError> {
    let s = s.trim();
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X"));
    let v = match digits {
        Some(d) => u64::from_str_radix(d, 16),
        None => s.parse::<u64>(),
    }
    .map_err(|e| LutError::Csv {
        line,
        msg: format!("{s:?}: {e}"),
    })?;
    u16::try_from(v).map_err(|_| LutError::NotSixteenBit { line, value: v })
}

pub fn from_csv(text: &str, name: &str) -> Result<SboxTable, LutError> {
    let mut entries = vec![0u16; LUT_ENTRIES];
    let mut seen = vec![false; LUT_ENTRIES];
    let mut count = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let (x, y) = raw.split_once(',').ok_or_else(|| LutError::Csv {
            line,
            msg: "expected \"x,S(x)\"".into(),
        })?;
        let (x, y) = (parse_word(x, line)?, parse_word(y, line)?);
        if seen[x as usize] {
            return Err(LutError::Csv {
                line,
                msg: format!("duplicate input {x:#06x}"),
            });
        }
        seen[x as usize] = true;
        entries[x as usize] = y;
        count += 1;
    }
    if count < LUT_ENTRIES {
        if count == 0 {
            return Err(LutError::Truncated { got: 0 });
        }
        // a prefix of the table is the common case; name it as truncation
        let missing = seen.iter().position(|s| !s).unwrap() as u16;
        return if seen[..count].iter().all(|&s| s) {
            Err(LutError::Truncated { got: count })
        } else {
            Err(LutError::MissingInput(missing))
        };
    }
    Ok(SboxTable::new(name, 16, 16, entries, "CSV LUT")?)
}

pub fn read_lut(path: &Path) -> Result<SboxTable, LutError> {
    let io_err = |source| LutError::Io {
        path: path.display().to_string(),
        source,
    };
    let bytes = std::fs::read(path).map_err(io_err)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("lut");
    match LutFormat::from_path(path) {
        LutFormat::Bin => from_bin(&bytes, name),
        LutFormat::Csv => {
            let text = String::from_utf8(bytes).map_err(|_| LutError::Csv {
                line: 0,
                msg: "not UTF-8".into(),
            })?;
            from_csv(&text, name)
        }
    }
}

/// Writes via a temporary file in the same directory and renames, so a
/// failure never leaves a partial file behind.
pub fn write_atomic(path: &Path, data: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let file_name = path.file_name().ok_or_else(|| {
        io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name")
    })?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        file_name.to_string_lossy(),
        std::process::id()
    ));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(data)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}

pub fn write_lut(t: &SboxTable, path: &Path, format: LutFormat) -> io::Result<()> {
    match format {
        LutFormat::Bin => write_atomic(path, &to_bin(t)),
        LutFormat::Csv => write_atomic(path, to_csv(t).as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbox::gen_table;

    #[test]
    fn bin_round_trip() {
        let t = gen_table(|x| x.rotate_left(3) ^ 0x1234, "t", "");
        let bytes = to_bin(&t);
        assert_eq!(bytes.len(), LUT_BYTES);
        assert_eq!(&bytes[2..4], &t.get(1).to_le_bytes());
        assert_eq!(from_bin(&bytes, "t").unwrap().entries(), t.entries());
    }

    #[test]
    fn csv_round_trip() {
        let t = gen_table(|x| !x, "t", "");
        let text = to_csv(&t);
        assert_eq!(text.lines().count(), LUT_ENTRIES);
        assert_eq!(text.lines().nth(1).unwrap(), "0x0001,0xfffe");
        assert_eq!(from_csv(&text, "t").unwrap().entries(), t.entries());
    }

    #[test]
    fn truncated_and_bad_values() {
        let t = gen_table(|x| x, "t", "");
        let bytes = to_bin(&t);
        let err = from_bin(&bytes[..LUT_BYTES - 2], "t").unwrap_err();
        assert!(err.to_string().starts_with("truncated LUT"), "{err}");
        assert!(matches!(
            from_bin(&bytes[..3], "t"),
            Err(LutError::OddLength(3))
        ));

        let text = to_csv(&t);
        let short: String = text.lines().take(65535).map(|l| format!("{l}\n")).collect();
        assert!(from_csv(&short, "t")
            .unwrap_err()
            .to_string()
            .starts_with("truncated LUT"));
        let bad = text.replacen("0x0000,0x0000", "0x0000,0x10000", 1);
        assert!(matches!(
            from_csv(&bad, "t"),
            Err(LutError::NotSixteenBit { line: 1, .. })
        ));
    }

    #[test]
    fn atomic_write_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.bin");
        write_atomic(&p, b"abc").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"abc");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(write_atomic(&dir.path().join("missing/x.bin"), b"a").is_err());
    }
}
