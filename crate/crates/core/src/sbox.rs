//! The 16-bit S-box S(x) = AT(M_TN · inv16(M_NT · x)), its inverse, table
//! generation and the power-map comparison boxes.

use std::fmt::Write as _;
use std::sync::OnceLock;

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::convert::{self, ConvPair, Resolution};
use crate::gf2::{BinMatrix16, FixtureError, Orientation, PrintedMatrix};
use crate::reference::{build_basis_bridge, poly_pow, BasisBridge, NormalElem, PolyElem};
use crate::tower::inv16;

pub const AFFINE_M_TEXT: &str = include_str!("../fixtures/affine_m.txt");
pub const AFFINE_N_TEXT: &str = include_str!("../fixtures/affine_n.txt");

/// The affine matrices are printed with bit 15 in the top row and the
/// leftmost column.
pub const AFFINE_ORIENTATION: Orientation = Orientation::MSB_FIRST;

/// Printed output formulas of AT as input-bit masks, `AT_FORMULAS[b]`
/// being the terms of output bit b.
pub const AT_FORMULAS: [u16; 16] = [
    bits(&[14, 13, 8]),
    bits(&[15, 13, 9]),
    bits(&[14, 10, 8]),
    bits(&[15, 11, 9]),
    bits(&[12, 10, 8]),
    bits(&[13, 11, 9]),
    bits(&[14, 12, 10]),
    bits(&[15, 13, 11]),
    bits(&[6, 4, 0]),
    bits(&[7, 5, 1]),
    bits(&[6, 2, 0]),
    bits(&[7, 3, 1]),
    bits(&[4, 2, 0]),
    bits(&[5, 3, 1]),
    bits(&[6, 4, 2]),
    bits(&[7, 5, 3]),
];

/// Printed output formulas of AT⁻¹.
pub const AT_INV_FORMULAS: [u16; 16] = [
    bits(&[12, 10, 8]),
    bits(&[13, 11, 9]),
    bits(&[14, 12, 10]),
    bits(&[15, 13, 11]),
    bits(&[14, 12, 8]),
    bits(&[15, 13, 9]),
    bits(&[14, 10, 8]),
    bits(&[15, 11, 9]),
    bits(&[4, 2, 0]),
    bits(&[5, 3, 1]),
    bits(&[6, 4, 2]),
    bits(&[7, 5, 3]),
    bits(&[6, 4, 0]),
    bits(&[7, 5, 1]),
    bits(&[6, 2, 0]),
    bits(&[7, 3, 1]),
];

const fn bits(list: &[u32]) -> u16 {
    let mut m = 0u16;
    let mut i = 0;
    while i < list.len() {
        m |= 1 << list[i];
        i += 1;
    }
    m
}

/// An output bit whose printed formula disagrees with its matrix row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormulaMismatch {
    pub bit: usize,
    pub printed: u16,
    pub matrix: u16,
}

pub fn formula_mismatches(m: &BinMatrix16, formulas: &[u16; 16]) -> Vec<FormulaMismatch> {
    (0..16)
        .filter(|&b| m.rows()[b] != formulas[b])
        .map(|b| FormulaMismatch {
            bit: b,
            printed: formulas[b],
            matrix: m.rows()[b],
        })
        .collect()
}

#[derive(Debug, Error)]
pub enum SboxError {
    #[error("affine fixture: {0}")]
    Fixture(#[from] FixtureError),
    #[error("affine matrices are not inverse to each other")]
    AffineNotInverse,
    #[error(transparent)]
    Conversion(#[from] convert::ConvError),
    #[error("table has {got} entries, expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("entry {index} = {value:#x} exceeds {m} bits")]
    Width { index: usize, value: u32, m: u32 },
    #[error("width {0} outside 1..=16")]
    BadWidth(u32),
    #[error(
        "unknown builtin {0:?}; expected proposed, proposed_inv, identity, gold16_K or kasami16_K"
    )]
    UnknownBuiltin(String),
    #[error("exponent must be at least 1")]
    ZeroExponent,
}

/// The linear layer AT and its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePair {
    pub m: BinMatrix16,
    pub n: BinMatrix16,
}

impl AffinePair {
    pub fn new(m: BinMatrix16, n: BinMatrix16) -> Result<Self, SboxError> {
        if !(m.mul(&n).is_identity() && n.mul(&m).is_identity()) {
            return Err(SboxError::AffineNotInverse);
        }
        Ok(Self { m, n })
    }

    pub fn from_text(m: &str, n: &str) -> Result<Self, SboxError> {
        let m = PrintedMatrix::parse(m)?.to_matrix(AFFINE_ORIENTATION);
        let n = PrintedMatrix::parse(n)?.to_matrix(AFFINE_ORIENTATION);
        Self::new(m, n)
    }

    pub fn shipped() -> &'static Self {
        static PAIR: OnceLock<AffinePair> = OnceLock::new();
        PAIR.get_or_init(|| {
            Self::from_text(AFFINE_M_TEXT, AFFINE_N_TEXT)
                .expect("shipped affine fixtures are valid")
        })
    }

    #[inline]
    pub fn affine(&self, x: u16) -> u16 {
        self.m.mat_vec(x)
    }

    #[inline]
    pub fn affine_inv(&self, y: u16) -> u16 {
        self.n.mat_vec(y)
    }
}

/// The S-box built from tower inversion.
#[derive(Clone, Debug)]
pub struct TowerSbox {
    pub conv: ConvPair,
    pub affine: AffinePair,
}

impl TowerSbox {
    pub fn new(conv: ConvPair, affine: AffinePair) -> Self {
        Self { conv, affine }
    }

    pub fn shipped() -> &'static Self {
        static SBOX: OnceLock<TowerSbox> = OnceLock::new();
        SBOX.get_or_init(|| Self::new(convert::shipped().clone(), AffinePair::shipped().clone()))
    }

    #[inline]
    pub fn forward(&self, x: u16) -> u16 {
        self.affine.affine(self.conv.tn(inv16(self.conv.nt(x))))
    }

    #[inline]
    pub fn inverse(&self, y: u16) -> u16 {
        self.conv.tn(inv16(self.conv.nt(self.affine.affine_inv(y))))
    }

    /// Describes the construction: matrix digests, reading orders, the
    /// repair applied to the conversion pair and the zero convention.
    pub fn provenance(&self) -> String {
        let digest = |m: &BinMatrix16, o: Orientation| {
            short_digest(PrintedMatrix::from_matrix(m, o).to_text().as_bytes())
        };
        let c = &self.conv;
        let tn_note = match c.resolution {
            Resolution::Printed => "printed".to_string(),
            Resolution::RecomputedTn => format!(
                "inverse of m_nt, {} entries differ from print",
                c.tn_delta.len()
            ),
        };
        format!(
            "affine(tn(inv16(nt(x)))); m_nt {} ; m_tn {} ({tn_note}); conversion order: {}; \
             M {} ; N {} ; affine order: {}; inv(0) = 0",
            digest(&c.m_nt, c.orientation),
            digest(&c.m_tn, c.orientation),
            c.orientation,
            digest(&self.affine.m, AFFINE_ORIENTATION),
            digest(&self.affine.n, AFFINE_ORIENTATION),
            AFFINE_ORIENTATION,
        )
    }
}

/// S-box computed entirely by the reference field: normal-basis inversion
/// through the polynomial basis, then AT.
pub fn oracle_sbox(bridge: &BasisBridge, affine: &AffinePair, x: u16) -> u16 {
    affine.affine(bridge.normal_inv(NormalElem(x)).0)
}

fn short_digest(bytes: &[u8]) -> String {
    let d = Sha256::digest(bytes);
    let mut s = String::from("sha256:");
    for b in &d[..8] {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// A lookup table from n-bit inputs to m-bit outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SboxTable {
    entries: Vec<u16>,
    n: u32,
    m: u32,
    name: String,
    provenance: String,
    bijective: bool,
}

impl SboxTable {
    pub fn new(
        name: impl Into<String>,
        n: u32,
        m: u32,
        entries: Vec<u16>,
        provenance: impl Into<String>,
    ) -> Result<Self, SboxError> {
        for w in [n, m] {
            if !(1..=16).contains(&w) {
                return Err(SboxError::BadWidth(w));
            }
        }
        let expected = 1usize << n;
        if entries.len() != expected {
            return Err(SboxError::Length {
                got: entries.len(),
                expected,
            });
        }
        if m < 16 {
            if let Some((index, &v)) = entries.iter().enumerate().find(|(_, &v)| v >> m != 0) {
                return Err(SboxError::Width {
                    index,
                    value: v as u32,
                    m,
                });
            }
        }
        let bijective = n == m && is_permutation(&entries);
        Ok(Self {
            entries,
            n,
            m,
            name: name.into(),
            provenance: provenance.into(),
            bijective,
        })
    }

    pub fn entries(&self) -> &[u16] {
        &self.entries
    }

    pub fn get(&self, x: usize) -> u16 {
        self.entries[x]
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn is_bijective(&self) -> bool {
        self.bijective
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Inverse table; `None` unless bijective.
    pub fn inverse(&self, name: impl Into<String>) -> Option<Self> {
        if !self.bijective {
            return None;
        }
        let mut inv = vec![0u16; self.entries.len()];
        for (x, &y) in self.entries.iter().enumerate() {
            inv[y as usize] = x as u16;
        }
        let prov = format!("inverse of {}", self.name);
        Some(Self {
            entries: inv,
            n: self.n,
            m: self.m,
            name: name.into(),
            provenance: prov,
            bijective: true,
        })
    }

    /// SHA-256 of the little-endian binary LUT, as hex.
    pub fn sha256_hex(&self) -> String {
        let mut h = Sha256::new();
        for v in &self.entries {
            h.update(v.to_le_bytes());
        }
        h.finalize()
            .iter()
            .fold(String::with_capacity(64), |mut s, b| {
                let _ = write!(s, "{b:02x}");
                s
            })
    }
}

fn is_permutation(entries: &[u16]) -> bool {
    let mut seen = vec![false; entries.len()];
    for &v in entries {
        let v = v as usize;
        if v >= seen.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Evaluates `f` on all 2¹⁶ inputs.
pub fn gen_table<F>(f: F, name: impl Into<String>, provenance: impl Into<String>) -> SboxTable
where
    F: Fn(u16) -> u16 + Sync,
{
    let entries: Vec<u16> = (0..=u16::MAX).into_par_iter().map(&f).collect();
    SboxTable::new(name, 16, 16, entries, provenance).expect("full-width table")
}

/// x ↦ xᵉ in the polynomial basis, 0 ↦ 0.
pub fn gen_power_sbox(exponent: u64) -> Result<SboxTable, SboxError> {
    if exponent == 0 {
        return Err(SboxError::ZeroExponent);
    }
    Ok(gen_table(
        |x| {
            if x == 0 {
                0
            } else {
                poly_pow(PolyElem(x), exponent).0
            }
        },
        format!("power_{exponent}"),
        format!("x^{exponent} over F2[x]/(x^16+x^5+x^3+x^2+1)"),
    ))
}

pub fn gold_exponent(k: u32) -> u64 {
    (1u64 << k) + 1
}

pub fn kasami_exponent(k: u32) -> u64 {
    (1u64 << (2 * k)) - (1u64 << k) + 1
}

pub fn proposed_table() -> SboxTable {
    let s = TowerSbox::shipped();
    gen_table(|x| s.forward(x), "proposed", s.provenance())
}

pub fn proposed_inverse_table() -> SboxTable {
    let s = TowerSbox::shipped();
    gen_table(
        |y| s.inverse(y),
        "proposed_inv",
        format!("inverse of {}", s.provenance()),
    )
}

/// Resolves a builtin name: `proposed`, `proposed_inv`, `identity`,
/// `gold16_K`, `kasami16_K`.
pub fn builtin(name: &str) -> Result<SboxTable, SboxError> {
    let unknown = || SboxError::UnknownBuiltin(name.to_string());
    let parse_k = |rest: &str| rest.parse::<u32>().ok().filter(|k| (1..16).contains(k));
    let mut t = match name {
        "proposed" => return Ok(proposed_table()),
        "proposed_inv" => return Ok(proposed_inverse_table()),
        "identity" => return Ok(gen_table(|x| x, "identity", "x")),
        _ => {
            if let Some(k) = name.strip_prefix("gold16_").and_then(parse_k) {
                gen_power_sbox(gold_exponent(k))?
            } else if let Some(k) = name.strip_prefix("kasami16_").and_then(parse_k) {
                gen_power_sbox(kasami_exponent(k))?
            } else {
                return Err(unknown());
            }
        }
    };
    t.name = name.to_string();
    Ok(t)
}

/// Bridge used by oracle checks, built once.
pub fn shared_bridge() -> &'static BasisBridge {
    static BRIDGE: OnceLock<BasisBridge> = OnceLock::new();
    BRIDGE.get_or_init(|| build_basis_bridge().expect("θ is normal"))
}
