//! Normal ↔ tower basis conversion.
//!
//! The shipped matrices are stored as printed, so the bit order has to be
//! recovered: every row/column reading order is tried and kept only if the
//! pair is mutually inverse and carries normal-basis multiplication to
//! [`mul16`]. If a tower→normal fixture fails under every order, the
//! normal→tower matrix is trusted and its inverse is used instead; the
//! entries that differ from the fixture are kept in [`ConvPair::tn_delta`].

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf2::{BinMatrix16, FixtureError, Orientation, PrintedMatrix};
use crate::reference::{build_basis_bridge, BasisBridge, NormalElem, ReferenceError};
use crate::tower::mul16;

pub const M_NT_TEXT: &str = include_str!("../fixtures/m_nt.txt");
pub const M_TN_TEXT: &str = include_str!("../fixtures/m_tn.txt");

/// Seed for the homomorphism sample when none is supplied.
pub const DEFAULT_SEED: u64 = 0x5EED_16B0;
pub const HOMOMORPHISM_SAMPLES: usize = 10_000;

#[derive(Debug, Error)]
pub enum ConvError {
    #[error("conversion fixture: {0}")]
    Fixture(#[from] FixtureError),
    #[error(transparent)]
    Reference(#[from] ReferenceError),
    #[error("no reading order of the conversion matrices realizes the field isomorphism")]
    NoValidOrientation,
}

/// How the pair was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    /// Both printed matrices used as is.
    Printed,
    /// Printed tower→normal matrix replaced by the inverse of the
    /// normal→tower one.
    RecomputedTn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvPair {
    pub m_nt: BinMatrix16,
    pub m_tn: BinMatrix16,
    pub orientation: Orientation,
    pub resolution: Resolution,
    /// Canonical `(row, col)` entries where `m_tn` differs from the printed
    /// matrix read in `orientation`. Empty for [`Resolution::Printed`].
    pub tn_delta: Vec<(usize, usize)>,
}

impl ConvPair {
    #[inline]
    pub fn nt(&self, x: u16) -> u16 {
        self.m_nt.mat_vec(x)
    }

    #[inline]
    pub fn tn(&self, x: u16) -> u16 {
        self.m_tn.mat_vec(x)
    }

    pub fn is_inverse_pair(&self) -> bool {
        self.m_nt.mul(&self.m_tn).is_identity() && self.m_tn.mul(&self.m_nt).is_identity()
    }

    /// The printed-grid coordinates (row from top, column from left) of
    /// [`Self::tn_delta`].
    pub fn tn_delta_printed(&self) -> Vec<(usize, usize)> {
        let o = self.orientation;
        self.tn_delta
            .iter()
            .map(|&(r, c)| {
                let i = if o.top_row_msb { 15 - r } else { r };
                let j = if o.left_col_msb { 15 - c } else { c };
                (i, j)
            })
            .collect()
    }
}

/// Checks `tn(mul16(nt(a), nt(b))) = a·b` on random normal-basis pairs.
pub fn is_homomorphism(
    m_nt: &BinMatrix16,
    m_tn: &BinMatrix16,
    bridge: &BasisBridge,
    samples: usize,
    seed: u64,
) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).all(|_| {
        let (a, b): (u16, u16) = (rng.gen(), rng.gen());
        let t = mul16(m_nt.mat_vec(a), m_nt.mat_vec(b));
        m_tn.mat_vec(t) == bridge.normal_mul(NormalElem(a), NormalElem(b)).0
    })
}

/// Orientations under which the printed pair works without any repair.
pub fn strict_orientations(
    nt: &PrintedMatrix,
    tn: &PrintedMatrix,
    bridge: &BasisBridge,
    seed: u64,
) -> Vec<Orientation> {
    Orientation::ALL
        .into_iter()
        .filter(|&o| {
            let (a, b) = (nt.to_matrix(o), tn.to_matrix(o));
            a.mul(&b).is_identity()
                && b.mul(&a).is_identity()
                && is_homomorphism(&a, &b, bridge, HOMOMORPHISM_SAMPLES, seed)
        })
        .collect()
}

pub fn resolve_orientation(
    nt: &PrintedMatrix,
    tn: &PrintedMatrix,
    bridge: &BasisBridge,
    seed: u64,
) -> Result<ConvPair, ConvError> {
    if let Some(&o) = strict_orientations(nt, tn, bridge, seed).first() {
        return Ok(ConvPair {
            m_nt: nt.to_matrix(o),
            m_tn: tn.to_matrix(o),
            orientation: o,
            resolution: Resolution::Printed,
            tn_delta: Vec::new(),
        });
    }
    for o in Orientation::ALL {
        let m_nt = nt.to_matrix(o);
        let Some(m_tn) = m_nt.inverse() else { continue };
        if is_homomorphism(&m_nt, &m_tn, bridge, HOMOMORPHISM_SAMPLES, seed) {
            let tn_delta = tn.to_matrix(o).diff(&m_tn);
            return Ok(ConvPair {
                m_nt,
                m_tn,
                orientation: o,
                resolution: Resolution::RecomputedTn,
                tn_delta,
            });
        }
    }
    Err(ConvError::NoValidOrientation)
}

pub fn resolve_from_text(nt: &str, tn: &str, seed: u64) -> Result<ConvPair, ConvError> {
    let nt = PrintedMatrix::parse(nt)?;
    let tn = PrintedMatrix::parse(tn)?;
    let bridge = build_basis_bridge()?;
    resolve_orientation(&nt, &tn, &bridge, seed)
}

/// The pair resolved from the shipped fixtures, computed once.
pub fn shipped() -> &'static ConvPair {
    static PAIR: OnceLock<ConvPair> = OnceLock::new();
    PAIR.get_or_init(|| {
        resolve_from_text(M_NT_TEXT, M_TN_TEXT, DEFAULT_SEED)
            .expect("shipped conversion fixtures resolve")
    })
}
