//! The block catalog: gate-level versions of the tower operations, the
//! conversions and the affine layer, with published gate counts to compare
//! against.
//!
//! Non-linear blocks follow the bit expressions in [`crate::tower`] gate for
//! gate, with AND pairs feeding an XOR realized as NAND pairs. Linear blocks
//! are XOR networks from the greedy sharing pass.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use super::cse::{masks_to_terms, xor_network};
use super::{Builder, Census, DelayVector, Netlist, Wire};
use crate::convert;
use crate::sbox::AffinePair;
use crate::tower::{self, Scale4Const};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockId {
    M2,
    M4,
    M8,
    S4,
    S8,
    I4,
    I8,
    I16,
    Scale4Lambda,
    Scale4LambdaSq,
    Scale4Beta,
    Scale4AlphaBeta,
    Scale8Mu,
    MergeS4MLambda,
    MergeS8MMu,
    At,
    AtInv,
    Mnt,
    Mtn,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown block {0:?}; expected one of {list}", list = BlockId::catalog_list())]
pub struct UnknownBlock(pub String);

impl BlockId {
    pub const ALL: [BlockId; 19] = [
        BlockId::M2,
        BlockId::M4,
        BlockId::M8,
        BlockId::S4,
        BlockId::S8,
        BlockId::I4,
        BlockId::I8,
        BlockId::I16,
        BlockId::Scale4Lambda,
        BlockId::Scale4LambdaSq,
        BlockId::Scale4Beta,
        BlockId::Scale4AlphaBeta,
        BlockId::Scale8Mu,
        BlockId::MergeS4MLambda,
        BlockId::MergeS8MMu,
        BlockId::At,
        BlockId::AtInv,
        BlockId::Mnt,
        BlockId::Mtn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BlockId::M2 => "M2",
            BlockId::M4 => "M4",
            BlockId::M8 => "M8",
            BlockId::S4 => "S4",
            BlockId::S8 => "S8",
            BlockId::I4 => "I4",
            BlockId::I8 => "I8",
            BlockId::I16 => "I16",
            BlockId::Scale4Lambda => "SCALE4_λ",
            BlockId::Scale4LambdaSq => "SCALE4_λ²",
            BlockId::Scale4Beta => "SCALE4_β",
            BlockId::Scale4AlphaBeta => "SCALE4_αβ",
            BlockId::Scale8Mu => "SCALE8_μ",
            BlockId::MergeS4MLambda => "MERGE_S4Mλ",
            BlockId::MergeS8MMu => "MERGE_S8Mμ",
            BlockId::At => "AT",
            BlockId::AtInv => "AT_INV",
            BlockId::Mnt => "MNT",
            BlockId::Mtn => "MTN",
        }
    }

    /// Name usable in file names and shells.
    pub fn ascii_name(self) -> &'static str {
        match self {
            BlockId::Scale4Lambda => "SCALE4_LAMBDA",
            BlockId::Scale4LambdaSq => "SCALE4_LAMBDA2",
            BlockId::Scale4Beta => "SCALE4_BETA",
            BlockId::Scale4AlphaBeta => "SCALE4_ALPHABETA",
            BlockId::Scale8Mu => "SCALE8_MU",
            BlockId::MergeS4MLambda => "MERGE_S4MLAMBDA",
            BlockId::MergeS8MMu => "MERGE_S8MMU",
            other => other.name(),
        }
    }

    fn catalog_list() -> String {
        Self::ALL
            .iter()
            .map(|b| b.ascii_name())
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// (input bits, output bits). Two-operand blocks take `a` in the low
    /// half of the input word and `b` in the high half.
    pub fn widths(self) -> (u32, u32) {
        match self {
            BlockId::M2 => (4, 2),
            BlockId::M4 => (8, 4),
            BlockId::M8 => (16, 8),
            BlockId::S4 | BlockId::I4 | BlockId::MergeS4MLambda => (4, 4),
            BlockId::Scale4Lambda
            | BlockId::Scale4LambdaSq
            | BlockId::Scale4Beta
            | BlockId::Scale4AlphaBeta => (4, 4),
            BlockId::S8 | BlockId::I8 | BlockId::Scale8Mu | BlockId::MergeS8MMu => (8, 8),
            BlockId::I16 | BlockId::At | BlockId::AtInv | BlockId::Mnt | BlockId::Mtn => (16, 16),
        }
    }

    /// The functional counterpart evaluated on one packed input word.
    pub fn reference(self, x: u32) -> u32 {
        let lo8 = |k: u32| (x & ((1 << k) - 1)) as u8;
        let hi8 = |k: u32| ((x >> k) & ((1 << k) - 1)) as u8;
        let w16 = x as u16;
        match self {
            BlockId::M2 => tower::mul2(lo8(2), hi8(2)) as u32,
            BlockId::M4 => tower::mul4(lo8(4), hi8(4)) as u32,
            BlockId::M8 => tower::mul8(lo8(8), hi8(8)) as u32,
            BlockId::S4 => tower::sq4(lo8(4)) as u32,
            BlockId::S8 => tower::sq8(lo8(8)) as u32,
            BlockId::I4 => tower::inv4(lo8(4)) as u32,
            BlockId::I8 => tower::inv8(lo8(8)) as u32,
            BlockId::I16 => tower::inv16(w16) as u32,
            BlockId::Scale4Lambda => tower::scale4(Scale4Const::Lambda, lo8(4)) as u32,
            BlockId::Scale4LambdaSq => tower::scale4(Scale4Const::LambdaSq, lo8(4)) as u32,
            BlockId::Scale4Beta => tower::scale4(Scale4Const::Beta, lo8(4)) as u32,
            BlockId::Scale4AlphaBeta => tower::scale4(Scale4Const::AlphaBeta, lo8(4)) as u32,
            BlockId::Scale8Mu => tower::scale8_mu(lo8(8)) as u32,
            BlockId::MergeS4MLambda => tower::merged_sq4_mul_lambda(lo8(4)) as u32,
            BlockId::MergeS8MMu => tower::merged_sq8_mul_mu(lo8(8)) as u32,
            BlockId::At => AffinePair::shipped().affine(w16) as u32,
            BlockId::AtInv => AffinePair::shipped().affine_inv(w16) as u32,
            BlockId::Mnt => convert::shipped().nt(w16) as u32,
            BlockId::Mtn => convert::shipped().tn(w16) as u32,
        }
    }

    fn is_linear(self) -> bool {
        !matches!(
            self,
            BlockId::M2 | BlockId::M4 | BlockId::M8 | BlockId::I4 | BlockId::I8 | BlockId::I16
        )
    }

    /// Published figures for this block, where the source gives any.
    pub fn published_target(self) -> PublishedTarget {
        use Policy::*;
        let t = |xor, nand_nor, not, cpd, policy| PublishedTarget {
            xor,
            nand_nor,
            not,
            cpd,
            policy,
        };
        let d = DelayVector::new;
        match self {
            BlockId::M2 => t(
                Some(3),
                Some(4),
                None,
                Some(d(2, 1, 0, 0, 0)),
                Informational,
            ),
            BlockId::M4 => t(
                Some(17),
                Some(12),
                None,
                Some(d(3, 1, 0, 0, 0)),
                WithinPercent(10),
            ),
            BlockId::M8 => t(
                Some(82),
                Some(36),
                None,
                Some(d(8, 1, 0, 0, 0)),
                WithinPercent(10),
            ),
            BlockId::S4 => t(Some(6), None, None, Some(d(2, 0, 0, 0, 0)), Exact),
            BlockId::S8 => t(Some(15), None, None, Some(d(3, 0, 0, 0, 0)), Exact),
            BlockId::I4 => t(Some(2), Some(22), Some(4), Some(d(0, 2, 3, 0, 1)), Exact),
            BlockId::I8 => t(
                Some(64),
                Some(58),
                None,
                Some(d(7, 4, 3, 0, 1)),
                WithinPercent(10),
            ),
            BlockId::I16 => t(
                Some(343),
                Some(166),
                None,
                Some(d(24, 6, 3, 0, 1)),
                WithinPercent(10),
            ),
            BlockId::Scale8Mu => t(None, None, None, Some(d(3, 0, 0, 0, 0)), Informational),
            BlockId::MergeS8MMu => t(Some(17), None, None, Some(d(3, 0, 0, 0, 0)), Informational),
            BlockId::At => t(Some(24), None, None, Some(d(2, 0, 0, 0, 0)), AtMost(28)),
            BlockId::AtInv => t(Some(24), None, None, Some(d(2, 0, 0, 0, 0)), Informational),
            BlockId::Mnt => t(Some(57), None, None, Some(d(3, 0, 0, 0, 0)), AtMost(64)),
            BlockId::Mtn => t(Some(60), None, None, Some(d(3, 0, 0, 0, 0)), AtMost(66)),
            BlockId::Scale4Lambda
            | BlockId::Scale4LambdaSq
            | BlockId::Scale4Beta
            | BlockId::Scale4AlphaBeta
            | BlockId::MergeS4MLambda => t(None, None, None, None, Informational),
        }
    }
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BlockId {
    type Err = UnknownBlock;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        BlockId::ALL
            .into_iter()
            .find(|b| b.name() == t || b.ascii_name().eq_ignore_ascii_case(t))
            .ok_or_else(|| UnknownBlock(s.to_string()))
    }
}

/// How a block's census is judged against its published figures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Policy {
    /// XOR, NAND/NOR, NOT counts and the critical path must all match.
    Exact,
    /// XOR and NAND/NOR counts each within this many percent.
    WithinPercent(u32),
    /// XOR count at most this bound.
    AtMost(u32),
    /// Reported with deltas only.
    Informational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PublishedTarget {
    pub xor: Option<u32>,
    pub nand_nor: Option<u32>,
    pub not: Option<u32>,
    pub cpd: Option<DelayVector>,
    pub policy: Policy,
}

/// A block's measured census next to its target.
#[derive(Clone, Debug, Serialize)]
pub struct Assessment {
    pub block: String,
    pub census: Census,
    pub cpd: DelayVector,
    pub target: PublishedTarget,
    pub xor_delta: Option<i64>,
    pub nand_nor_delta: Option<i64>,
    pub not_delta: Option<i64>,
    pub cpd_matches: Option<bool>,
    /// `None` for informational rows.
    pub within_policy: Option<bool>,
}

fn delta(got: u32, want: Option<u32>) -> Option<i64> {
    want.map(|w| got as i64 - w as i64)
}

fn within_percent(d: Option<i64>, want: Option<u32>, pct: u32) -> bool {
    match (d, want) {
        (Some(d), Some(w)) => d.unsigned_abs() * 100 <= w as u64 * pct as u64,
        _ => true,
    }
}

pub fn assess(id: BlockId, n: &Netlist) -> Assessment {
    let census = n.census();
    let cpd = n.critical_path();
    let target = id.published_target();
    let xor_delta = delta(census.xor_pooled(), target.xor);
    let nand_nor_delta = delta(census.nand_nor(), target.nand_nor);
    let not_delta = delta(census.not, target.not);
    let cpd_matches = target.cpd.map(|c| c == cpd);
    let within_policy = match target.policy {
        Policy::Exact => Some(
            xor_delta.unwrap_or(0) == 0
                && nand_nor_delta.unwrap_or(0) == 0
                && not_delta.unwrap_or(0) == 0
                && cpd_matches.unwrap_or(true),
        ),
        Policy::WithinPercent(p) => Some(
            within_percent(xor_delta, target.xor, p)
                && within_percent(nand_nor_delta, target.nand_nor, p),
        ),
        Policy::AtMost(bound) => Some(census.xor_pooled() <= bound),
        Policy::Informational => None,
    };
    Assessment {
        block: id.name().to_string(),
        census,
        cpd,
        target,
        xor_delta,
        nand_nor_delta,
        not_delta,
        cpd_matches,
        within_policy,
    }
}

/// Per-output input masks of a linear map given as a function on words.
fn linear_masks(f: impl Fn(u32) -> u32, n_in: u32, n_out: u32) -> Vec<u64> {
    let images: Vec<u32> = (0..n_in).map(|i| f(1 << i)).collect();
    (0..n_out)
        .map(|j| {
            images
                .iter()
                .enumerate()
                .fold(0u64, |m, (i, y)| m | ((((y >> j) & 1) as u64) << i))
        })
        .collect()
}

fn linear(b: &mut Builder, ins: &[Wire], id: BlockId) -> Vec<Wire> {
    let (n_in, n_out) = id.widths();
    let masks = linear_masks(|x| id.reference(x), n_in, n_out);
    xor_network(b, ins, masks_to_terms(&masks))
}

/// c = a·b in F₄: c0 = a0b1 ⊕ a1(b0⊕b1), c1 = a1b0 ⊕ a0(b0⊕b1).
fn mul2(b: &mut Builder, a: &[Wire], c: &[Wire]) -> Vec<Wire> {
    let t = b.xor(c[1], c[0]);
    let (p, q) = (b.nand(a[0], c[1]), b.nand(a[1], t));
    let c0 = b.xor(p, q);
    let (p, q) = (b.nand(a[1], c[0]), b.nand(a[0], t));
    let c1 = b.xor(p, q);
    vec![c0, c1]
}

fn mul4(b: &mut Builder, a: &[Wire], c: &[Wire]) -> Vec<Wire> {
    let x = b.xor_bus(&a[..2], &a[2..]);
    let y = b.xor_bus(&c[..2], &c[2..]);
    let (p, q) = (b.nand(x[1], y[1]), b.nand(x[0], y[0]));
    let p1 = b.xor(p, q);
    let y01 = b.xor(y[0], y[1]);
    let (p, q) = (b.nand(x[1], y[0]), b.nand(x[0], y01));
    let p0 = b.xor(p, q);
    let ml = mul2(b, &a[..2], &c[..2]);
    let mh = mul2(b, &a[2..], &c[2..]);
    let lo = b.xor_bus(&[p0, p1], &ml);
    let hi = b.xor_bus(&[p0, p1], &mh);
    [lo, hi].concat()
}

fn mul8(b: &mut Builder, a: &[Wire], c: &[Wire]) -> Vec<Wire> {
    let x = b.xor_bus(&a[..4], &a[4..]);
    let y = b.xor_bus(&c[..4], &c[4..]);
    let m = mul4(b, &x, &y);
    let p = linear(b, &m, BlockId::Scale4Lambda);
    let ml = mul4(b, &a[..4], &c[..4]);
    let mh = mul4(b, &a[4..], &c[4..]);
    let lo = b.xor_bus(&p, &ml);
    let hi = b.xor_bus(&p, &mh);
    [lo, hi].concat()
}

/// The Karnaugh-map inverter in NAND/NOR form; 2 XOR, 22 NAND/NOR, 4 NOT.
fn inv4(b: &mut Builder, a: &[Wire]) -> Vec<Wire> {
    let n: Vec<Wire> = a.iter().map(|&w| b.not(w)).collect();
    let x01 = b.xor(a[1], a[0]);
    let x23 = b.xor(a[3], a[2]);

    // i0 = a3(a2' + a0) + a2(a1 ⊙ a0)(a3' + a0a1)
    let t = b.nand(a[2], n[0]);
    let t1 = b.nand(a[3], t);
    let a01 = b.nor(n[0], n[1]);
    let v = b.nor(n[3], a01);
    let z = b.nor(x01, v);
    let t2 = b.nand(a[2], z);
    let i0 = b.nand(t1, t2);

    // i1 = a3(a1' + a2) + a2(a1 ⊕ a0)
    let t = b.nand(a[1], n[2]);
    let t1 = b.nand(a[3], t);
    let t2 = b.nand(a[2], x01);
    let i1 = b.nand(t1, t2);

    // i2 = a1(a2 + a0') + a0(a3 ⊙ a2)(a2a3 + a1')
    let t = b.nand(n[2], a[0]);
    let t1 = b.nand(a[1], t);
    let a23 = b.nor(n[2], n[3]);
    let w = b.nor(n[1], a23);
    let z = b.nor(x23, w);
    let t2 = b.nand(a[0], z);
    let i2 = b.nand(t1, t2);

    // i3 = a1(a3' + a0) + a0(a3 ⊕ a2)
    let t = b.nand(a[3], n[0]);
    let t1 = b.nand(a[1], t);
    let t2 = b.nand(a[0], x23);
    let i3 = b.nand(t1, t2);

    vec![i0, i1, i2, i3]
}

/// (a_l γ + a_h γ¹⁶)⁻¹ = d⁻¹(a_h γ + a_l γ¹⁶) with d = λ(a_l⊕a_h)² ⊕ a_l a_h.
fn inv8(b: &mut Builder, a: &[Wire]) -> Vec<Wire> {
    let s = b.xor_bus(&a[..4], &a[4..]);
    let k = linear(b, &s, BlockId::MergeS4MLambda);
    let m = mul4(b, &a[..4], &a[4..]);
    let d = b.xor_bus(&k, &m);
    let e = inv4(b, &d);
    let lo = mul4(b, &e, &a[4..]);
    let hi = mul4(b, &e, &a[..4]);
    [lo, hi].concat()
}

fn inv16(b: &mut Builder, a: &[Wire]) -> Vec<Wire> {
    let s = b.xor_bus(&a[..8], &a[8..]);
    let k = linear(b, &s, BlockId::MergeS8MMu);
    let m = mul8(b, &a[..8], &a[8..]);
    let d = b.xor_bus(&k, &m);
    let e = inv8(b, &d);
    let lo = mul8(b, &e, &a[8..]);
    let hi = mul8(b, &e, &a[..8]);
    [lo, hi].concat()
}

pub fn build_block(id: BlockId) -> Netlist {
    let mut b = Builder::new(id.name());
    let (n_in, _) = id.widths();
    let two_operand = matches!(id, BlockId::M2 | BlockId::M4 | BlockId::M8);
    let (a, c) = if two_operand {
        (
            b.inputs("a", n_in as usize / 2),
            b.inputs("b", n_in as usize / 2),
        )
    } else {
        (b.inputs("a", n_in as usize), Vec::new())
    };
    let out = match id {
        BlockId::M2 => mul2(&mut b, &a, &c),
        BlockId::M4 => mul4(&mut b, &a, &c),
        BlockId::M8 => mul8(&mut b, &a, &c),
        BlockId::I4 => inv4(&mut b, &a),
        BlockId::I8 => inv8(&mut b, &a),
        BlockId::I16 => inv16(&mut b, &a),
        linear_id => {
            debug_assert!(linear_id.is_linear());
            linear(&mut b, &a, linear_id)
        }
    };
    b.outputs("y", &out);
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in BlockId::ALL {
            assert_eq!(id.name().parse::<BlockId>().unwrap(), id);
            assert_eq!(
                id.ascii_name().to_lowercase().parse::<BlockId>().unwrap(),
                id
            );
        }
        assert!("M16".parse::<BlockId>().is_err());
    }

    #[test]
    fn small_blocks_match_reference() {
        for id in BlockId::ALL {
            let (n_in, _) = id.widths();
            if n_in > 8 {
                continue;
            }
            let n = build_block(id);
            let tt = n.truth_table().unwrap();
            for x in 0..1u32 << n_in {
                assert_eq!(tt[x as usize] as u32, id.reference(x), "{id} at {x:#x}");
            }
        }
    }

    #[test]
    fn m2_identity_product() {
        let n = build_block(BlockId::M2);
        assert_eq!(n.eval_word(0b11_11).unwrap(), 0b11);
    }

    #[test]
    fn i4_census_and_path() {
        let n = build_block(BlockId::I4);
        let c = n.census();
        assert_eq!((c.xor_pooled(), c.nand_nor(), c.not), (2, 22, 4));
        assert_eq!(n.critical_path().to_string(), "2T_NA+3T_NO+T_N");
        assert_eq!(assess(BlockId::I4, &n).within_policy, Some(true));
    }

    #[test]
    fn s4_census_and_path() {
        let n = build_block(BlockId::S4);
        assert_eq!(n.census().xor, 6);
        assert_eq!(n.critical_path().to_string(), "2T_X");
    }

    #[test]
    fn linear_masks_of_identity() {
        assert_eq!(linear_masks(|x| x, 3, 3), vec![1, 2, 4]);
    }
}
