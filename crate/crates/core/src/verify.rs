//! The exhaustive correctness suite: tower arithmetic against the reference
//! field, conversion matrices, the affine layer and the assembled S-box.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::Progress;
use crate::convert::{self, is_homomorphism, resolve_orientation, strict_orientations, Resolution};
use crate::gf2::PrintedMatrix;
use crate::netlist::{build_block, BlockId};
use crate::reference::{build_tower_embedding, BasisBridge, TowerEmbedding};
use crate::sbox::{
    oracle_sbox, shared_bridge, AffinePair, TowerSbox, AFFINE_M_TEXT, AFFINE_N_TEXT,
};
use crate::tower::{inv16, inv4, inv8, mul16, mul4, mul8};

/// Matrix fixtures as printed text.
#[derive(Clone, Debug)]
pub struct Fixtures {
    pub m_nt: String,
    pub m_tn: String,
    pub affine_m: String,
    pub affine_n: String,
}

impl Default for Fixtures {
    fn default() -> Self {
        Self {
            m_nt: convert::M_NT_TEXT.to_string(),
            m_tn: convert::M_TN_TEXT.to_string(),
            affine_m: AFFINE_M_TEXT.to_string(),
            affine_n: AFFINE_N_TEXT.to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub fixtures: Fixtures,
    pub seed: u64,
    pub mul16_samples: usize,
    pub homomorphism_samples: usize,
    /// Also simulate every netlist block exhaustively.
    pub netlists: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            fixtures: Fixtures::default(),
            seed: convert::DEFAULT_SEED,
            mul16_samples: 100_000,
            homomorphism_samples: convert::HOMOMORPHISM_SAMPLES,
            netlists: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Check {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("{status}  {}: {}", self.name, self.detail)
    }
}

type Outcome = Result<String, String>;

fn timed(name: &str, f: impl FnOnce() -> Outcome) -> Check {
    let t = Instant::now();
    let r = f();
    let seconds = t.elapsed().as_secs_f64();
    let (passed, detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Check {
        name: name.to_string(),
        passed,
        detail,
        seconds,
    }
}

/// `word` replicated across 16 bits, the tower image of a subfield element.
fn replicate(word: u16, bits: u32) -> u16 {
    (0..16 / bits).fold(0, |acc, k| acc | (word << (k * bits)))
}

fn first_failure<T: Send>(
    xs: impl ParallelIterator<Item = T>,
    bad: impl Fn(&T) -> bool + Sync,
) -> Option<T> {
    xs.find_first(|x| bad(x))
}

/// mul4 on all 256 pairs against the reference field.
pub fn check_mul4(emb: &TowerEmbedding) -> Outcome {
    let bad = (0..256u32).find(|&p| {
        let (a, b) = ((p & 15) as u16, (p >> 4) as u16);
        emb.mul(replicate(a, 4), replicate(b, 4)) != replicate(mul4(a as u8, b as u8) as u16, 4)
    });
    match bad {
        None => Ok("256 pairs match".into()),
        Some(p) => Err(format!("mismatch at a = {:#x}, b = {:#x}", p & 15, p >> 4)),
    }
}

/// mul8 on all 65536 pairs against the reference field.
pub fn check_mul8(emb: &TowerEmbedding) -> Outcome {
    let bad = first_failure((0..65536u32).into_par_iter(), |&p| {
        let (a, b) = ((p & 255) as u16, (p >> 8) as u16);
        emb.mul(replicate(a, 8), replicate(b, 8)) != replicate(mul8(a as u8, b as u8) as u16, 8)
    });
    match bad {
        None => Ok("65536 pairs match".into()),
        Some(p) => Err(format!("mismatch at a = {:#x}, b = {:#x}", p & 255, p >> 8)),
    }
}

/// mul16 on random pairs against the reference field.
pub fn check_mul16(emb: &TowerEmbedding, samples: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(u16, u16)> = (0..samples).map(|_| (rng.gen(), rng.gen())).collect();
    match first_failure(pairs.par_iter(), |&&(a, b)| emb.mul(a, b) != mul16(a, b)) {
        None => Ok(format!("{samples} random pairs match (seed {seed:#x})")),
        Some((a, b)) => Err(format!("mismatch at a = {a:#06x}, b = {b:#06x}")),
    }
}

/// inv4 and inv8 exhaustively, inv16 on every nonzero word: the product
/// with the input is the all-ones identity, zero maps to zero, and inv16
/// agrees with reference inversion.
pub fn check_inversion(emb: &TowerEmbedding) -> Outcome {
    if inv4(0) != 0 || inv8(0) != 0 || inv16(0) != 0 {
        return Err("zero does not map to zero".into());
    }
    if let Some(a) = (1..16u8).find(|&a| mul4(a, inv4(a)) != 0xF) {
        return Err(format!("inv4 fails at {a:#x}"));
    }
    if let Some(a) = (1..=255u8).find(|&a| mul8(a, inv8(a)) != 0xFF) {
        return Err(format!("inv8 fails at {a:#x}"));
    }
    let bad = first_failure((1..=u16::MAX).into_par_iter(), |&a| {
        let i = inv16(a);
        mul16(a, i) != 0xFFFF || emb.inv(a) != i
    });
    match bad {
        None => Ok("15 + 255 + 65535 nonzero elements invert, 0 -> 0".into()),
        Some(a) => Err(format!("inv16 fails at {a:#06x}")),
    }
}

/// A GF(2) matrix fixture pair that resolves strictly, plus round trip and
/// homomorphism of the resolved pair.
pub fn check_conversion(
    fx: &Fixtures,
    bridge: &BasisBridge,
    seed: u64,
    samples: usize,
) -> Vec<Check> {
    let parsed =
        PrintedMatrix::parse(&fx.m_nt).and_then(|a| PrintedMatrix::parse(&fx.m_tn).map(|b| (a, b)));
    let (nt, tn) = match parsed {
        Ok(p) => p,
        Err(e) => return vec![timed("conversion fixtures parse", || Err(e.to_string()))],
    };
    let mut out = vec![timed(
        "conversion matrices M_NT·M_TN = I",
        || match strict_orientations(&nt, &tn, bridge, seed).first() {
            Some(o) => Ok(format!("printed pair is a mutual inverse with {o}")),
            None => Err("no reading order makes the printed pair mutual inverses".into()),
        },
    )];
    let pair = match resolve_orientation(&nt, &tn, bridge, seed) {
        Ok(p) => p,
        Err(e) => {
            out.push(timed("conversion homomorphism", || Err(e.to_string())));
            return out;
        }
    };
    if pair.resolution == Resolution::RecomputedTn {
        out.push(timed("conversion repair", || {
            Err(format!(
                "M_TN replaced by the inverse of M_NT; {} entries differ",
                pair.tn_delta.len()
            ))
        }));
    }
    out.push(timed("conversion homomorphism", || {
        if is_homomorphism(&pair.m_nt, &pair.m_tn, bridge, samples, seed) {
            Ok(format!("tn(nt(a)·nt(b)) = a·b on {samples} random pairs"))
        } else {
            Err("product not preserved".into())
        }
    }));
    out.push(timed("conversion round trip", || {
        match (0..=u16::MAX).find(|&x| pair.tn(pair.nt(x)) != x || pair.nt(pair.tn(x)) != x) {
            None => Ok("all 65536 words round-trip".into()),
            Some(x) => Err(format!("round trip fails at {x:#06x}")),
        }
    }));
    out
}

/// Full S-box checks for a given construction.
pub fn check_sbox(sbox: &TowerSbox, bridge: &BasisBridge) -> Vec<Check> {
    let table: Vec<u16> = (0..=u16::MAX)
        .into_par_iter()
        .map(|x| sbox.forward(x))
        .collect();
    vec![
        timed("s-box is a permutation", || {
            let mut seen = vec![false; 1 << 16];
            for &y in &table {
                if std::mem::replace(&mut seen[y as usize], true) {
                    return Err(format!("value {y:#06x} appears twice"));
                }
            }
            Ok("65536 distinct outputs".into())
        }),
        timed("s-box inverse composes to identity", || {
            let bad = first_failure((0..=u16::MAX).into_par_iter(), |&x| {
                sbox.inverse(table[x as usize]) != x || sbox.forward(sbox.inverse(x)) != x
            });
            match bad {
                None => Ok("inverse∘forward and forward∘inverse are the identity".into()),
                Some(x) => Err(format!("fails at {x:#06x}")),
            }
        }),
        timed("s-box equals reference composition", || {
            let bad = first_failure((0..=u16::MAX).into_par_iter(), |&x| {
                table[x as usize] != oracle_sbox(bridge, &sbox.affine, x)
            });
            match bad {
                None => {
                    Ok("tower route equals normal-basis inversion then AT on all inputs".into())
                }
                Some(x) => Err(format!("differs at {x:#06x}")),
            }
        }),
    ]
}

/// Every catalog block simulated on its whole input space.
pub fn check_netlists() -> Outcome {
    for id in BlockId::ALL {
        let n = build_block(id);
        let tt = n.truth_table().map_err(|e| e.to_string())?;
        if let Some(x) = (0..tt.len()).find(|&x| tt[x] as u32 != id.reference(x as u32)) {
            return Err(format!("{id} differs at input {x:#x}"));
        }
    }
    Ok(format!("{} blocks match exhaustively", BlockId::ALL.len()))
}

pub fn run(opts: &VerifyOptions, progress: Progress<'_>) -> Vec<Check> {
    let note = |m: &str| {
        if let Some(p) = progress {
            p(m)
        }
    };
    let bridge = shared_bridge();
    let mut out = Vec::new();
    note("verify: tower arithmetic");
    match build_tower_embedding() {
        Ok(emb) => {
            out.push(timed("mul4 vs reference field", || check_mul4(&emb)));
            out.push(timed("mul8 vs reference field", || check_mul8(&emb)));
            out.push(timed("mul16 vs reference field", || {
                check_mul16(&emb, opts.mul16_samples, opts.seed)
            }));
            out.push(timed("inversion", || check_inversion(&emb)));
        }
        Err(e) => out.push(timed("tower embedding", || Err(e.to_string()))),
    }
    note("verify: conversion matrices");
    let conv_checks =
        check_conversion(&opts.fixtures, bridge, opts.seed, opts.homomorphism_samples);
    let conv_ok = conv_checks.iter().all(|c| c.passed);
    out.extend(conv_checks);

    note("verify: affine layer");
    let affine = AffinePair::from_text(&opts.fixtures.affine_m, &opts.fixtures.affine_n);
    out.push(timed("affine matrices M·N = I", || match &affine {
        Ok(_) => Ok("N is the inverse of M".into()),
        Err(e) => Err(e.to_string()),
    }));

    note("verify: s-box");
    let conv = convert::resolve_from_text(&opts.fixtures.m_nt, &opts.fixtures.m_tn, opts.seed);
    match (conv, affine) {
        (Ok(conv), Ok(affine)) if conv_ok => {
            out.extend(check_sbox(&TowerSbox::new(conv, affine), bridge))
        }
        _ => out.push(timed("s-box", || {
            Err("skipped: matrix checks failed".into())
        })),
    }
    if opts.netlists {
        note("verify: netlists");
        out.push(timed("netlist blocks vs functions", check_netlists));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replicate_words() {
        assert_eq!(replicate(0xA, 4), 0xAAAA);
        assert_eq!(replicate(0x12, 8), 0x1212);
    }

    #[test]
    fn small_checks_pass() {
        let emb = build_tower_embedding().unwrap();
        assert!(check_mul4(&emb).is_ok());
        assert!(check_mul16(&emb, 1000, 1).is_ok());
    }
}
