//! Nonlinearity, differential uniformity, algebraic degree, fixed points and
//! cycle structure.
//!
//! Outer loops run on the ambient rayon pool; every reduction is an integer
//! max or sum, so results do not depend on the number of workers.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::anf::anf;
use super::walsh::{fwht_in_place, sign};
use super::{AnalysisError, Progress};
use crate::sbox::SboxTable;

fn tick(progress: Progress<'_>, done: &AtomicUsize, total: usize, label: &str) {
    let d = done.fetch_add(1, Ordering::Relaxed) + 1;
    let step = (total / 16).max(1);
    if let Some(p) = progress {
        if d.is_multiple_of(step) || d == total {
            p(&format!("{label}: {d}/{total}"));
        }
    }
}

/// max over v ≠ 0 and all u of |W(u, v)|.
pub fn max_walsh(s: &SboxTable, progress: Progress<'_>) -> u32 {
    let size = 1usize << s.n();
    let total = (1usize << s.m()) - 1;
    let done = AtomicUsize::new(0);
    (1..=total as u32)
        .into_par_iter()
        .map_init(
            || vec![0i32; size],
            |buf, v| {
                for (b, &y) in buf.iter_mut().zip(s.entries()) {
                    *b = sign((y as u32 & v).count_ones());
                }
                fwht_in_place(buf);
                tick(progress, &done, total, "nl");
                buf.iter().map(|w| w.unsigned_abs()).max().unwrap_or(0)
            },
        )
        .max()
        .unwrap_or(0)
}

pub fn nonlinearity(s: &SboxTable, progress: Progress<'_>) -> u32 {
    (1u32 << (s.n() - 1)) - max_walsh(s, progress) / 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdtSummary {
    pub n: u32,
    /// `row_max[dx]` is the largest DDT(dx, dy) over dy ≠ 0; entry 0 unused.
    pub row_max: Vec<u32>,
    /// δ_S, the maximum over all rows.
    pub du: u32,
}

/// Full DDT row for one input difference.
pub fn ddt_row(s: &SboxTable, dx: usize) -> Vec<u32> {
    let mut row = vec![0u32; 1 << s.m()];
    let e = s.entries();
    for x in 0..e.len() {
        row[(e[x] ^ e[x ^ dx]) as usize] += 1;
    }
    row
}

/// Streams each row with u16 pair counters: x and x⊕dx hit the same dy, so
/// only the half with the top bit of dx clear is visited.
pub fn differential_uniformity(s: &SboxTable, progress: Progress<'_>) -> DdtSummary {
    let size = 1usize << s.n();
    let out = 1usize << s.m();
    let e = s.entries();
    let done = AtomicUsize::new(0);
    let total = size - 1;
    let mut row_max: Vec<u32> = (1..size)
        .into_par_iter()
        .map_init(
            || vec![0u16; out],
            |cnt, dx| {
                cnt.fill(0);
                let hb = 1usize << (usize::BITS - 1 - dx.leading_zeros());
                for base in (0..size).step_by(2 * hb) {
                    for x in base..base + hb {
                        cnt[(e[x] ^ e[x ^ dx]) as usize] += 1;
                    }
                }
                tick(progress, &done, total, "du");
                2 * cnt[1..].iter().copied().max().unwrap_or(0) as u32
            },
        )
        .collect();
    row_max.insert(0, 0);
    let du = row_max.iter().copied().max().unwrap_or(0);
    DdtSummary {
        n: s.n(),
        row_max,
        du,
    }
}

pub fn algebraic_degree(s: &SboxTable) -> u32 {
    anf(s).degree()
}

/// (fixed points, opposite fixed points).
pub fn fixed_points(s: &SboxTable) -> Result<(u32, u32), AnalysisError> {
    if s.n() != s.m() {
        return Err(AnalysisError::WidthMismatch { n: s.n(), m: s.m() });
    }
    let mask = ((1u32 << s.n()) - 1) as u16;
    let mut fp = 0;
    let mut ofp = 0;
    for (x, &y) in s.entries().iter().enumerate() {
        let x = x as u16;
        fp += (y == x) as u32;
        ofp += (y == !x & mask) as u32;
    }
    Ok((fp, ofp))
}

/// Cycle lengths of the permutation as (length, count) pairs, ascending.
pub fn cycle_structure(s: &SboxTable) -> Result<Vec<(u32, u32)>, AnalysisError> {
    if !s.is_bijective() {
        return Err(AnalysisError::NotBijective);
    }
    let e = s.entries();
    let mut seen = vec![false; e.len()];
    let mut hist = BTreeMap::new();
    for start in 0..e.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u32;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = e[x] as usize;
            len += 1;
        }
        *hist.entry(len).or_insert(0u32) += 1;
    }
    Ok(hist.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbox::gen_table;

    fn small(entries: &[u16], n: u32) -> SboxTable {
        SboxTable::new("s", n, n, entries.to_vec(), "").unwrap()
    }

    #[test]
    fn identity_extremes() {
        let id = small(&(0..256).collect::<Vec<_>>(), 8);
        assert_eq!(nonlinearity(&id, None), 0);
        assert_eq!(differential_uniformity(&id, None).du, 256);
        assert_eq!(algebraic_degree(&id), 1);
        assert_eq!(fixed_points(&id).unwrap(), (256, 0));
        assert_eq!(cycle_structure(&id).unwrap(), vec![(1, 256)]);
    }

    #[test]
    fn complement_and_rotation() {
        let c = small(&(0..16).map(|x| !x & 15).collect::<Vec<_>>(), 4);
        assert_eq!(fixed_points(&c).unwrap(), (0, 16));
        let r = gen_table(|x| x.wrapping_add(1), "inc", "");
        assert_eq!(cycle_structure(&r).unwrap(), vec![(1 << 16, 1)]);
    }

    #[test]
    fn ddt_rows_sum_and_are_even() {
        let t = small(
            &[0xC, 5, 6, 0xB, 9, 0, 0xA, 0xD, 3, 0xE, 0xF, 8, 4, 7, 1, 2],
            4,
        );
        for dx in 1..16 {
            let row = ddt_row(&t, dx);
            assert_eq!(row.iter().sum::<u32>(), 16);
            assert!(row.iter().all(|v| v % 2 == 0));
        }
        assert_eq!(differential_uniformity(&t, None).du, 4);
        assert_eq!(nonlinearity(&t, None), 4);
        assert_eq!(algebraic_degree(&t), 3);
    }

    #[test]
    fn non_bijective_inputs() {
        let z = small(&[0; 16], 4);
        assert!(matches!(
            cycle_structure(&z),
            Err(AnalysisError::NotBijective)
        ));
        let wide = SboxTable::new("w", 4, 5, vec![0; 16], "").unwrap();
        assert!(matches!(
            fixed_points(&wide),
            Err(AnalysisError::WidthMismatch { .. })
        ));
    }
}
