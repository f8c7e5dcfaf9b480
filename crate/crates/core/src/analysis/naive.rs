//! Definition-level implementations used as test oracles. Quadratic or
//! worse; meant for n ≤ 8.

use super::walsh::sign;
use crate::sbox::SboxTable;

/// W(u) = Σ_x f(x)·(−1)^{⟨u,x⟩} for a ±1 table.
pub fn walsh(f: &[i32]) -> Vec<i32> {
    (0..f.len())
        .map(|u| {
            (0..f.len())
                .map(|x| f[x] * sign((u & x).count_ones()))
                .sum()
        })
        .collect()
}

fn parity(x: u32) -> u32 {
    x.count_ones() & 1
}

pub fn nonlinearity(s: &SboxTable) -> u32 {
    let size = 1u32 << s.n();
    let mut max = 0u32;
    for v in 1..(1u32 << s.m()) {
        for u in 0..size {
            let w: i32 = (0..size)
                .map(|x| sign(parity(v & s.get(x as usize) as u32) ^ parity(u & x)))
                .sum();
            max = max.max(w.unsigned_abs());
        }
    }
    (size / 2) - max / 2
}

pub fn differential_uniformity(s: &SboxTable) -> u32 {
    let size = 1usize << s.n();
    let mut best = 0;
    for dx in 1..size {
        for dy in 1..(1usize << s.m()) {
            let c = (0..size)
                .filter(|&x| (s.get(x) ^ s.get(x ^ dx)) as usize == dy)
                .count() as u32;
            best = best.max(c);
        }
    }
    best
}

/// Degree of one coordinate from c_I = ⊕_{x ⊆ I} f(x).
pub fn anf_degree(f: &[u8]) -> u32 {
    let mut deg = 0;
    for i in 0..f.len() {
        let c = (0..f.len())
            .filter(|&x| x & !i == 0)
            .fold(0u8, |acc, x| acc ^ f[x]);
        if c == 1 {
            deg = deg.max(i.count_ones());
        }
    }
    deg
}

pub fn algebraic_degree(s: &SboxTable) -> u32 {
    (0..s.m())
        .map(|j| {
            let f: Vec<u8> = s.entries().iter().map(|y| ((y >> j) & 1) as u8).collect();
            anf_degree(&f)
        })
        .max()
        .unwrap_or(0)
}

pub fn fixed_points(s: &SboxTable) -> (u32, u32) {
    let mask = (1u32 << s.n()) - 1;
    let fp = (0..s.len()).filter(|&x| s.get(x) as usize == x).count() as u32;
    let ofp = (0..s.len())
        .filter(|&x| s.get(x) as u32 == !(x as u32) & mask)
        .count() as u32;
    (fp, ofp)
}

/// Cycle lengths, sorted, one entry per cycle.
pub fn cycle_lengths(s: &SboxTable) -> Vec<u32> {
    let mut out = Vec::new();
    let mut seen = vec![false; s.len()];
    for x in 0..s.len() {
        if seen[x] {
            continue;
        }
        let mut len = 0;
        let mut y = x;
        loop {
            seen[y] = true;
            len += 1;
            y = s.get(y) as usize;
            if y == x {
                break;
            }
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

/// Transparency order straight from the definition, as (numerator,
/// denominator).
pub fn transparency_order(s: &SboxTable) -> (i64, u64) {
    let (n, m) = (s.n(), s.m());
    let size = 1usize << n;
    let den = (1u64 << (2 * n)) - (1u64 << n);
    let mut best: Option<i64> = None;
    for beta in 0..(1u32 << m) {
        let mut sum = 0i64;
        for a in 1..size {
            let mut inner = 0i64;
            for i in 0..m {
                let v = 1u16 << i;
                let w: i64 = (0..size)
                    .map(|x| sign(((s.get(x) ^ s.get(x ^ a)) & v).count_ones()) as i64)
                    .sum();
                inner += sign((beta >> i) & 1) as i64 * w;
            }
            sum += inner.abs();
        }
        let k = (m as i64 - 2 * beta.count_ones() as i64).abs();
        let num = k * den as i64 - sum;
        best = Some(best.map_or(num, |b| b.max(num)));
    }
    (best.unwrap(), den)
}

/// Σ_a (Σ_i W_{f_i}(a))⁴ from direct Walsh sums.
pub fn snr_fourth_moment(s: &SboxTable) -> u128 {
    let size = 1usize << s.n();
    (0..size)
        .map(|a| {
            let t: i64 = (0..s.m())
                .map(|i| {
                    (0..size)
                        .map(|x| sign(((s.get(x) >> i) as u32 & 1) ^ parity((a & x) as u32)) as i64)
                        .sum::<i64>()
                })
                .sum();
            (t as i128).pow(4) as u128
        })
        .sum()
}
