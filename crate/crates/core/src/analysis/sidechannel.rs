//! Revisited transparency order and DPA signal-to-noise ratio, both exact
//! until the final decimal rendering.
//!
//! TO(β) = |m − 2·wt(β)| − Σ_{a≠0} |Σ_i (−1)^{β_i} C_i(a)| / (2²ⁿ − 2ⁿ),
//! where C_i(a) = Σ_x (−1)^{S_i(x) ⊕ S_i(x⊕a)} is the autocorrelation of
//! coordinate i, obtained from its Walsh spectrum as FWHT(W_i²) / 2ⁿ.

use rayon::prelude::*;

use super::walsh::fwht_in_place;
use super::AnalysisError;
use crate::sbox::SboxTable;

/// Exact value `num / den` with the maximizing β.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransparencyOrder {
    pub num: i64,
    pub den: u64,
    pub beta: u16,
}

impl TransparencyOrder {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Four decimals, ties to even.
    pub fn display(self) -> String {
        format_ratio(self.num as i128, self.den as u128, 4)
    }
}

/// `num/den` rounded to `places` decimals, ties to even.
pub fn format_ratio(num: i128, den: u128, places: u32) -> String {
    assert!(den > 0);
    let neg = num < 0;
    let scale = 10u128.pow(places);
    let n = num.unsigned_abs() * scale;
    let (mut q, r) = (n / den, n % den);
    if 2 * r > den || (2 * r == den && q % 2 == 1) {
        q += 1;
    }
    let int = q / scale;
    let frac = q % scale;
    let sign = if neg && q != 0 { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0width$}", width = places as usize)
    }
}

/// Row-major `a * m + i` table of C_i(a).
pub fn autocorrelations(spectra: &[Vec<i32>], n: u32) -> Vec<i32> {
    let size = 1usize << n;
    let m = spectra.len();
    let cols: Vec<Vec<i64>> = spectra
        .par_iter()
        .map(|w| {
            let mut sq: Vec<i64> = w.iter().map(|&c| c as i64 * c as i64).collect();
            fwht_in_place(&mut sq);
            sq.iter().map(|v| v >> n).collect()
        })
        .collect();
    let mut out = vec![0i32; size * m];
    for (i, col) in cols.iter().enumerate() {
        for (a, &v) in col.iter().enumerate() {
            out[a * m + i] = v as i32;
        }
    }
    out
}

/// Σ_{a≠0} |Σ_i (−1)^{β_i} C_i(a)|.
fn beta_sum(ac: &[i32], m: usize, beta: u16) -> i64 {
    let signs: Vec<i32> = (0..m).map(|i| 1 - 2 * ((beta >> i) & 1) as i32).collect();
    ac.chunks_exact(m)
        .skip(1)
        .map(|row| {
            row.iter()
                .zip(&signs)
                .map(|(c, s)| c * s)
                .sum::<i32>()
                .unsigned_abs() as i64
        })
        .sum()
}

pub fn transparency_order(
    s: &SboxTable,
    spectra: &[Vec<i32>],
) -> Result<TransparencyOrder, AnalysisError> {
    let (n, m) = (s.n(), s.m());
    if n != m {
        return Err(AnalysisError::WidthMismatch { n, m });
    }
    let ac = autocorrelations(spectra, n);
    let mu = m as usize;
    let den = (1u64 << (2 * n)) - (1u64 << n);

    // β classes by |m − 2k|, largest first; each class is bounded above by
    // that value, so the scan stops once the best found reaches the bound.
    let mut weights: Vec<u32> = (0..=m).collect();
    weights.sort_by_key(|&k| {
        (
            std::cmp::Reverse((m as i32 - 2 * k as i32).unsigned_abs()),
            k,
        )
    });
    let mut best: Option<TransparencyOrder> = None;
    for k in weights {
        let bound = (m as i32 - 2 * k as i32).unsigned_abs() as i64;
        if let Some(b) = best {
            if b.num >= bound * den as i64 {
                break;
            }
        }
        let betas: Vec<u16> = (0..(1u32 << m))
            .filter(|b| b.count_ones() == k)
            .map(|b| b as u16)
            .collect();
        let cand = betas
            .par_iter()
            .map(|&beta| TransparencyOrder {
                num: bound * den as i64 - beta_sum(&ac, mu, beta),
                den,
                beta,
            })
            // ties resolve to the smaller β, independent of scheduling
            .reduce_with(|x, y| {
                if (y.num, std::cmp::Reverse(y.beta)) > (x.num, std::cmp::Reverse(x.beta)) {
                    y
                } else {
                    x
                }
            });
        if let Some(c) = cand {
            if best.is_none_or(|b| {
                (c.num, std::cmp::Reverse(c.beta)) > (b.num, std::cmp::Reverse(b.beta))
            }) {
                best = Some(c);
            }
        }
    }
    Ok(best.expect("the β = 0 class is always scanned"))
}

/// SNR = m·2²ⁿ / √(Σ_a (Σ_i W_i(a))⁴), kept as the exact integer sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Snr {
    pub n: u32,
    pub m: u32,
    pub fourth_moment: u128,
}

impl Snr {
    pub fn value(self) -> f64 {
        let num = self.m as f64 * (2f64).powi(2 * self.n as i32);
        num / (self.fourth_moment as f64).sqrt()
    }

    /// Three significant digits, ties to even.
    pub fn display(self) -> String {
        sig3(self.value())
    }
}

pub fn snr_dpa(s: &SboxTable, spectra: &[Vec<i32>]) -> Result<Snr, AnalysisError> {
    let (n, m) = (s.n(), s.m());
    if n != m {
        return Err(AnalysisError::WidthMismatch { n, m });
    }
    let size = 1usize << n;
    let fourth_moment: u128 = (0..size)
        .into_par_iter()
        .map(|a| {
            let t: i64 = spectra.iter().map(|w| w[a] as i64).sum();
            let t2 = (t * t) as u128;
            t2 * t2
        })
        .sum();
    if fourth_moment == 0 {
        return Err(AnalysisError::DegenerateSnr);
    }
    Ok(Snr {
        n,
        m,
        fourth_moment,
    })
}

/// Renders `v` with three significant digits in plain decimal notation.
pub fn sig3(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    // `{:e}` rounds the exact binary value, ties to even
    let sci = format!("{:.2e}", v.abs());
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if v < 0.0 { "-" } else { "" };
    let point = exp + 1; // digits before the decimal point
    let body = if point <= 0 {
        format!("0.{}{digits}", "0".repeat((-point) as usize))
    } else if point as usize >= digits.len() {
        format!("{digits}{}", "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    format!("{sign}{body}")
}
