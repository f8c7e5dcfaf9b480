//! Component truth tables and the fast Walsh–Hadamard transform.

use std::ops::{Add, Sub};

use super::AnalysisError;
use crate::sbox::SboxTable;

/// ±1 truth table of x ↦ ⟨v, S(x)⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentTT {
    pub n: u32,
    pub values: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshSpectrum {
    pub n: u32,
    pub coeffs: Vec<i32>,
}

impl WalshSpectrum {
    /// Σ W(u)², which must equal 2²ⁿ.
    pub fn energy(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|&w| (w as i64 * w as i64) as u64)
            .sum()
    }

    pub fn satisfies_parseval(&self) -> bool {
        self.energy() == 1u64 << (2 * self.n)
    }

    pub fn max_abs(&self) -> u32 {
        self.coeffs
            .iter()
            .map(|w| w.unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

#[inline]
pub fn sign(bit: u32) -> i32 {
    1 - 2 * (bit as i32 & 1)
}

pub fn component_function(s: &SboxTable, v: u16) -> ComponentTT {
    let values = s
        .entries()
        .iter()
        .map(|&y| sign((y & v).count_ones()))
        .collect();
    ComponentTT { n: s.n(), values }
}

/// In-place unnormalized butterfly; `data.len()` must be a power of two.
pub fn fwht_in_place<T>(data: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    debug_assert!(data.len().is_power_of_two());
    let mut h = 1;
    while h < data.len() {
        for chunk in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = a + b;
                *y = a - b;
            }
        }
        h *= 2;
    }
}

pub fn fwht(tt: ComponentTT) -> Result<WalshSpectrum, AnalysisError> {
    let len = tt.values.len();
    if !len.is_power_of_two() {
        return Err(AnalysisError::NotPowerOfTwo(len));
    }
    let mut coeffs = tt.values;
    fwht_in_place(&mut coeffs);
    Ok(WalshSpectrum {
        n: len.trailing_zeros(),
        coeffs,
    })
}

/// Walsh spectra of the m single-bit coordinates.
pub fn coordinate_spectra(s: &SboxTable) -> Vec<Vec<i32>> {
    use rayon::prelude::*;
    (0..s.m())
        .into_par_iter()
        .map(|i| {
            let mut w = component_function(s, 1 << i).values;
            fwht_in_place(&mut w);
            w
        })
        .collect()
}
