//! Algebraic normal form via the binary Möbius transform.

use crate::sbox::SboxTable;

/// ANF of all coordinates at once: bit j of `coeffs[I]` is the coefficient
/// of the monomial x^I in coordinate j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnfTable {
    pub n: u32,
    pub m: u32,
    pub coeffs: Vec<u16>,
}

/// Möbius transform over GF(2), bit-parallel across the 16 lanes. It is an
/// involution.
pub fn mobius_in_place(words: &mut [u16]) {
    let mut h = 1;
    while h < words.len() {
        for chunk in words.chunks_exact_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (x, y) in lo.iter().zip(hi.iter_mut()) {
                *y ^= *x;
            }
        }
        h *= 2;
    }
}

pub fn anf(s: &SboxTable) -> AnfTable {
    let mut coeffs = s.entries().to_vec();
    mobius_in_place(&mut coeffs);
    AnfTable {
        n: s.n(),
        m: s.m(),
        coeffs,
    }
}

impl AnfTable {
    /// Degree of coordinate `j`.
    pub fn coordinate_degree(&self, j: u32) -> u32 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| (c >> j) & 1 == 1)
            .map(|(i, _)| i.count_ones())
            .max()
            .unwrap_or(0)
    }

    /// Largest monomial weight present in any coordinate.
    pub fn degree(&self) -> u32 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i.count_ones())
            .max()
            .unwrap_or(0)
    }

    pub fn to_truth_table(&self) -> Vec<u16> {
        let mut t = self.coeffs.clone();
        mobius_in_place(&mut t);
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::naive;

    #[test]
    fn affine_has_degree_one() {
        let rot = |x: u16| ((x << 3 | x >> 5) & 0xFF) ^ 0x5A;
        let t = SboxTable::new("a", 8, 8, (0..256u16).map(rot).collect(), "").unwrap();
        assert_eq!(anf(&t).degree(), 1);
    }

    #[test]
    fn involution_and_naive_agree() {
        let entries: Vec<u16> = (0..256u32)
            .map(|x| ((x * x * 31 + 7 * x) >> 3) as u16 & 0xFF)
            .collect();
        let t = SboxTable::new("q", 8, 8, entries.clone(), "").unwrap();
        let a = anf(&t);
        assert_eq!(a.to_truth_table(), entries);
        for j in 0..8 {
            let coord: Vec<u8> = entries.iter().map(|v| ((v >> j) & 1) as u8).collect();
            assert_eq!(a.coordinate_degree(j), naive::anf_degree(&coord));
        }
    }
}
