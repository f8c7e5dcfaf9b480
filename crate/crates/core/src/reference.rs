//! Ground-truth arithmetic in F₂¹⁶ using the polynomial basis over
//! p(x) = x¹⁶ + x⁵ + x³ + x² + 1, plus the bridge to the normal basis
//! generated by θ = ω¹⁰⁹¹.
//!
//! Nothing here is fast or clever on purpose: every other module is checked
//! against these functions.

use thiserror::Error;

use crate::gf2::BinMatrix16;

/// Low 16 bits of the field polynomial (the x¹⁶ term is implicit).
pub const POLY_LOW: u16 = 0x002D;

/// Exponent of ω giving the normal element θ.
pub const THETA_EXP: u32 = 1091;

/// Exponents of ω for the tower generators α, β, γ, δ.
pub const ALPHA_EXP: u32 = 21845;
pub const BETA_EXP: u32 = 4369;
pub const GAMMA_EXP: u32 = 14392;
pub const DELTA_EXP: u32 = 45049;

/// Element in the polynomial basis: bit i is the coefficient of ωⁱ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyElem(pub u16);

/// Element in the normal basis: bit i is the coefficient of θ^(2^i).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalElem(pub u16);

impl PolyElem {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);
    pub const OMEGA: Self = Self(2);
}

pub fn poly_mul(a: PolyElem, b: PolyElem) -> PolyElem {
    let (mut a, mut b) = (a.0, b.0);
    let mut acc = 0u16;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        let carry = a & 0x8000 != 0;
        a <<= 1;
        if carry {
            a ^= POLY_LOW;
        }
    }
    PolyElem(acc)
}

pub fn poly_sq(a: PolyElem) -> PolyElem {
    poly_mul(a, a)
}

/// Square-and-multiply; `poly_pow(0, 0)` is 1.
pub fn poly_pow(a: PolyElem, mut e: u64) -> PolyElem {
    let mut base = a;
    let mut acc = PolyElem::ONE;
    while e != 0 {
        if e & 1 == 1 {
            acc = poly_mul(acc, base);
        }
        base = poly_sq(base);
        e >>= 1;
    }
    acc
}

/// a^(2¹⁶−2); zero maps to zero.
pub fn poly_inv(a: PolyElem) -> PolyElem {
    poly_pow(a, (1 << 16) - 2)
}

/// ωᵉ.
pub fn omega_pow(e: u32) -> PolyElem {
    poly_pow(PolyElem::OMEGA, e as u64)
}

/// Extended-Euclid inverse over GF(2)[x], used as a cross-check of
/// [`poly_inv`].
pub fn poly_inv_euclid(a: PolyElem) -> PolyElem {
    if a.0 == 0 {
        return PolyElem::ZERO;
    }
    // polynomials held in u32 so the modulus fits
    let deg = |x: u32| 31 - x.leading_zeros() as i32;
    let (mut r0, mut r1) = (0x1_002Du32, a.0 as u32);
    let (mut s0, mut s1) = (0u32, 1u32);
    while r1 != 1 {
        let mut q = 0u32;
        let mut r = r0;
        while r != 0 && deg(r) >= deg(r1) {
            let shift = deg(r) - deg(r1);
            q ^= 1 << shift;
            r ^= r1 << shift;
        }
        let mut qs = 0u32;
        for i in 0..32 {
            if (q >> i) & 1 == 1 {
                qs ^= s1 << i;
            }
        }
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s0 ^ qs);
    }
    PolyElem(s1 as u16)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReferenceError {
    #[error("θ = ω^{0} does not generate a normal basis")]
    NotNormal(u32),
    #[error("tower generators do not form a basis")]
    TowerBasisSingular,
}

/// Conversion between the normal and polynomial bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisBridge {
    pub nb_to_pb: BinMatrix16,
    pub pb_to_nb: BinMatrix16,
}

pub fn build_basis_bridge() -> Result<BasisBridge, ReferenceError> {
    let mut cols = [0u16; 16];
    let mut t = omega_pow(THETA_EXP);
    for col in cols.iter_mut() {
        *col = t.0;
        t = poly_sq(t);
    }
    let nb_to_pb = BinMatrix16::from_columns(cols);
    let pb_to_nb = nb_to_pb
        .inverse()
        .ok_or(ReferenceError::NotNormal(THETA_EXP))?;
    Ok(BasisBridge { nb_to_pb, pb_to_nb })
}

impl BasisBridge {
    pub fn to_poly(&self, a: NormalElem) -> PolyElem {
        PolyElem(self.nb_to_pb.mat_vec(a.0))
    }

    pub fn to_normal(&self, a: PolyElem) -> NormalElem {
        NormalElem(self.pb_to_nb.mat_vec(a.0))
    }

    pub fn normal_mul(&self, a: NormalElem, b: NormalElem) -> NormalElem {
        self.to_normal(poly_mul(self.to_poly(a), self.to_poly(b)))
    }

    pub fn normal_inv(&self, a: NormalElem) -> NormalElem {
        self.to_normal(poly_inv(self.to_poly(a)))
    }
}

/// Polynomial-basis image of the tower basis built from the generators
/// α, β, γ, δ.
///
/// Tower bit `i` stands for α^(2^b0)·β^(4^b1)·γ^(16^b2)·δ^(256^b3) where
/// `b_k` is bit k of `i`. This is derived from the defining polynomials
/// alone, so it can check the printed conversion matrices independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerEmbedding {
    pub tower_to_pb: BinMatrix16,
    pub pb_to_tower: BinMatrix16,
}

/// Poly-basis value of tower basis element `i` (0..16).
pub fn tower_basis_element(i: usize) -> PolyElem {
    let gens = [ALPHA_EXP, BETA_EXP, GAMMA_EXP, DELTA_EXP];
    let mut acc = PolyElem::ONE;
    for (k, &g) in gens.iter().enumerate() {
        let frob = if (i >> k) & 1 == 1 {
            1u64 << (1 << k)
        } else {
            1
        };
        // conjugate g^(2^(2^k)) or g itself
        acc = poly_mul(acc, poly_pow(omega_pow(g), frob));
    }
    acc
}

pub fn build_tower_embedding() -> Result<TowerEmbedding, ReferenceError> {
    let cols: [u16; 16] = std::array::from_fn(|i| tower_basis_element(i).0);
    let tower_to_pb = BinMatrix16::from_columns(cols);
    let pb_to_tower = tower_to_pb
        .inverse()
        .ok_or(ReferenceError::TowerBasisSingular)?;
    Ok(TowerEmbedding {
        tower_to_pb,
        pb_to_tower,
    })
}

impl TowerEmbedding {
    pub fn to_poly(&self, t: u16) -> PolyElem {
        PolyElem(self.tower_to_pb.mat_vec(t))
    }

    pub fn to_tower(&self, p: PolyElem) -> u16 {
        self.pb_to_tower.mat_vec(p.0)
    }

    /// Tower-word product computed in the polynomial basis.
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.to_tower(poly_mul(self.to_poly(a), self.to_poly(b)))
    }

    pub fn inv(&self, a: u16) -> u16 {
        self.to_tower(poly_inv(self.to_poly(a)))
    }

    /// Normal→tower matrix implied by the generators.
    pub fn normal_to_tower(&self, bridge: &BasisBridge) -> BinMatrix16 {
        self.pb_to_tower.mul(&bridge.nb_to_pb)
    }
}

/// Tower word of a sub-field element given in poly basis, restricted to
/// the low `bits` bits.
///
/// Elements of F₂ᵏ (k = 2, 4, 8) embed into the tower with a fixed pattern:
/// the low-k-bit word replicated. Returns `None` when `p` is not in the
/// subfield.
pub fn subfield_word(emb: &TowerEmbedding, p: PolyElem, bits: u32) -> Option<u16> {
    let t = emb.to_tower(p);
    let mask = ((1u32 << bits) - 1) as u16;
    let low = t & mask;
    let mut rep = 0u16;
    let mut shift = 0;
    while shift < 16 {
        rep |= low << shift;
        shift += bits;
    }
    (rep == t).then_some(low)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_examples() {
        for x in [0u16, 1, 0x1234, 0xFFFF] {
            assert_eq!(poly_mul(PolyElem::ONE, PolyElem(x)), PolyElem(x));
        }
        assert_eq!(poly_mul(PolyElem(2), PolyElem(2)), PolyElem(4));
        assert_eq!(poly_mul(PolyElem(0x8000), PolyElem(2)), PolyElem(0x002D));
    }

    #[test]
    fn omega_is_primitive() {
        assert_eq!(omega_pow(65535), PolyElem::ONE);
        for d in [3u32, 5, 17, 257] {
            assert_ne!(omega_pow(65535 / d), PolyElem::ONE);
        }
    }

    #[test]
    fn inverse_all_nonzero() {
        assert_eq!(poly_inv(PolyElem::ZERO), PolyElem::ZERO);
        assert_eq!(poly_inv(PolyElem::ONE), PolyElem::ONE);
        for a in 1..=u16::MAX {
            let inv = poly_inv(PolyElem(a));
            assert_eq!(poly_mul(PolyElem(a), inv), PolyElem::ONE, "a = {a:#06x}");
        }
    }

    #[test]
    fn euclid_matches_exponentiation() {
        for a in (0..=u16::MAX).step_by(97) {
            assert_eq!(poly_inv_euclid(PolyElem(a)), poly_inv(PolyElem(a)));
        }
    }

    #[test]
    fn bridge_columns_are_theta_conjugates() {
        let b = build_basis_bridge().unwrap();
        assert_eq!(b.nb_to_pb.column(0), omega_pow(THETA_EXP).0);
        assert!(b.nb_to_pb.mul(&b.pb_to_nb).is_identity());
        for x in 0..=u16::MAX {
            assert_eq!(b.to_normal(b.to_poly(NormalElem(x))), NormalElem(x));
        }
    }

    #[test]
    fn all_ones_normal_is_one() {
        // sum of all conjugates of θ is Tr(θ); measured, it is 1
        let b = build_basis_bridge().unwrap();
        assert_eq!(b.to_poly(NormalElem(0xFFFF)), PolyElem::ONE);
    }

    #[test]
    fn normal_mul_identity_and_zero() {
        let b = build_basis_bridge().unwrap();
        let one = b.to_normal(PolyElem::ONE);
        for x in (0..=u16::MAX).step_by(655) {
            assert_eq!(b.normal_mul(one, NormalElem(x)), NormalElem(x));
            assert_eq!(b.normal_mul(NormalElem(x), NormalElem(0)), NormalElem(0));
        }
    }

    #[test]
    fn normal_squaring_is_rotation() {
        let b = build_basis_bridge().unwrap();
        for x in (0..=u16::MAX).step_by(331) {
            let x = NormalElem(x);
            assert_eq!(b.normal_mul(x, x), NormalElem(x.0.rotate_left(1)));
        }
    }

    #[test]
    fn tower_generators_satisfy_their_polynomials() {
        let one = PolyElem::ONE;
        let add = |a: PolyElem, b: PolyElem| PolyElem(a.0 ^ b.0);
        // x² + x + c = 0
        let check = |x: PolyElem, c: PolyElem| add(add(poly_sq(x), x), c) == PolyElem::ZERO;
        let alpha = omega_pow(ALPHA_EXP);
        let beta = omega_pow(BETA_EXP);
        let gamma = omega_pow(GAMMA_EXP);
        let delta = omega_pow(DELTA_EXP);
        let lambda = poly_mul(poly_sq(alpha), beta);
        let mu = add(beta, poly_mul(lambda, gamma));
        assert!(check(alpha, one));
        assert!(check(beta, alpha));
        assert!(check(gamma, lambda));
        assert!(check(delta, mu));
    }

    #[test]
    fn tower_embedding_identity_is_all_ones() {
        let e = build_tower_embedding().unwrap();
        assert_eq!(e.to_tower(PolyElem::ONE), 0xFFFF);
        assert_eq!(subfield_word(&e, PolyElem::ONE, 2), Some(0b11));
        assert_eq!(subfield_word(&e, omega_pow(ALPHA_EXP), 2), Some(0b01));
    }
}
