//! Tower-field arithmetic over F₍₍₍₂²₎²₎²₎² as explicit bit expressions.
//!
//! Word layout at every level: the low half holds the coefficient of the
//! first basis element, the high half that of its conjugate. The identity is
//! the all-ones word at each level.
//!
//! | level  | basis        | defining polynomial       |
//! |--------|--------------|---------------------------|
//! | 2 bit  | {α, α²}      | x² + x + 1                |
//! | 4 bit  | {β, β⁴}      | x² + x + α                |
//! | 8 bit  | {γ, γ¹⁶}     | x² + x + λ,  λ = α²β      |
//! | 16 bit | {δ, δ²⁵⁶}    | x² + x + μ,  μ = β + λγ   |
//!
//! The optimized forms (merged blocks, Karnaugh inverter) are written out
//! gate by gate so the netlist builders can mirror them.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use thiserror::Error;

#[inline(always)]
fn bit<T: Into<u32>>(a: T, i: u32) -> u32 {
    (a.into() >> i) & 1
}

/// Packs bits given least-significant first.
#[inline(always)]
fn pack(bits: &[u32]) -> u8 {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | ((b as u8 & 1) << i))
}

// ---------------------------------------------------------------- level 2

pub fn mul2(a: u8, b: u8) -> u8 {
    let (a0, a1) = (bit(a, 0), bit(a, 1));
    let (b0, b1) = (bit(b, 0), bit(b, 1));
    let c0 = (a0 & b1) ^ (a1 & (b1 ^ b0));
    let c1 = (a1 & b0) ^ (a0 & (b1 ^ b0));
    pack(&[c0, c1])
}

/// Squaring, which at this level is also inversion.
pub fn sq2(a: u8) -> u8 {
    ((a & 1) << 1) | ((a >> 1) & 1)
}

pub fn inv2(a: u8) -> u8 {
    sq2(a)
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown constant {0:?}")]
pub struct UnknownConstant(pub String);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scale2Const {
    Alpha,
    AlphaSq,
}

impl FromStr for Scale2Const {
    type Err = UnknownConstant;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alpha" | "α" => Ok(Self::Alpha),
            "alpha2" | "alpha^2" | "α²" => Ok(Self::AlphaSq),
            _ => Err(UnknownConstant(s.to_string())),
        }
    }
}

pub fn scale2(c: Scale2Const, a: u8) -> u8 {
    let (a0, a1) = (bit(a, 0), bit(a, 1));
    match c {
        Scale2Const::Alpha => pack(&[a1, a0 ^ a1]),
        Scale2Const::AlphaSq => pack(&[a0 ^ a1, a0]),
    }
}

// ---------------------------------------------------------------- level 4

#[inline]
fn split4(a: u8) -> (u8, u8) {
    (a & 3, (a >> 2) & 3)
}

/// The shared cross term (a_l⊕a_h)(b_l⊕b_h)·α with the α scaling folded in.
fn mul4_cross(a: u8, b: u8) -> u8 {
    let (al, ah) = split4(a);
    let (bl, bh) = split4(b);
    let (x, y) = (al ^ ah, bl ^ bh);
    let (x0, x1, y0, y1) = (bit(x, 0), bit(x, 1), bit(y, 0), bit(y, 1));
    let p1 = (x1 & y1) ^ (x0 & y0);
    let p0 = (x1 & y0) ^ (x0 & (y1 ^ y0));
    pack(&[p0, p1])
}

pub fn mul4(a: u8, b: u8) -> u8 {
    let p = mul4_cross(a, b);
    let (al, ah) = split4(a);
    let (bl, bh) = split4(b);
    (p ^ mul2(al, bl)) | ((p ^ mul2(ah, bh)) << 2)
}

pub fn sq4(a: u8) -> u8 {
    let [a0, a1, a2, a3] = [0, 1, 2, 3].map(|i| bit(a, i));
    pack(&[a0 ^ a2 ^ a1, a2 ^ a1 ^ a3, a0 ^ a2 ^ a3, a0 ^ a1 ^ a3])
}

/// Karnaugh-map inverter; maps 0 to 0.
pub fn inv4(a: u8) -> u8 {
    let [a0, a1, a2, a3] = [0, 1, 2, 3].map(|i| bit(a, i));
    let not = |x: u32| x ^ 1;
    let xnor = |x: u32, y: u32| not(x ^ y);
    let i0 = (a3 & (not(a2) | a0)) | (a2 & xnor(a1, a0) & (not(a3) | (a0 & a1)));
    let i1 = (a3 & (not(a1) | a2)) | (a2 & (a1 ^ a0));
    let i2 = (a1 & (a2 | not(a0))) | (a0 & xnor(a3, a2) & ((a2 & a3) | not(a1)));
    let i3 = (a1 & (not(a3) | a0)) | (a0 & (a3 ^ a2));
    pack(&[i0, i1, i2, i3])
}

/// Inversion by the subfield route (A·A⁴)⁻¹·A⁴, for cross-checking [`inv4`].
pub fn inv4_ita(a: u8) -> u8 {
    let (al, ah) = split4(a);
    // A⁴ swaps the halves; the norm A·A⁴ lies in the 2-bit subfield
    let norm = mul4(a, al << 2 | ah) & 3;
    let e = inv2(norm);
    let e4 = e | (e << 2);
    mul4(e4, al << 2 | ah)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scale4Const {
    Lambda,
    LambdaSq,
    Beta,
    AlphaBeta,
}

impl Scale4Const {
    pub const ALL: [Self; 4] = [Self::Lambda, Self::LambdaSq, Self::Beta, Self::AlphaBeta];

    /// The constant's own 4-bit tower word.
    pub fn word(self) -> u8 {
        scale4(self, 0b1111)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Lambda => "lambda",
            Self::LambdaSq => "lambda2",
            Self::Beta => "beta",
            Self::AlphaBeta => "alphabeta",
        }
    }
}

impl fmt::Display for Scale4Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scale4Const {
    type Err = UnknownConstant;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lambda" | "λ" => Ok(Self::Lambda),
            "lambda2" | "lambda^2" | "λ²" => Ok(Self::LambdaSq),
            "beta" | "β" => Ok(Self::Beta),
            "alphabeta" | "alpha*beta" | "αβ" => Ok(Self::AlphaBeta),
            _ => Err(UnknownConstant(s.to_string())),
        }
    }
}

/// Multiplication by a fixed constant, as the optimized XOR forms K₀..K₃.
pub fn scale4(c: Scale4Const, a: u8) -> u8 {
    let [a0, a1, a2, a3] = [0, 1, 2, 3].map(|i| bit(a, i));
    match c {
        Scale4Const::Lambda => pack(&[a1 ^ a2, a0 ^ a1 ^ a3, a0 ^ a2, a1 ^ a3]),
        Scale4Const::LambdaSq => pack(&[a1 ^ a2 ^ a3, a0 ^ a1 ^ a2, a0 ^ a1, a0]),
        Scale4Const::Beta => pack(&[a0 ^ a1 ^ a3, a0 ^ a2 ^ a3, a1 ^ a3, a0 ^ a1 ^ a2 ^ a3]),
        Scale4Const::AlphaBeta => pack(&[a0 ^ a2 ^ a3, a1 ^ a2, a0 ^ a1 ^ a2 ^ a3, a0 ^ a2]),
    }
}

// ---------------------------------------------------------------- level 8

#[inline]
fn split8(a: u8) -> (u8, u8) {
    (a & 0xF, a >> 4)
}

pub fn mul8(a: u8, b: u8) -> u8 {
    let (al, ah) = split8(a);
    let (bl, bh) = split8(b);
    let p = scale4(Scale4Const::Lambda, mul4(al ^ ah, bl ^ bh));
    (p ^ mul4(al, bl)) | ((p ^ mul4(ah, bh)) << 4)
}

pub fn sq8(a: u8) -> u8 {
    let [a0, a1, a2, a3, a4, a5, a6, a7] = [0, 1, 2, 3, 4, 5, 6, 7].map(|i| bit(a, i));
    pack(&[
        a2 ^ a4 ^ a5,
        a2 ^ a3 ^ a5,
        a0 ^ a1 ^ a2 ^ a5 ^ a7,
        a1 ^ a2 ^ a3 ^ a4 ^ a6,
        a0 ^ a1 ^ a6,
        a1 ^ a6 ^ a7,
        a1 ^ a3 ^ a4 ^ a5 ^ a6,
        a0 ^ a2 ^ a5 ^ a6 ^ a7,
    ])
}

/// λ·f² in one block.
pub fn merged_sq4_mul_lambda(f: u8) -> u8 {
    let [f0, f1, f2, f3] = [0, 1, 2, 3].map(|i| bit(f, i));
    pack(&[f1 ^ f0, f1, f1 ^ f3, f2 ^ f0])
}

pub fn inv8(a: u8) -> u8 {
    let (al, ah) = split8(a);
    let d = merged_sq4_mul_lambda(al ^ ah) ^ mul4(al, ah);
    let e = inv4(d);
    mul4(e, ah) | (mul4(e, al) << 4)
}

/// μ's 8-bit tower word.
pub const MU: u8 = 0x31;

pub fn scale8_mu(a: u8) -> u8 {
    let [a0, a1, a2, a3, a4, a5, a6, a7] = [0, 1, 2, 3, 4, 5, 6, 7].map(|i| bit(a, i));
    pack(&[
        a0 ^ a1 ^ a5 ^ a6 ^ a7,
        a0 ^ a4 ^ a5 ^ a6,
        a2 ^ a3 ^ a4 ^ a5,
        a2 ^ a4,
        a1 ^ a2 ^ a3 ^ a4 ^ a6,
        a0 ^ a1 ^ a2 ^ a5 ^ a7,
        a0 ^ a1 ^ a4 ^ a7,
        a0 ^ a5 ^ a6 ^ a7,
    ])
}

/// μ·a written as [a_l(αβ) + (a_l+a_h)λ²]γ + [a_hβ + (a_l+a_h)λ²]γ¹⁶.
pub fn scale8_mu_compositional(a: u8) -> u8 {
    let (al, ah) = split8(a);
    let t = scale4(Scale4Const::LambdaSq, al ^ ah);
    (scale4(Scale4Const::AlphaBeta, al) ^ t) | ((scale4(Scale4Const::Beta, ah) ^ t) << 4)
}

/// μ·a² in one block.
pub fn merged_sq8_mul_mu(a: u8) -> u8 {
    let [a0, a1, a2, a3, a4, a5, a6, a7] = [0, 1, 2, 3, 4, 5, 6, 7].map(|i| bit(a, i));
    pack(&[
        a0 ^ a2 ^ a6,
        a0 ^ a1 ^ a2 ^ a3 ^ a6 ^ a7,
        a3 ^ a4 ^ a5 ^ a6,
        a2 ^ a5 ^ a6 ^ a7,
        a2 ^ a3 ^ a5 ^ a6 ^ a7,
        a3 ^ a4 ^ a7,
        a1 ^ a2 ^ a3 ^ a4 ^ a5 ^ a7,
        a0 ^ a3 ^ a5 ^ a6,
    ])
}

// ---------------------------------------------------------------- level 16

#[inline]
fn split16(a: u16) -> (u8, u8) {
    (a as u8, (a >> 8) as u8)
}

#[inline]
fn join16(lo: u8, hi: u8) -> u16 {
    lo as u16 | (hi as u16) << 8
}

pub fn mul16(a: u16, b: u16) -> u16 {
    let (al, ah) = split16(a);
    let (bl, bh) = split16(b);
    let p = mul8(MU, mul8(al ^ ah, bl ^ bh));
    join16(p ^ mul8(al, bl), p ^ mul8(ah, bh))
}

pub fn inv16(a: u16) -> u16 {
    let (al, ah) = split16(a);
    let d = merged_sq8_mul_mu(al ^ ah) ^ mul8(al, ah);
    let e = inv8(d);
    join16(mul8(e, ah), mul8(e, al))
}

// ---------------------------------------------------------------- newtypes

macro_rules! field_type {
    ($name:ident, $repr:ty, $mask:expr, $mul:path, $inv:path, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name($repr);

        impl $name {
            pub const ZERO: Self = Self(0);
            pub const ONE: Self = Self($mask);

            /// Keeps only the bits belonging to this level.
            pub const fn new(bits: $repr) -> Self {
                Self(bits & $mask)
            }

            pub const fn bits(self) -> $repr {
                self.0
            }

            pub fn inv(self) -> Self {
                Self($inv(self.0))
            }

            pub fn is_zero(self) -> bool {
                self.0 == 0
            }
        }

        impl Add for $name {
            type Output = Self;
            // characteristic 2: addition is XOR
            #[allow(clippy::suspicious_arithmetic_impl)]
            fn add(self, rhs: Self) -> Self {
                Self(self.0 ^ rhs.0)
            }
        }

        impl Mul for $name {
            type Output = Self;
            fn mul(self, rhs: Self) -> Self {
                Self($mul(self.0, rhs.0))
            }
        }
    };
}

field_type!(Gf4, u8, 0x3, mul2, inv2, "Element of F₂² over {α, α²}.");
field_type!(Gf16, u8, 0xF, mul4, inv4, "Element of F₍₂²₎² over {β, β⁴}.");
field_type!(
    Gf256,
    u8,
    0xFF,
    mul8,
    inv8,
    "Element of F₍₍₂²₎²₎² over {γ, γ¹⁶}."
);
field_type!(
    Gf64k,
    u16,
    0xFFFF,
    mul16,
    inv16,
    "Element of the full 16-bit tower over {δ, δ²⁵⁶}."
);

impl Gf4 {
    pub fn square(self) -> Self {
        Self(sq2(self.0))
    }
}

impl Gf16 {
    pub fn square(self) -> Self {
        Self(sq4(self.0))
    }
}

impl Gf256 {
    pub fn square(self) -> Self {
        Self(sq8(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level2_examples() {
        for x in 0..4 {
            assert_eq!(mul2(0b11, x), x);
        }
        assert_eq!(mul2(0b01, 0b10), 0b11);
        assert_eq!(mul2(0b01, 0b01), 0b10);
        assert_eq!(sq2(0b01), 0b10);
        assert_eq!(sq2(0b11), 0b11);
        assert_eq!(scale2(Scale2Const::Alpha, 0b11), 0b01);
        assert_eq!(scale2(Scale2Const::AlphaSq, 0b11), 0b10);
        assert_eq!(scale2(Scale2Const::Alpha, 0), 0);
        for x in 0..4 {
            assert_eq!(scale2(Scale2Const::Alpha, x), mul2(0b01, x));
            assert_eq!(scale2(Scale2Const::AlphaSq, x), mul2(0b10, x));
        }
    }

    #[test]
    fn level4_consistency() {
        for a in 0..16u8 {
            assert_eq!(mul4(0xF, a), a);
            assert_eq!(mul4(a, 0), 0);
            assert_eq!(sq4(a), mul4(a, a));
            assert_eq!(inv4(a), inv4_ita(a));
            assert_eq!(inv4(inv4(a)), a);
            if a != 0 {
                assert_eq!(mul4(a, inv4(a)), 0xF);
            }
            assert_eq!(
                merged_sq4_mul_lambda(a),
                scale4(Scale4Const::Lambda, sq4(a))
            );
            for c in Scale4Const::ALL {
                assert_eq!(scale4(c, a), mul4(c.word(), a), "{c}");
            }
            let l = scale4(Scale4Const::Lambda, a);
            assert_eq!(
                scale4(Scale4Const::LambdaSq, a),
                scale4(Scale4Const::Lambda, l)
            );
        }
    }

    #[test]
    fn constant_words() {
        assert_eq!(Scale4Const::Lambda.word(), 0b0010);
        assert_eq!(Scale4Const::Beta.word(), 0b0011);
        assert_eq!(Scale4Const::AlphaBeta.word(), 0b0001);
        assert_eq!(Scale4Const::LambdaSq.word(), 0b1011);
        assert_eq!(merged_sq4_mul_lambda(0b0010), 0b0111);
    }

    #[test]
    fn level8_consistency() {
        for a in 0..=255u8 {
            assert_eq!(mul8(0xFF, a), a);
            assert_eq!(sq8(a), mul8(a, a));
            assert_eq!(scale8_mu(a), scale8_mu_compositional(a));
            assert_eq!(scale8_mu(a), mul8(MU, a));
            assert_eq!(merged_sq8_mul_mu(a), scale8_mu(sq8(a)));
            assert_eq!(inv8(inv8(a)), a);
            if a != 0 {
                assert_eq!(mul8(a, inv8(a)), 0xFF);
            }
        }
        assert_eq!(inv8(0), 0);
        assert_eq!(scale8_mu(0b100) >> 3 & 1, 1);
        assert_eq!(merged_sq8_mul_mu(1) & 1, 1);
    }

    #[test]
    fn level16_inverse_exhaustive() {
        assert_eq!(inv16(0), 0);
        assert_eq!(inv16(0xFFFF), 0xFFFF);
        for a in 1..=u16::MAX {
            assert_eq!(mul16(a, inv16(a)), 0xFFFF, "a = {a:#06x}");
        }
    }

    #[test]
    fn newtype_ops() {
        let a = Gf256::new(0x57);
        assert_eq!(a * Gf256::ONE, a);
        assert_eq!(a * a.inv(), Gf256::ONE);
        assert_eq!(a.square(), a * a);
        assert_eq!(a + a, Gf256::ZERO);
        assert_eq!(Gf16::new(0xFF), Gf16::ONE);
        assert!("delta".parse::<Scale4Const>().is_err());
    }
}
