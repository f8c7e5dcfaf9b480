//! Algebraic and analytic invariants as randomized properties.

use proptest::prelude::*;
use tower_sbox::analysis::anf::mobius_in_place;
use tower_sbox::analysis::{
    algebraic_degree, component_function, differential_uniformity, fwht, nonlinearity,
};
use tower_sbox::convert;
use tower_sbox::reference::NormalElem;
use tower_sbox::sbox::{shared_bridge, SboxTable, TowerSbox};
use tower_sbox::tower::{inv16, inv4, inv8, mul16, mul4, mul8};

fn permutation(n: u32) -> impl Strategy<Value = Vec<u16>> {
    Just((0..1u16 << n).collect::<Vec<_>>()).prop_shuffle()
}

/// Random invertible n×n GF(2) matrix as column images.
fn invertible(n: u32) -> impl Strategy<Value = Vec<u16>> {
    prop::collection::vec(0..1u16 << n, n as usize)
        .prop_filter("singular", move |cols| rank(cols) == n)
}

fn rank(cols: &[u16]) -> u32 {
    let mut basis: Vec<u16> = Vec::new();
    for &c in cols {
        let r = basis.iter().fold(c, |v, &b| v.min(v ^ b));
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len() as u32
}

fn apply(cols: &[u16], x: u16) -> u16 {
    cols.iter()
        .enumerate()
        .filter(|(i, _)| (x >> i) & 1 == 1)
        .fold(0, |acc, (_, &c)| acc ^ c)
}

proptest! {
    #[test]
    fn gf16_field_laws(a: u16, b: u16, c: u16) {
        prop_assert_eq!(mul16(a, b), mul16(b, a));
        prop_assert_eq!(mul16(mul16(a, b), c), mul16(a, mul16(b, c)));
        prop_assert_eq!(mul16(a, b ^ c), mul16(a, b) ^ mul16(a, c));
        prop_assert_eq!(mul16(a, 0xFFFF), a);
        if a != 0 {
            prop_assert_eq!(mul16(a, inv16(a)), 0xFFFF);
            prop_assert_eq!(inv16(inv16(a)), a);
        }
    }

    #[test]
    fn subfield_laws(a in 0u8..=255, b in 0u8..=255, c in 0u8..=255) {
        prop_assert_eq!(mul8(a, b ^ c), mul8(a, b) ^ mul8(a, c));
        prop_assert_eq!(mul8(mul8(a, b), c), mul8(a, mul8(b, c)));
        let (x, y, z) = (a & 15, b & 15, c & 15);
        prop_assert_eq!(mul4(x, y ^ z), mul4(x, y) ^ mul4(x, z));
        if a != 0 {
            prop_assert_eq!(mul8(a, inv8(a)), 0xFF);
        }
        if x != 0 {
            prop_assert_eq!(mul4(x, inv4(x)), 0xF);
        }
    }

    #[test]
    fn conversion_is_a_field_isomorphism(a: u16, b: u16) {
        let c = convert::shipped();
        prop_assert_eq!(c.tn(c.nt(a)), a);
        prop_assert_eq!(c.nt(c.tn(a)), a);
        let product = shared_bridge().normal_mul(NormalElem(a), NormalElem(b)).0;
        prop_assert_eq!(c.tn(mul16(c.nt(a), c.nt(b))), product);
        prop_assert_eq!(c.nt(a ^ b), c.nt(a) ^ c.nt(b));
    }

    #[test]
    fn sbox_inverse_roundtrip(x: u16) {
        let s = TowerSbox::shipped();
        prop_assert_eq!(s.inverse(s.forward(x)), x);
        prop_assert_eq!(s.forward(s.inverse(x)), x);
    }

    #[test]
    fn affine_equivalence_preserves_nl_du_ad(
        p in permutation(4),
        a in invertible(4),
        b in invertible(4),
        c in 0u16..16,
        d in 0u16..16,
    ) {
        let s = SboxTable::new("s", 4, 4, p.clone(), "").unwrap();
        let t: Vec<u16> = (0..16u16).map(|x| apply(&a, p[(apply(&b, x) ^ d) as usize]) ^ c).collect();
        let t = SboxTable::new("t", 4, 4, t, "").unwrap();
        prop_assert_eq!(nonlinearity(&s, None), nonlinearity(&t, None));
        prop_assert_eq!(differential_uniformity(&s, None).du, differential_uniformity(&t, None).du);
        prop_assert_eq!(algebraic_degree(&s), algebraic_degree(&t));
    }

    #[test]
    fn mobius_is_an_involution(words in prop::collection::vec(any::<u16>(), 256)) {
        let mut w = words.clone();
        mobius_in_place(&mut w);
        mobius_in_place(&mut w);
        prop_assert_eq!(w, words);
    }

    #[test]
    fn parseval_holds(p in permutation(8), v in 1u16..256) {
        let s = SboxTable::new("p", 8, 8, p, "").unwrap();
        let w = fwht(component_function(&s, v)).unwrap();
        prop_assert!(w.satisfies_parseval());
        prop_assert_eq!(w.energy(), 1u64 << 16);
    }
}
