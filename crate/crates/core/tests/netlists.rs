//! Catalog blocks against their field functions, plus structural invariants.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tower_sbox::netlist::blocks::assess;
use tower_sbox::netlist::{build_block, cse_xor, BlockId, Netlist};
use tower_sbox::sbox::AffinePair;
use tower_sbox::tower::inv16;

#[test]
fn every_block_matches_its_function_exhaustively() {
    for id in BlockId::ALL {
        let n = build_block(id);
        let (w_in, w_out) = id.widths();
        assert_eq!(
            (n.num_inputs() as u32, n.num_outputs() as u32),
            (w_in, w_out),
            "{id}"
        );
        let tt = n.truth_table().unwrap();
        assert_eq!(tt.len(), 1 << w_in);
        for (x, &y) in tt.iter().enumerate() {
            assert_eq!(y as u32, id.reference(x as u32), "{id} at {x:#x}");
        }
    }
}

#[test]
fn i16_inverts_every_word() {
    let tt = build_block(BlockId::I16).truth_table().unwrap();
    assert_eq!(tt[0], 0);
    assert_eq!(tt[0xFFFF], 0xFFFF);
    assert!((0..=u16::MAX).all(|x| tt[x as usize] as u16 == inv16(x)));
}

#[test]
fn affine_blocks_match_shipped_matrices() {
    let a = AffinePair::shipped();
    let at = build_block(BlockId::At).truth_table().unwrap();
    let at_inv = build_block(BlockId::AtInv).truth_table().unwrap();
    for x in 0..=u16::MAX {
        assert_eq!(at[x as usize] as u16, a.affine(x));
        assert_eq!(at_inv[x as usize] as u16, a.affine_inv(x));
    }
}

#[test]
fn i4_census_and_path_are_exact() {
    let n = build_block(BlockId::I4);
    let c = n.census();
    assert_eq!((c.xor_pooled(), c.nand_nor(), c.not), (2, 22, 4));
    assert_eq!(n.critical_path().to_string(), "2T_NA+3T_NO+T_N");
    let a = assess(BlockId::I4, &n);
    assert_eq!(a.within_policy, Some(true));
}

#[test]
fn linear_blocks_use_only_xor() {
    for id in [
        BlockId::At,
        BlockId::AtInv,
        BlockId::Mnt,
        BlockId::Mtn,
        BlockId::S4,
        BlockId::S8,
    ] {
        let c = build_block(id).census();
        assert_eq!(c.xor_pooled(), c.total(), "{id}");
    }
}

#[test]
fn soft_targets_for_linear_layers() {
    for (id, bound) in [(BlockId::At, 28), (BlockId::Mnt, 64), (BlockId::Mtn, 66)] {
        let n = build_block(id);
        assert!(n.census().xor <= bound, "{id}: {}", n.census().xor);
        assert_eq!(assess(id, &n).within_policy, Some(true));
    }
}

#[test]
fn dump_lists_every_gate_and_output() {
    let n = build_block(BlockId::M2);
    let d = n.dump();
    assert!(d.starts_with("# M2\n"));
    assert_eq!(
        d.lines().filter(|l| l.starts_with('g')).count(),
        n.gates().len()
    );
    assert_eq!(d.lines().filter(|l| l.starts_with('y')).count(), 2);
}

fn random_topological_order(n: &Netlist, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let base = n.num_inputs();
    let gates = n.gates();
    let mut placed = vec![false; gates.len()];
    let mut order = Vec::with_capacity(gates.len());
    while order.len() < gates.len() {
        let ready: Vec<usize> = (0..gates.len())
            .filter(|&g| {
                !placed[g]
                    && gates[g]
                        .operands()
                        .iter()
                        .all(|&w| (w as usize) < base || placed[w as usize - base])
            })
            .collect();
        let g = ready[rng.gen_range(0..ready.len())];
        placed[g] = true;
        order.push(g);
    }
    order
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn census_and_function_survive_reordering(block in 0usize..BlockId::ALL.len(), seed: u64) {
        let id = BlockId::ALL[block];
        prop_assume!(id.widths().0 <= 12);
        let n = build_block(id);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = n.reordered(&random_topological_order(&n, &mut rng)).unwrap();
        prop_assert_eq!(r.census(), n.census());
        prop_assert_eq!(r.critical_path(), n.critical_path());
        prop_assert_eq!(r.truth_table().unwrap(), n.truth_table().unwrap());
    }

    #[test]
    fn cse_matches_parity(masks in prop::collection::vec(1u64..256, 1..10)) {
        let inputs: Vec<String> = (0..8).map(|i| format!("a{i}")).collect();
        let outputs: Vec<(String, Vec<usize>)> = masks
            .iter()
            .enumerate()
            .map(|(j, &m)| (format!("y{j}"), (0..8).filter(|i| (m >> i) & 1 == 1).collect()))
            .collect();
        let n = cse_xor("p", &inputs, &outputs).unwrap();
        let tt = n.truth_table().unwrap();
        for x in 0..256u64 {
            for (j, &m) in masks.iter().enumerate() {
                prop_assert_eq!((tt[x as usize] >> j) & 1, ((x & m).count_ones() & 1) as u64);
            }
        }
    }
}
