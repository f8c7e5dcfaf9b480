//! XOR networks from parity specifications, with greedy pairwise sharing.
//!
//! Each round picks the input pair that occurs together in the most
//! outputs, preferring the shallower result and then the smaller pair, and
//! replaces it by a new signal. When no pair repeats, each output is closed
//! by repeatedly joining its two shallowest signals.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use super::{Builder, Netlist, NetlistError, Wire};

/// Output bit sets from per-output input masks.
pub fn masks_to_terms(masks: &[u64]) -> Vec<Vec<usize>> {
    masks
        .iter()
        .map(|&m| (0..64).filter(|i| (m >> i) & 1 == 1).collect())
        .collect()
}

fn check(inputs: usize, outputs: &[(String, Vec<usize>)]) -> Result<Vec<Vec<usize>>, NetlistError> {
    outputs
        .iter()
        .enumerate()
        .map(|(o, (_, terms))| {
            if terms.is_empty() {
                return Err(NetlistError::EmptyOutput(o));
            }
            if let Some(&index) = terms.iter().find(|&&i| i >= inputs) {
                return Err(NetlistError::TermRange {
                    output: o,
                    index,
                    inputs,
                });
            }
            let mut t = terms.clone();
            t.sort_unstable();
            t.dedup();
            Ok(t)
        })
        .collect()
}

/// Greedy common-subexpression XOR network.
pub fn cse_xor(
    label: &str,
    inputs: &[String],
    outputs: &[(String, Vec<usize>)],
) -> Result<Netlist, NetlistError> {
    let sets = check(inputs.len(), outputs)?;
    let mut b = Builder::new(label);
    let wires: Vec<Wire> = inputs.iter().map(|n| b.input(n.clone())).collect();
    let outs = xor_network(&mut b, &wires, sets);
    for ((name, _), w) in outputs.iter().zip(outs) {
        b.output(name.clone(), w);
    }
    Ok(b.finish())
}

/// Appends a shared XOR network to `b`; `sets[j]` lists the positions in
/// `inputs` whose parity is output j. Sets must be non-empty and sorted.
pub(crate) fn xor_network(
    b: &mut Builder,
    inputs: &[Wire],
    mut sets: Vec<Vec<usize>>,
) -> Vec<Wire> {
    let mut wire: Vec<Wire> = inputs.to_vec();
    let mut depth = vec![0u32; inputs.len()];

    loop {
        let mut counts: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for s in &sets {
            for (i, &p) in s.iter().enumerate() {
                for &q in &s[i + 1..] {
                    *counts.entry((p, q)).or_default() += 1;
                }
            }
        }
        let best = counts
            .iter()
            .filter(|(_, &c)| c >= 2)
            .max_by_key(|(&(p, q), &c)| (c, Reverse(depth[p].max(depth[q])), Reverse((p, q))));
        let Some((&(p, q), _)) = best else { break };
        let id = wire.len();
        wire.push(b.xor(wire[p], wire[q]));
        depth.push(depth[p].max(depth[q]) + 1);
        for s in sets.iter_mut() {
            if s.binary_search(&p).is_ok() && s.binary_search(&q).is_ok() {
                s.retain(|&x| x != p && x != q);
                s.push(id); // ids only grow, so the set stays sorted
            }
        }
    }

    // Outputs with identical remaining sets share one tree.
    let mut done: BTreeMap<Vec<usize>, Wire> = BTreeMap::new();
    let mut out = Vec::with_capacity(sets.len());
    for s in sets {
        if let Some(&w) = done.get(&s) {
            out.push(w);
            continue;
        }
        let mut pool: Vec<(u32, Wire)> = s.iter().map(|&x| (depth[x], wire[x])).collect();
        while pool.len() > 1 {
            pool.sort_unstable();
            let (dp, p) = pool.remove(0);
            let (dq, q) = pool.remove(0);
            pool.push((dp.max(dq) + 1, b.xor(p, q)));
        }
        done.insert(s, pool[0].1);
        out.push(pool[0].1);
    }
    out
}

/// Unshared XOR chains, Σ(|set| − 1) gates; the baseline for [`cse_xor`].
pub fn naive_xor(
    label: &str,
    inputs: &[String],
    outputs: &[(String, Vec<usize>)],
) -> Result<Netlist, NetlistError> {
    let sets = check(inputs.len(), outputs)?;
    let mut b = Builder::new(label);
    let wire: Vec<Wire> = inputs.iter().map(|n| b.input(n.clone())).collect();
    for ((name, _), s) in outputs.iter().zip(sets) {
        let mut acc = wire[s[0]];
        for &t in &s[1..] {
            acc = b.xor(acc, wire[t]);
        }
        b.output(name.clone(), acc);
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn spec(masks: &[u64]) -> Vec<(String, Vec<usize>)> {
        names("y", masks.len())
            .into_iter()
            .zip(masks_to_terms(masks))
            .collect()
    }

    fn parity_table(masks: &[u64], n: usize) -> Vec<u64> {
        (0..1u64 << n)
            .map(|x| {
                masks.iter().enumerate().fold(0, |acc, (j, m)| {
                    acc | (((x & m).count_ones() as u64) & 1) << j
                })
            })
            .collect()
    }

    #[test]
    fn single_pair() {
        let n = cse_xor("p", &names("a", 2), &spec(&[0b11])).unwrap();
        assert_eq!(n.census().xor, 1);
    }

    #[test]
    fn empty_and_out_of_range() {
        let e = cse_xor("e", &names("a", 2), &[("y".into(), vec![])]);
        assert_eq!(e, Err(NetlistError::EmptyOutput(0)));
        let e = cse_xor("e", &names("a", 2), &[("y".into(), vec![2])]);
        assert!(matches!(e, Err(NetlistError::TermRange { .. })));
    }

    #[test]
    fn shares_common_pairs() {
        let masks = [0b0111, 0b1011, 0b1101, 0b1110];
        let c = cse_xor("s", &names("a", 4), &spec(&masks)).unwrap();
        let naive = naive_xor("s", &names("a", 4), &spec(&masks)).unwrap();
        assert_eq!(naive.census().xor, 8);
        assert!(c.census().xor <= 6);
        assert_eq!(c.truth_table().unwrap(), parity_table(&masks, 4));
    }

    #[test]
    fn identical_outputs_share() {
        let masks = [0b111, 0b111, 0b1];
        let c = cse_xor("d", &names("a", 3), &spec(&masks)).unwrap();
        assert_eq!(c.census().xor, 2);
        assert_eq!(c.truth_table().unwrap(), parity_table(&masks, 3));
    }

    #[test]
    fn random_specs_match_parity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(2..=10);
            let k = rng.gen_range(1..=12);
            let masks: Vec<u64> = (0..k).map(|_| rng.gen_range(1..1u64 << n)).collect();
            let c = cse_xor("r", &names("a", n), &spec(&masks)).unwrap();
            let naive = naive_xor("r", &names("a", n), &spec(&masks)).unwrap();
            assert!(c.census().xor <= naive.census().xor);
            assert_eq!(c.truth_table().unwrap(), parity_table(&masks, n));
        }
    }
}
