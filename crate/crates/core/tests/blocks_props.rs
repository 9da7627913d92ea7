use std::collections::BTreeSet;

use neighborly_core::blocks::{all_blocks, binomial, block_rows, orthogonality_check, BlockStream};
use neighborly_core::construction::neighborliness_for;
use proptest::prelude::*;

/// Every 0/±1 vector of length `m` with exactly `k` nonzeros, by recursion.
fn naive_vectors(m: usize, k: usize) -> BTreeSet<Vec<i64>> {
    fn go(prefix: &mut Vec<i64>, m: usize, k: usize, out: &mut BTreeSet<Vec<i64>>) {
        let used = prefix.iter().filter(|&&v| v != 0).count();
        if prefix.len() == m {
            if used == k {
                out.insert(prefix.clone());
            }
            return;
        }
        for v in [0i64, 1, -1] {
            if v != 0 && used == k {
                continue;
            }
            if v == 0 && m - prefix.len() - 1 < k - used {
                continue;
            }
            prefix.push(v);
            go(prefix, m, k, out);
            prefix.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(&mut Vec::new(), m, k, &mut out);
    out
}

fn streamed_vectors(d: usize, k: usize) -> (BTreeSet<Vec<i64>>, u64) {
    let mut set = BTreeSet::new();
    let mut count = 0;
    for block in all_blocks(d, d, k).unwrap() {
        for row in block {
            set.insert(row.joined().dense());
            count += 1;
        }
    }
    (set, count)
}

#[test]
fn d4_rows_match_brute_force() {
    let naive = naive_vectors(8, 1);
    assert_eq!(naive.len(), 16);
    let (streamed, count) = streamed_vectors(4, 1);
    assert_eq!(count, 16);
    assert_eq!(streamed, naive);
}

#[test]
fn d8_and_d16_rows_match_brute_force() {
    for (d, k) in [(8, 1), (16, 2)] {
        let (streamed, count) = streamed_vectors(d, k);
        let naive = naive_vectors(2 * d, k);
        assert_eq!(count as usize, naive.len());
        assert_eq!(streamed, naive);
    }
}

#[test]
fn gram_identities_and_counts() {
    for d in [4usize, 8, 16] {
        let k = neighborliness_for(d);
        let mut total = 0;
        for l in 0..=k {
            let report = orthogonality_check(d, k, l).unwrap();
            assert!(report.passed(), "d = {d}, l = {l}");
            // diagonal of E_lᵀE_l counted directly: rows with a nonzero in coordinate 0
            let direct = block_rows(d, k, l).unwrap().filter(|r| r.e.dense()[0] != 0).count();
            assert_eq!(report.expected_diagonal, (direct as i64).into());
            total += report.rows;
        }
        assert_eq!(total, (1u64 << k) * binomial(2 * d, k).unwrap());
    }
}

fn serialized(stream: BlockStream) -> Vec<u8> {
    stream.flat_map(|r| serde_json::to_vec(&r).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn streams_reenumerate_identically(e in 2u32..5, l_seed in 0usize..8, cut in 0u64..10_000) {
        let d = 1usize << e;
        let k = neighborliness_for(d);
        let l = l_seed % (k + 1);
        let first = block_rows(d, k, l).unwrap();
        let len = first.row_count();
        prop_assert_eq!(serialized(first.clone()), serialized(block_rows(d, k, l).unwrap()));
        let cut = cut % (len + 1);
        let mut resumed = block_rows(d, k, l).unwrap();
        resumed.seek(cut);
        let tail: Vec<_> = first.skip(cut as usize).collect();
        prop_assert_eq!(resumed.collect::<Vec<_>>(), tail);
    }
}
