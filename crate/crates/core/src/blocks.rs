//! Signed-support matrices `C_l` and the Kronecker-structured blocks
//! `E'_l = (E_l | F_{k-l})` of the vertex matrix of `E(m, k)`.
//!
//! Row order is frozen:
//! * supports of `C_l` run in ascending lexicographic order of their 0/1
//!   indicator vectors (so `0…011` comes first);
//! * within a support the `2^l` sign vectors run as a binary counter over
//!   the support positions, first position most significant, `+1` before
//!   `-1`;
//! * `E_l = C_l ⊗ 1_{n(k-l)}` and `F_{k-l} = 1_{n(l)} ⊗ C_{k-l}`, so block row
//!   `r` pairs `C_l` row `r / n(k-l)` with `C_{k-l}` row `r % n(k-l)`.
//!
//! Blocks are produced lazily; only [`build_c`] and [`orthogonality_check`]
//! materialize matrices.

use serde::Serialize;
use thiserror::Error;

use crate::exact::{ExactMatrix, ExactScalar};

/// Default row cap for materializing a block in [`orthogonality_check`].
pub const DEFAULT_MATERIALIZE_CAP: u64 = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("weight {weight} is out of range for length {length}")]
    WeightOutOfRange { weight: usize, length: usize },
    #[error("block index {l} exceeds k = {k}")]
    BlockIndex { l: usize, k: usize },
    #[error("row count overflows u64")]
    CountOverflow,
    #[error("block has {rows} rows, above the materialization cap {cap}; use sampled verification")]
    CapExceeded { rows: u64, cap: u64 },
}

pub fn binomial(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `n(l) = 2^l · binom(length, l)`, the row count of `C_l`.
pub fn signed_support_count(length: usize, weight: usize) -> Option<u64> {
    let b = binomial(length, weight)?;
    1u64.checked_shl(weight as u32)
        .filter(|_| weight < 64)?
        .checked_mul(b)
}

/// `2^k · binom(m, k)`, the number of vertices of `E(m, k)`.
pub fn vertex_count(m: usize, k: usize) -> Option<u64> {
    signed_support_count(m, k)
}

/// A 0/±1 vector given by its support (increasing) and the signs on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignedSupportRow {
    length: usize,
    support: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedSupportRow {
    /// `support` must be strictly increasing and within `length`; `signs`
    /// must be ±1 and as long as `support`.
    pub fn new(length: usize, support: Vec<usize>, signs: Vec<i8>) -> Self {
        assert_eq!(support.len(), signs.len(), "support and signs differ in length");
        assert!(support.windows(2).all(|w| w[0] < w[1]), "support not increasing");
        assert!(support.last().is_none_or(|&s| s < length), "support out of range");
        assert!(signs.iter().all(|&s| s == 1 || s == -1), "signs must be ±1");
        Self {
            length,
            support,
            signs,
        }
    }

    pub fn zero(length: usize) -> Self {
        Self::new(length, Vec::new(), Vec::new())
    }

    pub fn from_dense(values: &[i64]) -> Option<Self> {
        let mut support = Vec::new();
        let mut signs = Vec::new();
        for (i, &v) in values.iter().enumerate() {
            match v {
                0 => {}
                1 | -1 => {
                    support.push(i);
                    signs.push(v as i8);
                }
                _ => return None,
            }
        }
        Some(Self::new(values.len(), support, signs))
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `(index, sign)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, i8)> + '_ {
        self.support.iter().copied().zip(self.signs.iter().copied())
    }

    pub fn dense(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.length];
        for (i, s) in self.terms() {
            out[i] = i64::from(s);
        }
        out
    }

    pub fn dense_exact(&self) -> Vec<ExactScalar> {
        self.dense().into_iter().map(ExactScalar::from).collect()
    }

    pub fn negated(&self) -> Self {
        Self {
            length: self.length,
            support: self.support.clone(),
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    /// Concatenation `(self | rhs)`.
    pub fn concat(&self, rhs: &Self) -> Self {
        let offset = self.length;
        Self {
            length: self.length + rhs.length,
            support: self
                .support
                .iter()
                .copied()
                .chain(rhs.support.iter().map(|i| i + offset))
                .collect(),
            signs: self.signs.iter().chain(&rhs.signs).copied().collect(),
        }
    }
}

/// Lexicographic unranking of a `weight`-subset of `0..length`.
pub fn unrank_combination(length: usize, weight: usize, mut rank: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(weight);
    let mut next = 0usize;
    for remaining in (1..=weight).rev() {
        loop {
            let count = binomial(length - next - 1, remaining - 1).expect("fits after outer check");
            if rank < count {
                out.push(next);
                next += 1;
                break;
            }
            rank -= count;
            next += 1;
        }
    }
    out
}

/// Row `index` of `C_weight` for vectors of length `length`.
pub fn signed_support_row(length: usize, weight: usize, index: u64) -> SignedSupportRow {
    let patterns = 1u64 << weight;
    let support_index = index / patterns;
    let pattern = index % patterns;
    let supports = binomial(length, weight).expect("checked by caller");
    assert!(support_index < supports, "row index out of range");
    // ascending indicator order is descending lexicographic order of supports
    let support = unrank_combination(length, weight, supports - 1 - support_index);
    let signs = (0..weight)
        .map(|t| {
            if (pattern >> (weight - 1 - t)) & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .collect();
    SignedSupportRow::new(length, support, signs)
}

/// Materialize `C_l` as an `n(l) × d` matrix.
pub fn build_c(d: usize, l: usize) -> Result<ExactMatrix, BlockError> {
    if l > d {
        return Err(BlockError::WeightOutOfRange {
            weight: l,
            length: d,
        });
    }
    let rows = signed_support_count(d, l).ok_or(BlockError::CountOverflow)?;
    let dense = (0..rows)
        .map(|i| signed_support_row(d, l, i).dense_exact())
        .collect();
    Ok(ExactMatrix::from_rows(dense).expect("uniform width"))
}

/// One row `(e | f)` of block `E'_l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BlockRow {
    pub e: SignedSupportRow,
    pub f: SignedSupportRow,
}

impl BlockRow {
    pub fn joined(&self) -> SignedSupportRow {
        self.e.concat(&self.f)
    }

    pub fn l(&self) -> usize {
        self.e.weight()
    }
}

/// Lazy, restartable iterator over the rows of `E'_l = (E_l | F_{k-l})`,
/// with `E_l` of width `d` and `F_{k-l}` of width `n`.
#[derive(Clone, Debug)]
pub struct BlockStream {
    d: usize,
    n: usize,
    k: usize,
    l: usize,
    right_rows: u64,
    len: u64,
    cursor: u64,
}

pub fn block_rows(d: usize, k: usize, l: usize) -> Result<BlockStream, BlockError> {
    BlockStream::new(d, d, k, l)
}

impl BlockStream {
    pub fn new(d: usize, n: usize, k: usize, l: usize) -> Result<Self, BlockError> {
        if l > k {
            return Err(BlockError::BlockIndex { l, k });
        }
        if l > d {
            return Err(BlockError::WeightOutOfRange {
                weight: l,
                length: d,
            });
        }
        if k - l > n {
            return Err(BlockError::WeightOutOfRange {
                weight: k - l,
                length: n,
            });
        }
        let left_rows = signed_support_count(d, l).ok_or(BlockError::CountOverflow)?;
        let right_rows = signed_support_count(n, k - l).ok_or(BlockError::CountOverflow)?;
        let len = left_rows
            .checked_mul(right_rows)
            .ok_or(BlockError::CountOverflow)?;
        Ok(Self {
            d,
            n,
            k,
            l,
            right_rows,
            len,
            cursor: 0,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Total number of rows, `2^k · binom(d, l) · binom(n, k-l)`.
    pub fn row_count(&self) -> u64 {
        self.len
    }

    pub fn position(&self) -> u64 {
        self.cursor
    }

    /// Jump to row `position`; iteration resumes from there.
    pub fn seek(&mut self, position: u64) {
        self.cursor = position.min(self.len);
    }

    pub fn row_at(&self, index: u64) -> BlockRow {
        assert!(index < self.len, "block row {index} out of range");
        let e = signed_support_row(self.d, self.l, index / self.right_rows);
        let f = signed_support_row(self.n, self.k - self.l, index % self.right_rows);
        BlockRow { e, f }
    }
}

impl Iterator for BlockStream {
    type Item = BlockRow;

    fn next(&mut self) -> Option<BlockRow> {
        if self.cursor >= self.len {
            return None;
        }
        let row = self.row_at(self.cursor);
        self.cursor += 1;
        Some(row)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = usize::try_from(self.len - self.cursor).unwrap_or(usize::MAX);
        (rest, Some(rest))
    }
}

/// All `k + 1` blocks of `E(d + n, k)` in order `l = 0..=k`.
pub fn all_blocks(d: usize, n: usize, k: usize) -> Result<Vec<BlockStream>, BlockError> {
    (0..=k)
        .filter(|&l| l <= d && k - l <= n)
        .map(|l| BlockStream::new(d, n, k, l))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalityReport {
    pub d: usize,
    pub k: usize,
    pub l: usize,
    pub rows: u64,
    /// `2^k · binom(d-1, l-1) · binom(d, k-l)`.
    pub expected_diagonal: ExactScalar,
    /// `E_lᵀE_l` equals `expected_diagonal · I_d`.
    pub gram_ok: bool,
    /// `E_lᵀF_{k-l} = 0`.
    pub cross_zero: bool,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.gram_ok && self.cross_zero
    }
}

pub fn orthogonality_check(d: usize, k: usize, l: usize) -> Result<OrthogonalityReport, BlockError> {
    orthogonality_check_with_cap(d, k, l, DEFAULT_MATERIALIZE_CAP)
}

/// Materialize `E_l` and `F_{k-l}` and check both Gram identities exactly.
pub fn orthogonality_check_with_cap(
    d: usize,
    k: usize,
    l: usize,
    cap: u64,
) -> Result<OrthogonalityReport, BlockError> {
    let stream = block_rows(d, k, l)?;
    let rows = stream.row_count();
    if rows > cap {
        return Err(BlockError::CapExceeded { rows, cap });
    }
    let (mut e_rows, mut f_rows) = (Vec::new(), Vec::new());
    for row in stream {
        e_rows.push(row.e.dense_exact());
        f_rows.push(row.f.dense_exact());
    }
    let e = ExactMatrix::from_rows(e_rows).expect("uniform width");
    let f = ExactMatrix::from_rows(f_rows).expect("uniform width");
    let et = e.transpose();
    let gram = et.mat_mul(&e).expect("conforming");
    let cross = et.mat_mul(&f).expect("conforming");

    let left = if l == 0 {
        0
    } else {
        binomial(d - 1, l - 1).ok_or(BlockError::CountOverflow)?
    };
    let expected = (1u64 << k)
        .checked_mul(left)
        .and_then(|v| v.checked_mul(binomial(d, k - l)?))
        .ok_or(BlockError::CountOverflow)?;
    let expected_diagonal = ExactScalar::from(i64::try_from(expected).map_err(|_| BlockError::CountOverflow)?);
    Ok(OrthogonalityReport {
        d,
        k,
        l,
        rows,
        gram_ok: gram == ExactMatrix::identity(d).scale(&expected_diagonal),
        cross_zero: cross.is_zero(),
        expected_diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn int(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_integer_rows(rows).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(3, 4), Some(0));
        assert_eq!(binomial(64, 4), Some(635_376));
        assert_eq!(binomial(0, 0), Some(1));
        assert_eq!(binomial(200, 100), None);
    }

    #[test]
    fn c_two_one_order() {
        assert_eq!(
            build_c(2, 1).unwrap(),
            int(&[&[0, 1], &[0, -1], &[1, 0], &[-1, 0]])
        );
    }

    #[test]
    fn c_weight_zero_is_single_zero_row() {
        assert_eq!(build_c(5, 0).unwrap(), ExactMatrix::zeros(1, 5));
        assert!(build_c(2, 3).is_err());
    }

    #[test]
    fn c_four_one_gram() {
        let c = build_c(4, 1).unwrap();
        let gram = c.transpose().mat_mul(&c).unwrap();
        assert_eq!(gram, ExactMatrix::identity(4).scale(&ExactScalar::from(2)));
    }

    #[test]
    fn c_rows_ordered_by_indicator_then_signs() {
        let rows: Vec<Vec<i64>> = (0..signed_support_count(4, 2).unwrap())
            .map(|i| signed_support_row(4, 2, i).dense())
            .collect();
        assert_eq!(rows.len(), 24);
        assert_eq!(rows[0], vec![0, 0, 1, 1]);
        assert_eq!(rows[1], vec![0, 0, 1, -1]);
        assert_eq!(rows[2], vec![0, 0, -1, 1]);
        assert_eq!(rows[3], vec![0, 0, -1, -1]);
        assert_eq!(rows[4], vec![0, 1, 0, 1]);
        assert_eq!(rows[23], vec![-1, -1, 0, 0]);
        let indicators: Vec<Vec<i64>> = rows
            .iter()
            .step_by(4)
            .map(|r| r.iter().map(|v| v.abs()).collect())
            .collect();
        assert!(indicators.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn column_sums_vanish_and_columns_orthogonal() {
        for d in 2..=6 {
            for l in 1..=d.min(4) {
                let c = build_c(d, l).unwrap();
                let ones = vec![ExactScalar::one(); c.rows()];
                assert!(c.vec_mul(&ones).unwrap().iter().all(ExactScalar::is_zero));
                let diag = (1i64 << l) * binomial(d - 1, l - 1).unwrap() as i64;
                let gram = c.transpose().mat_mul(&c).unwrap();
                assert_eq!(gram, ExactMatrix::identity(d).scale(&ExactScalar::from(diag)));
            }
        }
    }

    #[test]
    fn block_counts_d16_k2() {
        let counts: Vec<u64> = (0..=2).map(|l| block_rows(16, 2, l).unwrap().row_count()).collect();
        assert_eq!(counts, vec![480, 1024, 480]);
        assert_eq!(counts.iter().sum::<u64>(), vertex_count(32, 2).unwrap());
        assert_eq!(vertex_count(32, 2), Some(1984));
    }

    #[test]
    fn vandermonde_cross_check() {
        for d in [4usize, 8, 16, 32, 64] {
            for k in 1..=4 {
                let total: u64 = (0..=k).map(|l| block_rows(d, k, l).unwrap().row_count()).sum();
                assert_eq!(Some(total), vertex_count(2 * d, k), "d = {d}, k = {k}");
            }
        }
        // unequal widths, as used for user-supplied A
        let total: u64 = all_blocks(3, 5, 2).unwrap().iter().map(BlockStream::row_count).sum();
        assert_eq!(Some(total), vertex_count(8, 2));
    }

    #[test]
    fn d4_k1_l1_block() {
        let rows: Vec<BlockRow> = block_rows(4, 1, 1).unwrap().collect();
        assert_eq!(rows.len(), 8);
        for r in &rows {
            assert_eq!(r.e.weight(), 1);
            assert_eq!(r.f, SignedSupportRow::zero(4));
        }
    }

    #[test]
    fn first_row_of_d4_k2_l1() {
        let first = block_rows(4, 2, 1).unwrap().next().unwrap();
        assert_eq!(first.e.dense(), vec![0, 0, 0, 1]);
        assert_eq!(first.f.dense(), vec![0, 0, 0, 1]);
    }

    /// Every 0/±1 vector of length `m` and weight `k`, by brute force over
    /// all `3^m` vectors.
    fn brute_force(m: usize, k: usize) -> HashSet<Vec<i64>> {
        let mut out = HashSet::new();
        let total = 3usize.pow(m as u32);
        for mut code in 0..total {
            let mut v = Vec::with_capacity(m);
            for _ in 0..m {
                v.push([0i64, 1, -1][code % 3]);
                code /= 3;
            }
            if v.iter().filter(|&&x| x != 0).count() == k {
                out.insert(v);
            }
        }
        out
    }

    #[test]
    fn streams_match_brute_force() {
        for (d, k) in [(2usize, 1usize), (2, 2), (3, 2), (4, 1), (4, 2), (3, 3)] {
            let mut seen = HashSet::new();
            let mut count = 0;
            for block in all_blocks(d, d, k).unwrap() {
                for row in block {
                    count += 1;
                    seen.insert(row.joined().dense());
                }
            }
            assert_eq!(count, seen.len(), "duplicate rows for d = {d}, k = {k}");
            assert_eq!(seen, brute_force(2 * d, k), "d = {d}, k = {k}");
        }
    }

    #[test]
    fn stream_restart_and_seek() {
        let stream = block_rows(8, 2, 1).unwrap();
        let first: Vec<BlockRow> = stream.clone().collect();
        let second: Vec<BlockRow> = stream.clone().collect();
        assert_eq!(first, second);
        let mut resumed = stream.clone();
        resumed.seek(37);
        assert_eq!(resumed.next().unwrap(), first[37]);
        assert_eq!(resumed.size_hint().0, first.len() - 38);
    }

    #[test]
    fn orthogonality_small() {
        let r = orthogonality_check(4, 2, 1).unwrap();
        assert_eq!(r.expected_diagonal, ExactScalar::from(16));
        assert!(r.passed());
        let r = orthogonality_check(4, 1, 1).unwrap();
        assert_eq!(r.expected_diagonal, ExactScalar::from(2));
        assert!(r.passed());
        let r = orthogonality_check(4, 2, 0).unwrap();
        assert_eq!(r.expected_diagonal, ExactScalar::zero());
        assert!(r.passed());
    }

    #[test]
    fn orthogonality_cap() {
        assert!(matches!(
            orthogonality_check_with_cap(16, 2, 1, 100),
            Err(BlockError::CapExceeded { rows: 1024, cap: 100 })
        ));
    }
}
