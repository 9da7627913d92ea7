//! Hadamard matrices: Sylvester generation, text import, validation and row
//! profiles.
//!
//! Text format: the first non-comment line holds the order `d`, followed by
//! `d` rows of `d` whitespace-separated entries from {1, -1}. Lines starting
//! with `#` are comments.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{ExactMatrix, ExactScalar};

/// Largest order `sylvester` produces unless a caller raises the limit.
pub const DEFAULT_MAX_ORDER: usize = 4096;

#[derive(Debug, Error)]
pub enum HadamardError {
    #[error("malformed Hadamard candidate: {0}")]
    Malformed(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("not a Hadamard matrix: columns {0} and {1} violate H^T H = dI")]
    NotHadamard(usize, usize),
    #[error("no Hadamard source for order {0}")]
    NoSource(usize),
    #[error("order {order} exceeds the configured maximum {max}")]
    TooLarge { order: usize, max: usize },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A validated ±1 matrix with `HᵀH = d·I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HadamardMatrix {
    order: usize,
    signs: Vec<i8>,
}

/// Per-row counts for the regularity diagnostic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowProfile {
    pub plus_counts: Vec<usize>,
    pub row_sums: Vec<i64>,
    pub column_sums: Vec<i64>,
    /// All row sums equal and all column sums equal.
    pub regular: bool,
}

/// First column pair `(i, j)`, `i <= j`, whose inner product differs from
/// `d·[i = j]`.
fn first_offending_pair(order: usize, signs: &[i8]) -> Option<(usize, usize)> {
    let at = |r: usize, c: usize| i64::from(signs[r * order + c]);
    for i in 0..order {
        for j in i..order {
            let dot: i64 = (0..order).map(|r| at(r, i) * at(r, j)).sum();
            let expected = if i == j { order as i64 } else { 0 };
            if dot != expected {
                return Some((i, j));
            }
        }
    }
    None
}

/// Check that `candidate` is square with entries in {1, -1}, returning its
/// sign pattern.
fn sign_pattern(candidate: &ExactMatrix) -> Result<Vec<i8>, HadamardError> {
    let (rows, cols) = candidate.shape();
    if rows != cols {
        return Err(HadamardError::Malformed(format!("{rows}x{cols} is not square")));
    }
    if rows == 0 {
        return Err(HadamardError::Malformed("empty matrix".into()));
    }
    let one = ExactScalar::one();
    let minus_one = -&one;
    candidate
        .entries()
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            if *v == one {
                Ok(1)
            } else if *v == minus_one {
                Ok(-1)
            } else {
                Err(HadamardError::Malformed(format!(
                    "entry ({}, {}) is {v}, not ±1",
                    idx / cols,
                    idx % cols
                )))
            }
        })
        .collect()
}

/// True iff `HᵀH = d·I` exactly; malformed input is an error rather than
/// `false`.
pub fn validate(candidate: &ExactMatrix) -> Result<bool, HadamardError> {
    let signs = sign_pattern(candidate)?;
    Ok(first_offending_pair(candidate.rows(), &signs).is_none())
}

pub fn sylvester(exponent: u32) -> Result<HadamardMatrix, HadamardError> {
    sylvester_with_limit(exponent, DEFAULT_MAX_ORDER)
}

/// Sylvester doubling `H_{2n} = [[H, H], [H, -H]]` starting from `[[1]]`.
pub fn sylvester_with_limit(exponent: u32, max_order: usize) -> Result<HadamardMatrix, HadamardError> {
    let order = 1usize
        .checked_shl(exponent)
        .filter(|&o| o <= max_order)
        .ok_or(HadamardError::TooLarge {
            order: 1usize.checked_shl(exponent).unwrap_or(usize::MAX),
            max: max_order,
        })?;
    let mut h = HadamardMatrix {
        order: 1,
        signs: vec![1],
    };
    while h.order < order {
        let n = h.order;
        let mut signs = vec![0i8; 4 * n * n];
        for r in 0..n {
            for c in 0..n {
                let v = h.signs[r * n + c];
                signs[r * 2 * n + c] = v;
                signs[r * 2 * n + c + n] = v;
                signs[(r + n) * 2 * n + c] = v;
                signs[(r + n) * 2 * n + c + n] = -v;
            }
        }
        h = HadamardMatrix {
            order: 2 * n,
            signs,
        };
    }
    Ok(h)
}

/// Sylvester matrix of order `order` (a power of two).
pub fn sylvester_of_order(order: usize) -> Result<HadamardMatrix, HadamardError> {
    if !order.is_power_of_two() {
        return Err(HadamardError::NoSource(order));
    }
    sylvester(order.trailing_zeros())
}

pub fn parse_hadamard(text: &str) -> Result<HadamardMatrix, HadamardError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_line, header) = lines.next().ok_or(HadamardError::Parse {
        line: 0,
        message: "missing order line".into(),
    })?;
    let order: usize = header.parse().map_err(|_| HadamardError::Parse {
        line: header_line,
        message: format!("order {header:?} is not a positive integer"),
    })?;
    if order == 0 {
        return Err(HadamardError::Parse {
            line: header_line,
            message: "order must be positive".into(),
        });
    }
    let mut signs = Vec::with_capacity(order * order);
    let mut rows = 0;
    for (line, content) in lines {
        if rows == order {
            return Err(HadamardError::Parse {
                line,
                message: format!("more than {order} rows"),
            });
        }
        let before = signs.len();
        for token in content.split_whitespace() {
            match token {
                "1" | "+1" => signs.push(1),
                "-1" => signs.push(-1),
                other => {
                    return Err(HadamardError::Parse {
                        line,
                        message: format!("entry {other:?} is not ±1"),
                    })
                }
            }
        }
        if signs.len() - before != order {
            return Err(HadamardError::Parse {
                line,
                message: format!("expected {order} entries, got {}", signs.len() - before),
            });
        }
        rows += 1;
    }
    if rows != order {
        return Err(HadamardError::Parse {
            line: 0,
            message: format!("expected {order} rows, got {rows}"),
        });
    }
    HadamardMatrix::from_signs(order, signs)
}

pub fn import_hadamard(path: impl AsRef<Path>) -> Result<HadamardMatrix, HadamardError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| HadamardError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_hadamard(&text)
}

impl HadamardMatrix {
    /// Validate a row-major sign pattern.
    pub fn from_signs(order: usize, signs: Vec<i8>) -> Result<Self, HadamardError> {
        if order == 0 || signs.len() != order * order {
            return Err(HadamardError::Malformed(format!(
                "{} entries cannot form an order-{order} matrix",
                signs.len()
            )));
        }
        if let Some(bad) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(HadamardError::Malformed(format!(
                "entry ({}, {}) is {}, not ±1",
                bad / order,
                bad % order,
                signs[bad]
            )));
        }
        if let Some((i, j)) = first_offending_pair(order, &signs) {
            return Err(HadamardError::NotHadamard(i, j));
        }
        Ok(Self { order, signs })
    }

    pub fn from_exact(m: &ExactMatrix) -> Result<Self, HadamardError> {
        let signs = sign_pattern(m)?;
        Self::from_signs(m.rows(), signs)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, row: usize, col: usize) -> i8 {
        self.signs[row * self.order + col]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Row `j` (the paper's `w_j`).
    pub fn row(&self, j: usize) -> &[i8] {
        &self.signs[j * self.order..(j + 1) * self.order]
    }

    /// Column `i` (the paper's `v_i`).
    pub fn column(&self, i: usize) -> Vec<i8> {
        (0..self.order).map(|r| self.entry(r, i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.order;
        let mut signs = vec![0i8; n * n];
        for r in 0..n {
            for c in 0..n {
                signs[c * n + r] = self.signs[r * n + c];
            }
        }
        Self { order: n, signs }
    }

    /// Kronecker product of two Hadamard matrices, again Hadamard.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = (self.order, rhs.order);
        let n = a * b;
        let mut signs = vec![0i8; n * n];
        for i in 0..a {
            for p in 0..b {
                for j in 0..a {
                    for q in 0..b {
                        signs[(i * b + p) * n + j * b + q] = self.entry(i, j) * rhs.entry(p, q);
                    }
                }
            }
        }
        Self { order: n, signs }
    }

    pub fn to_exact(&self) -> ExactMatrix {
        ExactMatrix::new(
            self.order,
            self.order,
            self.signs.iter().map(|&s| ExactScalar::from(i64::from(s))).collect(),
        )
        .expect("square sign pattern")
    }

    /// Serialize in the text format accepted by [`parse_hadamard`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for r in 0..self.order {
            let row: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn row_profile(&self) -> RowProfile {
        let n = self.order;
        let plus_counts = (0..n)
            .map(|r| self.row(r).iter().filter(|&&s| s == 1).count())
            .collect();
        let row_sums: Vec<i64> = (0..n)
            .map(|r| self.row(r).iter().map(|&s| i64::from(s)).sum())
            .collect();
        let column_sums: Vec<i64> = (0..n)
            .map(|c| (0..n).map(|r| i64::from(self.entry(r, c))).sum())
            .collect();
        let all_equal = |v: &[i64]| v.windows(2).all(|w| w[0] == w[1]);
        let regular = all_equal(&row_sums) && all_equal(&column_sums);
        RowProfile {
            plus_counts,
            row_sums,
            column_sums,
            regular,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_sylvester_matrices() {
        assert_eq!(sylvester(0).unwrap().signs(), &[1]);
        assert_eq!(sylvester(1).unwrap().signs(), &[1, 1, 1, -1]);
        assert_eq!(
            sylvester(2).unwrap().signs(),
            &[1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1]
        );
    }

    #[test]
    fn sylvester_respects_limit() {
        assert!(matches!(
            sylvester_with_limit(5, 16),
            Err(HadamardError::TooLarge { order: 32, max: 16 })
        ));
        assert!(sylvester(200).is_err());
    }

    #[test]
    fn validate_distinguishes_false_from_malformed() {
        assert!(validate(&sylvester(2).unwrap().to_exact()).unwrap());
        let ones = ExactMatrix::from_integer_rows(&[[1i64; 4]; 4]).unwrap();
        assert!(!validate(&ones).unwrap());
        let rect = ExactMatrix::from_integer_rows(&[[1i64, 1, 1], [1, -1, 1]]).unwrap();
        assert!(matches!(validate(&rect), Err(HadamardError::Malformed(_))));
        let twos = ExactMatrix::from_integer_rows(&[[1i64, 2], [1, -1]]).unwrap();
        assert!(matches!(validate(&twos), Err(HadamardError::Malformed(_))));
    }

    #[test]
    fn order_32_by_exact_product() {
        let h = sylvester(5).unwrap().to_exact();
        assert!(validate(&h).unwrap());
        let gram = h.transpose().mat_mul(&h).unwrap();
        assert_eq!(gram, ExactMatrix::identity(32).scale(&ExactScalar::from(32)));
    }

    #[test]
    fn parse_round_trip_and_comments() {
        let h = sylvester(3).unwrap();
        let text = format!("# order eight\n{}", h.to_text());
        assert_eq!(parse_hadamard(&text).unwrap(), h);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_hadamard(""), Err(HadamardError::Parse { .. })));
        assert!(matches!(
            parse_hadamard("2\n1 1\n1 0\n"),
            Err(HadamardError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_hadamard("2\n1 1\n"),
            Err(HadamardError::Parse { .. })
        ));
        assert!(matches!(
            parse_hadamard("2\n1 1\n1 1\n"),
            Err(HadamardError::NotHadamard(0, 1))
        ));
    }

    #[test]
    fn first_offending_column_pair() {
        let err = parse_hadamard("4\n1 1 1 1\n1 -1 1 -1\n1 1 -1 -1\n1 -1 1 1\n").unwrap_err();
        assert!(matches!(err, HadamardError::NotHadamard(_, _)));
        if let HadamardError::NotHadamard(i, j) = err {
            // column 2 changed in its last entry, so (0, 2) is the first bad pair
            assert_eq!((i, j), (0, 2));
        }
    }

    #[test]
    fn sylvester_profile_is_not_regular() {
        let p = sylvester(2).unwrap().row_profile();
        assert_eq!(p.row_sums, vec![4, 0, 0, 0]);
        assert_eq!(p.plus_counts, vec![4, 2, 2, 2]);
        assert!(!p.regular);
        let one = sylvester(0).unwrap().row_profile();
        assert_eq!(one.row_sums, vec![1]);
        assert!(one.regular);
    }

    proptest! {
        #[test]
        fn signed_column_sums_bounded(e in 2u32..6, picks in proptest::collection::vec((0usize..32, any::<bool>()), 1..6)) {
            let h = sylvester(e).unwrap();
            let d = h.order();
            let mut cols: Vec<(usize, i64)> = picks.iter().map(|&(c, s)| (c % d, if s { 1 } else { -1 })).collect();
            cols.sort();
            cols.dedup_by_key(|p| p.0);
            for r in 0..d {
                let s: i64 = cols.iter().map(|&(c, sign)| sign * i64::from(h.entry(r, c))).sum();
                prop_assert!(s.unsigned_abs() as usize <= cols.len());
            }
        }

        #[test]
        fn validation_is_transpose_invariant(e in 0u32..5, flips in proptest::collection::vec(0usize..256, 0..3)) {
            let h = sylvester(e).unwrap();
            let mut m = h.to_exact();
            let n = h.order();
            for f in flips {
                let (r, c) = ((f / n) % n, f % n);
                let v = -m.get(r, c);
                m.set(r, c, v);
            }
            prop_assert_eq!(validate(&m).unwrap(), validate(&m.transpose()).unwrap());
        }
    }
}
