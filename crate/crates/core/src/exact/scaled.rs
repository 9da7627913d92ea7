//! Fixed-width fast path for hot verification loops.
//!
//! A rational vector is stored as `i128` numerators over one shared positive
//! denominator. Every operation is checked; `None` means the values left the
//! fixed-width range and the caller must redo the computation with
//! [`ExactScalar`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{ExactMatrix, ExactScalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledVector {
    numerators: Vec<i128>,
    denominator: i128,
}

fn to_i128(value: &BigInt) -> Option<i128> {
    value.to_i128()
}

fn lcm_checked(a: i128, b: i128) -> Option<i128> {
    let g = a.gcd(&b);
    (a / g).checked_mul(b)
}

/// Common denominator and numerators of `values`, or `None` on overflow.
fn scale_entries(values: &[ExactScalar]) -> Option<(Vec<i128>, i128)> {
    let mut denominator = 1i128;
    for v in values {
        denominator = lcm_checked(denominator, to_i128(v.denom())?)?;
    }
    let numerators = values
        .iter()
        .map(|v| {
            let factor = denominator / to_i128(v.denom())?;
            to_i128(v.numer())?.checked_mul(factor)
        })
        .collect::<Option<Vec<_>>>()?;
    Some((numerators, denominator))
}

impl ScaledVector {
    /// `denominator` must be positive.
    pub fn new(numerators: Vec<i128>, denominator: i128) -> Self {
        assert!(denominator > 0, "scaled vector needs a positive denominator");
        Self {
            numerators,
            denominator,
        }
    }

    pub fn from_integers(values: Vec<i128>) -> Self {
        Self::new(values, 1)
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![0; len], 1)
    }

    pub fn from_exact(values: &[ExactScalar]) -> Option<Self> {
        let (numerators, denominator) = scale_entries(values)?;
        Some(Self::new(numerators, denominator))
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn numerators(&self) -> &[i128] {
        &self.numerators
    }

    pub fn denominator(&self) -> i128 {
        self.denominator
    }

    pub fn entry(&self, i: usize) -> ExactScalar {
        ExactScalar::from_parts(
            BigInt::from(self.numerators[i]),
            BigInt::from(self.denominator),
        )
        .expect("positive denominator")
    }

    pub fn to_exact(&self) -> Vec<ExactScalar> {
        (0..self.len()).map(|i| self.entry(i)).collect()
    }

    pub fn checked_add(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.len(), rhs.len(), "length mismatch in scaled add");
        let denominator = lcm_checked(self.denominator, rhs.denominator)?;
        let (fa, fb) = (denominator / self.denominator, denominator / rhs.denominator);
        let numerators = self
            .numerators
            .iter()
            .zip(&rhs.numerators)
            .map(|(&a, &b)| a.checked_mul(fa)?.checked_add(b.checked_mul(fb)?))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::new(numerators, denominator))
    }

    /// Row vector times matrix.
    pub fn checked_mul_matrix(&self, m: &ScaledMatrix) -> Option<Self> {
        assert_eq!(self.len(), m.rows, "shape mismatch in scaled product");
        let mut out = vec![0i128; m.cols];
        for (t, &a) in self.numerators.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = &m.numerators[t * m.cols..(t + 1) * m.cols];
            for (o, &b) in out.iter_mut().zip(row) {
                *o = o.checked_add(a.checked_mul(b)?)?;
            }
        }
        Some(Self::new(
            out,
            self.denominator.checked_mul(m.denominator)?,
        ))
    }

    /// Exact value equality (representations may differ in denominator).
    pub fn checked_value_eq(&self, rhs: &Self) -> Option<bool> {
        if self.len() != rhs.len() {
            return Some(false);
        }
        for (&a, &b) in self.numerators.iter().zip(&rhs.numerators) {
            if a.checked_mul(rhs.denominator)? != b.checked_mul(self.denominator)? {
                return Some(false);
            }
        }
        Some(true)
    }

    pub fn max_abs(&self) -> ExactScalar {
        let top = self
            .numerators
            .iter()
            .map(|v| v.unsigned_abs())
            .max()
            .unwrap_or(0);
        ExactScalar::from_parts(BigInt::from(top), BigInt::from(self.denominator))
            .expect("positive denominator")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledMatrix {
    rows: usize,
    cols: usize,
    numerators: Vec<i128>,
    denominator: i128,
}

impl ScaledMatrix {
    pub fn from_exact(m: &ExactMatrix) -> Option<Self> {
        let (numerators, denominator) = scale_entries(m.entries())?;
        Some(Self {
            rows: m.rows(),
            cols: m.cols(),
            numerators,
            denominator,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::new(n, d).unwrap()
    }

    #[test]
    fn overflow_reports_none() {
        let huge = ScaledVector::new(vec![i128::MAX / 2 + 1, 1], 1);
        assert!(huge.checked_add(&huge).is_none());
        let big = ExactScalar::from_bigint(BigInt::from(i128::MAX) * 4);
        assert!(ScaledVector::from_exact(&[big]).is_none());
    }

    #[test]
    fn value_equality_ignores_representation() {
        let a = ScaledVector::new(vec![1, 2], 2);
        let b = ScaledVector::new(vec![2, 4], 4);
        assert_eq!(a.checked_value_eq(&b), Some(true));
        assert_eq!(a.to_exact(), vec![q(1, 2), q(1, 1)]);
        assert_eq!(a.max_abs(), q(1, 1));
    }

    fn small_vec(len: usize) -> impl Strategy<Value = Vec<ExactScalar>> {
        proptest::collection::vec((-9i64..9, 1i64..7).prop_map(|(n, d)| q(n, d)), len)
    }

    proptest! {
        #[test]
        fn agrees_with_exact_arithmetic(
            u in small_vec(3),
            v in small_vec(3),
            m in small_vec(6),
        ) {
            let su = ScaledVector::from_exact(&u).unwrap();
            let sv = ScaledVector::from_exact(&v).unwrap();
            prop_assert_eq!(su.to_exact(), u.clone());

            let sum: Vec<ExactScalar> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            prop_assert_eq!(su.checked_add(&sv).unwrap().to_exact(), sum);

            let mat = ExactMatrix::new(3, 2, m).unwrap();
            let exact = mat.vec_mul(&u).unwrap();
            let fast = su.checked_mul_matrix(&ScaledMatrix::from_exact(&mat).unwrap()).unwrap();
            prop_assert_eq!(fast.to_exact(), exact);
        }
    }
}
