//! The explicit construction: parameters `(k, α, β)`, the matrix `A = αH`,
//! the cs-transform `T = [-A; I]` and the vertex matrix `X = [I; Aᵀ]`.
//!
//! The polytope is `conv{±x_1, …, ±x_m}` for the rows `x_i` of `X`. The
//! columns of `T` span `L = ker(I | A)` and the columns of `X` span its
//! orthogonal complement; `build` checks `XᵀT = 0` and `rank [X | T] = m`.

use serde::Serialize;
use thiserror::Error;

use crate::exact::{ExactMatrix, ExactScalar};
use crate::hadamard::HadamardMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("dimension {0} is below the minimum of 4")]
    DimensionTooSmall(usize),
    #[error("alpha = {alpha} lies outside the window [{low}, {high}]")]
    AlphaOutsideWindow {
        alpha: ExactScalar,
        low: ExactScalar,
        high: ExactScalar,
    },
    #[error("Hadamard order {hadamard} does not match dimension {dimension}")]
    OrderMismatch { hadamard: usize, dimension: usize },
    #[error("cs-transform check failed: {0}")]
    TransformCheck(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionParams {
    pub d: usize,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub alpha: ExactScalar,
    pub beta: ExactScalar,
}

/// Largest `k` with `4k² ≤ d`, i.e. `⌊½√d⌋`.
pub fn neighborliness_for(d: usize) -> usize {
    let mut k = 0usize;
    while 4 * (k + 1) * (k + 1) <= d {
        k += 1;
    }
    k
}

/// Default parameters: `k = ⌊½√d⌋`, `α = 1/(2k)`, `β = 1/(αd) = 2k/d`.
pub fn parameters(d: usize) -> Result<ConstructionParams, ConstructionError> {
    if d < 4 {
        return Err(ConstructionError::DimensionTooSmall(d));
    }
    let k = neighborliness_for(d);
    let alpha = ExactScalar::new(1, 2 * k as i64).expect("k >= 1");
    ConstructionParams::with_alpha(d, alpha)
}

impl ConstructionParams {
    /// Parameters with a caller-chosen `α` inside `[2k/d, 1/(2k)]`.
    pub fn with_alpha(d: usize, alpha: ExactScalar) -> Result<Self, ConstructionError> {
        if d < 4 {
            return Err(ConstructionError::DimensionTooSmall(d));
        }
        let k = neighborliness_for(d);
        let (low, high) = Self::window_for(d, k);
        if alpha < low || alpha > high {
            return Err(ConstructionError::AlphaOutsideWindow { alpha, low, high });
        }
        let beta = (&alpha * &ExactScalar::from(d as i64))
            .recip()
            .expect("alpha is positive");
        Ok(Self {
            d,
            n: d,
            m: 2 * d,
            k,
            alpha,
            beta,
        })
    }

    fn window_for(d: usize, k: usize) -> (ExactScalar, ExactScalar) {
        (
            ExactScalar::new(2 * k as i64, d as i64).expect("d >= 4"),
            ExactScalar::new(1, 2 * k as i64).expect("k >= 1"),
        )
    }

    /// `(2k/d, 1/(2k))`.
    pub fn alpha_window(&self) -> (ExactScalar, ExactScalar) {
        Self::window_for(self.d, self.k)
    }

    pub fn k_scalar(&self) -> ExactScalar {
        ExactScalar::from(self.k as i64)
    }
}

/// Index of one of the `2m` polytope vertices: representative `index` with a
/// sign bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SignedVertex {
    pub index: usize,
    pub negated: bool,
}

impl SignedVertex {
    pub fn positive(index: usize) -> Self {
        Self {
            index,
            negated: false,
        }
    }

    pub fn negative(index: usize) -> Self {
        Self {
            index,
            negated: true,
        }
    }

    pub fn antipode(self) -> Self {
        Self {
            index: self.index,
            negated: !self.negated,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    params: ConstructionParams,
    hadamard: HadamardMatrix,
    a: ExactMatrix,
    t: ExactMatrix,
    x: ExactMatrix,
}

pub fn build(h: &HadamardMatrix) -> Result<Construction, ConstructionError> {
    let params = parameters(h.order())?;
    build_with_params(h, params)
}

pub fn build_with_params(
    h: &HadamardMatrix,
    params: ConstructionParams,
) -> Result<Construction, ConstructionError> {
    if h.order() != params.d {
        return Err(ConstructionError::OrderMismatch {
            hadamard: h.order(),
            dimension: params.d,
        });
    }
    let d = params.d;
    let a = h.to_exact().scale(&params.alpha);
    let identity = ExactMatrix::identity(d);
    let t = a.neg().vstack(&identity).expect("square blocks");
    let x = identity.vstack(&a.transpose()).expect("square blocks");

    let xt = x.transpose().mat_mul(&t).expect("conforming shapes");
    if !xt.is_zero() {
        return Err(ConstructionError::TransformCheck("X^T T is not zero".into()));
    }
    let joined = x.hstack(&t).expect("same row count");
    let rank = joined.rank();
    if rank != params.m {
        return Err(ConstructionError::TransformCheck(format!(
            "rank [X | T] = {rank}, expected {}",
            params.m
        )));
    }
    Ok(Construction {
        params,
        hadamard: h.clone(),
        a,
        t,
        x,
    })
}

impl Construction {
    pub fn params(&self) -> &ConstructionParams {
        &self.params
    }

    pub fn hadamard(&self) -> &HadamardMatrix {
        &self.hadamard
    }

    /// `A = αH`, `d × n`.
    pub fn a(&self) -> &ExactMatrix {
        &self.a
    }

    /// cs-transform matrix `T = [-A; I]`, `m × n`.
    pub fn transform(&self) -> &ExactMatrix {
        &self.t
    }

    /// Vertex representatives `X = [I; Aᵀ]`, `m × d`.
    pub fn vertices(&self) -> &ExactMatrix {
        &self.x
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    pub fn representative(&self, index: usize) -> &[ExactScalar] {
        self.x.row(index)
    }

    pub fn vertex(&self, v: SignedVertex) -> Vec<ExactScalar> {
        let row = self.x.row(v.index);
        if v.negated {
            row.iter().map(|e| -e).collect()
        } else {
            row.to_vec()
        }
    }

    /// All `2m` vertices: `x_1, …, x_m, -x_1, …, -x_m`.
    pub fn all_vertices(&self) -> ExactMatrix {
        self.x.vstack(&self.x.neg()).expect("same width")
    }

    pub fn signed_vertices(&self) -> impl Iterator<Item = SignedVertex> + '_ {
        let m = self.m();
        (0..m)
            .map(SignedVertex::positive)
            .chain((0..m).map(SignedVertex::negative))
    }

    /// The points `v̄_1, …, v̄_m` (rows of `T`).
    pub fn cs_transform_points(&self) -> Vec<Vec<ExactScalar>> {
        self.t.row_iter().map(<[ExactScalar]>::to_vec).collect()
    }
}
