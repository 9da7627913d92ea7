//! Algebraic certificate of `k`-neighborliness.
//!
//! For a block row `(e | f)` of `E'_l` the construction supplies
//! `M = β·f·Hᵀ` and `N = e·A`, and three conditions are checked:
//!
//! * (a) every entry of `M' = (M | N)` has absolute value at most `½`;
//! * (b) `(e + M)·A = f + N`;
//! * (c) the row `(1, e | f)` is written explicitly as
//!   `Σ μ_i (2, −δ_i) + Σ_j ν_j (0, row_j(I | A)) + ε (1, 0, …, 0)` with
//!   `μ_i ≥ 0`, `δ_i ∈ {±1}^m`, `Σ μ_i ≤ ½` and `ε = 1 − 2Σμ_i ≥ 0`.
//!
//! With `v_i` the columns and `w_j` the rows of `H`, `M = β Σ σ_i v_i` over
//! the support of `f` and `N = α Σ σ_j w_j` over the support of `e`. Each
//! summand splits into two cube vertices: `β σ_i (v_i | 0)` into
//! `(σ_i v_i | ±1)` with weight `β/2` each, and `α σ_j (0 | w_j)` into
//! `(±1 | σ_j w_j)` with weight `α/2` each. A block-`l` row therefore has
//! `Σμ = (k − l)·β + l·α`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{all_blocks, BlockError, BlockRow, BlockStream, SignedSupportRow};
use crate::construction::Construction;
use crate::exact::scaled::{ScaledMatrix, ScaledVector};
use crate::exact::{ExactMatrix, ExactScalar};
use crate::hadamard::HadamardMatrix;
use crate::sampling::{self, ordered_par_map, sample_indices, CountOverflow};

/// Failures kept per block in a report; the total count is always recorded.
pub const MAX_REPORTED_FAILURES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("row with weights ({e}, {f}) is not in a block of E(m, {k})")]
    RowNotInBlock { e: usize, f: usize, k: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("certificate rejected: {0}")]
    Rejected(String),
    #[error("{rows} rows exceed the exhaustive cap {cap}")]
    CapExceeded { rows: u64, cap: u64 },
    #[error("row count overflows")]
    CountOverflow,
    #[error(transparent)]
    Block(#[from] BlockError),
}

impl From<CountOverflow> for CertificateError {
    fn from(_: CountOverflow) -> Self {
        CertificateError::CountOverflow
    }
}

fn small_ratio(v: &ExactScalar) -> Option<(i128, i128)> {
    use num_traits::ToPrimitive;
    Some((v.numer().to_i128()?, v.denom().to_i128()?))
}

fn half() -> ExactScalar {
    ExactScalar::new(1, 2).expect("nonzero")
}

/// Produces the row of `M' = (M | N)` belonging to a block row `(e | f)`.
pub trait MPrimeRule: Sync {
    fn m_prime_row(&self, row: &BlockRow) -> Vec<ExactScalar>;
}

/// The Hadamard rule `M = β·f·Hᵀ`, `N = α·e·H` with `β = 1/(αd)`.
#[derive(Clone, Debug)]
pub struct HadamardRule {
    h: HadamardMatrix,
    alpha: ExactScalar,
    beta: ExactScalar,
    alpha_small: (i128, i128),
    beta_small: (i128, i128),
}

impl HadamardRule {
    pub fn new(h: &HadamardMatrix, alpha: ExactScalar) -> Result<Self, CertificateError> {
        if !alpha.is_positive() {
            return Err(CertificateError::Dimension(format!("alpha = {alpha} must be positive")));
        }
        let d = ExactScalar::from(h.order() as i64);
        let beta = (&alpha * &d).recip().expect("positive");
        let too_wide = || CertificateError::Dimension("alpha has an oversized representation".into());
        Ok(Self {
            h: h.clone(),
            alpha_small: small_ratio(&alpha).ok_or_else(too_wide)?,
            beta_small: small_ratio(&beta).ok_or_else(too_wide)?,
            alpha,
            beta,
        })
    }

    pub fn for_construction(c: &Construction) -> Self {
        Self::new(c.hadamard(), c.params().alpha.clone()).expect("construction alpha is small")
    }

    pub fn alpha(&self) -> &ExactScalar {
        &self.alpha
    }

    pub fn beta(&self) -> &ExactScalar {
        &self.beta
    }

    /// `M = β Σ σ_i v_i` over the support of `f`.
    pub fn m_row(&self, f: &SignedSupportRow) -> ScaledVector {
        let d = self.h.order();
        let (p, q) = self.beta_small;
        let mut out = vec![0i128; d];
        for (i, s) in f.terms() {
            for (j, o) in out.iter_mut().enumerate() {
                *o += i128::from(s * self.h.entry(j, i));
            }
        }
        out.iter_mut().for_each(|o| *o *= p);
        ScaledVector::new(out, q)
    }

    /// `N = α Σ σ_j w_j` over the support of `e`.
    pub fn n_row(&self, e: &SignedSupportRow) -> ScaledVector {
        let (p, q) = self.alpha_small;
        let mut out = vec![0i128; self.h.order()];
        for (j, s) in e.terms() {
            for (o, &h) in out.iter_mut().zip(self.h.row(j)) {
                *o += i128::from(s * h);
            }
        }
        out.iter_mut().for_each(|o| *o *= p);
        ScaledVector::new(out, q)
    }

    /// The paired cube-vertex expansion of `(M | N)`.
    pub fn expand(&self, row: &BlockRow) -> CombinationCertificate {
        let d = self.h.order();
        let n = self.h.order();
        let m = d + n;
        let beta_half = &self.beta * &half();
        let alpha_half = &self.alpha * &half();
        let mut terms = Vec::with_capacity(2 * (row.e.weight() + row.f.weight()));
        for (i, s) in row.f.terms() {
            let v: Vec<i8> = (0..d).map(|j| s * self.h.entry(j, i)).collect();
            for tail in [1i8, -1] {
                let mut delta = v.clone();
                delta.resize(m, tail);
                terms.push(CombinationTerm {
                    mu: beta_half.clone(),
                    delta,
                });
            }
        }
        for (j, s) in row.e.terms() {
            let w: Vec<i8> = self.h.row(j).iter().map(|&h| s * h).collect();
            for head in [1i8, -1] {
                let mut delta = vec![head; d];
                delta.extend_from_slice(&w);
                terms.push(CombinationTerm {
                    mu: alpha_half.clone(),
                    delta,
                });
            }
        }
        let e = ScaledVector::from_integers(row.e.dense().into_iter().map(i128::from).collect());
        let nu = e
            .checked_add(&self.m_row(&row.f))
            .map(|v| v.to_exact())
            .unwrap_or_else(|| {
                // exact fallback, only reachable for huge parameters
                let m_row = self.m_prime_row(row);
                row.e
                    .dense_exact()
                    .iter()
                    .zip(&m_row)
                    .map(|(a, b)| a + b)
                    .collect()
            });
        CombinationCertificate::new(row, terms, nu)
    }
}

impl MPrimeRule for HadamardRule {
    fn m_prime_row(&self, row: &BlockRow) -> Vec<ExactScalar> {
        let mut out = self.m_row(&row.f).to_exact();
        out.extend(self.n_row(&row.e).to_exact());
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationTerm {
    pub mu: ExactScalar,
    pub delta: Vec<i8>,
}

/// Explicit linear combination for one row of `E'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationCertificate {
    /// `(1, e | f)`, length `1 + m`.
    pub target: Vec<i8>,
    pub terms: Vec<CombinationTerm>,
    /// `ν = e + M`, length `d`.
    pub nu: Vec<ExactScalar>,
    pub epsilon: ExactScalar,
}

impl CombinationCertificate {
    fn new(row: &BlockRow, terms: Vec<CombinationTerm>, nu: Vec<ExactScalar>) -> Self {
        let mut target = vec![1i8];
        target.extend(row.joined().dense().into_iter().map(|v| v as i8));
        let total: ExactScalar = terms.iter().map(|t| &t.mu).sum();
        let epsilon = &ExactScalar::one() - &(&total + &total);
        Self {
            target,
            terms,
            nu,
            epsilon,
        }
    }

    pub fn coefficient_sum(&self) -> ExactScalar {
        self.terms.iter().map(|t| &t.mu).sum()
    }

    /// Re-sum the combination exactly against the system `(I | A)`.
    pub fn verify(&self, system: &CertificateSystem) -> Result<(), CertificateError> {
        let reject = |msg: String| Err(CertificateError::Rejected(msg));
        let m = system.d + system.n;
        if self.target.len() != m + 1 || self.nu.len() != system.d {
            return reject("length mismatch".into());
        }
        if self.target[0] != 1 {
            return reject("target does not start with 1".into());
        }
        for (i, t) in self.terms.iter().enumerate() {
            if t.mu.is_negative() {
                return reject(format!("mu_{i} = {} is negative", t.mu));
            }
            if t.delta.len() != m || t.delta.iter().any(|&s| s != 1 && s != -1) {
                return reject(format!("delta_{i} is not a cube vertex"));
            }
        }
        let total = self.coefficient_sum();
        if total > half() {
            return reject(format!("coefficient sum {total} exceeds 1/2"));
        }
        if self.epsilon.is_negative() {
            return reject(format!("epsilon = {} is negative", self.epsilon));
        }
        if &(&total + &total) + &self.epsilon != ExactScalar::one() {
            return reject("column 0 does not sum to 1".into());
        }
        let matches = match self.fast_columns(system) {
            Some(ok) => ok,
            None => self.exact_columns(system),
        };
        if !matches {
            return reject("columns 1..m do not re-sum to the target".into());
        }
        Ok(())
    }

    fn fast_columns(&self, system: &CertificateSystem) -> Option<bool> {
        let ia = system.ia_scaled.as_ref()?;
        let mus: Vec<ExactScalar> = self.terms.iter().map(|t| t.mu.clone()).collect();
        let mus = ScaledVector::from_exact(&mus)?;
        let m = system.d + system.n;
        let mut acc = vec![0i128; m];
        for (t, &mu) in self.terms.iter().zip(mus.numerators()) {
            for (a, &s) in acc.iter_mut().zip(&t.delta) {
                *a = a.checked_sub(mu.checked_mul(i128::from(s))?)?;
            }
        }
        let combo = ScaledVector::new(acc, mus.denominator());
        let lifted = ScaledVector::from_exact(&self.nu)?.checked_mul_matrix(ia)?;
        let sum = combo.checked_add(&lifted)?;
        let target = ScaledVector::from_integers(self.target[1..].iter().map(|&v| i128::from(v)).collect());
        sum.checked_value_eq(&target)
    }

    fn exact_columns(&self, system: &CertificateSystem) -> bool {
        let lifted = system.ia.vec_mul(&self.nu).expect("checked lengths");
        (0..system.d + system.n).all(|j| {
            let combo: ExactScalar = self
                .terms
                .iter()
                .map(|t| &t.mu * &ExactScalar::from(i64::from(t.delta[j])))
                .sum();
            &lifted[j] - &combo == ExactScalar::from(i64::from(self.target[j + 1]))
        })
    }
}

/// The matrix `(I_d | A)` a certificate is checked against.
#[derive(Clone, Debug)]
pub struct CertificateSystem {
    d: usize,
    n: usize,
    a: ExactMatrix,
    a_scaled: Option<ScaledMatrix>,
    ia: ExactMatrix,
    ia_scaled: Option<ScaledMatrix>,
}

impl CertificateSystem {
    pub fn new(a: &ExactMatrix) -> Self {
        let ia = ExactMatrix::identity(a.rows()).hstack(a).expect("same row count");
        Self {
            d: a.rows(),
            n: a.cols(),
            a_scaled: ScaledMatrix::from_exact(a),
            ia_scaled: ScaledMatrix::from_exact(&ia),
            a: a.clone(),
            ia,
        }
    }

    pub fn a(&self) -> &ExactMatrix {
        &self.a
    }

    /// Condition (b) for one row: `(e + M)·A = f + N`.
    fn row_identity(&self, e: &[ExactScalar], f: &[ExactScalar], m: &[ExactScalar], n: &[ExactScalar]) -> bool {
        let left: Vec<ExactScalar> = e.iter().zip(m).map(|(a, b)| a + b).collect();
        let left = self.a.vec_mul(&left).expect("length d");
        left.iter()
            .zip(f.iter().zip(n))
            .all(|(l, (a, b))| *l == a + b)
    }

    fn row_identity_scaled(&self, e: &SignedSupportRow, f: &SignedSupportRow, m: &ScaledVector, n: &ScaledVector) -> Option<bool> {
        let a = self.a_scaled.as_ref()?;
        let e = ScaledVector::from_integers(e.dense().into_iter().map(i128::from).collect());
        let f = ScaledVector::from_integers(f.dense().into_iter().map(i128::from).collect());
        let left = e.checked_add(m)?.checked_mul_matrix(a)?;
        left.checked_value_eq(&f.checked_add(n)?)
    }
}

/// One row of a certificate block with its `M` and `N` parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateRow {
    pub index: u64,
    pub row: BlockRow,
    pub m: ScaledVector,
    pub n: ScaledVector,
}

impl CertificateRow {
    pub fn max_abs_entry(&self) -> ExactScalar {
        self.m.max_abs().max(self.n.max_abs())
    }
}

/// Streamed `(M_{k−l} | N_l)` rows for block `l`, tracking the running
/// maximum absolute entry.
#[derive(Clone, Debug)]
pub struct CertificateBlock {
    rule: HadamardRule,
    stream: BlockStream,
    running_max: ExactScalar,
}

pub fn build_blocks(c: &Construction, l: usize) -> Result<CertificateBlock, CertificateError> {
    let stream = BlockStream::new(c.d(), c.params().n, c.params().k, l)?;
    Ok(CertificateBlock {
        rule: HadamardRule::for_construction(c),
        stream,
        running_max: ExactScalar::zero(),
    })
}

impl CertificateBlock {
    pub fn l(&self) -> usize {
        self.stream.l()
    }

    pub fn row_count(&self) -> u64 {
        self.stream.row_count()
    }

    /// Largest `|entry|` among the rows produced so far.
    pub fn running_max(&self) -> &ExactScalar {
        &self.running_max
    }

    pub fn row_at(&self, index: u64) -> CertificateRow {
        let row = self.stream.row_at(index);
        CertificateRow {
            index,
            m: self.rule.m_row(&row.f),
            n: self.rule.n_row(&row.e),
            row,
        }
    }
}

impl Iterator for CertificateBlock {
    type Item = CertificateRow;

    fn next(&mut self) -> Option<CertificateRow> {
        let index = self.stream.position();
        self.stream.next()?;
        let row = self.row_at(index);
        let top = row.max_abs_entry();
        if top > self.running_max {
            self.running_max = top;
        }
        Some(row)
    }
}

/// Expand a row of `E'` into its explicit combination.
pub fn expand_combination(c: &Construction, row: &BlockRow) -> Result<CombinationCertificate, CertificateError> {
    let k = c.params().k;
    if row.e.length() != c.d() || row.f.length() != c.params().n {
        return Err(CertificateError::Dimension(format!(
            "row parts have lengths ({}, {}), expected ({}, {})",
            row.e.length(),
            row.f.length(),
            c.d(),
            c.params().n
        )));
    }
    if row.e.weight() + row.f.weight() != k {
        return Err(CertificateError::RowNotInBlock {
            e: row.e.weight(),
            f: row.f.weight(),
            k,
        });
    }
    Ok(HadamardRule::for_construction(c).expand(row))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    /// Blocks above this row count are sampled.
    pub max_rows: u64,
    /// Rows drawn from a sampled block.
    pub sample_rows: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_rows: sampling::max_rows_from_env(),
            sample_rows: sampling::DEFAULT_SAMPLE_ROWS,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    EntryBound,
    RowIdentity,
    Combination,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowFailure {
    pub l: usize,
    pub index: u64,
    pub condition: Condition,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub l: usize,
    pub rows: u64,
    pub checked: u64,
    pub sampled: bool,
    pub max_abs_entry: ExactScalar,
    /// Smallest and largest `Σμ` over the checked rows.
    pub coefficient_sum: (ExactScalar, ExactScalar),
    /// `½ − l·(1/(2k) − 2k/d)`.
    pub formula_sum: ExactScalar,
    pub min_epsilon: ExactScalar,
    pub failure_count: u64,
    pub failures: Vec<RowFailure>,
}

impl BlockReport {
    pub fn formula_matches(&self) -> bool {
        self.checked > 0 && self.coefficient_sum.0 == self.formula_sum && self.coefficient_sum.1 == self.formula_sum
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionsReport {
    pub d: usize,
    pub k: usize,
    pub alpha: ExactScalar,
    pub beta: ExactScalar,
    pub options: VerifyOptions,
    /// `β·Hᵀ·A = I`, which gives `M·A = F` for every row at once.
    pub structural_identity: bool,
    pub entry_bound: bool,
    pub row_identity: bool,
    pub combinations: bool,
    pub max_abs_entry: ExactScalar,
    pub blocks: Vec<BlockReport>,
}

impl ConditionsReport {
    pub fn passed(&self) -> bool {
        self.structural_identity && self.entry_bound && self.row_identity && self.combinations
    }

    pub fn rows_checked(&self) -> u64 {
        self.blocks.iter().map(|b| b.checked).sum()
    }

    pub fn sampled(&self) -> bool {
        self.blocks.iter().any(|b| b.sampled)
    }

    pub fn first_failure(&self) -> Option<&RowFailure> {
        self.blocks.iter().find_map(|b| b.failures.first())
    }
}

/// `½ − l·(1/(2k) − 2k/d)`.
pub fn coefficient_sum_formula(d: usize, k: usize, l: usize) -> ExactScalar {
    let inner = &ExactScalar::new(1, 2 * k as i64).expect("k >= 1") - &ExactScalar::new(2 * k as i64, d as i64).expect("d >= 1");
    &half() - &(&ExactScalar::from(l as i64) * &inner)
}

struct RowOutcome {
    max_abs: ExactScalar,
    sum: ExactScalar,
    epsilon: ExactScalar,
    failures: Vec<(Condition, String)>,
}

fn check_row(rule: &HadamardRule, system: &CertificateSystem, row: &BlockRow) -> RowOutcome {
    let m = rule.m_row(&row.f);
    let n = rule.n_row(&row.e);
    let mut failures = Vec::new();
    let max_abs = m.max_abs().max(n.max_abs());
    if max_abs > half() {
        failures.push((Condition::EntryBound, format!("entry of absolute value {max_abs}")));
    }
    let identity = rule_identity(system, row, &m, &n);
    if !identity {
        failures.push((Condition::RowIdentity, "(e + M)A differs from f + N".into()));
    }
    let cert = rule.expand(row);
    if let Err(e) = cert.verify(system) {
        failures.push((Condition::Combination, e.to_string()));
    }
    RowOutcome {
        max_abs,
        sum: cert.coefficient_sum(),
        epsilon: cert.epsilon,
        failures,
    }
}

fn rule_identity(system: &CertificateSystem, row: &BlockRow, m: &ScaledVector, n: &ScaledVector) -> bool {
    system
        .row_identity_scaled(&row.e, &row.f, m, n)
        .unwrap_or_else(|| {
            system.row_identity(&row.e.dense_exact(), &row.f.dense_exact(), &m.to_exact(), &n.to_exact())
        })
}

/// Check conditions (a)–(c) on every row of every block, sampling blocks
/// above `options.max_rows`.
pub fn verify_conditions(c: &Construction) -> Result<ConditionsReport, CertificateError> {
    verify_conditions_with(c, VerifyOptions::default())
}

pub fn verify_conditions_with(c: &Construction, options: VerifyOptions) -> Result<ConditionsReport, CertificateError> {
    let params = c.params();
    let (d, k) = (params.d, params.k);
    let rule = HadamardRule::for_construction(c);
    let system = CertificateSystem::new(c.a());

    let ht = c.hadamard().transpose().to_exact();
    let structural_identity = ht
        .mat_mul(c.a())
        .expect("square")
        .scale(&params.beta)
        == ExactMatrix::identity(params.n);

    let mut blocks = Vec::with_capacity(k + 1);
    for stream in all_blocks(d, params.n, k)? {
        let l = stream.l();
        let rows = stream.row_count();
        let sampled = rows > options.max_rows;
        let indices: Option<Vec<u64>> =
            sampled.then(|| sample_indices(options.seed, l as u64, rows, options.sample_rows));
        let checked = indices.as_ref().map_or(rows, |v| v.len() as u64);
        let mut report = BlockReport {
            l,
            rows,
            checked,
            sampled,
            max_abs_entry: ExactScalar::zero(),
            coefficient_sum: (ExactScalar::zero(), ExactScalar::zero()),
            formula_sum: coefficient_sum_formula(d, k, l),
            min_epsilon: ExactScalar::one(),
            failure_count: 0,
            failures: Vec::new(),
        };
        let mut sums: Option<(ExactScalar, ExactScalar)> = None;
        ordered_par_map::<_, CertificateError, _, _>(
            checked,
            |i| {
                let index = indices.as_ref().map_or(i, |v| v[i as usize]);
                Ok((index, check_row(&rule, &system, &stream.row_at(index))))
            },
            |_, (index, outcome)| {
                if outcome.max_abs > report.max_abs_entry {
                    report.max_abs_entry = outcome.max_abs.clone();
                }
                if outcome.epsilon < report.min_epsilon {
                    report.min_epsilon = outcome.epsilon.clone();
                }
                sums = Some(match sums.take() {
                    None => (outcome.sum.clone(), outcome.sum.clone()),
                    Some((lo, hi)) => (lo.min(outcome.sum.clone()), hi.max(outcome.sum.clone())),
                });
                for (condition, detail) in outcome.failures {
                    report.failure_count += 1;
                    if report.failures.len() < MAX_REPORTED_FAILURES {
                        report.failures.push(RowFailure {
                            l,
                            index,
                            condition,
                            detail,
                        });
                    }
                }
            },
        )?;
        if let Some(s) = sums {
            report.coefficient_sum = s;
        }
        blocks.push(report);
    }
    let any = |cond: Condition| blocks.iter().flat_map(|b| &b.failures).any(|f| f.condition == cond);
    let max_abs_entry = blocks
        .iter()
        .map(|b| b.max_abs_entry.clone())
        .max()
        .unwrap_or_else(ExactScalar::zero);
    Ok(ConditionsReport {
        d,
        k,
        alpha: params.alpha.clone(),
        beta: params.beta.clone(),
        options,
        structural_identity,
        entry_bound: !any(Condition::EntryBound),
        row_identity: !any(Condition::RowIdentity),
        combinations: !any(Condition::Combination),
        max_abs_entry,
        blocks,
    })
}

/// Combination for an arbitrary `z` with `‖z‖∞ = s`: with `u_j = (z_j/s + 1)/2`
/// and `δ_τ(j) = +1` iff `u_j > τ`, `z = s ∫₀¹ δ_τ dτ`, a finite sum over the
/// gaps between consecutive distinct `u_j`. The weights sum to exactly `s`.
pub fn threshold_decomposition(z: &[ExactScalar]) -> Vec<CombinationTerm> {
    let s = z.iter().map(ExactScalar::abs).max().unwrap_or_else(ExactScalar::zero);
    if s.is_zero() {
        return Vec::new();
    }
    let one = ExactScalar::one();
    let u: Vec<ExactScalar> = z
        .iter()
        .map(|v| &(&v.checked_div(&s).expect("s > 0") + &one) * &half())
        .collect();
    let mut cuts: Vec<ExactScalar> = u.clone();
    cuts.push(ExactScalar::zero());
    cuts.push(one);
    cuts.sort();
    cuts.dedup();
    cuts.windows(2)
        .map(|w| CombinationTerm {
            mu: &s * &(&w[1] - &w[0]),
            delta: u.iter().map(|uj| if *uj > w[0] { 1 } else { -1 }).collect(),
        })
        .collect()
}

/// Number of rows [`verify_general`] checks before refusing.
pub const DEFAULT_GENERAL_CAP: u64 = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralReport {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub rows: u64,
    pub entry_bound: bool,
    pub row_identity: bool,
    pub combinations: bool,
    pub max_abs_entry: ExactScalar,
    pub failure_count: u64,
    pub failures: Vec<RowFailure>,
}

impl GeneralReport {
    pub fn passed(&self) -> bool {
        self.entry_bound && self.row_identity && self.combinations
    }
}

/// Check (a)–(c) for a user-supplied `A` (`d × n`) and `M'` rule over all
/// rows of `E(d + n, k)`. Combinations come from [`threshold_decomposition`].
pub fn verify_general(a: &ExactMatrix, rule: &dyn MPrimeRule, k: usize) -> Result<GeneralReport, CertificateError> {
    let (d, n) = a.shape();
    let blocks = all_blocks(d, n, k)?;
    let total: u64 = blocks.iter().map(BlockStream::row_count).sum();
    if total > DEFAULT_GENERAL_CAP {
        return Err(CertificateError::CapExceeded {
            rows: total,
            cap: DEFAULT_GENERAL_CAP,
        });
    }
    let system = CertificateSystem::new(a);
    let mut report = GeneralReport {
        d,
        n,
        k,
        rows: 0,
        entry_bound: true,
        row_identity: true,
        combinations: true,
        max_abs_entry: ExactScalar::zero(),
        failure_count: 0,
        failures: Vec::new(),
    };
    for stream in blocks {
        let l = stream.l();
        ordered_par_map::<_, CertificateError, _, _>(
            stream.row_count(),
            |i| {
                let row = stream.row_at(i);
                let z = rule.m_prime_row(&row);
                if z.len() != d + n {
                    return Err(CertificateError::Dimension(format!(
                        "rule produced {} entries, expected {}",
                        z.len(),
                        d + n
                    )));
                }
                let mut failures = Vec::new();
                let top = z.iter().map(ExactScalar::abs).max().unwrap_or_else(ExactScalar::zero);
                if top > half() {
                    failures.push((Condition::EntryBound, format!("entry of absolute value {top}")));
                }
                let (zm, zn) = z.split_at(d);
                if !system.row_identity(&row.e.dense_exact(), &row.f.dense_exact(), zm, zn) {
                    failures.push((Condition::RowIdentity, "(e + M)A differs from f + N".into()));
                }
                let nu: Vec<ExactScalar> = row.e.dense_exact().iter().zip(zm).map(|(a, b)| a + b).collect();
                let cert = CombinationCertificate::new(&row, threshold_decomposition(&z), nu);
                if let Err(e) = cert.verify(&system) {
                    failures.push((Condition::Combination, e.to_string()));
                }
                Ok((top, failures))
            },
            |index, (top, failures)| {
                if top > report.max_abs_entry {
                    report.max_abs_entry = top;
                }
                report.rows += 1;
                for (condition, detail) in failures {
                    match condition {
                        Condition::EntryBound => report.entry_bound = false,
                        Condition::RowIdentity => report.row_identity = false,
                        Condition::Combination => report.combinations = false,
                    }
                    report.failure_count += 1;
                    if report.failures.len() < MAX_REPORTED_FAILURES {
                        report.failures.push(RowFailure {
                            l,
                            index,
                            condition,
                            detail,
                        });
                    }
                }
            },
        )?;
    }
    Ok(report)
}
