//! Exact LP oracle: face checks on the polytope itself, dominant-subset
//! checks, and containment of `proj_L E(m, k)` in `proj_L C_{±½}(m)`.
//!
//! Every LP is solved over the rationals and its witness is re-checked.
//! Sweeps run as a parallel map over fixed-size chunks and aggregate in
//! index order, so reports do not depend on the thread count.

pub mod lp;
mod simplex;

use rand::seq::index::sample as sample_distinct;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::blocks::{all_blocks, binomial, unrank_combination, BlockError, SignedSupportRow};
use crate::construction::{Construction, SignedVertex};
use crate::exact::ExactScalar;
use crate::sampling::{ordered_par_map, rng_for, sample_indices};
use lp::{lp_max_via_dual, LinearProgram, LpError, LpOutcome, Relation};

/// Largest number of logical instances an exhaustive sweep may visit.
pub const DEFAULT_SUBSET_CAP: u64 = 5_000_000;

/// Largest subset [`is_dominant`] accepts (it solves `2^(|I|-1)` LPs).
pub const MAX_DOMINANCE_SUBSET: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("subset is empty")]
    EmptySubset,
    #[error("subset of size {size} exceeds the dimension {d}")]
    SubsetTooLarge { size: usize, d: usize },
    #[error("vertex index {index} is out of range for m = {m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("index {0} appears twice in the subset")]
    DuplicateIndex(usize),
    #[error("size {k} is out of range for m = {m}")]
    SizeOutOfRange { k: usize, m: usize },
    #[error("exhaustive sweep needs {count} instances, above the cap {cap}; use sampling")]
    CapExceeded { count: u64, cap: u64 },
    #[error("subset of size {0} has too many sign patterns")]
    TooManyPatterns(usize),
    #[error("instance count overflows u64")]
    CountOverflow,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error("witness re-substitution failed: {0}")]
    Resubstitution(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SweepMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceStatus {
    Face,
    NotFace,
    AntipodalRejected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceReport {
    pub subset: Vec<SignedVertex>,
    pub status: FaceStatus,
    /// The functional `c`; empty when the LP was not run or was infeasible.
    pub witness: Vec<ExactScalar>,
    /// Optimal `t`; `None` when no functional takes the value 1 on all of `S`.
    pub margin: Option<ExactScalar>,
}

fn dot(a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

impl FaceReport {
    /// Re-substitute the witness into every vertex: `⟨c, x⟩ = 1` on `S` and
    /// `⟨c, y⟩ ≤ 1 − t` elsewhere.
    pub fn verify(&self, c: &Construction) -> Result<(), OracleError> {
        let (Some(t), false) = (&self.margin, self.witness.is_empty()) else {
            return Ok(());
        };
        let one = ExactScalar::one();
        let bound = &one - t;
        for v in c.signed_vertices() {
            let value = dot(&self.witness, &c.vertex(v));
            let ok = if self.subset.contains(&v) {
                value == one
            } else {
                value <= bound
            };
            if !ok {
                return Err(OracleError::Resubstitution(format!(
                    "vertex {v:?} has value {value}"
                )));
            }
        }
        let face = t.is_positive();
        if face != (self.status == FaceStatus::Face) {
            return Err(OracleError::Resubstitution("status disagrees with margin".into()));
        }
        Ok(())
    }
}

fn check_index(c: &Construction, index: usize) -> Result<(), OracleError> {
    if index >= c.m() {
        return Err(OracleError::IndexOutOfRange { index, m: c.m() });
    }
    Ok(())
}

/// Decide whether the vertices `S` span a face, by maximizing `t` subject to
/// `⟨c, x⟩ = 1` on `S`, `⟨c, y⟩ + t ≤ 1` on every other vertex and `t ≤ 1`.
pub fn is_face(c: &Construction, subset: &[SignedVertex]) -> Result<FaceReport, OracleError> {
    if subset.is_empty() {
        return Err(OracleError::EmptySubset);
    }
    if subset.len() > c.d() {
        return Err(OracleError::SubsetTooLarge {
            size: subset.len(),
            d: c.d(),
        });
    }
    for v in subset {
        check_index(c, v.index)?;
    }
    let rejected = subset.iter().any(|v| subset.contains(&v.antipode()));
    if rejected {
        return Ok(FaceReport {
            subset: subset.to_vec(),
            status: FaceStatus::AntipodalRejected,
            witness: Vec::new(),
            margin: None,
        });
    }

    let d = c.d();
    let zero = ExactScalar::zero();
    let one = ExactScalar::one();
    let mut objective = vec![zero.clone(); d + 1];
    objective[d] = one.clone();
    let mut lp = LinearProgram::with_free_variables(objective);
    for v in c.signed_vertices() {
        let mut row = c.vertex(v);
        if subset.contains(&v) {
            row.push(zero.clone());
            lp.add_constraint(row, Relation::Equal, one.clone())?;
        } else {
            row.push(one.clone());
            lp.add_constraint(row, Relation::LessEq, one.clone())?;
        }
    }
    let mut cap = vec![zero; d + 1];
    cap[d] = one.clone();
    lp.add_constraint(cap, Relation::LessEq, one)?;

    let report = match lp_max_via_dual(&lp)? {
        LpOutcome::Optimal(sol) => {
            let t = sol.primal[d].clone();
            FaceReport {
                subset: subset.to_vec(),
                status: if t.is_positive() {
                    FaceStatus::Face
                } else {
                    FaceStatus::NotFace
                },
                witness: sol.primal[..d].to_vec(),
                margin: Some(t),
            }
        }
        LpOutcome::Infeasible => FaceReport {
            subset: subset.to_vec(),
            status: FaceStatus::NotFace,
            witness: Vec::new(),
            margin: None,
        },
        LpOutcome::Unbounded => unreachable!("t is bounded by 1"),
    };
    report.verify(c)?;
    Ok(report)
}

fn min_option(current: &mut Option<ExactScalar>, value: &ExactScalar) -> bool {
    match current {
        Some(m) if *m <= *value => false,
        _ => {
            *current = Some(value.clone());
            true
        }
    }
}

impl From<crate::sampling::CountOverflow> for OracleError {
    fn from(_: crate::sampling::CountOverflow) -> Self {
        OracleError::CountOverflow
    }
}

fn sweep<T, F, S>(total: u64, f: F, sink: S) -> Result<(), OracleError>
where
    T: Send,
    F: Fn(u64) -> Result<T, OracleError> + Sync,
    S: FnMut(u64, T),
{
    ordered_par_map(total, f, sink)
}

fn logical_count(m: usize, k: usize) -> Result<u64, OracleError> {
    binomial(m, k)
        .and_then(|b| b.checked_mul(1u64.checked_shl(k as u32)?))
        .ok_or(OracleError::CountOverflow)
}

fn check_size(c: &Construction, k: usize) -> Result<(), OracleError> {
    if k == 0 || k > c.m() {
        return Err(OracleError::SizeOutOfRange { k, m: c.m() });
    }
    Ok(())
}

/// Canonical instance `rank` of the antipode-free `k`-subsets: the support
/// index and a sign pattern whose first sign is `+`.
fn canonical_subset(m: usize, k: usize, rank: u64) -> Vec<SignedVertex> {
    let half = 1u64 << (k - 1);
    let support = unrank_combination(m, k, rank / half);
    let pattern = rank % half;
    support
        .into_iter()
        .enumerate()
        .map(|(t, index)| SignedVertex {
            index,
            negated: t > 0 && (pattern >> (k - 1 - t)) & 1 == 1,
        })
        .collect()
}

fn random_subset<R: Rng>(rng: &mut R, m: usize, k: usize) -> Vec<SignedVertex> {
    let mut support = sample_distinct(rng, m, k).into_vec();
    support.sort_unstable();
    support
        .into_iter()
        .map(|index| SignedVertex {
            index,
            negated: rng.random::<bool>(),
        })
        .collect()
}

fn canonicalize(subset: &[SignedVertex]) -> Vec<SignedVertex> {
    if subset.first().is_some_and(|v| v.negated) {
        subset.iter().map(|v| v.antipode()).collect()
    } else {
        subset.to_vec()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeighborlySummary {
    pub d: usize,
    pub k: usize,
    pub mode: SweepMode,
    /// Subsets covered, counted before sign-flip canonicalization.
    pub subsets: u64,
    pub lps_solved: u64,
    pub faces: u64,
    pub failures: u64,
    pub min_margin: Option<ExactScalar>,
    pub first_failure: Option<FaceReport>,
}

impl NeighborlySummary {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.subsets > 0
    }
}

pub fn verify_k_neighborly(
    c: &Construction,
    k: usize,
    mode: SweepMode,
) -> Result<NeighborlySummary, OracleError> {
    verify_k_neighborly_with_cap(c, k, mode, DEFAULT_SUBSET_CAP)
}

/// Check that every antipode-free `k`-subset of the vertices spans a face.
/// Exhaustive mode solves one LP per sign-flip class and counts both members.
pub fn verify_k_neighborly_with_cap(
    c: &Construction,
    k: usize,
    mode: SweepMode,
    cap: u64,
) -> Result<NeighborlySummary, OracleError> {
    check_size(c, k)?;
    if k > c.d() {
        return Err(OracleError::SubsetTooLarge { size: k, d: c.d() });
    }
    let m = c.m();
    let mut summary = NeighborlySummary {
        d: c.d(),
        k,
        mode,
        subsets: 0,
        lps_solved: 0,
        faces: 0,
        failures: 0,
        min_margin: None,
        first_failure: None,
    };
    let absorb = |summary: &mut NeighborlySummary, report: FaceReport, weight: u64| {
        summary.subsets += weight;
        summary.lps_solved += 1;
        if report.status == FaceStatus::Face {
            summary.faces += weight;
        } else {
            summary.failures += weight;
        }
        if let Some(t) = &report.margin {
            min_option(&mut summary.min_margin, t);
        }
        if report.status != FaceStatus::Face && summary.first_failure.is_none() {
            summary.first_failure = Some(report);
        }
    };
    match mode {
        SweepMode::Exhaustive => {
            let logical = logical_count(m, k)?;
            if logical > cap {
                return Err(OracleError::CapExceeded { count: logical, cap });
            }
            let canonical = logical / 2;
            sweep(
                canonical,
                |rank| is_face(c, &canonical_subset(m, k, rank)),
                |_, report| absorb(&mut summary, report, 2),
            )?;
        }
        SweepMode::Sample { count, seed } => {
            let mut rng = rng_for(seed, k as u64);
            let subsets: Vec<_> = (0..count).map(|_| random_subset(&mut rng, m, k)).collect();
            sweep(
                count,
                |i| is_face(c, &canonicalize(&subsets[i as usize])),
                |_, report| absorb(&mut summary, report, 1),
            )?;
        }
    }
    Ok(summary)
}

/// Result of the membership LP for one vertex `w` of `E(m, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    /// Largest `t` with `w + X·y ∈ [−½ + t, ½ − t]^m` for some `y`.
    pub margin: ExactScalar,
    /// The optimal `y`.
    pub preimage: Vec<ExactScalar>,
}

/// Solve `max t` subject to `−½ + t ≤ (w + X·y)_i ≤ ½ − t` for all `i`,
/// with `y ∈ R^d` free. `w` has length `m`.
pub fn membership_margin(
    c: &Construction,
    w: &SignedSupportRow,
) -> Result<MembershipReport, OracleError> {
    let d = c.d();
    let m = c.m();
    if w.length() != m {
        return Err(OracleError::SizeOutOfRange { k: w.length(), m });
    }
    let half = ExactScalar::new(1, 2).expect("nonzero");
    let one = ExactScalar::one();
    let dense = w.dense_exact();
    let mut objective = vec![ExactScalar::zero(); d + 1];
    objective[d] = one.clone();
    let mut lp = LinearProgram::with_free_variables(objective);
    for (i, wi) in dense.iter().enumerate() {
        let x = c.representative(i);
        let mut upper: Vec<ExactScalar> = x.to_vec();
        upper.push(one.clone());
        lp.add_constraint(upper, Relation::LessEq, &half - wi)?;
        let mut lower: Vec<ExactScalar> = x.iter().map(|v| -v).collect();
        lower.push(one.clone());
        lp.add_constraint(lower, Relation::LessEq, &half + wi)?;
    }
    match lp_max_via_dual(&lp)? {
        LpOutcome::Optimal(sol) => {
            let margin = sol.primal[d].clone();
            let preimage = sol.primal[..d].to_vec();
            // independent re-check of the cube condition
            let lo = &margin - &half;
            let hi = &half - &margin;
            for (i, wi) in dense.iter().enumerate() {
                let coord = wi + &dot(c.representative(i), &preimage);
                if coord < lo || coord > hi {
                    return Err(OracleError::Resubstitution(format!(
                        "coordinate {i} = {coord} leaves [{lo}, {hi}]"
                    )));
                }
            }
            Ok(MembershipReport { margin, preimage })
        }
        other => Err(OracleError::Lp(LpError::Internal(format!(
            "membership LP is always feasible and bounded, got {other:?}"
        )))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternMargin {
    pub signs: Vec<i8>,
    pub margin: ExactScalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceReport {
    pub subset: Vec<usize>,
    pub dominant: bool,
    /// One entry per sign class `{δ, −δ}`, represented by `δ` with `δ_1 = +1`.
    pub patterns: Vec<PatternMargin>,
    pub min_margin: ExactScalar,
}

fn pattern_row(m: usize, support: &[usize], pattern: u64) -> SignedSupportRow {
    let k = support.len();
    let signs = (0..k)
        .map(|t| {
            if t > 0 && (pattern >> (k - 1 - t)) & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .collect();
    SignedSupportRow::new(m, support.to_vec(), signs)
}

/// `I` is dominant iff some sign pattern on `I` gives membership margin
/// `t ≤ 0`. Patterns `δ` and `−δ` have equal margins, so half are solved.
pub fn is_dominant(c: &Construction, subset: &[usize]) -> Result<DominanceReport, OracleError> {
    if subset.is_empty() {
        return Err(OracleError::EmptySubset);
    }
    if subset.len() > MAX_DOMINANCE_SUBSET {
        return Err(OracleError::TooManyPatterns(subset.len()));
    }
    let mut support = subset.to_vec();
    support.sort_unstable();
    for w in support.windows(2) {
        if w[0] == w[1] {
            return Err(OracleError::DuplicateIndex(w[0]));
        }
    }
    for &i in &support {
        check_index(c, i)?;
    }
    let m = c.m();
    let classes = 1u64 << (support.len() - 1);
    let mut patterns = Vec::with_capacity(classes as usize);
    sweep(
        classes,
        |p| {
            let row = pattern_row(m, &support, p);
            let margin = membership_margin(c, &row)?.margin;
            Ok(PatternMargin {
                signs: row.signs().to_vec(),
                margin,
            })
        },
        |_, pm| patterns.push(pm),
    )?;
    let min_margin = patterns
        .iter()
        .map(|p| &p.margin)
        .min()
        .cloned()
        .expect("at least one pattern");
    Ok(DominanceReport {
        subset: support,
        dominant: !min_margin.is_positive(),
        patterns,
        min_margin,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceSummary {
    pub d: usize,
    pub k: usize,
    pub mode: SweepMode,
    pub subsets: u64,
    pub dominant: u64,
    pub min_margin: Option<ExactScalar>,
    pub first_dominant: Option<Vec<usize>>,
}

impl DominanceSummary {
    pub fn passed(&self) -> bool {
        self.dominant == 0 && self.subsets > 0
    }
}

pub fn dominance_sweep(
    c: &Construction,
    k: usize,
    mode: SweepMode,
) -> Result<DominanceSummary, OracleError> {
    dominance_sweep_with_cap(c, k, mode, DEFAULT_SUBSET_CAP)
}

/// Run [`is_dominant`] over the `k`-subsets of `[m]`.
pub fn dominance_sweep_with_cap(
    c: &Construction,
    k: usize,
    mode: SweepMode,
    cap: u64,
) -> Result<DominanceSummary, OracleError> {
    check_size(c, k)?;
    if k > MAX_DOMINANCE_SUBSET {
        return Err(OracleError::TooManyPatterns(k));
    }
    let m = c.m();
    let subsets: Vec<Vec<usize>> = match mode {
        SweepMode::Exhaustive => {
            let logical = logical_count(m, k)?;
            if logical > cap {
                return Err(OracleError::CapExceeded { count: logical, cap });
            }
            let count = binomial(m, k).ok_or(OracleError::CountOverflow)?;
            (0..count).map(|r| unrank_combination(m, k, r)).collect()
        }
        SweepMode::Sample { count, seed } => {
            let mut rng = rng_for(seed, k as u64);
            (0..count)
                .map(|_| {
                    let mut s = sample_distinct(&mut rng, m, k).into_vec();
                    s.sort_unstable();
                    s
                })
                .collect()
        }
    };
    let mut summary = DominanceSummary {
        d: c.d(),
        k,
        mode,
        subsets: 0,
        dominant: 0,
        min_margin: None,
        first_dominant: None,
    };
    // each subset's patterns are solved sequentially inside one parallel task
    sweep(
        subsets.len() as u64,
        |i| {
            let s = &subsets[i as usize];
            let classes = 1u64 << (k - 1);
            let mut best: Option<ExactScalar> = None;
            for p in 0..classes {
                let t = membership_margin(c, &pattern_row(m, s, p))?.margin;
                min_option(&mut best, &t);
            }
            Ok(best.expect("k >= 1"))
        },
        |i, t| {
            summary.subsets += 1;
            min_option(&mut summary.min_margin, &t);
            if !t.is_positive() {
                summary.dominant += 1;
                if summary.first_dominant.is_none() {
                    summary.first_dominant = Some(subsets[i as usize].clone());
                }
            }
        },
    )?;
    Ok(summary)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainmentSummary {
    pub d: usize,
    pub k: usize,
    pub mode: SweepMode,
    /// Vertices of `E(m, k)` covered, counted before sign-flip canonicalization.
    pub vertices: u64,
    pub lps_solved: u64,
    /// Vertices with a negative margin, counted like `vertices`.
    pub violations: u64,
    pub min_margin: Option<ExactScalar>,
    /// First vertex (in stream order) attaining the minimum.
    pub argmin: Option<SignedSupportRow>,
}

impl ContainmentSummary {
    pub fn holds(&self) -> bool {
        self.min_margin.as_ref().is_some_and(|t| !t.is_negative())
    }

    pub fn strict(&self) -> bool {
        self.min_margin.as_ref().is_some_and(ExactScalar::is_positive)
    }
}

pub fn projection_containment(
    c: &Construction,
    k: usize,
    mode: SweepMode,
) -> Result<ContainmentSummary, OracleError> {
    projection_containment_with_cap(c, k, mode, DEFAULT_SUBSET_CAP)
}

/// Membership margins of the vertices of `E(m, k)`, streamed block by block.
/// Exhaustive mode skips rows whose first sign is `−` and counts their
/// negations; sample mode draws `count` rows from each block.
pub fn projection_containment_with_cap(
    c: &Construction,
    k: usize,
    mode: SweepMode,
    cap: u64,
) -> Result<ContainmentSummary, OracleError> {
    check_size(c, k)?;
    let d = c.d();
    let blocks = all_blocks(d, c.m() - d, k)?;
    if mode == SweepMode::Exhaustive {
        let logical = logical_count(c.m(), k)?;
        if logical > cap {
            return Err(OracleError::CapExceeded { count: logical, cap });
        }
    }
    let mut summary = ContainmentSummary {
        d,
        k,
        mode,
        vertices: 0,
        lps_solved: 0,
        violations: 0,
        min_margin: None,
        argmin: None,
    };
    for block in blocks {
        let (rows, weight): (Vec<SignedSupportRow>, u64) = match mode {
            SweepMode::Exhaustive => (
                block
                    .clone()
                    .map(|r| r.joined())
                    .filter(|r| r.signs().first() == Some(&1))
                    .collect(),
                2,
            ),
            SweepMode::Sample { count, seed } => (
                sample_indices(seed, block.l() as u64, block.row_count(), count)
                    .into_iter()
                    .map(|i| block.row_at(i).joined())
                    .collect(),
                1,
            ),
        };
        sweep(
            rows.len() as u64,
            |i| Ok(membership_margin(c, &rows[i as usize])?.margin),
            |i, t| {
                summary.vertices += weight;
                summary.lps_solved += 1;
                if t.is_negative() {
                    summary.violations += weight;
                }
                if min_option(&mut summary.min_margin, &t) {
                    summary.argmin = Some(rows[i as usize].clone());
                }
            },
        )?;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build;
    use crate::hadamard::sylvester;

    fn construction(e: u32) -> Construction {
        build(&sylvester(e).unwrap()).unwrap()
    }

    #[test]
    fn single_vertex_is_face_at_d4() {
        let c = construction(2);
        let r = is_face(&c, &[SignedVertex::positive(0)]).unwrap();
        assert_eq!(r.status, FaceStatus::Face);
        assert!(r.margin.unwrap().is_positive());
    }

    #[test]
    fn antipodal_pair_rejected() {
        let c = construction(2);
        let r = is_face(&c, &[SignedVertex::positive(0), SignedVertex::negative(0)]).unwrap();
        assert_eq!(r.status, FaceStatus::AntipodalRejected);
    }

    #[test]
    fn subset_preconditions() {
        let c = construction(2);
        assert_eq!(is_face(&c, &[]), Err(OracleError::EmptySubset));
        let five: Vec<_> = (0..5).map(SignedVertex::positive).collect();
        assert!(matches!(is_face(&c, &five), Err(OracleError::SubsetTooLarge { .. })));
        assert!(matches!(
            is_face(&c, &[SignedVertex::positive(8)]),
            Err(OracleError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn unit_vector_and_hadamard_column_span_edge_at_d16() {
        let c = construction(4);
        let r = is_face(&c, &[SignedVertex::positive(0), SignedVertex::positive(16)]).unwrap();
        assert_eq!(r.status, FaceStatus::Face);
    }

    #[test]
    fn canonical_subsets_cover_each_class_once() {
        let (m, k) = (6, 3);
        let total = logical_count(m, k).unwrap() / 2;
        let mut seen = std::collections::HashSet::new();
        for r in 0..total {
            let s = canonical_subset(m, k, r);
            assert!(!s[0].negated);
            assert!(seen.insert(s.clone()));
            let flipped: Vec<_> = s.iter().map(|v| v.antipode()).collect();
            assert!(!seen.contains(&flipped));
        }
        assert_eq!(seen.len() as u64, binomial(6, 3).unwrap() * 4);
    }

    #[test]
    fn d4_vertex_sweep() {
        let c = construction(2);
        let s = verify_k_neighborly(&c, 1, SweepMode::Exhaustive).unwrap();
        assert_eq!((s.subsets, s.faces, s.lps_solved), (16, 16, 8));
        assert!(s.passed());
    }

    #[test]
    fn cap_is_enforced() {
        let c = construction(2);
        assert_eq!(
            verify_k_neighborly_with_cap(&c, 2, SweepMode::Exhaustive, 10),
            Err(OracleError::CapExceeded { count: 112, cap: 10 })
        );
    }

    #[test]
    fn full_index_set_is_dominant() {
        let c = construction(2);
        let all: Vec<usize> = (0..c.m()).collect();
        assert!(is_dominant(&c, &all).unwrap().dominant);
    }

    #[test]
    fn singletons_not_dominant_at_d16() {
        let c = construction(4);
        let r = is_dominant(&c, &[1]).unwrap();
        assert!(!r.dominant);
        assert_eq!(r.patterns.len(), 1);
    }

    #[test]
    fn d4_containment() {
        let c = construction(2);
        let s = projection_containment(&c, 1, SweepMode::Exhaustive).unwrap();
        assert_eq!(s.vertices, 16);
        assert!(s.holds());
        let dom = dominance_sweep(&c, 1, SweepMode::Exhaustive).unwrap();
        assert_eq!(dom.subsets, 8);
        assert!(dom.passed());
    }

    #[test]
    fn sampled_sweeps_are_reproducible() {
        let c = construction(3);
        let mode = SweepMode::Sample { count: 20, seed: 7 };
        let a = verify_k_neighborly(&c, 1, mode).unwrap();
        assert_eq!(a, verify_k_neighborly(&c, 1, mode).unwrap());
        assert_eq!(a.subsets, 20);
    }
}
