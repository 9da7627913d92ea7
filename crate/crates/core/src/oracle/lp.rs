//! Exact linear programs: `maximize c·x` subject to `≤`, `=`, `≥` rows over
//! non-negative or free variables.
//!
//! Every optimum carries a primal point and a dual vector and is re-checked
//! exactly: primal feasibility, dual feasibility, and equal objective values.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::simplex::{solve_standard, SimplexError, StandardForm, StandardOutcome};
use crate::exact::ExactScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("constraint {index} has {got} coefficients, expected {expected}")]
    Dimension {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("optimality witness rejected: {0}")]
    WitnessRejected(String),
    #[error("internal simplex failure: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    LessEq,
    Equal,
    GreaterEq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    NonNegative,
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coefficients: Vec<ExactScalar>,
    pub relation: Relation,
    pub rhs: ExactScalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    domains: Vec<Domain>,
    objective: Vec<ExactScalar>,
    constraints: Vec<Constraint>,
}

/// An optimum with its certificate: `primal` is optimal for the program and
/// `dual` holds one multiplier per constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: ExactScalar,
    pub primal: Vec<ExactScalar>,
    pub dual: Vec<ExactScalar>,
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

fn dot(a: &[ExactScalar], b: &[ExactScalar]) -> ExactScalar {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

impl LinearProgram {
    pub fn new(domains: Vec<Domain>, objective: Vec<ExactScalar>) -> Self {
        assert_eq!(domains.len(), objective.len(), "one objective entry per variable");
        Self {
            domains,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn with_free_variables(objective: Vec<ExactScalar>) -> Self {
        Self::new(vec![Domain::Free; objective.len()], objective)
    }

    pub fn with_nonnegative_variables(objective: Vec<ExactScalar>) -> Self {
        Self::new(vec![Domain::NonNegative; objective.len()], objective)
    }

    pub fn add_constraint(
        &mut self,
        coefficients: Vec<ExactScalar>,
        relation: Relation,
        rhs: ExactScalar,
    ) -> Result<(), LpError> {
        if coefficients.len() != self.num_vars() {
            return Err(LpError::Dimension {
                index: self.constraints.len(),
                expected: self.num_vars(),
                got: coefficients.len(),
            });
        }
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    pub fn objective(&self) -> &[ExactScalar] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// The dual program, written as a maximization: `max −b·y` subject to
    /// `Aᵀy ≥ c` on non-negative primal variables and `Aᵀy = c` on free ones.
    /// Rows with `≥` get multiplier `y = −y'` with `y' ≥ 0`, so every dual
    /// variable maps back to its constraint via [`dual_sign`].
    pub fn dual(&self) -> LinearProgram {
        let domains = self
            .constraints
            .iter()
            .map(|c| match c.relation {
                Relation::Equal => Domain::Free,
                _ => Domain::NonNegative,
            })
            .collect();
        let objective = self
            .constraints
            .iter()
            .map(|c| -&c.rhs * &dual_sign(c.relation))
            .collect();
        let mut dual = LinearProgram::new(domains, objective);
        for (j, (domain, cost)) in self.domains.iter().zip(&self.objective).enumerate() {
            let coefficients = self
                .constraints
                .iter()
                .map(|c| &c.coefficients[j] * &dual_sign(c.relation))
                .collect();
            let relation = match domain {
                Domain::NonNegative => Relation::GreaterEq,
                Domain::Free => Relation::Equal,
            };
            dual.constraints.push(Constraint {
                coefficients,
                relation,
                rhs: cost.clone(),
            });
        }
        dual
    }
}

/// Sign linking a dual variable of [`LinearProgram::dual`] to the multiplier
/// of its primal row.
fn dual_sign(relation: Relation) -> ExactScalar {
    match relation {
        Relation::GreaterEq => -ExactScalar::one(),
        _ => ExactScalar::one(),
    }
}

impl LpSolution {
    /// Exact optimality check against `lp`.
    pub fn verify(&self, lp: &LinearProgram) -> Result<(), LpError> {
        let reject = |msg: String| Err(LpError::WitnessRejected(msg));
        if self.primal.len() != lp.num_vars() || self.dual.len() != lp.constraints.len() {
            return reject("witness length mismatch".into());
        }
        for (j, (x, domain)) in self.primal.iter().zip(&lp.domains).enumerate() {
            if *domain == Domain::NonNegative && x.is_negative() {
                return reject(format!("variable {j} = {x} is negative"));
            }
        }
        for (i, c) in lp.constraints.iter().enumerate() {
            let lhs = dot(&c.coefficients, &self.primal);
            let ok = match c.relation {
                Relation::LessEq => lhs <= c.rhs,
                Relation::Equal => lhs == c.rhs,
                Relation::GreaterEq => lhs >= c.rhs,
            };
            if !ok {
                return reject(format!("constraint {i}: {lhs} vs {}", c.rhs));
            }
            let y = &self.dual[i];
            let sign_ok = match c.relation {
                Relation::LessEq => !y.is_negative(),
                Relation::Equal => true,
                Relation::GreaterEq => !y.is_positive(),
            };
            if !sign_ok {
                return reject(format!("multiplier {i} = {y} has the wrong sign"));
            }
        }
        for (j, domain) in lp.domains.iter().enumerate() {
            let reduced: ExactScalar = lp
                .constraints
                .iter()
                .zip(&self.dual)
                .filter(|(c, y)| !c.coefficients[j].is_zero() && !y.is_zero())
                .map(|(c, y)| &c.coefficients[j] * y)
                .sum::<ExactScalar>()
                - &lp.objective[j];
            let ok = match domain {
                Domain::NonNegative => !reduced.is_negative(),
                Domain::Free => reduced.is_zero(),
            };
            if !ok {
                return reject(format!("dual infeasible at variable {j}: reduced cost {reduced}"));
            }
        }
        let primal_value = dot(&lp.objective, &self.primal);
        let dual_value: ExactScalar = lp
            .constraints
            .iter()
            .zip(&self.dual)
            .map(|(c, y)| &c.rhs * y)
            .sum();
        if primal_value != self.value || dual_value != self.value {
            return reject(format!(
                "objective mismatch: claimed {}, primal {primal_value}, dual {dual_value}",
                self.value
            ));
        }
        Ok(())
    }
}

fn ratio(num: &BigInt, den: &BigInt) -> ExactScalar {
    ExactScalar::from_parts(num.clone(), den.clone()).expect("positive denominator")
}

/// Integer scaling of `values` by the lcm of their denominators.
fn integer_row(values: &[ExactScalar], rhs: &ExactScalar) -> (BigInt, Vec<BigInt>, BigInt) {
    let scale = ExactScalar::common_denominator(values.iter().chain(std::iter::once(rhs)));
    let scaled = |v: &ExactScalar| v.numer() * (&scale / v.denom());
    (scale.clone(), values.iter().map(scaled).collect(), scaled(rhs))
}

/// Solve directly on the primal tableau.
pub fn lp_max(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    let n = lp.num_vars();
    // column layout: one column per non-negative variable, two per free one,
    // then one slack or surplus column per inequality
    let mut var_cols = Vec::with_capacity(n);
    let mut cols = 0usize;
    for d in &lp.domains {
        var_cols.push(cols);
        cols += match d {
            Domain::NonNegative => 1,
            Domain::Free => 2,
        };
    }
    let structural_vars = cols;
    cols += lp
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Equal)
        .count();

    let rows = lp.constraints.len();
    let mut a = vec![BigInt::zero(); rows * cols];
    let mut b = Vec::with_capacity(rows);
    let mut row_factor = Vec::with_capacity(rows);
    let mut slack = structural_vars;
    for (i, c) in lp.constraints.iter().enumerate() {
        let (scale, coeffs, mut rhs) = integer_row(&c.coefficients, &c.rhs);
        let flip = rhs.is_negative();
        let sign = if flip { -BigInt::one() } else { BigInt::one() };
        for (j, v) in coeffs.iter().enumerate() {
            let v = v * &sign;
            let col = var_cols[j];
            if lp.domains[j] == Domain::Free {
                a[i * cols + col + 1] = -&v;
            }
            a[i * cols + col] = v;
        }
        match c.relation {
            Relation::LessEq => a[i * cols + slack] = &scale * &sign,
            Relation::GreaterEq => a[i * cols + slack] = -&scale * &sign,
            Relation::Equal => {}
        }
        if c.relation != Relation::Equal {
            slack += 1;
        }
        if flip {
            rhs = -rhs;
        }
        b.push(rhs);
        row_factor.push(scale * sign);
    }
    let obj_scale = ExactScalar::common_denominator(&lp.objective);
    let mut c = vec![BigInt::zero(); cols];
    for (j, v) in lp.objective.iter().enumerate() {
        let v = v.numer() * (&obj_scale / v.denom());
        let col = var_cols[j];
        if lp.domains[j] == Domain::Free {
            c[col + 1] = -&v;
        }
        c[col] = v;
    }
    let sf = StandardForm {
        rows,
        cols,
        a,
        b,
        c,
    };
    let outcome = solve_standard(&sf).map_err(|e| match e {
        SimplexError::Inexact => LpError::Internal("inexact fraction-free division".into()),
        SimplexError::Overflow => LpError::Internal("overflow on arbitrary-precision path".into()),
    })?;
    let solution = match outcome {
        StandardOutcome::Infeasible => return Ok(LpOutcome::Infeasible),
        StandardOutcome::Unbounded => return Ok(LpOutcome::Unbounded),
        StandardOutcome::Optimal {
            x,
            y,
            value,
            det,
            pivots,
        } => {
            let primal = lp
                .domains
                .iter()
                .zip(&var_cols)
                .map(|(d, &col)| match d {
                    Domain::NonNegative => ratio(&x[col], &det),
                    Domain::Free => ratio(&(&x[col] - &x[col + 1]), &det),
                })
                .collect();
            let dual_den = &det * &obj_scale;
            let dual = y
                .iter()
                .zip(&row_factor)
                .map(|(yi, f)| ratio(&(yi * f), &dual_den))
                .collect();
            LpSolution {
                value: ratio(&value, &dual_den),
                primal,
                dual,
                pivots,
            }
        }
    };
    solution.verify(lp)?;
    Ok(LpOutcome::Optimal(solution))
}

/// Solve `lp` by running the simplex on its dual and reading the primal
/// point off the dual's multipliers. Cheaper than [`lp_max`] when the
/// program has few variables and many inequality rows. The returned
/// solution is verified against `lp` itself.
pub fn lp_max_via_dual(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    let dual = lp.dual();
    match lp_max(&dual)? {
        // dual unbounded: primal infeasible
        LpOutcome::Unbounded => Ok(LpOutcome::Infeasible),
        // dual infeasible: primal unbounded or infeasible; settle it directly
        LpOutcome::Infeasible => lp_max(lp),
        LpOutcome::Optimal(ds) => {
            // the dual's own multipliers π satisfy A(−π) ≤ b with −π in the
            // primal domains
            let primal: Vec<ExactScalar> = ds.dual.iter().map(|p| -p).collect();
            let multipliers = ds
                .primal
                .iter()
                .zip(&lp.constraints)
                .map(|(y, c)| y * &dual_sign(c.relation))
                .collect();
            let solution = LpSolution {
                value: -&ds.value,
                primal,
                dual: multipliers,
                pivots: ds.pivots,
            };
            solution.verify(lp)?;
            Ok(LpOutcome::Optimal(solution))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::simplex::solve_standard_big;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::new(n, d).unwrap()
    }

    fn int(v: i64) -> ExactScalar {
        ExactScalar::from(v)
    }

    fn one_var(domain: Domain) -> LinearProgram {
        LinearProgram::new(vec![domain], vec![int(1)])
    }

    #[test]
    fn bounded_by_three() {
        for domain in [Domain::Free, Domain::NonNegative] {
            let mut lp = one_var(domain);
            lp.add_constraint(vec![int(1)], Relation::LessEq, int(3)).unwrap();
            let s = lp_max(&lp).unwrap();
            assert_eq!(s.optimal().unwrap().value, int(3));
            assert_eq!(lp_max_via_dual(&lp).unwrap().optimal().unwrap().value, int(3));
        }
    }

    #[test]
    fn exact_third() {
        let mut lp = one_var(Domain::Free);
        lp.add_constraint(vec![int(1)], Relation::LessEq, q(1, 3)).unwrap();
        lp.add_constraint(vec![int(1)], Relation::LessEq, q(1, 2)).unwrap();
        let s = lp_max(&lp).unwrap();
        let s = s.optimal().unwrap();
        assert_eq!(s.value, q(1, 3));
        assert_eq!(s.primal, vec![q(1, 3)]);
        assert_eq!(s.dual, vec![int(1), int(0)]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = one_var(Domain::Free);
        lp.add_constraint(vec![int(1)], Relation::LessEq, int(0)).unwrap();
        lp.add_constraint(vec![int(1)], Relation::GreaterEq, int(1)).unwrap();
        assert_eq!(lp_max(&lp).unwrap(), LpOutcome::Infeasible);
        assert_eq!(lp_max_via_dual(&lp).unwrap(), LpOutcome::Infeasible);

        let mut lp = one_var(Domain::NonNegative);
        lp.add_constraint(vec![int(-1)], Relation::LessEq, int(5)).unwrap();
        assert_eq!(lp_max(&lp).unwrap(), LpOutcome::Unbounded);
        assert_eq!(lp_max_via_dual(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn dimension_checked() {
        let mut lp = one_var(Domain::Free);
        assert!(matches!(
            lp.add_constraint(vec![int(1), int(2)], Relation::Equal, int(0)),
            Err(LpError::Dimension { .. })
        ));
    }

    #[test]
    fn equality_and_redundant_rows() {
        // x + y = 2 twice (redundant), max x with y >= 1/2
        let mut lp = LinearProgram::with_nonnegative_variables(vec![int(1), int(0)]);
        lp.add_constraint(vec![int(1), int(1)], Relation::Equal, int(2)).unwrap();
        lp.add_constraint(vec![int(2), int(2)], Relation::Equal, int(4)).unwrap();
        lp.add_constraint(vec![int(0), int(1)], Relation::GreaterEq, q(1, 2)).unwrap();
        let s = lp_max(&lp).unwrap();
        assert_eq!(s.optimal().unwrap().value, q(3, 2));
        let v = lp_max_via_dual(&lp).unwrap();
        assert_eq!(v.optimal().unwrap().value, q(3, 2));
    }

    #[test]
    fn rejects_tampered_witness() {
        let mut lp = one_var(Domain::Free);
        lp.add_constraint(vec![int(1)], Relation::LessEq, int(3)).unwrap();
        let mut s = lp_max(&lp).unwrap().optimal().unwrap().clone();
        assert!(s.verify(&lp).is_ok());
        s.primal[0] = int(4);
        assert!(matches!(s.verify(&lp), Err(LpError::WitnessRejected(_))));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the textbook largest-coefficient rule
        let mut lp = LinearProgram::with_nonnegative_variables(vec![q(3, 4), int(-150), q(1, 50), int(-6)]);
        lp.add_constraint(vec![q(1, 4), int(-60), q(-1, 25), int(9)], Relation::LessEq, int(0)).unwrap();
        lp.add_constraint(vec![q(1, 2), int(-90), q(-1, 50), int(3)], Relation::LessEq, int(0)).unwrap();
        lp.add_constraint(vec![int(0), int(0), int(1), int(0)], Relation::LessEq, int(1)).unwrap();
        let s = lp_max(&lp).unwrap();
        assert_eq!(s.optimal().unwrap().value, q(1, 20));
    }

    #[test]
    fn wide_integers_fall_back_to_bigint() {
        let big = ExactScalar::from_bigint(BigInt::from(10).pow(40));
        let mut lp = LinearProgram::with_free_variables(vec![int(1), int(1)]);
        lp.add_constraint(vec![big.clone(), int(1)], Relation::LessEq, big.clone()).unwrap();
        lp.add_constraint(vec![int(1), big.clone()], Relation::LessEq, big.clone()).unwrap();
        let s = lp_max(&lp).unwrap();
        let s = s.optimal().unwrap();
        let expected = &(&big + &big) / &(&big + &int(1));
        assert_eq!(s.value, expected);
    }

    fn small() -> impl Strategy<Value = ExactScalar> {
        (-4i64..5, 1i64..4).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn primal_and_dual_routes_agree(
            obj in proptest::collection::vec(small(), 3),
            rows in proptest::collection::vec((proptest::collection::vec(small(), 3), small(), 0u8..3), 1..6),
            free in proptest::collection::vec(any::<bool>(), 3),
        ) {
            let domains = free.iter().map(|&f| if f { Domain::Free } else { Domain::NonNegative }).collect();
            let mut lp = LinearProgram::new(domains, obj);
            for (coeffs, rhs, rel) in rows {
                let relation = [Relation::LessEq, Relation::Equal, Relation::GreaterEq][rel as usize];
                lp.add_constraint(coeffs, relation, rhs).unwrap();
            }
            // box the variables so that both routes usually reach an optimum
            for j in 0..3 {
                let mut e = vec![int(0); 3];
                e[j] = int(1);
                lp.add_constraint(e.clone(), Relation::LessEq, int(7)).unwrap();
                lp.add_constraint(e, Relation::GreaterEq, int(-7)).unwrap();
            }
            let direct = lp_max(&lp).unwrap();
            let via_dual = lp_max_via_dual(&lp).unwrap();
            match (&direct, &via_dual) {
                (LpOutcome::Optimal(a), LpOutcome::Optimal(b)) => {
                    prop_assert_eq!(&a.value, &b.value);
                    prop_assert!(a.verify(&lp).is_ok());
                    prop_assert!(b.verify(&lp).is_ok());
                }
                (a, b) => prop_assert_eq!(a, b),
            }
        }

        #[test]
        fn fixed_width_and_bigint_tableaux_agree(
            a in proptest::collection::vec(-5i64..6, 8),
            b in proptest::collection::vec(0i64..6, 2),
            c in proptest::collection::vec(-5i64..6, 4),
        ) {
            let sf = StandardForm {
                rows: 2,
                cols: 4,
                a: a.iter().map(|&v| BigInt::from(v)).collect(),
                b: b.iter().map(|&v| BigInt::from(v)).collect(),
                c: c.iter().map(|&v| BigInt::from(v)).collect(),
            };
            let fast = solve_standard(&sf).unwrap();
            let slow = solve_standard_big(&sf).unwrap();
            prop_assert_eq!(format!("{fast:?}"), format!("{slow:?}"));
        }
    }
}
