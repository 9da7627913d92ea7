use neighborly_core::construction::SignedVertex;
use neighborly_core::hadamard::sylvester;
use neighborly_core::oracle::lp::{lp_max, LinearProgram, LpOutcome, Relation};
use neighborly_core::oracle::{is_face, FaceStatus};
use neighborly_core::{build, Construction, ExactScalar};
use proptest::prelude::*;
use std::sync::OnceLock;

fn d16() -> &'static Construction {
    static C: OnceLock<Construction> = OnceLock::new();
    C.get_or_init(|| build(&sylvester(4).unwrap()).unwrap())
}

fn subset() -> impl Strategy<Value = Vec<SignedVertex>> {
    proptest::collection::vec((0usize..32, any::<bool>()), 1..5).prop_map(|v| {
        let mut out: Vec<SignedVertex> = v
            .into_iter()
            .map(|(index, negated)| SignedVertex { index, negated })
            .collect();
        out.sort();
        out.dedup();
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn face_status_invariant_under_negation(s in subset()) {
        let c = d16();
        let neg: Vec<SignedVertex> = s.iter().map(|v| v.antipode()).collect();
        let a = is_face(c, &s).unwrap();
        let b = is_face(c, &neg).unwrap();
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(&a.margin, &b.margin);
        // zero-residual re-substitution of both witnesses
        prop_assert!(a.verify(c).is_ok());
        prop_assert!(b.verify(c).is_ok());
        if s.len() <= 2 && a.status != FaceStatus::AntipodalRejected {
            prop_assert_eq!(a.status, FaceStatus::Face);
        }
    }
}

fn q(n: i64, d: i64) -> ExactScalar {
    ExactScalar::new(n, d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lp_witnesses_have_zero_residual(
        rows in proptest::collection::vec((proptest::collection::vec((-5i64..6, 1i64..5), 4), 0i64..9), 1..7),
        obj in proptest::collection::vec(-3i64..4, 4),
    ) {
        let mut lp = LinearProgram::with_nonnegative_variables(obj.iter().map(|&v| v.into()).collect());
        for (coeffs, rhs) in &rows {
            lp.add_constraint(coeffs.iter().map(|&(n, d)| q(n, d)).collect(), Relation::LessEq, (*rhs).into()).unwrap();
        }
        if let LpOutcome::Optimal(sol) = lp_max(&lp).unwrap() {
            for c in lp.constraints() {
                let lhs: ExactScalar = c.coefficients.iter().zip(&sol.primal).map(|(a, x)| a * x).sum();
                prop_assert!(lhs <= c.rhs);
            }
            let value: ExactScalar = lp.objective().iter().zip(&sol.primal).map(|(a, x)| a * x).sum();
            prop_assert_eq!(value, sol.value);
        }
    }
}
