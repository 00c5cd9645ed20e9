//! Randomized algebraic laws for the jet ring. Each property runs a large
//! case count at small dimension and truncation degree, where the whole
//! state space of bookkeeping mistakes (dropped zeros, truncation slips,
//! ordering bugs) is reachable.

use flatjet::linalg;
use flatjet::{Jet, MultiIndex, Scalar};
use proptest::prelude::*;

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5).prop_map(|(a, p, b, q)| {
        Scalar::from_ratio(a, p) + Scalar::from_ratio(b, q) * Scalar::i()
    })
}

/// Sparse jets of the given shape; up to eight stored terms.
fn jet_strategy(dim: usize, trunc: usize) -> impl Strategy<Value = Jet> {
    let term = (
        prop::collection::vec(0..=trunc, dim)
            .prop_filter("within degree budget", move |exps| {
                exps.iter().sum::<usize>() <= trunc
            }),
        scalar_strategy(),
    );
    prop::collection::vec(term, 0..8).prop_map(move |terms| {
        Jet::from_terms(
            dim,
            trunc,
            terms
                .into_iter()
                .map(|(exps, coeff)| (MultiIndex::new(exps), coeff)),
        )
        .expect("strategy keeps terms in budget")
    })
}

/// Jets that are exact polynomials: degree small enough that products of
/// two of them never truncate at degree 8.
fn low_degree_jet_strategy(dim: usize) -> impl Strategy<Value = Jet> {
    jet_strategy(dim, 4).prop_map(|jet| jet.with_trunc_degree(8))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn addition_commutes_and_zero_is_neutral(
        a in jet_strategy(2, 8),
        b in jet_strategy(2, 8),
    ) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a + &Jet::new(2, 8), a.clone());
        prop_assert_eq!(&a - &a, Jet::new(2, 8));
    }

    #[test]
    fn multiplication_commutes(a in jet_strategy(2, 8), b in jet_strategy(2, 8)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn multiplication_associates(
        a in jet_strategy(2, 6),
        b in jet_strategy(2, 6),
        c in jet_strategy(2, 6),
    ) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_distributes_over_addition(
        a in jet_strategy(3, 5),
        b in jet_strategy(3, 5),
        c in jet_strategy(3, 5),
    ) {
        let left = a.mul(&(&b + &c)).unwrap();
        let right = &a.mul(&b).unwrap() + &a.mul(&c).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn one_is_the_multiplicative_identity(a in jet_strategy(2, 8)) {
        prop_assert_eq!(a.mul(&Jet::one(2, 8)).unwrap(), a.clone());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism_on_exact_polynomials(
        a in low_degree_jet_strategy(2),
        b in low_degree_jet_strategy(2),
        px in scalar_strategy(),
        py in scalar_strategy(),
    ) {
        // Degrees <= 4 each, truncation 8: the product is exact, so
        // evaluation must commute with both ring operations.
        let point = [px, py];
        let sum = (&a + &b).eval(&point).unwrap();
        prop_assert_eq!(sum, a.eval(&point).unwrap() + b.eval(&point).unwrap());
        let product = a.mul(&b).unwrap().eval(&point).unwrap();
        prop_assert_eq!(product, a.eval(&point).unwrap() * b.eval(&point).unwrap());
    }

    #[test]
    fn reciprocal_round_trips(a in jet_strategy(2, 8), c in scalar_strategy()) {
        // Force a unit: strip whatever constant the strategy produced and
        // install a nonzero one.
        prop_assume!(!c.is_zero());
        let f = &(&a - &Jet::constant(2, 8, a.constant_term())) + &Jet::constant(2, 8, c);
        let inverse = f.reciprocal().unwrap();
        prop_assert_eq!(f.mul(&inverse).unwrap(), Jet::one(2, 8));
    }

    #[test]
    fn derivatives_commute(a in jet_strategy(3, 8)) {
        let dx = MultiIndex::unit(3, 0);
        let dz = MultiIndex::unit(3, 2);
        let left = a.derive(&dx).unwrap().derive(&dz).unwrap();
        let right = a.derive(&dz).unwrap().derive(&dx).unwrap();
        prop_assert_eq!(&left, &right);
        let combined = a.derive(&MultiIndex::new(vec![1, 0, 1])).unwrap();
        prop_assert_eq!(left, combined);
    }

    #[test]
    fn derivative_is_a_leibniz_map_on_exact_polynomials(
        a in low_degree_jet_strategy(2),
        b in low_degree_jet_strategy(2),
    ) {
        let dx = MultiIndex::unit(2, 0);
        let left = a.mul(&b).unwrap().derive(&dx).unwrap();
        let right = &a.derive(&dx).unwrap().mul(&b).unwrap()
            + &a.mul(&b.derive(&dx).unwrap()).unwrap();
        // Product rule outputs have reliability 7, the truncated product
        // of the derivatives; compare there.
        prop_assert_eq!(left, right.with_trunc_degree(7));
    }

    #[test]
    fn linear_substitution_round_trips(
        a in jet_strategy(2, 8),
        m00 in -5i64..=5, m01 in -5i64..=5, m10 in -5i64..=5, m11 in -5i64..=5,
    ) {
        let matrix = vec![
            vec![Scalar::from_integer(m00), Scalar::from_integer(m01)],
            vec![Scalar::from_integer(m10), Scalar::from_integer(m11)],
        ];
        prop_assume!(!linalg::determinant(&matrix).is_zero());
        let inverse = linalg::invert(&matrix).expect("nonsingular");
        let there = a.substitute_linear(&matrix).unwrap();
        let back = there.substitute_linear(&inverse).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn scaling_matches_repeated_addition(a in jet_strategy(2, 8)) {
        let tripled = a.scale(&Scalar::from_integer(3));
        prop_assert_eq!(tripled, &(&a + &a) + &a);
    }
}
