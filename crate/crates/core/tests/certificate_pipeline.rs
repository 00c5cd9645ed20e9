//! The full counterexample pipeline, end to end: choose boundaries, find
//! the witness point, solve per degree, assemble the series, and certify
//! that the operator annihilates it while its coefficients grow like k!.

use flatjet::{
    build_certificate, build_certificate_with, default_boundary, divergence_table, factorial,
    io, CertificateError, DiffOperator, Jet, MultiIndex, Scalar, SolverConfig, VanishingOrder,
};
use num_traits::ToPrimitive;

fn laplacian(trunc: usize) -> DiffOperator {
    DiffOperator::new(
        2,
        2,
        [
            (MultiIndex::new(vec![2, 0]), Jet::one(2, trunc)),
            (MultiIndex::new(vec![0, 2]), Jet::one(2, trunc)),
        ],
    )
    .unwrap()
}

fn cauchy_riemann(trunc: usize) -> DiffOperator {
    DiffOperator::new(
        2,
        1,
        [
            (MultiIndex::new(vec![1, 0]), Jet::one(2, trunc)),
            (
                MultiIndex::new(vec![0, 1]),
                Jet::constant(2, trunc, Scalar::i()),
            ),
        ],
    )
    .unwrap()
}

fn variable_laplacian(trunc: usize) -> DiffOperator {
    DiffOperator::new(
        2,
        2,
        [
            (MultiIndex::new(vec![2, 0]), Jet::one(2, trunc)),
            (MultiIndex::new(vec![0, 2]), Jet::one(2, trunc)),
            (
                MultiIndex::new(vec![1, 0]),
                Jet::monomial(2, trunc, &[1, 0], Scalar::one()),
            ),
            (MultiIndex::new(vec![0, 0]), Jet::one(2, trunc)),
        ],
    )
    .unwrap()
}

fn assert_sound(op: &DiffOperator, k_max: usize, trunc: usize) {
    let cert = build_certificate(op, k_max, &SolverConfig::new(trunc)).unwrap();
    cert.verify(op).unwrap();
    assert!(cert.residual.is_zero());
    assert_eq!(cert.diagonal.len(), k_max + 1);
    for (k, entry) in cert.diagonal.iter().enumerate() {
        let expected = if k == 0 {
            Scalar::one()
        } else {
            Scalar::from_bigint(factorial(k))
        };
        assert_eq!(entry, &expected, "diagonal slot {k}");
    }
    for (i, u) in cert.solutions.iter().enumerate() {
        assert_eq!(u.ord(), VanishingOrder::Finite(i + 1));
        assert!(op.apply(u).unwrap().is_zero(), "u_{} not annihilated", i + 1);
    }
    assert!(cert.diverges);
}

#[test]
fn laplacian_certificate_is_sound() {
    assert_sound(&laplacian(12), 10, 12);
}

#[test]
fn cauchy_riemann_certificate_is_sound() {
    assert_sound(&cauchy_riemann(12), 10, 12);
}

#[test]
fn variable_coefficient_certificate_is_sound() {
    let op = variable_laplacian(10);
    let cert = build_certificate(&op, 6, &SolverConfig::new(10)).unwrap();
    cert.verify(&op).unwrap();
    assert_eq!(cert.flatness_through_degree, 8);
    assert!(cert.residual.is_zero());
}

#[test]
fn scaling_the_boundaries_leaves_the_certificate_core_unchanged() {
    // The series weights divide out whatever scale the boundaries carry,
    // so the assembled series, residual, and diagonal are bit-for-bit the
    // same; only the per-degree solutions and weights move.
    let op = laplacian(12);
    let cfg = SolverConfig::new(12);
    let seven = Scalar::from_integer(7);
    let plain: Vec<Jet> = (1..=8).map(|k| default_boundary(k, 2)).collect();
    let scaled: Vec<Jet> = plain.iter().map(|p| p.scale(&seven)).collect();

    let base = build_certificate_with(&op, &plain, &cfg).unwrap();
    let other = build_certificate_with(&op, &scaled, &cfg).unwrap();

    assert_eq!(base.series, other.series);
    assert_eq!(base.residual, other.residual);
    assert_eq!(base.diagonal, other.diagonal);
    assert_eq!(base.baire.coords, other.baire.coords);

    // Byte-level comparison of the shared fields after emission.
    let text_a: serde_json::Value =
        serde_json::from_str(&io::certificate_to_json(&base).unwrap()).unwrap();
    let text_b: serde_json::Value =
        serde_json::from_str(&io::certificate_to_json(&other).unwrap()).unwrap();
    for field in ["G", "residual", "diagonal"] {
        assert_eq!(
            serde_json::to_string(&text_a[field]).unwrap(),
            serde_json::to_string(&text_b[field]).unwrap(),
            "field {field} differs"
        );
    }
    // And the parts that must move did move.
    assert_ne!(base.weights, other.weights);
    assert_ne!(base.solutions, other.solutions);
}

#[test]
fn baire_point_is_deterministic_across_runs() {
    let op = laplacian(12);
    let cfg = SolverConfig::new(12);
    let first = build_certificate(&op, 10, &cfg).unwrap();
    let second = build_certificate(&op, 10, &cfg).unwrap();
    assert_eq!(first, second);
    assert_eq!(
        io::certificate_to_json(&first).unwrap(),
        io::certificate_to_json(&second).unwrap()
    );
    // Degrees 1..=10 sum to 55, so the witness grid has denominator 57 and
    // the first all-nonzero point is 1/57.
    assert_eq!(first.baire.coords.len(), 1);
    assert_eq!(first.baire.coords[0].to_string(), "1/57");
}

#[test]
fn witness_point_dodges_boundary_zeros() {
    // x1 - x2 vanishes on the grid diagonal; the scan must step over it.
    let op = DiffOperator::new(
        3,
        2,
        [
            (MultiIndex::new(vec![2, 0, 0]), Jet::one(3, 8)),
            (MultiIndex::new(vec![0, 2, 0]), Jet::one(3, 8)),
            (MultiIndex::new(vec![0, 0, 2]), Jet::one(3, 8)),
        ],
    )
    .unwrap();
    let difference = Jet::from_terms(
        3,
        1,
        [
            (MultiIndex::new(vec![1, 0, 0]), Scalar::one()),
            (MultiIndex::new(vec![0, 1, 0]), -Scalar::one()),
        ],
    )
    .unwrap();
    let boundaries = [difference, default_boundary(2, 3)];
    let cert = build_certificate_with(&op, &boundaries, &SolverConfig::new(8)).unwrap();
    cert.verify(&op).unwrap();
    for witness in &cert.baire.witness_values {
        assert!(!witness.is_zero());
    }
    assert_ne!(cert.baire.coords[0], cert.baire.coords[1]);
}

#[test]
fn divergence_table_grows_super_geometrically() {
    let op = laplacian(12);
    let cert = build_certificate(&op, 10, &SolverConfig::new(12)).unwrap();
    let half = num_rational::BigRational::new(1.into(), 2.into());
    let rows = divergence_table(
        &cert.weights,
        &cert.baire.witness_values,
        std::slice::from_ref(&half),
    )
    .unwrap();
    assert_eq!(rows.len(), 11);
    // Increments are k! / 2^k, which grow once k exceeds 2; partial sums
    // blow past any geometric series in t.
    let mut previous_increment = num_rational::BigRational::new(0.into(), 1.into());
    for window in rows.windows(2) {
        let increment = &window[1].partial_sums[0] - &window[0].partial_sums[0];
        if window[0].k >= 2 {
            assert!(increment > previous_increment, "k = {}", window[1].k);
        }
        previous_increment = increment;
    }
    let last = rows.last().unwrap().partial_sums[0].to_f64().unwrap();
    assert!(last > 3000.0, "partial sum should already be large: {last}");
}

#[test]
fn tampering_is_caught_by_verification() {
    let op = laplacian(10);
    let cert = build_certificate(&op, 4, &SolverConfig::new(10)).unwrap();

    let mut wrong_flag = cert.clone();
    wrong_flag.diverges = false;
    assert!(matches!(
        wrong_flag.verify(&op),
        Err(CertificateError::DivergenceUnmarked)
    ));

    let mut wrong_digest = cert.clone();
    wrong_digest.operator_digest = "0".repeat(64);
    assert!(matches!(
        wrong_digest.verify(&op),
        Err(CertificateError::DigestMismatch { .. })
    ));

    let mut wrong_diagonal = cert.clone();
    wrong_diagonal.diagonal[2] = Scalar::from_integer(3);
    assert!(matches!(
        wrong_diagonal.verify(&op),
        Err(CertificateError::DiagonalMismatch { k: 2, .. })
    ));

    let mut wrong_weight = cert;
    wrong_weight.weights[1] = Scalar::from_integer(5);
    assert!(wrong_weight.verify(&op).is_err());
}

#[test]
fn non_elliptic_operators_are_rejected_up_front() {
    let op = DiffOperator::new(
        2,
        2,
        [
            (MultiIndex::new(vec![1, 1]), Jet::one(2, 8)),
            (MultiIndex::new(vec![0, 2]), Jet::one(2, 8)),
        ],
    )
    .unwrap();
    let err = build_certificate(&op, 3, &SolverConfig::new(8)).unwrap_err();
    assert!(matches!(err, CertificateError::SymbolVanishes { .. }));
}

#[test]
fn degree_budget_is_enforced() {
    let op = laplacian(6);
    let err = build_certificate(&op, 9, &SolverConfig::new(6)).unwrap_err();
    assert!(matches!(err, CertificateError::DegreeBudget { .. }));
}
