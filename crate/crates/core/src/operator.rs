//! Linear differential operators with jet coefficients.
//!
//! An operator is a finite sum of coefficient jets times partial-derivative
//! monomials, total derivative order bounded by `order`. Invariants:
//! - every derivative index has length `dim` and degree <= `order`
//! - at least one index of degree exactly `order` carries a nonzero jet
//! - all coefficient jets share `dim` and `trunc_degree`
//!
//! The canonical form isolates the pure last-variable derivative of top
//! order: dividing by its coefficient rewrites the operator as that
//! derivative minus a remainder whose indices all have last-variable
//! exponent below the order. This is the shape the boundary recursion
//! inverts, and it exists exactly when the leading last-variable coefficient
//! is nonzero at the origin.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use crate::error::OperatorError;
use crate::jet::Jet;
use crate::multi_index::MultiIndex;
use crate::scalar::Scalar;

/// `Σ a_α D^α` with jet coefficients `a_α`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOperator {
    dim: usize,
    order: usize,
    trunc_degree: usize,
    terms: BTreeMap<MultiIndex, Jet>,
}

impl DiffOperator {
    /// Validates and normalizes the term map; zero coefficient jets are
    /// dropped, and the stated order must be witnessed by a surviving term.
    pub fn new<I>(dim: usize, order: usize, terms: I) -> Result<Self, OperatorError>
    where
        I: IntoIterator<Item = (MultiIndex, Jet)>,
    {
        let mut map = BTreeMap::new();
        let mut trunc_degree: Option<usize> = None;
        for (alpha, coeff) in terms {
            if alpha.dim() != dim {
                return Err(OperatorError::AlphaLength {
                    alpha: alpha.to_string(),
                    expected: dim,
                    found: alpha.dim(),
                });
            }
            if alpha.degree() > order {
                return Err(OperatorError::OrderExceeded {
                    alpha: alpha.to_string(),
                    degree: alpha.degree(),
                    order,
                });
            }
            if coeff.dim() != dim {
                return Err(OperatorError::CoefficientDimension {
                    alpha: alpha.to_string(),
                    expected: dim,
                    found: coeff.dim(),
                });
            }
            match trunc_degree {
                None => trunc_degree = Some(coeff.trunc_degree()),
                Some(expected) if coeff.trunc_degree() != expected => {
                    return Err(OperatorError::CoefficientTruncation {
                        alpha: alpha.to_string(),
                        expected,
                        found: coeff.trunc_degree(),
                    });
                }
                Some(_) => {}
            }
            if !coeff.is_zero() {
                map.insert(alpha, coeff);
            }
        }
        let Some(trunc_degree) = trunc_degree else {
            return Err(OperatorError::Empty);
        };
        if !map.keys().any(|alpha| alpha.degree() == order) {
            return Err(OperatorError::OrderNotWitnessed { order });
        }
        Ok(DiffOperator {
            dim,
            order,
            trunc_degree,
            terms: map,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn trunc_degree(&self) -> usize {
        self.trunc_degree
    }

    /// Terms in graded-lex order of the derivative index.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Jet)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&Jet> {
        self.terms.get(alpha)
    }

    /// Applies the operator; the result is reliable to
    /// `min(coefficient truncation, f.trunc_degree - order)`.
    pub fn apply(&self, f: &Jet) -> Result<Jet, OperatorError> {
        if f.dim() != self.dim {
            return Err(OperatorError::ArgumentDimension {
                expected: self.dim,
                found: f.dim(),
            });
        }
        if f.trunc_degree() < self.order {
            return Err(OperatorError::ArgumentReliability {
                available: f.trunc_degree(),
                order: self.order,
            });
        }
        let mut pieces = Vec::with_capacity(self.terms.len());
        for (alpha, coeff) in &self.terms {
            let derived = f
                .derive(alpha)
                .expect("derivative order bounded by checked reliability");
            pieces.push(coeff * &derived);
        }
        // a term of full order always exists, so the combination lands at
        // min(coeff trunc, f trunc - order) even when pieces vanish
        let floor = self.trunc_degree.min(f.trunc_degree() - self.order);
        let refs: Vec<(Scalar, &Jet)> = pieces.iter().map(|jet| (Scalar::one(), jet)).collect();
        let sum = Jet::linear_combination(&refs).expect("aligned dimensions");
        Ok(sum.with_trunc_degree(floor.min(sum.trunc_degree())))
    }

    /// Principal symbol at the origin: `Σ_{|α| = order} a_α(0) ξ^α`.
    pub fn symbol_at_origin(&self, direction: &[BigRational]) -> Scalar {
        assert_eq!(direction.len(), self.dim, "direction length != dim");
        let point: Vec<Scalar> = direction.iter().map(|t| Scalar::real(t.clone())).collect();
        let mut total = Scalar::zero();
        for (alpha, coeff) in &self.terms {
            if alpha.degree() != self.order {
                continue;
            }
            let mut term = coeff.constant_term();
            for (axis, xi) in point.iter().enumerate() {
                let exp = alpha.exponent(axis);
                if exp > 0 {
                    term = &term * &xi.pow(exp);
                }
            }
            total += &term;
        }
        total
    }

    /// Samples the principal symbol at the origin over a deterministic set
    /// of rational unit directions. A zero value disproves ellipticity; a
    /// clean pass is evidence, not proof, as the report's flag records.
    pub fn ellipticity_check(&self, samples_per_axis: usize) -> EllipticityReport {
        assert!(samples_per_axis >= 2, "need at least 2 samples per axis");
        let directions = rational_sphere_points(self.dim, samples_per_axis);
        let mut symbol_values = Vec::with_capacity(directions.len());
        let mut verdict = EllipticityVerdict::Passed;
        for direction in &directions {
            let value = self.symbol_at_origin(direction);
            if value.is_zero() {
                if let EllipticityVerdict::Passed = verdict {
                    verdict = EllipticityVerdict::Failed {
                        direction: direction.clone(),
                    };
                }
            }
            symbol_values.push(value);
        }
        EllipticityReport {
            directions,
            symbol_values,
            verdict,
            sampled_only: true,
        }
    }

    /// Rewrites the operator as the pure top-order last-variable derivative
    /// minus a remainder, after dividing by the leading coefficient.
    pub fn canonical_form(&self) -> Result<CanonicalOperator, OperatorError> {
        if self.order == 0 {
            return Err(OperatorError::OrderZero);
        }
        let beta = MultiIndex::axis_power(self.dim, self.dim - 1, self.order);
        let leading = self
            .terms
            .get(&beta)
            .ok_or(OperatorError::NotInEllipticPosition)?;
        if leading.constant_term().is_zero() {
            return Err(OperatorError::NotInEllipticPosition);
        }
        let leading_inv = leading
            .reciprocal()
            .expect("nonzero constant term checked above");
        let mut remainder = BTreeMap::new();
        for (alpha, coeff) in &self.terms {
            if *alpha == beta {
                continue;
            }
            // |α| <= order and α ≠ β force last exponent < order
            debug_assert!(alpha.exponent(self.dim - 1) < self.order);
            let rewritten = -&(coeff * &leading_inv);
            if !rewritten.is_zero() {
                remainder.insert(alpha.clone(), rewritten);
            }
        }
        Ok(CanonicalOperator {
            dim: self.dim,
            order: self.order,
            trunc_degree: self.trunc_degree,
            remainder,
        })
    }
}

/// The rewritten form `D^β - Σ a_α D^α` with `β` the pure last-variable
/// index of top order and every remainder index below it in that variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalOperator {
    dim: usize,
    order: usize,
    trunc_degree: usize,
    remainder: BTreeMap<MultiIndex, Jet>,
}

impl CanonicalOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn trunc_degree(&self) -> usize {
        self.trunc_degree
    }

    pub fn beta(&self) -> MultiIndex {
        MultiIndex::axis_power(self.dim, self.dim - 1, self.order)
    }

    pub fn remainder(&self) -> impl Iterator<Item = (&MultiIndex, &Jet)> {
        self.remainder.iter()
    }

    /// The remainder sum `Σ a_α D^α f` alone, without the `D^β` part.
    pub fn apply_remainder(&self, f: &Jet) -> Result<Jet, OperatorError> {
        if f.dim() != self.dim {
            return Err(OperatorError::ArgumentDimension {
                expected: self.dim,
                found: f.dim(),
            });
        }
        if f.trunc_degree() < self.order {
            return Err(OperatorError::ArgumentReliability {
                available: f.trunc_degree(),
                order: self.order,
            });
        }
        let floor = self.trunc_degree.min(f.trunc_degree() - self.order);
        let mut acc = Jet::new(self.dim, floor);
        for (alpha, coeff) in &self.remainder {
            let derived = f
                .derive(alpha)
                .expect("derivative order bounded by checked reliability");
            let piece = coeff * &derived;
            acc = &acc + &piece;
        }
        Ok(acc)
    }

    /// Full application `D^β f - Σ a_α D^α f`.
    pub fn apply(&self, f: &Jet) -> Result<Jet, OperatorError> {
        let remainder = self.apply_remainder(f)?;
        let lead = f
            .derive(&self.beta())
            .expect("derivative order bounded by checked reliability");
        Ok(&lead - &remainder)
    }
}

/// Outcome of sampling the principal symbol on rational sphere directions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EllipticityReport {
    pub directions: Vec<Vec<BigRational>>,
    pub symbol_values: Vec<Scalar>,
    pub verdict: EllipticityVerdict,
    /// Always true: a finite sample at the origin can refute but not prove.
    pub sampled_only: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EllipticityVerdict {
    Passed,
    Failed { direction: Vec<BigRational> },
}

impl EllipticityReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, EllipticityVerdict::Passed)
    }
}

pub fn format_direction(direction: &[BigRational]) -> String {
    let parts: Vec<String> = direction.iter().map(|t| t.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Deterministic rational points on the unit sphere via the stereographic
/// parametrization: with parameter vector t over a grid of rationals,
/// `ξ_1 = (1-|t|^2)/(1+|t|^2)` and `ξ_{j+1} = 2 t_j/(1+|t|^2)`.
///
/// Antipodal gaps are harmless: a homogeneous symbol vanishes at ξ iff it
/// vanishes at -ξ.
fn rational_sphere_points(dim: usize, samples_per_axis: usize) -> Vec<Vec<BigRational>> {
    if dim == 1 {
        return vec![
            vec![BigRational::one()],
            vec![-BigRational::one()],
        ];
    }
    let s = samples_per_axis as i64;
    let axis_values: Vec<BigRational> = (-s..=s)
        .map(|l| BigRational::new(l.into(), s.into()))
        .collect();
    let mut points = Vec::new();
    let mut counters = vec![0usize; dim - 1];
    loop {
        let t: Vec<&BigRational> = counters.iter().map(|&c| &axis_values[c]).collect();
        let norm_sq: BigRational = t.iter().map(|v| *v * *v).sum();
        let denom = BigRational::one() + &norm_sq;
        let mut xi = Vec::with_capacity(dim);
        xi.push((BigRational::one() - &norm_sq) / &denom);
        for v in &t {
            let two = BigRational::from_integer(2.into());
            xi.push(two * *v / &denom);
        }
        points.push(xi);
        // odometer over the parameter grid
        let mut axis = 0;
        loop {
            if axis == dim - 1 {
                return points;
            }
            counters[axis] += 1;
            if counters[axis] < axis_values.len() {
                break;
            }
            counters[axis] = 0;
            axis += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_integer(n)
    }

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

    #[test]
    fn laplacian_kills_harmonic_quadratic() {
        let f = Jet::from_terms(
            2,
            4,
            [
                (MultiIndex::new(vec![2, 0]), s(1)),
                (MultiIndex::new(vec![0, 2]), s(-1)),
            ],
        )
        .unwrap();
        let image = laplacian(8).apply(&f).unwrap();
        assert!(image.is_zero());
        assert_eq!(image.trunc_degree(), 2);
    }

    #[test]
    fn laplacian_of_square_is_two() {
        let f = Jet::monomial(2, 4, &[2, 0], s(1));
        assert_eq!(
            laplacian(8).apply(&f).unwrap(),
            Jet::constant(2, 2, s(2))
        );
    }

    #[test]
    fn cauchy_riemann_kills_linear_holomorphic() {
        let f = Jet::from_terms(
            2,
            3,
            [
                (MultiIndex::new(vec![1, 0]), s(1)),
                (MultiIndex::new(vec![0, 1]), Scalar::i()),
            ],
        )
        .unwrap();
        assert!(cauchy_riemann(8).apply(&f).unwrap().is_zero());
    }

    #[test]
    fn canonical_form_of_laplacian_negates_first_axis_block() {
        let canon = laplacian(8).canonical_form().unwrap();
        assert_eq!(canon.beta(), MultiIndex::new(vec![0, 2]));
        let remainder: Vec<_> = canon.remainder().collect();
        assert_eq!(remainder.len(), 1);
        assert_eq!(remainder[0].0, &MultiIndex::new(vec![2, 0]));
        assert_eq!(remainder[0].1, &Jet::constant(2, 8, s(-1)));
    }

    #[test]
    fn canonical_form_of_cauchy_riemann_divides_by_i() {
        let canon = cauchy_riemann(8).canonical_form().unwrap();
        assert_eq!(canon.beta(), MultiIndex::new(vec![0, 1]));
        let remainder: Vec<_> = canon.remainder().collect();
        assert_eq!(remainder.len(), 1);
        // -(1)/(i) = i
        assert_eq!(remainder[0].1, &Jet::constant(2, 8, Scalar::i()));
    }

    #[test]
    fn pure_last_derivative_is_already_canonical() {
        let op = DiffOperator::new(
            2,
            3,
            [(MultiIndex::new(vec![0, 3]), Jet::one(2, 6))],
        )
        .unwrap();
        let canon = op.canonical_form().unwrap();
        assert_eq!(canon.remainder().count(), 0);
        let f = Jet::monomial(2, 6, &[0, 3], s(1));
        assert_eq!(canon.apply(&f).unwrap(), Jet::constant(2, 3, s(6)));
    }

    #[test]
    fn canonical_form_requires_leading_coefficient_at_origin() {
        // x1 ∂y^2 + ∂x^2 vanishes at the origin in the leading slot
        let x1 = Jet::monomial(2, 8, &[1, 0], s(1));
        let op = DiffOperator::new(
            2,
            2,
            [
                (MultiIndex::new(vec![0, 2]), x1),
                (MultiIndex::new(vec![2, 0]), Jet::one(2, 8)),
            ],
        )
        .unwrap();
        assert_eq!(
            op.canonical_form().unwrap_err(),
            OperatorError::NotInEllipticPosition
        );
    }

    #[test]
    fn ellipticity_verdicts_match_symbols() {
        assert!(laplacian(8).ellipticity_check(4).passed());
        assert!(cauchy_riemann(8).ellipticity_check(4).passed());
        let mixed = DiffOperator::new(
            2,
            2,
            [(MultiIndex::new(vec![1, 1]), Jet::one(2, 8))],
        )
        .unwrap();
        let report = mixed.ellipticity_check(4);
        assert!(!report.passed());
        match &report.verdict {
            EllipticityVerdict::Failed { direction } => {
                let value = mixed.symbol_at_origin(direction);
                assert!(value.is_zero());
            }
            EllipticityVerdict::Passed => panic!("expected a zero direction"),
        }
    }

    #[test]
    fn construction_rejects_malformed_terms() {
        let too_long = DiffOperator::new(
            2,
            2,
            [(MultiIndex::new(vec![1, 0, 0]), Jet::one(2, 4))],
        );
        assert!(matches!(too_long, Err(OperatorError::AlphaLength { .. })));

        let unwitnessed = DiffOperator::new(
            2,
            2,
            [(MultiIndex::new(vec![1, 0]), Jet::one(2, 4))],
        );
        assert!(matches!(
            unwitnessed,
            Err(OperatorError::OrderNotWitnessed { .. })
        ));

        let mixed_trunc = DiffOperator::new(
            2,
            2,
            [
                (MultiIndex::new(vec![2, 0]), Jet::one(2, 4)),
                (MultiIndex::new(vec![0, 2]), Jet::one(2, 5)),
            ],
        );
        assert!(matches!(
            mixed_trunc,
            Err(OperatorError::CoefficientTruncation { .. })
        ));
    }

    #[test]
    fn apply_requires_enough_reliability() {
        let f = Jet::monomial(2, 1, &[1, 0], s(1));
        assert!(matches!(
            laplacian(8).apply(&f),
            Err(OperatorError::ArgumentReliability { .. })
        ));
    }
}
