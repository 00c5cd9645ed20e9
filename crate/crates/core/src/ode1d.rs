//! One-variable contrast: with a single variable, flat data always admits a
//! flat solution.
//!
//! For `f^(n) + a_{n-1} f^(n-1) + … + a_0 f = g` with zero Cauchy data at
//! the origin, the Taylor coefficients of `f` are determined degree by
//! degree: the degree-`r` coefficient of the right-hand side fixes the
//! degree-`r+n` coefficient of `f`. In particular a zero data jet forces
//! the zero solution jet, which is the exact-arithmetic face of "flat data,
//! flat solution". Nothing comparable holds in two or more variables, where
//! the divergence certificates live.

use crate::error::OdeError;
use crate::jet::Jet;
use crate::multi_index::MultiIndex;
use crate::operator::DiffOperator;
use crate::solver::integrate_last;

/// `f^(n) + a_{n-1} f^(n-1) + … + a_0 f = g` on jets in one variable,
/// solved to `trunc_degree` with zero Cauchy data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OdeProblem {
    order: usize,
    /// `a_0 … a_{n-1}`, each re-truncated to the problem degree.
    coefficients: Vec<Jet>,
    data: Jet,
    trunc_degree: usize,
}

impl OdeProblem {
    /// Validates shapes: `order >= 1`, one coefficient jet per lower-order
    /// term, everything one-dimensional and reliable to `trunc_degree`.
    pub fn new(
        order: usize,
        coefficients: Vec<Jet>,
        data: Jet,
        trunc_degree: usize,
    ) -> Result<Self, OdeError> {
        if order == 0 {
            return Err(OdeError::OrderZero);
        }
        if trunc_degree < order {
            return Err(OdeError::TruncationBelowOrder {
                trunc_degree,
                order,
            });
        }
        if coefficients.len() != order {
            return Err(OdeError::CoefficientCount {
                expected: order,
                found: coefficients.len(),
            });
        }
        let mut slots: Vec<(String, &Jet)> = coefficients
            .iter()
            .enumerate()
            .map(|(j, jet)| (format!("coefficients[{j}]"), jet))
            .collect();
        slots.push(("data".to_owned(), &data));
        for (slot, jet) in &slots {
            if jet.dim() != 1 {
                return Err(OdeError::NotOneDimensional {
                    slot: slot.clone(),
                    found: jet.dim(),
                });
            }
            if jet.trunc_degree() < trunc_degree {
                return Err(OdeError::TruncationTooLow {
                    slot: slot.clone(),
                    expected: trunc_degree,
                    found: jet.trunc_degree(),
                });
            }
        }
        Ok(OdeProblem {
            order,
            coefficients: coefficients
                .iter()
                .map(|jet| jet.with_trunc_degree(trunc_degree))
                .collect(),
            data: data.with_trunc_degree(trunc_degree),
            trunc_degree,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn trunc_degree(&self) -> usize {
        self.trunc_degree
    }

    pub fn data(&self) -> &Jet {
        &self.data
    }

    /// Coefficients of the derivative orders below `order`, lowest first.
    pub fn coefficients(&self) -> &[Jet] {
        &self.coefficients
    }

    /// The problem's left-hand side as a differential operator, leading
    /// coefficient 1.
    pub fn as_operator(&self) -> DiffOperator {
        let mut terms: Vec<(MultiIndex, Jet)> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(j, jet)| (MultiIndex::new(vec![j]), jet.clone()))
            .collect();
        terms.push((
            MultiIndex::new(vec![self.order]),
            Jet::one(1, self.trunc_degree),
        ));
        DiffOperator::new(1, self.order, terms).expect("leading term is nonzero")
    }

    /// The unique jet with zero Cauchy data satisfying the equation through
    /// the truncation degree.
    ///
    /// Fixed-point form of the degree-by-degree recursion: integrate
    /// `g - Σ a_j f^(j)` `order` times exactly. Each pass gains one order of
    /// vanishing in the difference, so the iteration stabilizes after at
    /// most `trunc_degree - order + 2` rounds.
    pub fn solve(&self) -> Jet {
        let cap = self.trunc_degree - self.order + 2;
        let mut current = Jet::new(1, self.trunc_degree);
        for _ in 0..cap {
            let mut rhs = self.data.clone();
            for (j, coeff) in self.coefficients.iter().enumerate() {
                let derived = current
                    .derive(&MultiIndex::new(vec![j]))
                    .expect("derivative order below truncation");
                let term = coeff * &derived;
                rhs = &rhs - &term;
            }
            let next = integrate_last(&rhs, self.order).with_trunc_degree(self.trunc_degree);
            if next == current {
                return next;
            }
            current = next;
        }
        unreachable!("one-variable recursion stabilizes within the iteration cap");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn s(n: i64) -> Scalar {
        Scalar::from_integer(n)
    }

    #[test]
    fn double_integration_of_linear_data() {
        // f'' = x with zero Cauchy data: f = x^3/6
        let problem = OdeProblem::new(
            2,
            vec![Jet::new(1, 8), Jet::new(1, 8)],
            Jet::monomial(1, 8, &[1], s(1)),
            8,
        )
        .unwrap();
        let f = problem.solve();
        assert_eq!(f, Jet::monomial(1, 8, &[3], Scalar::from_ratio(1, 6)));
    }

    #[test]
    fn oscillator_matches_hand_recursion() {
        // f'' + f = 1, zero Cauchy data, degree 4: x^2/2 - x^4/24
        let problem = OdeProblem::new(
            2,
            vec![Jet::one(1, 4), Jet::new(1, 4)],
            Jet::one(1, 4),
            4,
        )
        .unwrap();
        let f = problem.solve();
        let expected = Jet::from_terms(
            1,
            4,
            [
                (MultiIndex::new(vec![2]), Scalar::from_ratio(1, 2)),
                (MultiIndex::new(vec![4]), Scalar::from_ratio(-1, 24)),
            ],
        )
        .unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let x = Jet::monomial(1, 6, &[1], s(3));
        let problem = OdeProblem::new(
            2,
            vec![x, Jet::constant(1, 6, Scalar::i())],
            Jet::new(1, 6),
            6,
        )
        .unwrap();
        assert!(problem.solve().is_zero());
    }

    #[test]
    fn solution_satisfies_equation_through_reliable_degree() {
        let problem = OdeProblem::new(
            2,
            vec![Jet::one(1, 6), Jet::monomial(1, 6, &[1], s(2))],
            Jet::monomial(1, 6, &[2], s(1)),
            6,
        )
        .unwrap();
        let f = problem.solve();
        let op = problem.as_operator();
        let image = op.apply(&f).unwrap();
        assert_eq!(image, problem.data().with_trunc_degree(image.trunc_degree()));
    }

    #[test]
    fn pure_integration_shifts_vanishing_order() {
        // f''' = x^2: order rises from 2 to 5
        let problem = OdeProblem::new(
            3,
            vec![Jet::new(1, 9), Jet::new(1, 9), Jet::new(1, 9)],
            Jet::monomial(1, 9, &[2], s(1)),
            9,
        )
        .unwrap();
        let f = problem.solve();
        assert_eq!(
            f.ord(),
            crate::jet::VanishingOrder::Finite(5)
        );
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        assert_eq!(
            OdeProblem::new(0, vec![], Jet::new(1, 4), 4).unwrap_err(),
            OdeError::OrderZero
        );
        assert_eq!(
            OdeProblem::new(2, vec![Jet::new(1, 4)], Jet::new(1, 4), 4).unwrap_err(),
            OdeError::CoefficientCount {
                expected: 2,
                found: 1
            }
        );
        assert!(matches!(
            OdeProblem::new(
                2,
                vec![Jet::new(2, 4), Jet::new(1, 4)],
                Jet::new(1, 4),
                4
            )
            .unwrap_err(),
            OdeError::NotOneDimensional { .. }
        ));
        assert!(matches!(
            OdeProblem::new(2, vec![Jet::new(1, 3), Jet::new(1, 4)], Jet::new(1, 4), 4)
                .unwrap_err(),
            OdeError::TruncationTooLow { .. }
        ));
        assert_eq!(
            OdeProblem::new(2, vec![Jet::new(1, 4), Jet::new(1, 4)], Jet::new(1, 4), 1)
                .unwrap_err(),
            OdeError::TruncationBelowOrder {
                trunc_degree: 1,
                order: 2
            }
        );
    }
}
