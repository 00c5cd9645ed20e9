//! Divergence certificates for flat right-hand sides.
//!
//! The pipeline: pick homogeneous boundary polynomials `p_1 … p_K` in the
//! first `n-1` variables, solve `L u_k = 0` with `u_k = p_k` on the
//! hyperplane, pick a rational point where every `p_k` is nonzero, weight by
//! `b_k = k!/p_k(x̄)`, and assemble the series `Σ b_k u_k`. The certificate
//! then records two exact facts:
//! - applying `L` to the assembled series gives the zero jet through the
//!   reliable degree (the image is flat as far as truncation can see), and
//! - the diagonal values `b_k · p_k(x̄)` equal `k!`, so along the ray
//!   `t · x̄` the series has the lower bound `Σ k! |t|^k` and diverges for
//!   every `t ≠ 0`.
//!
//! Together these witness that the series solves nothing smooth: any smooth
//! function with a flat image under `L` would need this divergent series as
//! its Taylor expansion.

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::error::CertificateError;
use crate::io;
use crate::jet::{Jet, VanishingOrder};
use crate::multi_index::MultiIndex;
use crate::operator::{format_direction, DiffOperator};
use crate::scalar::{factorial, Scalar};
use crate::solver::{solve_boundary_problem, SolverConfig};

/// Default number of sphere samples per axis for the ellipticity screen.
const ELLIPTICITY_SAMPLES: usize = 8;

/// A rational point in the open unit cube of the first `n-1` variables
/// where every boundary polynomial takes a nonzero value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BairePoint {
    pub coords: Vec<BigRational>,
    /// `p_k` evaluated at the point, in order `k = 1 …`.
    pub witness_values: Vec<Scalar>,
}

impl BairePoint {
    /// The point padded with a zero last coordinate, ready for evaluation
    /// against full-dimension jets.
    pub fn embedded(&self, dim: usize) -> Vec<Scalar> {
        assert_eq!(self.coords.len() + 1, dim, "point does not fit dimension");
        let mut point: Vec<Scalar> = self
            .coords
            .iter()
            .map(|c| Scalar::real(c.clone()))
            .collect();
        point.push(Scalar::zero());
        point
    }
}

/// Everything needed to re-check the construction after the fact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CounterexampleCertificate {
    pub operator_digest: String,
    pub dim: usize,
    pub k_max: usize,
    /// Truncation degree the pipeline ran at.
    pub trunc_degree: usize,
    /// The residual is certified zero through this total degree.
    pub flatness_through_degree: usize,
    pub baire: BairePoint,
    /// Weights `b_k = k!/p_k(x̄)`, in order `k = 1 …`.
    pub weights: Vec<Scalar>,
    /// Solutions `u_k`, in order `k = 1 …`.
    pub solutions: Vec<Jet>,
    /// The assembled series `Σ b_k u_k`.
    pub series: Jet,
    /// Image of the series under the operator; zero when sound.
    pub residual: Jet,
    /// `b_k · p_k(x̄)` for `k = 0 …`, factorials when sound; the degenerate
    /// `k = 0` slot is 1 by the empty-product convention.
    pub diagonal: Vec<Scalar>,
    pub diverges: bool,
}

/// The default boundary choice: the `k`-th power of the first variable,
/// exact as a polynomial (truncation degree `k`).
pub fn default_boundary(k: usize, dim: usize) -> Jet {
    assert!(dim >= 2, "boundary polynomials need dimension >= 2");
    Jet::monomial(dim, k, MultiIndex::axis_power(dim, 0, k).exponents(), Scalar::one())
}

/// Finds a rational point where every boundary polynomial is nonzero, by a
/// deterministic grid scan.
///
/// With `D` the sum of the polynomial degrees and `q = max(hint, D+2)`, the
/// grid `{j/q : 1 <= j <= q-1}` has at least `D+1` values per axis, and a
/// nonzero polynomial of degree `D` cannot vanish on the whole product grid.
/// Tuples are scanned in graded-lex order, so the result is reproducible.
pub fn baire_point(
    boundaries: &[Jet],
    denominator_hint: usize,
) -> Result<BairePoint, CertificateError> {
    assert!(!boundaries.is_empty(), "need at least one boundary polynomial");
    let dim = boundaries[0].dim();
    assert!(dim >= 2, "boundary polynomials need dimension >= 2");
    let mut degree_sum = 0usize;
    for (slot, p) in boundaries.iter().enumerate() {
        let degree = p
            .terms()
            .map(|(gamma, _)| gamma.degree())
            .max()
            .ok_or(CertificateError::ZeroBoundary { k: slot + 1 })?;
        degree_sum += degree;
    }
    let denominator = denominator_hint.max(degree_sum + 2);
    let axes = dim - 1;
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut counters = vec![1usize; axes];
    loop {
        tuples.push(counters.clone());
        let mut axis = 0;
        loop {
            if axis == axes {
                tuples.sort_by_key(|t| (t.iter().sum::<usize>(), t.clone()));
                for tuple in &tuples {
                    let coords: Vec<BigRational> = tuple
                        .iter()
                        .map(|&j| BigRational::new((j as i64).into(), (denominator as i64).into()))
                        .collect();
                    let candidate = BairePoint {
                        coords,
                        witness_values: Vec::new(),
                    };
                    let point = candidate.embedded(dim);
                    let mut witnesses = Vec::with_capacity(boundaries.len());
                    let mut all_nonzero = true;
                    for p in boundaries {
                        let value = p.eval(&point).expect("embedded point fits dimension");
                        if value.is_zero() {
                            all_nonzero = false;
                            break;
                        }
                        witnesses.push(value);
                    }
                    if all_nonzero {
                        return Ok(BairePoint {
                            coords: candidate.coords,
                            witness_values: witnesses,
                        });
                    }
                }
                // the counting bound above makes full-grid vanishing impossible
                unreachable!("grid scan exhausted without a nonzero point");
            }
            counters[axis] += 1;
            if counters[axis] <= denominator - 1 {
                break;
            }
            counters[axis] = 1;
            axis += 1;
        }
    }
}

/// `b_k = k!/witness`; exact complex division keeps `b_k · witness = k!`.
pub fn factorial_weight(k: usize, witness: &Scalar) -> Result<Scalar, CertificateError> {
    let inverse = witness
        .checked_inv()
        .ok_or(CertificateError::ZeroWitness { k })?;
    Ok(&Scalar::from_bigint(factorial(k)) * &inverse)
}

/// `Σ b_k u_k`, checked to be lower-triangular in degree: the `k`-th
/// solution must vanish to order exactly `k`, so degree-`j` coefficients
/// only ever see contributions from `k <= j`.
pub fn assemble_series(
    dim: usize,
    trunc_degree: usize,
    solutions: &[Jet],
    weights: &[Scalar],
) -> Result<Jet, CertificateError> {
    if solutions.len() != weights.len() {
        return Err(CertificateError::MisalignedLists {
            weights: weights.len(),
            solutions: solutions.len(),
        });
    }
    if solutions.is_empty() {
        return Ok(Jet::new(dim, trunc_degree));
    }
    for (slot, u) in solutions.iter().enumerate() {
        let k = slot + 1;
        if u.ord() != VanishingOrder::Finite(k) {
            return Err(CertificateError::OrderMismatch {
                k,
                found: u.ord().to_string(),
            });
        }
    }
    let terms: Vec<(Scalar, &Jet)> = weights
        .iter()
        .cloned()
        .zip(solutions.iter())
        .collect();
    let combined = Jet::linear_combination(&terms).map_err(|_| {
        CertificateError::MisalignedLists {
            weights: weights.len(),
            solutions: solutions.len(),
        }
    })?;
    Ok(combined.with_trunc_degree(trunc_degree.min(combined.trunc_degree())))
}

/// Applies the operator to the assembled series from scratch. Soundness
/// demands the zero jet; this deliberately does not reuse `Σ b_k L u_k`.
pub fn flatness_residual(op: &DiffOperator, series: &Jet) -> Result<Jet, CertificateError> {
    Ok(op.apply(series)?)
}

/// One row of the divergence table: the exact diagonal value and the
/// factorial partial sums `Σ_{j<=k} j! t^j` for each requested `t`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DivergenceRow {
    pub k: usize,
    pub diagonal: Scalar,
    pub partial_sums: Vec<BigRational>,
}

/// Tabulates the divergence witness along rays `t · x̄`.
pub fn divergence_table(
    weights: &[Scalar],
    witnesses: &[Scalar],
    t_values: &[BigRational],
) -> Result<Vec<DivergenceRow>, CertificateError> {
    if weights.len() != witnesses.len() {
        return Err(CertificateError::MisalignedLists {
            weights: weights.len(),
            solutions: witnesses.len(),
        });
    }
    let mut rows = Vec::with_capacity(weights.len() + 1);
    let mut sums: Vec<BigRational> = t_values.iter().map(|_| BigRational::one()).collect();
    rows.push(DivergenceRow {
        k: 0,
        diagonal: Scalar::one(),
        partial_sums: sums.clone(),
    });
    for (slot, (b, w)) in weights.iter().zip(witnesses).enumerate() {
        let k = slot + 1;
        let k_factorial = BigRational::from_integer(factorial(k));
        for (sum, t) in sums.iter_mut().zip(t_values) {
            *sum += &k_factorial * t.pow(k as i32);
        }
        rows.push(DivergenceRow {
            k,
            diagonal: b * w,
            partial_sums: sums.clone(),
        });
    }
    Ok(rows)
}

fn diagonal_entries(
    weights: &[Scalar],
    witnesses: &[Scalar],
) -> Result<Vec<Scalar>, CertificateError> {
    let mut diagonal = vec![Scalar::one()];
    for (slot, (b, w)) in weights.iter().zip(witnesses).enumerate() {
        let k = slot + 1;
        let value = b * w;
        let expected = Scalar::from_bigint(factorial(k));
        if value != expected {
            return Err(CertificateError::DiagonalMismatch {
                k,
                found: value.to_string(),
                expected: expected.to_string(),
            });
        }
        diagonal.push(value);
    }
    Ok(diagonal)
}

/// Runs the whole pipeline with the default boundary choice `x_1^k`.
pub fn build_certificate(
    op: &DiffOperator,
    k_max: usize,
    cfg: &SolverConfig,
) -> Result<CounterexampleCertificate, CertificateError> {
    let boundaries: Vec<Jet> = (1..=k_max)
        .map(|k| default_boundary(k, op.dim()))
        .collect();
    build_certificate_with(op, &boundaries, cfg)
}

/// Runs the pipeline with caller-supplied homogeneous boundary polynomials
/// (slot `k` holds `p_{k+1}`, expected homogeneous of degree `k+1`).
pub fn build_certificate_with(
    op: &DiffOperator,
    boundaries: &[Jet],
    cfg: &SolverConfig,
) -> Result<CounterexampleCertificate, CertificateError> {
    let k_max = boundaries.len();
    if k_max == 0 {
        return Err(CertificateError::NoBoundaries);
    }
    if k_max > cfg.trunc_degree() {
        return Err(CertificateError::DegreeBudget {
            k_max,
            trunc_degree: cfg.trunc_degree(),
        });
    }
    let screen = op.ellipticity_check(ELLIPTICITY_SAMPLES);
    if let crate::operator::EllipticityVerdict::Failed { direction } = &screen.verdict {
        return Err(CertificateError::SymbolVanishes {
            direction: format_direction(direction),
        });
    }
    for (slot, p) in boundaries.iter().enumerate() {
        let k = slot + 1;
        match p.homogeneous_degree() {
            Some(degree) if degree == k => {}
            Some(degree) => {
                return Err(CertificateError::BoundaryDegree {
                    k,
                    found: degree.to_string(),
                });
            }
            None if p.is_zero() => return Err(CertificateError::ZeroBoundary { k }),
            None => {
                return Err(CertificateError::BoundaryDegree {
                    k,
                    found: "inhomogeneous".to_owned(),
                });
            }
        }
    }

    // independent solves; order of results is fixed by k
    let solved: Vec<_> = boundaries
        .par_iter()
        .enumerate()
        .map(|(slot, p)| {
            solve_boundary_problem(op, p, cfg).map_err(|source| CertificateError::Solve {
                k: slot + 1,
                source,
            })
        })
        .collect::<Result<_, _>>()?;

    let trunc_degree = solved
        .first()
        .map(|solution| solution.u.trunc_degree())
        .unwrap_or(cfg.trunc_degree());
    for (slot, solution) in solved.iter().enumerate() {
        let k = slot + 1;
        if solution.u.restrict_last_zero() != solution.boundary {
            return Err(CertificateError::RestrictionMismatch { k });
        }
    }

    let baire = baire_point(boundaries, 0)?;
    let weights: Vec<Scalar> = baire
        .witness_values
        .iter()
        .enumerate()
        .map(|(slot, witness)| factorial_weight(slot + 1, witness))
        .collect::<Result<_, _>>()?;

    let solutions: Vec<Jet> = solved.into_iter().map(|solution| solution.u).collect();
    let series = assemble_series(op.dim(), trunc_degree, &solutions, &weights)?;
    let residual = flatness_residual(op, &series)?;
    if !residual.is_zero() {
        let (monomial, _) = residual.terms().next().expect("nonzero jet has a term");
        return Err(CertificateError::ResidualNonzero {
            monomial: monomial.to_string(),
            degree: monomial.degree(),
        });
    }
    let diagonal = diagonal_entries(&weights, &baire.witness_values)?;

    Ok(CounterexampleCertificate {
        operator_digest: io::operator_digest(op),
        dim: op.dim(),
        k_max,
        trunc_degree,
        flatness_through_degree: residual.trunc_degree(),
        baire,
        weights,
        solutions,
        series,
        residual,
        diagonal,
        diverges: true,
    })
}

impl CounterexampleCertificate {
    /// Re-checks every certificate invariant against the given operator,
    /// recomputing the residual rather than trusting the stored one.
    pub fn verify(&self, op: &DiffOperator) -> Result<(), CertificateError> {
        let digest = io::operator_digest(op);
        if digest != self.operator_digest {
            return Err(CertificateError::DigestMismatch {
                expected: self.operator_digest.clone(),
                found: digest,
            });
        }
        if !self.diverges {
            return Err(CertificateError::DivergenceUnmarked);
        }
        let recomputed = flatness_residual(op, &self.series)?;
        if !recomputed.is_zero() || !self.residual.is_zero() {
            let source = if recomputed.is_zero() {
                &self.residual
            } else {
                &recomputed
            };
            let (monomial, _) = source.terms().next().expect("nonzero jet has a term");
            return Err(CertificateError::ResidualNonzero {
                monomial: monomial.to_string(),
                degree: monomial.degree(),
            });
        }
        let point = self.baire.embedded(self.dim);
        for (slot, u) in self.solutions.iter().enumerate() {
            let k = slot + 1;
            let boundary = u.restrict_last_zero();
            if boundary.is_zero() {
                return Err(CertificateError::RestrictionMismatch { k });
            }
            let witness = boundary.eval(&point).expect("point fits dimension");
            if witness != self.baire.witness_values[slot] {
                return Err(CertificateError::ZeroWitness { k });
            }
        }
        let diagonal = diagonal_entries(&self.weights, &self.baire.witness_values)?;
        if self.diagonal.len() != diagonal.len() {
            return Err(CertificateError::DiagonalMismatch {
                k: diagonal.len().min(self.diagonal.len()),
                found: format!("{} entries", self.diagonal.len()),
                expected: format!("{} entries", diagonal.len()),
            });
        }
        for (k, expected) in diagonal.iter().enumerate() {
            let found = self.diagonal.get(k);
            if found != Some(expected) {
                return Err(CertificateError::DiagonalMismatch {
                    k,
                    found: found.map_or("missing".to_owned(), Scalar::to_string),
                    expected: expected.to_string(),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn s(n: i64) -> Scalar {
        Scalar::from_integer(n)
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn default_boundaries_are_first_variable_powers() {
        let p = default_boundary(3, 2);
        assert_eq!(p, Jet::monomial(2, 3, &[3, 0], s(1)));
        assert_eq!(default_boundary(0, 2), Jet::one(2, 0));
    }

    #[test]
    fn grid_point_for_power_boundaries() {
        // degrees 1+2+3 = 6, denominator 8, first grid value works
        let boundaries: Vec<Jet> = (1..=3).map(|k| default_boundary(k, 2)).collect();
        let point = baire_point(&boundaries, 0).unwrap();
        assert_eq!(point.coords, vec![q(1, 8)]);
        assert_eq!(
            point.witness_values,
            vec![
                Scalar::from_ratio(1, 8),
                Scalar::from_ratio(1, 64),
                Scalar::from_ratio(1, 512)
            ]
        );
        assert_eq!(baire_point(&boundaries, 0).unwrap(), point);
    }

    #[test]
    fn grid_point_avoids_the_diagonal() {
        // p = x1 - x2 in three variables: D = 1, denominator 3, and the
        // first tuple (1/3, 1/3) lies on the zero set
        let p = Jet::from_terms(
            3,
            1,
            [
                (MultiIndex::new(vec![1, 0, 0]), s(1)),
                (MultiIndex::new(vec![0, 1, 0]), s(-1)),
            ],
        )
        .unwrap();
        let point = baire_point(&[p], 0).unwrap();
        assert_eq!(point.coords, vec![q(1, 3), q(2, 3)]);
    }

    #[test]
    fn denominator_hint_refines_the_grid() {
        let boundaries = vec![default_boundary(1, 2)];
        let point = baire_point(&boundaries, 57).unwrap();
        assert_eq!(point.coords, vec![q(1, 57)]);
    }

    #[test]
    fn weights_reproduce_factorials() {
        let b = factorial_weight(3, &Scalar::from_ratio(1, 8)).unwrap();
        assert_eq!(b, s(48));

        let b = factorial_weight(2, &Scalar::i()).unwrap();
        assert_eq!(b, &s(-2) * &Scalar::i());
        assert_eq!(&b * &Scalar::i(), s(2));

        assert_eq!(
            factorial_weight(1, &Scalar::zero()).unwrap_err(),
            CertificateError::ZeroWitness { k: 1 }
        );
    }

    #[test]
    fn assembly_matches_hand_expansion() {
        // Σ k! · Re((x+iy)^k) for k <= 3
        let u1 = Jet::monomial(2, 3, &[1, 0], s(1));
        let u2 = Jet::from_terms(
            2,
            3,
            [
                (MultiIndex::new(vec![2, 0]), s(1)),
                (MultiIndex::new(vec![0, 2]), s(-1)),
            ],
        )
        .unwrap();
        let u3 = Jet::from_terms(
            2,
            3,
            [
                (MultiIndex::new(vec![3, 0]), s(1)),
                (MultiIndex::new(vec![1, 2]), s(-3)),
            ],
        )
        .unwrap();
        let series = assemble_series(
            2,
            3,
            &[u1, u2, u3],
            &[s(1), s(2), s(6)],
        )
        .unwrap();
        let expected = Jet::from_terms(
            2,
            3,
            [
                (MultiIndex::new(vec![1, 0]), s(1)),
                (MultiIndex::new(vec![2, 0]), s(2)),
                (MultiIndex::new(vec![0, 2]), s(-2)),
                (MultiIndex::new(vec![3, 0]), s(6)),
                (MultiIndex::new(vec![1, 2]), s(-18)),
            ],
        )
        .unwrap();
        assert_eq!(series, expected);
    }

    #[test]
    fn assembly_rejects_wrong_vanishing_order() {
        let u1 = Jet::monomial(2, 3, &[2, 0], s(1));
        let err = assemble_series(2, 3, &[u1], &[s(1)]).unwrap_err();
        assert_eq!(
            err,
            CertificateError::OrderMismatch {
                k: 1,
                found: "2".to_owned()
            }
        );
        assert!(assemble_series(2, 3, &[], &[]).unwrap().is_zero());
    }

    #[test]
    fn divergence_rows_accumulate_factorials() {
        let weights = vec![s(1), s(2), s(6), s(24), s(120)];
        let witnesses = vec![Scalar::one(); 5];
        let rows = divergence_table(&weights, &witnesses, &[BigRational::one()]).unwrap();
        let sums: Vec<i64> = rows
            .iter()
            .map(|row| {
                assert_eq!(row.partial_sums.len(), 1);
                row.partial_sums[0].to_integer().try_into().unwrap()
            })
            .collect();
        assert_eq!(sums, vec![1, 2, 4, 10, 34, 154]);
        assert_eq!(rows[3].diagonal, s(6));

        let at_zero = divergence_table(&weights, &witnesses, &[BigRational::zero()]).unwrap();
        assert!(at_zero
            .iter()
            .all(|row| row.partial_sums[0] == BigRational::one()));
    }
}
