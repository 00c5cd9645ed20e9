//! Boundary-value recursion in canonical form.
//!
//! Given an operator in canonical form `D^β - Σ a_α D^α` (with `β` the pure
//! last-variable index of the operator's order `m`) and a boundary
//! polynomial `p` free of the last variable, the recursion
//!
//! ```text
//! D^β v_{ν+1} = Σ_α a_α D^α v_ν - L p,    v_0 = 0
//! ```
//!
//! is solved exactly by inverting `D^β` monomial by monomial. Every iterate
//! lives in the ideal generated by the m-th power of the last variable, so
//! `u = p + v` restricts to `p` on the hyperplane where that variable
//! vanishes. The difference jets gain one order of last-variable vanishing
//! per step, so at finite truncation the iteration reaches an exact fixed
//! point; no norm-based stopping rule is involved.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::SolverError;
use crate::jet::Jet;
use crate::multi_index::MultiIndex;
use crate::operator::{CanonicalOperator, DiffOperator};
use crate::scalar::Scalar;

/// Solve parameters: target truncation degree, optional iteration cap
/// (defaults to the proven stabilization bound plus one), and optional
/// polydisc radii for the diagnostic majorant bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolverConfig {
    trunc_degree: usize,
    max_iterations: Option<usize>,
    polydisc_radii: Option<Vec<BigRational>>,
}

impl SolverConfig {
    pub fn new(trunc_degree: usize) -> Self {
        SolverConfig {
            trunc_degree,
            max_iterations: None,
            polydisc_radii: None,
        }
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = Some(max_iterations);
        self
    }

    /// Radii must lie strictly between 0 and 1.
    pub fn with_polydisc_radii(mut self, radii: Vec<BigRational>) -> Result<Self, SolverError> {
        for (position, radius) in radii.iter().enumerate() {
            if !radius.is_positive() || *radius >= BigRational::one() {
                return Err(SolverError::RadiusOutOfRange {
                    position,
                    text: radius.to_string(),
                });
            }
        }
        self.polydisc_radii = Some(radii);
        Ok(self)
    }

    pub fn trunc_degree(&self) -> usize {
        self.trunc_degree
    }

    pub fn polydisc_radii(&self) -> Option<&[BigRational]> {
        self.polydisc_radii.as_deref()
    }

    fn iteration_cap(&self, effective_trunc: usize, order: usize) -> usize {
        self.max_iterations
            .unwrap_or(effective_trunc - order + 2)
    }
}

/// Full iteration history of one boundary solve.
///
/// `iterates[0]` is the zero jet; `differences[ν]` is
/// `iterates[ν+1] - iterates[ν]`; `stabilized_at` is the first index whose
/// difference is exactly zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolveTrace {
    pub iterates: Vec<Jet>,
    pub differences: Vec<Jet>,
    pub stabilized_at: usize,
}

impl SolveTrace {
    /// The fixed point reached by the iteration.
    pub fn solution(&self) -> &Jet {
        self.iterates.last().expect("trace holds at least v_0")
    }
}

/// Result of a boundary-value solve: `u` agrees with `boundary` on the
/// hyperplane where the last variable vanishes and is annihilated by the
/// operator through the reliable degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundarySolution {
    /// The boundary polynomial, re-truncated to the solve degree.
    pub boundary: Jet,
    /// `boundary + correction`.
    pub u: Jet,
    pub trace: SolveTrace,
}

/// Exact right inverse of the pure last-variable derivative of the given
/// order: the monomial `c x^γ` maps to `c x^(γ+order·e_last)` scaled by
/// `γ_last! / (γ_last + order)!`. Raises reliability by `order`, and every
/// output monomial has last-variable exponent at least `order`.
pub fn integrate_last(rhs: &Jet, order: usize) -> Jet {
    let dim = rhs.dim();
    let last = dim - 1;
    let shift = MultiIndex::axis_power(dim, last, order);
    let terms = rhs.terms().map(|(gamma, coeff)| {
        let e = gamma.exponent(last);
        let mut denom = BigInt::one();
        for value in e + 1..=e + order {
            denom *= BigInt::from(value);
        }
        let ratio = Scalar::real(BigRational::new(BigInt::one(), denom));
        (gamma.add(&shift), coeff * &ratio)
    });
    Jet::from_terms(dim, rhs.trunc_degree() + order, terms)
        .expect("shifted monomials stay within the raised truncation")
}

/// Coefficient-majorant bound `Σ_γ (|re|+|im|)(c_γ) · R^γ` on a polydisc of
/// multi-radius `R`. Diagnostic only: it dominates the sup of the truncated
/// part on the polydisc but says nothing about the dropped tail.
pub fn majorant_bound(jet: &Jet, radii: &[BigRational]) -> Result<BigRational, SolverError> {
    if radii.len() != jet.dim() {
        return Err(SolverError::RadiusCount {
            expected: jet.dim(),
            found: radii.len(),
        });
    }
    for (position, radius) in radii.iter().enumerate() {
        if !radius.is_positive() || *radius >= BigRational::one() {
            return Err(SolverError::RadiusOutOfRange {
                position,
                text: radius.to_string(),
            });
        }
    }
    let mut total = BigRational::zero();
    for (gamma, coeff) in jet.terms() {
        let mut term = coeff.abs_bound();
        for (axis, radius) in radii.iter().enumerate() {
            let exp = gamma.exponent(axis);
            if exp > 0 {
                term *= radius.pow(exp as i32);
            }
        }
        total += term;
    }
    Ok(total)
}

fn validate_boundary(canon: &CanonicalOperator, boundary: &Jet) -> Result<(), SolverError> {
    if boundary.dim() != canon.dim() {
        return Err(SolverError::BoundaryDimension {
            expected: canon.dim(),
            found: boundary.dim(),
        });
    }
    if boundary.depends_on_last() {
        return Err(SolverError::BoundaryDependsOnLast);
    }
    if !boundary.is_zero() && boundary.homogeneous_degree().is_none() {
        return Err(SolverError::BoundaryNotHomogeneous);
    }
    Ok(())
}

/// The truncation the solve actually runs at: the requested degree, capped
/// by what the coefficient jets can support (their truncation plus the
/// order recovered by integration).
fn effective_trunc(cfg: &SolverConfig, canon: &CanonicalOperator) -> Result<usize, SolverError> {
    if cfg.trunc_degree < canon.order() {
        return Err(SolverError::TruncationBelowOrder {
            trunc_degree: cfg.trunc_degree,
            order: canon.order(),
        });
    }
    Ok(cfg.trunc_degree.min(canon.trunc_degree() + canon.order()))
}

/// Runs the recursion to its exact fixed point and returns the full trace.
pub fn picard_iterate(
    canon: &CanonicalOperator,
    boundary: &Jet,
    cfg: &SolverConfig,
) -> Result<SolveTrace, SolverError> {
    validate_boundary(canon, boundary)?;
    let order = canon.order();
    let trunc = effective_trunc(cfg, canon)?;
    let cap = cfg.iteration_cap(trunc, order);

    let p = boundary.with_trunc_degree(trunc);
    let base = canon.apply(&p)?;
    let mut current = Jet::new(canon.dim(), trunc);
    let mut iterates = vec![current.clone()];
    let mut differences = Vec::new();
    for step in 0..cap {
        let rhs = &canon.apply_remainder(&current)? - &base;
        let next = integrate_last(&rhs, order);
        debug_assert!(next.adic_order_last().at_least(order));
        debug_assert_eq!(next.trunc_degree(), trunc);
        let difference = &next - &current;
        iterates.push(next.clone());
        differences.push(difference.clone());
        if difference.is_zero() {
            return Ok(SolveTrace {
                iterates,
                differences,
                stabilized_at: step,
            });
        }
        current = next;
    }
    Err(SolverError::NotStabilized { iterations: cap })
}

/// Solves `L u = 0` with `u = boundary` on the hyperplane where the last
/// variable vanishes, exactly through the effective truncation.
pub fn solve_boundary_problem(
    op: &DiffOperator,
    boundary: &Jet,
    cfg: &SolverConfig,
) -> Result<BoundarySolution, SolverError> {
    let canon = op.canonical_form()?;
    let trace = picard_iterate(&canon, boundary, cfg)?;
    let trunc = effective_trunc(cfg, &canon)?;
    let p = boundary.with_trunc_degree(trunc);
    let u = &p + trace.solution();
    Ok(BoundarySolution {
        boundary: p,
        u,
        trace,
    })
}
