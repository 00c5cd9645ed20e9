//! Truncated multivariate power series with exact coefficients.
//!
//! A [`Jet`] is the Taylor polynomial of total degree <= `trunc_degree` at
//! the origin, stored sparsely. Invariants:
//! - every stored multi-index has length `dim` and degree <= `trunc_degree`
//! - no stored coefficient is zero (canonical sparse form)
//! - iteration over terms is in graded-lex order
//!
//! `trunc_degree` tracks reliability, not polynomial degree: derivatives
//! lower it by the derivative order, products take the minimum of the
//! factors'. Raising it (via [`Jet::with_trunc_degree`]) is an assertion by
//! the caller that the jet is exact to the larger degree, as for genuine
//! polynomials.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::JetError;
use crate::linalg;
use crate::multi_index::MultiIndex;
use crate::scalar::Scalar;

/// Order of vanishing at the origin; `Infinite` marks the zero jet,
/// i.e. flatness as far as the truncation can see.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum VanishingOrder {
    Finite(usize),
    Infinite,
}

impl VanishingOrder {
    pub fn at_least(self, k: usize) -> bool {
        match self {
            VanishingOrder::Finite(d) => d >= k,
            VanishingOrder::Infinite => true,
        }
    }
}

impl std::fmt::Display for VanishingOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VanishingOrder::Finite(d) => write!(f, "{d}"),
            VanishingOrder::Infinite => write!(f, "inf"),
        }
    }
}

/// Sparse truncated power series over Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Jet {
    dim: usize,
    trunc_degree: usize,
    coeffs: BTreeMap<MultiIndex, Scalar>,
}

impl Jet {
    /// The zero jet.
    pub fn new(dim: usize, trunc_degree: usize) -> Self {
        assert!(dim >= 1, "jets need dimension >= 1");
        Jet {
            dim,
            trunc_degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, trunc_degree: usize, value: Scalar) -> Self {
        let mut jet = Jet::new(dim, trunc_degree);
        jet.insert(MultiIndex::zero(dim), value);
        jet
    }

    pub fn one(dim: usize, trunc_degree: usize) -> Self {
        Jet::constant(dim, trunc_degree, Scalar::one())
    }

    /// Single-term jet `coeff * x^exponents`.
    ///
    /// Panics on malformed exponents; use [`Jet::from_terms`] for data-driven
    /// construction.
    pub fn monomial(dim: usize, trunc_degree: usize, exponents: &[usize], coeff: Scalar) -> Self {
        assert_eq!(exponents.len(), dim, "exponent vector length != dim");
        let index = MultiIndex::new(exponents.to_vec());
        assert!(
            index.degree() <= trunc_degree,
            "monomial degree {} above truncation {}",
            index.degree(),
            trunc_degree
        );
        let mut jet = Jet::new(dim, trunc_degree);
        jet.insert(index, coeff);
        jet
    }

    /// Builds a jet from explicit terms, summing duplicates.
    ///
    /// Rejects indices of the wrong length and terms above the truncation
    /// degree; dropping data silently would hide input errors.
    pub fn from_terms<I>(dim: usize, trunc_degree: usize, terms: I) -> Result<Self, JetError>
    where
        I: IntoIterator<Item = (MultiIndex, Scalar)>,
    {
        let mut jet = Jet::new(dim, trunc_degree);
        for (index, coeff) in terms {
            if index.dim() != dim {
                return Err(JetError::IndexLength {
                    index: index.to_string(),
                    expected: dim,
                    found: index.dim(),
                });
            }
            if index.degree() > trunc_degree {
                return Err(JetError::DegreeOverflow {
                    index: index.to_string(),
                    degree: index.degree(),
                    trunc_degree,
                });
            }
            let entry = jet.coeffs.entry(index).or_insert_with(Scalar::zero);
            *entry += &coeff;
        }
        jet.coeffs.retain(|_, c| !c.is_zero());
        Ok(jet)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc_degree(&self) -> usize {
        self.trunc_degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.coeffs.iter()
    }

    /// Coefficient at `index`, zero when absent.
    pub fn coeff(&self, index: &MultiIndex) -> Scalar {
        self.coeffs.get(index).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    /// Changes the reliability degree.
    ///
    /// Lowering drops every term above the new degree. Raising keeps terms
    /// as-is and is only sound when the caller knows the jet is exact beyond
    /// its current truncation (e.g. it is a polynomial).
    pub fn with_trunc_degree(&self, trunc_degree: usize) -> Jet {
        let mut jet = self.clone();
        if trunc_degree < jet.trunc_degree {
            jet.coeffs.retain(|index, _| index.degree() <= trunc_degree);
        }
        jet.trunc_degree = trunc_degree;
        jet
    }

    fn insert(&mut self, index: MultiIndex, coeff: Scalar) {
        debug_assert_eq!(index.dim(), self.dim);
        if index.degree() > self.trunc_degree || coeff.is_zero() {
            return;
        }
        self.coeffs.insert(index, coeff);
    }

    fn accumulate(&mut self, index: MultiIndex, delta: &Scalar) {
        debug_assert_eq!(index.dim(), self.dim);
        if index.degree() > self.trunc_degree || delta.is_zero() {
            return;
        }
        match self.coeffs.entry(index) {
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += delta;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(delta.clone());
            }
        }
    }

    /// Exact linear combination; truncation is the minimum of the inputs'.
    pub fn linear_combination(terms: &[(Scalar, &Jet)]) -> Result<Jet, JetError> {
        let (_, first) = terms.first().ok_or(JetError::EmptyCombination)?;
        let dim = first.dim;
        let trunc = terms.iter().map(|(_, jet)| jet.trunc_degree).min().unwrap();
        let mut out = Jet::new(dim, trunc);
        for (weight, jet) in terms {
            if jet.dim != dim {
                return Err(JetError::DimensionMismatch {
                    expected: dim,
                    found: jet.dim,
                });
            }
            if weight.is_zero() {
                continue;
            }
            for (index, coeff) in &jet.coeffs {
                out.accumulate(index.clone(), &(weight * coeff));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, weight: &Scalar) -> Jet {
        let mut out = Jet::new(self.dim, self.trunc_degree);
        if weight.is_zero() {
            return out;
        }
        for (index, coeff) in &self.coeffs {
            out.insert(index.clone(), weight * coeff);
        }
        out
    }

    /// Cauchy product truncated to the smaller reliability degree.
    pub fn mul(&self, rhs: &Jet) -> Result<Jet, JetError> {
        if self.dim != rhs.dim {
            return Err(JetError::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let trunc = self.trunc_degree.min(rhs.trunc_degree);
        let mut out = Jet::new(self.dim, trunc);
        for (left_index, left_coeff) in &self.coeffs {
            let left_degree = left_index.degree();
            if left_degree > trunc {
                break;
            }
            for (right_index, right_coeff) in &rhs.coeffs {
                // graded iteration: once the degree budget is spent, the rest
                // of the inner terms only get bigger
                if left_degree + right_index.degree() > trunc {
                    break;
                }
                out.accumulate(left_index.add(right_index), &(left_coeff * right_coeff));
            }
        }
        Ok(out)
    }

    /// Formal derivative `D^order`; lowers reliability by `|order|`.
    pub fn derive(&self, order: &MultiIndex) -> Result<Jet, JetError> {
        if order.dim() != self.dim {
            return Err(JetError::IndexLength {
                index: order.to_string(),
                expected: self.dim,
                found: order.dim(),
            });
        }
        let total = order.degree();
        if total > self.trunc_degree {
            return Err(JetError::ReliabilityExhausted {
                requested: total,
                available: self.trunc_degree,
            });
        }
        let mut out = Jet::new(self.dim, self.trunc_degree - total);
        for (index, coeff) in &self.coeffs {
            let Some(target) = index.checked_sub(order) else {
                continue;
            };
            // falling factorial: product over axes of γ_j (γ_j-1) … (γ_j-α_j+1)
            let mut factor = BigInt::one();
            for axis in 0..self.dim {
                let top = index.exponent(axis);
                let bottom = target.exponent(axis);
                for value in bottom + 1..=top {
                    factor *= BigInt::from(value);
                }
            }
            out.insert(target, &Scalar::from_bigint(factor) * coeff);
        }
        Ok(out)
    }

    /// Exact evaluation of the truncated polynomial.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar, JetError> {
        if point.len() != self.dim {
            return Err(JetError::PointLength {
                expected: self.dim,
                found: point.len(),
            });
        }
        let mut total = Scalar::zero();
        for (index, coeff) in &self.coeffs {
            let mut term = coeff.clone();
            for axis in 0..self.dim {
                let exp = index.exponent(axis);
                if exp > 0 {
                    term = &term * &point[axis].pow(exp);
                }
            }
            total += &term;
        }
        Ok(total)
    }

    /// Order of vanishing at the origin: smallest total degree present.
    pub fn ord(&self) -> VanishingOrder {
        match self.coeffs.keys().next() {
            Some(index) => VanishingOrder::Finite(index.degree()),
            None => VanishingOrder::Infinite,
        }
    }

    /// Smallest exponent of the last variable across all terms.
    pub fn adic_order_last(&self) -> VanishingOrder {
        self.coeffs
            .keys()
            .map(|index| index.exponent(self.dim - 1))
            .min()
            .map_or(VanishingOrder::Infinite, VanishingOrder::Finite)
    }

    /// Restriction to the hyperplane where the last variable vanishes;
    /// the result keeps the ambient dimension.
    pub fn restrict_last_zero(&self) -> Jet {
        let mut out = Jet::new(self.dim, self.trunc_degree);
        for (index, coeff) in &self.coeffs {
            if index.exponent(self.dim - 1) == 0 {
                out.insert(index.clone(), coeff.clone());
            }
        }
        out
    }

    pub fn depends_on_last(&self) -> bool {
        self.coeffs
            .keys()
            .any(|index| index.exponent(self.dim - 1) > 0)
    }

    /// `Some(d)` when every term has total degree `d`; `None` for the zero
    /// jet or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut keys = self.coeffs.keys();
        let degree = keys.next()?.degree();
        keys.all(|index| index.degree() == degree)
            .then_some(degree)
    }

    /// Multiplicative inverse up to the truncation degree.
    ///
    /// Writing `a = c (1 - q)` with `c = a(0)` and `ord(q) >= 1`, the inverse
    /// is `(1 + q + q^2 + …)/c`; the geometric tail dies at the truncation.
    pub fn reciprocal(&self) -> Result<Jet, JetError> {
        let constant = self.constant_term();
        let constant_inv = constant.checked_inv().ok_or(JetError::NotInvertible)?;
        let normalized = self.scale(&constant_inv);
        let one = Jet::one(self.dim, self.trunc_degree);
        let q = &one - &normalized;
        let mut acc = one.clone();
        let mut power = one;
        for _ in 1..=self.trunc_degree {
            power = power.mul(&q)?;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.scale(&constant_inv))
    }

    /// Substitutes each variable by a linear combination of fresh variables:
    /// old variable `i` becomes `Σ_j matrix[i][j] · new_j`. Exact; keeps the
    /// truncation degree.
    pub fn substitute_linear(&self, matrix: &[Vec<Scalar>]) -> Result<Jet, JetError> {
        if matrix.len() != self.dim || matrix.iter().any(|row| row.len() != self.dim) {
            return Err(JetError::MatrixShape {
                rows: matrix.len(),
                cols: matrix.first().map_or(0, Vec::len),
                dim: self.dim,
            });
        }
        if linalg::determinant(matrix).is_zero() {
            return Err(JetError::SingularMatrix);
        }
        let rows: Vec<Jet> = matrix
            .iter()
            .map(|row| {
                let mut form = Jet::new(self.dim, self.trunc_degree);
                for (axis, weight) in row.iter().enumerate() {
                    form.insert(MultiIndex::unit(self.dim, axis), weight.clone());
                }
                form
            })
            .collect();
        // powers[axis][e] = rows[axis]^e, extended on demand
        let mut powers: Vec<Vec<Jet>> = (0..self.dim)
            .map(|_| vec![Jet::one(self.dim, self.trunc_degree)])
            .collect();
        let mut out = Jet::new(self.dim, self.trunc_degree);
        for (index, coeff) in &self.coeffs {
            let mut term = Jet::constant(self.dim, self.trunc_degree, coeff.clone());
            for axis in 0..self.dim {
                let exp = index.exponent(axis);
                while powers[axis].len() <= exp {
                    let next = powers[axis].last().unwrap().mul(&rows[axis])?;
                    powers[axis].push(next);
                }
                if exp > 0 {
                    term = term.mul(&powers[axis][exp])?;
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }
}

/// Internal checked-by-assert sum; truncation is the minimum of the inputs'.
impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet::linear_combination(&[(Scalar::one(), self), (Scalar::one(), rhs)])
            .expect("jet addition with mismatched dimensions")
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        Jet::linear_combination(&[(Scalar::one(), self), (-Scalar::one(), rhs)])
            .expect("jet subtraction with mismatched dimensions")
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(&-Scalar::one())
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        Jet::mul(self, rhs).expect("jet product with mismatched dimensions")
    }
}
