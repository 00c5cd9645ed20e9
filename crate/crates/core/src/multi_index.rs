//! Exponent vectors for multivariate monomials.
//!
//! A [`MultiIndex`] is a fixed-length vector of naturals. Its `Ord` is the
//! graded lexicographic order: lower total degree first, ties broken by
//! ascending lexicographic comparison of the exponent vector. Every ordered
//! container in the crate iterates in this order, which is what makes
//! serialization byte-stable.

use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial; length is the ambient dimension.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(exponents: Vec<usize>) -> Self {
        assert!(!exponents.is_empty(), "MultiIndex needs dimension >= 1");
        MultiIndex(exponents)
    }

    /// The zero index (constant monomial) in the given dimension.
    pub fn zero(dim: usize) -> Self {
        MultiIndex::new(vec![0; dim])
    }

    /// `e_axis`: exponent 1 on one axis, 0 elsewhere.
    pub fn unit(dim: usize, axis: usize) -> Self {
        Self::axis_power(dim, axis, 1)
    }

    /// Exponent `power` on one axis, 0 elsewhere.
    pub fn axis_power(dim: usize, axis: usize, power: usize) -> Self {
        assert!(axis < dim, "axis {axis} out of range for dimension {dim}");
        let mut exps = vec![0; dim];
        exps[axis] = power;
        MultiIndex(exps)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|α|`: the sum of all exponents.
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn exponent(&self, axis: usize) -> usize {
        self.0[axis]
    }

    pub fn exponents(&self) -> &[usize] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise sum; dimensions must agree.
    pub fn add(&self, rhs: &MultiIndex) -> MultiIndex {
        assert_eq!(self.dim(), rhs.dim(), "MultiIndex dimension mismatch");
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` if any entry would go negative.
    pub fn checked_sub(&self, rhs: &MultiIndex) -> Option<MultiIndex> {
        assert_eq!(self.dim(), rhs.dim(), "MultiIndex dimension mismatch");
        self.0
            .iter()
            .zip(&rhs.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// True when every exponent dominates the corresponding one of `rhs`.
    pub fn contains(&self, rhs: &MultiIndex) -> bool {
        self.0.iter().zip(&rhs.0).all(|(a, b)| a >= b)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, e) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_orders_by_degree_first() {
        let a = MultiIndex::new(vec![0, 3]);
        let b = MultiIndex::new(vec![2, 0]);
        assert!(b < a);
    }

    #[test]
    fn equal_degree_breaks_ties_lexicographically() {
        let a = MultiIndex::new(vec![0, 1]);
        let b = MultiIndex::new(vec![1, 0]);
        assert!(a < b);
    }

    #[test]
    fn add_and_sub_are_componentwise() {
        let a = MultiIndex::new(vec![2, 1]);
        let b = MultiIndex::new(vec![1, 1]);
        assert_eq!(a.add(&b), MultiIndex::new(vec![3, 2]));
        assert_eq!(a.checked_sub(&b), Some(MultiIndex::new(vec![1, 0])));
        assert_eq!(b.checked_sub(&a), None);
    }

    #[test]
    fn display_is_compact() {
        assert_eq!(MultiIndex::new(vec![2, 0, 1]).to_string(), "(2,0,1)");
    }
}
