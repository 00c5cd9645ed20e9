//! Small exact linear algebra over the scalar field.
//!
//! Only what variable substitution needs: determinants and inverses of the
//! (tiny) change-of-basis matrices, by Gauss-Jordan elimination with exact
//! division. No pivoting strategy is needed beyond finding a nonzero entry.

use crate::scalar::Scalar;

/// Exact determinant of a square matrix given in row-major order.
///
/// Panics if the matrix is not square.
pub fn determinant(matrix: &[Vec<Scalar>]) -> Scalar {
    let n = matrix.len();
    for row in matrix {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
    }
    let mut m: Vec<Vec<Scalar>> = matrix.to_vec();
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = &det * &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot;
            for c in col..n {
                let delta = &factor * &m[col][c];
                let entry = &m[r][c] - &delta;
                m[r][c] = entry;
            }
        }
    }
    det
}

/// Exact inverse by Gauss-Jordan; `None` for singular input.
///
/// Panics if the matrix is not square.
pub fn invert(matrix: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = matrix.len();
    for row in matrix {
        assert_eq!(row.len(), n, "inverse of a non-square matrix");
    }
    let mut m: Vec<Vec<Scalar>> = matrix.to_vec();
    let mut inv: Vec<Vec<Scalar>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| if r == c { Scalar::one() } else { Scalar::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m[r][col].is_zero())?;
        if pivot_row != col {
            m.swap(pivot_row, col);
            inv.swap(pivot_row, col);
        }
        let pivot = m[col][col].clone();
        let pivot_inv = pivot.checked_inv().expect("nonzero pivot");
        for c in 0..n {
            m[col][c] = &m[col][c] * &pivot_inv;
            inv[col][c] = &inv[col][c] * &pivot_inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..n {
                let dm = &factor * &m[col][c];
                let di = &factor * &inv[col][c];
                m[r][c] = &m[r][c] - &dm;
                inv[r][c] = &inv[r][c] - &di;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_integer(n)
    }

    #[test]
    fn determinant_of_wirtinger_substitution() {
        // x = (z + zbar)/2, y = (z - zbar)/(2i); det = i/2
        let half = Scalar::from_ratio(1, 2);
        let mi_half = &Scalar::from_ratio(-1, 2) * &Scalar::i();
        let i_half = &half * &Scalar::i();
        let m = vec![vec![half.clone(), half], vec![mi_half, i_half]];
        assert_eq!(determinant(&m), &Scalar::from_ratio(1, 2) * &Scalar::i());
    }

    #[test]
    fn invert_round_trips() {
        let m = vec![vec![s(2), s(1)], vec![s(1), s(1)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![s(1), s(-1)], vec![s(-1), s(2)]]);
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = vec![vec![s(1), s(2)], vec![s(2), s(4)]];
        assert!(invert(&m).is_none());
        assert_eq!(determinant(&m), Scalar::zero());
    }

    #[test]
    fn zero_pivot_needs_row_swap() {
        let m = vec![vec![s(0), s(1)], vec![s(1), s(0)]];
        assert_eq!(determinant(&m), s(-1));
        assert_eq!(invert(&m).unwrap(), vec![vec![s(0), s(1)], vec![s(1), s(0)]]);
    }
}
