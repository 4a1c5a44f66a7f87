//! Dense complex solve for the small network systems.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::params::ComplexAmp;

/// Solves above this 1-norm condition estimate are refused.
pub const MAX_CONDITION: f64 = 1e12;

fn one_norm(m: &DMatrix<ComplexAmp>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves the row-major system `A x = b` by LU with partial pivoting plus
/// one step of iterative refinement. Returns the solution and the condition
/// estimate `||A||_1 ||A^-1||_1`.
pub fn solve_dense(matrix: &[ComplexAmp], rhs: &[ComplexAmp]) -> Result<(Vec<ComplexAmp>, f64)> {
    let n = rhs.len();
    assert_eq!(matrix.len(), n * n, "matrix must be square");
    let a = DMatrix::from_row_slice(n, n, matrix);
    let b = DVector::from_column_slice(rhs);
    let lu = a.clone().lu();
    let inverse = lu.try_inverse().ok_or(Error::Singular {
        what: "network matrix",
        magnitude: 0.0,
    })?;
    let cond = one_norm(&a) * one_norm(&inverse);
    if !cond.is_finite() || cond > MAX_CONDITION {
        return Err(Error::IllConditioned(cond));
    }
    let mut x = lu.solve(&b).ok_or(Error::Singular {
        what: "network matrix",
        magnitude: 0.0,
    })?;
    let residual = &b - &a * &x;
    if let Some(dx) = lu.solve(&residual) {
        x += dx;
    }
    Ok((x.iter().copied().collect(), cond))
}
