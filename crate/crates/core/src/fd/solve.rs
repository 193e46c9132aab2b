//! Dense reference solves for convergence studies.

use super::DenseOperator;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Outcome of a reference solve.
pub struct SolveReport {
    pub solution: Vec<f64>,
    pub residual: f64,
    pub least_squares_fallback: bool,
}

/// Solves op * x = rhs by LU, falling back to an SVD least-squares solution
/// (flagged) when the factorization fails or the residual is poor.
pub fn solve_bvp(op: &DenseOperator, rhs: &[f64]) -> Result<SolveReport> {
    if rhs.len() != op.dim() {
        return Err(Error::InvalidSpec(format!(
            "rhs length {} does not match operator dimension {}",
            rhs.len(),
            op.dim()
        )));
    }
    let b = DVector::from_column_slice(rhs);
    let rhs_norm = b.norm().max(1e-300);
    let lu = op.entries.clone().lu();
    if let Some(x) = lu.solve(&b) {
        let residual = (&op.entries * &x - &b).norm();
        if residual <= 1e-10 * rhs_norm {
            return Ok(SolveReport {
                solution: x.as_slice().to_vec(),
                residual,
                least_squares_fallback: false,
            });
        }
    }
    let svd = op.entries.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-12)
        .map_err(|e| Error::Singular(e.to_string()))?;
    let residual = (&op.entries * &x - &b).norm();
    Ok(SolveReport {
        solution: x.as_slice().to_vec(),
        residual,
        least_squares_fallback: true,
    })
}

/// Solves the singular periodic system L u = rhs on the mean-zero subspace by
/// the rank-one regularization L + J/m (valid when rhs is mean-free).
pub fn solve_periodic_mean_zero(op: &DenseOperator, rhs: &[f64]) -> Result<Vec<f64>> {
    let m = op.dim();
    if rhs.len() != m {
        return Err(Error::InvalidSpec("rhs length mismatch".into()));
    }
    let mean: f64 = rhs.iter().sum::<f64>() / m as f64;
    let b = DVector::from_iterator(m, rhs.iter().map(|v| v - mean));
    let reg = DMatrix::from_element(m, m, 1.0 / m as f64);
    let a = &op.entries + reg;
    let lu = a.lu();
    let x = lu
        .solve(&b)
        .ok_or_else(|| Error::Singular("regularized periodic system".into()))?;
    Ok(x.as_slice().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::{laplacian_matrix_1d, BoundaryKind, DerivativeOrder, StencilSpec};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn identity_returns_rhs() {
        let op = DenseOperator::identity(8);
        let rhs: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let rep = solve_bvp(&op, &rhs).unwrap();
        assert!(!rep.least_squares_fallback);
        for (x, r) in rep.solution.iter().zip(&rhs) {
            assert_abs_diff_eq!(x, r, epsilon = 1e-14);
        }
    }

    #[test]
    fn dirichlet_sine_solution() {
        // -u'' = pi^2 sin(pi x), u(0)=u(1)=0 -> u = sin(pi x); O(N^-2) for a=1
        let mut errs = Vec::new();
        for n in [4usize, 5, 6] {
            let big_n = 1usize << n;
            let spec = StencilSpec::new(1, DerivativeOrder::Second).unwrap();
            let op = laplacian_matrix_1d(n, spec, &BoundaryKind::Dirichlet).unwrap();
            let h = 1.0 / (big_n + 1) as f64;
            let rhs: Vec<f64> = (0..big_n)
                .map(|i| {
                    let x = (i + 1) as f64 * h;
                    -PI * PI * (PI * x).sin() * h * h
                })
                .collect();
            let rep = solve_bvp(&op, &rhs).unwrap();
            let err = (0..big_n)
                .map(|i| {
                    let x = (i + 1) as f64 * h;
                    (rep.solution[i] - (PI * x).sin()).abs()
                })
                .fold(0.0, f64::max);
            errs.push(err);
        }
        // halving h divides the error by about 4
        assert!(errs[0] / errs[1] > 3.0 && errs[0] / errs[1] < 5.0);
        assert!(errs[1] / errs[2] > 3.0 && errs[1] / errs[2] < 5.0);
    }

    #[test]
    fn singular_system_flagged() {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = 1.0; // rank 1
        let op = DenseOperator::new(m, "rank deficient");
        let rep = solve_bvp(&op, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(rep.least_squares_fallback);
    }
}
