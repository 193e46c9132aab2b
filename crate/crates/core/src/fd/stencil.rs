//! Central finite-difference stencil coefficients.
//!
//! Coefficients are generated with the Fornberg interpolating-polynomial
//! recursion, which is numerically stable to high order. The classical
//! factorial closed forms are kept in the test suite as cross-checks.

use crate::error::{Error, Result};

/// Which derivative a stencil approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum DerivativeOrder {
    First,
    Second,
}

/// A centered stencil of half-width `a`: nodes -a..=a on a unit-spaced grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StencilSpec {
    pub half_width: usize,
    pub order: DerivativeOrder,
}

impl StencilSpec {
    pub fn new(half_width: usize, order: DerivativeOrder) -> Result<Self> {
        if half_width == 0 {
            return Err(Error::InvalidSpec(
                "stencil half-width must be at least 1".into(),
            ));
        }
        Ok(Self { half_width, order })
    }

    /// Number of grid points in the stencil: 2a+1 for the second derivative,
    /// 2a (zero center) for the first.
    pub fn points(&self) -> usize {
        match self.order {
            DerivativeOrder::Second => 2 * self.half_width + 1,
            DerivativeOrder::First => 2 * self.half_width,
        }
    }
}

/// Fornberg weights for the `m`-th derivative at x=0 on the nodes -a..=a.
///
/// Returns 2a+1 weights indexed by node offset + a.
pub fn fornberg_weights(a: usize, m: usize) -> Vec<f64> {
    let nodes: Vec<f64> = (-(a as i64)..=a as i64).map(|k| k as f64).collect();
    let n = nodes.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    for i in 1..n {
        let mut c2 = 1.0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=m.min(i)).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - nodes[i - 1] * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * nodes[i - 1] * c[i - 1][0] / c2;
            }
            for k in (1..=m.min(i)).rev() {
                c[j][k] = (nodes[i] * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = nodes[i] * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Second-derivative coefficients r_{-a..a} of the (2a+1)-point stencil.
pub fn second_derivative_coefficients(spec: StencilSpec) -> Result<Vec<f64>> {
    if spec.order != DerivativeOrder::Second {
        return Err(Error::InvalidSpec(
            "second_derivative_coefficients requires a second-derivative stencil".into(),
        ));
    }
    Ok(fornberg_weights(spec.half_width, 2))
}

/// First-derivative coefficients c_{-a..a} (c_0 = 0) of the centered stencil.
pub fn first_derivative_coefficients(spec: StencilSpec) -> Result<Vec<f64>> {
    if spec.order != DerivativeOrder::First {
        return Err(Error::InvalidSpec(
            "first_derivative_coefficients requires a first-derivative stencil".into(),
        ));
    }
    let mut w = fornberg_weights(spec.half_width, 1);
    w[spec.half_width] = 0.0; // exact zero at the center
    Ok(w)
}

/// 1-norm of the second-derivative coefficients; the LCU subnormalization of
/// the periodic Laplacian stencil.
pub fn second_derivative_coefficient_norm(a: usize) -> f64 {
    fornberg_weights(a, 2).iter().map(|r| r.abs()).sum()
}

/// 1-norm of the first-derivative coefficients.
pub fn first_derivative_coefficient_norm(a: usize) -> f64 {
    let mut w = fornberg_weights(a, 1);
    w[a] = 0.0;
    w.iter().map(|c| c.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // factorial closed forms from the usual central-difference tables
    fn factorial(k: usize) -> f64 {
        (1..=k).map(|x| x as f64).product()
    }

    fn closed_form_r(a: usize, j: usize) -> f64 {
        let sign = if (j + 1) % 2 == 0 { 1.0 } else { -1.0 };
        2.0 * sign * factorial(a).powi(2)
            / ((j * j) as f64 * factorial(a - j) * factorial(a + j))
    }

    fn closed_form_c(a: usize, j: usize) -> f64 {
        let sign = if (j + 1) % 2 == 0 { 1.0 } else { -1.0 };
        sign * factorial(a).powi(2) / (j as f64 * factorial(a - j) * factorial(a + j))
    }

    #[test]
    fn three_point_laplacian_stencil() {
        let spec = StencilSpec::new(1, DerivativeOrder::Second).unwrap();
        let r = second_derivative_coefficients(spec).unwrap();
        assert_eq!(r.len(), 3);
        assert_abs_diff_eq!(r[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r[1], -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r[2], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn five_point_laplacian_stencil() {
        let spec = StencilSpec::new(2, DerivativeOrder::Second).unwrap();
        let r = second_derivative_coefficients(spec).unwrap();
        let expect = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
        for (got, want) in r.iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-13);
        }
    }

    #[test]
    fn first_derivative_stencils() {
        let spec = StencilSpec::new(1, DerivativeOrder::First).unwrap();
        let c = first_derivative_coefficients(spec).unwrap();
        assert_abs_diff_eq!(c[0], -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(c[1], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c[2], 0.5, epsilon = 1e-14);

        let spec = StencilSpec::new(2, DerivativeOrder::First).unwrap();
        let c = first_derivative_coefficients(spec).unwrap();
        let expect = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (got, want) in c.iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-13);
        }
    }

    #[test]
    fn rejects_zero_half_width() {
        assert!(StencilSpec::new(0, DerivativeOrder::Second).is_err());
    }

    #[test]
    fn stencil_sums_and_symmetry() {
        for a in 1..=8 {
            let r = fornberg_weights(a, 2);
            let sum: f64 = r.iter().sum();
            assert_abs_diff_eq!(sum, 0.0, epsilon = 1e-10);
            let mut c = fornberg_weights(a, 1);
            c[a] = 0.0;
            for j in 1..=a {
                assert_abs_diff_eq!(c[a + j] + c[a - j], 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(r[a + j], r[a - j], epsilon = 1e-12);
            }
        }
    }

    // The closed form in the standard tables writes (a!)^2 in both numerators;
    // cross-check the Fornberg output against it.
    #[test]
    fn closed_form_cross_check() {
        for a in 1..=6 {
            let r = fornberg_weights(a, 2);
            let mut c = fornberg_weights(a, 1);
            c[a] = 0.0;
            for j in 1..=a {
                assert_abs_diff_eq!(r[a + j], closed_form_r(a, j), epsilon = 1e-10);
                assert_abs_diff_eq!(c[a + j], closed_form_c(a, j), epsilon = 1e-10);
            }
        }
    }

    // stencil applied to monomials x^m reproduces the exact second derivative
    // for m <= 2a at interior points
    #[test]
    fn stencil_exactness_on_monomials() {
        for a in 1..=4usize {
            let r = fornberg_weights(a, 2);
            for m in 0..=2 * a {
                let x0 = 0.7;
                let h = 1e-1;
                let approx: f64 = (0..=2 * a)
                    .map(|k| {
                        let x = x0 + (k as f64 - a as f64) * h;
                        r[k] * x.powi(m as i32)
                    })
                    .sum::<f64>()
                    / (h * h);
                let exact = if m >= 2 {
                    (m * (m - 1)) as f64 * x0.powi(m as i32 - 2)
                } else {
                    0.0
                };
                assert_abs_diff_eq!(approx, exact, epsilon = 1e-6 * (1.0 + exact.abs()));
            }
        }
    }

    // Thm-1 proof bound: sum |r_j| <= 2 pi^2 / 3, monotone in a
    #[test]
    fn coefficient_norm_bound_and_monotone() {
        let bound = 2.0 * std::f64::consts::PI.powi(2) / 3.0;
        let mut prev = 0.0;
        for a in 1..=64 {
            let lam = second_derivative_coefficient_norm(a);
            assert!(lam <= bound + 1e-12, "a={a}: {lam} > {bound}");
            assert!(lam > prev, "norm not monotone at a={a}");
            prev = lam;
        }
        assert_abs_diff_eq!(second_derivative_coefficient_norm(1), 4.0, epsilon = 1e-14);
    }
}
