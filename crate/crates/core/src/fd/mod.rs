//! Classical finite-difference reference operators.
//!
//! Everything in this module is the ground truth the block encodings are
//! verified against: dense matrices for the discretized Laplacian under the
//! supported boundary conditions, Kronecker-sum assembly for many dimensions
//! and particles, periodic extensions with optional mollification, clamped
//! pair potentials, and the discrete convective operator.

pub mod extension;
pub mod potential;
pub mod solve;
pub mod stencil;

pub use extension::{even_extension, mollify, odd_extension};
pub use potential::{convective_matrix, PotentialKind, PotentialSpec};
pub use solve::solve_bvp;
pub use stencil::{
    first_derivative_coefficients, second_derivative_coefficients, DerivativeOrder, StencilSpec,
};

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Hard ceiling for dense reference matrices.
pub const DENSE_LIMIT: usize = 4096;

/// Grid description: N = 2^n points per dimension, d dimensions, eta particles,
/// spacing h = 1/N on the unit box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub d: usize,
    pub eta: usize,
}

impl GridSpec {
    pub fn new(n: usize, d: usize, eta: usize) -> Result<Self> {
        if n == 0 || d == 0 || eta == 0 {
            return Err(Error::InvalidSpec("n, d, eta must all be >= 1".into()));
        }
        Ok(Self { n, d, eta })
    }

    pub fn points_per_dim(&self) -> usize {
        1 << self.n
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.points_per_dim() as f64
    }

    /// Number of one-dimensional slots in the Kronecker assembly.
    pub fn slots(&self) -> usize {
        self.d * self.eta
    }

    /// Total Hilbert-space dimension N^(eta d).
    pub fn total_dim(&self) -> Option<usize> {
        1usize.checked_shl((self.n * self.slots()) as u32)
    }
}

/// Boundary condition for one dimension.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryKind {
    Periodic,
    Dirichlet,
    Neumann,
    Robin { a: f64, b: f64, c: f64, dd: f64 },
    /// Boundary prescribed on a contiguous (mod N) interior index set.
    ///
    /// `restore_identity = true` places +1 on the rows in `set` (the
    /// appendix-style LCU); `false` keeps the stencil diagonal there and only
    /// zeroes the couplings into those rows (the variant the success
    /// probability demos use).
    InteriorDirichlet {
        set: Vec<usize>,
        restore_identity: bool,
    },
    PeriodicExtensionDirichlet,
    PeriodicExtensionNeumann,
}

impl BoundaryKind {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            BoundaryKind::Robin { b, dd, .. } => {
                if *b == 0.0 || *dd == 0.0 {
                    return Err(Error::InvalidSpec(
                        "Robin condition requires b != 0 and dd != 0".into(),
                    ));
                }
            }
            BoundaryKind::InteriorDirichlet { set, .. } => {
                let big_n = 1usize << n;
                if set.is_empty() {
                    return Err(Error::InvalidSpec("interior set must be nonempty".into()));
                }
                if set.iter().any(|&i| i >= big_n) {
                    return Err(Error::InvalidSpec("interior set index out of range".into()));
                }
                if !is_contiguous_mod(set, big_n) {
                    return Err(Error::InvalidSpec(
                        "interior set must be contiguous modulo N".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// True when the sorted index set forms one run modulo `n`.
pub fn is_contiguous_mod(set: &[usize], n: usize) -> bool {
    if set.len() <= 1 {
        return true;
    }
    if set.len() >= n {
        return set.len() == n;
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != set.len() {
        return false; // duplicates forbidden
    }
    // count gaps in cyclic order; contiguous iff exactly one gap
    let mut gaps = 0;
    for i in 0..sorted.len() {
        let next = sorted[(i + 1) % sorted.len()];
        let cur = sorted[i];
        if (cur + 1) % n != next % n {
            gaps += 1;
        }
    }
    gaps == 1
}

/// Dense real matrix with a note about folded-out scale factors.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    pub entries: DMatrix<f64>,
    pub scale_note: String,
}

impl DenseOperator {
    pub fn new(entries: DMatrix<f64>, scale_note: impl Into<String>) -> Self {
        assert_eq!(entries.nrows(), entries.ncols(), "operator must be square");
        Self {
            entries,
            scale_note: scale_note.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(DMatrix::identity(dim, dim), "identity")
    }
}

fn circulant_from_stencil(big_n: usize, r: &[f64]) -> DMatrix<f64> {
    let a = r.len() / 2;
    let mut m = DMatrix::zeros(big_n, big_n);
    for col in 0..big_n {
        for (k, &w) in r.iter().enumerate() {
            let off = k as i64 - a as i64;
            let row = (col as i64 + off).rem_euclid(big_n as i64) as usize;
            m[(row, col)] += w;
        }
    }
    m
}

/// One-dimensional Laplacian matrix on N = 2^n points.
///
/// Sign convention: negative-definite diagonal (-2 center for the 3-point
/// stencil) everywhere. The positive Neumann/Robin displays are recovered by
/// global negation, recorded in `scale_note`. The overall 1/h^2 is folded out.
pub fn laplacian_matrix_1d(n: usize, spec: StencilSpec, bc: &BoundaryKind) -> Result<DenseOperator> {
    bc.validate(n)?;
    let big_n = 1usize << n;
    let a = spec.half_width;
    let r = second_derivative_coefficients(StencilSpec::new(a, DerivativeOrder::Second)?)?;
    if 2 * a + 1 > big_n {
        return Err(Error::InvalidSpec(format!(
            "stencil of {} points wider than grid of {} points",
            2 * a + 1,
            big_n
        )));
    }
    match bc {
        BoundaryKind::Periodic => Ok(DenseOperator::new(
            circulant_from_stencil(big_n, &r),
            "1/h^2 folded out",
        )),
        BoundaryKind::Dirichlet => {
            if a != 1 {
                return Err(Error::InvalidSpec(
                    "direct Dirichlet rows are limited to the 3-point stencil".into(),
                ));
            }
            let mut m = circulant_from_stencil(big_n, &r);
            m[(0, big_n - 1)] = 0.0;
            m[(big_n - 1, 0)] = 0.0;
            Ok(DenseOperator::new(m, "1/h^2 folded out"))
        }
        BoundaryKind::Neumann => {
            if a != 1 {
                return Err(Error::InvalidSpec(
                    "direct Neumann rows are limited to the 3-point stencil".into(),
                ));
            }
            let mut m = circulant_from_stencil(big_n, &r);
            m[(0, big_n - 1)] = 0.0;
            m[(big_n - 1, 0)] = 0.0;
            m[(0, 0)] = -1.0;
            m[(big_n - 1, big_n - 1)] = -1.0;
            Ok(DenseOperator::new(
                m,
                "1/h^2 folded out; negated relative to the extended-system display",
            ))
        }
        BoundaryKind::Robin { a: ra, b, c, dd } => {
            if a != 1 {
                return Err(Error::InvalidSpec(
                    "direct Robin rows are limited to the 3-point stencil".into(),
                ));
            }
            let h = 1.0 / big_n as f64;
            let mut m = circulant_from_stencil(big_n, &r);
            m[(0, big_n - 1)] = 0.0;
            m[(big_n - 1, 0)] = 0.0;
            m[(0, 0)] = -1.0 + ra * h / b;
            m[(big_n - 1, big_n - 1)] = -1.0 - c * h / dd;
            Ok(DenseOperator::new(
                m,
                "1/h^2 folded out; negated relative to the extended-system display",
            ))
        }
        BoundaryKind::InteriorDirichlet {
            set,
            restore_identity,
        } => {
            let mut m = circulant_from_stencil(big_n, &r);
            for &row in set {
                for col in 0..big_n {
                    if row != col {
                        m[(row, col)] = 0.0;
                    }
                }
                m[(row, row)] = if *restore_identity { 1.0 } else { r[a] };
            }
            Ok(DenseOperator::new(
                m,
                "couplings into boundary rows zeroed; 1/h^2 folded out",
            ))
        }
        BoundaryKind::PeriodicExtensionDirichlet | BoundaryKind::PeriodicExtensionNeumann => {
            // extended system: periodic circulant on 2N points
            Ok(DenseOperator::new(
                circulant_from_stencil(2 * big_n, &r),
                "periodic extension on 2N points; 1/h^2 folded out",
            ))
        }
    }
}

/// Kronecker sum of the per-slot 1D operators over d*eta slots.
///
/// Slot 0 is the least-significant index block, matching the circuit-side
/// register order.
pub fn assemble_dd(per_dim: &[DenseOperator], d: usize, eta: usize) -> Result<DenseOperator> {
    let slots = d * eta;
    if per_dim.len() != slots {
        return Err(Error::InvalidSpec(format!(
            "expected {} one-dimensional operators, got {}",
            slots,
            per_dim.len()
        )));
    }
    let total: usize = per_dim.iter().map(|op| op.dim()).product();
    if total > DENSE_LIMIT {
        return Err(Error::CeilingExceeded {
            what: format!("assembled operator of dimension {total}"),
            limit: DENSE_LIMIT,
            hint: "use matrix-free application".into(),
        });
    }
    if slots == 1 {
        return Ok(per_dim[0].clone());
    }
    let mut m = DMatrix::zeros(total, total);
    for (k, op) in per_dim.iter().enumerate() {
        let before: usize = per_dim[..k].iter().map(|o| o.dim()).product();
        let after: usize = per_dim[k + 1..].iter().map(|o| o.dim()).product();
        // I_after (x) op (x) I_before with slot 0 least significant
        let nk = op.dim();
        for hi in 0..after {
            for i in 0..nk {
                for j in 0..nk {
                    let v = op.entries[(i, j)];
                    if v == 0.0 {
                        continue;
                    }
                    for lo in 0..before {
                        let row = lo + i * before + hi * before * nk;
                        let col = lo + j * before + hi * before * nk;
                        m[(row, col)] += v;
                    }
                }
            }
        }
    }
    Ok(DenseOperator::new(m, "kronecker sum"))
}

/// Matrix-free application of the Kronecker sum for sizes past the dense limit.
pub fn apply_kron_sum(per_dim: &[DenseOperator], x: &[f64]) -> Vec<f64> {
    let dims: Vec<usize> = per_dim.iter().map(|op| op.dim()).collect();
    let total: usize = dims.iter().product();
    assert_eq!(x.len(), total);
    let mut out = vec![0.0; total];
    for (k, op) in per_dim.iter().enumerate() {
        let before: usize = dims[..k].iter().product();
        let nk = dims[k];
        let after: usize = dims[k + 1..].iter().product();
        for hi in 0..after {
            for lo in 0..before {
                let base = lo + hi * before * nk;
                for i in 0..nk {
                    let mut acc = 0.0;
                    for j in 0..nk {
                        acc += op.entries[(i, j)] * x[base + j * before];
                    }
                    out[base + i * before] += acc;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(a: usize) -> StencilSpec {
        StencilSpec::new(a, DerivativeOrder::Second).unwrap()
    }

    #[test]
    fn periodic_4x4() {
        let op = laplacian_matrix_1d(2, spec(1), &BoundaryKind::Periodic).unwrap();
        let rows = [
            [-2.0, 1.0, 0.0, 1.0],
            [1.0, -2.0, 1.0, 0.0],
            [0.0, 1.0, -2.0, 1.0],
            [1.0, 0.0, 1.0, -2.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(op.entries[(i, j)], rows[i][j], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn dirichlet_4x4() {
        let op = laplacian_matrix_1d(2, spec(1), &BoundaryKind::Dirichlet).unwrap();
        assert_abs_diff_eq!(op.entries[(0, 3)], 0.0);
        assert_abs_diff_eq!(op.entries[(3, 0)], 0.0);
        assert_abs_diff_eq!(op.entries[(1, 0)], 1.0);
        assert_abs_diff_eq!(op.entries[(0, 0)], -2.0);
        // symmetric
        assert!((op.entries.clone() - op.entries.transpose()).abs().max() < 1e-14);
    }

    #[test]
    fn neumann_corner_diagonals() {
        let op = laplacian_matrix_1d(2, spec(1), &BoundaryKind::Neumann).unwrap();
        assert_abs_diff_eq!(op.entries[(0, 0)], -1.0);
        assert_abs_diff_eq!(op.entries[(3, 3)], -1.0);
        // row sums vanish: Neumann annihilates constants
        for i in 0..4 {
            assert_abs_diff_eq!(op.entries.row(i).sum(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn robin_corners() {
        let bc = BoundaryKind::Robin {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            dd: 1.0,
        };
        let op = laplacian_matrix_1d(3, spec(1), &bc).unwrap();
        let h = 1.0 / 8.0;
        assert_abs_diff_eq!(op.entries[(0, 0)], -1.0 + h, epsilon = 1e-14);
        assert_abs_diff_eq!(op.entries[(7, 7)], -1.0 - h, epsilon = 1e-14);
    }

    #[test]
    fn robin_rejects_zero_divisors() {
        let bc = BoundaryKind::Robin {
            a: 1.0,
            b: 0.0,
            c: 1.0,
            dd: 1.0,
        };
        assert!(laplacian_matrix_1d(3, spec(1), &bc).is_err());
    }

    #[test]
    fn interior_dirichlet_rows() {
        let bc = BoundaryKind::InteriorDirichlet {
            set: vec![1, 2],
            restore_identity: true,
        };
        let op = laplacian_matrix_1d(2, spec(1), &bc).unwrap();
        // rows 1,2 identity; rows 0,3 keep periodic couplings
        for col in 0..4 {
            assert_abs_diff_eq!(op.entries[(1, col)], if col == 1 { 1.0 } else { 0.0 });
            assert_abs_diff_eq!(op.entries[(2, col)], if col == 2 { 1.0 } else { 0.0 });
        }
        assert_abs_diff_eq!(op.entries[(0, 3)], 1.0);
        assert_abs_diff_eq!(op.entries[(0, 1)], 1.0);
    }

    #[test]
    fn contiguity_check() {
        assert!(is_contiguous_mod(&[3, 4], 8));
        assert!(is_contiguous_mod(&[7, 0], 8)); // wraps
        assert!(!is_contiguous_mod(&[1, 3], 8));
        let bc = BoundaryKind::InteriorDirichlet {
            set: vec![1, 3],
            restore_identity: true,
        };
        assert!(laplacian_matrix_1d(3, spec(1), &bc).is_err());
    }

    #[test]
    fn kron_sum_spectrum() {
        // eigenvalues of the assembled operator are sums of 1D eigenvalues
        let op1 = laplacian_matrix_1d(1, spec(1), &BoundaryKind::Periodic).unwrap();
        let assembled = assemble_dd(&[op1.clone(), op1.clone()], 2, 1).unwrap();
        let e1 = op1.entries.clone().symmetric_eigen().eigenvalues;
        let mut sums: Vec<f64> = Vec::new();
        for i in 0..e1.len() {
            for j in 0..e1.len() {
                sums.push(e1[i] + e1[j]);
            }
        }
        sums.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut e2: Vec<f64> = assembled
            .entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        e2.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in sums.iter().zip(e2.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn single_slot_assembly_is_identity_map() {
        let op = laplacian_matrix_1d(2, spec(1), &BoundaryKind::Periodic).unwrap();
        let out = assemble_dd(std::slice::from_ref(&op), 1, 1).unwrap();
        assert!((out.entries - op.entries).abs().max() < 1e-15);
    }

    #[test]
    fn two_particle_block_structure() {
        // d=1, eta=2: L (x) I + I (x) L, slot 0 least significant
        let op = laplacian_matrix_1d(1, spec(1), &BoundaryKind::Periodic).unwrap();
        let two = assemble_dd(&[op.clone(), op.clone()], 1, 2).unwrap();
        let n = op.dim();
        for i in 0..n * n {
            for j in 0..n * n {
                let (i0, i1) = (i % n, i / n);
                let (j0, j1) = (j % n, j / n);
                let mut want = 0.0;
                if i1 == j1 {
                    want += op.entries[(i0, j0)];
                }
                if i0 == j0 {
                    want += op.entries[(i1, j1)];
                }
                assert_abs_diff_eq!(two.entries[(i, j)], want, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn dense_ceiling_enforced() {
        let op = laplacian_matrix_1d(4, spec(1), &BoundaryKind::Periodic).unwrap();
        let res = assemble_dd(&[op.clone(), op.clone(), op.clone(), op.clone()], 4, 1);
        assert!(matches!(res, Err(Error::CeilingExceeded { .. })));
    }

    #[test]
    fn matrix_free_matches_dense() {
        let op = laplacian_matrix_1d(2, spec(1), &BoundaryKind::Dirichlet).unwrap();
        let ops = vec![op.clone(), op.clone()];
        let dense = assemble_dd(&ops, 2, 1).unwrap();
        let x: Vec<f64> = (0..16).map(|i| (i as f64 * 0.37).sin()).collect();
        let via_free = apply_kron_sum(&ops, &x);
        let xv = nalgebra::DVector::from_vec(x);
        let via_dense = &dense.entries * xv;
        for i in 0..16 {
            assert_abs_diff_eq!(via_free[i], via_dense[i], epsilon = 1e-12);
        }
    }
}
