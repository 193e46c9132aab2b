//! Clamped pair potentials and the discrete convective operator.

use super::stencil::{first_derivative_coefficients, DerivativeOrder, StencilSpec};
use super::{DenseOperator, GridSpec, DENSE_LIMIT};
use crate::error::{Error, Result};
use nalgebra::DMatrix;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialKind {
    LennardJones { epsilon: f64, sigma: f64 },
    Quadratic,
    InversePower { c: f64 },
}

/// A pair potential clamped to constants outside [r_min, r_max] and divided
/// by `v_scale` so the clamped values stay within [-1, 1].
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    /// Cutoff parameter of the inverse-power approximation theory.
    pub delta: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub v_scale: f64,
}

impl PotentialSpec {
    /// Builds a spec with `v_scale` chosen so sup |V| = 1 on [r_min, r_max].
    pub fn new(kind: PotentialKind, delta: f64, r_min: f64, r_max: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= r_min && r_min < r_max && r_max <= 1.0) {
            return Err(Error::InvalidSpec(
                "require 0 < delta <= r_min < r_max <= 1".into(),
            ));
        }
        let mut sup: f64 = 0.0;
        for i in 0..=4096 {
            let r = r_min + (r_max - r_min) * i as f64 / 4096.0;
            sup = sup.max(raw_value(kind, r).abs());
        }
        if sup == 0.0 {
            sup = 1.0;
        }
        Ok(Self {
            kind,
            delta,
            r_min,
            r_max,
            v_scale: sup,
        })
    }

    /// Clamped, scaled potential value at radius r >= 0.
    pub fn value(&self, r: f64) -> f64 {
        let rc = r.clamp(self.r_min, self.r_max);
        raw_value(self.kind, rc) / self.v_scale
    }
}

fn raw_value(kind: PotentialKind, r: f64) -> f64 {
    match kind {
        PotentialKind::LennardJones { epsilon, sigma } => {
            let s6 = (sigma / r).powi(6);
            4.0 * epsilon * (s6 * s6 - s6)
        }
        PotentialKind::Quadratic => r * r,
        PotentialKind::InversePower { c } => 0.5 * r.powf(-c),
    }
}

/// Clamped potential evaluated directly from a squared radius.
pub fn potential_value(spec: &PotentialSpec, r: f64) -> f64 {
    spec.value(r)
}

fn decode(index: usize, n: usize, slots: usize) -> Vec<usize> {
    let mask = (1usize << n) - 1;
    (0..slots).map(|s| (index >> (s * n)) & mask).collect()
}

/// Physical squared distance between particles p and q of a flattened grid
/// index, with the coordinate of (p, dim k) shifted by `shift` modulo N.
fn pair_sq_distance(
    coords: &[usize],
    grid: &GridSpec,
    p: usize,
    q: usize,
    shift_dim: Option<(usize, i64)>,
) -> f64 {
    let big_n = grid.points_per_dim() as i64;
    let denom = (big_n - 1).max(1) as f64;
    let mut acc = 0.0;
    for k in 0..grid.d {
        let mut xp = coords[p * grid.d + k] as i64;
        if let Some((sk, l)) = shift_dim {
            if sk == k {
                xp = (xp + l).rem_euclid(big_n);
            }
        }
        let xq = coords[q * grid.d + k] as i64;
        let dx = (xp - xq) as f64 / denom;
        acc += dx * dx;
    }
    acc
}

/// c_l-weighted shifted evaluation of the clamped potential: the discrete
/// partial derivative of V with respect to particle p's k-th coordinate.
pub fn partial_v(
    spec: &PotentialSpec,
    grid: &GridSpec,
    coords: &[usize],
    p: usize,
    q: usize,
    k: usize,
    c: &[f64],
) -> f64 {
    let a = c.len() / 2;
    let mut acc = 0.0;
    for (idx, &cl) in c.iter().enumerate() {
        if cl == 0.0 {
            continue;
        }
        let l = idx as i64 - a as i64;
        let r2 = pair_sq_distance(coords, grid, p, q, Some((k, l)));
        acc += cl * spec.value(r2.sqrt());
    }
    acc
}

/// Discrete convective operator sum_i sum_{j<i} sum_k diag(d_k^i V(a^i, a^j)) D_k^i,
/// with the first-derivative stencil matrix acting on particle i's slot k.
///
/// eta < 2 yields the zero operator (no pairs).
pub fn convective_matrix(
    grid: &GridSpec,
    a: usize,
    spec: &PotentialSpec,
) -> Result<DenseOperator> {
    let total = grid
        .total_dim()
        .filter(|&t| t <= DENSE_LIMIT)
        .ok_or_else(|| Error::CeilingExceeded {
            what: "convective reference matrix".into(),
            limit: DENSE_LIMIT,
            hint: "use apply_convective for matrix-free products".into(),
        })?;
    let c = first_derivative_coefficients(StencilSpec::new(a, DerivativeOrder::First)?)?;
    let slots = grid.slots();
    let n = grid.n;
    let big_n = grid.points_per_dim();
    let mut m = DMatrix::zeros(total, total);
    if grid.eta < 2 {
        return Ok(DenseOperator::new(m, "zero operator: no pairs"));
    }
    for row in 0..total {
        let coords = decode(row, n, slots);
        for i in 0..grid.eta {
            for j in 0..i {
                for k in 0..grid.d {
                    let dv = partial_v(spec, grid, &coords, i, j, k, &c);
                    if dv == 0.0 {
                        continue;
                    }
                    // D_k^i: first-derivative circulant on slot (i*d + k):
                    // row entries D[row, col] = c_l with col shifted by -l
                    let slot = i * grid.d + k;
                    let xs = coords[slot];
                    for (idx, &cl) in c.iter().enumerate() {
                        if cl == 0.0 {
                            continue;
                        }
                        let l = idx as i64 - a as i64;
                        // S^l has entry (x, x-l): row xs couples to column xs-l
                        let col_coord = (xs as i64 - l).rem_euclid(big_n as i64) as usize;
                        let col = row - (xs << (slot * n)) + (col_coord << (slot * n));
                        m[(row, col)] += dv * cl;
                    }
                }
            }
        }
    }
    Ok(DenseOperator::new(m, "diag(dV) * D, 1/h folded out"))
}
