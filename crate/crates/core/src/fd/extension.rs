//! Odd/even periodic extensions and mollification of forcing functions.

use crate::error::{Error, Result};

/// Odd periodic extension of N samples onto 2N points.
///
/// Input samples live at nodes x_j = j h, j in [0, N); the output covers
/// [0, 2) with the reflection points x_0 = 0 and x_N = 1 forced to zero.
pub fn odd_extension(samples: &[f64]) -> Result<Vec<f64>> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InvalidSpec("need at least 2 samples".into()));
    }
    let mut out = vec![0.0; 2 * n];
    out[0] = 0.0;
    out[1..n].copy_from_slice(&samples[1..n]);
    out[n] = 0.0;
    for j in 1..n {
        out[2 * n - j] = -samples[j];
    }
    Ok(out)
}

/// Even periodic extension: mirror-first convention, boundary sample duplicated.
///
/// [f0..f_{N-1}] -> [f_{N-1}..f0, f0..f_{N-1}], so samples sit at cell centers
/// and the result is mirror-symmetric about the seam.
pub fn even_extension(samples: &[f64]) -> Result<Vec<f64>> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InvalidSpec("need at least 2 samples".into()));
    }
    let mut out = Vec::with_capacity(2 * n);
    out.extend(samples.iter().rev());
    out.extend_from_slice(samples);
    Ok(out)
}

fn bump(k: f64, x: f64) -> f64 {
    let u = k * x;
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 / (u * u - 1.0)).exp()
    }
}

/// Circular convolution of the extended samples with the normalized bump
/// e^{1/((kx)^2-1)}, via composite Simpson quadrature on a 4N-point refinement
/// of the length-2 period. The kernel mass is computed with the same rule, so
/// constants are preserved exactly up to rounding.
pub fn mollify(extended: &[f64], k: f64) -> Result<Vec<f64>> {
    if k <= 1.0 {
        return Err(Error::InvalidSpec(
            "mollifier constant k must exceed 1 (bump support exceeds domain)".into(),
        ));
    }
    let m = extended.len();
    if m < 4 {
        return Err(Error::InvalidSpec("extended vector too short".into()));
    }
    let period = 2.0;
    let h = period / m as f64;
    // refined grid of 4N = 2m points; linear interpolation of the samples
    let q = 2 * m;
    let hq = period / q as f64;
    let fine: Vec<f64> = (0..q)
        .map(|i| {
            let t = i as f64 * hq / h;
            let j = t.floor() as usize % m;
            let frac = t - t.floor();
            extended[j] * (1.0 - frac) + extended[(j + 1) % m] * frac
        })
        .collect();
    // composite Simpson weights on the periodic refinement (q even)
    let w = |i: usize| -> f64 {
        if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let mut out = vec![0.0; m];
    let mut mass = 0.0;
    for i in 0..q {
        let x = i as f64 * hq;
        let xp = if x > 1.0 { x - 2.0 } else { x };
        mass += w(i) * bump(k, xp);
    }
    for (j, o) in out.iter_mut().enumerate() {
        let xj = j as f64 * h;
        let mut acc = 0.0;
        for i in 0..q {
            let y = i as f64 * hq;
            let mut dx = xj - y;
            // periodic distance into (-1, 1]
            while dx > 1.0 {
                dx -= 2.0;
            }
            while dx <= -1.0 {
                dx += 2.0;
            }
            acc += w(i) * bump(k, dx) * fine[i];
        }
        *o = acc / mass;
    }
    Ok(out)
}

/// Quadrature mass of the normalized bump on the same refinement, for checking
/// convergence of the discrete rule against a fine reference.
pub fn mollifier_mass(k: f64, refinement: usize) -> f64 {
    let q = refinement;
    let hq = 2.0 / q as f64;
    let mut coarse = 0.0;
    for i in 0..q {
        let x = i as f64 * hq;
        let xp = if x > 1.0 { x - 2.0 } else { x };
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        coarse += w * bump(k, xp) * hq / 3.0;
    }
    // dense reference on 64x the points
    let qf = 64 * q;
    let hf = 2.0 / qf as f64;
    let mut fine = 0.0;
    for i in 0..qf {
        let x = i as f64 * hf;
        let xp = if x > 1.0 { x - 2.0 } else { x };
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        fine += w * bump(k, xp) * hf / 3.0;
    }
    coarse / fine
}
