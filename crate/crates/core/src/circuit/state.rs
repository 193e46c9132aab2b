//! Dense statevector simulation.
//!
//! Gates are applied in order. Controlled sub-circuits restrict every inner
//! gate to the control-matching subspace, so a SELECT over k branches costs
//! about one full pass over the state instead of k.

use super::{Circuit, Ctl, Gate, OpaqueGate, OpaqueKind};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;

const PAR_THRESHOLD: usize = 1 << 18;

#[derive(Debug, Clone)]
pub struct StateVector {
    pub num_qubits: usize,
    pub amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << num_qubits {
            return Err(Error::InvalidSpec(format!(
                "amplitude vector of length {} does not fit {} qubits",
                amps.len(),
                num_qubits
            )));
        }
        Ok(Self { num_qubits, amps })
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies the circuit in place.
    pub fn apply(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits != self.num_qubits {
            return Err(Error::WidthMismatch {
                expected: self.num_qubits,
                got: circuit.num_qubits,
            });
        }
        let mut scratch: Vec<Complex64> = Vec::new();
        apply_gates(
            &mut self.amps,
            self.num_qubits,
            &circuit.gates,
            0,
            0,
            &mut scratch,
        );
        Ok(())
    }
}

/// Applies the circuit and checks the norm is preserved to 1e-12.
pub fn simulate(circuit: &Circuit, state: &StateVector) -> Result<StateVector> {
    circuit.validate()?;
    let mut out = state.clone();
    let norm_in = out.norm();
    out.apply(circuit)?;
    let norm_out = out.norm();
    if (norm_out - norm_in).abs() > 1e-12 * norm_in.max(1.0) {
        return Err(Error::InvalidSpec(format!(
            "simulation broke unitarity: |norm {norm_out} - {norm_in}| too large"
        )));
    }
    Ok(out)
}

fn apply_gates(
    amps: &mut [Complex64],
    n: usize,
    gates: &[Gate],
    mask: usize,
    val: usize,
    scratch: &mut Vec<Complex64>,
) {
    for g in gates {
        apply_gate(amps, n, g, mask, val, scratch);
    }
}

fn ctl_mask(controls: &[Ctl]) -> (usize, usize) {
    let mut mask = 0usize;
    let mut val = 0usize;
    for c in controls {
        mask |= 1 << c.qubit;
        if c.on_one {
            val |= 1 << c.qubit;
        }
    }
    (mask, val)
}

fn apply_gate(
    amps: &mut [Complex64],
    n: usize,
    gate: &Gate,
    mask: usize,
    val: usize,
    scratch: &mut Vec<Complex64>,
) {
    match gate {
        Gate::X(t) => pair_op(amps, n, *t, mask, val, |a, b| (b, a)),
        Gate::H(t) => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            pair_op(amps, n, *t, mask, val, move |a, b| {
                ((a + b) * s, (a - b) * s)
            })
        }
        Gate::Z(t) => diag_op(amps, mask | (1 << t), val | (1 << t), |a| -a),
        Gate::PhaseZ { target, angle } => {
            let ph = Complex64::from_polar(1.0, *angle);
            diag_op(amps, mask | (1 << target), val | (1 << target), move |a| {
                a * ph
            })
        }
        Gate::GlobalPhase(angle) => {
            let ph = Complex64::from_polar(1.0, *angle);
            diag_op(amps, mask, val, move |a| a * ph)
        }
        Gate::Swap(a, b) => {
            let (lo, hi) = (*a.min(b), *a.max(b));
            // indices with bit lo=1, hi=0 exchange with their ba-swapped partner
            let m = mask | (1 << lo) | (1 << hi);
            let v = val | (1 << lo);
            for_each_match(amps.len(), m, v, |i| {
                let j = i ^ (1 << lo) ^ (1 << hi);
                amps.swap(i, j);
            });
        }
        Gate::McX { controls, target } => {
            let (cm, cv) = ctl_mask(controls);
            pair_op(amps, n, *target, mask | cm, val | cv, |a, b| (b, a));
        }
        Gate::McZ { controls, target } => {
            let (cm, cv) = ctl_mask(controls);
            diag_op(
                amps,
                mask | cm | (1 << target),
                val | cv | (1 << target),
                |a| -a,
            );
        }
        Gate::McU { controls, body } => {
            let (cm, cv) = ctl_mask(controls);
            apply_gates(amps, n, body, mask | cm, val | cv, scratch);
        }
        Gate::Opaque(op) => apply_opaque(amps, op, mask, val, scratch),
    }
}

/// Applies f to every amplitude whose index matches the control pattern.
fn diag_op(
    amps: &mut [Complex64],
    mask: usize,
    val: usize,
    f: impl Fn(Complex64) -> Complex64 + Sync,
) {
    if mask == 0 {
        if amps.len() >= PAR_THRESHOLD {
            amps.par_iter_mut().for_each(|a| *a = f(*a));
        } else {
            for a in amps.iter_mut() {
                *a = f(*a);
            }
        }
        return;
    }
    if amps.len() >= PAR_THRESHOLD {
        amps.par_iter_mut().enumerate().for_each(|(i, a)| {
            if i & mask == val {
                *a = f(*a);
            }
        });
    } else {
        for (i, a) in amps.iter_mut().enumerate() {
            if i & mask == val {
                *a = f(*a);
            }
        }
    }
}

/// Applies a 2x2 map to the (|0>,|1>) pair of the target on matching indices.
fn pair_op(
    amps: &mut [Complex64],
    n: usize,
    target: usize,
    mask: usize,
    val: usize,
    f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64) + Sync,
) {
    debug_assert_eq!(mask & (1 << target), 0, "target under control");
    let tbit = 1usize << target;
    let len = amps.len();
    if len >= PAR_THRESHOLD && target + 1 < n {
        let chunk = tbit << 1;
        let base_mask = mask;
        amps.par_chunks_mut(chunk).enumerate().for_each(|(ci, ch)| {
            let high = ci * chunk;
            for lo in 0..tbit {
                let i = high | lo;
                if i & base_mask == val & base_mask {
                    let a = ch[lo];
                    let b = ch[lo | tbit];
                    let (na, nb) = f(a, b);
                    ch[lo] = na;
                    ch[lo | tbit] = nb;
                }
            }
        });
        return;
    }
    for_each_match(len, mask | tbit, val, |i| {
        let j = i | tbit;
        let (na, nb) = f(amps[i], amps[j]);
        amps[i] = na;
        amps[j] = nb;
    });
}

/// Iterates indices i with i & mask == val by enumerating the free bits.
fn for_each_match(len: usize, mask: usize, val: usize, mut f: impl FnMut(usize)) {
    let n_bits = len.trailing_zeros() as usize;
    let free: Vec<usize> = (0..n_bits).filter(|b| mask & (1 << b) == 0).collect();
    let count = 1usize << free.len();
    for k in 0..count {
        let mut idx = val & mask;
        let mut kk = k;
        for &b in &free {
            if kk & 1 == 1 {
                idx |= 1 << b;
            }
            kk >>= 1;
        }
        f(idx);
    }
}

fn apply_opaque(
    amps: &mut [Complex64],
    op: &OpaqueGate,
    mask: usize,
    val: usize,
    scratch: &mut Vec<Complex64>,
) {
    let extract = |i: usize| -> usize {
        let mut p = 0usize;
        for (k, &q) in op.qubits.iter().enumerate() {
            if i & (1 << q) != 0 {
                p |= 1 << k;
            }
        }
        p
    };
    match &op.kind {
        OpaqueKind::Diagonal(table) => {
            if amps.len() >= PAR_THRESHOLD {
                amps.par_iter_mut().enumerate().for_each(|(i, a)| {
                    if i & mask == val {
                        *a *= table[extract(i)];
                    }
                });
            } else {
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & mask == val {
                        *a *= table[extract(i)];
                    }
                }
            }
        }
        OpaqueKind::Permutation(table) => {
            // out[insert(table[p], rest)] = in[i]
            scratch.clear();
            scratch.extend_from_slice(amps);
            let insert = |i: usize, p: usize| -> usize {
                let mut out = i;
                for (k, &q) in op.qubits.iter().enumerate() {
                    if p & (1 << k) != 0 {
                        out |= 1 << q;
                    } else {
                        out &= !(1 << q);
                    }
                }
                out
            };
            for (i, &a) in scratch.iter().enumerate() {
                if i & mask == val {
                    let j = insert(i, table[extract(i)]);
                    amps[j] = a;
                }
            }
        }
    }
}
