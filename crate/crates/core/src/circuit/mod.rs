//! Gate-level circuit representation.
//!
//! Qubit 0 is the least-significant bit of every register. Multi-controlled
//! gates carry explicit polarities (control-on-0 allowed); `McU` nests a whole
//! sub-circuit under a control pattern, which is how SELECT oracles are built.

pub mod resources;
pub mod state;
pub mod text;

pub use resources::{count_resources, ResourceReport};
pub use state::StateVector;

use crate::error::{Error, Result};
use num_complex::Complex64;

/// A control qubit with polarity: fires on |1> when `on_one`, else on |0>.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ctl {
    pub qubit: usize,
    pub on_one: bool,
}

impl Ctl {
    pub fn one(qubit: usize) -> Self {
        Self { qubit, on_one: true }
    }
    pub fn zero(qubit: usize) -> Self {
        Self {
            qubit,
            on_one: false,
        }
    }
}

/// Truth-table oracle acting on an ordered subset of qubits.
#[derive(Debug, Clone, PartialEq)]
pub enum OpaqueKind {
    /// Diagonal phases indexed by the little-endian pattern of `qubits`.
    Diagonal(Vec<Complex64>),
    /// Basis permutation: pattern p maps to table[p].
    Permutation(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpaqueGate {
    pub qubits: Vec<usize>,
    pub kind: OpaqueKind,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X(usize),
    Z(usize),
    H(usize),
    /// diag(1, e^{i angle}) on the target.
    PhaseZ { target: usize, angle: f64 },
    GlobalPhase(f64),
    Swap(usize, usize),
    McX { controls: Vec<Ctl>, target: usize },
    McZ { controls: Vec<Ctl>, target: usize },
    McU { controls: Vec<Ctl>, body: Vec<Gate> },
    Opaque(OpaqueGate),
}

impl Gate {
    /// All qubits the gate touches (controls and targets).
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X(t) | Gate::Z(t) | Gate::H(t) => vec![*t],
            Gate::PhaseZ { target, .. } => vec![*target],
            Gate::GlobalPhase(_) => vec![],
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::McX { controls, target } | Gate::McZ { controls, target } => {
                let mut q: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                q.push(*target);
                q
            }
            Gate::McU { controls, body } => {
                let mut q: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                for g in body {
                    q.extend(g.qubits());
                }
                q.sort_unstable();
                q.dedup();
                q
            }
            Gate::Opaque(op) => op.qubits.clone(),
        }
    }

    /// Inverse gate.
    pub fn dagger(&self) -> Gate {
        match self {
            Gate::PhaseZ { target, angle } => Gate::PhaseZ {
                target: *target,
                angle: -angle,
            },
            Gate::GlobalPhase(a) => Gate::GlobalPhase(-a),
            Gate::McU { controls, body } => Gate::McU {
                controls: controls.clone(),
                body: invert_gates(body),
            },
            Gate::Opaque(op) => {
                let kind = match &op.kind {
                    OpaqueKind::Diagonal(d) => {
                        OpaqueKind::Diagonal(d.iter().map(|z| z.conj()).collect())
                    }
                    OpaqueKind::Permutation(p) => {
                        let mut inv = vec![0usize; p.len()];
                        for (i, &pi) in p.iter().enumerate() {
                            inv[pi] = i;
                        }
                        OpaqueKind::Permutation(inv)
                    }
                };
                Gate::Opaque(OpaqueGate {
                    qubits: op.qubits.clone(),
                    kind,
                    label: format!("{}^-1", op.label),
                })
            }
            g => g.clone(), // X, Z, H, Swap, McX, McZ are involutions
        }
    }

    /// Relabels every qubit index through `map`.
    pub fn remap(&self, map: &[usize]) -> Gate {
        let m = |q: usize| map[q];
        let mc = |cs: &[Ctl]| {
            cs.iter()
                .map(|c| Ctl {
                    qubit: m(c.qubit),
                    on_one: c.on_one,
                })
                .collect::<Vec<_>>()
        };
        match self {
            Gate::X(t) => Gate::X(m(*t)),
            Gate::Z(t) => Gate::Z(m(*t)),
            Gate::H(t) => Gate::H(m(*t)),
            Gate::PhaseZ { target, angle } => Gate::PhaseZ {
                target: m(*target),
                angle: *angle,
            },
            Gate::GlobalPhase(a) => Gate::GlobalPhase(*a),
            Gate::Swap(a, b) => Gate::Swap(m(*a), m(*b)),
            Gate::McX { controls, target } => Gate::McX {
                controls: mc(controls),
                target: m(*target),
            },
            Gate::McZ { controls, target } => Gate::McZ {
                controls: mc(controls),
                target: m(*target),
            },
            Gate::McU { controls, body } => Gate::McU {
                controls: mc(controls),
                body: body.iter().map(|g| g.remap(map)).collect(),
            },
            Gate::Opaque(op) => Gate::Opaque(OpaqueGate {
                qubits: op.qubits.iter().map(|&q| m(q)).collect(),
                kind: op.kind.clone(),
                label: op.label.clone(),
            }),
        }
    }
}

pub fn invert_gates(gates: &[Gate]) -> Vec<Gate> {
    gates.iter().rev().map(|g| g.dagger()).collect()
}

/// A named contiguous qubit range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Register {
    pub fn new(name: impl Into<String>, start: usize, len: usize) -> Self {
        Self {
            name: name.into(),
            start,
            len,
        }
    }

    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub num_qubits: usize,
    pub registers: Vec<Register>,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            registers: Vec::new(),
            gates: Vec::new(),
        }
    }

    pub fn with_register(mut self, name: impl Into<String>, start: usize, len: usize) -> Self {
        self.registers.push(Register::new(name, start, len));
        self
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn extend(&mut self, gs: impl IntoIterator<Item = Gate>) {
        self.gates.extend(gs);
    }

    /// Checks qubit ranges, control/target disjointness and register layout.
    pub fn validate(&self) -> Result<()> {
        fn check(gates: &[Gate], width: usize) -> Result<()> {
            for g in gates {
                for q in g.qubits() {
                    if q >= width {
                        return Err(Error::QubitOutOfRange {
                            index: q,
                            width,
                        });
                    }
                }
                match g {
                    Gate::McX { controls, target } | Gate::McZ { controls, target } => {
                        let mut seen: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                        seen.push(*target);
                        let len = seen.len();
                        seen.sort_unstable();
                        seen.dedup();
                        if seen.len() != len {
                            return Err(Error::OverlappingQubits(*target));
                        }
                    }
                    Gate::McU { controls, body } => {
                        let ctrl_qs: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                        for b in body {
                            for q in b.qubits() {
                                if ctrl_qs.contains(&q) {
                                    return Err(Error::OverlappingQubits(q));
                                }
                            }
                        }
                        check(body, width)?;
                    }
                    Gate::Swap(a, b) if a == b => {
                        return Err(Error::OverlappingQubits(*a));
                    }
                    Gate::Opaque(op) => {
                        let mut qs = op.qubits.clone();
                        let len = qs.len();
                        qs.sort_unstable();
                        qs.dedup();
                        if qs.len() != len {
                            return Err(Error::OverlappingQubits(op.qubits[0]));
                        }
                        let dim = 1usize << op.qubits.len();
                        let ok = match &op.kind {
                            OpaqueKind::Diagonal(d) => d.len() == dim,
                            OpaqueKind::Permutation(p) => {
                                let mut sorted = p.clone();
                                sorted.sort_unstable();
                                p.len() == dim && sorted.iter().enumerate().all(|(i, &v)| i == v)
                            }
                        };
                        if !ok {
                            return Err(Error::InvalidSpec(format!(
                                "opaque table for '{}' is not a valid size-{} oracle",
                                op.label, dim
                            )));
                        }
                    }
                    _ => {}
                }
            }
            Ok(())
        }
        check(&self.gates, self.num_qubits)?;
        // registers must partition [0, num_qubits) when any are declared
        if !self.registers.is_empty() {
            let mut covered = vec![false; self.num_qubits];
            for r in &self.registers {
                for q in r.qubits() {
                    if q >= self.num_qubits || covered[q] {
                        return Err(Error::InvalidSpec(format!(
                            "register '{}' overlaps or exceeds the circuit width",
                            r.name
                        )));
                    }
                    covered[q] = true;
                }
            }
            if covered.iter().any(|c| !c) {
                return Err(Error::InvalidSpec(
                    "registers do not cover every qubit".into(),
                ));
            }
        }
        Ok(())
    }

    /// Sequential composition: first `self`, then `other` (matrix U_other * U_self).
    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::WidthMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        let mut out = self.clone();
        out.gates.extend(other.gates.iter().cloned());
        Ok(out)
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            registers: self.registers.clone(),
            gates: invert_gates(&self.gates),
        }
    }

    /// Wraps the whole circuit under a control pattern.
    pub fn controlled(&self, controls: Vec<Ctl>) -> Result<Circuit> {
        let width = self
            .num_qubits
            .max(controls.iter().map(|c| c.qubit + 1).max().unwrap_or(0));
        for c in &controls {
            for g in &self.gates {
                if g.qubits().contains(&c.qubit) {
                    return Err(Error::OverlappingQubits(c.qubit));
                }
            }
        }
        let mut out = Circuit::new(width);
        out.push(Gate::McU {
            controls,
            body: self.gates.clone(),
        });
        Ok(out)
    }

    /// Same gates on a wider circuit, with qubit k moved to `map[k]`.
    pub fn remapped(&self, new_width: usize, map: &[usize]) -> Circuit {
        assert_eq!(map.len(), self.num_qubits);
        Circuit {
            num_qubits: new_width,
            registers: Vec::new(),
            gates: self.gates.iter().map(|g| g.remap(map)).collect(),
        }
    }
}

/// Dense unitary of the circuit, columns obtained by simulation.
pub fn unitary_of(circuit: &Circuit) -> Result<nalgebra::DMatrix<Complex64>> {
    if circuit.num_qubits > 12 {
        return Err(Error::CeilingExceeded {
            what: format!("dense unitary on {} qubits", circuit.num_qubits),
            limit: 12,
            hint: "extract columns individually instead".into(),
        });
    }
    circuit.validate()?;
    let dim = 1usize << circuit.num_qubits;
    let mut m = nalgebra::DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut st = StateVector::basis(circuit.num_qubits, col);
        st.apply(circuit)?;
        for row in 0..dim {
            m[(row, col)] = st.amps[row];
        }
    }
    Ok(m)
}
