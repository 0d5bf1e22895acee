//! Native trapped-ion instruction set, circuits, gate tallies and the sqrt(n) cost model.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Clifford1, MsAxis};

mod format;

pub use format::{deserialize, serialize, FORMAT_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    /// theta = +pi/2
    Forward,
    /// theta = -pi/2
    Backward,
}

impl Direction {
    pub fn inverse(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// Targeted Molmer-Sorensen gate `exp(-+i pi/4 sum_{j<k} A_j A_k)` over `qubits`.
    Ms {
        axis: MsAxis,
        direction: Direction,
        qubits: Vec<usize>,
    },
    /// `exp(-i angle/2 Z)`
    Rz { qubit: usize, angle: f64 },
    /// `|0><0| (x) I + |1><1| (x) Rz(angle)`
    CRz {
        control: usize,
        target: usize,
        angle: f64,
    },
    /// `exp(-i angle/2 Z Z)`
    Rzz { a: usize, b: usize, angle: f64 },
    Clifford1 { gate: Clifford1, qubit: usize },
    Cnot { control: usize, target: usize },
    /// `exp(i angle) I`
    GlobalPhase { angle: f64 },
}

impl Gate {
    pub fn ms(axis: MsAxis, direction: Direction, qubits: &[usize]) -> Gate {
        let mut qubits = qubits.to_vec();
        qubits.sort_unstable();
        Gate::Ms {
            axis,
            direction,
            qubits,
        }
    }

    pub fn rz(qubit: usize, angle: f64) -> Gate {
        Gate::Rz { qubit, angle }
    }

    pub fn c1(gate: Clifford1, qubit: usize) -> Gate {
        Gate::Clifford1 { gate, qubit }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Ms { qubits, .. } => qubits.clone(),
            Gate::Rz { qubit, .. } | Gate::Clifford1 { qubit, .. } => vec![*qubit],
            Gate::CRz {
                control, target, ..
            }
            | Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Rzz { a, b, .. } => vec![*a, *b],
            Gate::GlobalPhase { .. } => Vec::new(),
        }
    }

    pub fn is_ms(&self) -> bool {
        matches!(self, Gate::Ms { .. })
    }

    pub fn inverse(&self) -> Gate {
        match self.clone() {
            Gate::Ms {
                axis,
                direction,
                qubits,
            } => Gate::Ms {
                axis,
                direction: direction.inverse(),
                qubits,
            },
            Gate::Rz { qubit, angle } => Gate::Rz {
                qubit,
                angle: -angle,
            },
            Gate::CRz {
                control,
                target,
                angle,
            } => Gate::CRz {
                control,
                target,
                angle: -angle,
            },
            Gate::Rzz { a, b, angle } => Gate::Rzz { a, b, angle: -angle },
            Gate::Clifford1 { gate, qubit } => Gate::Clifford1 {
                gate: gate.inverse(),
                qubit,
            },
            g @ Gate::Cnot { .. } => g,
            Gate::GlobalPhase { angle } => Gate::GlobalPhase { angle: -angle },
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    width: n_qubits,
                });
            }
        }
        let mut sorted = qs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qs.len() {
            return Err(Error::InvalidQubitSet(format!("repeated qubit in {self}")));
        }
        if let Gate::Ms { qubits, .. } = self {
            if qubits.is_empty() {
                return Err(Error::InvalidQubitSet("empty MS qubit set".into()));
            }
        }
        let angle = match self {
            Gate::Rz { angle, .. }
            | Gate::CRz { angle, .. }
            | Gate::Rzz { angle, .. }
            | Gate::GlobalPhase { angle } => Some(*angle),
            _ => None,
        };
        if angle.is_some_and(|a| !a.is_finite()) {
            return Err(Error::InvalidExcitation(format!("non-finite angle in {self}")));
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Ms {
                axis,
                direction,
                qubits,
            } => write!(f, "MS[{}{}]{:?}", axis.name(), if *direction == Direction::Forward { "" } else { "†" }, qubits),
            Gate::Rz { qubit, angle } => write!(f, "Rz({angle:.6})@{qubit}"),
            Gate::CRz {
                control,
                target,
                angle,
            } => write!(f, "CRz({angle:.6})@{control}->{target}"),
            Gate::Rzz { a, b, angle } => write!(f, "Rzz({angle:.6})@{a},{b}"),
            Gate::Clifford1 { gate, qubit } => write!(f, "{gate}@{qubit}"),
            Gate::Cnot { control, target } => write!(f, "CNOT@{control}->{target}"),
            Gate::GlobalPhase { angle } => write!(f, "GPhase({angle:.6})"),
        }
    }
}

/// An ordered gate sequence; the first gate acts first.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    pub metadata: BTreeMap<String, String>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Appends `other` after `self` in time.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::WidthMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        self.extend(other.gates.iter().cloned())
    }

    pub fn with_label(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    /// The inverse circuit (reversed order, each gate inverted).
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            metadata: self.metadata.clone(),
        }
    }

    /// Applies a qubit relabelling `q -> perm[q]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Circuit> {
        let mut seen = vec![false; self.n_qubits];
        if perm.len() != self.n_qubits || perm.iter().any(|&q| q >= self.n_qubits || std::mem::replace(&mut seen[q], true)) {
            return Err(Error::InvalidQubitSet(format!("{perm:?} is not a permutation of {} qubits", self.n_qubits)));
        }
        let mut out = Circuit::new(self.n_qubits);
        out.metadata = self.metadata.clone();
        let m = |q: usize| perm[q];
        for g in &self.gates {
            let g2 = match g.clone() {
                Gate::Ms {
                    axis,
                    direction,
                    qubits,
                } => Gate::ms(axis, direction, &qubits.iter().map(|&q| m(q)).collect::<Vec<_>>()),
                Gate::Rz { qubit, angle } => Gate::Rz {
                    qubit: m(qubit),
                    angle,
                },
                Gate::CRz {
                    control,
                    target,
                    angle,
                } => Gate::CRz {
                    control: m(control),
                    target: m(target),
                    angle,
                },
                Gate::Rzz { a, b, angle } => Gate::Rzz {
                    a: m(a),
                    b: m(b),
                    angle,
                },
                Gate::Clifford1 { gate, qubit } => Gate::Clifford1 {
                    gate,
                    qubit: m(qubit),
                },
                Gate::Cnot { control, target } => Gate::Cnot {
                    control: m(control),
                    target: m(target),
                },
                g @ Gate::GlobalPhase { .. } => g,
            };
            out.push(g2)?;
        }
        Ok(out)
    }

    pub fn ms_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_ms()).count()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCountReport {
    pub ms_forward: usize,
    pub ms_backward: usize,
    pub ms_xx: usize,
    pub ms_yy: usize,
    pub single_qubit: usize,
    pub crz: usize,
    pub rzz: usize,
    pub cnot: usize,
    pub global_phase: usize,
    /// MS locality -> number of MS gates with that many qubits.
    pub ms_locality_histogram: BTreeMap<usize, usize>,
}

impl GateCountReport {
    pub fn ms_total(&self) -> usize {
        self.ms_forward + self.ms_backward
    }
}

pub fn count(c: &Circuit) -> GateCountReport {
    let mut r = GateCountReport::default();
    for g in c.gates() {
        match g {
            Gate::Ms {
                axis,
                direction,
                qubits,
            } => {
                match direction {
                    Direction::Forward => r.ms_forward += 1,
                    Direction::Backward => r.ms_backward += 1,
                }
                match axis {
                    MsAxis::XX => r.ms_xx += 1,
                    MsAxis::YY => r.ms_yy += 1,
                }
                *r.ms_locality_histogram.entry(qubits.len()).or_default() += 1;
            }
            Gate::Rz { .. } | Gate::Clifford1 { .. } => r.single_qubit += 1,
            Gate::CRz { .. } => r.crz += 1,
            Gate::Rzz { .. } => r.rzz += 1,
            Gate::Cnot { .. } => r.cnot += 1,
            Gate::GlobalPhase { .. } => r.global_phase += 1,
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    /// Sum of `tau * sqrt(locality)` over MS gates.
    pub total_ms_time: f64,
    /// Number of layers under greedy disjoint-qubit layering.
    pub sequential_depth: usize,
}

pub fn cost(c: &Circuit, tau: f64) -> Result<CostReport> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidExcitation(format!("time unit must be positive, got {tau}")));
    }
    let total_ms_time = c
        .gates()
        .iter()
        .filter_map(|g| match g {
            Gate::Ms { qubits, .. } => Some(tau * (qubits.len() as f64).sqrt()),
            _ => None,
        })
        .sum();
    Ok(CostReport {
        total_ms_time,
        sequential_depth: layered_depth(c),
    })
}

/// Greedy layering: each gate goes into the layer after the latest layer touching
/// any of its qubits. Global phases occupy no layer.
pub fn layered_depth(c: &Circuit) -> usize {
    let mut frontier = vec![0usize; c.n_qubits()];
    let mut depth = 0;
    for g in c.gates() {
        let qs = g.qubits();
        if qs.is_empty() {
            continue;
        }
        let layer = qs.iter().map(|&q| frontier[q]).max().unwrap_or(0) + 1;
        for &q in &qs {
            frontier[q] = layer;
        }
        depth = depth.max(layer);
    }
    depth
}
