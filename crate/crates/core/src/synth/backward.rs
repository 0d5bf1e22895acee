//! Trading backward MS gates for forward ones.
//!
//! In the `A`-eigenbasis the MS phase is `exp(-i pi/4 (s^2 - n)/2)` with `s` the
//! eigenvalue sum, so `MS^2` is `exp(i pi n/4) (-1)^(n/2) A^n` for even `n` and the
//! scalar `exp(-i pi (1 - n)/4)` for odd `n`.

use std::f64::consts::PI;

use crate::circuit::{Circuit, Direction, Gate};
use crate::error::Result;
use crate::pauli::{Clifford1, MsAxis};

/// `MS^dagger = exp(i phase) (A on every qubit, if paulis) MS` on `n` qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BackwardIdentity {
    pub paulis: bool,
    pub phase: f64,
}

/// `k pi/4` with `k` reduced into `(-4, 4]`.
fn eighth_turns(k: i64) -> f64 {
    let r = k.rem_euclid(8);
    let r = if r > 4 { r - 8 } else { r };
    r as f64 * PI / 4.0
}

pub fn backward_ms_identity(n: usize) -> BackwardIdentity {
    let n = n as i64;
    if n % 2 == 0 {
        let sign = if (n / 2) % 2 == 1 { 4 } else { 0 };
        BackwardIdentity {
            paulis: true,
            phase: eighth_turns(-n + sign),
        }
    } else {
        BackwardIdentity {
            paulis: false,
            phase: eighth_turns(1 - n),
        }
    }
}

/// Replaces every backward MS by local Paulis, a forward MS and a global phase.
/// The unitary is unchanged exactly; running it twice changes nothing more.
pub fn eliminate_backward_ms(c: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(c.n_qubits());
    out.metadata = c.metadata.clone();
    for g in c.gates() {
        match g {
            Gate::Ms {
                axis,
                direction: Direction::Backward,
                qubits,
            } => {
                let id = backward_ms_identity(qubits.len());
                if id.paulis {
                    let pauli = match axis {
                        MsAxis::XX => Clifford1::X,
                        MsAxis::YY => Clifford1::Y,
                    };
                    for &q in qubits {
                        out.push(Gate::c1(pauli, q))?;
                    }
                }
                out.push(Gate::ms(*axis, Direction::Forward, qubits))?;
                if id.phase != 0.0 {
                    out.push(Gate::GlobalPhase { angle: id.phase })?;
                }
            }
            other => out.push(other.clone())?,
        }
    }
    Ok(out)
}
