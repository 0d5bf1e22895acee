//! One MS pair around a diagonal layer.
//!
//! With `C = D M` (forward MS `M` on a qubit set, then single-qubit Cliffords `D`),
//! `exp(-i phi P) = C exp(-i phi sigma Z_S) C^dagger` whenever `C Z_S C^dagger = sigma P`.
//! The circuit reads `D^dagger`, backward MS, rotations, forward MS, `D`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Direction, Gate};
use crate::error::{Error, Result};
use crate::pauli::{conjugate_by_clifford, conjugate_by_ms, Clifford1, CliffordGate, Letter, MsAxis, PauliString};

/// A rotation `exp(-i coefficient * target)` requested from a frame.
#[derive(Clone, Debug)]
pub(crate) struct Entry {
    /// Qubits whose `Z` product is mapped onto the target. The Rz sits on the last one.
    pub zs: Vec<usize>,
    pub target: PauliString,
    pub coefficient: f64,
    pub control: Option<usize>,
}

impl Entry {
    pub fn new(z: usize, target: PauliString, coefficient: f64) -> Self {
        Entry {
            zs: vec![z],
            target,
            coefficient,
            control: None,
        }
    }
}

/// A diagonal rotation inside a frame, after the frame Clifford has been peeled off.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    /// `Z` product qubits; more than one means a CNOT ladder onto the last.
    pub zs: Vec<usize>,
    /// Rz angle including the frame sign.
    pub angle: f64,
    /// Sign of `C Z_S C^dagger` relative to the target string.
    pub sign: i8,
    pub control: Option<usize>,
}

/// Layout of one MS pair: the MS set, its dressing and the diagonal layer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisPlan {
    /// `None` for a single-qubit rotation that needs no MS gate.
    pub axis: Option<MsAxis>,
    pub qubit_window: Vec<usize>,
    /// `|window| = 2m` or `2m + 1`.
    pub m: usize,
    /// Per-qubit Cliffords applied (in order) after the forward MS.
    pub dressing: BTreeMap<usize, Vec<Clifford1>>,
    pub rotations: Vec<Rotation>,
}

impl SynthesisPlan {
    /// Uncontrolled single-qubit Rz angles by qubit.
    pub fn rz_assignments(&self) -> BTreeMap<usize, f64> {
        self.rotations
            .iter()
            .filter(|r| r.zs.len() == 1 && r.control.is_none())
            .map(|r| (r.zs[0], r.angle))
            .collect()
    }

    pub fn ms_count(&self) -> usize {
        if self.axis.is_some() {
            2
        } else {
            0
        }
    }

    pub fn emit(&self, c: &mut Circuit) -> Result<()> {
        for (&q, gates) in &self.dressing {
            for g in gates.iter().rev() {
                c.push(Gate::c1(g.inverse(), q))?;
            }
        }
        if let Some(axis) = self.axis {
            c.push(Gate::ms(axis, Direction::Backward, &self.qubit_window))?;
        }
        for r in &self.rotations {
            let (&t, ladder) = r.zs.split_last().expect("rotation without qubits");
            for &a in ladder {
                c.push(Gate::Cnot { control: a, target: t })?;
            }
            c.push(match r.control {
                None => Gate::rz(t, r.angle),
                Some(j) => Gate::CRz {
                    control: j,
                    target: t,
                    angle: r.angle,
                },
            })?;
            for &a in ladder.iter().rev() {
                c.push(Gate::Cnot { control: a, target: t })?;
            }
        }
        if let Some(axis) = self.axis {
            c.push(Gate::ms(axis, Direction::Forward, &self.qubit_window))?;
        }
        for (&q, gates) in &self.dressing {
            for &g in gates {
                c.push(Gate::c1(g, q))?;
            }
        }
        Ok(())
    }

    pub fn to_circuit(&self, n_qubits: usize) -> Result<Circuit> {
        let mut c = Circuit::new(n_qubits);
        self.emit(&mut c)?;
        Ok(c)
    }
}

/// Letter-level candidates, shortest first. Signs are tracked separately.
fn candidates() -> Vec<Vec<Clifford1>> {
    use Clifford1::*;
    let base = [H, S, Sdg, SqrtX, SqrtXdg];
    let mut out = vec![vec![]];
    out.extend(base.iter().map(|&g| vec![g]));
    for &a in &base {
        for &b in &base {
            out.push(vec![a, b]);
        }
    }
    out
}

fn maps_letters(seq: &[Clifford1], from: Letter, to: Letter) -> bool {
    let mut l = from;
    for g in seq {
        l = g.conjugate_letter(l).1;
    }
    l == to
}

fn image(z: &PauliString, axis: Option<MsAxis>, window: &[usize], dressing: &BTreeMap<usize, Vec<Clifford1>>) -> Result<PauliString> {
    let mut img = match axis {
        Some(a) => conjugate_by_ms(z, a, window, false)?,
        None => z.clone(),
    };
    for (&q, gates) in dressing {
        for &g in gates {
            img = conjugate_by_clifford(&img, &CliffordGate::One(g, q))?;
        }
    }
    Ok(img)
}

/// Solves for the dressing and the signs of a frame.
pub(crate) fn plan(width: usize, axis: Option<MsAxis>, window: &[usize], entries: &[Entry]) -> Result<SynthesisPlan> {
    let mut window = window.to_vec();
    window.sort_unstable();
    window.dedup();
    if axis.is_some() && window.len() < 2 {
        return Err(Error::InvalidQubitSet(format!("MS window {window:?} too small")));
    }
    // per-qubit letter constraints from the single-Z entries
    let mut constraints: BTreeMap<usize, Vec<(Letter, Letter)>> = BTreeMap::new();
    let mut bare = Vec::with_capacity(entries.len());
    for e in entries {
        if let Some(j) = e.control {
            if window.contains(&j) || e.target.letter(j).is_some() {
                return Err(Error::InvalidQubitSet(format!("control {j} overlaps the frame")));
            }
        }
        let z = PauliString::from_letters(width, e.zs.iter().map(|&q| (q, Letter::Z)))?;
        let img = image(&z, axis, &window, &BTreeMap::new())?;
        if e.zs.len() == 1 {
            let qubits: std::collections::BTreeSet<usize> =
                img.letters().keys().chain(e.target.letters().keys()).copied().collect();
            for q in qubits {
                match (img.letter(q), e.target.letter(q)) {
                    (Some(a), Some(b)) => constraints.entry(q).or_default().push((a, b)),
                    _ => {
                        return Err(Error::InvalidExcitation(format!(
                            "target {} is not reachable from Z{:?} in window {window:?}",
                            e.target, e.zs
                        )))
                    }
                }
            }
        }
        bare.push(z);
    }
    let cands = candidates();
    let mut dressing = BTreeMap::new();
    for (q, cs) in constraints {
        let seq = cands
            .iter()
            .find(|seq| cs.iter().all(|&(a, b)| maps_letters(seq, a, b)))
            .ok_or_else(|| Error::InvalidExcitation(format!("inconsistent frame constraints on qubit {q}")))?;
        if !seq.is_empty() {
            dressing.insert(q, seq.clone());
        }
    }
    let mut rotations = Vec::with_capacity(entries.len());
    for (e, z) in entries.iter().zip(&bare) {
        let img = image(z, axis, &window, &dressing)?;
        if img.unsigned() != e.target.unsigned() {
            return Err(Error::InvalidExcitation(format!(
                "frame maps Z{:?} to {img}, not {}",
                e.zs, e.target
            )));
        }
        let rel = img.phase() * e.target.phase().conj();
        let sign = rel.sign().expect("Hermitian images differ by a real sign");
        rotations.push(Rotation {
            zs: e.zs.clone(),
            angle: 2.0 * e.coefficient * sign,
            sign: sign as i8,
            control: e.control,
        });
    }
    let m = window.len() / 2;
    Ok(SynthesisPlan {
        axis,
        qubit_window: if axis.is_some() { window } else { vec![] },
        m,
        dressing,
        rotations,
    })
}
