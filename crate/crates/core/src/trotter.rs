//! UCCSD layers and first-order Trotter steps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::fermion::{weighted_pauli, ExcitationKind, ExcitationTerm};
use crate::ham::{HamiltonianTermList, LocalTerm, Reality};
use crate::pauli::{Clifford1, MsAxis, PauliSum};
use crate::sim::{circuit_unitary, generator_unitary, spectral_norm, DenseOperator};
use crate::synth::{
    baseline_controlled, baseline_string_by_string, compile_term, controlled_single_plan, double_block_plans,
    wrap_symmetrized,
};

/// Largest register accepted by [`trotter_error_probe`].
pub const PROBE_MAX_QUBITS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub n_modes: usize,
    pub occupied: Vec<usize>,
    pub virtual_modes: Vec<usize>,
    /// One angle per generated excitation, singles first.
    pub params: Vec<f64>,
}

/// Spin of an interleaved mode (`alpha, beta, alpha, ...`).
fn spin(m: usize) -> usize {
    m % 2
}

impl AnsatzSpec {
    /// Spec with all angles zero.
    pub fn zeros(n_modes: usize, occupied: &[usize], virtual_modes: &[usize]) -> Result<Self> {
        let mut s = AnsatzSpec {
            n_modes,
            occupied: occupied.to_vec(),
            virtual_modes: virtual_modes.to_vec(),
            params: vec![],
        };
        s.params = vec![0.0; s.excitations()?.len()];
        Ok(s)
    }

    /// Hartree-Fock style spec: the first `n_electrons` modes occupied, the rest virtual.
    pub fn closed_shell(n_modes: usize, n_electrons: usize) -> Result<Self> {
        let occ: Vec<usize> = (0..n_electrons.min(n_modes)).collect();
        let virt: Vec<usize> = (n_electrons.min(n_modes)..n_modes).collect();
        Self::zeros(n_modes, &occ, &virt)
    }

    fn validate(&self) -> Result<()> {
        for &m in self.occupied.iter().chain(&self.virtual_modes) {
            if m >= self.n_modes {
                return Err(Error::ModeOutOfRange {
                    mode: m,
                    n_modes: self.n_modes,
                });
            }
        }
        if self.occupied.iter().any(|o| self.virtual_modes.contains(o)) {
            return Err(Error::InvalidExcitation("occupied and virtual modes overlap".into()));
        }
        Ok(())
    }

    /// Spin-preserving singles then doubles, as unit-weight antisymmetrized terms.
    ///
    /// A double `G_pq^rs` takes `r` from the spin of `p` and `s` from the spin of `q`.
    pub fn excitations(&self) -> Result<Vec<ExcitationTerm>> {
        self.validate()?;
        let mut occ = self.occupied.clone();
        let mut virt = self.virtual_modes.clone();
        occ.sort_unstable();
        virt.sort_unstable();
        let mut out = Vec::new();
        for &o in &occ {
            for &v in virt.iter().filter(|&&v| spin(v) == spin(o)) {
                out.push(ExcitationTerm::single(o, v, false, 1.0)?);
            }
        }
        for (i, &p) in occ.iter().enumerate() {
            for &q in &occ[i + 1..] {
                for &r in virt.iter().filter(|&&r| spin(r) == spin(p)) {
                    for &s in virt.iter().filter(|&&s| spin(s) == spin(q)) {
                        if r == s || (spin(p) == spin(q) && r > s) {
                            continue;
                        }
                        out.push(ExcitationTerm::double(p, q, r, s, false, 1.0)?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Excitations weighted by their parameters.
    pub fn weighted(&self) -> Result<Vec<ExcitationTerm>> {
        let ex = self.excitations()?;
        if ex.len() != self.params.len() {
            return Err(Error::InvalidExcitation(format!(
                "{} parameters for {} excitations",
                self.params.len(),
                ex.len()
            )));
        }
        Ok(ex
            .iter()
            .zip(&self.params)
            .map(|(t, &th)| t.with_coefficient(t.coefficient * th))
            .collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheduling {
    /// Fused MS frames per block.
    Parallelized,
    /// One MS pair per Pauli string of each fused block, controlled rotations for
    /// controlled singles.
    Baseline,
    /// One MS pair per Pauli string of each excitation term, no fusion.
    Naive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrotterConfig {
    pub dt: f64,
    pub reality: Reality,
    pub scheduling: Scheduling,
}

/// `prod_k exp(-i theta_k G_k)` with singles first.
pub fn build_uccsd_layer(spec: &AnsatzSpec) -> Result<Circuit> {
    build_uccsd_layer_with(spec, Scheduling::Parallelized)
}

pub fn build_uccsd_layer_with(spec: &AnsatzSpec, scheduling: Scheduling) -> Result<Circuit> {
    let terms = spec.weighted()?;
    let n = spec.n_modes;
    let parts = terms
        .par_iter()
        .map(|t| match scheduling {
            Scheduling::Parallelized => compile_term(n, t, 1.0),
            Scheduling::Baseline | Scheduling::Naive => baseline_string_by_string(&weighted_pauli(t, n)?, 1.0),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut c = Circuit::new(n).with_label("kind", "uccsd");
    for p in &parts {
        c.append(p)?;
    }
    Ok(c)
}

/// Dense `prod_k exp(-i theta_k G_k)` in the layer order.
pub fn uccsd_reference(spec: &AnsatzSpec) -> Result<DenseOperator> {
    let n = spec.n_modes;
    let mut u = DenseOperator::identity(n)?;
    for t in spec.weighted()? {
        u = generator_unitary(&weighted_pauli(&t, n)?, 1.0)?.compose(&u)?;
    }
    Ok(u)
}

/// Excitations that share MS frames in a Trotter step.
#[derive(Clone, Debug, PartialEq)]
pub enum Block {
    /// Classes of one sorted quadruple.
    Quad { quad: [usize; 4], symmetrized: bool, terms: Vec<ExcitationTerm> },
    /// Controlled singles on one core with a common MS set.
    Controlled { p: usize, q: usize, symmetrized: bool, terms: Vec<ExcitationTerm> },
    Lone(ExcitationTerm),
}

impl Block {
    pub fn terms(&self) -> Vec<ExcitationTerm> {
        match self {
            Block::Quad { terms, .. } | Block::Controlled { terms, .. } => terms.clone(),
            Block::Lone(t) => vec![t.clone()],
        }
    }

    fn accepts(&self, t: &ExcitationTerm) -> bool {
        match (self, &t.kind) {
            (Block::Quad { quad, symmetrized, .. }, ExcitationKind::Double { .. }) => {
                *symmetrized == t.symmetrized && sorted_quad(t) == *quad
            }
            (Block::Controlled { p, q, symmetrized, terms }, ExcitationKind::ControlledSingle { p: a, q: b, j }) => {
                let inside = |j: usize| *p < j && j < *q;
                let first_j = match terms[0].kind {
                    ExcitationKind::ControlledSingle { j, .. } => j,
                    _ => unreachable!(),
                };
                *symmetrized == t.symmetrized
                    && (*p, *q) == (*a, *b)
                    && if inside(first_j) { *j == first_j } else { !inside(*j) }
            }
            _ => false,
        }
    }
}

fn sorted_quad(t: &ExcitationTerm) -> [usize; 4] {
    match t.kind {
        ExcitationKind::Double { p, q, r, s } => {
            let mut v = [p, q, r, s];
            v.sort_unstable();
            v
        }
        _ => unreachable!(),
    }
}

/// Groups excitations into blocks, in the order of first appearance.
pub fn schedule_blocks(excitations: &[ExcitationTerm]) -> Vec<Block> {
    let mut blocks: Vec<Block> = Vec::new();
    for t in excitations {
        if let Some(b) = blocks.iter_mut().find(|b| b.accepts(t)) {
            match b {
                Block::Quad { terms, .. } | Block::Controlled { terms, .. } => terms.push(t.clone()),
                Block::Lone(_) => unreachable!(),
            }
            continue;
        }
        blocks.push(match t.kind {
            ExcitationKind::Double { .. } => Block::Quad {
                quad: sorted_quad(t),
                symmetrized: t.symmetrized,
                terms: vec![t.clone()],
            },
            ExcitationKind::ControlledSingle { p, q, .. } => Block::Controlled {
                p,
                q,
                symmetrized: t.symmetrized,
                terms: vec![t.clone()],
            },
            _ => Block::Lone(t.clone()),
        });
    }
    blocks
}

fn maybe_wrap(body: Circuit, symmetrized: bool, j: usize) -> Result<Circuit> {
    if symmetrized {
        wrap_symmetrized(&body, j)
    } else {
        Ok(body)
    }
}

fn compile_block(n: usize, b: &Block, dt: f64, scheduling: Scheduling) -> Result<Circuit> {
    let terms = b.terms();
    match scheduling {
        Scheduling::Naive => {
            let mut c = Circuit::new(n);
            for t in &terms {
                c.append(&string_rotations(n, t, dt)?)?;
            }
            Ok(c)
        }
        Scheduling::Baseline => match b {
            Block::Controlled { .. } => {
                let mut c = Circuit::new(n);
                for t in &terms {
                    c.append(&baseline_controlled(n, t, dt)?)?;
                }
                Ok(c)
            }
            _ => {
                let mut g = PauliSum::zero(n);
                for t in &terms {
                    g = g.add(&weighted_pauli(t, n)?)?;
                }
                baseline_string_by_string(&g, dt)
            }
        },
        Scheduling::Parallelized => match b {
            Block::Quad { quad, symmetrized, terms } => {
                let mut angles = [0.0; 3];
                for t in terms {
                    let ExcitationKind::Double { q, .. } = t.kind else { unreachable!() };
                    let slot = quad[1..].iter().position(|&m| m == q).expect("q in the quadruple");
                    angles[slot] += dt * t.coefficient;
                }
                let mut body = Circuit::new(n);
                for p in double_block_plans(n, *quad, angles, MsAxis::XX)? {
                    p.emit(&mut body)?;
                }
                maybe_wrap(body, *symmetrized, quad[0])
            }
            Block::Controlled { p, q, symmetrized, terms } => {
                let controls: Vec<(usize, f64)> = terms
                    .iter()
                    .map(|t| match t.kind {
                        ExcitationKind::ControlledSingle { j, .. } => (j, dt * t.coefficient),
                        _ => unreachable!(),
                    })
                    .collect();
                let body = controlled_single_plan(n, *p, *q, &controls, MsAxis::XX)?.to_circuit(n)?;
                maybe_wrap(body, *symmetrized, *p)
            }
            Block::Lone(t) => compile_term(n, t, dt),
        },
    }
}

fn string_rotations(n: usize, t: &ExcitationTerm, dt: f64) -> Result<Circuit> {
    match t.kind {
        ExcitationKind::ControlledSingle { .. } => baseline_controlled(n, t, dt),
        _ => baseline_string_by_string(&weighted_pauli(t, n)?, dt),
    }
}

fn local_gates(t: &LocalTerm, dt: f64) -> Vec<Gate> {
    match *t {
        // w (I - Z_p)
        LocalTerm::Density { p, weight } => vec![
            Gate::GlobalPhase { angle: -dt * weight },
            Gate::rz(p, -2.0 * dt * weight),
        ],
        // w/2 (-I + Z_p + Z_q - Z_p Z_q)
        LocalTerm::Coulomb { p, q, weight } => vec![
            Gate::GlobalPhase { angle: 0.5 * dt * weight },
            Gate::rz(p, dt * weight),
            Gate::rz(q, dt * weight),
            Gate::Rzz {
                a: p,
                b: q,
                angle: -dt * weight,
            },
        ],
    }
}

/// One first-order Trotter step: the constant, local terms, then excitation blocks.
pub fn build_trotter_step(terms: &HamiltonianTermList, cfg: &TrotterConfig) -> Result<Circuit> {
    if !cfg.dt.is_finite() {
        return Err(Error::InvalidExcitation(format!("time step {} is not finite", cfg.dt)));
    }
    if cfg.reality != terms.reality {
        return Err(Error::RealityMismatch(format!(
            "step configured for {} orbitals, terms are {}",
            cfg.reality.name(),
            terms.reality.name()
        )));
    }
    let n = terms.n_modes;
    let mut c = Circuit::new(n).with_label("kind", "trotter").with_label("dt", format!("{:?}", cfg.dt));
    if terms.constant != 0.0 {
        c.push(Gate::GlobalPhase {
            angle: -cfg.dt * terms.constant,
        })?;
    }
    for t in &terms.local {
        c.extend(local_gates(t, cfg.dt))?;
    }
    let blocks = schedule_blocks(&terms.excitations);
    let parts = blocks
        .par_iter()
        .map(|b| compile_block(n, b, cfg.dt, cfg.scheduling))
        .collect::<Result<Vec<_>>>()?;
    for p in &parts {
        c.append(p)?;
    }
    Ok(c)
}

/// Dense ordered product of the exact term exponentials the step implements.
pub fn trotter_reference(terms: &HamiltonianTermList, dt: f64) -> Result<DenseOperator> {
    let n = terms.n_modes;
    let mut factors: Vec<PauliSum> = Vec::new();
    let mut constant = PauliSum::zero(n);
    constant.add_term(terms.constant.into(), &crate::pauli::PauliString::identity(n))?;
    factors.push(constant);
    for t in &terms.local {
        factors.push(t.pauli(n)?);
    }
    for b in schedule_blocks(&terms.excitations) {
        for t in b.terms() {
            factors.push(weighted_pauli(&t, n)?);
        }
    }
    let mut u = DenseOperator::identity(n)?;
    for f in &factors {
        u = generator_unitary(f, dt)?.compose(&u)?;
    }
    Ok(u)
}

/// `(dt, ||U_step(dt) - exp(-i dt H)||_2)` for each time step.
pub fn trotter_error_probe(terms: &HamiltonianTermList, dts: &[f64]) -> Result<Vec<(f64, f64)>> {
    if terms.n_modes > PROBE_MAX_QUBITS {
        return Err(Error::DimensionTooLarge {
            qubits: terms.n_modes,
            limit: PROBE_MAX_QUBITS,
        });
    }
    let h = terms.pauli_sum()?;
    dts.iter()
        .map(|&dt| {
            let cfg = TrotterConfig {
                dt,
                reality: terms.reality,
                scheduling: Scheduling::Parallelized,
            };
            let u = circuit_unitary(&build_trotter_step(terms, &cfg)?)?;
            let exact = generator_unitary(&h, dt)?;
            Ok((dt, spectral_norm(&(u.matrix() - exact.matrix()))))
        })
        .collect()
}

/// X gates on the occupied modes.
pub fn prepare_reference(occupied: &[usize], n_modes: usize) -> Result<Circuit> {
    let mut c = Circuit::new(n_modes).with_label("kind", "reference");
    for &m in occupied {
        if m >= n_modes {
            return Err(Error::ModeOutOfRange { mode: m, n_modes });
        }
        c.push(Gate::c1(Clifford1::X, m))?;
    }
    Ok(c)
}
