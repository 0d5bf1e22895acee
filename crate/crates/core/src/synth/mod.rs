//! MS-gate circuits for Pauli rotations and fermionic excitations.
//!
//! Every compiled circuit `U` satisfies `U = exp(-i theta G)` exactly (no global
//! phase slack) for the generator `G` named by the function.

mod backward;
mod frame;
mod higher;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::fermion::{generator_pauli, local_equivalence_conjugate, ExcitationKind, ExcitationTerm};
use crate::pauli::{Clifford1, Letter, MsAxis, PauliString, PauliSum};

pub use backward::{backward_ms_identity, eliminate_backward_ms, BackwardIdentity};
pub use frame::{Rotation, SynthesisPlan};
pub use higher::{compile_higher_excitation, even_centre_cover, higher_excitation_plans};

use frame::{plan, Entry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ControlVariant {
    /// Controlled Rz gates, one MS pair.
    A,
    /// Plain Rz gates, two MS pairs.
    B,
}

fn emit_all(n: usize, plans: &[SynthesisPlan]) -> Result<Circuit> {
    let mut c = Circuit::new(n);
    for p in plans {
        p.emit(&mut c)?;
    }
    Ok(c)
}

fn real_terms(s: &PauliSum) -> Vec<(f64, PauliString)> {
    s.iter().map(|(c, p)| (c.re, p)).collect()
}

/// The orbital qubit whose letter differs from the axis letter.
fn odd_position(s: &PauliString, orbital: &[usize], axis: MsAxis) -> Result<usize> {
    let odd: Vec<usize> = orbital
        .iter()
        .copied()
        .filter(|&q| s.letter(q) != Some(axis.letter()))
        .collect();
    match odd[..] {
        [q] => Ok(q),
        _ => Err(Error::InvalidExcitation(format!(
            "{s} has no single odd letter on {orbital:?} for axis {}",
            axis.name()
        ))),
    }
}

fn window(strings: &[(f64, PauliString)]) -> Vec<usize> {
    let mut w: Vec<usize> = strings.iter().flat_map(|(_, p)| p.support()).collect();
    w.sort_unstable();
    w.dedup();
    w
}

fn check_order(modes: &[usize], n: usize, what: &str) -> Result<()> {
    if modes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidExcitation(format!(
            "{what} orbitals must be strictly increasing, got {modes:?}"
        )));
    }
    if let Some(&m) = modes.last() {
        if m >= n {
            return Err(Error::ModeOutOfRange { mode: m, n_modes: n });
        }
    }
    Ok(())
}

/// Plan for `exp(-i phi/2 P)`: two MS gates on the support, none for one qubit.
pub fn pauli_rotation_plan(p: &PauliString, phi: f64) -> Result<SynthesisPlan> {
    if p.is_identity() {
        return Err(Error::IdentityRotation);
    }
    if !p.phase().is_real() {
        return Err(Error::NotHermitian { residual: 1.0 });
    }
    let support = p.support();
    let axis = (support.len() > 1).then_some(MsAxis::XX);
    plan(p.width(), axis, &support, &[Entry::new(support[0], p.clone(), phi / 2.0)])
}

pub fn compile_pauli_rotation(p: &PauliString, phi: f64) -> Result<Circuit> {
    pauli_rotation_plan(p, phi)?.to_circuit(p.width())
}

/// `exp(-i theta G_p^q)`, `p < q`.
pub fn compile_single_excitation(n: usize, p: usize, q: usize, theta: f64, axis: MsAxis) -> Result<Circuit> {
    check_order(&[p, q], n, "single excitation")?;
    let g = generator_pauli(&ExcitationTerm::single(p, q, false, 1.0)?, n)?;
    let strings = real_terms(&g);
    let entries = strings
        .iter()
        .map(|(c, s)| Ok(Entry::new(odd_position(s, &[p, q], axis)?, s.clone(), theta * c)))
        .collect::<Result<Vec<_>>>()?;
    plan(n, Some(axis), &window(&strings), &entries)?.to_circuit(n)
}

/// Two plans (XX, then YY) for `exp(-i sum_k angles[k] G_k)` over the three
/// families `G_pq^rs`, `G_pr^qs`, `G_ps^qr` of a sorted quadruple.
pub fn double_block_plans(n: usize, quad: [usize; 4], angles: [f64; 3], axis_first: MsAxis) -> Result<Vec<SynthesisPlan>> {
    check_order(&quad, n, "double excitation")?;
    let [p, q, r, s] = quad;
    let fams = [(p, q, r, s), (p, r, q, s), (p, s, q, r)];
    let mut total = PauliSum::zero(n);
    for ((a, b, c, d), &th) in fams.into_iter().zip(&angles) {
        let t = ExcitationTerm::double(a, b, c, d, false, 1.0)?;
        total = total.add(&generator_pauli(&t, n)?.scale((t.coefficient * th).into()))?;
    }
    let strings = real_terms(&total);
    let all = window(&generator_pauli(&ExcitationTerm::double(p, q, r, s, false, 1.0)?, n)?
        .iter()
        .map(|(c, p)| (c.re, p))
        .collect::<Vec<_>>());
    let axes = match axis_first {
        MsAxis::XX => [MsAxis::XX, MsAxis::YY],
        MsAxis::YY => [MsAxis::YY, MsAxis::XX],
    };
    let mut out = Vec::with_capacity(2);
    for axis in axes {
        // one-Y strings sit in the XX frame, three-Y strings in the YY frame
        let entries = strings
            .iter()
            .filter(|(_, st)| {
                let ys = quad.iter().filter(|&&m| st.letter(m) == Some(Letter::Y)).count();
                (ys == 1) == (axis == MsAxis::XX)
            })
            .map(|(c, st)| Ok(Entry::new(odd_position(st, &quad, axis)?, st.clone(), *c)))
            .collect::<Result<Vec<_>>>()?;
        out.push(plan(n, Some(axis), &all, &entries)?);
    }
    Ok(out)
}

/// `exp(-i (a0 G_pq^rs + a1 G_pr^qs + a2 G_ps^qr))` with `p < q < r < s`: four MS gates.
pub fn compile_double_block(n: usize, p: usize, q: usize, r: usize, s: usize, angles: [f64; 3]) -> Result<Circuit> {
    emit_all(n, &double_block_plans(n, [p, q, r, s], angles, MsAxis::XX)?)
}

/// `exp(-i theta G_pq^rs)`.
pub fn compile_double_excitation(n: usize, p: usize, q: usize, r: usize, s: usize, theta: f64) -> Result<Circuit> {
    compile_double_block(n, p, q, r, s, [theta, 0.0, 0.0])
}

/// `exp(-i theta (G_pq^rs + G_ps^rq))`, i.e. the block with angles `(theta, 0, -theta)`.
/// Four of the eight strings cancel, leaving Rz gates on `q` and `s` only.
pub fn compile_coupled_exchange(n: usize, p: usize, q: usize, r: usize, s: usize, theta: f64) -> Result<Circuit> {
    compile_double_block(n, p, q, r, s, [theta, 0.0, -theta])
}

/// Drops a `Z` on the control: on `n_j = 1`, `P = sign * P'`.
fn strip_control(s: &PauliString, j: usize) -> Result<(PauliString, f64)> {
    match s.letter(j) {
        None => Ok((s.clone(), 1.0)),
        Some(Letter::Z) => {
            let zj = PauliString::single(s.width(), j, Letter::Z)?;
            Ok((s.multiply(&zj)?, -1.0))
        }
        Some(_) => Err(Error::InvalidExcitation(format!("control {j} carries a flip in {s}"))),
    }
}

fn core_strings(n: usize, p: usize, q: usize, symmetrized: bool) -> Result<Vec<(f64, PauliString)>> {
    Ok(real_terms(&generator_pauli(&ExcitationTerm::single(p, q, symmetrized, 1.0)?, n)?))
}

/// Variant-a plan for `exp(-i sum_j theta_j G_pj^qj)` over controls sharing one MS set.
pub fn controlled_single_plan(n: usize, p: usize, q: usize, controls: &[(usize, f64)], axis: MsAxis) -> Result<SynthesisPlan> {
    check_order(&[p, q], n, "controlled single")?;
    let strings = core_strings(n, p, q, false)?;
    let mut entries = Vec::new();
    let mut win: Option<Vec<usize>> = None;
    for &(j, theta) in controls {
        if j == p || j == q || j >= n {
            return Err(Error::InvalidExcitation(format!("bad control {j} for core {p}->{q}")));
        }
        let mut stripped = Vec::new();
        for (c, s) in &strings {
            let (s2, sign) = strip_control(s, j)?;
            // -n_j G on the control subspace becomes exp(+i theta sign G')
            entries.push(Entry {
                zs: vec![odd_position(&s2, &[p, q], axis)?],
                target: s2.clone(),
                coefficient: -theta * c * sign,
                control: Some(j),
            });
            stripped.push((*c, s2));
        }
        let w = window(&stripped);
        match &win {
            Some(prev) if *prev != w => {
                return Err(Error::InvalidExcitation(format!(
                    "controls {controls:?} need different MS sets for core {p}->{q}"
                )))
            }
            _ => win = Some(w),
        }
    }
    let w = win.ok_or_else(|| Error::InvalidExcitation("no controls".into()))?;
    plan(n, Some(axis), &w, &entries)
}

/// `exp(-i theta G_pj^qj)` with `p < q`.
pub fn compile_controlled_single(n: usize, p: usize, q: usize, j: usize, theta: f64, variant: ControlVariant) -> Result<Circuit> {
    match variant {
        ControlVariant::A => controlled_single_plan(n, p, q, &[(j, theta)], MsAxis::XX)?.to_circuit(n),
        ControlVariant::B => emit_all(n, &controlled_single_b_plans(n, p, q, j, theta)?),
    }
}

/// `-n_j G = -G/2 + Z_j G/2`: a plain frame and a frame with `Z_j` folded in.
fn controlled_single_b_plans(n: usize, p: usize, q: usize, j: usize, theta: f64) -> Result<Vec<SynthesisPlan>> {
    check_order(&[p, q], n, "controlled single")?;
    if j == p || j == q || j >= n {
        return Err(Error::InvalidExcitation(format!("bad control {j} for core {p}->{q}")));
    }
    let strings = core_strings(n, p, q, false)?;
    let zj = PauliString::single(n, j, Letter::Z)?;
    let axis = MsAxis::XX;
    let plain = strings
        .iter()
        .map(|(c, s)| Ok(Entry::new(odd_position(s, &[p, q], axis)?, s.clone(), -theta * c / 2.0)))
        .collect::<Result<Vec<_>>>()?;
    let folded: Vec<(f64, PauliString)> = strings
        .iter()
        .map(|(c, s)| Ok((*c, zj.multiply(s)?)))
        .collect::<Result<_>>()?;
    let second = folded
        .iter()
        .map(|(c, s)| Ok(Entry::new(odd_position(s, &[p, q], axis)?, s.clone(), theta * c / 2.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        plan(n, Some(axis), &window(&strings), &plain)?,
        plan(n, Some(axis), &window(&folded), &second)?,
    ])
}

/// `exp(-i theta G)` for an antisymmetrized term (its own coefficient is ignored).
pub fn compile_antisymmetrized(n: usize, t: &ExcitationTerm, theta: f64) -> Result<Circuit> {
    if t.symmetrized {
        return Err(Error::InvalidExcitation("expected an antisymmetrized term".into()));
    }
    match &t.kind {
        ExcitationKind::Single { p, q } => compile_single_excitation(n, *p, *q, theta, MsAxis::XX),
        ExcitationKind::Double { p, q, r, s } => {
            let mut quad = [*p, *q, *r, *s];
            quad.sort_unstable();
            let slot = if *q == quad[1] {
                0
            } else if *q == quad[2] {
                1
            } else {
                2
            };
            let mut angles = [0.0; 3];
            angles[slot] = theta;
            compile_double_block(n, quad[0], quad[1], quad[2], quad[3], angles)
        }
        ExcitationKind::ControlledSingle { p, q, j } => {
            compile_controlled_single(n, *p, *q, *j, theta, ControlVariant::A)
        }
        ExcitationKind::Higher { occ, virt } => compile_higher_excitation(n, occ, virt, theta),
    }
}

/// Conjugates an antisymmetrized body by `exp(-i pi/2 n_j)`: `S_j`, body, `Sdg_j`.
pub fn wrap_symmetrized(body: &Circuit, j: usize) -> Result<Circuit> {
    let mut c = Circuit::new(body.n_qubits());
    c.push(Gate::c1(Clifford1::S, j))?;
    c.append(body)?;
    c.push(Gate::c1(Clifford1::Sdg, j))?;
    Ok(c)
}

/// `exp(-i theta G~)` through the antisymmetrized circuit, conjugated on mode `j`.
///
/// `j` must be a subscript or superscript mode of `t` (not a control).
pub fn compile_symmetrized_via(n: usize, t: &ExcitationTerm, theta: f64, j: usize) -> Result<Circuit> {
    if !t.symmetrized {
        return Err(Error::InvalidExcitation("expected a symmetrized term".into()));
    }
    let anti = ExcitationTerm {
        symmetrized: false,
        ..t.clone()
    };
    let (img, sign) = local_equivalence_conjugate(&anti, j)?;
    if !img.symmetrized {
        return Err(Error::InvalidExcitation(format!("mode {j} does not symmetrize {t}")));
    }
    wrap_symmetrized(&compile_antisymmetrized(n, &anti, theta * sign)?, j)
}

/// `exp(-i theta G~)`, conjugating on the first subscript mode.
pub fn compile_symmetrized(n: usize, t: &ExcitationTerm, theta: f64) -> Result<Circuit> {
    compile_symmetrized_via(n, t, theta, t.kind.subscripts()[0])
}

/// `exp(-i theta t)` for either form, using the term's own coefficient as a weight.
pub fn compile_term(n: usize, t: &ExcitationTerm, theta: f64) -> Result<Circuit> {
    let angle = theta * t.coefficient;
    if t.symmetrized {
        compile_symmetrized(n, t, angle)
    } else {
        compile_antisymmetrized(n, t, angle)
    }
}

/// One Pauli rotation (two MS gates) per string of `theta * g`.
pub fn baseline_string_by_string(g: &PauliSum, theta: f64) -> Result<Circuit> {
    let mut c = Circuit::new(g.width());
    for (coef, s) in g.iter() {
        if coef.im.abs() > crate::sim::HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual: coef.im.abs() });
        }
        c.append(&compile_pauli_rotation(&s, 2.0 * theta * coef.re)?)?;
    }
    Ok(c)
}

/// `exp(-i theta w G_pj^qj)` (either form) as controlled rotations of the two core
/// strings, one MS pair each.
pub fn baseline_controlled(n: usize, t: &ExcitationTerm, theta: f64) -> Result<Circuit> {
    let ExcitationKind::ControlledSingle { p, q, j } = t.kind else {
        return Err(Error::InvalidExcitation(format!("{t} is not a controlled single")));
    };
    let mut c = Circuit::new(n);
    for (coef, s) in core_strings(n, p, q, t.symmetrized)? {
        let (s2, sign) = strip_control(&s, j)?;
        let support = s2.support();
        let axis = (support.len() > 1).then_some(MsAxis::XX);
        let e = Entry {
            zs: vec![support[0]],
            target: s2,
            coefficient: -theta * t.coefficient * coef * sign,
            control: Some(j),
        };
        plan(n, axis, &support, &[e])?.emit(&mut c)?;
    }
    Ok(c)
}

/// Double excitation with a single MS pair; the three-Y strings become `Z Z Z`
/// rotations through CNOT ladders.
pub fn compile_mixed_cnot(n: usize, p: usize, q: usize, r: usize, s: usize, theta: f64) -> Result<Circuit> {
    check_order(&[p, q, r, s], n, "double excitation")?;
    let quad = [p, q, r, s];
    let strings = real_terms(&generator_pauli(&ExcitationTerm::double(p, q, r, s, false, 1.0)?, n)?);
    let entries = strings
        .iter()
        .map(|(c, st)| {
            let ys: Vec<usize> = quad.iter().copied().filter(|&m| st.letter(m) == Some(Letter::Y)).collect();
            Entry {
                zs: ys,
                target: st.clone(),
                coefficient: theta * c,
                control: None,
            }
        })
        .collect::<Vec<_>>();
    plan(n, Some(MsAxis::XX), &window(&strings), &entries)?.to_circuit(n)
}
