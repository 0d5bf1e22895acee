//! Dense-matrix oracle: exact circuit unitaries and generator exponentials.
//!
//! Basis index bit `q` is the state of qubit `q`. The first gate of a circuit acts
//! first, so `unitary(a ++ b) = unitary(b) * unitary(a)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{Circuit, Direction, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Clifford1, Letter, MsAxis, PauliString, PauliSum};

pub const MAX_QUBITS: usize = 12;

/// Hermiticity residual accepted by [`generator_unitary`].
pub const HERMITIAN_TOL: f64 = 1e-12;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

fn cis(a: f64) -> C {
    C::from_polar(1.0, a)
}

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        Err(Error::DimensionTooLarge {
            qubits: n,
            limit: MAX_QUBITS,
        })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    n_qubits: usize,
    matrix: DMatrix<C>,
}

impl DenseOperator {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        check_dim(n_qubits)?;
        let d = 1usize << n_qubits;
        Ok(DenseOperator {
            n_qubits,
            matrix: DMatrix::identity(d, d),
        })
    }

    pub fn from_matrix(n_qubits: usize, matrix: DMatrix<C>) -> Result<Self> {
        check_dim(n_qubits)?;
        let d = 1usize << n_qubits;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                left: d,
                right: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(DenseOperator { n_qubits, matrix })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C> {
        self.matrix
    }

    /// `self * other` (other acts first).
    pub fn compose(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(DenseOperator {
            n_qubits: self.n_qubits,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator {
            n_qubits: self.n_qubits,
            matrix: self.matrix.adjoint(),
        }
    }

    /// `||U^dagger U - I||_F`
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.dim();
        (self.matrix.adjoint() * &self.matrix - DMatrix::<C>::identity(d, d)).norm()
    }
}

/// How a targeted MS gate is turned into a matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MsConvention {
    /// `exp(-+i pi/4 sum_{j<k} A_j A_k)`, pair sum only.
    #[default]
    Targeted,
    /// `exp(-i theta/4 S^2)` with the collective spin including self terms; differs
    /// from `Targeted` by `exp(-+i pi n / 8)`.
    Collective,
}

pub fn circuit_unitary(c: &Circuit) -> Result<DenseOperator> {
    circuit_unitary_with(c, MsConvention::Targeted)
}

pub fn circuit_unitary_with(c: &Circuit, conv: MsConvention) -> Result<DenseOperator> {
    let n = c.n_qubits();
    check_dim(n)?;
    let d = 1usize << n;
    let columns: Vec<Vec<C>> = (0..d)
        .into_par_iter()
        .map(|col| {
            let mut psi = vec![ZERO; d];
            psi[col] = ONE;
            for g in c.gates() {
                apply_gate(&mut psi, g, conv);
            }
            psi
        })
        .collect();
    let matrix = DMatrix::from_iterator(d, d, columns.into_iter().flatten());
    DenseOperator::from_matrix(n, matrix)
}

/// Runs a circuit on a computational basis state.
pub fn apply_to_basis(c: &Circuit, index: usize) -> Result<Vec<C>> {
    check_dim(c.n_qubits())?;
    let d = 1usize << c.n_qubits();
    if index >= d {
        return Err(Error::DimensionMismatch { left: d, right: index });
    }
    let mut psi = vec![ZERO; d];
    psi[index] = ONE;
    for g in c.gates() {
        apply_gate(&mut psi, g, MsConvention::Targeted);
    }
    Ok(psi)
}

fn clifford_matrix(g: Clifford1) -> [[C; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let i = C::new(0.0, 1.0);
    let r = |x: f64| C::new(x, 0.0);
    match g {
        Clifford1::H => [[r(h), r(h)], [r(h), r(-h)]],
        Clifford1::S => [[ONE, ZERO], [ZERO, i]],
        Clifford1::Sdg => [[ONE, ZERO], [ZERO, -i]],
        Clifford1::SqrtX => [[C::new(0.5, 0.5), C::new(0.5, -0.5)], [C::new(0.5, -0.5), C::new(0.5, 0.5)]],
        Clifford1::SqrtXdg => [[C::new(0.5, -0.5), C::new(0.5, 0.5)], [C::new(0.5, 0.5), C::new(0.5, -0.5)]],
        Clifford1::X => [[ZERO, ONE], [ONE, ZERO]],
        Clifford1::Y => [[ZERO, -i], [i, ZERO]],
        Clifford1::Z => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

fn apply_1q(psi: &mut [C], q: usize, m: &[[C; 2]; 2]) {
    let bit = 1usize << q;
    for b in 0..psi.len() {
        if b & bit == 0 {
            let (a0, a1) = (psi[b], psi[b | bit]);
            psi[b] = m[0][0] * a0 + m[0][1] * a1;
            psi[b | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

fn apply_gate(psi: &mut [C], g: &Gate, conv: MsConvention) {
    match g {
        Gate::Rz { qubit, angle } => {
            let (p0, p1) = (cis(-angle / 2.0), cis(angle / 2.0));
            let bit = 1usize << qubit;
            for (b, a) in psi.iter_mut().enumerate() {
                *a *= if b & bit == 0 { p0 } else { p1 };
            }
        }
        Gate::CRz {
            control,
            target,
            angle,
        } => {
            let (p0, p1) = (cis(-angle / 2.0), cis(angle / 2.0));
            let (cb, tb) = (1usize << control, 1usize << target);
            for (b, a) in psi.iter_mut().enumerate() {
                if b & cb != 0 {
                    *a *= if b & tb == 0 { p0 } else { p1 };
                }
            }
        }
        Gate::Rzz { a, b, angle } => {
            let (same, diff) = (cis(-angle / 2.0), cis(angle / 2.0));
            for (k, amp) in psi.iter_mut().enumerate() {
                let parity = ((k >> a) ^ (k >> b)) & 1;
                *amp *= if parity == 0 { same } else { diff };
            }
        }
        Gate::Clifford1 { gate, qubit } => apply_1q(psi, *qubit, &clifford_matrix(*gate)),
        Gate::Cnot { control, target } => {
            let (cb, tb) = (1usize << control, 1usize << target);
            for b in 0..psi.len() {
                if b & cb != 0 && b & tb == 0 {
                    psi.swap(b, b | tb);
                }
            }
        }
        Gate::GlobalPhase { angle } => {
            let p = cis(*angle);
            psi.iter_mut().for_each(|a| *a *= p);
        }
        Gate::Ms {
            axis,
            direction,
            qubits,
        } => apply_ms(psi, *axis, *direction, qubits, conv),
    }
}

/// In the Hadamard frame `sum_{j<k} X_j X_k = (s^2 - n) / 2` with `s` the Z-spin sum.
fn apply_ms(psi: &mut [C], axis: MsAxis, dir: Direction, qubits: &[usize], conv: MsConvention) {
    let n = qubits.len() as i64;
    let sign = match dir {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let h = clifford_matrix(Clifford1::H);
    if axis == MsAxis::YY {
        for &q in qubits {
            apply_1q(psi, q, &clifford_matrix(Clifford1::Sdg));
        }
    }
    for &q in qubits {
        apply_1q(psi, q, &h);
    }
    let mask: usize = qubits.iter().map(|&q| 1usize << q).sum();
    let extra = match conv {
        MsConvention::Targeted => 0.0,
        MsConvention::Collective => -sign * std::f64::consts::PI * n as f64 / 8.0,
    };
    let phases: Vec<C> = (0..=n)
        .map(|ones| {
            let s = n - 2 * ones;
            let pair_sum = ((s * s - n) / 2) as f64;
            cis(-sign * std::f64::consts::FRAC_PI_4 * pair_sum + extra)
        })
        .collect();
    for (b, a) in psi.iter_mut().enumerate() {
        *a *= phases[(b & mask).count_ones() as usize];
    }
    for &q in qubits {
        apply_1q(psi, q, &h);
    }
    if axis == MsAxis::YY {
        for &q in qubits {
            apply_1q(psi, q, &clifford_matrix(Clifford1::S));
        }
    }
}

/// Nonzero entries of row-action `P|b> = value |target>`.
fn pauli_action(p: &PauliString) -> (usize, usize, C) {
    let mut flip = 0usize;
    let mut sign_mask = 0usize;
    let mut n_y = 0u32;
    for (&q, &l) in p.letters() {
        match l {
            Letter::X => flip |= 1 << q,
            Letter::Y => {
                flip |= 1 << q;
                sign_mask |= 1 << q;
                n_y += 1;
            }
            Letter::Z => sign_mask |= 1 << q,
        }
    }
    let base = p.phase().to_complex() * C::new(0.0, 1.0).powu(n_y);
    (flip, sign_mask, base)
}

pub fn pauli_matrix(p: &PauliString) -> Result<DMatrix<C>> {
    let mut s = PauliSum::zero(p.width());
    s.add_term(ONE, p)?;
    sum_matrix(&s)
}

pub fn sum_matrix(s: &PauliSum) -> Result<DMatrix<C>> {
    check_dim(s.width())?;
    let d = 1usize << s.width();
    let mut m = DMatrix::<C>::zeros(d, d);
    for (c, p) in s.iter() {
        let (flip, sign_mask, base) = pauli_action(&p);
        for b in 0..d {
            let sgn = if (b & sign_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(b ^ flip, b)] += c * base * sgn;
        }
    }
    Ok(m)
}

/// `exp(-i angle M(g))` through a spectral decomposition of each connected block
/// of the sparsity graph.
pub fn generator_unitary(g: &PauliSum, angle: f64) -> Result<DenseOperator> {
    check_dim(g.width())?;
    // Pauli strings are Hermitian, so the sum is Hermitian iff every coefficient is real.
    let residual = g.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }
    let m = sum_matrix(g)?;
    hermitian_exp(g.width(), &m, angle)
}

/// `exp(-i angle M)` for a Hermitian matrix `M`.
pub fn hermitian_exp(n_qubits: usize, m: &DMatrix<C>, angle: f64) -> Result<DenseOperator> {
    let d = m.nrows();
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for j in 0..d {
        for i in 0..d {
            if i != j && m[(i, j)].norm() > 0.0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..d {
        let r = find(&mut parent, i);
        blocks.entry(r).or_default().push(i);
    }
    let results: Vec<(Vec<usize>, DMatrix<C>)> = blocks
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|idx| {
            let k = idx.len();
            let sub = DMatrix::from_fn(k, k, |a, b| m[(idx[a], idx[b])]);
            // Symmetrize against round-off before the Hermitian solver.
            let sub = (&sub + sub.adjoint()) * C::new(0.5, 0.0);
            let eig = sub.symmetric_eigen();
            let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| cis(-angle * l)));
            let e = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
            (idx, e)
        })
        .collect();
    let mut out = DMatrix::<C>::zeros(d, d);
    for (idx, e) in results {
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[(i, j)] = e[(a, b)];
            }
        }
    }
    DenseOperator::from_matrix(n_qubits, out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivalenceMode {
    Exact,
    GlobalPhase,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    /// Frobenius distance after the phase alignment of the mode.
    pub distance: f64,
    /// Phase `lambda` applied to `v` (`1` in exact mode).
    pub phase: C,
}

pub fn assert_equivalent(
    u: &DenseOperator,
    v: &DenseOperator,
    mode: EquivalenceMode,
    tol: f64,
) -> Result<Verdict> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let phase = match mode {
        EquivalenceMode::Exact => ONE,
        EquivalenceMode::GlobalPhase => {
            let prod = v.matrix.adjoint() * &u.matrix;
            let big = prod
                .iter()
                .copied()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap_or(ONE);
            if big.norm() > 0.0 {
                big / big.norm()
            } else {
                ONE
            }
        }
    };
    let distance = (&u.matrix - &v.matrix * phase).norm();
    Ok(Verdict {
        pass: distance <= tol,
        distance,
        phase,
    })
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<C>) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}
