#![allow(dead_code)]
//! Independent dense ladder-operator matrices built directly on the occupation basis.

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> rand::rngs::StdRng {
    rand::rngs::StdRng::seed_from_u64(seed)
}

pub fn angles(seed: u64, k: usize) -> Vec<f64> {
    let mut r = rng(seed);
    (0..k).map(|_| r.random_range(-3.0..3.0)).collect()
}

/// `a_p` with the sign of the occupied modes below `p`.
pub fn annihilator(n: usize, p: usize) -> DMatrix<C> {
    let d = 1usize << n;
    let mut m = DMatrix::zeros(d, d);
    for b in 0..d {
        if b >> p & 1 == 1 {
            let below = (b & ((1 << p) - 1)).count_ones();
            m[(b ^ (1 << p), b)] = C::new(if below.is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0);
        }
    }
    m
}

pub fn creator(n: usize, p: usize) -> DMatrix<C> {
    annihilator(n, p).adjoint()
}

pub fn number(n: usize, p: usize) -> DMatrix<C> {
    creator(n, p) * annihilator(n, p)
}

pub fn i() -> C {
    C::new(0.0, 1.0)
}

/// `i(L - L^dagger)` or `L + L^dagger`.
pub fn hermitize(l: &DMatrix<C>, symmetrized: bool) -> DMatrix<C> {
    if symmetrized {
        l + l.adjoint()
    } else {
        (l - l.adjoint()) * i()
    }
}

pub fn single_ladder(n: usize, p: usize, q: usize) -> DMatrix<C> {
    creator(n, p) * annihilator(n, q)
}

pub fn double_ladder(n: usize, p: usize, q: usize, r: usize, s: usize) -> DMatrix<C> {
    creator(n, p) * creator(n, q) * annihilator(n, r) * annihilator(n, s)
}

/// Exact `exp(-i t M)` by diagonalizing the Hermitian matrix.
pub fn expm_herm(m: &DMatrix<C>, t: f64) -> DMatrix<C> {
    let h = (m + m.adjoint()) * C::new(0.5, 0.0);
    let e = h.symmetric_eigen();
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|l| C::from_polar(1.0, -t * l)));
    &e.eigenvectors * d * e.eigenvectors.adjoint()
}

pub fn dist(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    (a - b).norm()
}

pub fn pauli_dense(label: &str) -> DMatrix<C> {
    let x = DMatrix::from_row_slice(2, 2, &[C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0)]);
    let y = DMatrix::from_row_slice(2, 2, &[C::new(0.0, 0.0), -i(), i(), C::new(0.0, 0.0)]);
    let z = DMatrix::from_row_slice(2, 2, &[C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(-1.0, 0.0)]);
    let id = DMatrix::<C>::identity(2, 2);
    // qubit 0 is the least significant bit, so it is the rightmost Kronecker factor
    let mut m = DMatrix::<C>::identity(1, 1);
    for ch in label.chars() {
        let f = match ch {
            'X' => &x,
            'Y' => &y,
            'Z' => &z,
            _ => &id,
        };
        m = f.kronecker(&m);
    }
    m
}

pub fn random_unit(r: &mut impl Rng) -> f64 {
    r.random_range(-1.0..1.0)
}
