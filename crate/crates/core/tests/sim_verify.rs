mod common;

use common::*;
use ionjw::circuit::{Circuit, Direction, Gate};
use ionjw::fermion::{generator_pauli, ExcitationTerm};
use ionjw::pauli::{Clifford1, MsAxis, PauliString, PauliSum};
use ionjw::sim::*;
use ionjw::synth::compile_single_excitation;
use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rand::seq::SliceRandom;
use rand::Rng;

fn random_gate(r: &mut impl Rng, n: usize) -> Gate {
    let a = r.random_range(0..n);
    let b = (a + r.random_range(1..n)) % n;
    let angle = r.random_range(-4.0..4.0);
    match r.random_range(0..7) {
        0 => {
            let mut qs: Vec<usize> = (0..n).collect();
            qs.shuffle(r);
            qs.truncate(r.random_range(1..=n));
            let axis = if r.random_bool(0.5) { MsAxis::XX } else { MsAxis::YY };
            let dir = if r.random_bool(0.5) { Direction::Forward } else { Direction::Backward };
            Gate::ms(axis, dir, &qs)
        }
        1 => Gate::rz(a, angle),
        2 => Gate::CRz { control: a, target: b, angle },
        3 => Gate::Rzz { a, b, angle },
        4 => Gate::c1(Clifford1::ALL[r.random_range(0..8)], a),
        5 => Gate::Cnot { control: a, target: b },
        _ => Gate::GlobalPhase { angle },
    }
}

fn random_circuit(r: &mut impl Rng, n: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..len {
        c.push(random_gate(r, n)).unwrap();
    }
    c
}

#[test]
fn concatenation_is_matrix_product() {
    let mut r = rng(11);
    for _ in 0..40 {
        let n = r.random_range(2..5);
        let c1 = random_circuit(&mut r, n, 8);
        let c2 = random_circuit(&mut r, n, 8);
        let mut both = c1.clone();
        both.append(&c2).unwrap();
        let u1 = circuit_unitary(&c1).unwrap();
        let u2 = circuit_unitary(&c2).unwrap();
        let want = u2.compose(&u1).unwrap();
        assert!(dist(circuit_unitary(&both).unwrap().matrix(), want.matrix()) < 1e-11);
        // and the inverse circuit undoes it
        let mut there_and_back = both.clone();
        there_and_back.append(&both.inverse()).unwrap();
        let id = DMatrix::<C>::identity(1 << n, 1 << n);
        assert!(dist(circuit_unitary(&there_and_back).unwrap().matrix(), &id) < 1e-10);
    }
}

#[test]
fn native_gates_are_unitary() {
    let mut r = rng(12);
    for _ in 0..200 {
        let n = r.random_range(2..6);
        let mut c = Circuit::new(n);
        c.push(random_gate(&mut r, n)).unwrap();
        let u = circuit_unitary(&c).unwrap();
        assert!(u.unitarity_residual() < 1e-12);
    }
}

#[test]
fn gates_against_explicit_matrices() {
    // XX on two qubits
    let mut c = Circuit::new(2);
    c.push(Gate::ms(MsAxis::XX, Direction::Forward, &[0, 1])).unwrap();
    let want = expm_herm(&pauli_dense("XX"), std::f64::consts::FRAC_PI_4);
    assert!(dist(circuit_unitary(&c).unwrap().matrix(), &want) < 1e-12);
    // targeted YY on qubits 0 and 2 of three
    let mut c = Circuit::new(3);
    c.push(Gate::ms(MsAxis::YY, Direction::Backward, &[2, 0])).unwrap();
    let want = expm_herm(&pauli_dense("YIY"), -std::f64::consts::FRAC_PI_4);
    assert!(dist(circuit_unitary(&c).unwrap().matrix(), &want) < 1e-12);
    // CRz and Rzz
    let mut c = Circuit::new(2);
    c.push(Gate::CRz { control: 1, target: 0, angle: 0.8 }).unwrap();
    let one = (pauli_dense("II") - pauli_dense("IZ")) * C::from(0.5);
    let zero = (pauli_dense("II") + pauli_dense("IZ")) * C::from(0.5);
    let want = &zero + &one * expm_herm(&pauli_dense("ZI"), 0.4);
    assert!(dist(circuit_unitary(&c).unwrap().matrix(), &want) < 1e-12);
    let mut c = Circuit::new(2);
    c.push(Gate::Rzz { a: 0, b: 1, angle: -1.3 }).unwrap();
    assert!(dist(circuit_unitary(&c).unwrap().matrix(), &expm_herm(&pauli_dense("ZZ"), -0.65)) < 1e-12);
    // Rz(pi)
    let mut c = Circuit::new(1);
    c.push(Gate::rz(0, std::f64::consts::PI)).unwrap();
    let u = circuit_unitary(&c).unwrap();
    assert!((u.matrix()[(0, 0)] - C::new(0.0, -1.0)).norm() < 1e-12);
    assert!((u.matrix()[(1, 1)] - C::new(0.0, 1.0)).norm() < 1e-12);
}

#[test]
fn generator_exponent_is_additive() {
    let mut r = rng(13);
    for _ in 0..20 {
        let n = 4;
        let mut g = PauliSum::zero(n);
        for _ in 0..6 {
            let body: String = (0..n).map(|_| ['I', 'X', 'Y', 'Z'][r.random_range(0..4)]).collect();
            g.add_term(C::from(random_unit(&mut r)), &PauliString::from_label(&body).unwrap()).unwrap();
        }
        let (a, b) = (r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
        let ua = generator_unitary(&g, a).unwrap();
        let ub = generator_unitary(&g, b).unwrap();
        let uab = generator_unitary(&g, a + b).unwrap();
        assert!(dist(ua.compose(&ub).unwrap().matrix(), uab.matrix()) < 1e-11);
        assert!(dist(generator_unitary(&g, 0.0).unwrap().matrix(), &DMatrix::identity(16, 16)) < 1e-12);
    }
}

#[test]
fn single_generator_is_a_givens_rotation() {
    let g = generator_pauli(&ExcitationTerm::single(0, 1, false, 1.0).unwrap(), 2).unwrap();
    let m = sum_matrix(&g).unwrap();
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    assert!(ev.iter().zip([-1.0, 0.0, 0.0, 1.0]).all(|(a, b)| (a - b).abs() < 1e-12));
    let u = generator_unitary(&g, std::f64::consts::FRAC_PI_2).unwrap();
    let u = u.matrix();
    // vacuum and the doubly occupied state are untouched
    assert!((u[(0, 0)] - C::from(1.0)).norm() < 1e-12);
    assert!((u[(3, 3)] - C::from(1.0)).norm() < 1e-12);
    // a quarter turn swaps the two single-occupation states
    assert!(u[(1, 1)].norm() < 1e-12 && u[(2, 2)].norm() < 1e-12);
    assert!((u[(1, 2)].norm() - 1.0).abs() < 1e-12);
}

#[test]
fn equivalence_modes() {
    let mut r = rng(14);
    let c = random_circuit(&mut r, 3, 10);
    let u = circuit_unitary(&c).unwrap();
    let v = assert_equivalent(&u, &u, EquivalenceMode::Exact, 1e-12).unwrap();
    assert!(v.pass && v.distance == 0.0);
    let shifted = DenseOperator::from_matrix(3, u.matrix() * C::from_polar(1.0, std::f64::consts::PI / 7.0)).unwrap();
    assert!(!assert_equivalent(&u, &shifted, EquivalenceMode::Exact, 1e-9).unwrap().pass);
    let g = assert_equivalent(&u, &shifted, EquivalenceMode::GlobalPhase, 1e-9).unwrap();
    assert!(g.pass, "{}", g.distance);
    let small = DenseOperator::identity(2).unwrap();
    assert!(assert_equivalent(&u, &small, EquivalenceMode::Exact, 1.0).is_err());

    let compiled = circuit_unitary(&compile_single_excitation(4, 0, 3, 0.77, MsAxis::XX).unwrap()).unwrap();
    let g = generator_pauli(&ExcitationTerm::single(0, 3, false, 1.0).unwrap(), 4).unwrap();
    let target = generator_unitary(&g, 0.77).unwrap();
    assert!(assert_equivalent(&compiled, &target, EquivalenceMode::Exact, 1e-10).unwrap().pass);
}

#[test]
fn collective_convention_differs_by_a_phase() {
    let mut c = Circuit::new(4);
    c.push(Gate::ms(MsAxis::XX, Direction::Forward, &[0, 1, 3])).unwrap();
    let a = circuit_unitary_with(&c, MsConvention::Targeted).unwrap();
    let b = circuit_unitary_with(&c, MsConvention::Collective).unwrap();
    assert!(!assert_equivalent(&a, &b, EquivalenceMode::Exact, 1e-9).unwrap().pass);
    assert!(assert_equivalent(&a, &b, EquivalenceMode::GlobalPhase, 1e-9).unwrap().pass);
}

#[test]
fn dimension_cap() {
    let c = Circuit::new(MAX_QUBITS + 1);
    assert!(circuit_unitary(&c).is_err());
}
