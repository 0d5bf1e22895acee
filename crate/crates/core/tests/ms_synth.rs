mod common;

use common::*;
use ionjw::circuit::{count, Direction, Gate};
use ionjw::fermion::ExcitationTerm;
use ionjw::pauli::{MsAxis, PauliString};
use ionjw::sim::circuit_unitary;
use ionjw::synth::*;
use nalgebra::DMatrix;
use num_complex::Complex64 as C;

const TOL: f64 = 1e-10;

fn unitary(c: &ionjw::circuit::Circuit) -> DMatrix<C> {
    circuit_unitary(c).unwrap().into_matrix()
}

fn close(c: &ionjw::circuit::Circuit, want: &DMatrix<C>) {
    let d = dist(&unitary(c), want);
    assert!(d < TOL, "distance {d:e}");
}

fn single_gen(n: usize, p: usize, q: usize) -> DMatrix<C> {
    hermitize(&single_ladder(n, p, q), false)
}

fn double_gen(n: usize, p: usize, q: usize, r: usize, s: usize) -> DMatrix<C> {
    hermitize(&double_ladder(n, p, q, r, s), false)
}

#[test]
fn pauli_rotation_matches_exponential() {
    for (label, phi) in [("XYZ", 0.7), ("IZ", -1.1), ("Y", 0.4), ("ZIXY", 2.3), ("XXXXX", 0.9)] {
        let p = PauliString::from_label(label).unwrap();
        let c = compile_pauli_rotation(&p, phi).unwrap();
        let want = expm_herm(&pauli_dense(label), phi / 2.0);
        close(&c, &want);
        let expect_ms = if p.locality() == 1 { 0 } else { 2 };
        assert_eq!(c.ms_count(), expect_ms, "{label}");
    }
    let neg = PauliString::from_label("-XZ").unwrap();
    close(&compile_pauli_rotation(&neg, 0.5).unwrap(), &expm_herm(&pauli_dense("XZ"), -0.25));
    assert!(compile_pauli_rotation(&PauliString::from_label("II").unwrap(), 0.1).is_err());
}

#[test]
fn single_excitations_both_axes() {
    let n = 5;
    for (p, q) in [(0, 1), (0, 2), (1, 4), (0, 4), (2, 3)] {
        for theta in angles(p as u64 * 7 + q as u64, 2) {
            let want = expm_herm(&single_gen(n, p, q), theta);
            for axis in [MsAxis::XX, MsAxis::YY] {
                let c = compile_single_excitation(n, p, q, theta, axis).unwrap();
                close(&c, &want);
                let k = count(&c);
                assert_eq!(k.ms_total(), 2);
                assert_eq!(k.single_qubit - c.gates().iter().filter(|g| matches!(g, Gate::Clifford1 { .. })).count(), 2);
            }
        }
    }
    // 0,1 at theta = 0 is the identity
    close(&compile_single_excitation(2, 0, 1, 0.0, MsAxis::XX).unwrap(), &DMatrix::identity(4, 4));
    assert!(compile_single_excitation(3, 2, 1, 0.3, MsAxis::XX).is_err());
}

#[test]
fn double_excitations_and_blocks() {
    let n = 6;
    for (quad, seed) in [([0, 1, 2, 3], 1), ([0, 2, 3, 5], 2), ([1, 2, 4, 5], 3), ([0, 1, 4, 5], 4)] {
        let [p, q, r, s] = quad;
        let th = angles(seed, 3);
        let c = compile_double_excitation(n, p, q, r, s, th[0]).unwrap();
        close(&c, &expm_herm(&double_gen(n, p, q, r, s), th[0]));
        assert_eq!(c.ms_count(), 4);
        let rz = c.gates().iter().filter(|g| matches!(g, Gate::Rz { .. })).count();
        assert_eq!(rz, 8);
        let block = compile_double_block(n, p, q, r, s, [th[0], th[1], th[2]]).unwrap();
        let g = double_gen(n, p, q, r, s) * C::from(th[0])
            + double_gen(n, p, r, q, s) * C::from(th[1])
            + double_gen(n, p, s, q, r) * C::from(th[2]);
        close(&block, &expm_herm(&g, 1.0));
        assert_eq!(block.ms_count(), 4);
    }
}

#[test]
fn coupled_exchange_drops_half_the_rotations() {
    let n = 5;
    let (p, q, r, s) = (0, 1, 3, 4);
    let theta = 0.37;
    let c = compile_coupled_exchange(n, p, q, r, s, theta).unwrap();
    let g = double_gen(n, p, q, r, s) + double_gen(n, p, s, r, q);
    close(&c, &expm_herm(&g, theta));
    assert_eq!(c.ms_count(), 4);
    let mut rz: Vec<usize> = c
        .gates()
        .iter()
        .filter_map(|g| match g {
            Gate::Rz { qubit, .. } => Some(*qubit),
            _ => None,
        })
        .collect();
    rz.sort();
    assert_eq!(rz, vec![q, q, s, s]);
    // the block with (theta, 0, -theta) is the same circuit; (theta, 0, theta) is not
    close(&compile_double_block(n, p, q, r, s, [theta, 0.0, -theta]).unwrap(), &expm_herm(&g, theta));
    let wrong = compile_double_block(n, p, q, r, s, [theta, 0.0, theta]).unwrap();
    assert!(dist(&unitary(&wrong), &expm_herm(&g, theta)) > 0.1);
}

#[test]
fn controlled_singles_both_cases_and_variants() {
    let n = 5;
    // case 1: control outside the string; case 2: inside
    for (p, q, j) in [(0, 2, 3), (1, 2, 4), (2, 4, 0), (0, 3, 1), (0, 4, 2)] {
        let theta = 0.41 + j as f64 * 0.1;
        let gen = double_gen(n, p, j, q, j);
        let want = expm_herm(&gen, theta);
        let a = compile_controlled_single(n, p, q, j, theta, ControlVariant::A).unwrap();
        close(&a, &want);
        assert_eq!(a.ms_count(), 2);
        assert_eq!(count(&a).crz, 2);
        let b = compile_controlled_single(n, p, q, j, theta, ControlVariant::B).unwrap();
        close(&b, &want);
        assert_eq!(b.ms_count(), 4);
        assert_eq!(count(&b).crz, 0);
        // the MS set gains or loses the control depending on the case
        let sets: Vec<Vec<usize>> = b
            .gates()
            .iter()
            .filter_map(|g| match g {
                Gate::Ms { qubits, direction: Direction::Forward, .. } => Some(qubits.clone()),
                _ => None,
            })
            .collect();
        let inside = p < j && j < q;
        if inside {
            assert!(sets[0].contains(&j) && !sets[1].contains(&j));
        } else {
            assert!(!sets[0].contains(&j) && sets[1].contains(&j));
        }
    }
}

#[test]
fn fused_controls_share_one_pair() {
    let n = 6;
    let plan = controlled_single_plan(n, 0, 2, &[(3, 0.3), (5, -0.2)], MsAxis::XX).unwrap();
    let c = plan.to_circuit(n).unwrap();
    assert_eq!(c.ms_count(), 2);
    let g = double_gen(n, 0, 3, 2, 3) * C::from(0.3) + double_gen(n, 0, 5, 2, 5) * C::from(-0.2);
    close(&c, &expm_herm(&g, 1.0));
    // a case-2 control needs a different MS set
    assert!(controlled_single_plan(n, 1, 3, &[(2, 0.1), (4, 0.1)], MsAxis::XX).is_err());
}

#[test]
fn symmetrized_wrapping_subscript_and_superscript() {
    let n = 5;
    let terms = [
        (ExcitationTerm::single(1, 3, true, 1.0).unwrap(), hermitize(&single_ladder(n, 1, 3), true)),
        (ExcitationTerm::double(0, 2, 3, 4, true, 1.0).unwrap(), hermitize(&double_ladder(n, 0, 2, 3, 4), true)),
        (ExcitationTerm::double(0, 3, 1, 4, true, 1.0).unwrap(), hermitize(&double_ladder(n, 0, 3, 1, 4), true)),
        (
            ExcitationTerm::controlled_single(0, 3, 2, true, 1.0).unwrap(),
            hermitize(&double_ladder(n, 0, 2, 3, 2), true),
        ),
    ];
    for (t, dense) in &terms {
        let want = expm_herm(dense, 0.53);
        let via_sub = compile_symmetrized(n, t, 0.53).unwrap();
        close(&via_sub, &want);
        let sup = t.kind.superscripts()[0];
        let via_sup = compile_symmetrized_via(n, t, 0.53, sup).unwrap();
        close(&via_sup, &want);
        assert_eq!(via_sub.ms_count(), via_sup.ms_count());
    }
}

#[test]
fn higher_excitations() {
    // N = 1 and N = 2 reproduce the single and double counts
    let n = 6;
    let c = compile_higher_excitation(n, &[1], &[4], 0.3).unwrap();
    assert_eq!(c.ms_count(), 2);
    close(&c, &expm_herm(&single_gen(n, 1, 4), 0.3));
    let c = compile_higher_excitation(n, &[0, 1], &[3, 5], 0.3).unwrap();
    assert_eq!(c.ms_count(), 4);
    close(&c, &expm_herm(&double_gen(n, 0, 1, 3, 5), 0.3));

    let triple = |occ: [usize; 3], virt: [usize; 3]| {
        let mut l = DMatrix::<C>::identity(1 << n, 1 << n);
        for o in occ {
            l *= creator(n, o);
        }
        for v in virt {
            l *= annihilator(n, v);
        }
        hermitize(&l, false)
    };
    for (occ, virt) in [([0, 1, 2], [3, 4, 5]), ([0, 2, 4], [1, 3, 5])] {
        let c = compile_higher_excitation(n, &occ, &virt, -0.8).unwrap();
        close(&c, &expm_herm(&triple(occ, virt), -0.8));
        // seven radius-1 balls are the best cover of the 32 odd words on six letters
        assert_eq!(c.ms_count(), 14);
    }
}

#[test]
fn six_centres_cannot_cover_the_triple() {
    let odd: Vec<u32> = (0..64u32).filter(|w| w.count_ones() % 2 == 1).collect();
    assert_eq!(even_centre_cover(&odd, 6).len(), 7);
    // eight letters admit a perfect cover by the extended Hamming code
    let odd8: Vec<u32> = (0..256u32).filter(|w| w.count_ones() % 2 == 1).collect();
    assert_eq!(even_centre_cover(&odd8, 8).len(), 16);
    let odd4: Vec<u32> = (0..16u32).filter(|w| w.count_ones() % 2 == 1).collect();
    assert_eq!(even_centre_cover(&odd4, 4).len(), 2);
}

#[test]
fn baseline_counts() {
    let n = 6;
    let t = ExcitationTerm::double(0, 1, 2, 3, false, 0.2).unwrap();
    let g = ionjw::fermion::weighted_pauli(&t, n).unwrap();
    let c = baseline_string_by_string(&g, 1.0).unwrap();
    assert_eq!(c.ms_count(), 16);
    close(&c, &expm_herm(&(double_gen(n, 0, 1, 2, 3) * C::from(0.2)), 1.0));
    let s = ExcitationTerm::single(0, 3, false, 1.0).unwrap();
    let c = baseline_string_by_string(&ionjw::fermion::weighted_pauli(&s, n).unwrap(), 0.7).unwrap();
    assert_eq!(c.ms_count(), 4);
    for (p, q, j) in [(0, 2, 3), (1, 3, 2)] {
        for sym in [false, true] {
            let t = ExcitationTerm::controlled_single(p, q, j, sym, 0.6).unwrap();
            let c = baseline_controlled(n, &t, 1.0).unwrap();
            assert_eq!(c.ms_count(), 4);
            let l = double_ladder(n, p, j, q, j);
            close(&c, &expm_herm(&(hermitize(&l, sym) * C::from(0.6)), 1.0));
        }
    }
}

#[test]
fn backward_elimination_is_exact_and_idempotent() {
    let n = 6;
    let circuits = [
        compile_double_excitation(n, 0, 1, 2, 4, 0.3).unwrap(),
        compile_single_excitation(n, 0, 5, 1.2, MsAxis::YY).unwrap(),
        compile_controlled_single(n, 1, 4, 2, 0.7, ControlVariant::B).unwrap(),
        compile_higher_excitation(n, &[0, 1, 2], &[3, 4, 5], 0.2).unwrap(),
    ];
    for c in &circuits {
        let e = eliminate_backward_ms(c).unwrap();
        assert_eq!(count(&e).ms_backward, 0);
        assert_eq!(e.ms_count(), c.ms_count());
        close(&e, &unitary(c));
        assert_eq!(eliminate_backward_ms(&e).unwrap(), e);
    }
}

#[test]
fn mixed_cnot_double() {
    let n = 6;
    for [p, q, r, s] in [[0, 1, 2, 3], [0, 2, 3, 5], [1, 2, 4, 5]] {
        let c = compile_mixed_cnot(n, p, q, r, s, 0.45).unwrap();
        assert_eq!(c.ms_count(), 2);
        assert!(count(&c).cnot <= 16);
        close(&c, &expm_herm(&double_gen(n, p, q, r, s), 0.45));
    }
}

#[test]
fn plans_expose_signs_and_window() {
    let plans = double_block_plans(6, [0, 1, 3, 5], [0.2, 0.0, 0.0], MsAxis::XX).unwrap();
    assert_eq!(plans.len(), 2);
    assert_eq!(plans[0].qubit_window, vec![0, 1, 3, 4, 5]);
    assert_eq!(plans[0].m, 2);
    assert_eq!(plans[0].rz_assignments().len(), 4);
    for r in plans.iter().flat_map(|p| &p.rotations) {
        assert!(r.sign == 1 || r.sign == -1);
        assert!((r.angle.abs() - 0.05).abs() < 1e-12);
    }
}
