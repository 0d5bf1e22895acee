mod common;

use common::*;
use ionjw::circuit::count;
use ionjw::ham::{h3plus_builtin, parse_integrals, term_list, HamiltonianTermList, Reality};
use ionjw::sim::{apply_to_basis, circuit_unitary};
use ionjw::trotter::*;
use nalgebra::DMatrix;
use num_complex::Complex64 as C;

fn h3plus_spec(params: Vec<f64>) -> AnsatzSpec {
    AnsatzSpec {
        n_modes: 6,
        occupied: vec![0, 1],
        virtual_modes: vec![2, 3, 4, 5],
        params,
    }
}

fn cfg(dt: f64, scheduling: Scheduling) -> TrotterConfig {
    TrotterConfig {
        dt,
        reality: Reality::Real,
        scheduling,
    }
}

#[test]
fn uccsd_excitation_list() {
    let ex = h3plus_spec(vec![]).excitations().unwrap();
    let shown: Vec<String> = ex.iter().map(|t| t.kind.to_string()).collect();
    assert_eq!(
        shown,
        ["[0->2]", "[0->4]", "[1->3]", "[1->5]", "[0,1->2,3]", "[0,1->2,5]", "[0,1->3,4]", "[0,1->4,5]"]
    );
}

#[test]
fn uccsd_layer_counts_and_unitary() {
    let params = angles(5, 8);
    let spec = h3plus_spec(params.clone());
    let c = build_uccsd_layer(&spec).unwrap();
    assert_eq!(count(&c).ms_total(), 24);
    let base = build_uccsd_layer_with(&spec, Scheduling::Baseline).unwrap();
    assert_eq!(base.ms_count(), 80);

    // oracle: ordered product of dense exponentials built from ladder matrices
    let n = 6;
    let gens = [
        single_ladder(n, 0, 2),
        single_ladder(n, 0, 4),
        single_ladder(n, 1, 3),
        single_ladder(n, 1, 5),
        double_ladder(n, 0, 1, 2, 3),
        double_ladder(n, 0, 1, 2, 5),
        double_ladder(n, 0, 1, 4, 3),
        double_ladder(n, 0, 1, 4, 5),
    ];
    let mut want = DMatrix::<C>::identity(64, 64);
    for (l, th) in gens.iter().zip(&params) {
        want = expm_herm(&hermitize(l, false), *th) * want;
    }
    let got = circuit_unitary(&c).unwrap().into_matrix();
    assert!(dist(&got, &want) < 1e-9);
    assert!(dist(&circuit_unitary(&base).unwrap().into_matrix(), &want) < 1e-9);
    assert!(dist(uccsd_reference(&spec).unwrap().matrix(), &want) < 1e-9);
}

#[test]
fn uccsd_zero_params_and_degenerate() {
    let spec = AnsatzSpec::zeros(6, &[0, 1], &[2, 3, 4, 5]).unwrap();
    let u = circuit_unitary(&build_uccsd_layer(&spec).unwrap()).unwrap().into_matrix();
    assert!(dist(&u, &DMatrix::identity(64, 64)) < 1e-10);
    let empty = AnsatzSpec::zeros(4, &[], &[0, 1, 2, 3]).unwrap();
    assert!(build_uccsd_layer(&empty).unwrap().is_empty());
    assert!(build_uccsd_layer(&h3plus_spec(vec![0.1; 3])).is_err());
    assert!(AnsatzSpec::zeros(4, &[0, 1], &[1, 2]).is_err());
}

#[test]
fn h3plus_step_counts() {
    let nonlocal = h3plus_builtin().non_local();
    let count_for = |s| build_trotter_step(&nonlocal, &cfg(0.1, s)).unwrap().ms_count();
    assert_eq!(count_for(Scheduling::Parallelized), 26);
    assert_eq!(count_for(Scheduling::Baseline), 56);
    assert_eq!(count_for(Scheduling::Naive), 176);
}

#[test]
fn h3plus_step_matches_ordered_product() {
    let h = h3plus_builtin();
    let reference = trotter_reference(&h, 0.1).unwrap();
    for s in [Scheduling::Parallelized, Scheduling::Baseline, Scheduling::Naive] {
        let u = circuit_unitary(&build_trotter_step(&h, &cfg(0.1, s)).unwrap()).unwrap();
        let d = dist(u.matrix(), reference.matrix());
        assert!(d < 1e-9, "{s:?}: {d:e}");
    }
}

/// Ordered product of dense exponentials, term by term, straight from the ladder oracle.
fn oracle_step(list: &HamiltonianTermList, dt: f64) -> DMatrix<C> {
    let n = list.n_modes;
    let d = 1 << n;
    let mut u = DMatrix::<C>::identity(d, d) * C::from_polar(1.0, -dt * list.constant);
    for t in &list.local {
        let m = match *t {
            ionjw::ham::LocalTerm::Density { p, weight } => number(n, p) * C::from(2.0 * weight),
            ionjw::ham::LocalTerm::Coulomb { p, q, weight } => {
                hermitize(&double_ladder(n, p, q, p, q), true) * C::from(weight)
            }
        };
        u = expm_herm(&m, dt) * u;
    }
    for b in schedule_blocks(&list.excitations) {
        for t in b.terms() {
            use ionjw::fermion::ExcitationKind::*;
            let l = match t.kind {
                Single { p, q } => single_ladder(n, p, q),
                Double { p, q, r, s } => double_ladder(n, p, q, r, s),
                ControlledSingle { p, q, j } => double_ladder(n, p, j, q, j),
                Higher { .. } => unreachable!(),
            };
            u = expm_herm(&(hermitize(&l, t.symmetrized) * C::from(t.coefficient)), dt) * u;
        }
    }
    u
}

#[test]
fn complex_table_step_against_ladder_oracle() {
    let doc = "norb 4 reality complex\n0.3 1 1 0 0\n0.2 -0.1 1 3 0 0\n0.15 0.05 1 2 3 4\n0.4 1 2 2 1\n0.12 -0.03 1 4 2 4\n0.07 0.02 2 1 3 4\n";
    let t = parse_integrals(doc).unwrap();
    let list = term_list(&t).unwrap();
    let c = TrotterConfig {
        dt: 0.3,
        reality: Reality::Complex,
        scheduling: Scheduling::Parallelized,
    };
    let u = circuit_unitary(&build_trotter_step(&list, &c).unwrap()).unwrap();
    assert!(dist(u.matrix(), &oracle_step(&list, 0.3)) < 1e-9);
    // a real-orbital step refuses a complex term list
    assert!(build_trotter_step(&list, &TrotterConfig { reality: Reality::Real, ..c }).is_err());
}

#[test]
fn h3plus_step_against_ladder_oracle() {
    let h = h3plus_builtin();
    let u = circuit_unitary(&build_trotter_step(&h, &cfg(0.07, Scheduling::Parallelized)).unwrap()).unwrap();
    assert!(dist(u.matrix(), &oracle_step(&h, 0.07)) < 1e-9);
}

#[test]
fn error_probe_is_second_order() {
    let h = h3plus_builtin();
    let errs = trotter_error_probe(&h, &[0.0, 0.1, 0.05]).unwrap();
    assert!(errs[0].1 < 1e-12);
    let ratio = errs[1].1 / errs[2].1;
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn commuting_terms_have_no_trotter_error() {
    let t = parse_integrals("norb 3 reality real\n-1.0 1 1 0 0\n0.5 2 2 0 0\n0.3 1 2 2 1\n0.2 0 0 0 0\n").unwrap();
    let list = term_list(&t).unwrap();
    for (_, e) in trotter_error_probe(&list, &[0.1, 0.7, 2.0]).unwrap() {
        assert!(e < 1e-10);
    }
}

#[test]
fn reference_state() {
    let c = prepare_reference(&[0, 1], 6).unwrap();
    let psi = apply_to_basis(&c, 0).unwrap();
    // |110000> with qubit 0 leftmost is basis index 0b000011
    assert!((psi[0b11] - C::from(1.0)).norm() < 1e-12);
    let c = prepare_reference(&[5], 6).unwrap();
    assert!((apply_to_basis(&c, 0).unwrap()[1 << 5] - C::from(1.0)).norm() < 1e-12);
    assert!(prepare_reference(&[], 3).unwrap().is_empty());
    assert!(prepare_reference(&[6], 6).is_err());
}
