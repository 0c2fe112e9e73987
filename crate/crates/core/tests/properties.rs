mod common;

use std::f64::consts::{PI, TAU};

use holonomy_core::abelian::{abelian_orange_slice, solid_angle};
use holonomy_core::chain::{
    build_full_hamiltonian, coupling_matrix, couplings_from_matrix, effective_hamiltonian, total_sz, CouplingSet,
};
use holonomy_core::envelope::Envelope;
use holonomy_core::evolution::{closed_form_evolution, sliced_evolution_with_envelope, PulseSpec, Space};
use holonomy_core::holonomy::{holonomy_pair, isoclinic_slice};
use holonomy_core::matrix::{decompose_u2, exp_hermitian, su2_rotation, svd2, ComplexMatrix, C64};
use holonomy_core::measurement::{survival_probability, MeasurementConfig, ProbeSet};
use proptest::prelude::*;

use common::*;

fn coupling() -> impl Strategy<Value = f64> {
    -1.5f64..1.5
}

prop_compose! {
    fn couplings()(j in prop::array::uniform4(coupling()), dz in prop::array::uniform4(coupling())) -> CouplingSet {
        CouplingSet::new(j, dz).unwrap()
    }
}

prop_compose! {
    fn unitary()(theta in 0.0..PI, u in -1.0f64..1.0, az in 0.0..TAU, chi in -PI..PI) -> ComplexMatrix {
        let r = (1.0 - u * u).sqrt();
        su2_rotation(theta, [r * az.cos(), r * az.sin(), u]).scale(C64::from_polar(1.0, chi))
    }
}

fn well_conditioned(cs: &CouplingSet) -> bool {
    let t = coupling_matrix(cs);
    let fro2: f64 = t.entries().iter().map(|z| z.norm_sqr()).sum();
    t.det2().norm() > 1e-3 * fro2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn abelian_slice_is_diagonal_phase(phi1 in 0.0..TAU, phi2 in 0.0..TAU) {
        let u = abelian_orange_slice(phi1, phi2);
        let omega = solid_angle(phi1, phi2);
        prop_assert!(u[(0, 1)].norm() < 1e-12 && u[(1, 0)].norm() < 1e-12);
        prop_assert!((u[(0, 0)] - C64::from_polar(1.0, -omega / 2.0)).norm() < 1e-12);
        prop_assert!((u.det2() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn coupling_matrix_round_trip(cs in couplings()) {
        let back = couplings_from_matrix(&coupling_matrix(&cs));
        prop_assert_eq!(back, cs);
    }

    #[test]
    fn hamiltonian_conserves_excitations(cs in couplings()) {
        let h = build_full_hamiltonian(&cs);
        let sz = total_sz();
        prop_assert!((&(&h * &sz) - &(&sz * &h)).max_abs() < 1e-13);
        prop_assert!(h.is_hermitian(0.0));
    }

    #[test]
    fn svd_reconstructs(cs in couplings()) {
        prop_assume!(well_conditioned(&cs));
        let t = coupling_matrix(&cs);
        let svd = svd2(&t).unwrap();
        prop_assert!(svd.reconstruct().max_abs_diff(&t) < 1e-12);
        prop_assert!(svd.u.is_unitary(1e-12) && svd.v.is_unitary(1e-12));
        prop_assert!(svd.s[0] >= svd.s[1] && svd.s[1] > 0.0);
    }

    #[test]
    fn closed_form_is_unitary_and_matches_exponential(cs in couplings(), area in -TAU..TAU) {
        prop_assume!(well_conditioned(&cs));
        let u = closed_form_evolution(&coupling_matrix(&cs), area).unwrap();
        prop_assert!(u.is_unitary(1e-12));
        let exact = exp_hermitian(&effective_hamiltonian(&cs), area).unwrap();
        prop_assert!(u.max_abs_diff(&exact) < 1e-11);
        let oracle = taylor_exp(&effective_hamiltonian(&cs), area);
        prop_assert!(u.max_abs_diff(&oracle) < 1e-10);
    }

    #[test]
    fn evolution_additive_in_area(cs in couplings(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        prop_assume!(well_conditioned(&cs));
        let t = coupling_matrix(&cs);
        let ab = closed_form_evolution(&t, a + b).unwrap();
        let split = &closed_form_evolution(&t, b).unwrap() * &closed_form_evolution(&t, a).unwrap();
        prop_assert!(ab.max_abs_diff(&split) < 1e-12);
    }

    #[test]
    fn envelope_shape_does_not_matter(cs in couplings(), area in -3.0f64..3.0, width in 0.1f64..0.4) {
        prop_assume!(well_conditioned(&cs));
        let closed = closed_form_evolution(&coupling_matrix(&cs), area).unwrap();
        let shaped = sliced_evolution_with_envelope(&cs, area, Envelope::Gaussian { width }, 200, Space::Effective4).unwrap();
        prop_assert!(closed.max_abs_diff(&shaped) < 1e-11);
    }

    #[test]
    fn u2_decomposition_round_trip(u in unitary()) {
        let d = decompose_u2(&u).unwrap();
        prop_assert!(d.to_matrix().max_abs_diff(&u) < 1e-12);
        prop_assert!((0.0..=PI).contains(&d.phi));
        let n = d.axis;
        prop_assert!(((n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn isoclinic_holonomy_is_product(w1 in unitary(), w2 in unitary()) {
        let spec = isoclinic_slice(&w1, &w2).unwrap();
        let pair = holonomy_pair(&spec).unwrap();
        prop_assert!(pair.uc0.max_abs_diff(&(&w2 * &w1.adjoint())) < 1e-12);
        prop_assert!(pair.uc0.is_unitary(1e-12) && pair.uc1.is_unitary(1e-12));
        let det_product = pair.uc0.det2() * pair.uc1.det2();
        prop_assert!((det_product - 1.0).norm() < 1e-12);
    }

    #[test]
    fn reversed_pulse_undoes_evolution(cs in couplings(), area in -TAU..TAU) {
        prop_assume!(well_conditioned(&cs));
        let p = PulseSpec::new(cs, area, "p").unwrap();
        let round = &p.reversed().evolution().unwrap() * &p.evolution().unwrap();
        prop_assert!(round.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn survival_is_a_probability(w1 in unitary(), w2 in unitary(),
                                 params in prop::array::uniform6(-2.0f64..2.0), probe in 0usize..4) {
        let pair = holonomy_pair(&isoclinic_slice(&w1, &w2).unwrap()).unwrap();
        let [e, j13, d13, j24, d24, b] = params;
        let cfg = MeasurementConfig { e, j13, d13, j24, d24, b };
        for q in 0..2 {
            let psi = ProbeSet::tomographic(q).states()[probe];
            let p = survival_probability(&psi, &pair, &cfg).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}
