//! Acceptance checks, one line per criterion. Run with
//! `cargo test -p holonomy-core --test acceptance`.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use holonomy_core::abelian::{
    abelian_orange_slice, dynamical_phase, orange_slice_sequence, solid_angle, unbiasedness_check,
};
use holonomy_core::chain::{build_full_hamiltonian, excitation_leakage, project_to_block, subspace_projector};
use holonomy_core::evolution::{closed_form_evolution, hamiltonian, sliced_evolution, Space};
use holonomy_core::holonomy::{
    design_isoclinic_pulse, evolved_projector, geodesic_frame, holonomy_pair, isoclinic_slice, mutual_unbiasedness,
    z_power, SliceSpec,
};
use holonomy_core::matrix::{decompose_u2, ComplexMatrix, C64};
use holonomy_core::measurement::{
    gate_fidelity, invert_holonomy, optimize_measurement, survival_probability, w_gates, ProbeSet,
};
use holonomy_core::HolonomyPair;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_isoclinic_spec(rng: &mut impl Rng) -> SliceSpec {
    isoclinic_slice(&random_unitary(rng), &random_unitary(rng)).unwrap()
}

fn abelian_gate_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..256 {
        let (phi1, phi2) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
        let omega = 2.0 * (phi2 - phi1);
        let want = ComplexMatrix::diag(&[C64::from_polar(1.0, -omega / 2.0), C64::from_polar(1.0, omega / 2.0)]);
        let oracle = &abelian_pulse_oracle(phi2, -PI) * &abelian_pulse_oracle(phi1, PI);
        worst = worst
            .max(abelian_orange_slice(phi1, phi2).max_abs_diff(&want))
            .max(oracle.max_abs_diff(&want))
            .max((solid_angle(phi1, phi2) - omega).abs());
    }
    ensure(worst < 1e-10, format!("max entry error {worst:.2e} over 256 slices"))
}

fn vanishing_dynamical_phase() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..64 {
        let seq = orange_slice_sequence(rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
        for pole in 0..2 {
            worst = worst.max(dynamical_phase(&seq, pole).unwrap().abs());
        }
    }
    ensure(
        worst < 1e-9,
        format!("max |phase| {worst:.2e} over 64 sequences, both poles"),
    )
}

fn block_evolution() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut err, mut leak) = (0.0f64, 0.0f64);
    for _ in 0..256 {
        let cs = random_couplings(&mut rng);
        let area = rng.random_range(-TAU..TAU);
        let closed = closed_form_evolution(&coupling_matrix_oracle(&cs), area).unwrap();
        let full = sliced_evolution(&cs, area, 10_000, Space::Full16).unwrap();
        err = err.max(closed.frobenius_diff(&restrict(&full)));
        leak = leak.max(excitation_leakage(&full));
    }
    ensure(
        err < 1e-8 && leak < 1e-10,
        format!("Frobenius error {err:.2e}, leakage {leak:.2e} over 256 pulses"),
    )
}

fn hamiltonian_block_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let cs = random_couplings(&mut rng);
        let oracle_full = full_hamiltonian_oracle(&cs);
        let h16 = build_full_hamiltonian(&cs);
        let projected = project_to_block(&h16).unwrap();
        let t = coupling_matrix_oracle(&cs).scale_re(0.5);
        let z = ComplexMatrix::zeros(2);
        let want = ComplexMatrix::from_blocks(&z, &t, &t.adjoint(), &z);
        worst = worst
            .max(projected.max_abs_diff(&want))
            .max(restrict(&oracle_full).max_abs_diff(&want))
            .max(h16.max_abs_diff(&oracle_full));
    }
    ensure(
        worst < 1e-12,
        format!("max entry error {worst:.2e} over 1000 coupling sets"),
    )
}

fn holonomy_products() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut diag, mut off) = (0.0f64, 0.0f64);
    for _ in 0..256 {
        let spec = random_isoclinic_spec(&mut rng);
        let leg = |l: usize| {
            let h = restrict(&full_hamiltonian_oracle(&spec.pulse(l).couplings));
            taylor_exp(&h, spec.pulse(l).area)
        };
        let u = &leg(2) * &leg(1);
        let (s1, s2) = (spec.svd(1), spec.svd(2));
        let (z1, z2) = (z_power(spec.p1()), z_power(spec.p2()));
        let prod0 = &(&(&(&(&s2.u * &z2) * &s2.v.adjoint()) * &s1.v) * &z1) * &s1.u.adjoint();
        let prod1 = &(&(&(&(&s2.v * &z2) * &s2.u.adjoint()) * &s1.u) * &z1) * &s1.v.adjoint();
        diag = diag
            .max(u.block(0, 0, 2).max_abs_diff(&prod0))
            .max(u.block(2, 2, 2).max_abs_diff(&prod1));
        off = off.max(u.block(0, 2, 2).max_abs()).max(u.block(2, 0, 2).max_abs());
        let pair = holonomy_pair(&spec).unwrap();
        diag = diag
            .max(pair.uc0.max_abs_diff(&prod0))
            .max(pair.uc1.max_abs_diff(&prod1));
    }
    ensure(
        diag < 1e-12 && off < 1e-12,
        format!("diagonal blocks {diag:.2e}, off-diagonal {off:.2e} over 256 specs"),
    )
}

fn geometric_character() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..256 {
        let spec = random_isoclinic_spec(&mut rng);
        for l in 1..=2 {
            let cs = &spec.pulse(l).couplings;
            let projected = project_to_block(&build_full_hamiltonian(cs)).unwrap();
            for h in [hamiltonian(cs, Space::Effective4), projected] {
                for q in 0..2 {
                    let p = subspace_projector(q);
                    worst = worst.max((&(&p * &h) * &p).max_abs());
                }
            }
        }
    }
    ensure(worst == 0.0, format!("max |P_q H P_q| = {worst:.2e} over 256 specs"))
}

fn geodesic_frames() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..32 {
        let spec = random_isoclinic_spec(&mut rng);
        for leg in 1..=2 {
            for q in 0..2 {
                for k in 0..32 {
                    let t = k as f64 / 31.0;
                    let geo = geodesic_frame(&spec, leg, q, t).unwrap().projector();
                    worst = worst.max(geo.max_abs_diff(&evolved_projector(&spec, leg, q, t).unwrap()));
                }
            }
        }
    }
    ensure(
        worst < 1e-10,
        format!("max projector error {worst:.2e}, 32 specs x 2 legs x 2 subspaces x 32 points"),
    )
}

fn mutual_unbiasedness_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut grass = 0.0f64;
    for _ in 0..32 {
        let pulse = design_isoclinic_pulse(&random_unitary(&mut rng), &random_unitary(&mut rng)).unwrap();
        for s in mutual_unbiasedness(&pulse, 50).unwrap() {
            grass = grass.max((s.plus - 1.0).abs()).max((s.minus - 1.0).abs());
        }
    }
    let mut bloch = 0.0f64;
    for _ in 0..32 {
        let phi = rng.random_range(0.0..TAU);
        let alphas: Vec<f64> = (0..50).map(|_| rng.random_range(0.0..TAU)).collect();
        for pair in unbiasedness_check(phi, &alphas) {
            bloch = bloch
                .max((pair[0] - FRAC_1_SQRT_2).abs())
                .max((pair[1] - FRAC_1_SQRT_2).abs());
        }
    }
    ensure(
        grass < 1e-10 && bloch < 1e-12,
        format!("|Tr[P±P(t)] - 1| {grass:.2e}, |overlap - 1/sqrt2| {bloch:.2e}"),
    )
}

fn non_abelian_witness() -> Outcome {
    // Hadamard then phase gate S = diag(1, i).
    let h = ComplexMatrix::from_2x2([[c(1.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(-1.0, 0.0)]]).scale_re(FRAC_1_SQRT_2);
    let s = ComplexMatrix::diag(&[c(1.0, 0.0), c(0.0, 1.0)]);
    let spec = isoclinic_slice(&h, &s).unwrap();
    let forward = holonomy_pair(&spec).unwrap();
    let swapped = holonomy_pair(&spec.swapped().unwrap()).unwrap();
    let n1 = decompose_u2(&spec.leg_unitary(1)).unwrap().axis;
    let n2 = decompose_u2(&spec.leg_unitary(2)).unwrap().axis;
    let axis_gap = n1.iter().zip(&n2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let gap = (&forward.uc0 - &swapped.uc0).operator_norm();
    ensure(
        axis_gap > 0.1 && gap > 0.1,
        format!("axes differ by {axis_gap:.3}, order-swapped uc0 differ by {gap:.3} in operator norm"),
    )
}

fn measurement_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let probes = ProbeSet::tomographic(0);
    let (mut min_p, mut min_fid, mut min_agree, mut max_evals) = (1.0f64, 1.0f64, 1.0f64, 0usize);
    let mut failures = 0;
    for _ in 0..100 {
        let pair = holonomy_pair(&random_isoclinic_spec(&mut rng)).unwrap();
        let (closed, _) = w_gates(&invert_holonomy(&pair.uc0).unwrap());
        match optimize_measurement(&pair, &probes, 5000) {
            Ok(fit) => {
                let (w0, _) = w_gates(&fit.config);
                min_p = min_p.min(fit.p_min);
                min_fid = min_fid.min(gate_fidelity(&w0, &pair.uc0));
                min_agree = min_agree.min((&w0.adjoint() * &closed).trace().norm() / 2.0);
                max_evals = max_evals.max(fit.evaluations);
            }
            Err(_) => failures += 1,
        }
    }

    let mut phase = 0.0f64;
    for _ in 0..100 {
        let pair = holonomy_pair(&random_isoclinic_spec(&mut rng)).unwrap();
        let cfg = holonomy_core::MeasurementConfig {
            e: rng.random_range(-1.5..1.5),
            j13: rng.random_range(-1.5..1.5),
            d13: rng.random_range(-1.5..1.5),
            j24: rng.random_range(-1.5..1.5),
            d24: rng.random_range(-1.5..1.5),
            b: rng.random_range(0.0..2.0),
        };
        let theta = rng.random_range(-PI..PI);
        let shifted = HolonomyPair::from_blocks(pair.uc0.scale(C64::from_polar(1.0, theta)), pair.uc1.clone()).unwrap();
        for psi in probes.states() {
            let a = survival_probability(psi, &pair, &cfg).unwrap();
            let b = survival_probability(psi, &shifted, &cfg).unwrap();
            phase = phase.max((a - b).abs());
        }
    }

    ensure(
        failures == 0 && min_p > 0.999 && min_fid > 0.999 && min_agree > 0.999 && max_evals <= 5000 && phase < 1e-12,
        format!(
            "{failures} budget failures, min p_min {min_p:.6}, min fidelity {min_fid:.6}, \
             min agreement with inverter {min_agree:.6}, max evaluations {max_evals}, phase drift {phase:.2e}"
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("abelian gate identity", abelian_gate_identity),
        ("vanishing dynamical phase", vanishing_dynamical_phase),
        ("block evolution correctness", block_evolution),
        ("hamiltonian block form", hamiltonian_block_form),
        ("holonomy product identity", holonomy_products),
        ("geometric character", geometric_character),
        ("geodesic frames", geodesic_frames),
        ("mutual unbiasedness", mutual_unbiasedness_check),
        ("non-abelian witness", non_abelian_witness),
        ("measurement recovery", measurement_recovery),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
