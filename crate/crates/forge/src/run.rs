//! Executes one experiment configuration against the library.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::time::Instant;

use holonomy_core::abelian::{
    abelian_orange_slice, dynamical_phase_with, orange_slice_sequence, solid_angle, unbiasedness_check,
};
use holonomy_core::chain::{effective_hamiltonian, excitation_leakage, restrict_to_block};
use holonomy_core::evolution::{pulse_evolution, Space};
use holonomy_core::holonomy::{
    dynamical_block_norm, evolved_projector, geodesic_frame, holonomy_pair, holonomy_pair_report, mutual_unbiasedness,
    pole_frames, unbiasedness_at, SliceSpec,
};
use holonomy_core::matrix::{decompose_u2, DEFAULT_TOL};
use holonomy_core::measurement::{
    gate_fidelity, invert_holonomy_block, min_survival, optimize_measurement_with, survival_probability, w_gates,
    MeasurementConfig, OptimizerOptions, ProbeSet,
};
use holonomy_core::HolonomyPair;
use rayon::prelude::*;

use crate::config::{
    probe_set, AbelianParams, AbelianPhaseBase, AbelianUnbiasednessBase, Axis, ExperimentConfig, GeometryParams,
    HolonomyParams, MeasureParams, Mode, MutualUnbiasednessBase, SurvivalBase, SweepKind, SweepParams, SCHEMA_VERSION,
};
use crate::error::CliError;
use crate::report::{
    matrix, AbelianResult, Checks, FitReport, GeodesicReport, GeometryResult, HolonomyResult, InverseReport,
    MeasureResult, PulseReport, Results, RunReport, SweepResult, Timing, UnbiasednessPoint, UnbiasednessReport,
};

/// Command-line overrides and execution settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    /// Worker threads for sweeps; `None` uses all cores.
    pub jobs: Option<usize>,
    /// Tolerance of the unitarity / hermiticity checks on reported matrices.
    pub tolerance: f64,
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            seed: None,
            jobs: None,
            tolerance: DEFAULT_TOL,
            timing: false,
        }
    }
}

pub fn execute(config: &ExperimentConfig, opts: &RunOptions) -> Result<RunReport, CliError> {
    if !(opts.tolerance.is_finite() && opts.tolerance > 0.0) {
        return Err(CliError::validation("tolerance must be positive"));
    }
    if opts.jobs == Some(0) {
        return Err(CliError::validation("jobs must be positive"));
    }
    let start = Instant::now();
    let mut config = config.clone();
    if let Some(seed) = opts.seed {
        config.seed = seed;
    }
    let mut checks = Checks::new(opts.tolerance);
    let results = match config.mode {
        Mode::Abelian => Results::Abelian(run_abelian(&config.parameters()?, &mut checks)?),
        Mode::Holonomy => Results::Holonomy(Box::new(run_holonomy(&config.parameters()?, &mut checks)?)),
        Mode::Geometry => Results::Geometry(run_geometry(&config.parameters()?, &mut checks)?),
        Mode::Measure => Results::Measure(Box::new(run_measure(&config.parameters()?, config.seed, &mut checks)?)),
        Mode::Sweep => Results::Sweep(run_sweep(&config.parameters()?, opts.jobs)?),
    };
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        mode: config.mode,
        results,
        checks: checks.finish()?,
        timing: opts.timing.then(|| Timing {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        }),
        config,
    })
}

fn wrap_pi(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn core_err(e: holonomy_core::Error) -> CliError {
    CliError::from_core(e)
}

fn run_abelian(p: &AbelianParams, checks: &mut Checks) -> Result<AbelianResult, CliError> {
    p.validate()?;
    let envelope = p.envelope.envelope()?;
    let gate = abelian_orange_slice(p.phi1, p.phi2);
    checks.unitary("gate", &gate);
    let seq = orange_slice_sequence(p.phi1, p.phi2);
    let dynamical = [
        dynamical_phase_with(&seq, 0, envelope, p.slices).map_err(core_err)?,
        dynamical_phase_with(&seq, 1, envelope, p.slices).map_err(core_err)?,
    ];
    Ok(AbelianResult {
        phi1: p.phi1,
        phi2: p.phi2,
        geometric_phase: gate[(0, 0)].arg(),
        gate: matrix(&gate),
        solid_angle: solid_angle(p.phi1, p.phi2),
        dynamical_phase: dynamical,
        slices: p.slices,
    })
}

fn run_holonomy(p: &HolonomyParams, checks: &mut Checks) -> Result<HolonomyResult, CliError> {
    let spec = p.slice.spec()?;
    let (pair, residuals) = holonomy_pair_report(&spec).map_err(core_err)?;
    let mut pulses = Vec::new();
    let mut full_space_deviation = 0.0f64;
    for leg in 1..=2 {
        let pulse = spec.pulse(leg);
        let svd = spec.svd(leg);
        let cond = spec.condition(leg);
        let full = pulse_evolution(pulse, Space::Full16).map_err(core_err)?;
        let closed = pulse_evolution(pulse, Space::Effective4).map_err(core_err)?;
        full_space_deviation = full_space_deviation.max(restrict_to_block(&full).max_abs_diff(&closed));
        checks.hermitian(format!("hamiltonian[{leg}]"), &effective_hamiltonian(&pulse.couplings));
        checks.unitary(format!("u[{leg}]"), &svd.u);
        checks.unitary(format!("v[{leg}]"), &svd.v);
        checks.unitary(format!("pulse_evolution[{leg}]"), &closed);
        pulses.push(PulseReport {
            label: pulse.label.clone(),
            area: pulse.area,
            coupling_matrix: matrix(&pulse.coupling_matrix()),
            singular_values: svd.s,
            u: matrix(&svd.u),
            v: matrix(&svd.v),
            p: cond.p,
            negated: cond.negated,
            condition_residual: cond.residual,
            leakage: excitation_leakage(&full),
        });
    }
    let evolution = spec.evolution();
    checks.unitary("evolution", &evolution);
    checks.unitary("uc0", &pair.uc0);
    checks.unitary("uc1", &pair.uc1);
    let legs = pair.legs.expect("slice holonomies carry leg decompositions");
    Ok(HolonomyResult {
        pulses,
        evolution: matrix(&evolution),
        uc0: matrix(&pair.uc0),
        uc1: matrix(&pair.uc1),
        dec0: (&pair.dec0).into(),
        dec1: (&pair.dec1).into(),
        legs: [(&legs[0]).into(), (&legs[1]).into()],
        delta_chi: pair.delta_chi,
        off_block: residuals.off_block,
        product_deviation: residuals.product_deviation,
        dynamical_block_norm: dynamical_block_norm(&spec),
        full_space_deviation,
    })
}

fn run_geometry(p: &GeometryParams, checks: &mut Checks) -> Result<GeometryResult, CliError> {
    p.validate()?;
    let spec = p.slice.spec()?;
    let mut geodesics = Vec::new();
    for leg in 1..=2 {
        for q in 0..2 {
            let mut worst = 0.0f64;
            for k in 0..p.points {
                let t = k as f64 / (p.points - 1) as f64;
                let geo = geodesic_frame(&spec, leg, q, t).map_err(core_err)?.projector();
                let evolved = evolved_projector(&spec, leg, q, t).map_err(core_err)?;
                worst = worst.max(geo.max_abs_diff(&evolved));
                if k == p.points / 2 {
                    checks.hermitian(format!("geodesic_projector[{leg}][{q}]"), &geo);
                }
            }
            geodesics.push(GeodesicReport {
                leg,
                q,
                points: p.points,
                max_projector_error: worst,
            });
        }
    }
    let mut unbiasedness = Vec::new();
    for leg in 1..=2 {
        let pulse = spec.pulse(leg);
        let [plus, minus] = pole_frames(pulse).map_err(core_err)?;
        checks.hermitian(format!("pole_projector_plus[{leg}]"), &plus.projector());
        checks.hermitian(format!("pole_projector_minus[{leg}]"), &minus.projector());
        let samples: Vec<UnbiasednessPoint> = mutual_unbiasedness(pulse, p.samples)
            .map_err(core_err)?
            .into_iter()
            .map(|s| UnbiasednessPoint {
                t_fraction: s.t_fraction,
                plus: s.plus,
                minus: s.minus,
            })
            .collect();
        let max_deviation = samples
            .iter()
            .map(|s| (s.plus - 1.0).abs().max((s.minus - 1.0).abs()))
            .fold(0.0, f64::max);
        unbiasedness.push(UnbiasednessReport {
            leg,
            max_deviation,
            samples,
        });
    }
    Ok(GeometryResult {
        geodesics,
        unbiasedness,
        dynamical_block_norm: dynamical_block_norm(&spec),
    })
}

fn run_measure(p: &MeasureParams, seed: u64, checks: &mut Checks) -> Result<MeasureResult, CliError> {
    p.validate()?;
    let spec = p.slice.spec()?;
    let pair = holonomy_pair(&spec).map_err(core_err)?;
    let probes = probe_set(p.subspace, p.probe_sites.as_deref())?;
    let q = p.subspace;
    let uc = pair.block(q).clone();
    let opts = OptimizerOptions {
        restarts: p.restarts,
        seed,
        budget: p.budget,
        target: p.target,
        ..Default::default()
    };
    let fit = optimize_measurement_with(&pair, &probes, &opts).map_err(core_err)?;
    let gate = pick(w_gates(&fit.config), q);
    let closed_cfg = invert_holonomy_block(&uc, q).map_err(core_err)?;
    let closed_gate = pick(w_gates(&closed_cfg), q);
    checks.unitary("holonomy", &uc);
    checks.unitary("fit.gate", &gate);
    checks.unitary("closed_form.gate", &closed_gate);
    Ok(MeasureResult {
        subspace: q,
        probes: probes.states().len(),
        holonomy: matrix(&uc),
        decomposition: (&decompose_u2(&uc).map_err(core_err)?).into(),
        fit: FitReport {
            config: (&fit.config).into(),
            p_min: fit.p_min,
            evaluations: fit.evaluations,
            iterations: fit.iterations,
            restart: fit.restart,
            fidelity: gate_fidelity(&gate, &uc),
            gate: matrix(&gate),
        },
        closed_form: InverseReport {
            config: (&closed_cfg).into(),
            p_min: min_survival(&pair, &probes, &closed_cfg),
            fidelity: gate_fidelity(&closed_gate, &uc),
        },
        agreement: (&gate.adjoint() * &closed_gate).trace().norm() / 2.0,
    })
}

fn pick<T>(pair: (T, T), q: usize) -> T {
    if q == 0 {
        pair.0
    } else {
        pair.1
    }
}

type PointFn<'a> = Box<dyn Fn(f64) -> Result<Vec<f64>, CliError> + Sync + 'a>;

struct SurvivalSetup {
    pair: HolonomyPair,
    probes: ProbeSet,
    base: MeasurementConfig,
    q: usize,
}

fn survival_row(s: &SurvivalSetup, axis: Axis, x: f64) -> Result<Vec<f64>, CliError> {
    let mut cfg = s.base;
    match axis {
        Axis::E => cfg.e = x,
        Axis::J13 => cfg.j13 = x,
        Axis::D13 => cfg.d13 = x,
        Axis::B => cfg.b = x,
        _ => unreachable!("axis checked during validation"),
    }
    let ps = s
        .probes
        .states()
        .iter()
        .map(|psi| survival_probability(psi, &s.pair, &cfg))
        .collect::<Result<Vec<_>, _>>()
        .map_err(core_err)?;
    let p_min = ps.iter().copied().fold(f64::INFINITY, f64::min);
    let p_mean = ps.iter().sum::<f64>() / ps.len() as f64;
    let gate = pick(w_gates(&cfg), s.q);
    Ok(vec![x, p_min, p_mean, gate_fidelity(&gate, s.pair.block(s.q))])
}

fn run_sweep(p: &SweepParams, jobs: Option<usize>) -> Result<SweepResult, CliError> {
    let grid = p.validate()?;
    let axis = p.axis;
    let (columns, point): (Vec<&str>, PointFn) = match p.kind {
        SweepKind::AbelianPhase => {
            let base: AbelianPhaseBase = p.base()?;
            if base.slices == 0 || !base.phi1.is_finite() {
                return Err(CliError::validation("base needs finite phi1 and positive slices"));
            }
            let cols = vec![
                axis.name(),
                "phase",
                "expected_phase",
                "phase_error",
                "dynamical_phase_0",
                "dynamical_phase_1",
            ];
            let f = move |phi2: f64| -> Result<Vec<f64>, CliError> {
                let gate = abelian_orange_slice(base.phi1, phi2);
                let phase = gate[(0, 0)].arg().rem_euclid(TAU);
                let expected = (-(phi2 - base.phi1)).rem_euclid(TAU);
                let seq = orange_slice_sequence(base.phi1, phi2);
                let env = holonomy_core::Envelope::Rectangular;
                Ok(vec![
                    phi2,
                    phase,
                    expected,
                    wrap_pi(phase - expected).abs(),
                    dynamical_phase_with(&seq, 0, env, base.slices).map_err(core_err)?,
                    dynamical_phase_with(&seq, 1, env, base.slices).map_err(core_err)?,
                ])
            };
            (cols, Box::new(f))
        }
        SweepKind::AbelianUnbiasedness => {
            let base: AbelianUnbiasednessBase = p.base()?;
            if !base.phi.is_finite() {
                return Err(CliError::validation("base.phi must be finite"));
            }
            let cols = vec![axis.name(), "overlap_plus", "overlap_minus", "max_deviation"];
            let f = move |area: f64| -> Result<Vec<f64>, CliError> {
                let [plus, minus] = unbiasedness_check(base.phi, &[area])[0];
                let dev = (plus - FRAC_1_SQRT_2).abs().max((minus - FRAC_1_SQRT_2).abs());
                Ok(vec![area, plus, minus, dev])
            };
            (cols, Box::new(f))
        }
        SweepKind::MutualUnbiasedness => {
            let base: MutualUnbiasednessBase = p.base()?;
            let pulse = base.pulse.pulse("pulse")?;
            pulse.svd().map_err(core_err)?;
            let cols = vec![axis.name(), "fidelity_plus", "fidelity_minus", "max_deviation"];
            let f = move |t: f64| -> Result<Vec<f64>, CliError> {
                let s = unbiasedness_at(&pulse, t).map_err(core_err)?;
                let dev = (s.plus - 1.0).abs().max((s.minus - 1.0).abs());
                Ok(vec![t, s.plus, s.minus, dev])
            };
            (cols, Box::new(f))
        }
        SweepKind::Survival => {
            let base: SurvivalBase = p.base()?;
            let spec: SliceSpec = base.slice.spec()?;
            let setup = SurvivalSetup {
                pair: holonomy_pair(&spec).map_err(core_err)?,
                probes: probe_set(base.subspace, base.probe_sites.as_deref())?,
                base: base.measurement.config()?,
                q: base.subspace,
            };
            let cols = vec![axis.name(), "p_min", "p_mean", "fidelity"];
            let f = move |x: f64| survival_row(&setup, axis, x);
            (cols, Box::new(f))
        }
    };

    let evaluate = || grid.par_iter().map(|&x| point(x)).collect::<Vec<_>>();
    let outcomes = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::io(format!("thread pool: {e}")))?
            .install(evaluate),
        None => evaluate(),
    };
    let rows = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(SweepResult {
        kind: p.kind,
        axis: axis.name().to_string(),
        columns: columns.into_iter().map(String::from).collect(),
        rows,
    })
}
