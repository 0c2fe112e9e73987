//! Read-out of the holonomies through next-nearest-neighbour gates
//! `W_q = e^{-ib T_q}` and the survival probability
//! `p = |⟨ψ|(W₀U(C₀) ⊕ W₁U(C₁))|ψ⟩|²`.
//!
//! `p = 1` for every probe in `M_q` exactly when `W_q` inverts `U(C_q)` up
//! to a phase, so the SU(2) part of a holonomy can be recovered by
//! maximizing `p`. A single probe does not pin the gate down, so the
//! search maximizes the minimum over a tomographic probe set.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::holonomy::{inner, HolonomyPair, State4};
use crate::matrix::{c, decompose_u2, exp_hermitian, ComplexMatrix, C64};
use crate::optimize::{nelder_mead, NelderMeadOptions};

/// Parameters of the read-out Hamiltonian `h = f(s)(T₀ ⊕ T₁)` and its area `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MeasurementConfig {
    pub e: f64,
    pub j13: f64,
    pub d13: f64,
    pub j24: f64,
    pub d24: f64,
    pub b: f64,
}

impl MeasurementConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [self.e, self.j13, self.d13, self.j24, self.d24, self.b];
        if all.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidArgument("measurement parameters must be finite"))
        }
    }
}

/// `T₀ = [[E, J₁₃ + iD₁₃], [J₁₃ − iD₁₃, −E]]` and the same for `T₁` with `J₂₄, D₂₄`.
pub fn nnn_blocks(cfg: &MeasurementConfig) -> (ComplexMatrix, ComplexMatrix) {
    let block = |j: f64, d: f64| ComplexMatrix::from_2x2([[c(cfg.e, 0.0), c(j, d)], [c(j, -d), c(-cfg.e, 0.0)]]);
    (block(cfg.j13, cfg.d13), block(cfg.j24, cfg.d24))
}

/// `T₀ ⊕ T₁` in the basis `B`.
pub fn readout_hamiltonian(cfg: &MeasurementConfig) -> ComplexMatrix {
    let (t0, t1) = nnn_blocks(cfg);
    ComplexMatrix::direct_sum(&t0, &t1)
}

/// `(e^{-ib T₀}, e^{-ib T₁})`.
pub fn w_gates(cfg: &MeasurementConfig) -> (ComplexMatrix, ComplexMatrix) {
    let (t0, t1) = nnn_blocks(cfg);
    let w = |t: &ComplexMatrix| exp_hermitian(t, cfg.b).expect("read-out blocks are hermitian");
    (w(&t0), w(&t1))
}

/// `W₀ ⊕ W₁`.
pub fn readout_operator(cfg: &MeasurementConfig) -> ComplexMatrix {
    let (w0, w1) = w_gates(cfg);
    ComplexMatrix::direct_sum(&w0, &w1)
}

fn check_unit(psi: &State4) -> Result<()> {
    let n = inner(psi, psi).re.sqrt();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument("state must have unit norm"));
    }
    Ok(())
}

fn expectation_sq(m: &ComplexMatrix, psi: &State4) -> f64 {
    let image = m.mul_vec(psi);
    let amp: C64 = psi.iter().zip(&image).map(|(a, b)| a.conj() * b).sum();
    amp.norm_sqr()
}

/// `|⟨ψ|(W₀U(C₀) ⊕ W₁U(C₁))|ψ⟩|²`.
pub fn survival_probability(psi: &State4, uc: &HolonomyPair, cfg: &MeasurementConfig) -> Result<f64> {
    check_unit(psi)?;
    let total = &readout_operator(cfg) * &uc.direct_sum();
    Ok(expectation_sq(&total, psi).min(1.0))
}

/// Gate fidelity `|tr(W·U)|/2` between a read-out block and a holonomy block.
pub fn gate_fidelity(w: &ComplexMatrix, uc: &ComplexMatrix) -> f64 {
    (w * uc).trace().norm() / 2.0
}

/// Closed-form read-out for block `q`: with `b = 1`, picks `(E, J, D)` so
/// that `W_q = e^{+iφ n·σ/2}`, the inverse of the SU(2) part of `uc`.
/// The couplings of the other block are zero.
pub fn invert_holonomy_block(uc: &ComplexMatrix, q: usize) -> Result<MeasurementConfig> {
    if q > 1 {
        return Err(Error::InvalidArgument("subspace index must be 0 or 1"));
    }
    let dec = decompose_u2(uc)?;
    if dec.phi == 0.0 {
        return Ok(MeasurementConfig::default());
    }
    // T = J σ_x − D σ_y + E σ_z, and e^{-iT} = e^{+iφ n·σ/2} needs T = −(φ/2) n·σ.
    let g = -0.5 * dec.phi;
    let (j, d, e) = (g * dec.axis[0], -g * dec.axis[1], g * dec.axis[2]);
    let cfg = if q == 0 {
        MeasurementConfig {
            e,
            j13: j,
            d13: d,
            b: 1.0,
            ..Default::default()
        }
    } else {
        MeasurementConfig {
            e,
            j24: j,
            d24: d,
            b: 1.0,
            ..Default::default()
        }
    };

    let (w0, w1) = w_gates(&cfg);
    let w = if q == 0 { w0 } else { w1 };
    let residual = phase_identity_residual(&(&w * uc));
    if residual > 1e-10 {
        return Err(Error::ProductMismatch { deviation: residual });
    }
    Ok(cfg)
}

/// [`invert_holonomy_block`] for `M₀`.
pub fn invert_holonomy(uc0: &ComplexMatrix) -> Result<MeasurementConfig> {
    invert_holonomy_block(uc0, 0)
}

/// Distance of a 2×2 matrix from the nearest `e^{iθ}·I`.
pub fn phase_identity_residual(m: &ComplexMatrix) -> f64 {
    let tr = m.trace();
    let phase = if tr.norm() > 0.0 { tr / tr.norm() } else { c(1.0, 0.0) };
    m.max_abs_diff(&ComplexMatrix::identity(m.dim()).scale(phase))
}

/// Probe states confined to one subspace `M_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSet {
    q: usize,
    states: Vec<State4>,
}

impl ProbeSet {
    pub fn new(q: usize, states: Vec<State4>) -> Result<Self> {
        if q > 1 {
            return Err(Error::InvalidArgument("subspace index must be 0 or 1"));
        }
        if states.is_empty() {
            return Err(Error::InvalidArgument("probe set is empty"));
        }
        let outside = if q == 0 { 2..4 } else { 0..2 };
        for s in &states {
            check_unit(s)?;
            if outside.clone().map(|k| s[k].norm()).fold(0.0, f64::max) > 1e-12 {
                return Err(Error::InvalidArgument("probe state leaves its subspace"));
            }
        }
        Ok(Self { q, states })
    }

    /// `|a⟩, |b⟩, (|a⟩+|b⟩)/√2, (|a⟩+i|b⟩)/√2` for the basis pair of `M_q`.
    pub fn tomographic(q: usize) -> Self {
        assert!(q < 2, "subspace index must be 0 or 1");
        let (a, b) = (2 * q, 2 * q + 1);
        let zero = c(0.0, 0.0);
        let mut states = alloc::vec![[zero; 4]; 4];
        states[0][a] = c(1.0, 0.0);
        states[1][b] = c(1.0, 0.0);
        states[2][a] = c(FRAC_1_SQRT_2, 0.0);
        states[2][b] = c(FRAC_1_SQRT_2, 0.0);
        states[3][a] = c(FRAC_1_SQRT_2, 0.0);
        states[3][b] = c(0.0, FRAC_1_SQRT_2);
        Self { q, states }
    }

    pub fn subspace(&self) -> usize {
        self.q
    }

    pub fn states(&self) -> &[State4] {
        &self.states
    }
}

/// Multi-start settings for [`optimize_measurement_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Total objective evaluations across all restarts.
    pub budget: usize,
    /// Required `p_min`.
    pub target: f64,
    pub simplex: NelderMeadOptions,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 8,
            seed: 0,
            budget: 5000,
            target: 0.999,
            simplex: NelderMeadOptions::default(),
        }
    }
}

/// Best read-out found by the search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementFit {
    pub config: MeasurementConfig,
    pub p_min: f64,
    pub evaluations: usize,
    pub iterations: usize,
    /// Index of the restart that produced the fit.
    pub restart: usize,
}

fn config_from_params(q: usize, x: &[f64; 4]) -> MeasurementConfig {
    let [e, j, d, b] = *x;
    if q == 0 {
        MeasurementConfig {
            e,
            j13: j,
            d13: d,
            b,
            ..Default::default()
        }
    } else {
        MeasurementConfig {
            e,
            j24: j,
            d24: d,
            b,
            ..Default::default()
        }
    }
}

/// `min_ψ |⟨ψ|W_q U(C_q)|ψ⟩|²` over the probes.
pub fn min_survival(uc: &HolonomyPair, probes: &ProbeSet, cfg: &MeasurementConfig) -> f64 {
    let q = probes.q;
    let (w0, w1) = w_gates(cfg);
    let w = if q == 0 { w0 } else { w1 };
    let m = &w * uc.block(q);
    probes
        .states
        .iter()
        .map(|psi| {
            let (x, y) = (psi[2 * q], psi[2 * q + 1]);
            let amp = x.conj() * (m[(0, 0)] * x + m[(0, 1)] * y) + y.conj() * (m[(1, 0)] * x + m[(1, 1)] * y);
            amp.norm_sqr()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Maximizes the minimum survival probability over `(E, J, D, b)` with the
/// default multi-start settings and the given evaluation budget.
pub fn optimize_measurement(uc: &HolonomyPair, probes: &ProbeSet, budget: usize) -> Result<MeasurementFit> {
    optimize_measurement_with(
        uc,
        probes,
        &OptimizerOptions {
            budget,
            ..Default::default()
        },
    )
}

pub fn optimize_measurement_with(
    uc: &HolonomyPair,
    probes: &ProbeSet,
    opts: &OptimizerOptions,
) -> Result<MeasurementFit> {
    if opts.budget == 0 || opts.restarts == 0 {
        return Err(Error::InvalidArgument("budget and restarts must be positive"));
    }
    let q = probes.q;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<[f64; 4]> = (0..opts.restarts)
        .map(|_| {
            [
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
                1.0,
            ]
        })
        .collect();

    let mut used = 0;
    let mut iterations = 0;
    let mut best: Option<(usize, [f64; 4], f64)> = None;
    for (k, x0) in starts.iter().enumerate() {
        let remaining = opts.budget - used;
        if remaining == 0 {
            break;
        }
        let share = remaining / (opts.restarts - k);
        let simplex = NelderMeadOptions {
            max_evaluations: share.max(1),
            ..opts.simplex
        };
        let r = nelder_mead(
            |x: &[f64; 4]| 1.0 - min_survival(uc, probes, &config_from_params(q, x)),
            *x0,
            [0.5; 4],
            &simplex,
        );
        used += r.evaluations;
        iterations += r.iterations;
        let p = 1.0 - r.value;
        if best.is_none_or(|(_, _, bp)| p > bp) {
            best = Some((k, r.x, p));
        }
    }

    let (restart, x, p_min) = best.expect("at least one restart ran");
    let fit = MeasurementFit {
        config: config_from_params(q, &x),
        p_min,
        evaluations: used,
        iterations,
        restart,
    };
    if p_min > opts.target {
        Ok(fit)
    } else {
        Err(Error::BudgetExhausted(fit))
    }
}

/// B-basis state after a single spin flip at `site` (1-based):
/// sites 1, 3 span `M₀`, sites 2, 4 span `M₁`.
pub fn prepare_initial_state(site: usize) -> Result<State4> {
    let index = match site {
        1 => 0,
        3 => 1,
        2 => 2,
        4 => 3,
        _ => return Err(Error::InvalidArgument("site must be in 1..=4")),
    };
    let mut psi = [c(0.0, 0.0); 4];
    psi[index] = c(1.0, 0.0);
    Ok(psi)
}
