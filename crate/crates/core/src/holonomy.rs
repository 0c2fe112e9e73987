//! Non-Abelian orange slices on the Grassmannian G(4;2).
//!
//! Two pulses, each with `cos(|α|S/2) = 0`, carry `M₀` to `M₁` and back
//! along two different geodesics. The evolution is then block diagonal in
//! `B` and its blocks `U(C₀)`, `U(C₁)` are the holonomies of the two loops.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

#[allow(unused_imports)]
use num_traits::Float;

use crate::chain::{couplings_from_matrix, effective_hamiltonian, subspace_projector};
use crate::error::{Error, Result};
use crate::evolution::{closed_form_from_svd, PulseSpec};
use crate::matrix::{c, decompose_u2, diag_real, ComplexMatrix, SvdTriple, U2Decomposition, C64, DEFAULT_TOL};

/// Tolerance on the per-pulse `cos`/`sin` conditions.
pub const CONDITION_TOL: f64 = 1e-10;
/// Tolerance on off-diagonal blocks and the two-route product check.
pub const BLOCK_TOL: f64 = 1e-12;

/// A vector in the effective space, components over `B`.
pub type State4 = [C64; 4];

/// Which `±Z^p` branch `sin(|α|S/2)` landed on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceCondition {
    pub p: u8,
    /// `sin(|α|S/2) = −Z^p` rather than `Z^p`.
    pub negated: bool,
    pub residual: f64,
}

impl SliceCondition {
    pub fn sign(&self) -> f64 {
        if self.negated {
            -1.0
        } else {
            1.0
        }
    }
}

/// `Z^p` with `Z = diag(1, −1)`.
pub fn z_power(p: u8) -> ComplexMatrix {
    if p == 0 {
        ComplexMatrix::identity(2)
    } else {
        diag_real([1.0, -1.0])
    }
}

/// Checks `cos(|α|S/2) = 0` and `sin(|α|S/2) ∈ {±Z⁰, ±Z¹}`.
pub fn validate_slice_conditions(t: &ComplexMatrix, area: f64) -> Result<SliceCondition> {
    validate_svd_conditions(&crate::matrix::svd2(t)?, area)
}

fn validate_svd_conditions(svd: &SvdTriple, area: f64) -> Result<SliceCondition> {
    let half = 0.5 * area.abs();
    let (sin0, cos0) = (half * svd.s[0]).sin_cos();
    let (sin1, cos1) = (half * svd.s[1]).sin_cos();
    let cos_residual = cos0.abs().max(cos1.abs());

    const BRANCHES: [(u8, bool, [f64; 2]); 4] = [
        (0, false, [1.0, 1.0]),
        (1, false, [1.0, -1.0]),
        (0, true, [-1.0, -1.0]),
        (1, true, [-1.0, 1.0]),
    ];
    let (p, negated, sin_residual) = BRANCHES
        .iter()
        .map(|&(p, neg, want)| (p, neg, (sin0 - want[0]).abs().max((sin1 - want[1]).abs())))
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .expect("branch list is nonempty");

    let residual = cos_residual.max(sin_residual);
    if residual > CONDITION_TOL {
        return Err(Error::ConditionUnsatisfiable { residual });
    }
    Ok(SliceCondition { p, negated, residual })
}

/// A validated pulse pair.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceSpec {
    pulses: [PulseSpec; 2],
    svds: [SvdTriple; 2],
    conditions: [SliceCondition; 2],
}

impl SliceSpec {
    pub fn new(pulse1: PulseSpec, pulse2: PulseSpec) -> Result<Self> {
        let svds = [pulse1.svd()?, pulse2.svd()?];
        let conditions = [
            validate_svd_conditions(&svds[0], pulse1.area)?,
            validate_svd_conditions(&svds[1], pulse2.area)?,
        ];
        Ok(Self {
            pulses: [pulse1, pulse2],
            svds,
            conditions,
        })
    }

    pub fn pulse(&self, leg: usize) -> &PulseSpec {
        &self.pulses[leg_index(leg)]
    }

    pub fn svd(&self, leg: usize) -> &SvdTriple {
        &self.svds[leg_index(leg)]
    }

    pub fn condition(&self, leg: usize) -> &SliceCondition {
        &self.conditions[leg_index(leg)]
    }

    pub fn p1(&self) -> u8 {
        self.conditions[0].p
    }

    pub fn p2(&self) -> u8 {
        self.conditions[1].p
    }

    /// Exchanges the two coupling sets while each position keeps its area.
    pub fn swapped(&self) -> Result<Self> {
        let [a, b] = &self.pulses;
        let first = PulseSpec::new(b.couplings, a.area, b.label.clone())?;
        let second = PulseSpec::new(a.couplings, b.area, a.label.clone())?;
        Self::new(first, second)
    }

    /// `U_l Z^{p_l} V_l†` for leg `l ∈ {1, 2}`.
    pub fn leg_unitary(&self, leg: usize) -> ComplexMatrix {
        let i = leg_index(leg);
        let svd = &self.svds[i];
        &(&svd.u * &z_power(self.conditions[i].p)) * &svd.v.adjoint()
    }

    /// Overall sign of the diagonal blocks relative to the bare products.
    /// It is `+1` for the usual forward-then-reversed pulse pair on the
    /// `+Z^p` branches.
    fn product_sign(&self) -> f64 {
        let leg_sign = |i: usize| self.pulses[i].area.signum() * self.conditions[i].sign();
        -leg_sign(0) * leg_sign(1)
    }

    /// Effective-space evolution of the full slice.
    pub fn evolution(&self) -> ComplexMatrix {
        let first = closed_form_from_svd(&self.svds[0], self.pulses[0].area);
        let second = closed_form_from_svd(&self.svds[1], self.pulses[1].area);
        &second * &first
    }
}

fn leg_index(leg: usize) -> usize {
    assert!(leg == 1 || leg == 2, "leg must be 1 or 2");
    leg - 1
}

/// The geometric unitaries of both loops and their U(2) decompositions.
#[derive(Clone, Debug, PartialEq)]
pub struct HolonomyPair {
    pub uc0: ComplexMatrix,
    pub uc1: ComplexMatrix,
    pub dec0: U2Decomposition,
    pub dec1: U2Decomposition,
    /// `χ₂ − χ₁` of the two legs: `U(C₀)` carries `e^{-iΔχ}`, `U(C₁)` carries `e^{+iΔχ}`.
    pub delta_chi: f64,
    /// Decompositions of `U_l Z^{p_l} V_l†`, when built from a slice.
    pub legs: Option<[U2Decomposition; 2]>,
}

impl HolonomyPair {
    /// Wraps a pair of blocks that did not come from a slice.
    pub fn from_blocks(uc0: ComplexMatrix, uc1: ComplexMatrix) -> Result<Self> {
        let dec0 = decompose_u2(&uc0)?;
        let dec1 = decompose_u2(&uc1)?;
        Ok(Self {
            delta_chi: dec0.chi,
            uc0,
            uc1,
            dec0,
            dec1,
            legs: None,
        })
    }

    /// `U(C₀) ⊕ U(C₁)` in the basis `B`.
    pub fn direct_sum(&self) -> ComplexMatrix {
        ComplexMatrix::direct_sum(&self.uc0, &self.uc1)
    }

    pub fn block(&self, q: usize) -> &ComplexMatrix {
        match q {
            0 => &self.uc0,
            1 => &self.uc1,
            _ => panic!("subspace index must be 0 or 1"),
        }
    }
}

/// Diagnostics from [`holonomy_pair_report`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolonomyResiduals {
    pub off_block: f64,
    pub product_deviation: f64,
}

/// Composes the slice, checks block-diagonality, and cross-checks the
/// blocks against `U₂Z^{p₂}V₂†V₁Z^{p₁}U₁†` and `V₂Z^{p₂}U₂†U₁Z^{p₁}V₁†`.
pub fn holonomy_pair(spec: &SliceSpec) -> Result<HolonomyPair> {
    holonomy_pair_report(spec).map(|(pair, _)| pair)
}

pub fn holonomy_pair_report(spec: &SliceSpec) -> Result<(HolonomyPair, HolonomyResiduals)> {
    let u = spec.evolution();
    let off_block = u.block(0, 2, 2).max_abs().max(u.block(2, 0, 2).max_abs());
    if off_block > BLOCK_TOL {
        return Err(Error::NotBlockDiagonal { off_block });
    }
    let uc0 = u.block(0, 0, 2);
    let uc1 = u.block(2, 2, 2);

    let w1 = spec.leg_unitary(1);
    let w2 = spec.leg_unitary(2);
    let sign = spec.product_sign();
    let alg0 = (&w2 * &w1.adjoint()).scale_re(sign);
    let alg1 = (&w2.adjoint() * &w1).scale_re(sign);
    let product_deviation = uc0.max_abs_diff(&alg0).max(uc1.max_abs_diff(&alg1));
    if product_deviation > BLOCK_TOL {
        return Err(Error::ProductMismatch {
            deviation: product_deviation,
        });
    }

    let legs = [decompose_u2(&w1)?, decompose_u2(&w2)?];
    let pair = HolonomyPair {
        dec0: decompose_u2(&uc0)?,
        dec1: decompose_u2(&uc1)?,
        delta_chi: legs[1].chi - legs[0].chi,
        uc0,
        uc1,
        legs: Some(legs),
    };
    Ok((
        pair,
        HolonomyResiduals {
            off_block,
            product_deviation,
        },
    ))
}

/// `max_{l,q} |P_q H_l P_q|`: zero when both pulses are purely off-diagonal.
pub fn dynamical_block_norm(spec: &SliceSpec) -> f64 {
    spec.pulses
        .iter()
        .flat_map(|pulse| {
            let h = effective_hamiltonian(&pulse.couplings);
            (0..2).map(move |q| {
                let p = subspace_projector(q);
                (&(&p * &h) * &p).max_abs()
            })
        })
        .fold(0.0, f64::max)
}

/// Pulse with coupling matrix `T = u·v†` (so `S = I`) and area π; it meets
/// the slice conditions on the `p = 0` branch.
pub fn design_isoclinic_pulse(u_target: &ComplexMatrix, v_target: &ComplexMatrix) -> Result<PulseSpec> {
    for m in [u_target, v_target] {
        let dev = m.unitarity_deviation();
        if dev > DEFAULT_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
    }
    let t = u_target * &v_target.adjoint();
    PulseSpec::new(couplings_from_matrix(&t), core::f64::consts::PI, "isoclinic")
}

/// Slice whose legs have `U_l Z^{p_l} V_l† = w_l`, so `U(C₀) = w₂·w₁†`.
/// The second pulse runs with reversed envelope.
pub fn isoclinic_slice(w1: &ComplexMatrix, w2: &ComplexMatrix) -> Result<SliceSpec> {
    let id = ComplexMatrix::identity(2);
    let first = design_isoclinic_pulse(w1, &id)?;
    let second = design_isoclinic_pulse(w2, &id)?.reversed();
    SliceSpec::new(first, second)
}

/// `Λ(q) = i^q U ⊕ i^{1−q} V` in the basis `B`.
pub fn lambda_operator(q: usize, u: &ComplexMatrix, v: &ComplexMatrix) -> ComplexMatrix {
    assert!(q < 2, "subspace index must be 0 or 1");
    let i_pow = |k: usize| if k == 0 { c(1.0, 0.0) } else { c(0.0, 1.0) };
    ComplexMatrix::direct_sum(&u.scale(i_pow(q)), &v.scale(i_pow(1 - q)))
}

/// The frame `e₁…e₄^{(l,q)}`: `e₁, e₂` span `M_q`, `e₃, e₄` span `M_{1−q}`,
/// the latter two carrying the sign `(−1)^l`.
pub fn lambda_basis(q: usize, u: &ComplexMatrix, v: &ComplexMatrix, l: usize) -> [State4; 4] {
    assert!(l == 1 || l == 2, "l must be 1 or 2");
    let lambda = lambda_operator(q, u, v);
    let col = |j: usize, sign: f64| -> State4 {
        let mut out = [c(0.0, 0.0); 4];
        for (r, z) in out.iter_mut().enumerate() {
            *z = lambda[(r, j)] * sign;
        }
        out
    };
    let sign = if l == 1 { -1.0 } else { 1.0 };
    let (own, other) = (2 * q, 2 * (1 - q));
    [col(own, 1.0), col(own + 1, 1.0), col(other, sign), col(other + 1, sign)]
}

pub fn inner(a: &State4, b: &State4) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn combine(a: f64, x: &State4, b: f64, y: &State4) -> State4 {
    let mut out = [c(0.0, 0.0); 4];
    for (k, z) in out.iter_mut().enumerate() {
        *z = x[k] * a + y[k] * b;
    }
    out
}

/// `Σ_k |v_k⟩⟨v_k|`.
pub fn projector_of(vectors: &[State4]) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, |r, col| vectors.iter().map(|v| v[r] * v[col].conj()).sum())
}

/// Orthonormal 2-frame in the effective space (a point of S(4;2)).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame2 {
    vectors: [State4; 2],
}

impl Frame2 {
    pub fn new(vectors: [State4; 2]) -> Result<Self> {
        let gram = [
            [inner(&vectors[0], &vectors[0]), inner(&vectors[0], &vectors[1])],
            [inner(&vectors[1], &vectors[0]), inner(&vectors[1], &vectors[1])],
        ];
        let dev = (gram[0][0] - 1.0)
            .norm()
            .max((gram[1][1] - 1.0).norm())
            .max(gram[0][1].norm())
            .max(gram[1][0].norm());
        if dev > 1e-12 {
            return Err(Error::InvalidArgument("frame vectors are not orthonormal"));
        }
        Ok(Self { vectors })
    }

    pub fn vectors(&self) -> &[State4; 2] {
        &self.vectors
    }

    /// Projector onto the spanned plane (the point of G(4;2)).
    pub fn projector(&self) -> ComplexMatrix {
        projector_of(&self.vectors)
    }
}

fn check_fraction(t_fraction: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t_fraction) {
        Ok(())
    } else {
        Err(Error::InvalidArgument("t_fraction must lie in [0, 1]"))
    }
}

/// Frame along geodesic `γ_q^{(leg)}` at fraction `t_fraction` of the pulse.
///
/// Leg 1 rotates `M_q` toward `M_{1−q}` in the `(l=1, q)` frame of pulse 1;
/// leg 2 brings `M_{1−q}` back in the `(l=2, 1−q)` frame of pulse 2 with
/// `α̃ = −α₂`.
pub fn geodesic_frame(spec: &SliceSpec, leg: usize, q: usize, t_fraction: f64) -> Result<Frame2> {
    check_fraction(t_fraction)?;
    if q > 1 {
        return Err(Error::InvalidArgument("subspace index must be 0 or 1"));
    }
    if leg != 1 && leg != 2 {
        return Err(Error::InvalidArgument("leg must be 1 or 2"));
    }
    let svd = spec.svd(leg);
    let (start, angle) = if leg == 1 {
        (q, t_fraction * spec.pulse(1).area)
    } else {
        (1 - q, -t_fraction * spec.pulse(2).area)
    };
    let e = lambda_basis(start, &svd.u, &svd.v, leg);
    let (s0, c0) = (0.5 * angle * svd.s[0]).sin_cos();
    let (s1, c1) = (0.5 * angle * svd.s[1]).sin_cos();
    Frame2::new([combine(c0, &e[0], s0, &e[2]), combine(c1, &e[1], s1, &e[3])])
}

/// Projector of `M_q` carried by the actual evolution to the same instant
/// as [`geodesic_frame`].
pub fn evolved_projector(spec: &SliceSpec, leg: usize, q: usize, t_fraction: f64) -> Result<ComplexMatrix> {
    check_fraction(t_fraction)?;
    let u = match leg {
        1 => closed_form_from_svd(spec.svd(1), t_fraction * spec.pulse(1).area),
        2 => {
            let first = closed_form_from_svd(spec.svd(1), spec.pulse(1).area);
            &closed_form_from_svd(spec.svd(2), t_fraction * spec.pulse(2).area) * &first
        }
        _ => return Err(Error::InvalidArgument("leg must be 1 or 2")),
    };
    if q > 1 {
        return Err(Error::InvalidArgument("subspace index must be 0 or 1"));
    }
    Ok(&(&u * &subspace_projector(q)) * &u.adjoint())
}

/// The rotating frame `μ₁(t), μ₂(t)` of `M₀` under one pulse.
pub fn rotating_frame(pulse: &PulseSpec, t_fraction: f64) -> Result<Frame2> {
    check_fraction(t_fraction)?;
    let svd = pulse.svd()?;
    let e = lambda_basis(0, &svd.u, &svd.v, 2);
    // Λ(0)|0100⟩ = e₃^{(2,0)}, so μ_k = cos·e_k − sin·e_{k+2}.
    let angle = t_fraction * pulse.area;
    let (s0, c0) = (0.5 * angle * svd.s[0]).sin_cos();
    let (s1, c1) = (0.5 * angle * svd.s[1]).sin_cos();
    Frame2::new([combine(c0, &e[0], -s0, &e[2]), combine(c1, &e[1], -s1, &e[3])])
}

/// `P(t) = |μ₁(t)⟩⟨μ₁(t)| + |μ₂(t)⟩⟨μ₂(t)|`.
pub fn rotating_plane_projector(pulse: &PulseSpec, t_fraction: f64) -> Result<ComplexMatrix> {
    Ok(rotating_frame(pulse, t_fraction)?.projector())
}

/// Frames of the fixed planes `M₊` and `M₋`: `ψ± = Λ(0)(|1000⟩ ± i|0100⟩)/√2`
/// and `ψ±^⊥ = Λ(0)(|0010⟩ ± i|0001⟩)/√2`.
pub fn pole_frames(pulse: &PulseSpec) -> Result<[Frame2; 2]> {
    let svd = pulse.svd()?;
    let lambda = lambda_operator(0, &svd.u, &svd.v);
    let col = |j: usize| -> State4 { core::array::from_fn(|r| lambda[(r, j)]) };
    let frame = |sign: f64| -> Result<Frame2> {
        let i_sign = c(0.0, sign);
        let mix = |a: State4, b: State4| -> State4 { core::array::from_fn(|r| (a[r] + i_sign * b[r]) * FRAC_1_SQRT_2) };
        Frame2::new([mix(col(0), col(2)), mix(col(1), col(3))])
    };
    Ok([frame(1.0)?, frame(-1.0)?])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnbiasednessSample {
    pub t_fraction: f64,
    /// `Tr[P₊ P(t)]`
    pub plus: f64,
    /// `Tr[P₋ P(t)]`
    pub minus: f64,
}

/// Evenly spaced fractions `0, 1/(n−1), …, 1`; a single sample is `t = 0`.
pub fn sample_fractions(samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => alloc::vec![0.0],
        n => (0..n).map(|k| k as f64 / (n - 1) as f64).collect(),
    }
}

/// `Tr[P± P(t)]` at one fraction of the pulse, with `P(t)` from the
/// evolution operator.
pub fn unbiasedness_at(pulse: &PulseSpec, t_fraction: f64) -> Result<UnbiasednessSample> {
    check_fraction(t_fraction)?;
    let svd = pulse.svd()?;
    let [plus, minus] = pole_frames(pulse)?;
    let u = closed_form_from_svd(&svd, t_fraction * pulse.area);
    let p_t = &(&u * &subspace_projector(0)) * &u.adjoint();
    Ok(UnbiasednessSample {
        t_fraction,
        plus: (&plus.projector() * &p_t).trace().re,
        minus: (&minus.projector() * &p_t).trace().re,
    })
}

/// [`unbiasedness_at`] on `samples` evenly spaced fractions.
pub fn mutual_unbiasedness(pulse: &PulseSpec, samples: usize) -> Result<Vec<UnbiasednessSample>> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample"));
    }
    sample_fractions(samples)
        .into_iter()
        .map(|t| unbiasedness_at(pulse, t))
        .collect()
}

/// `|⟨ψ_i|μ_j(t)⟩|²` for the `+` and `−` pole frames, indexed `[sign][i][j]`.
pub fn frame_overlaps(pulse: &PulseSpec, t_fraction: f64) -> Result<[[[f64; 2]; 2]; 2]> {
    let mu = rotating_frame(pulse, t_fraction)?;
    let poles = pole_frames(pulse)?;
    Ok(core::array::from_fn(|s| {
        core::array::from_fn(|i| core::array::from_fn(|j| inner(&poles[s].vectors()[i], &mu.vectors()[j]).norm_sqr()))
    }))
}
