//! Single-qubit orange slice: two area-π pulses about different axes in
//! the xy-plane, the second with reversed envelope, give a pure
//! geometric phase shift gate.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

#[allow(unused_imports)]
use num_traits::{Euclid, Float};

use crate::envelope::Envelope;
use crate::error::{Error, Result};
use crate::matrix::{c, pauli_x, pauli_y, ComplexMatrix, C64};

/// Default number of quadrature slices per pulse.
pub const DEFAULT_QUADRATURE_SLICES: usize = 10_000;

/// A pulse about the axis `(cos φ, sin φ, 0)` with signed area α.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbelianPulse {
    phi: f64,
    area: f64,
}

impl AbelianPulse {
    pub fn new(phi: f64, area: f64) -> Self {
        Self {
            phi: Euclid::rem_euclid(&phi, &TAU),
            area,
        }
    }

    /// Azimuth reduced to `[0, 2π)`.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn area(&self) -> f64 {
        self.area
    }
}

/// Pure qubit state in the `{|0⟩, |1⟩}` basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState(pub [C64; 2]);

impl QubitState {
    pub fn new(amplitudes: [C64; 2]) -> Result<Self> {
        let norm = (amplitudes[0].norm_sqr() + amplitudes[1].norm_sqr()).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("qubit state must have unit norm"));
        }
        Ok(Self(amplitudes))
    }

    /// Computational basis state `|n⟩`, `n ∈ {0, 1}`.
    pub fn basis(n: usize) -> Self {
        let mut a = [c(0.0, 0.0); 2];
        a[n] = c(1.0, 0.0);
        Self(a)
    }

    pub fn overlap(&self, other: &Self) -> C64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    fn apply(&self, m: &ComplexMatrix) -> Self {
        let v = m.mul_vec(&self.0);
        Self([v[0], v[1]])
    }
}

/// `(amplitude/2)(cos φ σ_x + sin φ σ_y)`.
pub fn abelian_hamiltonian(phi: f64, amplitude: f64) -> ComplexMatrix {
    let (s, co) = phi.sin_cos();
    (&pauli_x().scale_re(co) + &pauli_y().scale_re(s)).scale_re(0.5 * amplitude)
}

/// Closed-form evolution operator of one pulse.
pub fn abelian_evolution(pulse: &AbelianPulse) -> ComplexMatrix {
    let (s, co) = (0.5 * pulse.area).sin_cos();
    let e = C64::from_polar(1.0, pulse.phi);
    let mi = c(0.0, -1.0);
    ComplexMatrix::from_2x2([[c(co, 0.0), mi * e.conj() * s], [mi * e * s, c(co, 0.0)]])
}

/// The two pulses of the orange slice: area π about φ₁, then area −π about φ₂.
pub fn orange_slice_sequence(phi1: f64, phi2: f64) -> [AbelianPulse; 2] {
    [AbelianPulse::new(phi1, PI), AbelianPulse::new(phi2, -PI)]
}

/// Composed orange-slice gate `U(φ₂, −π)·U(φ₁, π) = diag(e^{-iΩ/2}, e^{iΩ/2})`,
/// `Ω = 2(φ₂ − φ₁)`.
pub fn abelian_orange_slice(phi1: f64, phi2: f64) -> ComplexMatrix {
    compose(&orange_slice_sequence(phi1, phi2))
}

/// Right-to-left product of the pulses' evolutions in time order.
pub fn compose(pulses: &[AbelianPulse]) -> ComplexMatrix {
    pulses
        .iter()
        .fold(ComplexMatrix::identity(2), |acc, p| &abelian_evolution(p) * &acc)
}

/// Solid angle enclosed by the slice.
pub fn solid_angle(phi1: f64, phi2: f64) -> f64 {
    2.0 * (phi2 - phi1)
}

/// Dynamical phase `−∫⟨ψ(t)|H(t)|ψ(t)⟩dt` accumulated by `|n⟩` along the
/// sequence, with rectangular envelopes and the default slice count.
pub fn dynamical_phase(pulses: &[AbelianPulse], n: usize) -> Result<f64> {
    dynamical_phase_with(pulses, n, Envelope::Rectangular, DEFAULT_QUADRATURE_SLICES)
}

/// Midpoint quadrature of the dynamical phase along the evolving state.
/// Each slice carries area `dα_k` taken from the envelope profile; the
/// state is propagated exactly across every slice.
pub fn dynamical_phase_with(pulses: &[AbelianPulse], n: usize, envelope: Envelope, slices: usize) -> Result<f64> {
    if n > 1 {
        return Err(Error::InvalidArgument("basis index must be 0 or 1"));
    }
    if slices == 0 {
        return Err(Error::InvalidArgument("slice count must be positive"));
    }
    let mut state = QubitState::basis(n);
    let mut integral = 0.0;
    for pulse in pulses {
        let generator = abelian_hamiltonian(pulse.phi, 1.0);
        for d_area in envelope.slice_areas(pulse.area, slices)? {
            let mid = state.apply(&abelian_evolution(&AbelianPulse::new(pulse.phi, 0.5 * d_area)));
            let expectation = mid.overlap(&mid.apply(&generator)).re;
            integral += expectation * d_area;
            state = state.apply(&abelian_evolution(&AbelianPulse::new(pulse.phi, d_area)));
        }
    }
    Ok(-integral)
}

/// Evolution of one pulse integrated slice by slice under `envelope`.
pub fn sliced_abelian_evolution(pulse: &AbelianPulse, envelope: Envelope, slices: usize) -> Result<ComplexMatrix> {
    if slices == 0 {
        return Err(Error::InvalidArgument("slice count must be positive"));
    }
    let h = abelian_hamiltonian(pulse.phi, 1.0);
    envelope
        .slice_areas(pulse.area, slices)?
        .into_iter()
        .try_fold(ComplexMatrix::identity(2), |acc, d_area| {
            Ok(&crate::matrix::exp_hermitian(&h, d_area)? * &acc)
        })
}

/// `|±(φ)⟩ = (|0⟩ ± e^{iφ}|1⟩)/√2`.
pub fn pole_states(phi: f64) -> [QubitState; 2] {
    let e = C64::from_polar(FRAC_1_SQRT_2, phi);
    let h = c(FRAC_1_SQRT_2, 0.0);
    [QubitState([h, e]), QubitState([h, -e])]
}

/// `[|⟨+(φ)|ψ₀⟩|, |⟨−(φ)|ψ₀⟩|]` for `ψ₀ = U(φ, α)|0⟩` at each area α.
pub fn unbiasedness_check(phi: f64, alphas: &[f64]) -> Vec<[f64; 2]> {
    let [plus, minus] = pole_states(phi);
    alphas
        .iter()
        .map(|&alpha| {
            let psi = QubitState::basis(0).apply(&abelian_evolution(&AbelianPulse::new(phi, alpha)));
            [plus.overlap(&psi).norm(), minus.overlap(&psi).norm()]
        })
        .collect()
}
