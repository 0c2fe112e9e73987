//! Pulse evolution in the effective (basis `B`) and full 16-dim spaces.
//!
//! A pulse is a coupling set switched on by a scalar envelope; only the
//! signed area matters. A negative area is the reversed envelope `−f(t−τ)`.
//! Gaps between pulses have the Hamiltonian fully off and evolve trivially.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::chain::{build_full_hamiltonian, coupling_matrix, effective_hamiltonian, CouplingSet};
use crate::envelope::Envelope;
use crate::error::{Error, Result};
use crate::matrix::{c, diag_real, eigh, exp_from_eigen, svd2, ComplexMatrix, SvdTriple};

/// Default slice count for the sliced-product oracle.
pub const DEFAULT_SLICES: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// The 4-dim single-excitation space in the basis `B`.
    Effective4,
    /// The full 16-dim four-qubit space.
    Full16,
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Space::Effective4 => 4,
            Space::Full16 => 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PulseSpec {
    pub couplings: CouplingSet,
    /// Signed pulse area.
    pub area: f64,
    pub label: String,
}

impl PulseSpec {
    pub fn new(couplings: CouplingSet, area: f64, label: impl Into<String>) -> Result<Self> {
        if !area.is_finite() {
            return Err(Error::InvalidArgument("pulse area must be finite"));
        }
        Ok(Self {
            couplings,
            area,
            label: label.into(),
        })
    }

    pub fn coupling_matrix(&self) -> ComplexMatrix {
        coupling_matrix(&self.couplings)
    }

    pub fn svd(&self) -> Result<SvdTriple> {
        svd2(&self.coupling_matrix())
    }

    /// Same couplings, negated area: undoes this pulse.
    pub fn reversed(&self) -> Self {
        Self {
            couplings: self.couplings,
            area: -self.area,
            label: self.label.clone(),
        }
    }

    /// Closed-form effective-space evolution of the whole pulse.
    pub fn evolution(&self) -> Result<ComplexMatrix> {
        closed_form_evolution(&self.coupling_matrix(), self.area)
    }
}

/// Ordered, nonempty pulse list.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pulses: Vec<PulseSpec>,
}

impl Schedule {
    pub fn new(pulses: Vec<PulseSpec>) -> Result<Self> {
        if pulses.is_empty() {
            return Err(Error::EmptySchedule);
        }
        Ok(Self { pulses })
    }

    pub fn pulses(&self) -> &[PulseSpec] {
        &self.pulses
    }
}

/// Closed-form block evolution for coupling matrix `t` and signed area α:
///
/// ```text
/// [[ U cos(αS/2) U†,   −i U sin(αS/2) V† ],
///  [ −i V sin(αS/2) U†,   V cos(αS/2) V† ]]
/// ```
pub fn closed_form_evolution(t: &ComplexMatrix, area: f64) -> Result<ComplexMatrix> {
    Ok(closed_form_from_svd(&svd2(t)?, area))
}

/// [`closed_form_evolution`] for an already decomposed coupling matrix.
pub fn closed_form_from_svd(svd: &SvdTriple, area: f64) -> ComplexMatrix {
    let (s0, c0) = (0.5 * area * svd.s[0]).sin_cos();
    let (s1, c1) = (0.5 * area * svd.s[1]).sin_cos();
    let cos_d = diag_real([c0, c1]);
    let sin_d = diag_real([s0, s1]);
    let (u, v) = (&svd.u, &svd.v);
    let (ud, vd) = (u.adjoint(), v.adjoint());
    let mi = c(0.0, -1.0);
    let top_left = &(u * &cos_d) * &ud;
    let top_right = (&(u * &sin_d) * &vd).scale(mi);
    let bottom_left = (&(v * &sin_d) * &ud).scale(mi);
    let bottom_right = &(v * &cos_d) * &vd;
    ComplexMatrix::from_blocks(&top_left, &top_right, &bottom_left, &bottom_right)
}

/// Static pulse Hamiltonian (without envelope) in the requested space.
pub fn hamiltonian(cs: &CouplingSet, space: Space) -> ComplexMatrix {
    match space {
        Space::Effective4 => effective_hamiltonian(cs),
        Space::Full16 => build_full_hamiltonian(cs),
    }
}

/// `Π_k e^{-i(α/N)H}` over `N` equal slices of a rectangular envelope.
///
/// The Hamiltonian only changes by a scalar across the pulse, so every slice
/// is the same matrix; the product is accumulated by repeated squaring.
pub fn sliced_evolution(cs: &CouplingSet, area: f64, slices: u64, space: Space) -> Result<ComplexMatrix> {
    if slices == 0 {
        return Err(Error::InvalidArgument("slice count must be positive"));
    }
    let eig = eigh(&hamiltonian(cs, space))?;
    let step = exp_from_eigen(&eig, area / slices as f64);
    Ok(step.pow(slices))
}

/// Slice-by-slice product for an arbitrary envelope profile.
pub fn sliced_evolution_with_envelope(
    cs: &CouplingSet,
    area: f64,
    envelope: Envelope,
    slices: usize,
    space: Space,
) -> Result<ComplexMatrix> {
    let eig = eigh(&hamiltonian(cs, space))?;
    envelope
        .slice_areas(area, slices)?
        .into_iter()
        .try_fold(ComplexMatrix::identity(space.dim()), |acc, d_area| {
            Ok(&exp_from_eigen(&eig, d_area) * &acc)
        })
}

/// Evolution of one pulse in the requested space. The coupling matrix must
/// be nonsingular in either space.
pub fn pulse_evolution(pulse: &PulseSpec, space: Space) -> Result<ComplexMatrix> {
    let svd = pulse.svd()?;
    match space {
        Space::Effective4 => Ok(closed_form_from_svd(&svd, pulse.area)),
        Space::Full16 => {
            let eig = eigh(&build_full_hamiltonian(&pulse.couplings))?;
            Ok(exp_from_eigen(&eig, pulse.area))
        }
    }
}

/// Product of the pulse evolutions, later pulses on the left.
pub fn compose_schedule(schedule: &Schedule, space: Space) -> Result<ComplexMatrix> {
    schedule
        .pulses
        .iter()
        .try_fold(ComplexMatrix::identity(space.dim()), |acc, pulse| {
            Ok(&pulse_evolution(pulse, space)? * &acc)
        })
}
