//! Geometric phases and non-Abelian holonomies of orange-slice loops on a
//! single-excitation four-qubit chain with XY and Dzyaloshinskii–Moriya
//! couplings.
//!
//! The crate is `no_std` with `alloc`. Matrices are small dense complex
//! matrices of dimension 2, 4 or 16.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod abelian;
pub mod chain;
pub mod envelope;
pub mod error;
pub mod evolution;
pub mod holonomy;
pub mod matrix;
pub mod measurement;
pub mod optimize;

#[cfg(test)]
mod testutil;

pub use abelian::{AbelianPulse, QubitState};
pub use chain::CouplingSet;
pub use envelope::Envelope;
pub use error::{Error, Result};
pub use evolution::{PulseSpec, Schedule, Space};
pub use holonomy::{HolonomyPair, SliceSpec, State4};
pub use matrix::{ComplexMatrix, SvdTriple, U2Decomposition, C64};
pub use measurement::{MeasurementConfig, MeasurementFit, ProbeSet};
