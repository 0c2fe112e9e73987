//! Run reports and their serialized forms.

use holonomy_core::matrix::{ComplexMatrix, U2Decomposition, C64};
use holonomy_core::measurement::MeasurementConfig;
use serde::Serialize;

use crate::config::{ExperimentConfig, Mode, SweepKind};
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Row-major nested arrays of `{re, im}`.
pub type Matrix = Vec<Vec<Complex>>;

pub fn matrix(m: &ComplexMatrix) -> Matrix {
    m.rows().map(|row| row.iter().map(|&z| z.into()).collect()).collect()
}

/// `e^{-iχ} e^{-iφ n·σ/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    pub chi: f64,
    pub phi: f64,
    pub axis: [f64; 3],
}

impl From<&U2Decomposition> for Decomposition {
    fn from(d: &U2Decomposition) -> Self {
        Self {
            chi: d.chi,
            phi: d.phi,
            axis: d.axis,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasurementReport {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "J13")]
    pub j13: f64,
    #[serde(rename = "D13")]
    pub d13: f64,
    #[serde(rename = "J24")]
    pub j24: f64,
    #[serde(rename = "D24")]
    pub d24: f64,
    pub b: f64,
}

impl From<&MeasurementConfig> for MeasurementReport {
    fn from(c: &MeasurementConfig) -> Self {
        Self {
            e: c.e,
            j13: c.j13,
            d13: c.d13,
            j24: c.j24,
            d24: c.d24,
            b: c.b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Unitary,
    Hermitian,
}

/// A declared property of one reported matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub property: Property,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Collects matrix checks against one tolerance.
#[derive(Debug)]
pub struct Checks {
    tolerance: f64,
    items: Vec<Check>,
}

impl Checks {
    pub fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            items: Vec::new(),
        }
    }

    pub fn unitary(&mut self, name: impl Into<String>, m: &ComplexMatrix) {
        self.push(name.into(), Property::Unitary, m.unitarity_deviation());
    }

    pub fn hermitian(&mut self, name: impl Into<String>, m: &ComplexMatrix) {
        self.push(name.into(), Property::Hermitian, m.hermiticity_deviation());
    }

    fn push(&mut self, name: String, property: Property, deviation: f64) {
        self.items.push(Check {
            name,
            property,
            deviation,
            tolerance: self.tolerance,
            passed: deviation <= self.tolerance,
        });
    }

    pub fn finish(self) -> Result<Vec<Check>, CliError> {
        if let Some(bad) = self.items.iter().find(|c| !c.passed) {
            return Err(CliError::numerical(
                "CheckFailed",
                format!(
                    "{} fails its {:?} check (deviation {:e})",
                    bad.name, bad.property, bad.deviation
                ),
                serde_json::to_value(bad).unwrap_or_default(),
            ));
        }
        Ok(self.items)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbelianResult {
    pub phi1: f64,
    pub phi2: f64,
    pub gate: Matrix,
    pub solid_angle: f64,
    /// Phase acquired by `|0⟩`, wrapped to `(−π, π]`.
    pub geometric_phase: f64,
    /// Dynamical phase for `|0⟩` and `|1⟩`.
    pub dynamical_phase: [f64; 2],
    pub slices: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PulseReport {
    pub label: String,
    pub area: f64,
    pub coupling_matrix: Matrix,
    pub singular_values: [f64; 2],
    pub u: Matrix,
    pub v: Matrix,
    pub p: u8,
    pub negated: bool,
    pub condition_residual: f64,
    /// Excitation leakage of the 16-dim evolution.
    pub leakage: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolonomyResult {
    pub pulses: Vec<PulseReport>,
    pub evolution: Matrix,
    pub uc0: Matrix,
    pub uc1: Matrix,
    pub dec0: Decomposition,
    pub dec1: Decomposition,
    pub legs: [Decomposition; 2],
    pub delta_chi: f64,
    pub off_block: f64,
    pub product_deviation: f64,
    pub dynamical_block_norm: f64,
    /// Full-space evolution restricted to `B` against the closed form.
    pub full_space_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicReport {
    pub leg: usize,
    pub q: usize,
    pub points: usize,
    pub max_projector_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnbiasednessPoint {
    pub t_fraction: f64,
    pub plus: f64,
    pub minus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnbiasednessReport {
    pub leg: usize,
    pub max_deviation: f64,
    pub samples: Vec<UnbiasednessPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometryResult {
    pub geodesics: Vec<GeodesicReport>,
    pub unbiasedness: Vec<UnbiasednessReport>,
    pub dynamical_block_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub config: MeasurementReport,
    pub p_min: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub restart: usize,
    /// `|tr(W_q U(C_q))|/2`.
    pub fidelity: f64,
    pub gate: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InverseReport {
    pub config: MeasurementReport,
    pub p_min: f64,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureResult {
    pub subspace: usize,
    pub probes: usize,
    pub holonomy: Matrix,
    pub decomposition: Decomposition,
    pub fit: FitReport,
    pub closed_form: InverseReport,
    /// `|tr(W_fit† W_closed)|/2`.
    pub agreement: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub axis: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Results {
    Abelian(AbelianResult),
    Holonomy(Box<HolonomyResult>),
    Geometry(GeometryResult),
    Measure(Box<MeasureResult>),
    Sweep(SweepResult),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub mode: Mode,
    pub config: ExperimentConfig,
    pub results: Results,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}
