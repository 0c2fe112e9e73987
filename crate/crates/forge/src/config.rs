//! Experiment configuration files.
//!
//! Parsing happens in two passes: the envelope (`schema_version`, `mode`,
//! `seed`, `output`) first, then `parameters` against the record for the
//! chosen mode. Unknown fields are rejected at both levels.

use std::path::PathBuf;

use holonomy_core::chain::CouplingSet;
use holonomy_core::envelope::Envelope;
use holonomy_core::evolution::PulseSpec;
use holonomy_core::holonomy::{isoclinic_slice, SliceSpec};
use holonomy_core::matrix::{ComplexMatrix, C64};
use holonomy_core::measurement::{MeasurementConfig, ProbeSet};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Abelian,
    Holonomy,
    Geometry,
    Measure,
    Sweep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

/// The file as written, echoed back into the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    pub parameters: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::validation(format!("config: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::validation(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn parameters<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        T::deserialize(&self.parameters).map_err(|e| CliError::validation(format!("parameters: {e}")))
    }
}

fn finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::validation(format!("{name} must be finite")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexInput {
    pub re: f64,
    pub im: f64,
}

/// A 2×2 complex matrix, row-major.
pub type MatrixInput = [[ComplexInput; 2]; 2];

pub fn matrix_from_input(name: &str, m: &MatrixInput) -> Result<ComplexMatrix, CliError> {
    for z in m.iter().flatten() {
        finite(name, z.re)?;
        finite(name, z.im)?;
    }
    Ok(ComplexMatrix::from_2x2(m.map(|row| row.map(|z| C64::new(z.re, z.im)))))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum EnvelopeInput {
    #[default]
    Rectangular,
    Gaussian {
        width: f64,
    },
}

impl EnvelopeInput {
    pub fn envelope(self) -> Result<Envelope, CliError> {
        match self {
            Self::Rectangular => Ok(Envelope::Rectangular),
            Self::Gaussian { width } if width.is_finite() && width > 0.0 => Ok(Envelope::Gaussian { width }),
            Self::Gaussian { .. } => Err(CliError::validation("gaussian width must be positive")),
        }
    }
}

fn default_slices() -> usize {
    10_000
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianParams {
    pub phi1: f64,
    pub phi2: f64,
    #[serde(default = "default_slices")]
    pub slices: usize,
    #[serde(default)]
    pub envelope: EnvelopeInput,
}

impl AbelianParams {
    pub fn validate(&self) -> Result<(), CliError> {
        finite("phi1", self.phi1)?;
        finite("phi2", self.phi2)?;
        if self.slices == 0 {
            return Err(CliError::validation("slices must be positive"));
        }
        self.envelope.envelope().map(|_| ())
    }
}

/// One pulse: couplings in bond order (12, 23, 34, 41), signed area, and
/// optionally the expected `Z^p` branch.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseInput {
    pub j: [f64; 4],
    pub dz: [f64; 4],
    pub area: f64,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub p: Option<u8>,
    #[serde(default)]
    pub negated: Option<bool>,
}

impl PulseInput {
    pub fn pulse(&self, default_label: &str) -> Result<PulseSpec, CliError> {
        for (k, x) in self.j.iter().chain(&self.dz).enumerate() {
            finite(&format!("coupling {k}"), *x)?;
        }
        finite("area", self.area)?;
        if matches!(self.p, Some(p) if p > 1) {
            return Err(CliError::validation("p must be 0 or 1"));
        }
        let cs = CouplingSet::new(self.j, self.dz).map_err(CliError::from_core)?;
        let label = self.label.clone().unwrap_or_else(|| default_label.to_string());
        PulseSpec::new(cs, self.area, label).map_err(CliError::from_core)
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsoclinicInput {
    pub w1: MatrixInput,
    pub w2: MatrixInput,
}

/// Either two explicit pulses or two target leg unitaries realized by
/// isoclinic area-π pulses.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceInput {
    #[serde(default)]
    pub pulses: Option<[PulseInput; 2]>,
    #[serde(default)]
    pub isoclinic: Option<IsoclinicInput>,
}

impl SliceInput {
    pub fn spec(&self) -> Result<SliceSpec, CliError> {
        match (&self.pulses, &self.isoclinic) {
            (Some([a, b]), None) => {
                let spec = SliceSpec::new(a.pulse("pulse 1")?, b.pulse("pulse 2")?).map_err(CliError::from_core)?;
                for (leg, input) in [(1, a), (2, b)] {
                    let cond = spec.condition(leg);
                    let p_ok = input.p.is_none_or(|p| p == cond.p);
                    let n_ok = input.negated.is_none_or(|n| n == cond.negated);
                    if !(p_ok && n_ok) {
                        return Err(CliError::numerical(
                            "ConditionUnsatisfiable",
                            format!(
                                "pulse {leg} satisfies branch p = {}, negated = {}, not the declared one",
                                cond.p, cond.negated
                            ),
                            Value::Null,
                        ));
                    }
                }
                Ok(spec)
            }
            (None, Some(iso)) => {
                let w1 = matrix_from_input("w1", &iso.w1)?;
                let w2 = matrix_from_input("w2", &iso.w2)?;
                isoclinic_slice(&w1, &w2).map_err(CliError::from_core)
            }
            _ => Err(CliError::validation(
                "slice needs exactly one of `pulses` or `isoclinic`",
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolonomyParams {
    pub slice: SliceInput,
}

fn default_points() -> usize {
    32
}

fn default_samples() -> usize {
    50
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryParams {
    pub slice: SliceInput,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

impl GeometryParams {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.points < 2 || self.samples == 0 {
            return Err(CliError::validation("points must be at least 2 and samples positive"));
        }
        Ok(())
    }
}

fn default_budget() -> usize {
    5000
}

fn default_restarts() -> usize {
    8
}

fn default_target() -> f64 {
    0.999
}

/// Probe states as initial spin-flip sites; absent means the tomographic
/// set `|a⟩, |b⟩, |a⟩+|b⟩, |a⟩+i|b⟩` of the subspace.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureParams {
    pub slice: SliceInput,
    #[serde(default)]
    pub subspace: usize,
    #[serde(default)]
    pub probe_sites: Option<Vec<usize>>,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_target")]
    pub target: f64,
}

pub fn probe_set(subspace: usize, sites: Option<&[usize]>) -> Result<ProbeSet, CliError> {
    if subspace > 1 {
        return Err(CliError::validation("subspace must be 0 or 1"));
    }
    match sites {
        None => Ok(ProbeSet::tomographic(subspace)),
        Some(sites) => {
            let states = sites
                .iter()
                .map(|&s| holonomy_core::measurement::prepare_initial_state(s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(CliError::from_core)?;
            ProbeSet::new(subspace, states).map_err(CliError::from_core)
        }
    }
}

impl MeasureParams {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.budget == 0 || self.restarts == 0 {
            return Err(CliError::validation("budget and restarts must be positive"));
        }
        if !(self.target > 0.0 && self.target <= 1.0) {
            return Err(CliError::validation("target must lie in (0, 1]"));
        }
        probe_set(self.subspace, self.probe_sites.as_deref()).map(|_| ())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    AbelianPhase,
    AbelianUnbiasedness,
    MutualUnbiasedness,
    Survival,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "phi2")]
    Phi2,
    #[serde(rename = "area")]
    Area,
    #[serde(rename = "t_fraction")]
    TFraction,
    E,
    J13,
    D13,
    #[serde(rename = "b")]
    B,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Phi2 => "phi2",
            Axis::Area => "area",
            Axis::TFraction => "t_fraction",
            Axis::E => "E",
            Axis::J13 => "J13",
            Axis::D13 => "D13",
            Axis::B => "b",
        }
    }

    fn allowed_for(self, kind: SweepKind) -> bool {
        match kind {
            SweepKind::AbelianPhase => self == Axis::Phi2,
            SweepKind::AbelianUnbiasedness => self == Axis::Area,
            SweepKind::MutualUnbiasedness => self == Axis::TFraction,
            SweepKind::Survival => matches!(self, Axis::E | Axis::J13 | Axis::D13 | Axis::B),
        }
    }
}

/// Grid `x_k = start + k·step` for all `x_k < stop`, or `points` evenly
/// spaced values on `[start, stop)`.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeInput {
    pub start: f64,
    pub stop: f64,
    #[serde(default)]
    pub step: Option<f64>,
    #[serde(default)]
    pub points: Option<usize>,
}

const MAX_GRID_POINTS: usize = 1_000_000;

impl RangeInput {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        finite("range.start", self.start)?;
        finite("range.stop", self.stop)?;
        match (self.step, self.points) {
            (Some(step), None) => {
                if !(step.is_finite() && step > 0.0) {
                    return Err(CliError::validation("range.step must be positive"));
                }
                if self.stop <= self.start {
                    return Ok(Vec::new());
                }
                let estimate = ((self.stop - self.start) / step).ceil();
                if estimate > MAX_GRID_POINTS as f64 {
                    return Err(CliError::validation("range has too many points"));
                }
                let mut n = estimate as usize;
                while n > 0 && self.start + (n - 1) as f64 * step >= self.stop {
                    n -= 1;
                }
                while self.start + n as f64 * step < self.stop {
                    n += 1;
                }
                Ok((0..n).map(|k| self.start + k as f64 * step).collect())
            }
            (None, Some(points)) => {
                if points > MAX_GRID_POINTS {
                    return Err(CliError::validation("range has too many points"));
                }
                if self.stop <= self.start {
                    return Ok(Vec::new());
                }
                let h = (self.stop - self.start) / points as f64;
                Ok((0..points).map(|k| self.start + k as f64 * h).collect())
            }
            _ => Err(CliError::validation("range needs exactly one of `step` or `points`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    pub kind: SweepKind,
    pub axis: Axis,
    pub range: RangeInput,
    #[serde(default)]
    pub base: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianPhaseBase {
    #[serde(default)]
    pub phi1: f64,
    #[serde(default = "default_slices")]
    pub slices: usize,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianUnbiasednessBase {
    #[serde(default)]
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutualUnbiasednessBase {
    pub pulse: PulseInput,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementInput {
    #[serde(default, rename = "E")]
    pub e: f64,
    #[serde(default, rename = "J13")]
    pub j13: f64,
    #[serde(default, rename = "D13")]
    pub d13: f64,
    #[serde(default, rename = "J24")]
    pub j24: f64,
    #[serde(default, rename = "D24")]
    pub d24: f64,
    #[serde(default = "unit_b")]
    pub b: f64,
}

fn unit_b() -> f64 {
    1.0
}

impl MeasurementInput {
    pub fn config(&self) -> Result<MeasurementConfig, CliError> {
        let cfg = MeasurementConfig {
            e: self.e,
            j13: self.j13,
            d13: self.d13,
            j24: self.j24,
            d24: self.d24,
            b: self.b,
        };
        cfg.validate().map_err(CliError::from_core)?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurvivalBase {
    pub slice: SliceInput,
    #[serde(default)]
    pub measurement: MeasurementInput,
    #[serde(default)]
    pub subspace: usize,
    #[serde(default)]
    pub probe_sites: Option<Vec<usize>>,
}

impl SweepParams {
    pub fn validate(&self) -> Result<Vec<f64>, CliError> {
        if !self.axis.allowed_for(self.kind) {
            return Err(CliError::validation(format!(
                "axis `{}` is not available for this sweep kind",
                self.axis.name()
            )));
        }
        let grid = self.range.grid()?;
        if self.axis == Axis::TFraction && grid.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(CliError::validation("t_fraction must lie in [0, 1]"));
        }
        Ok(grid)
    }

    pub fn base<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        let value = self.base.clone().unwrap_or(Value::Object(Default::default()));
        T::deserialize(value).map_err(|e| CliError::validation(format!("parameters.base: {e}")))
    }
}
