use core::fmt;

use crate::measurement::MeasurementFit;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Smallest singular value of a coupling matrix below the relative threshold.
    SingularCoupling {
        ratio: f64,
    },
    NotUnitary {
        deviation: f64,
    },
    NotHermitian {
        deviation: f64,
    },
    UnsupportedDimension(usize),
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// An operator maps the single-excitation subspace outside itself.
    LeakageDetected {
        leakage: f64,
    },
    /// No `±Z^p` branch matches `sin(αS/2)` (or `cos(αS/2) ≠ 0`).
    ConditionUnsatisfiable {
        residual: f64,
    },
    /// The composed slice evolution has nonzero off-diagonal blocks.
    NotBlockDiagonal {
        off_block: f64,
    },
    /// Evolved-operator blocks disagree with the algebraic holonomy product.
    ProductMismatch {
        deviation: f64,
    },
    EmptySchedule,
    InvalidArgument(&'static str),
    /// Optimizer ran out of evaluations; carries the best fit found.
    BudgetExhausted(MeasurementFit),
}

impl Error {
    /// Errors that come from the numerical conditions of the model rather
    /// than from malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularCoupling { .. }
                | Error::ConditionUnsatisfiable { .. }
                | Error::BudgetExhausted(_)
                | Error::NotBlockDiagonal { .. }
                | Error::ProductMismatch { .. }
                | Error::LeakageDetected { .. }
        )
    }

    /// Stable machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SingularCoupling { .. } => "SingularCoupling",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::LeakageDetected { .. } => "LeakageDetected",
            Error::ConditionUnsatisfiable { .. } => "ConditionUnsatisfiable",
            Error::NotBlockDiagonal { .. } => "NotBlockDiagonal",
            Error::ProductMismatch { .. } => "ProductMismatch",
            Error::EmptySchedule => "EmptySchedule",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::BudgetExhausted(_) => "BudgetExhausted",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularCoupling { ratio } => {
                write!(f, "coupling matrix is singular (s2/s1 = {ratio:e})")
            }
            Error::NotUnitary { deviation } => {
                write!(f, "matrix is not unitary (deviation {deviation:e})")
            }
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not hermitian (deviation {deviation:e})")
            }
            Error::UnsupportedDimension(d) => write!(f, "unsupported matrix dimension {d}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            Error::LeakageDetected { leakage } => {
                write!(f, "operator leaks out of the single-excitation subspace ({leakage:e})")
            }
            Error::ConditionUnsatisfiable { residual } => {
                write!(f, "slice conditions cannot be met (residual {residual:e})")
            }
            Error::NotBlockDiagonal { off_block } => {
                write!(f, "composed evolution is not block diagonal (off-block {off_block:e})")
            }
            Error::ProductMismatch { deviation } => {
                write!(f, "holonomy blocks disagree with the algebraic product ({deviation:e})")
            }
            Error::EmptySchedule => f.write_str("schedule has no pulses"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::BudgetExhausted(fit) => write!(
                f,
                "evaluation budget exhausted after {} evaluations (best p_min = {})",
                fit.evaluations, fit.p_min
            ),
        }
    }
}

impl core::error::Error for Error {}
