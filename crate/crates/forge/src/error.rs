use std::fmt;

use holonomy_core::Error as CoreError;
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Failure of a run, printed as one JSON line on stderr.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            kind: "ValidationError".into(),
            message: message.into(),
            exit_code: EXIT_VALIDATION,
            detail: Value::Null,
        }
    }

    pub fn numerical(kind: &str, message: impl Into<String>, detail: Value) -> Self {
        Self {
            kind: kind.into(),
            message: message.into(),
            exit_code: EXIT_NUMERICAL,
            detail,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            kind: "IoError".into(),
            message: message.into(),
            exit_code: EXIT_IO,
            detail: Value::Null,
        }
    }

    pub fn from_core(e: CoreError) -> Self {
        let detail = match &e {
            CoreError::SingularCoupling { ratio } => json!({ "ratio": ratio }),
            CoreError::ConditionUnsatisfiable { residual } => json!({ "residual": residual }),
            CoreError::NotBlockDiagonal { off_block } => json!({ "off_block": off_block }),
            CoreError::ProductMismatch { deviation } => json!({ "deviation": deviation }),
            CoreError::LeakageDetected { leakage } => json!({ "leakage": leakage }),
            CoreError::NotUnitary { deviation } | CoreError::NotHermitian { deviation } => {
                json!({ "deviation": deviation })
            }
            CoreError::BudgetExhausted(fit) => json!({
                "p_min": fit.p_min,
                "evaluations": fit.evaluations,
                "config": crate::report::MeasurementReport::from(&fit.config),
            }),
            _ => Value::Null,
        };
        Self {
            kind: e.kind().into(),
            message: e.to_string(),
            exit_code: if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_VALIDATION
            },
            detail,
        }
    }

    /// Single-line JSON record `{"error": {...}}`.
    pub fn record(&self) -> String {
        json!({ "error": self }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_class() {
        assert_eq!(
            CliError::from_core(CoreError::SingularCoupling { ratio: 0.0 }).exit_code,
            EXIT_NUMERICAL
        );
        assert_eq!(
            CliError::from_core(CoreError::ConditionUnsatisfiable { residual: 1.0 }).exit_code,
            EXIT_NUMERICAL
        );
        assert_eq!(
            CliError::from_core(CoreError::InvalidArgument("x")).exit_code,
            EXIT_VALIDATION
        );
        assert_eq!(
            CliError::from_core(CoreError::NotUnitary { deviation: 1.0 }).exit_code,
            EXIT_VALIDATION
        );
    }

    #[test]
    fn record_is_one_json_line() {
        let r = CliError::validation("bad").record();
        assert!(!r.contains('\n'));
        let v: Value = serde_json::from_str(&r).unwrap();
        assert_eq!(v["error"]["exit_code"], 2);
        assert_eq!(v["error"]["kind"], "ValidationError");
    }
}
