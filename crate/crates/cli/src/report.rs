use cf_forge_core::BigFloat;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    ProvedSymbolic,
    VerifiedNumeric,
    Mismatch,
    Unsupported,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::ProvedSymbolic => "proved_symbolic",
            Status::VerifiedNumeric => "verified_numeric",
            Status::Mismatch => "mismatch",
            Status::Unsupported => "unsupported",
            Status::Error => "error",
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Status::Mismatch | Status::Error)
    }
}

/// Wall-clock milliseconds; not covered by the determinism guarantee.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub symbolic_ms: f64,
    pub series_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub id: String,
    pub status: Status,
    pub series_value: Option<String>,
    pub cf_value: Option<String>,
    pub closed_form_given: Option<String>,
    pub closed_form_derived: Option<String>,
    pub abs_err: Option<String>,
    pub n_terms: Option<u64>,
    pub precision_bits: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl Report {
    pub fn error(id: &str, precision_bits: u32, message: String) -> Self {
        Report {
            id: id.to_string(),
            status: Status::Error,
            series_value: None,
            cf_value: None,
            closed_form_given: None,
            closed_form_derived: None,
            abs_err: None,
            n_terms: None,
            precision_bits,
            message: Some(message),
            timings: None,
        }
    }

    /// `abs_err` parsed back to a float, for tests and summaries.
    pub fn abs_err_f64(&self) -> Option<f64> {
        self.abs_err.as_deref().and_then(|s| s.parse().ok())
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// `d.ddde-k` with `digits` significant digits.
pub fn scientific(x: &BigFloat, digits: usize) -> String {
    x.to_scientific(digits)
}
