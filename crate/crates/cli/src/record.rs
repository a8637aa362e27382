use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "spinhodge/1";

/// One JSON document per run. Every number that is not a count, an
/// exponent or a marking index is an exact `p/q` string.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResultRecord {
    pub schema: String,
    pub engine: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub sectors: Vec<SectorRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache: Option<CacheRecord>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
}

impl ResultRecord {
    pub fn new(command: &str) -> Self {
        ResultRecord {
            schema: SCHEMA.to_string(),
            engine: format!("spinhodge {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            problem: None,
            calibration: None,
            sectors: Vec::new(),
            cache: None,
            status: "ok".to_string(),
            error: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ErrorRecord {
    pub kind: String,
    pub exit_code: i32,
    pub message: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CalibrationRecord {
    pub fingerprint: String,
    pub boundary_scale: String,
    pub excess: String,
    pub orientation: String,
    pub candidates_tried: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub checks: Vec<CheckRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SectorRecord {
    pub shape: String,
    pub weights: Vec<u64>,
    pub degree: u64,
    pub genus: u32,
    pub monodromies: Vec<u64>,
    pub narrow: bool,
    /// "empty component" when the selection rule fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
    pub degvir: i64,
    pub p: i64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub variants: Vec<VariantRecord>,
    /// Set when `--variant both` computed both right-hand sides.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variants_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VariantRecord {
    pub variant: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub integrals: Vec<IntegralRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relations: Option<RelationsRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IntegralRecord {
    pub psi_powers: Vec<u32>,
    pub value: String,
    pub pole_order_found: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub laurent: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prelimit: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RelationsRecord {
    pub verdict: String,
    pub lowest_exponent: Option<i64>,
    pub monomials: usize,
    pub certificates: Vec<CertificateRecord>,
    pub grading_checks: usize,
    pub grading_violations: Vec<ResidueRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateRecord {
    pub m: i64,
    pub verdict: String,
    pub completeness: String,
    /// Nonzero pairings only; empty on PASS.
    pub residues: Vec<ResidueRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ResidueRecord {
    pub psi_powers: Vec<u32>,
    pub m: i64,
    pub coefficient: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CacheRecord {
    pub action: String,
    pub path: String,
    pub file_entries: usize,
}

/// Flat row of the `--csv` export.
#[derive(Clone, Debug, Serialize)]
pub struct CsvRow {
    pub shape: String,
    pub genus: u32,
    pub monodromies: String,
    pub variant: String,
    pub psi_powers: String,
    pub value: String,
    pub oracle: String,
    pub verdict: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_json() {
        let mut rec = ResultRecord::new("integral");
        rec.sectors.push(SectorRecord {
            shape: "fermat(3)".into(),
            weights: vec![1],
            degree: 3,
            genus: 0,
            monodromies: vec![2, 2, 2, 2],
            narrow: true,
            flag: None,
            degvir: 1,
            p: 0,
            variants: vec![VariantRecord {
                variant: "twisted".into(),
                integrals: vec![IntegralRecord {
                    psi_powers: vec![0, 0, 0, 0],
                    value: "1/3".into(),
                    pole_order_found: 0,
                    oracle: None,
                    agrees: None,
                    laurent: None,
                    prelimit: None,
                }],
                relations: None,
            }],
            variants_agree: None,
            skipped: None,
            error: None,
        });
        let text = serde_json::to_string_pretty(&rec).unwrap();
        let back: ResultRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
    }
}
