//! Serialized certificate schema. Reports are plain JSON, reproducible from
//! (config, seed): the only run-dependent field is the unix timestamp, which
//! is excluded from the report digest.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Serde adapter for values that may be ±∞ (JSON has no literal for them;
/// they travel as the strings "inf" / "-inf").
pub mod ext_real {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v == f64::INFINITY {
            s.serialize_str("inf")
        } else if *v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_str("nan")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(D::Error::custom(format!("not an extended real: {other}"))),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketReport {
    #[serde(with = "ext_real")]
    pub lower: f64,
    #[serde(with = "ext_real")]
    pub upper: f64,
    #[serde(with = "ext_real")]
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CBracketReport {
    pub lower: f64,
    #[serde(with = "ext_real")]
    pub upper: f64,
    pub upper_provenance: String,
    pub witness_length: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthProductReport {
    /// ω₀-lower × c-upper: the corner that can only fail if the theorem
    /// (or the implementation) is wrong.
    #[serde(with = "ext_real")]
    pub product_favorable: f64,
    /// -1 - product_favorable, nonnegative on a sound run.
    #[serde(with = "ext_real")]
    pub margin_favorable: f64,
    /// ω₀-upper × c-lower: indeterminate by bracket slack, reported as-is.
    #[serde(with = "ext_real")]
    pub product_indeterminate: f64,
    /// Exact-product check for scalar families (1e-12 scale), if applicable.
    #[serde(with = "ext_real")]
    pub product_exact: f64,
    pub scalar_exact: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiskReport {
    #[serde(with = "ext_real")]
    pub margin: f64,
    pub tol_bracket: f64,
    pub r_upper: f64,
    #[serde(with = "ext_real")]
    pub disk_edge_lower: f64,
    pub verdict: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolventReport {
    pub grid_points: usize,
    pub max_on_circle: f64,
    pub radial: Vec<(f64, f64)>,
    #[serde(with = "ext_real")]
    pub c_upper: f64,
    pub verdict: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatkoRowReport {
    pub j: u64,
    pub basis: usize,
    pub p: f64,
    pub partial_sum: f64,
    pub tail_bound: f64,
    /// c_ν^p from the same exponential bound as the tail.
    pub chain_bound: f64,
    /// c_upper^p from the reported per-p convolution bound.
    pub c_upper_pow: f64,
    pub bounded: bool,
    pub diverged: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerSumReport {
    pub p: f64,
    pub u1_lower: f64,
    pub u1_upper: f64,
    pub conv_lower: f64,
    /// ln(r_lb)·u1_upper, must stay ≤ -1.
    #[serde(with = "ext_real")]
    pub product: f64,
    #[serde(with = "ext_real")]
    pub product_exact: f64,
    pub exact_case: bool,
    pub verdict: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateReport {
    pub schema_version: u32,
    pub family_digest: String,
    pub space: String,
    pub seed: u64,
    pub tolerance: f64,
    pub power_iteration_tolerance: f64,
    pub power_iteration_cap: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
    pub omega0: BracketReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_bracket: Option<CBracketReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth_product: Option<GrowthProductReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disk: Option<DiskReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolvent: Option<ResolventReport>,
    pub datko: Vec<DatkoRowReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_sums: Option<Vec<PowerSumReport>>,
    pub verdict: String,
    pub notes: Vec<String>,
}

impl CertificateReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> crate::error::Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| crate::error::CoreError::Config(format!("report parse: {e}")))
    }

    /// SHA-256 over the serialized report with the timestamp removed, so
    /// identical (config, seed) runs produce identical digests.
    pub fn digest(&self) -> String {
        let mut clone = self.clone();
        clone.timestamp_unix = None;
        hex::encode(Sha256::digest(clone.to_json().as_bytes()))
    }
}
