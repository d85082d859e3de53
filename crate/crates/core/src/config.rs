//! JSON config ingestion: the on-disk description of a family, its space,
//! truncation schedule, tolerance and seed, plus the content digest that
//! ties certificates back to their inputs.
//!
//! Complex entries are encoded as [re, im] pairs; matrices are flat
//! row-major lists of d² pairs.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::conv::Schedule;
use crate::error::{CoreError, Result};
use crate::family::{GeneratorSpec, Tail};
use crate::linalg::{C64, CMatrix};
use crate::space::SpaceSpec;

pub const SCHEMA_VERSION: u32 = 1;

pub type MatrixData = Vec<[f64; 2]>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TailConfig {
    Constant { matrix: MatrixData },
    Periodic { matrices: Vec<MatrixData> },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SpaceConfig {
    Lp { p: f64 },
    Linf,
    C0,
}

impl From<SpaceConfig> for SpaceSpec {
    fn from(c: SpaceConfig) -> Self {
        match c {
            SpaceConfig::Lp { p } => SpaceSpec::Lp(p),
            SpaceConfig::Linf => SpaceSpec::LInfty,
            SpaceConfig::C0 => SpaceSpec::C0,
        }
    }
}

impl From<SpaceSpec> for SpaceConfig {
    fn from(s: SpaceSpec) -> Self {
        match s {
            SpaceSpec::Lp(p) => SpaceConfig::Lp { p },
            SpaceSpec::LInfty => SpaceConfig::Linf,
            SpaceSpec::C0 => SpaceConfig::C0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TruncationConfig {
    Named(String),
    Schedule { schedule: Vec<usize> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigFile {
    pub schema_version: u32,
    pub dimension: usize,
    #[serde(default)]
    pub prefix: Vec<MatrixData>,
    pub tail: TailConfig,
    #[serde(default)]
    pub space: Option<SpaceConfig>,
    #[serde(default)]
    pub truncation: Option<TruncationConfig>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Fully validated analysis inputs.
#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub spec: GeneratorSpec,
    pub space: SpaceSpec,
    pub schedule: Schedule,
    pub tolerance: f64,
    pub seed: u64,
    /// SHA-256 over the canonical family encoding (schema_version,
    /// dimension, prefix, tail).
    pub family_digest: String,
}

fn matrix_from_data(dim: usize, data: &MatrixData, what: &str) -> Result<CMatrix> {
    if data.len() != dim * dim {
        return Err(CoreError::Config(format!(
            "{what}: expected {} [re, im] pairs for dimension {dim}, got {}",
            dim * dim,
            data.len()
        )));
    }
    let entries: Vec<C64> = data.iter().map(|&[re, im]| C64::new(re, im)).collect();
    CMatrix::new(dim, entries)
        .map_err(|e| CoreError::Config(format!("{what}: {e}")))
}

pub fn matrix_to_data(m: &CMatrix) -> MatrixData {
    m.entries().iter().map(|z| [z.re, z.im]).collect()
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CoreError::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    /// Canonical digest of the family portion only: space/tolerance/seed do
    /// not change which family is being certified.
    pub fn family_digest(&self) -> String {
        #[derive(Serialize)]
        struct FamilyKey<'a> {
            schema_version: u32,
            dimension: usize,
            prefix: &'a Vec<MatrixData>,
            tail: &'a TailConfig,
        }
        let key = FamilyKey {
            schema_version: self.schema_version,
            dimension: self.dimension,
            prefix: &self.prefix,
            tail: &self.tail,
        };
        let bytes = serde_json::to_vec(&key).expect("digest serialization");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn resolve(&self) -> Result<AnalysisConfig> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CoreError::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.dimension == 0 {
            return Err(CoreError::Config("dimension must be at least 1".into()));
        }
        let prefix: Vec<CMatrix> = self
            .prefix
            .iter()
            .enumerate()
            .map(|(i, m)| matrix_from_data(self.dimension, m, &format!("prefix[{i}]")))
            .collect::<Result<_>>()?;
        let tail = match &self.tail {
            TailConfig::Constant { matrix } => {
                Tail::Constant(matrix_from_data(self.dimension, matrix, "tail.matrix")?)
            }
            TailConfig::Periodic { matrices } => {
                if matrices.is_empty() {
                    return Err(CoreError::Config(
                        "tail.matrices must hold at least one matrix".into(),
                    ));
                }
                Tail::Periodic(
                    matrices
                        .iter()
                        .enumerate()
                        .map(|(i, m)| {
                            matrix_from_data(self.dimension, m, &format!("tail.matrices[{i}]"))
                        })
                        .collect::<Result<_>>()?,
                )
            }
        };
        let spec = GeneratorSpec::new(self.dimension, prefix, tail)
            .map_err(|e| CoreError::Config(e.to_string()))?;

        let space: SpaceSpec = self.space.unwrap_or(SpaceConfig::C0).into();
        space
            .validate()
            .map_err(|e| CoreError::Config(e.to_string()))?;

        let schedule = match &self.truncation {
            None => Schedule::Auto,
            Some(TruncationConfig::Named(s)) if s == "auto" => Schedule::Auto,
            Some(TruncationConfig::Named(s)) => {
                return Err(CoreError::Config(format!(
                    "truncation: expected \"auto\" or {{\"schedule\": [...]}}, got \"{s}\""
                )));
            }
            Some(TruncationConfig::Schedule { schedule }) => {
                if schedule.is_empty() || schedule.contains(&0) {
                    return Err(CoreError::Config(
                        "truncation.schedule must be a nonempty list of positive lengths".into(),
                    ));
                }
                Schedule::Explicit(schedule.clone())
            }
        };

        let tolerance = self.tolerance.unwrap_or(1e-6);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(CoreError::Config(format!(
                "tolerance must be positive and finite, got {tolerance}"
            )));
        }
        let seed = self.seed.unwrap_or(42);

        Ok(AnalysisConfig {
            spec,
            space,
            schedule,
            tolerance,
            seed,
            family_digest: self.family_digest(),
        })
    }
}

/// Parse a space override of the form "lp:2", "lp:1.5", "linf" or "c0".
pub fn parse_space_label(label: &str) -> Result<SpaceSpec> {
    if label == "linf" {
        return Ok(SpaceSpec::LInfty);
    }
    if label == "c0" {
        return Ok(SpaceSpec::C0);
    }
    if let Some(pstr) = label.strip_prefix("lp:") {
        let p: f64 = pstr
            .parse()
            .map_err(|_| CoreError::Config(format!("cannot parse p in space label '{label}'")))?;
        let space = SpaceSpec::Lp(p);
        space.validate().map_err(|e| CoreError::Config(e.to_string()))?;
        return Ok(space);
    }
    Err(CoreError::Config(format!(
        "unknown space label '{label}' (expected lp:<p>, linf or c0)"
    )))
}

/// Serialize a generator spec back into config form (fixtures, oracle mode).
pub fn config_from_spec(spec: &GeneratorSpec, space: SpaceConfig) -> ConfigFile {
    let tail = match spec.tail() {
        Tail::Constant(t) => TailConfig::Constant {
            matrix: matrix_to_data(t),
        },
        Tail::Periodic(ms) => TailConfig::Periodic {
            matrices: ms.iter().map(matrix_to_data).collect(),
        },
    };
    ConfigFile {
        schema_version: SCHEMA_VERSION,
        dimension: spec.dim(),
        prefix: spec.prefix().iter().map(matrix_to_data).collect(),
        tail,
        space: Some(space),
        truncation: None,
        tolerance: None,
        seed: None,
    }
}

/// Config for a scalar constant-γ family, used by the sweep and fixtures.
pub fn scalar_config(gamma: f64, space: SpaceConfig) -> ConfigFile {
    ConfigFile {
        schema_version: SCHEMA_VERSION,
        dimension: 1,
        prefix: vec![],
        tail: TailConfig::Constant {
            matrix: vec![[gamma, 0.0]],
        },
        space: Some(space),
        truncation: None,
        tolerance: None,
        seed: None,
    }
}
