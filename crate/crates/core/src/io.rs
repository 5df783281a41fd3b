//! JSON exchange formats: tensors, spectra with positivity profiles, and the
//! report envelope.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::eigen::Spectrum;
use crate::error::{CurvError, Result};
use crate::positivity::{positivity_profile, AlphaStar, PositivityProfile};
use crate::scalar::Real;
use crate::tensor::{CurvatureTensor, Entry, ToleranceConfig};

pub const CONVENTION: &str = "R1212-positive-sphere";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub v: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub dim: usize,
    pub convention: String,
    pub entries: Vec<EntryRecord>,
}

impl TensorFile {
    pub fn from_tensor<T: Real>(t: &CurvatureTensor<T>) -> Self {
        Self {
            dim: t.dim(),
            convention: CONVENTION.to_string(),
            entries: t
                .canonical_entries()
                .into_iter()
                .map(|e| EntryRecord {
                    i: e.i,
                    j: e.j,
                    k: e.k,
                    l: e.l,
                    v: e.v.as_f64(),
                })
                .collect(),
        }
    }

    /// Canonicalizes the entries and validates the result.
    pub fn to_tensor<T: Real>(&self, tol: &ToleranceConfig<T>) -> Result<CurvatureTensor<T>> {
        if self.convention != CONVENTION {
            return Err(CurvError::Parse(format!(
                "unsupported convention {:?}, expected {CONVENTION:?}",
                self.convention
            )));
        }
        let entries: Vec<Entry<T>> = self
            .entries
            .iter()
            .map(|e| Entry::new(e.i, e.j, e.k, e.l, T::lit(e.v)))
            .collect();
        CurvatureTensor::new_from_components_with(self.dim, &entries, tol)
    }
}

pub fn tensor_to_json<T: Real>(t: &CurvatureTensor<T>) -> String {
    let mut s = serde_json::to_string_pretty(&TensorFile::from_tensor(t)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn tensor_from_json<T: Real>(s: &str, tol: &ToleranceConfig<T>) -> Result<CurvatureTensor<T>> {
    let file: TensorFile = serde_json::from_str(s).map_err(|e| CurvError::Parse(e.to_string()))?;
    file.to_tensor(tol)
}

pub fn read_tensor<T: Real>(path: &Path, tol: &ToleranceConfig<T>) -> Result<CurvatureTensor<T>> {
    tensor_from_json(&fs::read_to_string(path)?, tol)
}

pub fn write_tensor<T: Real>(path: &Path, t: &CurvatureTensor<T>) -> Result<()> {
    write_atomic(path, tensor_to_json(t).as_bytes())
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| CurvError::Io(std::io::Error::new(std::io::ErrorKind::InvalidInput, "path has no file name")))?;
    let tmp = dir.join(format!(".{}.tmp.{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

impl<T: Real> Serialize for AlphaStar<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AlphaStar::Always => s.serialize_str("always"),
            AlphaStar::Threshold(a) => s.serialize_f64(a.as_f64()),
            AlphaStar::Boundary => s.serialize_str("boundary"),
            AlphaStar::Unattainable => s.serialize_str("unattainable"),
        }
    }
}

impl<'de, T: Real> Deserialize<'de> for AlphaStar<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(a) => Ok(AlphaStar::Threshold(T::lit(a))),
            Raw::Tag(t) => match t.as_str() {
                "always" => Ok(AlphaStar::Always),
                "boundary" => Ok(AlphaStar::Boundary),
                "unattainable" => Ok(AlphaStar::Unattainable),
                other => Err(de::Error::custom(format!("unknown alphaStar {other:?}"))),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub k: usize,
    pub sigma: f64,
    #[serde(rename = "alphaStar")]
    pub alpha_star: AlphaStar<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub eigenvalues: Vec<f64>,
    pub profile: Vec<ProfileRecord>,
}

impl SpectrumRecord {
    pub fn from_profile<T: Real>(p: &PositivityProfile<T>) -> Self {
        Self {
            eigenvalues: p.eigenvalues.iter().map(|x| x.as_f64()).collect(),
            profile: p
                .rows
                .iter()
                .map(|r| ProfileRecord {
                    k: r.k,
                    sigma: r.sigma.as_f64(),
                    alpha_star: match r.alpha_star {
                        AlphaStar::Threshold(a) => AlphaStar::Threshold(a.as_f64()),
                        AlphaStar::Always => AlphaStar::Always,
                        AlphaStar::Boundary => AlphaStar::Boundary,
                        AlphaStar::Unattainable => AlphaStar::Unattainable,
                    },
                })
                .collect(),
        }
    }

    pub fn from_spectrum<T: Real>(s: &Spectrum<T>) -> Self {
        Self::from_profile(&positivity_profile(s))
    }
}

/// `{"tool", "version", "seed", "config", "results"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<R> {
    pub tool: String,
    pub version: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub results: R,
}

impl<R> Report<R> {
    pub fn new(seed: Option<u64>, config: serde_json::Value, results: R) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config,
            results,
        }
    }
}

pub fn report_to_json<R: Serialize>(report: &Report<R>) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn emit_report<R: Serialize>(report: &Report<R>, path: &Path) -> Result<()> {
    write_atomic(path, report_to_json(report)?.as_bytes())
}
