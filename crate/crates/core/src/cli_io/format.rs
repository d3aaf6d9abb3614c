//! The JSON algebra file format.
//!
//! ```json
//! {"name": "heisenberg3", "dim": 3,
//!  "brackets": [{"i": 1, "j": 2, "coeffs": {"3": 1.0}}],
//!  "gram": [[1,0,0],[0,1,0],[0,0,1]], "labels": ["x","y","z"]}
//! ```
//!
//! Indices are 1-based and only pairs with `i < j` are stored; `gram`
//! defaults to the identity and `labels` is optional.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::lie_core::MetricLieAlgebra;
use crate::linalg;
use crate::{Error, Result, Tolerances};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub dim: usize,
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Coeffs,
}

/// `k → c_ijk`, written as a JSON object with keys in numeric order.
#[derive(Debug, Clone, PartialEq)]
pub struct Coeffs(pub Vec<(usize, f64)>);

impl Serialize for Coeffs {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Coeffs {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, f64>::deserialize(d)?;
        let mut out = Vec::with_capacity(raw.len());
        for (k, v) in raw {
            let idx: usize = k
                .trim()
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("coefficient key {k:?} is not an index")))?;
            out.push((idx, v));
        }
        out.sort_by_key(|(k, _)| *k);
        Ok(Self(out))
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

impl TryFrom<AlgebraFile> for MetricLieAlgebra {
    type Error = Error;

    fn try_from(f: AlgebraFile) -> Result<Self> {
        let n = f.dim;
        if n == 0 {
            return Err(schema("dim must be positive"));
        }
        let mut c = vec![0.0; n * n * n];
        let mut seen = std::collections::BTreeSet::new();
        for b in &f.brackets {
            if b.i == 0 || b.j == 0 || b.i > n || b.j > n {
                return Err(schema(format!("bracket ({}, {}) out of range 1..={n}", b.i, b.j)));
            }
            if b.i >= b.j {
                return Err(schema(format!("bracket ({}, {}): only i < j entries are allowed", b.i, b.j)));
            }
            if !seen.insert((b.i, b.j)) {
                return Err(schema(format!("bracket ({}, {}) listed twice", b.i, b.j)));
            }
            for &(k, v) in &b.coeffs.0 {
                if k == 0 || k > n {
                    return Err(schema(format!("coefficient index {k} out of range 1..={n}")));
                }
                if !v.is_finite() {
                    return Err(schema(format!("non-finite coefficient in bracket ({}, {})", b.i, b.j)));
                }
                let (i, j, k) = (b.i - 1, b.j - 1, k - 1);
                c[(i * n + j) * n + k] = v;
                c[(j * n + i) * n + k] = -v;
            }
        }
        let gram = match &f.gram {
            None => DMatrix::identity(n, n),
            Some(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(schema(format!("gram must be a {n}x{n} array")));
                }
                if rows.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(schema("non-finite gram entry"));
                }
                linalg::matrix_from_rows(rows, n)
            }
        };
        if let Some(l) = &f.labels {
            if l.len() != n {
                return Err(schema(format!("expected {n} labels, got {}", l.len())));
            }
        }
        MetricLieAlgebra::new(f.name, n, c, gram)
            .map_err(|e| schema(e.to_string()))?
            .with_labels(f.labels)
            .map_err(|e| schema(e.to_string()))
    }
}

impl From<MetricLieAlgebra> for AlgebraFile {
    fn from(alg: MetricLieAlgebra) -> Self {
        AlgebraFile::from(&alg)
    }
}

impl From<&MetricLieAlgebra> for AlgebraFile {
    fn from(alg: &MetricLieAlgebra) -> Self {
        let n = alg.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let coeffs: Vec<(usize, f64)> = (0..n)
                    .filter(|&k| alg.c(i, j, k) != 0.0)
                    .map(|k| (k + 1, alg.c(i, j, k)))
                    .collect();
                if !coeffs.is_empty() {
                    brackets.push(BracketEntry {
                        i: i + 1,
                        j: j + 1,
                        coeffs: Coeffs(coeffs),
                    });
                }
            }
        }
        let gram = (!alg.has_identity_gram()).then(|| linalg::matrix_rows(alg.gram()));
        AlgebraFile {
            name: alg.name().to_string(),
            dim: n,
            brackets,
            gram,
            labels: alg.labels().map(<[String]>::to_vec),
        }
    }
}

impl Serialize for MetricLieAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MetricLieAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = AlgebraFile::deserialize(d)?;
        MetricLieAlgebra::try_from(f).map_err(serde::de::Error::custom)
    }
}

/// Parses an algebra document; schema problems are [`Error::Schema`].
pub fn parse(text: &str) -> Result<MetricLieAlgebra> {
    let f: AlgebraFile = serde_json::from_str(text).map_err(|e| schema(format!("invalid algebra file: {e}")))?;
    MetricLieAlgebra::try_from(f)
}

pub fn to_json(alg: &MetricLieAlgebra) -> String {
    let mut s = serde_json::to_string_pretty(&AlgebraFile::from(alg)).expect("algebra files always serialize");
    s.push('\n');
    s
}

/// Reads and validates an algebra file.
pub fn load(path: &Path, tol: &Tolerances) -> Result<MetricLieAlgebra> {
    let alg = load_unvalidated(path)?;
    alg.require_valid(tol)?;
    Ok(alg)
}

pub fn load_unvalidated(path: &Path) -> Result<MetricLieAlgebra> {
    let text = std::fs::read_to_string(path)?;
    parse(&text)
}

pub fn save(alg: &MetricLieAlgebra, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(alg))?;
    Ok(())
}
