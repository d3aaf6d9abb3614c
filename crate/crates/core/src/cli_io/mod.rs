//! File format, built-in catalog, run reports and tolerance configuration
//! for the command-line tool.

pub mod catalog;
pub mod format;
pub mod report;

pub use catalog::{catalog, CatalogEntry};
pub use format::{load, parse, save, AlgebraFile};
pub use report::{Provenance, RunReport};

use serde::Deserialize;

use crate::linalg::LinearMap;
use crate::{Error, Result, Tolerances};

/// Name of the environment variable holding default tolerances.
pub const TOLERANCE_ENV: &str = "SOLITONFORGE_TOLERANCE";

/// Parses a tolerance override: either a single number (applied to the fit
/// and verification tolerances) or comma-separated `key=value` pairs with
/// keys `fit`, `verify`, `rank`, `jacobi`, `spd`.
pub fn parse_tolerance_spec(spec: &str, base: Tolerances) -> Result<Tolerances> {
    let bad = |msg: String| Error::InvalidParameter(format!("{TOLERANCE_ENV}: {msg}"));
    let positive = |v: &str| -> Result<f64> {
        let x: f64 = v.trim().parse().map_err(|_| bad(format!("{v:?} is not a number")))?;
        if x > 0.0 && x.is_finite() {
            Ok(x)
        } else {
            Err(bad(format!("{v:?} must be positive")))
        }
    };
    let spec = spec.trim();
    let mut t = base;
    if spec.is_empty() {
        return Ok(t);
    }
    if !spec.contains('=') {
        let x = positive(spec)?;
        t.fit = x;
        t.verify = x;
        return Ok(t);
    }
    for part in spec.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, got {part:?}")))?;
        let x = positive(v)?;
        match k.trim() {
            "fit" => t.fit = x,
            "verify" => t.verify = x,
            "rank" => t.rank = x,
            "jacobi" => t.jacobi = x,
            "spd" => t.spd = x,
            other => return Err(bad(format!("unknown key {other:?}"))),
        }
    }
    Ok(t)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DerivationFile {
    Wrapped { matrix: Vec<Vec<f64>> },
    Bare(Vec<Vec<f64>>),
}

/// Parses a derivation file: `{"matrix": [[…], …]}` or a bare row array,
/// rows indexed by output basis vector.
pub fn parse_derivation(text: &str) -> Result<LinearMap> {
    let f: DerivationFile =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("invalid derivation file: {e}")))?;
    let rows = match f {
        DerivationFile::Wrapped { matrix } => matrix,
        DerivationFile::Bare(m) => m,
    };
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Schema("derivation must be a non-empty square matrix".into()));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Schema("non-finite derivation entry".into()));
    }
    Ok(LinearMap::from_rows(&rows))
}
