//! JSON run reports written by the command-line tool.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Result, Tolerances};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// SHA-256 of the input file bytes, hex encoded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
    pub tolerances: Tolerances,
}

impl Provenance {
    pub fn new(command: &str, input: Option<&[u8]>, tolerances: Tolerances) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input_sha256: input.map(sha256_hex),
            tolerances,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `{"provenance": …, "result": …}`; `result` mirrors the library type that
/// the command produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub provenance: Provenance,
    pub result: serde_json::Value,
}

impl RunReport {
    pub fn new<T: Serialize>(provenance: Provenance, result: &T) -> Result<Self> {
        Ok(Self {
            provenance,
            result: serde_json::to_value(result)?,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soliton::find_algebraic_soliton;
    use crate::SolitonCertificate;

    #[test]
    fn report_round_trips() {
        let h = super::super::catalog::heisenberg3();
        let cert = find_algebraic_soliton(&h, &Tolerances::default()).unwrap().unwrap();
        let rep = RunReport::new(Provenance::new("soliton", Some(b"abc"), Tolerances::default()), &cert).unwrap();
        let text = rep.to_json();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rep);
        let cert_back: SolitonCertificate = serde_json::from_value(back.result).unwrap();
        assert_eq!(cert_back, cert);
        assert_eq!(
            rep.provenance.input_sha256.as_deref(),
            Some("ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad")
        );
    }
}
