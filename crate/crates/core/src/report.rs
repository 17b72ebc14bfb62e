//! JSON certificate schema shared by the library reports and the CLI.
//!
//! Field order of [`Report`] is fixed, so identical invocations serialize to
//! byte-identical JSON except for the `wall_time_ms` and `cache_hits` fields.

use serde::Serialize;

use crate::field::FieldDesc;

#[derive(Debug, Clone, Serialize)]
pub struct CertEntry {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

pub fn entry(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> CertEntry {
    CertEntry {
        name: name.into(),
        ok,
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldInfo {
    pub p: u64,
    pub k: usize,
    pub modulus: Vec<u64>,
}

impl From<&FieldDesc> for FieldInfo {
    fn from(desc: &FieldDesc) -> FieldInfo {
        FieldInfo {
            p: desc.characteristic(),
            k: desc.degree(),
            modulus: desc.modulus().to_vec(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub field: FieldInfo,
    pub payload: serde_json::Value,
    pub certificates: Vec<CertEntry>,
    pub wall_time_ms: u128,
    pub cache_hits: u64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn all_ok(&self) -> bool {
        self.certificates.iter().all(|c| c.ok)
    }
}
