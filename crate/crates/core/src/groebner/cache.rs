//! Content-addressed disk cache for reduced Groebner bases.
//!
//! The key is a digest of the full mathematical input (field, roster, order,
//! sorted generator text); the value is the plain-text polynomial list plus
//! the certificate flag, so cache entries stay human-auditable.

use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::field::FieldDesc;
use crate::poly::{MonomialOrder, MultiPoly, VarRoster};

use super::{buchberger, EngineError, GroebnerBasis, Limits};

#[derive(Debug)]
pub struct GbCache {
    dir: PathBuf,
    hits: AtomicU64,
}

fn order_text(order: &MonomialOrder) -> String {
    match order {
        MonomialOrder::Lex => "lex".to_string(),
        MonomialOrder::GrevLex => "grevlex".to_string(),
        MonomialOrder::Block { first } => {
            let idx: Vec<String> = first.iter().map(|i| i.to_string()).collect();
            format!("block:{}", idx.join(","))
        }
    }
}

fn csv(items: impl IntoIterator<Item = String>) -> String {
    items.into_iter().collect::<Vec<_>>().join(",")
}

impl GbCache {
    pub fn new(dir: PathBuf) -> std::io::Result<GbCache> {
        fs::create_dir_all(&dir)?;
        Ok(GbCache {
            dir,
            hits: AtomicU64::new(0),
        })
    }

    pub fn dir(&self) -> &PathBuf {
        &self.dir
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    fn header_lines(
        desc: &FieldDesc,
        roster: &VarRoster,
        order: &MonomialOrder,
        gens: &[MultiPoly],
    ) -> Vec<String> {
        let mut source_texts: Vec<String> = gens.iter().map(|g| g.to_text()).collect();
        source_texts.sort();
        let mut lines = vec![
            format!("p {}", desc.characteristic()),
            format!("k {}", desc.degree()),
            format!("modulus {}", csv(desc.modulus().iter().map(|c| c.to_string()))),
            format!("roster {}", csv(roster.names().iter().cloned())),
            format!("order {}", order_text(order)),
        ];
        for t in source_texts {
            lines.push(format!("source {t}"));
        }
        lines
    }

    fn key(desc: &FieldDesc, roster: &VarRoster, order: &MonomialOrder, gens: &[MultiPoly]) -> String {
        let mut hasher = Sha256::new();
        for line in Self::header_lines(desc, roster, order, gens) {
            hasher.update(line.as_bytes());
            hasher.update(b"\n");
        }
        hex::encode(hasher.finalize())
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.gb"))
    }

    pub fn load(
        &self,
        desc: &Arc<FieldDesc>,
        roster: &Arc<VarRoster>,
        order: &MonomialOrder,
        gens: &[MultiPoly],
    ) -> Option<GroebnerBasis> {
        let key = Self::key(desc, roster, order, gens);
        let text = fs::read_to_string(self.path_for(&key)).ok()?;
        let mut basis_gens: Vec<MultiPoly> = Vec::new();
        let mut certified = false;
        let expected = Self::header_lines(desc, roster, order, gens);
        let mut header_iter = expected.iter();
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("gen ") {
                basis_gens.push(MultiPoly::parse(roster, desc, rest).ok()?);
            } else if let Some(rest) = line.strip_prefix("certified ") {
                certified = rest.trim() == "true";
            } else {
                // header line: must match the expected input exactly
                if header_iter.next().map(String::as_str) != Some(line) {
                    return None;
                }
            }
        }
        if header_iter.next().is_some() {
            return None;
        }
        self.hits.fetch_add(1, Ordering::Relaxed);
        Some(GroebnerBasis::from_parts(
            Arc::clone(roster),
            Arc::clone(desc),
            order.clone(),
            basis_gens,
            gens.to_vec(),
            certified,
        ))
    }

    pub fn store(&self, gb: &GroebnerBasis) -> std::io::Result<()> {
        let key = Self::key(gb.desc(), gb.roster(), gb.order(), gb.source());
        let mut lines = Self::header_lines(gb.desc(), gb.roster(), gb.order(), gb.source());
        lines.push(format!("certified {}", gb.is_certified()));
        for g in gb.gens() {
            lines.push(format!("gen {}", g.to_text()));
        }
        let mut text = lines.join("\n");
        text.push('\n');
        fs::write(self.path_for(&key), text)
    }
}

/// Buchberger with an optional read-through disk cache.
pub fn buchberger_cached(
    gens: &[MultiPoly],
    order: &MonomialOrder,
    limits: &Limits,
    cache: Option<&GbCache>,
) -> Result<GroebnerBasis, EngineError> {
    let first = gens.first().expect("nonempty generator list");
    if let Some(c) = cache {
        if let Some(gb) = c.load(first.desc(), first.roster(), order, gens) {
            return Ok(gb);
        }
    }
    let gb = buchberger(gens, order, limits)?;
    if let Some(c) = cache {
        // best effort: an unwritable cache directory is not a math failure
        let _ = c.store(&gb);
    }
    Ok(gb)
}
