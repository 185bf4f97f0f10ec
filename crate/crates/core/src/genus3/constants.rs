//! Reference polynomials shipped with the crate.
//!
//! Format: `#` comments, `[name:deg name:deg ...]` lines setting the variable
//! table, and `name = polynomial` entries on the current table.

use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gradedring::{GradedPoly, VarTable};

pub const RELATIONS_TXT: &str = include_str!("../../data/relations.txt");
pub const STRATA_TXT: &str = include_str!("../../data/strata.txt");
pub const PIPELINE_JSON: &str = include_str!("../../data/pipeline.json");

#[derive(Clone, Debug)]
pub struct Constant {
    pub name: String,
    pub poly: GradedPoly,
}

#[derive(Clone, Debug)]
pub struct ConstantSet {
    pub entries: Vec<Constant>,
    pub checksum: String,
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn parse_table(line: &str) -> Result<Arc<VarTable>> {
    let inner = line
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("bad table line {line:?}")))?;
    let mut vars = Vec::new();
    for item in inner.split_whitespace() {
        let (n, d) = item.split_once(':').ok_or_else(|| Error::Parse(format!("bad variable {item:?}")))?;
        let d: u32 = d.parse().map_err(|_| Error::Parse(format!("bad degree in {item:?}")))?;
        vars.push((n.to_string(), d));
    }
    VarTable::new(&vars)
}

impl ConstantSet {
    pub fn parse(text: &str) -> Result<ConstantSet> {
        let mut table: Option<Arc<VarTable>> = None;
        let mut entries: Vec<Constant> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                table = Some(parse_table(line)?);
                continue;
            }
            let (name, body) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `name = polynomial`", no + 1)))?;
            let t = table.as_ref().ok_or_else(|| Error::Parse(format!("line {}: no variable table yet", no + 1)))?;
            let name = name.trim().to_string();
            if entries.iter().any(|c| c.name == name) {
                return Err(Error::Parse(format!("line {}: duplicate entry {name}", no + 1)));
            }
            let poly = GradedPoly::parse(t, body.trim()).map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
            entries.push(Constant { name, poly });
        }
        Ok(ConstantSet { entries, checksum: sha256_hex(text) })
    }

    pub fn get(&self, name: &str) -> Result<&GradedPoly> {
        self.entries
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.poly)
            .ok_or_else(|| Error::Invalid(format!("no reference entry named {name}")))
    }

    pub fn polys(&self) -> Vec<GradedPoly> {
        self.entries.iter().map(|c| c.poly.clone()).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|c| c.name.clone()).collect()
    }
}

/// Checks `computed == expected` after moving to the expected table.
pub fn expect_equal(name: &str, expected: &GradedPoly, computed: &GradedPoly) -> Result<()> {
    let c = computed.embed(expected.table()).map_err(|_| Error::Mismatch {
        name: name.to_string(),
        expected: expected.to_string(),
        computed: computed.to_string(),
    })?;
    if c != *expected {
        return Err(Error::Mismatch { name: name.to_string(), expected: expected.to_string(), computed: computed.to_string() });
    }
    Ok(())
}
