//! Bundled arrangements and the table of known closed-form values checked by
//! `latsum reproduce-examples` and the acceptance suite.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfun::{lattice_sum_value, zeta_from_s, Options, Value, WeightVector, ZetaFamily};
use crate::io::{parse_rational_list, NamedArrangement};
use crate::scalar::parse_exact;

macro_rules! bundled {
    ($($id:literal),* $(,)?) => {
        &[$(($id, include_str!(concat!("../../../fixtures/", $id, ".json")))),*]
    };
}

pub const ARRANGEMENTS: &[(&str, &str)] = bundled![
    "a1_alpha1",
    "a1_alpha2",
    "a1_alpha3",
    "a1_alphahalf",
    "a2_alpha1",
    "a2_alpha2",
    "a2_alpha3",
    "a2_zero",
    "ex31_alpha0",
    "ex31_rational",
];

const MANIFEST: &str = include_str!("../../../fixtures/manifest.json");

pub fn arrangement(id: &str) -> Result<NamedArrangement> {
    let (_, json) = ARRANGEMENTS.iter().find(|(k, _)| *k == id).ok_or_else(|| Error::InvalidInput(format!("no bundled arrangement {id:?}")))?;
    NamedArrangement::parse(json)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    S,
    #[serde(rename = "zeta")]
    Zeta,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub fixture: String,
    pub k: Vec<u32>,
    pub y: Vec<String>,
    pub quantity: Quantity,
    #[serde(default)]
    pub family: Option<String>,
    pub expected: String,
    /// Wall-clock allowance in seconds.
    pub budget_s: f64,
}

pub fn manifest() -> Vec<ManifestEntry> {
    serde_json::from_str(MANIFEST).expect("bundled manifest parses")
}

#[derive(Clone, Debug)]
pub struct EntryOutcome {
    pub id: String,
    pub got: String,
    pub expected: String,
    pub pass: bool,
    pub seconds: f64,
}

fn family(name: Option<&str>) -> Result<ZetaFamily> {
    match name {
        Some("A1") => Ok(ZetaFamily::A1),
        Some("A2") => Ok(ZetaFamily::A2),
        other => Err(Error::UnsupportedFamily(format!("{other:?}"))),
    }
}

/// Evaluates one entry exactly and compares it with the expected expression.
pub fn check_entry(entry: &ManifestEntry, opts: &Options) -> Result<EntryOutcome> {
    let arr = arrangement(&entry.fixture)?;
    let y = parse_rational_list(&entry.y.join(","))?;
    let k = WeightVector::new(entry.k.clone());
    let start = Instant::now();
    let report = lattice_sum_value(&arr.arrangement, &y, &k, opts)?;
    let value = match entry.quantity {
        Quantity::S => report.s.clone(),
        Quantity::Zeta => zeta_from_s(&arr.arrangement, &y, &k, family(entry.family.as_deref())?, &report.s)?,
    };
    let seconds = start.elapsed().as_secs_f64();
    let Value::Exact(got) = &value else {
        return Err(Error::NotExact("manifest entries are checked in exact mode".into()));
    };
    let want = parse_exact(&entry.expected, got.order())?;
    Ok(EntryOutcome { id: entry.id.clone(), got: got.to_canonical_string(), expected: entry.expected.clone(), pass: *got == want, seconds })
}
