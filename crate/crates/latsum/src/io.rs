//! JSON arrangement files and result records.
//!
//! An arrangement file looks like
//! ```json
//! { "rank": 2,
//!   "functionals": [ { "name": "f1", "direction": [1, 0], "constant": "1/2" },
//!                    { "direction": [1, 1], "constant": { "re": "0", "im": "1/3" } } ] }
//! ```
//! Constants are rational strings, integers, or `{re, im}` pairs; a missing constant is 0.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfun::{EvaluationReport, Mode, Strategy, Value};
use crate::lattice::{Arrangement, Functional};
use crate::rat::{format_rational, parse_rational, GaussQ, Q};
use crate::scalar::{parse_exact, ExactScalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConstantEntry {
    Integer(i64),
    Rational(String),
    Gaussian { re: String, im: String },
}

impl Default for ConstantEntry {
    fn default() -> Self {
        ConstantEntry::Integer(0)
    }
}

impl ConstantEntry {
    pub fn parse(&self) -> Result<GaussQ> {
        Ok(match self {
            ConstantEntry::Integer(n) => GaussQ::real(Q::from_integer((*n).into())),
            ConstantEntry::Rational(s) => GaussQ::real(parse_rational(s)?),
            ConstantEntry::Gaussian { re, im } => GaussQ { re: parse_rational(re)?, im: parse_rational(im)? },
        })
    }

    pub fn from_gauss(c: &GaussQ) -> Self {
        if c.is_real() {
            ConstantEntry::Rational(format_rational(&c.re))
        } else {
            ConstantEntry::Gaussian { re: format_rational(&c.re), im: format_rational(&c.im) }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub direction: Vec<i64>,
    #[serde(default)]
    pub constant: ConstantEntry,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrangementFile {
    pub rank: usize,
    pub functionals: Vec<FunctionalEntry>,
}

/// An arrangement with display names for its functionals ("f0", "f1", … unless given).
#[derive(Clone, Debug)]
pub struct NamedArrangement {
    pub arrangement: Arrangement,
    pub names: Vec<String>,
}

impl NamedArrangement {
    pub fn from_file(file: &ArrangementFile) -> Result<Self> {
        let mut fs = vec![];
        let mut names = vec![];
        for (i, e) in file.functionals.iter().enumerate() {
            if e.direction.len() != file.rank {
                return Err(Error::Parse(format!("functional {i} has {} coordinates, rank is {}", e.direction.len(), file.rank)));
            }
            fs.push(Functional::new(e.direction.clone(), e.constant.parse()?));
            names.push(e.name.clone().unwrap_or_else(|| format!("f{i}")));
        }
        Ok(NamedArrangement { arrangement: Arrangement::new(file.rank, fs)?, names })
    }

    pub fn parse(json: &str) -> Result<Self> {
        let file: ArrangementFile = serde_json::from_str(json).map_err(|e| Error::Parse(format!("arrangement JSON: {e}")))?;
        Self::from_file(&file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_file(&self) -> ArrangementFile {
        ArrangementFile {
            rank: self.arrangement.rank(),
            functionals: self
                .arrangement
                .functionals()
                .iter()
                .zip(&self.names)
                .map(|(f, n)| FunctionalEntry { name: Some(n.clone()), direction: f.direction.clone(), constant: ConstantEntry::from_gauss(&f.constant) })
                .collect(),
        }
    }

    /// Index of a functional given by name or by position.
    pub fn resolve(&self, key: &str) -> Result<usize> {
        if let Some(i) = self.names.iter().position(|n| n == key) {
            return Ok(i);
        }
        match key.parse::<usize>() {
            Ok(i) if i < self.names.len() => Ok(i),
            _ => Err(Error::InvalidInput(format!("no functional named {key:?}; known: {}", self.names.join(", ")))),
        }
    }

    pub fn without(&self, removed: &[usize]) -> Result<Self> {
        Ok(NamedArrangement {
            arrangement: self.arrangement.without(removed)?,
            names: self.names.iter().enumerate().filter(|(i, _)| !removed.contains(i)).map(|(_, n)| n.clone()).collect(),
        })
    }
}

/// Comma-separated rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Q>> {
    s.split(',').map(parse_rational).collect()
}

pub fn parse_weights(s: &str) -> Result<Vec<u32>> {
    s.split(',').map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("not a weight: {x:?}")))).collect()
}

/// One evaluation as written by `latsum eval`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    #[serde(rename = "S")]
    pub s: String,
    #[serde(rename = "C")]
    pub c: String,
    pub mode: String,
    pub order: u32,
    #[serde(rename = "N_cyclotomic")]
    pub n_cyclotomic: Option<u32>,
    pub timing_ms: f64,
    pub k: Vec<u32>,
    pub y: Vec<String>,
    pub strategy: String,
    pub phi: Vec<i64>,
    pub bases: usize,
    pub degenerate_divisions: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
}

fn render(v: &Value) -> String {
    match v {
        Value::Exact(x) => x.to_canonical_string(),
        Value::Numeric(x) => x.to_string(),
    }
}

impl ResultRecord {
    pub fn new(report: &EvaluationReport, k: &[u32], y: &[Q], timing_ms: f64) -> Self {
        ResultRecord {
            s: render(&report.s),
            c: render(&report.c),
            mode: report.mode.to_string(),
            order: report.series_order,
            n_cyclotomic: report.cyclotomic_order,
            timing_ms,
            k: k.to_vec(),
            y: y.iter().map(format_rational).collect(),
            strategy: match report.strategy {
                Strategy::Auto => "auto",
                Strategy::Targeted => "targeted",
                Strategy::FullSeries => "full-series",
            }
            .into(),
            phi: report.phi.phi.clone(),
            bases: report.basis_count,
            degenerate_divisions: report.degenerate_divisions,
            precision: match report.mode {
                Mode::Exact => None,
                Mode::Numeric { precision } => Some(precision),
            },
        }
    }

    /// The exact S as a scalar, for records written in exact mode.
    pub fn exact_s(&self) -> Result<ExactScalar> {
        let n = self.n_cyclotomic.ok_or_else(|| Error::NotExact("record was written in numeric mode".into()))?;
        parse_exact(&self.s, n)
    }

    pub fn csv_header() -> &'static str {
        "S,C,mode,order,N_cyclotomic,timing_ms"
    }

    pub fn csv_row(&self) -> String {
        let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
        format!(
            "{},{},{},{},{},{:.3}",
            quote(&self.s),
            quote(&self.c),
            self.mode,
            self.order,
            self.n_cyclotomic.map(|n| n.to_string()).unwrap_or_default(),
            self.timing_ms
        )
    }
}
