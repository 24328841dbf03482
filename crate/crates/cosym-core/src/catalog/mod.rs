//! Named algebras, bundles and derivation families, with verification.
//!
//! Entries split in two groups. Built-in entries carry structure constants
//! that are fully written out in their defining descriptions (Heisenberg and
//! filiform nilpotent algebras, the unsolvable 4-dimensional sums, the `h4`,
//! `aff(C)` and abelian model families). Entries for the classified
//! four-dimensional symplectic algebras load their brackets from an external
//! data file transcribed from Ovando's classification; when the file is
//! absent every operation touching them reports
//! [`Error::MissingExternalData`] instead of guessing.

pub mod builtin;
mod external;

pub use external::{OvandoData, RowDoc};

use crate::error::Error;
use crate::geom::StructureReport;
use crate::lie::{Endo, LieAlgebra, MatSpace};
use crate::rat::{parse_q, Q};
use crate::Result;
use crate::correspond::{EvenBundle, OddBundle};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Environment variable overriding the default external data path.
pub const DATA_ENV: &str = "COSYM_DATA";

/// Default location of the transcribed structure-constant file, relative to
/// the working directory.
pub const DATA_DEFAULT: &str = "data/ovando4d.json";

/// What a catalog entry instantiates to.
#[derive(Debug, Clone)]
pub enum CatalogObject {
    Algebra(LieAlgebra),
    Even(EvenBundle),
    Odd(OddBundle),
}

impl CatalogObject {
    pub fn algebra(&self) -> &LieAlgebra {
        match self {
            CatalogObject::Algebra(g) => g,
            CatalogObject::Even(e) => &e.h,
            CatalogObject::Odd(o) => &o.g,
        }
    }
}

/// A named linear/affine family of endomorphisms attached to an entry, with
/// its parameter names in basis order.
#[derive(Debug, Clone)]
pub struct NamedFamily {
    pub name: String,
    pub params: Vec<String>,
    pub space: MatSpace,
}

impl NamedFamily {
    /// Member at named parameter values (missing names default to zero).
    pub fn at(&self, values: &BTreeMap<String, Q>) -> Endo {
        let coeffs: Vec<Q> = self
            .params
            .iter()
            .map(|p| values.get(p).cloned().unwrap_or_else(num::Zero::zero))
            .collect();
        self.space.at(&coeffs)
    }
}

/// Fully instantiated catalog entry.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub params: BTreeMap<String, Q>,
    pub object: CatalogObject,
    pub families: Vec<NamedFamily>,
    pub provenance: String,
}

impl Instance {
    pub fn family(&self, name: &str) -> Option<&NamedFamily> {
        self.families.iter().find(|f| f.name == name)
    }
}

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
}

impl Check {
    fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Pass,
        }
    }
    fn fail(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Fail(why.into()),
        }
    }
    fn of(name: impl Into<String>, ok: bool, why: impl Into<String>) -> Self {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, why)
        }
    }
}

/// Aggregated verification result for one entry at one parameter point.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub entry: String,
    pub params: BTreeMap<String, Q>,
    pub checks: Vec<Check>,
    pub classification: Option<StructureReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        !self
            .checks
            .iter()
            .any(|c| matches!(c.status, CheckStatus::Fail(_)))
    }
    pub fn skipped(&self) -> bool {
        self.checks
            .iter()
            .all(|c| matches!(c.status, CheckStatus::Skipped(_)))
            && !self.checks.is_empty()
    }
}

/// Verification of a table row across its sampled admissible parameters.
#[derive(Debug, Clone)]
pub struct RowReport {
    pub table: u8,
    pub row: String,
    pub cases: Vec<RowCase>,
}

#[derive(Debug, Clone)]
pub struct RowCase {
    pub params: BTreeMap<String, Q>,
    pub checks: Vec<Check>,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| {
            !c.checks
                .iter()
                .any(|ch| matches!(ch.status, CheckStatus::Fail(_)))
        })
    }
}

/// Short descriptor for listings.
#[derive(Debug, Clone)]
pub struct EntryInfo {
    pub name: String,
    pub params: Vec<String>,
    pub kind: &'static str,
    pub provenance: String,
    pub external: bool,
}

/// The catalog: built-in entries plus, when loaded, the external rows.
#[derive(Debug, Clone)]
pub struct Catalog {
    data: Option<OvandoData>,
    data_missing: String,
}

impl Catalog {
    /// Built-ins only; external rows report missing data.
    pub fn builtin() -> Self {
        Catalog {
            data: None,
            data_missing: format!("no data file loaded (default {})", DATA_DEFAULT),
        }
    }

    /// Loads the transcribed data file; fails loudly on malformed content.
    pub fn with_data_path(path: &Path) -> Result<Self> {
        let data = external::load(path)?;
        Ok(Catalog {
            data: Some(data),
            data_missing: String::new(),
        })
    }

    /// Resolution order: explicit path, `COSYM_DATA`, then the default
    /// location if it exists. Absence is not an error; malformed data is.
    pub fn load(explicit: Option<&Path>) -> Result<Self> {
        if let Some(p) = explicit {
            return Self::with_data_path(p);
        }
        if let Ok(env) = std::env::var(DATA_ENV) {
            return Self::with_data_path(&PathBuf::from(env));
        }
        let default = PathBuf::from(DATA_DEFAULT);
        if default.exists() {
            Self::with_data_path(&default)
        } else {
            Ok(Self::builtin())
        }
    }

    pub fn has_data(&self) -> bool {
        self.data.is_some()
    }

    pub(crate) fn data(&self) -> Result<&OvandoData> {
        self.data
            .as_ref()
            .ok_or_else(|| Error::MissingExternalData(self.data_missing.clone()))
    }

    /// All entries, built-in first, then external rows when loaded.
    pub fn entries(&self) -> Vec<EntryInfo> {
        let mut out = builtin::infos();
        if let Some(data) = &self.data {
            out.extend(external::infos(data));
        }
        out
    }

    /// Instantiates an entry at the given named parameters.
    pub fn get(&self, name: &str, params: &BTreeMap<String, Q>) -> Result<Instance> {
        if builtin::is_builtin(name) {
            return builtin::get(name, params);
        }
        if let Some(data) = &self.data {
            if data.row(name).is_some() {
                return external::get(data, name, params);
            }
        } else if external::KNOWN_ROWS.contains(&name) {
            return Err(Error::MissingExternalData(self.data_missing.clone()));
        }
        Err(Error::UnknownEntry(name.to_string()))
    }

    /// Runs the entry's whole verification battery.
    pub fn verify_entry(&self, name: &str, params: &BTreeMap<String, Q>) -> Result<VerifyReport> {
        if builtin::is_builtin(name) {
            return builtin::verify(name, params);
        }
        if let Some(data) = &self.data {
            if let Some(row) = data.row(name) {
                let table = row.table;
                let report = self.verify_table_row(table, name)?;
                return Ok(flatten_row_report(report));
            }
        } else if external::KNOWN_ROWS.contains(&name) {
            return Ok(VerifyReport {
                entry: name.to_string(),
                params: params.clone(),
                checks: vec![Check {
                    name: "external_data".into(),
                    status: CheckStatus::Skipped(self.data_missing.clone()),
                }],
                classification: None,
            });
        }
        Err(Error::UnknownEntry(name.to_string()))
    }

    /// Golden check of a classified-table row: the printed derivation family
    /// must equal the computed one at every sampled admissible parameter
    /// point (plus structural sanity checks on the row data itself).
    pub fn verify_table_row(&self, table: u8, row: &str) -> Result<RowReport> {
        let data = self.data()?;
        external::verify_row(data, table, row)
    }

    /// Names of the rows of one table (requires the data file).
    pub fn table_rows(&self, table: u8) -> Result<Vec<String>> {
        let data = self.data()?;
        Ok(data
            .rows
            .iter()
            .filter(|r| r.table == table)
            .map(|r| r.name.clone())
            .collect())
    }

    /// Built-in entry names.
    pub fn builtin_names() -> Vec<&'static str> {
        builtin::NAMES.to_vec()
    }
}

fn flatten_row_report(report: RowReport) -> VerifyReport {
    let mut checks = Vec::new();
    for case in &report.cases {
        let suffix = if case.params.is_empty() {
            String::new()
        } else {
            let kv: Vec<String> = case
                .params
                .iter()
                .map(|(k, v)| format!("{}={}", k, v))
                .collect();
            format!(" @ {}", kv.join(","))
        };
        for ch in &case.checks {
            checks.push(Check {
                name: format!("{}{}", ch.name, suffix),
                status: ch.status.clone(),
            });
        }
    }
    VerifyReport {
        entry: report.row,
        params: BTreeMap::new(),
        checks,
        classification: None,
    }
}

/// Parses `k=v` pairs with rational values into a parameter map.
pub fn parse_params(pairs: &[String]) -> Result<BTreeMap<String, Q>> {
    let mut out = BTreeMap::new();
    for pair in pairs {
        for item in pair.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::BadInput(format!("expected k=v, got '{}'", item)))?;
            out.insert(k.trim().to_string(), parse_q(v)?);
        }
    }
    Ok(out)
}
