//! Rows of the four-dimensional classification tables, loaded from a
//! transcribed data file.
//!
//! The file carries, per row: the structure constants (transcribed from
//! Ovando's classification of four-dimensional symplectic Lie algebras, with
//! a mandatory provenance string), the symplectic form, the expected
//! derivation family, and for the Kaehler rows the complex structure. Rows
//! whose algebra depends on a parameter store bracket coefficients as small
//! polynomials in that parameter and declare its admissible range.
//!
//! Verification recomputes every family from scratch and demands equality as
//! affine sets at each sampled admissible parameter point.

use super::{Check, CatalogObject, EntryInfo, Instance, NamedFamily, RowCase, RowReport};
use crate::correspond::EvenBundle;
use crate::error::Error;
use crate::forms::KForm;
use crate::geom::{
    commuting_ist_derivation_space, compatible_acs, ist_derivation_space, nijenhuis,
};
use crate::lie::{BracketEntry, Endo, LieAlgebra, MatSpace};
use crate::linalg::QMat;
use crate::rat::{parse_q, qi, qr, Q};
use crate::Result;
use num::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// Row names the catalog knows to expect, so that a missing data file can be
/// reported as such rather than as an unknown entry.
pub const KNOWN_ROWS: [&str; 35] = [
    "rh3",
    "rr3_0",
    "rr3_m1",
    "rrp3_0",
    "r2r2",
    "r2prime_ov",
    "n4",
    "r4_0_ep",
    "r4_0_em",
    "r4_m1",
    "r4_beta",
    "r4_beta_m1",
    "r4_alpha",
    "rp4_delta_ep",
    "rp4_delta_em",
    "d4_1_e0",
    "d4_1_e1",
    "d4_2_a",
    "d4_2_b_ep",
    "d4_2_b_em",
    "d4_lambda",
    "d4_half",
    "dp4_delta_ep",
    "dp4_delta_em",
    "h4_ep",
    "h4_em",
    "t2_rr3_0",
    "t2_rrp3_0",
    "t2_r2r2",
    "t2_rp4_delta_a",
    "t2_rp4_delta_b",
    "t2_d4_2",
    "t2_d4_half",
    "t2_dp4_delta_a",
    "t2_dp4_delta_b",
];

/// One monomial `c * prod(vars)` of a coefficient polynomial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Monomial {
    pub c: String,
    #[serde(default)]
    pub vars: Vec<String>,
}

/// Rational constant or a polynomial in the row's parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffSpec {
    Plain(String),
    Poly {
        #[serde(default)]
        base: Option<String>,
        terms: Vec<Monomial>,
    },
}

impl CoeffSpec {
    fn eval(&self, values: &BTreeMap<String, Q>) -> Result<Q> {
        match self {
            CoeffSpec::Plain(s) => parse_q(s),
            CoeffSpec::Poly { base, terms } => {
                let mut acc = match base {
                    Some(b) => parse_q(b)?,
                    None => Q::zero(),
                };
                for m in terms {
                    let mut t = parse_q(&m.c)?;
                    for v in &m.vars {
                        let value = values.get(v).ok_or_else(|| {
                            Error::BadInput(format!("coefficient references unknown parameter '{}'", v))
                        })?;
                        t *= value;
                    }
                    acc += t;
                }
                Ok(acc)
            }
        }
    }
}

/// Admissible range of a row parameter.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct ParamDoc {
    pub name: String,
    #[serde(default)]
    pub min: Option<String>,
    #[serde(default)]
    pub min_closed: bool,
    #[serde(default)]
    pub max: Option<String>,
    #[serde(default)]
    pub max_closed: bool,
    #[serde(default)]
    pub exclude: Vec<String>,
}

impl ParamDoc {
    fn admits(&self, v: &Q) -> Result<bool> {
        if let Some(min) = &self.min {
            let m = parse_q(min)?;
            if *v < m || (*v == m && !self.min_closed) {
                return Ok(false);
            }
        }
        if let Some(max) = &self.max {
            let m = parse_q(max)?;
            if *v > m || (*v == m && !self.max_closed) {
                return Ok(false);
            }
        }
        for e in &self.exclude {
            if *v == parse_q(e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Three deterministic admissible sample values.
    fn samples(&self) -> Result<Vec<Q>> {
        let min = self.min.as_deref().map(parse_q).transpose()?;
        let max = self.max.as_deref().map(parse_q).transpose()?;
        let mut candidates: Vec<Q> = match (&min, &max) {
            (Some(a), Some(b)) => {
                let span = b - a;
                let mut c = vec![
                    a + &span * qr(1, 2),
                    a + &span * qr(1, 4),
                    a + &span * qr(3, 4),
                    a + &span * qr(1, 3),
                ];
                if self.min_closed {
                    c.insert(0, a.clone());
                }
                if self.max_closed {
                    c.push(b.clone());
                }
                c
            }
            (Some(a), None) => vec![a + qi(1), a + qi(2), a + qr(1, 2), a + qi(3), a + qr(3, 2)],
            (None, Some(b)) => vec![b - qi(1), b - qi(2), b - qr(1, 2), b - qi(3), b - qr(3, 2)],
            (None, None) => vec![qi(1), qi(-2), qr(1, 2), Q::zero()],
        };
        candidates.dedup();
        let mut out = Vec::new();
        for c in candidates {
            if self.admits(&c)? && !out.contains(&c) {
                out.push(c);
            }
            if out.len() == 3 {
                break;
            }
        }
        if out.is_empty() {
            return Err(Error::BadInput(format!(
                "parameter '{}' admits no sample values",
                self.name
            )));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketDoc {
    pub i: usize,
    pub j: usize,
    pub out: Vec<(usize, CoeffSpec)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDoc {
    pub idx: Vec<usize>,
    pub c: CoeffSpec,
}

/// Expected derivation family: parameter names and one matrix per parameter,
/// row-major rational strings. Linear families only (the classified tables
/// are all taken at alpha = 0).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub params: Vec<String>,
    pub matrices: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RowDoc {
    pub name: String,
    pub table: u8,
    pub provenance: String,
    pub dim: usize,
    #[serde(default)]
    pub params: Vec<ParamDoc>,
    pub brackets: Vec<BracketDoc>,
    pub omega: Vec<TermDoc>,
    #[serde(default)]
    pub j: Option<Vec<Vec<String>>>,
    pub family: FamilyDoc,
    #[serde(default)]
    pub strictly_almost_kahler: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OvandoData {
    pub source: String,
    pub rows: Vec<RowDoc>,
}

impl OvandoData {
    pub fn row(&self, name: &str) -> Option<&RowDoc> {
        self.rows.iter().find(|r| r.name == name)
    }
}

pub fn load(path: &Path) -> Result<OvandoData> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::MissingExternalData(format!("{}: {}", path.display(), e)))?;
    let data: OvandoData = serde_json::from_str(&text)
        .map_err(|e| Error::BadInput(format!("malformed data file {}: {}", path.display(), e)))?;
    for row in &data.rows {
        if row.provenance.trim().is_empty() {
            return Err(Error::BadInput(format!(
                "row '{}' is missing its provenance string",
                row.name
            )));
        }
        if row.table != 1 && row.table != 2 {
            return Err(Error::BadInput(format!(
                "row '{}' has unsupported table {}",
                row.name, row.table
            )));
        }
    }
    Ok(data)
}

pub fn infos(data: &OvandoData) -> Vec<EntryInfo> {
    data.rows
        .iter()
        .map(|r| EntryInfo {
            name: r.name.clone(),
            params: r
                .params
                .iter()
                .map(|p| p.name.clone())
                .chain(r.family.params.iter().cloned())
                .collect(),
            kind: "even",
            provenance: r.provenance.clone(),
            external: true,
        })
        .collect()
}

fn algebra_at(row: &RowDoc, values: &BTreeMap<String, Q>) -> Result<LieAlgebra> {
    let mut entries = Vec::new();
    for b in &row.brackets {
        if b.i == 0 || b.j == 0 {
            return Err(Error::BadInput("bracket indices are 1-based".into()));
        }
        let out: Result<Vec<(usize, Q)>> = b
            .out
            .iter()
            .map(|(k, spec)| Ok((*k - 1, spec.eval(values)?)))
            .collect();
        entries.push(BracketEntry {
            i: b.i - 1,
            j: b.j - 1,
            out: out?,
        });
    }
    LieAlgebra::new(row.dim, &entries)
}

fn omega_at(row: &RowDoc, values: &BTreeMap<String, Q>) -> Result<KForm> {
    let mut terms = Vec::new();
    for t in &row.omega {
        if t.idx.len() != 2 || t.idx.contains(&0) {
            return Err(Error::BadInput("omega terms need two 1-based indices".into()));
        }
        terms.push((vec![t.idx[0] - 1, t.idx[1] - 1], t.c.eval(values)?));
    }
    KForm::from_terms(row.dim, 2, terms)
}

fn j_matrix(row: &RowDoc) -> Result<Option<Endo>> {
    match &row.j {
        None => Ok(None),
        Some(rows) => {
            let n = row.dim;
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::BadInput(format!("row '{}': J must be {}x{}", row.name, n, n)));
            }
            let mut m = QMat::zeros(n, n);
            for (i, r) in rows.iter().enumerate() {
                for (j, s) in r.iter().enumerate() {
                    *m.at_mut(i, j) = parse_q(s)?;
                }
            }
            Ok(Some(Endo::from_mat(m)))
        }
    }
}

fn family_space(row: &RowDoc) -> Result<NamedFamily> {
    let n = row.dim;
    let mut basis = Vec::new();
    for p in &row.family.params {
        let rows = row.family.matrices.get(p).ok_or_else(|| {
            Error::BadInput(format!("row '{}': family parameter '{}' has no matrix", row.name, p))
        })?;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::BadInput(format!(
                "row '{}': family matrix '{}' must be {}x{}",
                row.name, p, n, n
            )));
        }
        let mut m = QMat::zeros(n, n);
        for (i, r) in rows.iter().enumerate() {
            for (j, s) in r.iter().enumerate() {
                *m.at_mut(i, j) = parse_q(s)?;
            }
        }
        basis.push(Endo::from_mat(m));
    }
    Ok(NamedFamily {
        name: if row.table == 1 { "ist" } else { "commuting_ist" }.to_string(),
        params: row.family.params.clone(),
        space: MatSpace {
            ambient_dim: n,
            particular: Endo::zero(n),
            basis,
        },
    })
}

/// Splits a parameter map into row parameters (validated against their
/// ranges, defaulting to the first sample) and family coefficients.
fn resolve_params(
    row: &RowDoc,
    given: &BTreeMap<String, Q>,
) -> Result<(BTreeMap<String, Q>, BTreeMap<String, Q>)> {
    let mut algebra_values = BTreeMap::new();
    for spec in &row.params {
        let v = match given.get(&spec.name) {
            Some(v) => v.clone(),
            None => spec.samples()?[0].clone(),
        };
        if !spec.admits(&v)? {
            return Err(Error::InadmissibleParams {
                entry: row.name.clone(),
                reason: format!("{} = {} is out of range", spec.name, v),
            });
        }
        algebra_values.insert(spec.name.clone(), v);
    }
    let mut family_values = BTreeMap::new();
    for p in &row.family.params {
        if let Some(v) = given.get(p) {
            family_values.insert(p.clone(), v.clone());
        }
    }
    for k in given.keys() {
        if !algebra_values.contains_key(k) && !family_values.contains_key(k) {
            return Err(Error::InadmissibleParams {
                entry: row.name.clone(),
                reason: format!("unknown parameter '{}'", k),
            });
        }
    }
    Ok((algebra_values, family_values))
}

pub fn get(data: &OvandoData, name: &str, params: &BTreeMap<String, Q>) -> Result<Instance> {
    let row = data
        .row(name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))?;
    let (algebra_values, family_values) = resolve_params(row, params)?;
    let h = algebra_at(row, &algebra_values)?;
    let omega = omega_at(row, &algebra_values)?;
    let family = family_space(row)?;
    let d = family.at(&family_values);
    let mut bundle = EvenBundle::new(h, omega.clone(), d)?;
    if let Some(j) = j_matrix(row)? {
        // The compatible metric is determined by h(x, Jy) = omega(x, y).
        let w = omega.gram()?;
        let metric = w.mul(&j.m).neg();
        bundle = bundle.with_kahler(j, metric)?;
    }
    let mut all_params = algebra_values;
    all_params.extend(family_values);
    Ok(Instance {
        name: row.name.clone(),
        params: all_params,
        object: CatalogObject::Even(bundle),
        families: vec![family],
        provenance: row.provenance.clone(),
    })
}

/// Sampled admissible parameter points for a row: three points for a single
/// parameter, a 2x2 grid for two, `{}` when the row has none.
fn sampled_cases(row: &RowDoc) -> Result<Vec<BTreeMap<String, Q>>> {
    match row.params.len() {
        0 => Ok(vec![BTreeMap::new()]),
        1 => {
            let spec = &row.params[0];
            Ok(spec
                .samples()?
                .into_iter()
                .map(|v| {
                    let mut m = BTreeMap::new();
                    m.insert(spec.name.clone(), v);
                    m
                })
                .collect())
        }
        _ => {
            let mut cases = vec![BTreeMap::new()];
            for spec in &row.params {
                let vals: Vec<Q> = spec.samples()?.into_iter().take(2).collect();
                let mut next = Vec::new();
                for case in &cases {
                    for v in &vals {
                        let mut m = case.clone();
                        m.insert(spec.name.clone(), v.clone());
                        next.push(m);
                    }
                }
                cases = next;
            }
            Ok(cases)
        }
    }
}

/// Golden verification of one row at every sampled parameter point: Jacobi,
/// symplectic sanity, and exact equality of the printed family with the
/// recomputed space. Table 2 rows additionally validate the Kaehler data
/// (including integrability of `J`); rows marked strictly almost Kaehler
/// check that the commuting subfamily at alpha = 0 is trivial.
pub fn verify_row(data: &OvandoData, table: u8, name: &str) -> Result<RowReport> {
    let row = data
        .row(name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))?;
    if row.table != table {
        return Err(Error::BadInput(format!(
            "row '{}' belongs to table {}, not {}",
            name, row.table, table
        )));
    }
    let family = family_space(row)?;
    let mut cases = Vec::new();
    for values in sampled_cases(row)? {
        let mut checks = Vec::new();
        let h = algebra_at(row, &values)?;
        let omega = omega_at(row, &values)?;
        checks.push(Check::of(
            "jacobi",
            h.jacobi_defect().is_empty(),
            "structure constants violate the Jacobi identity",
        ));
        let sympl = crate::geom::check_symplectic(&h, &omega)?;
        checks.push(Check::of(
            "symplectic",
            sympl.passed(crate::geom::FlagKey::Symplectic),
            "omega is not a symplectic form",
        ));
        let computed = if row.table == 1 {
            ist_derivation_space(&h, &omega, &Q::zero())?
        } else {
            let j = j_matrix(row)?.ok_or_else(|| {
                Error::BadInput(format!("table-2 row '{}' is missing J", row.name))
            })?;
            let w = omega.gram()?;
            let metric = w.mul(&j.m).neg();
            let kahler_ok = EvenBundle::new(h.clone(), omega.clone(), Endo::zero(row.dim))
                .and_then(|b| b.with_kahler(j.clone(), metric));
            checks.push(Check::of(
                "kahler_data",
                kahler_ok.is_ok(),
                format!("{:?}", kahler_ok.err()),
            ));
            let nj = nijenhuis(&h, &j)?;
            checks.push(Check::of(
                "j_integrable",
                nj.is_zero(),
                "N_J != 0 although the row claims a Kaehler structure",
            ));
            commuting_ist_derivation_space(&h, &omega, &j, &Q::zero())?
        };
        checks.push(Check::of(
            "family_matches",
            computed.same_space(&family.space),
            format!(
                "computed space has dimension {}, printed family {}",
                computed.dim(),
                family.space.dim()
            ),
        ));
        for (k, member) in family.space.basis.iter().enumerate() {
            checks.push(Check::of(
                format!("family_matrix_{}_is_derivation", family.params.get(k).cloned().unwrap_or_default()),
                h.is_derivation(member)?,
                "printed family matrix is not a derivation",
            ));
        }
        if row.table == 1 && row.strictly_almost_kahler {
            // Trivial commuting subfamily: only D = 0 both commutes with a
            // compatible J and is an i.s.t. at alpha = 0.
            let j = match j_matrix(row)? {
                Some(j) => j,
                None => compatible_acs(&omega)?.0,
            };
            let commuting = commuting_ist_derivation_space(&h, &omega, &j, &Q::zero())?;
            checks.push(Check::of(
                "kcosymplectic_only_trivial_derivation",
                commuting.dim() == 0 && commuting.particular.is_zero(),
                format!("commuting subfamily has dimension {}", commuting.dim()),
            ));
        }
        cases.push(RowCase {
            params: values,
            checks,
        });
    }
    Ok(RowReport {
        table,
        row: name.to_string(),
        cases,
    })
}
