//! JSON documents for algebras, forms, bundles, spaces and reports.
//!
//! Rationals travel as `"p/q"` strings, never floats; the one exception is
//! the polarization output, rendered in decimal with 12 significant digits.
//! Basis indices in documents are 1-based to match the usual labeling
//! `e1..en`; extensions carry `"base_index": 0` so their adjoined direction
//! keeps the index 0 (labels `e0`, `X0`, ...). Emission goes through
//! `serde_json::Value`, whose map is ordered, so output is byte-stable with
//! sorted keys.

use crate::catalog::{CheckStatus, RowReport, VerifyReport};
use crate::correspond::{EvenBundle, IsoReport, KahlerData, OddBundle};
use crate::error::Error;
use crate::forms::KForm;
use crate::geom::{AcmStructure, AlphaResult, FlagStatus, PolarizedAcm, StructureReport};
use crate::lie::{BracketEntry, Endo, LieAlgebra, MatSpace, Vector};
use crate::linalg::QMat;
use crate::rat::{fmt_q, parse_q, Q};
use crate::Result;
use num::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Index of the first basis vector in `brackets` (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_index: Option<usize>,
    pub brackets: Vec<BracketTermDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketTermDoc {
    pub i: usize,
    pub j: usize,
    pub out: Vec<(usize, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormDoc {
    pub degree: usize,
    pub terms: Vec<FormTermDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormTermDoc {
    pub idx: Vec<usize>,
    pub c: String,
}

/// One document for both bundle kinds: odd bundles carry `eta` (and
/// optionally `phi`/`xi`/`metric`), even bundles carry `derivation` (and
/// optionally `j`/`metric`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleDoc {
    pub algebra: AlgebraDoc,
    pub omega: FormDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<FormDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<String>>>,
}

/// A parsed bundle of either kind.
#[derive(Debug, Clone)]
pub enum LoadedBundle {
    Even(EvenBundle),
    Odd(OddBundle),
}

// --- algebra ---------------------------------------------------------------

pub fn algebra_to_doc(g: &LieAlgebra, base_index: usize) -> AlgebraDoc {
    let dim = g.dim();
    let mut brackets = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let v = g.bracket_basis(i, j);
            if v.is_zero() {
                continue;
            }
            let out = v
                .0
                .iter()
                .enumerate()
                .filter(|(_, q)| !q.is_zero())
                .map(|(k, q)| (k + base_index, fmt_q(q)))
                .collect();
            brackets.push(BracketTermDoc {
                i: i + base_index,
                j: j + base_index,
                out,
            });
        }
    }
    AlgebraDoc {
        dim,
        labels: Some(g.labels().to_vec()),
        base_index: if base_index == 1 { None } else { Some(base_index) },
        brackets,
    }
}

pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<LieAlgebra> {
    let base = doc.base_index.unwrap_or(1);
    let fix = |idx: usize| -> Result<usize> {
        idx.checked_sub(base).ok_or(Error::IndexOutOfRange {
            index: idx,
            dim: doc.dim,
        })
    };
    let mut entries = Vec::new();
    for b in &doc.brackets {
        let out: Result<Vec<(usize, Q)>> = b
            .out
            .iter()
            .map(|(k, s)| Ok((fix(*k)?, parse_q(s)?)))
            .collect();
        entries.push(BracketEntry {
            i: fix(b.i)?,
            j: fix(b.j)?,
            out: out?,
        });
    }
    let mut g = LieAlgebra::new(doc.dim, &entries)?;
    if let Some(labels) = &doc.labels {
        if labels.len() != doc.dim {
            return Err(Error::BadInput("labels length differs from dim".into()));
        }
        g = g.with_labels(labels.clone());
    }
    Ok(g)
}

// --- forms -------------------------------------------------------------------

pub fn form_to_doc(f: &KForm, base_index: usize) -> FormDoc {
    FormDoc {
        degree: f.degree(),
        terms: f
            .terms()
            .map(|(idx, c)| FormTermDoc {
                idx: idx.iter().map(|i| i + base_index).collect(),
                c: fmt_q(c),
            })
            .collect(),
    }
}

pub fn form_from_doc(doc: &FormDoc, dim: usize, base_index: usize) -> Result<KForm> {
    let mut raw = Vec::new();
    for t in &doc.terms {
        let idx: Result<Vec<usize>> = t
            .idx
            .iter()
            .map(|&i| {
                i.checked_sub(base_index)
                    .ok_or(Error::IndexOutOfRange { index: i, dim })
            })
            .collect();
        raw.push((idx?, parse_q(&t.c)?));
    }
    KForm::from_terms(dim, doc.degree, raw)
}

// --- matrices and vectors -----------------------------------------------------

pub fn mat_to_rows(m: &QMat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(fmt_q).collect())
        .collect()
}

pub fn mat_from_rows(rows: &[Vec<String>]) -> Result<QMat> {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    if rows.iter().any(|x| x.len() != c) {
        return Err(Error::BadInput("ragged matrix rows".into()));
    }
    let mut m = QMat::zeros(r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            *m.at_mut(i, j) = parse_q(s)?;
        }
    }
    Ok(m)
}

pub fn vec_to_strings(v: &Vector) -> Vec<String> {
    v.0.iter().map(fmt_q).collect()
}

pub fn vec_from_strings(v: &[String]) -> Result<Vector> {
    Ok(Vector(v.iter().map(|s| parse_q(s)).collect::<Result<_>>()?))
}

// --- bundles -------------------------------------------------------------------

pub fn even_bundle_to_doc(e: &EvenBundle) -> BundleDoc {
    BundleDoc {
        algebra: algebra_to_doc(&e.h, 1),
        omega: form_to_doc(&e.omega, 1),
        eta: None,
        derivation: Some(mat_to_rows(&e.d.m)),
        j: e.kahler.as_ref().map(|k| mat_to_rows(&k.j.m)),
        phi: None,
        xi: None,
        metric: e.kahler.as_ref().map(|k| mat_to_rows(&k.metric)),
    }
}

pub fn odd_bundle_to_doc(o: &OddBundle) -> BundleDoc {
    BundleDoc {
        algebra: algebra_to_doc(&o.g, 0),
        omega: form_to_doc(&o.pair.omega, 0),
        eta: Some(form_to_doc(&o.pair.eta, 0)),
        derivation: None,
        j: None,
        phi: o.acm.as_ref().map(|s| mat_to_rows(&s.phi.m)),
        xi: o.acm.as_ref().map(|s| vec_to_strings(&s.xi)),
        metric: o.acm.as_ref().map(|s| mat_to_rows(&s.metric)),
    }
}

pub fn bundle_from_doc(doc: &BundleDoc) -> Result<LoadedBundle> {
    let base = doc.algebra.base_index.unwrap_or(1);
    let g = algebra_from_doc(&doc.algebra)?;
    let dim = g.dim();
    let omega = form_from_doc(&doc.omega, dim, base)?;
    match (&doc.eta, &doc.derivation) {
        (Some(eta_doc), None) => {
            let eta = form_from_doc(eta_doc, dim, base)?;
            let mut bundle = OddBundle::new(g, eta, omega)?;
            if let (Some(phi), Some(xi), Some(metric)) = (&doc.phi, &doc.xi, &doc.metric) {
                let s = AcmStructure {
                    phi: Endo::from_mat(mat_from_rows(phi)?),
                    xi: vec_from_strings(xi)?,
                    eta: bundle.pair.eta.clone(),
                    metric: mat_from_rows(metric)?,
                };
                bundle = bundle.with_acm(s)?;
            }
            Ok(LoadedBundle::Odd(bundle))
        }
        (None, Some(derivation)) => {
            let d = Endo::from_mat(mat_from_rows(derivation)?);
            let mut bundle = EvenBundle::new(g, omega, d)?;
            if let (Some(j), Some(metric)) = (&doc.j, &doc.metric) {
                bundle = bundle
                    .with_kahler(Endo::from_mat(mat_from_rows(j)?), mat_from_rows(metric)?)?;
            }
            Ok(LoadedBundle::Even(bundle))
        }
        (Some(_), Some(_)) => Err(Error::BadInput(
            "bundle has both 'eta' and 'derivation'; pick one kind".into(),
        )),
        (None, None) => Err(Error::BadInput(
            "bundle needs 'eta' (odd) or 'derivation' (even)".into(),
        )),
    }
}

pub fn bundle_from_str(text: &str) -> Result<LoadedBundle> {
    let doc: BundleDoc =
        serde_json::from_str(text).map_err(|e| Error::BadInput(format!("bundle JSON: {}", e)))?;
    bundle_from_doc(&doc)
}

pub fn algebra_from_str(text: &str) -> Result<LieAlgebra> {
    let doc: AlgebraDoc =
        serde_json::from_str(text).map_err(|e| Error::BadInput(format!("algebra JSON: {}", e)))?;
    algebra_from_doc(&doc)
}

// --- reports -------------------------------------------------------------------

fn sorted(v: Value) -> Value {
    // serde_json's Map is a BTreeMap, so building a Value sorts object keys.
    v
}

pub fn structure_report_to_value(r: &StructureReport) -> Value {
    let mut flags = serde_json::Map::new();
    for (key, status) in &r.flags {
        let v = match status {
            FlagStatus::NotApplicable => json!("n/a"),
            FlagStatus::Pass => json!(true),
            FlagStatus::Fail(w) => json!({ "pass": false, "witness": {"at": w.at, "value": w.value} }),
        };
        flags.insert(key.name().to_string(), v);
    }
    let killing = r.killing.as_ref().map(|k| {
        json!({
            "conformal_killing_metric": k.conformal_killing_metric,
            "skew_adjoint": k.skew_adjoint,
            "commutes_with_j": k.commutes_with_j,
            "phi_invariant": k.phi_invariant,
        })
    });
    sorted(json!({
        "alpha": r.alpha.as_ref().map(fmt_q),
        "flags": Value::Object(flags),
        "killing_conditions": killing,
    }))
}

pub fn alpha_result_to_value(r: &AlphaResult) -> Value {
    match r {
        AlphaResult::Alpha(a) => json!({"alpha": fmt_q(a)}),
        AlphaResult::NotClosed(w) => {
            json!({"alpha": null, "reason": "eta_not_closed", "witness": {"at": w.at, "value": w.value}})
        }
        AlphaResult::NoAlpha(w) => {
            json!({"alpha": null, "reason": "no_single_alpha", "witness": {"at": w.at, "value": w.value}})
        }
    }
}

pub fn matspace_to_value(s: &MatSpace) -> Value {
    sorted(json!({
        "ambient_dim": s.ambient_dim,
        "dimension": s.dim(),
        "particular": mat_to_rows(&s.particular.m),
        "basis": s.basis.iter().map(|b| mat_to_rows(&b.m)).collect::<Vec<_>>(),
    }))
}

pub fn iso_report_to_value(r: &IsoReport) -> Value {
    let conditions: Vec<Value> = r
        .conditions
        .iter()
        .map(|c| match &c.status {
            Ok(()) => json!({"name": c.name, "pass": true}),
            Err(w) => json!({"name": c.name, "pass": false, "witness": {"at": w.at, "value": w.value}}),
        })
        .collect();
    sorted(json!({"pass": r.passed(), "conditions": conditions}))
}

fn check_to_value(name: &str, status: &CheckStatus) -> Value {
    match status {
        CheckStatus::Pass => json!({"name": name, "status": "pass"}),
        CheckStatus::Fail(why) => json!({"name": name, "status": "fail", "detail": why}),
        CheckStatus::Skipped(why) => json!({"name": name, "status": "skipped", "detail": why}),
    }
}

pub fn verify_report_to_value(r: &VerifyReport) -> Value {
    sorted(json!({
        "entry": r.entry,
        "params": r.params.iter().map(|(k, v)| (k.clone(), fmt_q(v))).collect::<std::collections::BTreeMap<_,_>>(),
        "pass": r.passed(),
        "checks": r.checks.iter().map(|c| check_to_value(&c.name, &c.status)).collect::<Vec<_>>(),
        "classification": r.classification.as_ref().map(structure_report_to_value),
    }))
}

pub fn row_report_to_value(r: &RowReport) -> Value {
    sorted(json!({
        "table": r.table,
        "row": r.row,
        "pass": r.passed(),
        "cases": r.cases.iter().map(|c| json!({
            "params": c.params.iter().map(|(k, v)| (k.clone(), fmt_q(v))).collect::<std::collections::BTreeMap<_,_>>(),
            "checks": c.checks.iter().map(|ch| check_to_value(&ch.name, &ch.status)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    }))
}

/// Floats with 12 significant digits, stable across platforms.
pub fn fmt_f64_12(x: f64) -> String {
    format!("{:.11e}", x)
}

pub fn polarized_to_value(p: &PolarizedAcm) -> Value {
    let rows = |m: &Vec<Vec<f64>>| -> Vec<Vec<String>> {
        m.iter()
            .map(|r| r.iter().map(|&x| fmt_f64_12(x)).collect())
            .collect()
    };
    sorted(json!({
        "phi": rows(&p.phi),
        "xi": p.xi.iter().map(|&x| fmt_f64_12(x)).collect::<Vec<_>>(),
        "eta": p.eta.iter().map(|&x| fmt_f64_12(x)).collect::<Vec<_>>(),
        "metric": rows(&p.metric),
        "residual": fmt_f64_12(p.residual),
    }))
}

/// Canonical pretty text for any emitted value.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[allow(dead_code)]
fn kahler_unused(_k: &KahlerData) {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspond::{extend, EvenBundle};
    use crate::rat::qi;

    fn sample_even() -> EvenBundle {
        let h = crate::catalog::Catalog::builtin();
        let inst = h.get("h4", &Default::default()).unwrap();
        match inst.object {
            crate::catalog::CatalogObject::Even(e) => e,
            _ => unreachable!(),
        }
    }

    #[test]
    fn algebra_roundtrip_via_doc() {
        let e = sample_even();
        let doc = algebra_to_doc(&e.h, 1);
        let back = algebra_from_doc(&doc).unwrap();
        assert_eq!(back, e.h);
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(algebra_from_str(&text).unwrap(), e.h);
    }

    #[test]
    fn bundle_roundtrip_even_and_odd() {
        let e = sample_even();
        let doc = even_bundle_to_doc(&e);
        match bundle_from_doc(&doc).unwrap() {
            LoadedBundle::Even(back) => {
                assert_eq!(back.h, e.h);
                assert_eq!(back.omega, e.omega);
                assert_eq!(back.d, e.d);
                assert!(back.kahler.is_some());
            }
            _ => panic!("expected even"),
        }

        let o = extend(&e).unwrap();
        let doc = odd_bundle_to_doc(&o);
        assert_eq!(doc.algebra.base_index, Some(0));
        match bundle_from_doc(&doc).unwrap() {
            LoadedBundle::Odd(back) => {
                assert_eq!(back.g, o.g);
                assert_eq!(back.pair.omega, o.pair.omega);
                assert!(back.acm.is_some());
            }
            _ => panic!("expected odd"),
        }
    }

    #[test]
    fn sorted_keys_and_rational_strings() {
        let e = sample_even();
        let o = extend(&e).unwrap();
        let report = crate::geom::classify(&o.g, o.acm.as_ref().unwrap()).unwrap();
        let v = structure_report_to_value(&report);
        let text = to_pretty(&v);
        // keys sorted: "alpha" must appear before "flags"
        let a = text.find("\"alpha\"").unwrap();
        let f = text.find("\"flags\"").unwrap();
        assert!(a < f);
        assert!(text.contains("\"alpha\": \"0\""));
    }

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_f64_12(1.0), "1.00000000000e0");
        assert_eq!(fmt_f64_12(-0.5), "-5.00000000000e-1");
    }

    #[test]
    fn rejects_ambiguous_bundles() {
        let e = sample_even();
        let mut doc = even_bundle_to_doc(&e);
        doc.eta = Some(FormDoc {
            degree: 1,
            terms: vec![],
        });
        assert!(bundle_from_doc(&doc).is_err());
        let _ = qi(0);
    }
}
