//! Built-in catalog entries with fully written-out structure constants.

use super::{Check, CheckStatus, CatalogObject, EntryInfo, Instance, NamedFamily, VerifyReport};
use crate::correspond::{extend, extend_acm, EvenBundle};
use crate::error::Error;
use crate::forms::KForm;
use crate::geom::{
    alpha_for_derivation, classify, commuting_ist_derivation_space, detect_alpha,
    ist_derivation_space, AlphaResult, FlagKey,
};
use crate::lie::{BracketEntry, Endo, LieAlgebra, MatSpace};
use crate::linalg::QMat;
use crate::rat::{qi, qr, Q};
use crate::Result;
use num::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub const NAMES: [&str; 13] = [
    "abelian",
    "heisenberg",
    "heisenberg_literal",
    "unsolvable4",
    "filiform6",
    "filiform6_ist",
    "cosym7",
    "h4",
    "h4_family",
    "r2prime",
    "r2prime_family",
    "abelian4_kahler",
    "abelian4_kenmotsu",
];

pub fn is_builtin(name: &str) -> bool {
    NAMES.contains(&name)
}

pub fn infos() -> Vec<EntryInfo> {
    NAMES
        .iter()
        .map(|&name| EntryInfo {
            name: name.to_string(),
            params: param_names(name),
            kind: kind_of(name),
            provenance: provenance(name).to_string(),
            external: false,
        })
        .collect()
}

fn kind_of(name: &str) -> &'static str {
    match name {
        "abelian" | "heisenberg" | "heisenberg_literal" | "unsolvable4" => "algebra",
        "filiform6" | "filiform6_ist" | "h4" | "r2prime" | "abelian4_kahler" => "even",
        _ => "odd",
    }
}

fn param_names(name: &str) -> Vec<String> {
    let names: &[&str] = match name {
        "abelian" | "heisenberg" | "heisenberg_literal" => &["n"],
        "unsolvable4" => &["lambda1", "lambda2", "lambda3"],
        "filiform6" => &[],
        "filiform6_ist" => &["alpha", "p", "q", "r", "s"],
        "cosym7" => &["p", "q", "r", "s"],
        "h4" => &["eps"],
        "h4_family" => &["eps", "p", "q"],
        "r2prime" | "r2prime_family" => &["alpha", "p", "q"],
        "abelian4_kahler" | "abelian4_kenmotsu" => &["alpha", "p", "q", "r", "s"],
        _ => &[],
    };
    names.iter().map(|s| s.to_string()).collect()
}

fn provenance(name: &str) -> &'static str {
    match name {
        "abelian" => "abelian R^n",
        "heisenberg" => "Heisenberg h_{2n+1}, disjoint-pair presentation [e_{2i-1},e_{2i}]=e_{2n+1}",
        "heisenberg_literal" => {
            "consecutive-index variant [e_i,e_{i+1}]=e_{2n+1}, i<n; kept to document that it \
             differs from h_{2n+1} (see README)"
        }
        "unsolvable4" => "R + sl(2) / R + su(2): [e1,e2]=l3 e3, [e2,e3]=l1 e1, [e3,e1]=l2 e2",
        "filiform6" => "6D filiform nilpotent algebra with symplectic form X16 - X25 + X34",
        "filiform6_ist" => {
            "filiform6 with the derivation family making D + alpha I an infinitesimal \
             symplectic transformation"
        }
        "cosym7" => "7D cosymplectic extension of filiform6 by the 4-parameter i.s.t. family",
        "h4" => "h4 = R (x) h3 semidirect sum with Omega = eps(e12 - e34) and compatible J",
        "h4_family" => "5D almost coKaehler extensions of h4 by D e2 = p e1, D e4 = q e3",
        "r2prime" => "aff(C) with Omega = e14 + e23, J e3 = e2, J e4 = e1",
        "r2prime_family" => {
            "5D almost alpha-coKaehler extensions of aff(C) by the (alpha, p, q) family"
        }
        "abelian4_kahler" => "abelian R^4 with Omega = e31 + e42, J e1 = e3, J e2 = e4",
        "abelian4_kenmotsu" => {
            "5D alpha-Kenmotsu extensions of Kaehler R^4 by the commuting (alpha,p,q,r,s) family"
        }
        _ => "",
    }
}

struct Params<'a> {
    entry: &'a str,
    map: &'a BTreeMap<String, Q>,
}

impl<'a> Params<'a> {
    fn new(entry: &'a str, map: &'a BTreeMap<String, Q>) -> Result<Self> {
        let allowed = param_names(entry);
        for k in map.keys() {
            if !allowed.iter().any(|a| a == k) {
                return Err(Error::InadmissibleParams {
                    entry: entry.to_string(),
                    reason: format!("unknown parameter '{}'", k),
                });
            }
        }
        Ok(Params { entry, map })
    }

    fn get(&self, name: &str, default: Q) -> Q {
        self.map.get(name).cloned().unwrap_or(default)
    }

    fn int(&self, name: &str, default: i64, lo: i64, hi: i64) -> Result<usize> {
        let v = self.get(name, qi(default));
        if !v.is_integer() {
            return Err(self.bad(format!("{} must be an integer", name)));
        }
        let n: i64 = v
            .to_integer()
            .try_into()
            .map_err(|_| self.bad(format!("{} out of range", name)))?;
        if n < lo || n > hi {
            return Err(self.bad(format!("{} must lie in [{},{}]", name, lo, hi)));
        }
        Ok(n as usize)
    }

    fn bad(&self, reason: String) -> Error {
        Error::InadmissibleParams {
            entry: self.entry.to_string(),
            reason,
        }
    }
}

fn entry_from(i: usize, j: usize, out: Vec<(usize, Q)>) -> BracketEntry {
    BracketEntry { i, j, out }
}

fn endo_from(dim: usize, entries: &[(usize, usize, Q)]) -> Endo {
    let mut m = QMat::zeros(dim, dim);
    for (r, c, v) in entries {
        *m.at_mut(*r, *c) = v.clone();
    }
    Endo::from_mat(m)
}

fn basis_matrix(dim: usize, entries: &[(usize, usize, i64)]) -> Endo {
    endo_from(
        dim,
        &entries
            .iter()
            .map(|&(r, c, v)| (r, c, qi(v)))
            .collect::<Vec<_>>(),
    )
}

fn form(dim: usize, terms: &[(usize, usize, Q)]) -> KForm {
    KForm::from_terms(
        dim,
        2,
        terms
            .iter()
            .map(|(i, j, c)| (vec![*i, *j], c.clone()))
            .collect(),
    )
    .expect("valid 2-form terms")
}

// ---------------------------------------------------------------------------
// the algebras and their printed families
// ---------------------------------------------------------------------------

pub fn heisenberg(n: usize) -> LieAlgebra {
    let dim = 2 * n + 1;
    let entries: Vec<BracketEntry> = (0..n)
        .map(|i| entry_from(2 * i, 2 * i + 1, vec![(dim - 1, qi(1))]))
        .collect();
    LieAlgebra::new(dim, &entries).expect("valid")
}

fn heisenberg_literal(n: usize) -> LieAlgebra {
    let dim = 2 * n + 1;
    let entries: Vec<BracketEntry> = (0..n.saturating_sub(1))
        .map(|i| entry_from(i, i + 1, vec![(dim - 1, qi(1))]))
        .collect();
    LieAlgebra::new(dim, &entries).expect("valid")
}

fn unsolvable4(l1: &Q, l2: &Q, l3: &Q) -> LieAlgebra {
    LieAlgebra::new(
        4,
        &[
            entry_from(1, 2, vec![(3, l3.clone())]),
            entry_from(2, 3, vec![(1, l1.clone())]),
            entry_from(1, 3, vec![(2, -l2.clone())]),
        ],
    )
    .expect("valid")
    .with_labels(vec!["e0".into(), "e1".into(), "e2".into(), "e3".into()])
}

fn unsolvable4_der_family(l1: &Q, l2: &Q, l3: &Q) -> NamedFamily {
    let a = basis_matrix(4, &[(0, 0, 1)]);
    let b = endo_from(4, &[(1, 2, qi(1)), (2, 1, -(l2 / l1))]);
    let c = endo_from(4, &[(1, 3, qi(1)), (3, 1, -(l3 / l1))]);
    let d = endo_from(4, &[(2, 3, qi(1)), (3, 2, -(l3 / l2))]);
    NamedFamily {
        name: "derivations".into(),
        params: vec!["a".into(), "b".into(), "c".into(), "d".into()],
        space: MatSpace {
            ambient_dim: 4,
            particular: Endo::zero(4),
            basis: vec![a, b, c, d],
        },
    }
}

pub fn filiform6() -> LieAlgebra {
    LieAlgebra::new(
        6,
        &[
            entry_from(0, 1, vec![(2, qi(1))]),
            entry_from(0, 2, vec![(3, qi(1))]),
            entry_from(0, 3, vec![(4, qi(1))]),
            entry_from(0, 4, vec![(5, qi(1))]),
        ],
    )
    .expect("valid")
    .with_labels((1..=6).map(|i| format!("X{}", i)).collect())
}

pub fn filiform6_omega() -> KForm {
    form(
        6,
        &[(0, 5, qi(1)), (1, 4, qi(-1)), (2, 3, qi(1))],
    )
}

/// The full derivation shape of filiform6 on its 11 parameters, ordered
/// (d11, d22, d21, d31, d32, d41, d42, d51, d52, d61, d62).
pub fn filiform6_der_shape(v: &[Q; 11]) -> Endo {
    let [d11, d22, d21, d31, d32, d41, d42, d51, d52, d61, d62] = v.clone();
    let mut m = QMat::zeros(6, 6);
    *m.at_mut(0, 0) = d11.clone();
    *m.at_mut(1, 0) = d21;
    *m.at_mut(1, 1) = d22.clone();
    *m.at_mut(2, 0) = d31;
    *m.at_mut(2, 1) = d32.clone();
    *m.at_mut(2, 2) = &d11 + &d22;
    *m.at_mut(3, 0) = d41;
    *m.at_mut(3, 1) = d42.clone();
    *m.at_mut(3, 2) = d32.clone();
    *m.at_mut(3, 3) = qi(2) * &d11 + &d22;
    *m.at_mut(4, 0) = d51;
    *m.at_mut(4, 1) = d52.clone();
    *m.at_mut(4, 2) = d42.clone();
    *m.at_mut(4, 3) = d32.clone();
    *m.at_mut(4, 4) = qi(3) * &d11 + &d22;
    *m.at_mut(5, 0) = d61;
    *m.at_mut(5, 1) = d62;
    *m.at_mut(5, 2) = d52;
    *m.at_mut(5, 3) = d42;
    *m.at_mut(5, 4) = d32;
    *m.at_mut(5, 5) = qi(4) * &d11 + &d22;
    Endo::from_mat(m)
}

/// The i.s.t. family on filiform6: diagonal -2k alpha/7 plus the strictly
/// lower (p, q, r, s) pattern.
pub fn filiform6_ist_family(alpha: &Q) -> NamedFamily {
    let diag: Vec<Q> = (1..=6).map(|k| qr(-2 * k, 7) * alpha).collect();
    let particular = Endo::from_mat(QMat::diag(&diag));
    let p = basis_matrix(6, &[(1, 0, 1), (2, 1, 1), (3, 2, 1), (4, 3, 1), (5, 4, 1)]);
    let q = basis_matrix(6, &[(3, 0, 1), (4, 1, 1), (5, 2, 1)]);
    let r = basis_matrix(6, &[(4, 0, 1), (5, 1, -1)]);
    let s = basis_matrix(6, &[(5, 0, 1)]);
    NamedFamily {
        name: "ist".into(),
        params: vec!["p".into(), "q".into(), "r".into(), "s".into()],
        space: MatSpace {
            ambient_dim: 6,
            particular,
            basis: vec![p, q, r, s],
        },
    }
}

pub fn h4_algebra() -> LieAlgebra {
    LieAlgebra::new(
        4,
        &[
            entry_from(0, 1, vec![(2, qi(1))]),
            entry_from(2, 3, vec![(2, qi(-1))]),
            entry_from(0, 3, vec![(0, qr(-1, 2))]),
            entry_from(1, 3, vec![(0, qi(-1)), (1, qr(-1, 2))]),
        ],
    )
    .expect("valid")
}

fn h4_omega(eps: &Q) -> KForm {
    form(4, &[(0, 1, eps.clone()), (2, 3, -eps.clone())])
}

/// `J e1 = -eps e2, J e3 = eps e4`; the sign keeps the induced metric
/// positive definite for both values of eps.
fn h4_j(eps: &Q) -> Endo {
    endo_from(
        4,
        &[
            (1, 0, -eps.clone()),
            (0, 1, eps.clone()),
            (3, 2, eps.clone()),
            (2, 3, -eps.clone()),
        ],
    )
}

fn h4_ist_family() -> NamedFamily {
    NamedFamily {
        name: "ist".into(),
        params: vec!["p".into(), "q".into()],
        space: MatSpace {
            ambient_dim: 4,
            particular: Endo::zero(4),
            basis: vec![basis_matrix(4, &[(0, 1, 1)]), basis_matrix(4, &[(2, 3, 1)])],
        },
    }
}

pub fn r2prime_algebra() -> LieAlgebra {
    LieAlgebra::new(
        4,
        &[
            entry_from(0, 2, vec![(2, qi(1))]),
            entry_from(0, 3, vec![(3, qi(1))]),
            entry_from(1, 2, vec![(3, qi(1))]),
            entry_from(1, 3, vec![(2, qi(-1))]),
        ],
    )
    .expect("valid")
}

pub fn r2prime_omega() -> KForm {
    form(4, &[(0, 3, qi(1)), (1, 2, qi(1))])
}

fn r2prime_j() -> Endo {
    basis_matrix(4, &[(1, 2, 1), (0, 3, 1), (2, 1, -1), (3, 0, -1)])
}

/// `D e1 = p e3 + q e4, D e2 = -q e3 + p e4, D e3 = -2a e3, D e4 = -2a e4`.
pub fn r2prime_ist_family(alpha: &Q) -> NamedFamily {
    let particular = endo_from(
        4,
        &[(2, 2, qi(-2) * alpha), (3, 3, qi(-2) * alpha)],
    );
    NamedFamily {
        name: "ist".into(),
        params: vec!["p".into(), "q".into()],
        space: MatSpace {
            ambient_dim: 4,
            particular,
            basis: vec![
                basis_matrix(4, &[(2, 0, 1), (3, 1, 1)]),
                basis_matrix(4, &[(3, 0, 1), (2, 1, -1)]),
            ],
        },
    }
}

fn abelian4_omega() -> KForm {
    // e31 + e42
    form(4, &[(0, 2, qi(-1)), (1, 3, qi(-1))])
}

fn abelian4_j() -> Endo {
    basis_matrix(4, &[(2, 0, 1), (3, 1, 1), (0, 2, -1), (1, 3, -1)])
}

/// The commuting family with diagonal -alpha and parameters (p, q, r, s).
pub fn abelian4_commuting_family(alpha: &Q) -> NamedFamily {
    let particular = Endo::from_mat(QMat::diag(&vec![-alpha.clone(); 4]));
    let p = basis_matrix(4, &[(0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)]);
    let q = basis_matrix(4, &[(0, 2, 1), (2, 0, -1)]);
    let r = basis_matrix(4, &[(3, 0, -1), (2, 1, -1), (1, 2, 1), (0, 3, 1)]);
    let s = basis_matrix(4, &[(3, 1, -1), (1, 3, 1)]);
    NamedFamily {
        name: "commuting_ist".into(),
        params: vec!["p".into(), "q".into(), "r".into(), "s".into()],
        space: MatSpace {
            ambient_dim: 4,
            particular,
            basis: vec![p, q, r, s],
        },
    }
}

// ---------------------------------------------------------------------------
// instantiation
// ---------------------------------------------------------------------------

pub fn get(name: &str, params: &BTreeMap<String, Q>) -> Result<Instance> {
    let p = Params::new(name, params)?;
    let object_and_families: (CatalogObject, Vec<NamedFamily>) = match name {
        "abelian" => {
            let n = p.int("n", 3, 1, 12)?;
            (CatalogObject::Algebra(LieAlgebra::abelian(n)), vec![])
        }
        "heisenberg" => {
            let n = p.int("n", 2, 1, 5)?;
            (CatalogObject::Algebra(heisenberg(n)), vec![])
        }
        "heisenberg_literal" => {
            let n = p.int("n", 2, 2, 5)?;
            (CatalogObject::Algebra(heisenberg_literal(n)), vec![])
        }
        "unsolvable4" => {
            let l1 = p.get("lambda1", qi(1));
            let l2 = p.get("lambda2", qi(1));
            let l3 = p.get("lambda3", qi(1));
            if l1.is_zero() || l2.is_zero() || l3.is_zero() {
                return Err(p.bad("lambda1*lambda2*lambda3 must be nonzero".into()));
            }
            (
                CatalogObject::Algebra(unsolvable4(&l1, &l2, &l3)),
                vec![unsolvable4_der_family(&l1, &l2, &l3)],
            )
        }
        "filiform6" => {
            let h = filiform6();
            let bundle = EvenBundle::new(h.clone(), filiform6_omega(), Endo::zero(6))?;
            (
                CatalogObject::Even(bundle),
                vec![
                    NamedFamily {
                        name: "derivations".into(),
                        params: (0..11).map(|i| format!("d{}", i)).collect(),
                        space: h.derivation_space(),
                    },
                    filiform6_ist_family(&Q::zero()),
                ],
            )
        }
        "filiform6_ist" => {
            let alpha = p.get("alpha", Q::zero());
            let fam = filiform6_ist_family(&alpha);
            let d = fam.at(params);
            let bundle = EvenBundle::new(filiform6(), filiform6_omega(), d)?;
            (CatalogObject::Even(bundle), vec![fam])
        }
        "cosym7" => {
            let fam = filiform6_ist_family(&Q::zero());
            let d = fam.at(params);
            let bundle = EvenBundle::new(filiform6(), filiform6_omega(), d)?;
            (CatalogObject::Odd(extend(&bundle)?), vec![fam])
        }
        "h4" | "h4_family" => {
            let eps = p.get("eps", qi(1));
            if eps != qi(1) && eps != qi(-1) {
                return Err(p.bad("eps must be 1 or -1".into()));
            }
            let fam = h4_ist_family();
            let d = fam.at(params);
            if name == "h4" {
                let bundle = EvenBundle::new(h4_algebra(), h4_omega(&eps), d)?
                    .with_kahler(h4_j(&eps), QMat::identity(4))?;
                (CatalogObject::Even(bundle), vec![fam])
            } else {
                let odd = extend_acm(h4_algebra(), h4_j(&eps), QMat::identity(4), d)?;
                (CatalogObject::Odd(odd), vec![fam])
            }
        }
        "r2prime" | "r2prime_family" => {
            let alpha = p.get("alpha", Q::zero());
            let fam = r2prime_ist_family(&alpha);
            let d = fam.at(params);
            if name == "r2prime" {
                let bundle = EvenBundle::new(r2prime_algebra(), r2prime_omega(), d)?
                    .with_kahler(r2prime_j(), QMat::identity(4))?;
                (CatalogObject::Even(bundle), vec![fam])
            } else {
                let odd = extend_acm(r2prime_algebra(), r2prime_j(), QMat::identity(4), d)?;
                (CatalogObject::Odd(odd), vec![fam])
            }
        }
        "abelian4_kahler" | "abelian4_kenmotsu" => {
            let alpha = p.get("alpha", Q::zero());
            let fam = abelian4_commuting_family(&alpha);
            let d = fam.at(params);
            let h = LieAlgebra::abelian(4);
            if name == "abelian4_kahler" {
                let bundle = EvenBundle::new(h, abelian4_omega(), d)?
                    .with_kahler(abelian4_j(), QMat::identity(4))?;
                (CatalogObject::Even(bundle), vec![fam])
            } else {
                let odd = extend_acm(h, abelian4_j(), QMat::identity(4), d)?;
                (CatalogObject::Odd(odd), vec![fam])
            }
        }
        _ => return Err(Error::UnknownEntry(name.to_string())),
    };
    Ok(Instance {
        name: name.to_string(),
        params: params.clone(),
        object: object_and_families.0,
        families: object_and_families.1,
        provenance: provenance(name).to_string(),
    })
}

// ---------------------------------------------------------------------------
// verification
// ---------------------------------------------------------------------------

/// Five deterministic pseudo-random sample points for a family.
fn sample_points(nparams: usize, seed: u64) -> Vec<Vec<Q>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..5)
        .map(|_| {
            (0..nparams)
                .map(|_| qr(rng.gen_range(-6..=6), *[1, 2, 3].iter().nth(rng.gen_range(0..3)).unwrap()))
                .collect()
        })
        .collect()
}

pub fn verify(name: &str, params: &BTreeMap<String, Q>) -> Result<VerifyReport> {
    let inst = get(name, params)?;
    let mut checks = Vec::new();
    let g = inst.object.algebra();
    checks.push(Check::of(
        "jacobi",
        g.jacobi_defect().is_empty(),
        "nonempty Jacobi defect",
    ));

    match &inst.object {
        CatalogObject::Algebra(g) => {
            // Family members must be derivations; where the family is the
            // full derivation space the two must agree exactly.
            for fam in &inst.families {
                let der = g.derivation_space();
                for (k, pt) in sample_points(fam.params.len(), 0xC05).into_iter().enumerate() {
                    let member = fam.space.at(&pt);
                    checks.push(Check::of(
                        format!("{}_member_{}", fam.name, k),
                        g.is_derivation(&member)? && der.contains(&member),
                        "family member is not a derivation",
                    ));
                }
                if fam.name == "derivations" {
                    checks.push(Check::of(
                        "derivation_space_equals_family",
                        der.same_space(&fam.space),
                        format!(
                            "computed Der has dimension {}, family has {}",
                            der.dim(),
                            fam.space.dim()
                        ),
                    ));
                }
            }
        }
        CatalogObject::Even(bundle) => {
            let sympl = crate::geom::check_symplectic(&bundle.h, &bundle.omega)?;
            checks.push(Check::of(
                "symplectic",
                sympl.passed(FlagKey::Symplectic),
                "omega is not symplectic",
            ));
            let alpha = alpha_for_derivation(&bundle.omega, &bundle.d)?;
            if let Some(a) = &alpha {
                // The extension must detect exactly this alpha.
                let odd = extend(bundle)?;
                let det = detect_alpha(&odd.g, &odd.pair)?;
                checks.push(Check::of(
                    "extension_detects_alpha",
                    det == AlphaResult::Alpha(a.clone()),
                    format!("expected alpha {}, detected {:?}", a, det),
                ));
            }
            for fam in &inst.families {
                verify_family_against_computed(bundle, fam, &mut checks)?;
            }
        }
        CatalogObject::Odd(odd) => {
            if let Some(s) = &odd.acm {
                let report = classify(&odd.g, s)?;
                expected_flag_checks(name, params, &report, &mut checks);
                let reduced = crate::correspond::reduce(odd)?;
                for fam in &inst.families {
                    verify_family_against_computed(&reduced.0, fam, &mut checks)?;
                }
                return Ok(VerifyReport {
                    entry: inst.name,
                    params: inst.params,
                    checks,
                    classification: Some(report),
                });
            } else {
                let det = detect_alpha(&odd.g, &odd.pair)?;
                checks.push(Check::of(
                    "alpha_defined",
                    matches!(det, AlphaResult::Alpha(_)),
                    format!("{:?}", det),
                ));
                if name == "cosym7" {
                    checks.push(Check::of(
                        "cosymplectic",
                        det == AlphaResult::Alpha(Q::zero()),
                        format!("{:?}", det),
                    ));
                }
            }
        }
    }

    Ok(VerifyReport {
        entry: inst.name,
        params: inst.params,
        checks,
        classification: None,
    })
}

/// The stored family must coincide with the space computed from scratch:
/// i.s.t. families against [`ist_derivation_space`], commuting families
/// against [`commuting_ist_derivation_space`], full derivation spaces
/// against [`LieAlgebra::derivation_space`].
fn verify_family_against_computed(
    bundle: &EvenBundle,
    fam: &NamedFamily,
    checks: &mut Vec<Check>,
) -> Result<()> {
    let alpha = family_alpha(bundle, fam)?;
    let computed = match fam.name.as_str() {
        "derivations" => bundle.h.derivation_space(),
        "ist" => ist_derivation_space(&bundle.h, &bundle.omega, &alpha)?,
        "commuting_ist" => {
            let j = &bundle
                .kahler
                .as_ref()
                .ok_or_else(|| Error::PreconditionFailed("commuting family needs J".into()))?
                .j;
            commuting_ist_derivation_space(&bundle.h, &bundle.omega, j, &alpha)?
        }
        other => {
            checks.push(Check {
                name: format!("family_{}", other),
                status: CheckStatus::Skipped("no computed counterpart".into()),
            });
            return Ok(());
        }
    };
    checks.push(Check::of(
        format!("{}_space_matches", fam.name),
        computed.same_space(&fam.space),
        format!(
            "computed dimension {} vs stored {}",
            computed.dim(),
            fam.space.dim()
        ),
    ));
    for (k, pt) in sample_points(fam.params.len(), 0x5EED).into_iter().enumerate() {
        let member = fam.space.at(&pt);
        checks.push(Check::of(
            format!("{}_member_{}", fam.name, k),
            computed.contains(&member) && bundle.h.is_derivation(&member)?,
            "sampled member escapes the computed space",
        ));
    }
    Ok(())
}

/// The alpha a stored family was built for: recovered from its particular
/// part (its basis is alpha-independent).
fn family_alpha(bundle: &EvenBundle, fam: &NamedFamily) -> Result<Q> {
    if fam.space.particular.is_zero() {
        return Ok(Q::zero());
    }
    alpha_for_derivation(&bundle.omega, &fam.space.particular)?
        .ok_or_else(|| Error::PreconditionFailed("family particular has no alpha".into()))
}

fn expected_flag_checks(
    name: &str,
    params: &BTreeMap<String, Q>,
    report: &crate::geom::StructureReport,
    checks: &mut Vec<Check>,
) {
    let get = |k: &str| params.get(k).cloned().unwrap_or_else(Q::zero);
    let alpha = get("alpha");
    let pq_zero = get("p").is_zero() && get("q").is_zero();
    checks.push(Check::of(
        "almost_alpha_cokahler",
        report.passed(FlagKey::AlmostAlphaCoKahler),
        "structure is not almost alpha-coKaehler",
    ));
    match name {
        "h4_family" => {
            checks.push(Check::of(
                "alpha_is_zero",
                report.alpha == Some(Q::zero()),
                format!("alpha = {:?}", report.alpha),
            ));
            checks.push(Check::of(
                "never_normal",
                report.status(FlagKey::Normal).failed(),
                "h4 extensions must not be normal",
            ));
            checks.push(Check::of(
                "k_cosymplectic_iff_trivial",
                report.passed(FlagKey::KCosymplectic) == pq_zero,
                "K-cosymplectic exactly when p = q = 0",
            ));
        }
        "r2prime_family" => {
            checks.push(Check::of(
                "alpha_matches",
                report.alpha == Some(alpha.clone()),
                format!("alpha = {:?}", report.alpha),
            ));
            checks.push(Check::of(
                "never_normal",
                report.status(FlagKey::Normal).failed(),
                "aff(C) extensions must not be normal",
            ));
            let trivial = pq_zero && alpha.is_zero();
            if let Some(k) = &report.killing {
                checks.push(Check::of(
                    "phi_invariant_iff_trivial",
                    k.phi_invariant == trivial,
                    "L_xi phi = 0 exactly when p = q = alpha = 0",
                ));
            }
        }
        "abelian4_kenmotsu" => {
            checks.push(Check::of(
                "alpha_matches",
                report.alpha == Some(alpha.clone()),
                format!("alpha = {:?}", report.alpha),
            ));
            checks.push(Check::of(
                "normal",
                report.passed(FlagKey::Normal),
                "Kenmotsu-type structures must be normal",
            ));
            if let Some(k) = &report.killing {
                checks.push(Check::of(
                    "conformal_killing",
                    k.all_equal() && k.phi_invariant,
                    "the four equivalent conditions must all hold",
                ));
            }
            checks.push(Check::of(
                "k_cosymplectic_iff_alpha_zero",
                report.passed(FlagKey::KCosymplectic) == alpha.is_zero(),
                "K-cosymplectic exactly when alpha = 0",
            ));
        }
        _ => {}
    }
}
