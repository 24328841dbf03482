//! The extension/reduction dictionary and isomorphism verification.
//!
//! An even-dimensional algebra with a nondegenerate 2-form and a derivation
//! extends to an odd-dimensional algebra with an almost cosymplectic pair
//! whose 1-form is closed (`[xi, x] := Dx`, `eta = e^0`, `omega|_h = Omega`);
//! reduction inverts this by restricting to `ker eta` with `D = ad_xi`. The
//! same dictionary transports almost contact metric data to and from almost
//! Kaehler data, and isomorphisms of the even-dimensional bundles lift
//! block-diagonally to the odd-dimensional ones.

use crate::error::Error;
use crate::forms::KForm;
use crate::geom::{
    alpha_for_derivation, check_acm, check_almost_cosymplectic, fundamental_form, kernel_basis,
    reeb_vector, restrict_bilinear, restrict_endo, AcmStructure, CosymPair, Witness,
};
use crate::lie::{BracketEntry, Endo, LieAlgebra, Vector};
use crate::linalg::QMat;
use crate::rat::{fmt_q, qi, Q};
use crate::Result;
use num::Zero;

/// Even-dimensional side: `(h, Omega, D)`, optionally with almost Kaehler
/// data `(J, metric)` whose fundamental form is `Omega`.
#[derive(Debug, Clone)]
pub struct EvenBundle {
    pub h: LieAlgebra,
    pub omega: KForm,
    pub d: Endo,
    pub kahler: Option<KahlerData>,
}

/// Complex structure and compatible metric on the even-dimensional side.
#[derive(Debug, Clone)]
pub struct KahlerData {
    pub j: Endo,
    pub metric: QMat,
}

/// Odd-dimensional side: `(g, eta, omega)` with `d eta = 0`, optionally with
/// a compatible almost contact metric structure whose fundamental form is
/// `omega`.
#[derive(Debug, Clone)]
pub struct OddBundle {
    pub g: LieAlgebra,
    pub pair: CosymPair,
    pub acm: Option<AcmStructure>,
}

impl EvenBundle {
    /// Validates dimensions, nondegeneracy of `Omega` and the Leibniz rule
    /// for `D`.
    pub fn new(h: LieAlgebra, omega: KForm, d: Endo) -> Result<Self> {
        let dim = h.dim();
        if dim % 2 == 1 {
            return Err(Error::OddDimension { dim });
        }
        if omega.dim() != dim || omega.degree() != 2 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: omega.dim(),
            });
        }
        if omega.wedge_pow(dim / 2)?.is_zero() {
            return Err(Error::NotNondegenerate);
        }
        if d.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: d.dim(),
            });
        }
        if let Some((i, j)) = h.derivation_defect(&d)? {
            return Err(Error::NotADerivation { i, j });
        }
        Ok(EvenBundle {
            h,
            omega,
            d,
            kahler: None,
        })
    }

    /// Attaches almost Kaehler data: `J^2 = -I`, metric symmetric positive
    /// definite and compatible, fundamental form equal to `Omega` and closed.
    pub fn with_kahler(mut self, j: Endo, metric: QMat) -> Result<Self> {
        let dim = self.h.dim();
        if j.dim() != dim || metric.rows() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: j.dim(),
            });
        }
        if j.compose(&j).m != QMat::identity(dim).neg() {
            return Err(Error::NotAlmostKahler {
                reason: "J^2 != -I".into(),
            });
        }
        if !metric.is_symmetric() || !metric.is_positive_definite() {
            return Err(Error::NotAlmostKahler {
                reason: "metric is not symmetric positive definite".into(),
            });
        }
        if j.m.transpose().mul(&metric).mul(&j.m) != metric {
            return Err(Error::NotAlmostKahler {
                reason: "metric is not J-invariant".into(),
            });
        }
        // Fundamental form h(., J.) must be the bundle's Omega.
        let fundamental = KForm::from_gram(&metric.mul(&j.m))?;
        if fundamental != self.omega {
            return Err(Error::NotAlmostKahler {
                reason: "fundamental form of (J, metric) differs from Omega".into(),
            });
        }
        if !self.omega.cartan_d(&self.h)?.is_zero() {
            return Err(Error::NotAlmostKahler {
                reason: "fundamental form is not closed".into(),
            });
        }
        self.kahler = Some(KahlerData { j, metric });
        Ok(self)
    }
}

impl OddBundle {
    /// Validates the volume condition and `d eta = 0`.
    pub fn new(g: LieAlgebra, eta: KForm, omega: KForm) -> Result<Self> {
        let pair = check_almost_cosymplectic(&g, &eta, &omega)?;
        let deta = eta.cartan_d(&g)?;
        if let Some((idx, c)) = deta.terms().next() {
            return Err(Error::EtaNotClosed {
                i: idx[0],
                j: idx[1],
                value: fmt_q(c),
            });
        }
        Ok(OddBundle { g, pair, acm: None })
    }

    /// Attaches a validated almost contact metric structure; its 1-form and
    /// fundamental form must agree with the pair.
    pub fn with_acm(mut self, s: AcmStructure) -> Result<Self> {
        let checked = check_acm(&self.g, &s.phi, &s.xi, &s.eta, &s.metric)?;
        if checked.eta != self.pair.eta {
            return Err(Error::BadInput(
                "structure 1-form differs from the bundle's eta".into(),
            ));
        }
        if fundamental_form(&checked) != self.pair.omega {
            return Err(Error::BadInput(
                "fundamental form differs from the bundle's omega".into(),
            ));
        }
        self.acm = Some(checked);
        Ok(self)
    }
}

/// Structure constants of `R xi (x)_D h` with `xi` at index 0: brackets of
/// `h` shifted up by one, `[e_0, e_i] = D e_{i}`. No validation here, so bad
/// derivations can be fed to `jacobi_defect` deliberately.
pub fn extension_algebra(h: &LieAlgebra, d: &Endo) -> LieAlgebra {
    let n = h.dim();
    let mut entries = Vec::new();
    for j in 0..n {
        let col: Vec<(usize, Q)> = (0..n)
            .filter(|&i| !d.m.at(i, j).is_zero())
            .map(|i| (i + 1, d.m.at(i, j).clone()))
            .collect();
        if !col.is_empty() {
            entries.push(BracketEntry {
                i: 0,
                j: j + 1,
                out: col,
            });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let v = h.bracket_basis(i, j);
            if v.is_zero() {
                continue;
            }
            let out: Vec<(usize, Q)> = v
                .0
                .iter()
                .enumerate()
                .filter(|(_, q)| !q.is_zero())
                .map(|(k, q)| (k + 1, q.clone()))
                .collect();
            entries.push(BracketEntry {
                i: i + 1,
                j: j + 1,
                out,
            });
        }
    }
    let g = LieAlgebra::new(n + 1, &entries).expect("shifted entries are valid");
    g.with_labels(extension_labels(h.labels()))
}

/// `xi` gets the label `<prefix>0` when the base labels share a numeric
/// prefix, otherwise `e0`.
fn extension_labels(base: &[String]) -> Vec<String> {
    let prefix: Option<String> = base
        .first()
        .and_then(|l| l.find(|c: char| c.is_ascii_digit()).map(|p| l[..p].to_string()))
        .filter(|p| {
            !p.is_empty()
                && base.iter().all(|l| {
                    l.starts_with(p.as_str()) && l[p.len()..].chars().all(|c| c.is_ascii_digit())
                })
        });
    let xi = format!("{}0", prefix.unwrap_or_else(|| "e".into()));
    let mut labels = vec![xi];
    labels.extend(base.iter().cloned());
    labels
}

/// Extension of a validated bundle: `omega(xi, .) = 0`, `omega|_h = Omega`,
/// `eta(xi) = 1`, `eta|_h = 0`. The output has empty Jacobi defect and
/// `d eta = 0` by construction; metric data transports block-diagonally.
pub fn extend(e: &EvenBundle) -> Result<OddBundle> {
    let n = e.h.dim();
    let g = extension_algebra(&e.h, &e.d);
    debug_assert!(g.jacobi_defect().is_empty());
    let eta = KForm::basis(n + 1, &[0])?;
    let omega_terms: Vec<(Vec<usize>, Q)> = e
        .omega
        .terms()
        .map(|(idx, c)| (vec![idx[0] + 1, idx[1] + 1], c.clone()))
        .collect();
    let omega = KForm::from_terms(n + 1, 2, omega_terms)?;
    let bundle = OddBundle::new(g, eta, omega)?;
    match &e.kahler {
        None => Ok(bundle),
        Some(k) => {
            let phi = block_extend_endo(&k.j);
            let metric = block_extend_metric(&k.metric);
            let xi = Vector::basis(n + 1, 0);
            let eta = bundle.pair.eta.clone();
            let s = AcmStructure {
                phi,
                xi,
                eta,
                metric,
            };
            bundle.with_acm(s)
        }
    }
}

fn block_extend_endo(j: &Endo) -> Endo {
    let n = j.dim();
    Endo::from_mat(QMat::from_fn(n + 1, n + 1, |r, c| {
        if r == 0 || c == 0 {
            Q::zero()
        } else {
            j.m.at(r - 1, c - 1).clone()
        }
    }))
}

fn block_extend_metric(h: &QMat) -> QMat {
    let n = h.rows();
    QMat::from_fn(n + 1, n + 1, |r, c| {
        if r == 0 && c == 0 {
            qi(1)
        } else if r == 0 || c == 0 {
            Q::zero()
        } else {
            h.at(r - 1, c - 1).clone()
        }
    })
}

/// Convenience: validate `(h, Omega, D)` and extend in one step.
pub fn extend_parts(h: LieAlgebra, omega: KForm, d: Endo) -> Result<OddBundle> {
    extend(&EvenBundle::new(h, omega, d)?)
}

/// Builds the almost contact metric extension of almost Kaehler data. The
/// rational `alpha` with `D + alpha I` an infinitesimal symplectic
/// transformation is inferred, never supplied; without one the construction
/// is rejected.
pub fn extend_acm(h: LieAlgebra, j: Endo, metric: QMat, d: Endo) -> Result<OddBundle> {
    let omega = KForm::from_gram(&metric.mul(&j.m)).map_err(|_| Error::NotAlmostKahler {
        reason: "fundamental form of (J, metric) is not antisymmetric".into(),
    })?;
    let bundle = EvenBundle::new(h, omega.clone(), d.clone())?.with_kahler(j, metric)?;
    if alpha_for_derivation(&omega, &d)?.is_none() {
        return Err(Error::NoValidAlpha);
    }
    extend(&bundle)
}

/// Reduction onto `ker eta`: Reeb vector, canonical kernel basis, restricted
/// brackets, `D = ad_xi` in that basis and the restricted 2-form. Metric
/// data reduces to `(J, h) = (phi, g)` restricted.
pub fn reduce(o: &OddBundle) -> Result<(EvenBundle, Vec<Vector>)> {
    reduce_parts(&o.g, &o.pair.eta, &o.pair.omega, o.acm.as_ref())
}

/// Raw-parts version of [`reduce`]; validates `d eta = 0` itself so that a
/// non-closed 1-form surfaces as [`Error::EtaNotClosed`].
pub fn reduce_parts(
    g: &LieAlgebra,
    eta: &KForm,
    omega: &KForm,
    acm: Option<&AcmStructure>,
) -> Result<(EvenBundle, Vec<Vector>)> {
    let pair = check_almost_cosymplectic(g, eta, omega)?;
    let deta = eta.cartan_d(g)?;
    if let Some((idx, c)) = deta.terms().next() {
        return Err(Error::EtaNotClosed {
            i: idx[0],
            j: idx[1],
            value: fmt_q(c),
        });
    }
    let xi = reeb_vector(g, &pair)?;
    let eta_vec = eta.covector()?;
    let basis = kernel_basis(&eta_vec);
    let (h, _) = g.restrict_to_subspace(&basis)?;
    let ad = g.ad(&xi)?;
    let d = restrict_endo(&ad, &basis).ok_or_else(|| {
        Error::InternalInconsistency("ad_xi does not preserve ker eta despite d(eta)=0".into())
    })?;
    let m = basis.len();
    let mut omega_terms = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let c = omega.eval(&[&basis[i], &basis[j]])?;
            if !c.is_zero() {
                omega_terms.push((vec![i, j], c));
            }
        }
    }
    let omega_h = KForm::from_terms(m, 2, omega_terms)?;
    let mut bundle = EvenBundle::new(h, omega_h, d)?;
    if let Some(s) = acm {
        let j = restrict_endo(&s.phi, &basis).ok_or_else(|| {
            Error::InternalInconsistency("phi does not preserve ker eta".into())
        })?;
        let metric = restrict_bilinear(&s.metric, &basis);
        bundle = bundle.with_kahler(j, metric)?;
    }
    Ok((bundle, basis))
}

/// One verified condition of an isomorphism report.
#[derive(Debug, Clone)]
pub struct Condition {
    pub name: &'static str,
    pub status: std::result::Result<(), Witness>,
}

/// Pass/fail listing for [`verify_iso_even`] / [`verify_iso_odd`].
#[derive(Debug, Clone)]
pub struct IsoReport {
    pub conditions: Vec<Condition>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.status.is_ok())
    }

    pub fn failures(&self) -> Vec<&Condition> {
        self.conditions.iter().filter(|c| c.status.is_err()).collect()
    }

    fn push_ok(&mut self, name: &'static str) {
        self.conditions.push(Condition {
            name,
            status: Ok(()),
        });
    }

    fn push_fail(&mut self, name: &'static str, w: Witness) {
        self.conditions.push(Condition {
            name,
            status: Err(w),
        });
    }

    fn push(&mut self, name: &'static str, outcome: Option<Witness>) {
        match outcome {
            None => self.push_ok(name),
            Some(w) => self.push_fail(name, w),
        }
    }
}

fn bracket_condition(psi: &Endo, g1: &LieAlgebra, g2: &LieAlgebra) -> Option<Witness> {
    let n = g1.dim();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = psi.apply(&g1.bracket_basis(i, j));
            let rhs = g2
                .bracket(
                    &psi.apply(&Vector::basis(n, i)),
                    &psi.apply(&Vector::basis(n, j)),
                )
                .expect("dimensions match");
            if lhs != rhs {
                return Some(Witness::new(
                    format!("psi[{},{}]", g1.label(i), g1.label(j)),
                    format!(
                        "{:?} vs {:?}",
                        lhs.0.iter().map(fmt_q).collect::<Vec<_>>(),
                        rhs.0.iter().map(fmt_q).collect::<Vec<_>>()
                    ),
                ));
            }
        }
    }
    None
}

fn pullback_condition(psi: &Endo, target: &KForm, source: &KForm) -> Option<Witness> {
    let pb = target.pullback(psi).expect("dimensions match");
    if pb == *source {
        None
    } else {
        let diff = pb.sub(source).expect("same degree");
        let (idx, c) = diff.terms().next().expect("nonzero");
        Some(Witness::new(
            format!("(psi^* a_2 - a_1) at {:?}", idx.iter().map(|i| i + 1).collect::<Vec<_>>()),
            fmt_q(c),
        ))
    }
}

/// Checks a linear map between even bundles: invertibility, bracket
/// preservation, `psi^* Omega_2 = Omega_1`, `psi D_1 = D_2 psi`, and for
/// Kaehler bundles additionally `psi J_1 = J_2 psi` and `psi^* h_2 = h_1`.
pub fn verify_iso_even(psi: &Endo, e1: &EvenBundle, e2: &EvenBundle) -> IsoReport {
    let mut report = IsoReport {
        conditions: Vec::new(),
    };
    if e1.h.dim() != e2.h.dim() || psi.dim() != e1.h.dim() {
        report.push_fail(
            "dimensions",
            Witness::new("dim", format!("{} vs {}", e1.h.dim(), e2.h.dim())),
        );
        return report;
    }
    let invertible = psi.inverse().is_some();
    report.push(
        "invertible",
        (!invertible).then(|| Witness::new("det(psi)", "0")),
    );
    report.push("brackets", bracket_condition(psi, &e1.h, &e2.h));
    report.push(
        "omega_pullback",
        pullback_condition(psi, &e2.omega, &e1.omega),
    );
    let inter = psi.compose(&e1.d).sub(&e2.d.compose(psi));
    report.push(
        "derivation_intertwines",
        (!inter.is_zero()).then(|| Witness::new("psi D1 - D2 psi", "nonzero")),
    );
    if let (Some(k1), Some(k2)) = (&e1.kahler, &e2.kahler) {
        let jint = psi.compose(&k1.j).sub(&k2.j.compose(psi));
        report.push(
            "j_intertwines",
            (!jint.is_zero()).then(|| Witness::new("psi J1 - J2 psi", "nonzero")),
        );
        let pulled = psi.m.transpose().mul(&k2.metric).mul(&psi.m);
        report.push(
            "metric_pullback",
            (pulled != k1.metric).then(|| Witness::new("psi^* h2 - h1", "nonzero")),
        );
    }
    report
}

/// Lifts a fully verified even isomorphism to the extensions as the block
/// matrix fixing `xi`.
pub fn lift_iso(psi: &Endo, e1: &EvenBundle, e2: &EvenBundle) -> Result<Endo> {
    let report = verify_iso_even(psi, e1, e2);
    if !report.passed() {
        let names: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
        return Err(Error::PreconditionFailed(format!(
            "even isomorphism conditions failed: {}",
            names.join(", ")
        )));
    }
    Ok(block_extend_endo_unit(psi))
}

fn block_extend_endo_unit(psi: &Endo) -> Endo {
    let n = psi.dim();
    Endo::from_mat(QMat::from_fn(n + 1, n + 1, |r, c| {
        if r == 0 && c == 0 {
            qi(1)
        } else if r == 0 || c == 0 {
            Q::zero()
        } else {
            psi.m.at(r - 1, c - 1).clone()
        }
    }))
}

/// Checks a linear map between odd bundles: Lie isomorphism plus
/// `Psi^* omega_2 = omega_1` and `Psi^* eta_2 = eta_1`; with metric
/// structures also `Psi phi_1 = phi_2 Psi`, `Psi xi_1 = xi_2` and
/// `Psi^* g_2 = g_1`. The Reeb condition `Psi xi_1 = xi_2` is derived from
/// the others, so it is checked and reported separately even for plain
/// pairs.
pub fn verify_iso_odd(psi: &Endo, o1: &OddBundle, o2: &OddBundle) -> IsoReport {
    let mut report = IsoReport {
        conditions: Vec::new(),
    };
    if o1.g.dim() != o2.g.dim() || psi.dim() != o1.g.dim() {
        report.push_fail(
            "dimensions",
            Witness::new("dim", format!("{} vs {}", o1.g.dim(), o2.g.dim())),
        );
        return report;
    }
    let invertible = psi.inverse().is_some();
    report.push(
        "invertible",
        (!invertible).then(|| Witness::new("det(Psi)", "0")),
    );
    report.push("brackets", bracket_condition(psi, &o1.g, &o2.g));
    report.push(
        "omega_pullback",
        pullback_condition(psi, &o2.pair.omega, &o1.pair.omega),
    );
    report.push(
        "eta_pullback",
        pullback_condition(psi, &o2.pair.eta, &o1.pair.eta),
    );
    // Derived: the Reeb vector must map to the Reeb vector.
    let reeb = match (reeb_vector(&o1.g, &o1.pair), reeb_vector(&o2.g, &o2.pair)) {
        (Ok(x1), Ok(x2)) => {
            let img = psi.apply(&x1);
            (img != x2).then(|| {
                Witness::new(
                    "Psi xi1",
                    format!("{:?}", img.0.iter().map(fmt_q).collect::<Vec<_>>()),
                )
            })
        }
        _ => Some(Witness::new("reeb", "undefined")),
    };
    report.push("reeb_maps_to_reeb", reeb);
    if let (Some(s1), Some(s2)) = (&o1.acm, &o2.acm) {
        let phi_int = psi.compose(&s1.phi).sub(&s2.phi.compose(psi));
        report.push(
            "phi_intertwines",
            (!phi_int.is_zero()).then(|| Witness::new("Psi phi1 - phi2 Psi", "nonzero")),
        );
        let xi_img = psi.apply(&s1.xi);
        report.push(
            "xi_maps",
            (xi_img != s2.xi).then(|| Witness::new("Psi xi1 - xi2", "nonzero")),
        );
        let pulled = psi.m.transpose().mul(&s2.metric).mul(&psi.m);
        report.push(
            "metric_pullback",
            (pulled != s1.metric).then(|| Witness::new("Psi^* g2 - g1", "nonzero")),
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{detect_alpha, AlphaResult, FlagKey};
    use crate::rat::qr;

    fn e(dim: usize, idx: &[usize]) -> KForm {
        KForm::basis(dim, idx).unwrap()
    }

    fn entry(i: usize, j: usize, out: &[(usize, i64)]) -> BracketEntry {
        BracketEntry {
            i,
            j,
            out: out.iter().map(|&(k, v)| (k, qi(v))).collect(),
        }
    }

    /// h4: [e1,e2]=e3, [e4,e3]=e3, [e4,e1]=e1/2, [e4,e2]=e1+e2/2.
    fn h4() -> LieAlgebra {
        LieAlgebra::new(
            4,
            &[
                entry(0, 1, &[(2, 1)]),
                BracketEntry {
                    i: 2,
                    j: 3,
                    out: vec![(2, qi(-1))],
                },
                BracketEntry {
                    i: 0,
                    j: 3,
                    out: vec![(0, qr(-1, 2))],
                },
                BracketEntry {
                    i: 1,
                    j: 3,
                    out: vec![(0, qi(-1)), (1, qr(-1, 2))],
                },
            ],
        )
        .unwrap()
    }

    fn h4_omega() -> KForm {
        e(4, &[0, 1]).sub(&e(4, &[2, 3])).unwrap()
    }

    fn h4_d(p: i64, q: i64) -> Endo {
        // D e2 = p e1, D e4 = q e3.
        let mut m = QMat::zeros(4, 4);
        *m.at_mut(0, 1) = qi(p);
        *m.at_mut(2, 3) = qi(q);
        Endo::from_mat(m)
    }

    #[test]
    fn h4_is_a_lie_algebra_and_d_is_a_derivation() {
        let h = h4();
        assert!(h.jacobi_defect().is_empty());
        assert!(h.is_derivation(&h4_d(1, 2)).unwrap());
        assert!(crate::geom::is_ist(&h4_omega(), &h4_d(1, 2)).unwrap());
    }

    #[test]
    fn extend_produces_the_expected_brackets() {
        let bundle = EvenBundle::new(h4(), h4_omega(), h4_d(1, 2)).unwrap();
        let odd = extend(&bundle).unwrap();
        assert_eq!(odd.g.dim(), 5);
        assert!(odd.g.jacobi_defect().is_empty());
        // [e0, e2] = 1*e1, [e0, e4] = 2*e3 (0-based: positions shift by one).
        assert_eq!(
            odd.g.bracket_basis(0, 2),
            Vector(vec![qi(0), qi(1), qi(0), qi(0), qi(0)])
        );
        assert_eq!(
            odd.g.bracket_basis(0, 4),
            Vector(vec![qi(0), qi(0), qi(0), qi(2), qi(0)])
        );
        // d eta = 0 and the pair detects alpha = 0.
        assert_eq!(
            detect_alpha(&odd.g, &odd.pair).unwrap(),
            AlphaResult::Alpha(qi(0))
        );
    }

    #[test]
    fn extend_then_reduce_roundtrips() {
        let bundle = EvenBundle::new(h4(), h4_omega(), h4_d(3, -1)).unwrap();
        let odd = extend(&bundle).unwrap();
        let (back, basis) = reduce(&odd).unwrap();
        // The kernel basis of eta = e^0 is the embedded standard basis.
        for (k, b) in basis.iter().enumerate() {
            assert_eq!(*b, Vector::basis(5, k + 1));
        }
        assert_eq!(back.h, bundle.h);
        assert_eq!(back.omega, bundle.omega);
        assert_eq!(back.d, bundle.d);
    }

    #[test]
    fn non_derivation_is_rejected_and_breaks_jacobi() {
        let h = h4();
        let mut bad = QMat::zeros(4, 4);
        *bad.at_mut(0, 0) = qi(1); // e1 -> e1 alone is not a derivation of h4
        let bad = Endo::from_mat(bad);
        assert!(!h.is_derivation(&bad).unwrap());
        assert!(matches!(
            EvenBundle::new(h.clone(), h4_omega(), bad.clone()),
            Err(Error::NotADerivation { .. })
        ));
        // Forcing the extension anyway produces a Jacobi defect.
        let g = extension_algebra(&h, &bad);
        assert!(!g.jacobi_defect().is_empty());
    }

    #[test]
    fn reduce_rejects_nonclosed_eta() {
        // [e1,e2] = e0 with eta = e^0: d(eta)(e1,e2) = -1.
        let g = LieAlgebra::new(3, &[entry(1, 2, &[(0, 1)])]).unwrap();
        let eta = e(3, &[0]);
        let omega = e(3, &[1, 2]);
        let err = reduce_parts(&g, &eta, &omega, None).unwrap_err();
        assert!(matches!(err, Error::EtaNotClosed { i: 1, j: 2, .. }));
        assert!(matches!(
            OddBundle::new(g, eta, omega),
            Err(Error::EtaNotClosed { .. })
        ));
    }

    #[test]
    fn extend_acm_on_h4() {
        // J e1 = -e2, J e3 = e4 extended by J^2 = -I; metric = I.
        let mut j = QMat::zeros(4, 4);
        *j.at_mut(1, 0) = qi(-1);
        *j.at_mut(0, 1) = qi(1);
        *j.at_mut(3, 2) = qi(1);
        *j.at_mut(2, 3) = qi(-1);
        let j = Endo::from_mat(j);
        let odd = extend_acm(h4(), j, QMat::identity(4), h4_d(1, 2)).unwrap();
        let s = odd.acm.as_ref().unwrap();
        assert_eq!(fundamental_form(s), odd.pair.omega);
        let report = crate::geom::classify(&odd.g, s).unwrap();
        assert!(report.passed(FlagKey::AlmostAlphaCoKahler));
        assert_eq!(report.alpha, Some(qi(0)));
        // Strictly almost coKaehler here: neither K-cosymplectic nor normal.
        assert!(report.status(FlagKey::KCosymplectic).failed());
        assert!(report.status(FlagKey::Normal).failed());
        let killing = report.killing.unwrap();
        assert!(killing.all_equal());
        assert!(!killing.commutes_with_j);
    }

    #[test]
    fn iso_lift_roundtrip_on_h4() {
        let bundle = EvenBundle::new(h4(), h4_omega(), h4_d(1, 2)).unwrap();
        // Transport the bundle through an invertible rational map that fixes
        // the bracket structure only if built by conjugation.
        let p = QMat::from_rows(vec![
            vec![qi(1), qi(1), qi(0), qi(0)],
            vec![qi(0), qi(1), qi(0), qi(0)],
            vec![qi(0), qi(0), qi(1), qi(2)],
            vec![qi(0), qi(0), qi(0), qi(1)],
        ]);
        let psi = Endo::from_mat(p);
        let pinv = psi.inverse().unwrap();

        // Push the structure forward: brackets, omega and D transported.
        let n = 4;
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let v = bundle
                    .h
                    .bracket(
                        &pinv.apply(&Vector::basis(n, i)),
                        &pinv.apply(&Vector::basis(n, j)),
                    )
                    .unwrap();
                let img = psi.apply(&v);
                let out: Vec<(usize, Q)> = img
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| !q.is_zero())
                    .map(|(k, q)| (k, q.clone()))
                    .collect();
                if !out.is_empty() {
                    entries.push(BracketEntry { i, j, out });
                }
            }
        }
        let h2 = LieAlgebra::new(n, &entries).unwrap();
        let omega2 = bundle.omega.pullback(&pinv).unwrap();
        let d2 = psi.compose(&bundle.d).compose(&pinv);
        let e2 = EvenBundle::new(h2, omega2, d2).unwrap();

        let report = verify_iso_even(&psi, &bundle, &e2);
        assert!(report.passed(), "failures: {:?}", report.failures());

        let lifted = lift_iso(&psi, &bundle, &e2).unwrap();
        let o1 = extend(&bundle).unwrap();
        let o2 = extend(&e2).unwrap();
        let odd_report = verify_iso_odd(&lifted, &o1, &o2);
        assert!(odd_report.passed(), "failures: {:?}", odd_report.failures());
    }

    #[test]
    fn broken_pullback_is_reported() {
        let g = LieAlgebra::abelian(5);
        let omega = e(5, &[1, 2]).add(&e(5, &[3, 4])).unwrap();
        let o = OddBundle::new(g.clone(), e(5, &[0]), omega).unwrap();
        // Swapping e2 <-> e4 breaks omega-pullback but stays invertible.
        let mut p = QMat::identity(5);
        *p.at_mut(1, 1) = Q::zero();
        *p.at_mut(3, 3) = Q::zero();
        *p.at_mut(1, 3) = qi(1);
        *p.at_mut(3, 1) = qi(1);
        let report = verify_iso_odd(&Endo::from_mat(p), &o, &o);
        assert!(!report.passed());
        let failed: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
        assert!(failed.contains(&"omega_pullback"));
    }
}
