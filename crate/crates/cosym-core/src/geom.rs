//! Recognition and analysis of cosymplectic-type structures.
//!
//! Odd-dimensional side: pairs `(eta, omega)` with `eta ^ omega^n != 0`,
//! Reeb vectors, the closed/`d omega = 2 alpha eta ^ omega` dichotomy, almost
//! contact metric structures, Nijenhuis tensors, Lie derivatives and the
//! Killing-type equivalences. Even-dimensional side: (almost) symplectic
//! checks, infinitesimal symplectic transformations and the derivation
//! families they cut out of `Der(h)`.

mod polar;

pub use polar::{polarize, PolarizedAcm};

use crate::error::Error;
use crate::forms::KForm;
use crate::lie::{Endo, LieAlgebra, MatSpace, Vector};
use crate::linalg::QMat;
use crate::rat::{fmt_q, qi, Q};
use crate::Result;
use num::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Validated almost cosymplectic pair on an odd-dimensional algebra.
#[derive(Debug, Clone)]
pub struct CosymPair {
    pub eta: KForm,
    pub omega: KForm,
}

/// Validated almost contact metric structure `(phi, xi, eta, g)`.
#[derive(Debug, Clone)]
pub struct AcmStructure {
    pub phi: Endo,
    pub xi: Vector,
    pub eta: KForm,
    pub metric: QMat,
}

/// Outcome of the `d omega = 2 alpha eta ^ omega` test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaResult {
    /// `d eta != 0`; no alpha is defined.
    NotClosed(Witness),
    /// `d eta = 0` but no single rational alpha fits all coefficients.
    NoAlpha(Witness),
    /// The unique rational alpha (0 means cosymplectic).
    Alpha(Q),
}

impl AlphaResult {
    pub fn alpha(&self) -> Option<&Q> {
        match self {
            AlphaResult::Alpha(a) => Some(a),
            _ => None,
        }
    }
}

/// Location + value pair attached to a failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub at: String,
    pub value: String,
}

impl Witness {
    pub fn new(at: impl Into<String>, value: impl Into<String>) -> Self {
        Witness {
            at: at.into(),
            value: value.into(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.at, self.value)
    }
}

/// Structure flags reported by [`classify`] and [`check_symplectic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FlagKey {
    AlmostCosymplectic,
    Cosymplectic,
    AlphaCosymplectic,
    AlmostSymplectic,
    Symplectic,
    AlmostAlphaCoKahler,
    KCosymplectic,
    Normal,
    AlphaCoKahler,
}

impl FlagKey {
    pub fn name(&self) -> &'static str {
        match self {
            FlagKey::AlmostCosymplectic => "almost_cosymplectic",
            FlagKey::Cosymplectic => "cosymplectic",
            FlagKey::AlphaCosymplectic => "alpha_cosymplectic",
            FlagKey::AlmostSymplectic => "almost_symplectic",
            FlagKey::Symplectic => "symplectic",
            FlagKey::AlmostAlphaCoKahler => "almost_alpha_cokahler",
            FlagKey::KCosymplectic => "k_cosymplectic",
            FlagKey::Normal => "normal",
            FlagKey::AlphaCoKahler => "alpha_cokahler",
        }
    }

    pub fn all() -> [FlagKey; 9] {
        [
            FlagKey::AlmostCosymplectic,
            FlagKey::Cosymplectic,
            FlagKey::AlphaCosymplectic,
            FlagKey::AlmostSymplectic,
            FlagKey::Symplectic,
            FlagKey::AlmostAlphaCoKahler,
            FlagKey::KCosymplectic,
            FlagKey::Normal,
            FlagKey::AlphaCoKahler,
        ]
    }
}

impl fmt::Display for FlagKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Status of a single structure flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlagStatus {
    NotApplicable,
    Pass,
    Fail(Witness),
}

impl FlagStatus {
    pub fn passed(&self) -> bool {
        matches!(self, FlagStatus::Pass)
    }
    pub fn failed(&self) -> bool {
        matches!(self, FlagStatus::Fail(_))
    }
}

/// The four equivalent conditions tested on an almost alpha-coKaehler
/// structure: the conformal-Killing equation for the Reeb vector, skewness of
/// `D + alpha I` with respect to the restricted metric, `DJ = JD`, and the
/// vanishing of the Lie derivative of `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KillingConditions {
    pub conformal_killing_metric: bool,
    pub skew_adjoint: bool,
    pub commutes_with_j: bool,
    pub phi_invariant: bool,
}

impl KillingConditions {
    pub fn all_equal(&self) -> bool {
        let b = self.conformal_killing_metric;
        self.skew_adjoint == b && self.commutes_with_j == b && self.phi_invariant == b
    }
    pub fn as_array(&self) -> [bool; 4] {
        [
            self.conformal_killing_metric,
            self.skew_adjoint,
            self.commutes_with_j,
            self.phi_invariant,
        ]
    }
}

/// Flags plus witnesses for everything that failed.
#[derive(Debug, Clone)]
pub struct StructureReport {
    pub flags: BTreeMap<FlagKey, FlagStatus>,
    pub alpha: Option<Q>,
    pub killing: Option<KillingConditions>,
}

impl StructureReport {
    fn new() -> Self {
        let mut flags = BTreeMap::new();
        for k in FlagKey::all() {
            flags.insert(k, FlagStatus::NotApplicable);
        }
        StructureReport {
            flags,
            alpha: None,
            killing: None,
        }
    }

    fn set(&mut self, key: FlagKey, status: FlagStatus) {
        self.flags.insert(key, status);
    }

    pub fn status(&self, key: FlagKey) -> &FlagStatus {
        &self.flags[&key]
    }

    pub fn passed(&self, key: FlagKey) -> bool {
        self.flags[&key].passed()
    }
}

/// (1,2)-tensor stored on basis pairs, antisymmetric in the two arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor12 {
    pub dim: usize,
    /// `t[i][j]` = components of `T(e_i, e_j)`.
    pub t: Vec<Vec<Vec<Q>>>,
}

impl Tensor12 {
    pub fn zero(dim: usize) -> Self {
        Tensor12 {
            dim,
            t: vec![vec![vec![Q::zero(); dim]; dim]; dim],
        }
    }

    pub fn at(&self, i: usize, j: usize) -> Vector {
        Vector(self.t[i][j].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.t
            .iter()
            .all(|p| p.iter().all(|v| v.iter().all(|q| q.is_zero())))
    }

    /// First nonzero slot, for witnesses.
    pub fn first_nonzero(&self) -> Option<(usize, usize, Vector)> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self.at(i, j);
                if !v.is_zero() {
                    return Some((i, j, v));
                }
            }
        }
        None
    }
}

/// Validates `eta ^ omega^n != 0` on an odd-dimensional algebra.
pub fn check_almost_cosymplectic(g: &LieAlgebra, eta: &KForm, omega: &KForm) -> Result<CosymPair> {
    let dim = g.dim();
    if dim % 2 == 0 {
        return Err(Error::EvenDimension { dim });
    }
    if eta.dim() != dim || omega.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: if eta.dim() != dim {
                eta.dim()
            } else {
                omega.dim()
            },
        });
    }
    if eta.degree() != 1 {
        return Err(Error::WrongDegree {
            expected: 1,
            got: eta.degree(),
        });
    }
    if omega.degree() != 2 {
        return Err(Error::WrongDegree {
            expected: 2,
            got: omega.degree(),
        });
    }
    let n = dim / 2;
    let vol = eta.wedge(&omega.wedge_pow(n)?)?;
    if vol.is_zero() {
        return Err(Error::NotVolume);
    }
    Ok(CosymPair {
        eta: eta.clone(),
        omega: omega.clone(),
    })
}

/// The unique `xi` with `eta(xi) = 1` and `i_xi omega = 0`, from the
/// `(dim+1)`-equation linear system.
pub fn reeb_vector(g: &LieAlgebra, pair: &CosymPair) -> Result<Vector> {
    let dim = g.dim();
    let eta_row = pair.eta.covector()?;
    let w = pair.omega.gram()?;
    // Rows: eta; then omega(., e_j) for each j.
    let mut rows = vec![eta_row];
    for j in 0..dim {
        // omega(xi, e_j) = sum_i xi_i W[i][j]
        rows.push(w.col(j));
    }
    let a = QMat::from_rows(rows);
    let mut b = vec![Q::zero(); dim + 1];
    b[0] = qi(1);
    let sol = a.solve(&b).ok_or(Error::SingularSystem)?;
    if !sol.basis.is_empty() {
        return Err(Error::SingularSystem);
    }
    Ok(Vector(sol.particular))
}

/// Decides whether `d eta = 0` and `d omega = 2 alpha (eta ^ omega)` for a
/// single rational `alpha`, solved coefficient-wise.
pub fn detect_alpha(g: &LieAlgebra, pair: &CosymPair) -> Result<AlphaResult> {
    let deta = pair.eta.cartan_d(g)?;
    if !deta.is_zero() {
        let (idx, c) = deta.terms().next().expect("nonzero");
        return Ok(AlphaResult::NotClosed(Witness::new(
            format!("d(eta)({})", tuple_label(g, idx)),
            fmt_q(c),
        )));
    }
    let domega = pair.omega.cartan_d(g)?;
    let base = pair.eta.wedge(&pair.omega)?;
    if domega.is_zero() {
        return Ok(AlphaResult::Alpha(Q::zero()));
    }
    // base != 0 whenever the volume condition holds and dim >= 3.
    let Some((idx0, b0)) = base.terms().find(|(_, c)| !c.is_zero()) else {
        return Ok(AlphaResult::NoAlpha(Witness::new(
            "eta^omega",
            "0 while d(omega) != 0",
        )));
    };
    let alpha = domega.coeff(idx0) / (qi(2) * b0);
    let expected = base.scale(&(qi(2) * &alpha));
    if expected == domega {
        Ok(AlphaResult::Alpha(alpha))
    } else {
        let diff = domega.sub(&expected)?;
        let (idx, c) = diff.terms().next().expect("nonzero difference");
        Ok(AlphaResult::NoAlpha(Witness::new(
            format!("(d(omega) - 2a eta^omega)({})", tuple_label(g, idx)),
            fmt_q(c),
        )))
    }
}

fn tuple_label(g: &LieAlgebra, idx: &[usize]) -> String {
    idx.iter()
        .map(|&i| g.label(i).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Almost symplectic / symplectic flags for a 2-form on an even-dimensional
/// algebra.
pub fn check_symplectic(h: &LieAlgebra, omega: &KForm) -> Result<StructureReport> {
    let dim = h.dim();
    if dim % 2 == 1 {
        return Err(Error::OddDimension { dim });
    }
    if omega.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: omega.dim(),
        });
    }
    let mut report = StructureReport::new();
    let n = dim / 2;
    let top = omega.wedge_pow(n)?;
    let nondeg = !top.is_zero();
    report.set(
        FlagKey::AlmostSymplectic,
        if nondeg {
            FlagStatus::Pass
        } else {
            FlagStatus::Fail(Witness::new("omega^n", "0"))
        },
    );
    let domega = omega.cartan_d(h)?;
    let closed = domega.is_zero();
    let sympl = if nondeg && closed {
        FlagStatus::Pass
    } else if !closed {
        let (idx, c) = domega.terms().next().expect("nonzero");
        FlagStatus::Fail(Witness::new(
            format!("d(omega)({})", tuple_label(h, idx)),
            fmt_q(c),
        ))
    } else {
        FlagStatus::Fail(Witness::new("omega^n", "0"))
    };
    report.set(FlagKey::Symplectic, sympl);
    Ok(report)
}

/// `F(i,j) = omega(theta e_i, e_j)`, i.e. the matrix `theta^T W`.
pub fn f_form(omega: &KForm, theta: &Endo) -> Result<QMat> {
    let w = omega.gram()?;
    if theta.dim() != w.rows() {
        return Err(Error::DimensionMismatch {
            expected: w.rows(),
            got: theta.dim(),
        });
    }
    Ok(theta.m.transpose().mul(&w))
}

/// Infinitesimal symplectic transformation test: `F_{omega,theta}` symmetric.
pub fn is_ist(omega: &KForm, theta: &Endo) -> Result<bool> {
    Ok(f_form(omega, theta)?.is_symmetric())
}

/// The equivalent matrix condition `theta^T W + W theta`, kept as a second
/// route for cross-checking.
pub fn ist_defect(omega: &KForm, theta: &Endo) -> Result<QMat> {
    let w = omega.gram()?;
    if theta.dim() != w.rows() {
        return Err(Error::DimensionMismatch {
            expected: w.rows(),
            got: theta.dim(),
        });
    }
    Ok(theta.m.transpose().mul(&w).add(&w.mul(&theta.m)))
}

/// Solves `theta^T W + W theta = -2 alpha W` for a scalar: the rational
/// `alpha` making `D + alpha I` an i.s.t., if one exists.
pub fn alpha_for_derivation(omega: &KForm, d: &Endo) -> Result<Option<Q>> {
    let w = omega.gram()?;
    let s = ist_defect(omega, d)?;
    // Need s = -2 alpha W exactly.
    let mut alpha: Option<Q> = None;
    for i in 0..w.rows() {
        for j in 0..w.cols() {
            let wij = w.at(i, j);
            let sij = s.at(i, j);
            if wij.is_zero() {
                if !sij.is_zero() {
                    return Ok(None);
                }
                continue;
            }
            let a = -sij / (qi(2) * wij);
            match &alpha {
                None => alpha = Some(a),
                Some(prev) if *prev != a => return Ok(None),
                _ => {}
            }
        }
    }
    Ok(alpha.or_else(|| Some(Q::zero())))
}

/// The affine space `{ D in Der(h) : (D + alpha I)^T W + W (D + alpha I) = 0 }`.
/// Requires `(h, omega)` symplectic.
pub fn ist_derivation_space(h: &LieAlgebra, omega: &KForm, alpha: &Q) -> Result<MatSpace> {
    ensure_symplectic(h, omega)?;
    derivation_subspace(h, omega, alpha, None)
}

/// Same, with the extra constraint `DJ = JD`.
pub fn commuting_ist_derivation_space(
    h: &LieAlgebra,
    omega: &KForm,
    j: &Endo,
    alpha: &Q,
) -> Result<MatSpace> {
    ensure_symplectic(h, omega)?;
    derivation_subspace(h, omega, alpha, Some(j))
}

fn ensure_symplectic(h: &LieAlgebra, omega: &KForm) -> Result<()> {
    let report = check_symplectic(h, omega).map_err(|e| match e {
        Error::OddDimension { dim } => Error::NotSymplectic {
            reason: format!("odd dimension {}", dim),
        },
        other => other,
    })?;
    if !report.passed(FlagKey::Symplectic) {
        let reason = match report.status(FlagKey::Symplectic) {
            FlagStatus::Fail(w) => w.to_string(),
            _ => "unknown".into(),
        };
        return Err(Error::NotSymplectic { reason });
    }
    Ok(())
}

/// Assembles and solves the combined linear system: Leibniz rows, the
/// inhomogeneous i.s.t. rows `(D^T W + W D)_{ij} = -2 alpha W_{ij}` (i < j:
/// both sides are antisymmetric), and optionally `DJ - JD = 0`.
fn derivation_subspace(
    h: &LieAlgebra,
    omega: &KForm,
    alpha: &Q,
    j_commute: Option<&Endo>,
) -> Result<MatSpace> {
    let n = h.dim();
    let w = omega.gram()?;
    let mut rows = h.derivation_rows();
    let mut rhs = vec![Q::zero(); rows.len()];
    for i in 0..n {
        for jc in i + 1..n {
            let mut row = vec![Q::zero(); n * n];
            // (D^T W)_{i jc} = sum_m D[m][i] W[m][jc]
            for m in 0..n {
                row[m * n + i] = &row[m * n + i] + w.at(m, jc);
            }
            // (W D)_{i jc} = sum_m W[i][m] D[m][jc]
            for m in 0..n {
                row[m * n + jc] = &row[m * n + jc] + w.at(i, m);
            }
            rows.push(row);
            rhs.push(-(qi(2) * alpha) * w.at(i, jc));
        }
    }
    if let Some(j) = j_commute {
        if j.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: j.dim(),
            });
        }
        for r in 0..n {
            for c in 0..n {
                // (D J - J D)[r][c] = sum_m D[r][m] J[m][c] - J[r][m] D[m][c]
                let mut row = vec![Q::zero(); n * n];
                for m in 0..n {
                    row[r * n + m] = &row[r * n + m] + j.m.at(m, c);
                    row[m * n + c] = &row[m * n + c] - j.m.at(r, m);
                }
                rows.push(row);
                rhs.push(Q::zero());
            }
        }
    }
    let sys = QMat::from_rows(rows);
    let sol = sys
        .solve(&rhs)
        .ok_or_else(|| Error::InternalInconsistency("inconsistent i.s.t. system".into()))?;
    Ok(MatSpace {
        ambient_dim: n,
        particular: Endo::from_mat(QMat::from_flat(n, n, sol.particular)),
        basis: sol
            .basis
            .into_iter()
            .map(|v| Endo::from_mat(QMat::from_flat(n, n, v)))
            .collect(),
    })
}

/// Validates the almost contact metric identities, returning the first
/// failure with a witness.
pub fn check_acm(
    g: &LieAlgebra,
    phi: &Endo,
    xi: &Vector,
    eta: &KForm,
    metric: &QMat,
) -> Result<AcmStructure> {
    let dim = g.dim();
    for (name, got) in [
        ("phi", phi.dim()),
        ("xi", xi.dim()),
        ("eta", eta.dim()),
        ("metric", metric.rows()),
    ] {
        if got != dim {
            return Err(Error::NotAcm {
                identity: format!("{} dimension", name),
                witness: format!("{} != {}", got, dim),
            });
        }
    }
    let eta_vec = eta.covector()?;
    let eta_of = |v: &Vector| -> Q {
        eta_vec
            .iter()
            .zip(&v.0)
            .map(|(a, b)| a * b)
            .fold(Q::zero(), |acc, x| acc + x)
    };
    // eta(xi) = 1
    let exi = eta_of(xi);
    if exi != qi(1) {
        return Err(Error::NotAcm {
            identity: "eta(xi)=1".into(),
            witness: format!("eta(xi) = {}", fmt_q(&exi)),
        });
    }
    // phi^2 = -I + eta (x) xi
    let phi2 = phi.compose(phi);
    let correction = QMat::from_fn(dim, dim, |i, j| &xi.0[i] * &eta_vec[j]);
    let expected = QMat::identity(dim).neg().add(&correction);
    if phi2.m != expected {
        let (i, j) = first_diff(&phi2.m, &expected).expect("differs");
        return Err(Error::NotAcm {
            identity: "phi^2 = -I + eta(x)xi".into(),
            witness: format!(
                "entry ({},{}): {} vs {}",
                g.label(i),
                g.label(j),
                fmt_q(phi2.m.at(i, j)),
                fmt_q(expected.at(i, j))
            ),
        });
    }
    // eta o phi = 0
    for jcol in 0..dim {
        let img = phi.apply(&Vector::basis(dim, jcol));
        let v = eta_of(&img);
        if !v.is_zero() {
            return Err(Error::NotAcm {
                identity: "eta o phi = 0".into(),
                witness: format!("eta(phi {}) = {}", g.label(jcol), fmt_q(&v)),
            });
        }
    }
    // metric symmetric positive definite
    if !metric.is_symmetric() {
        return Err(Error::NotAcm {
            identity: "metric symmetric".into(),
            witness: "g != g^T".into(),
        });
    }
    if !metric.is_positive_definite() {
        return Err(Error::NotAcm {
            identity: "metric positive definite".into(),
            witness: "a leading principal minor is <= 0".into(),
        });
    }
    // g(phi x, phi y) = g(x,y) - eta(x) eta(y)
    let lhs = phi.m.transpose().mul(metric).mul(&phi.m);
    let eta_outer = QMat::from_fn(dim, dim, |i, j| &eta_vec[i] * &eta_vec[j]);
    let rhs = metric.sub(&eta_outer);
    if lhs != rhs {
        let (i, j) = first_diff(&lhs, &rhs).expect("differs");
        return Err(Error::NotAcm {
            identity: "g(phi.,phi.) = g - eta(x)eta".into(),
            witness: format!(
                "pair ({},{}): {} vs {}",
                g.label(i),
                g.label(j),
                fmt_q(lhs.at(i, j)),
                fmt_q(rhs.at(i, j))
            ),
        });
    }
    Ok(AcmStructure {
        phi: phi.clone(),
        xi: xi.clone(),
        eta: eta.clone(),
        metric: metric.clone(),
    })
}

fn first_diff(a: &QMat, b: &QMat) -> Option<(usize, usize)> {
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a.at(i, j) != b.at(i, j) {
                return Some((i, j));
            }
        }
    }
    None
}

/// The fundamental 2-form `Phi(x, y) = g(x, phi y)`.
pub fn fundamental_form(s: &AcmStructure) -> KForm {
    let m = s.metric.mul(&s.phi.m);
    KForm::from_gram(&m).expect("antisymmetric by the compatibility identities")
}

/// Nijenhuis tensor
/// `N(x,y) = [phi x, phi y] - phi[phi x, y] - phi[x, phi y] + phi^2 [x, y]`.
pub fn nijenhuis(g: &LieAlgebra, phi: &Endo) -> Result<Tensor12> {
    let dim = g.dim();
    if phi.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: phi.dim(),
        });
    }
    let phi2 = phi.compose(phi);
    let mut t = Tensor12::zero(dim);
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            let ei = Vector::basis(dim, i);
            let ej = Vector::basis(dim, j);
            let pei = phi.apply(&ei);
            let pej = phi.apply(&ej);
            let mut v = g.bracket(&pei, &pej)?;
            v = v.sub(&phi.apply(&g.bracket(&pei, &ej)?));
            v = v.sub(&phi.apply(&g.bracket(&ei, &pej)?));
            v = v.add(&phi2.apply(&g.bracket(&ei, &ej)?));
            t.t[i][j] = v.0;
        }
    }
    Ok(t)
}

/// `N_phi + 2 d(eta) (x) xi`; with `d eta = 0` this is just the Nijenhuis
/// tensor, and its vanishing is the normality condition.
pub fn normality_defect(g: &LieAlgebra, s: &AcmStructure) -> Result<Tensor12> {
    let mut t = nijenhuis(g, &s.phi)?;
    let deta = s.eta.cartan_d(g)?;
    if !deta.is_zero() {
        let dim = g.dim();
        for i in 0..dim {
            for j in 0..dim {
                let c = deta.coeff_signed(&[i, j]);
                if c.is_zero() {
                    continue;
                }
                let two_c = qi(2) * c;
                for k in 0..dim {
                    t.t[i][j][k] = &t.t[i][j][k] + &two_c * &s.xi.0[k];
                }
            }
        }
    }
    Ok(t)
}

/// `L_xi phi = ad_xi o phi - phi o ad_xi`.
pub fn lie_derivative_phi(g: &LieAlgebra, xi: &Vector, phi: &Endo) -> Result<Endo> {
    let ad = g.ad(xi)?;
    if phi.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: phi.dim(),
        });
    }
    Ok(ad.compose(phi).sub(&phi.compose(&ad)))
}

/// `(L_xi g)(x, y) = -g([xi,x], y) - g([xi,y], x)` on basis pairs.
pub fn lie_derivative_metric(g: &LieAlgebra, xi: &Vector, metric: &QMat) -> Result<QMat> {
    if metric.rows() != g.dim() || !metric.is_symmetric() {
        return Err(Error::BadInput("metric must be a symmetric dim x dim matrix".into()));
    }
    let a = g.ad(xi)?.m;
    Ok(a.transpose().mul(metric).add(&metric.mul(&a)).neg())
}

/// Full classification of an almost contact metric structure: builds the
/// fundamental pair, runs [`detect_alpha`], evaluates the four equivalent
/// Killing-type conditions independently (and insists they agree), and sets
/// the K-cosymplectic / normality flags.
pub fn classify(g: &LieAlgebra, s: &AcmStructure) -> Result<StructureReport> {
    let mut report = StructureReport::new();
    let phi_form = fundamental_form(s);
    let pair = check_almost_cosymplectic(g, &s.eta, &phi_form)?;
    report.set(FlagKey::AlmostCosymplectic, FlagStatus::Pass);

    let alpha_res = detect_alpha(g, &pair)?;
    let deta_closed = !matches!(alpha_res, AlphaResult::NotClosed(_));

    match &alpha_res {
        AlphaResult::Alpha(a) => {
            report.alpha = Some(a.clone());
            report.set(FlagKey::AlphaCosymplectic, FlagStatus::Pass);
            report.set(FlagKey::AlmostAlphaCoKahler, FlagStatus::Pass);
            report.set(
                FlagKey::Cosymplectic,
                if a.is_zero() {
                    FlagStatus::Pass
                } else {
                    FlagStatus::Fail(Witness::new("alpha", fmt_q(a)))
                },
            );
        }
        AlphaResult::NotClosed(w) | AlphaResult::NoAlpha(w) => {
            report.set(FlagKey::AlphaCosymplectic, FlagStatus::Fail(w.clone()));
            report.set(FlagKey::AlmostAlphaCoKahler, FlagStatus::Fail(w.clone()));
            report.set(FlagKey::Cosymplectic, FlagStatus::Fail(w.clone()));
        }
    }

    // Normality: N_phi + 2 d(eta) (x) xi = 0.
    let defect = normality_defect(g, s)?;
    let normal_status = match defect.first_nonzero() {
        None => FlagStatus::Pass,
        Some((i, j, v)) => FlagStatus::Fail(Witness::new(
            format!("N({},{})", g.label(i), g.label(j)),
            format!("{:?}", v.0.iter().map(fmt_q).collect::<Vec<_>>()),
        )),
    };
    report.set(FlagKey::Normal, normal_status.clone());

    // alpha-coKaehler = almost alpha-coKaehler + normal.
    let acok = match (&alpha_res, &normal_status) {
        (AlphaResult::Alpha(_), FlagStatus::Fail(w)) => FlagStatus::Fail(w.clone()),
        (AlphaResult::Alpha(_), _) => FlagStatus::Pass,
        (AlphaResult::NotClosed(w), _) | (AlphaResult::NoAlpha(w), _) => {
            FlagStatus::Fail(w.clone())
        }
    };
    report.set(FlagKey::AlphaCoKahler, acok);

    // The four Killing-type conditions need the even-dimensional data, which
    // only exists once eta is closed (ker eta is then a subalgebra).
    if deta_closed {
        let killing = killing_conditions(g, s, report.alpha.as_ref())?;
        if matches!(alpha_res, AlphaResult::Alpha(_)) && !killing.all_equal() {
            return Err(Error::InternalInconsistency(format!(
                "equivalent Killing-type conditions disagree: {:?}",
                killing.as_array()
            )));
        }
        report.killing = Some(killing);

        let lg = lie_derivative_metric(g, &s.xi, &s.metric)?;
        let killing_metric = lg.is_zero();
        let alpha_zero = report.alpha.as_ref().map(|a| a.is_zero()).unwrap_or(false);
        let k_status = if alpha_zero && killing_metric {
            FlagStatus::Pass
        } else if !alpha_zero {
            FlagStatus::Fail(Witness::new(
                "alpha",
                report
                    .alpha
                    .as_ref()
                    .map(fmt_q)
                    .unwrap_or_else(|| "none".into()),
            ))
        } else {
            let (i, j) = first_nonzero_entry(&lg).expect("nonzero");
            FlagStatus::Fail(Witness::new(
                format!("(L_xi g)({},{})", g.label(i), g.label(j)),
                fmt_q(lg.at(i, j)),
            ))
        };
        report.set(FlagKey::KCosymplectic, k_status);
    } else {
        report.set(
            FlagKey::KCosymplectic,
            FlagStatus::Fail(Witness::new("d(eta)", "nonzero")),
        );
    }

    Ok(report)
}

fn first_nonzero_entry(m: &QMat) -> Option<(usize, usize)> {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m.at(i, j).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Evaluates the four equivalent conditions independently. `alpha` defaults
/// to 0 when the pair is not alpha-cosymplectic (the booleans then simply all
/// read false together or record genuine facts about the structure).
pub fn killing_conditions(
    g: &LieAlgebra,
    s: &AcmStructure,
    alpha: Option<&Q>,
) -> Result<KillingConditions> {
    let zero = Q::zero();
    let alpha = alpha.unwrap_or(&zero);
    let dim = g.dim();
    let eta_vec = s.eta.covector()?;

    // (i) L_xi g = 2 alpha (g - eta (x) eta)
    let lg = lie_derivative_metric(g, &s.xi, &s.metric)?;
    let eta_outer = QMat::from_fn(dim, dim, |i, j| &eta_vec[i] * &eta_vec[j]);
    let target = s.metric.sub(&eta_outer).scale(&(qi(2) * alpha));
    let cond_i = lg == target;

    // (ii) (D + alpha I) skew-adjoint for the restricted metric on ker eta.
    let hbasis = kernel_basis(&eta_vec);
    let ad = g.ad(&s.xi)?;
    let d_restricted = restrict_endo(&ad, &hbasis).ok_or_else(|| {
        Error::InternalInconsistency("ad_xi does not preserve ker eta although d(eta)=0".into())
    })?;
    let h_restricted = restrict_bilinear(&s.metric, &hbasis);
    let theta = d_restricted.plus_scalar(alpha);
    let skew = theta
        .m
        .transpose()
        .mul(&h_restricted)
        .add(&h_restricted.mul(&theta.m))
        .is_zero();

    // (iii) DJ = JD on ker eta.
    let j_restricted = restrict_endo(&s.phi, &hbasis).ok_or_else(|| {
        Error::InternalInconsistency("phi does not preserve ker eta".into())
    })?;
    let commutes = d_restricted.commutes_with(&j_restricted);

    // (iv) L_xi phi = 0 on the whole algebra.
    let lphi = lie_derivative_phi(g, &s.xi, &s.phi)?;

    Ok(KillingConditions {
        conformal_killing_metric: cond_i,
        skew_adjoint: skew,
        commutes_with_j: commutes,
        phi_invariant: lphi.is_zero(),
    })
}

/// Canonical basis of `ker eta` (reduced echelon, original index order).
pub fn kernel_basis(eta: &[Q]) -> Vec<Vector> {
    let m = QMat::from_rows(vec![eta.to_vec()]);
    m.nullspace().into_iter().map(Vector).collect()
}

/// Coordinates of `endo` restricted to the span of `basis`, or `None` when
/// the span is not invariant.
pub fn restrict_endo(endo: &Endo, basis: &[Vector]) -> Option<Endo> {
    let dim = endo.dim();
    let m = basis.len();
    let bmat = QMat::from_fn(dim, m, |r, c| basis[c].0[r].clone());
    let mut cols = Vec::with_capacity(m);
    for b in basis {
        let img = endo.apply(b);
        let sol = bmat.solve(&img.0)?;
        cols.push(sol.particular);
    }
    Some(Endo::from_mat(QMat::from_fn(m, m, |r, c| cols[c][r].clone())))
}

/// Gram matrix of a bilinear form restricted to the span of `basis`.
pub fn restrict_bilinear(gram: &QMat, basis: &[Vector]) -> QMat {
    let m = basis.len();
    QMat::from_fn(m, m, |i, j| {
        let gi = gram.mul_vec(&basis[j].0);
        basis[i]
            .0
            .iter()
            .zip(&gi)
            .map(|(a, b)| a * b)
            .fold(Q::zero(), |acc, x| acc + x)
    })
}

/// Exact Darboux basis for a nondegenerate 2-form: columns `u1,v1,u2,v2,...`
/// with `omega(u_k, v_k) = 1` and all other pairings zero.
pub fn darboux_basis(omega: &KForm) -> Result<QMat> {
    let w = omega.gram()?;
    let dim = w.rows();
    if dim % 2 == 1 {
        return Err(Error::NotNondegenerate);
    }
    let pairing = |x: &Vec<Q>, y: &Vec<Q>| -> Q {
        let wy = w.mul_vec(y);
        x.iter()
            .zip(&wy)
            .map(|(a, b)| a * b)
            .fold(Q::zero(), |acc, q| acc + q)
    };
    let mut remaining: Vec<Vec<Q>> = (0..dim)
        .map(|i| {
            let mut v = vec![Q::zero(); dim];
            v[i] = qi(1);
            v
        })
        .collect();
    let mut columns: Vec<Vec<Q>> = Vec::with_capacity(dim);
    while !remaining.is_empty() {
        let u = remaining.remove(0);
        let Some(vpos) = remaining.iter().position(|r| !pairing(&u, r).is_zero()) else {
            return Err(Error::NotNondegenerate);
        };
        let mut v = remaining.remove(vpos);
        let c = pairing(&u, &v);
        let cinv = c.recip();
        for entry in v.iter_mut() {
            *entry = &*entry * &cinv;
        }
        // Make the rest symplectically orthogonal to the pair (u, v).
        for r in remaining.iter_mut() {
            let a = pairing(r, &v);
            let b = pairing(&u, r);
            for k in 0..dim {
                let adj = &r[k] - &a * &u[k] - &b * &v[k];
                r[k] = adj;
            }
        }
        columns.push(u);
        columns.push(v);
    }
    Ok(QMat::from_fn(dim, dim, |r, c| columns[c][r].clone()))
}

/// A rational compatible almost complex structure and metric for a
/// nondegenerate 2-form: `J = P J0 P^{-1}`, `h = P^{-T} P^{-1}` over a
/// Darboux basis `P`, so that `h(x, Jy) = omega(x, y)` and `h > 0`.
pub fn compatible_acs(omega: &KForm) -> Result<(Endo, QMat)> {
    let p = darboux_basis(omega)?;
    let dim = p.rows();
    let mut j0 = QMat::zeros(dim, dim);
    for k in 0..dim / 2 {
        // J0 u = -v, J0 v = u on each Darboux pair.
        *j0.at_mut(2 * k + 1, 2 * k) = qi(-1);
        *j0.at_mut(2 * k, 2 * k + 1) = qi(1);
    }
    let pinv = p.inverse().ok_or(Error::NotNondegenerate)?;
    let j = p.mul(&j0).mul(&pinv);
    let h = pinv.transpose().mul(&pinv);
    Ok((Endo::from_mat(j), h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::BracketEntry;
    use crate::rat::{qi, qr};

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

    fn standard_pair(dim: usize) -> (LieAlgebra, CosymPair) {
        let g = LieAlgebra::abelian(dim);
        let eta = e(dim, &[0]);
        let mut omega = KForm::zero(dim, 2);
        for k in 0..dim / 2 {
            omega = omega.add(&e(dim, &[2 * k + 1, 2 * k + 2])).unwrap();
        }
        let pair = check_almost_cosymplectic(&g, &eta, &omega).unwrap();
        (g, pair)
    }

    #[test]
    fn volume_check() {
        let g = LieAlgebra::abelian(5);
        let omega = e(5, &[1, 2]).add(&e(5, &[3, 4])).unwrap();
        assert!(check_almost_cosymplectic(&g, &e(5, &[0]), &omega).is_ok());
        assert!(matches!(
            check_almost_cosymplectic(&g, &e(5, &[1]), &omega),
            Err(Error::NotVolume)
        ));
        assert!(matches!(
            check_almost_cosymplectic(&LieAlgebra::abelian(4), &e(4, &[0]), &KForm::zero(4, 2)),
            Err(Error::EvenDimension { dim: 4 })
        ));
    }

    #[test]
    fn reeb_vector_cases() {
        let (g, pair) = standard_pair(5);
        assert_eq!(reeb_vector(&g, &pair).unwrap(), Vector::basis(5, 0));

        // eta = e1 + e3, omega = e^{12} on R^3: xi = e3.
        let g3 = LieAlgebra::abelian(3);
        let eta = e(3, &[0]).add(&e(3, &[2])).unwrap();
        let omega = e(3, &[0, 1]);
        let pair = check_almost_cosymplectic(&g3, &eta, &omega).unwrap();
        assert_eq!(reeb_vector(&g3, &pair).unwrap(), Vector::basis(3, 2));
    }

    #[test]
    fn detect_alpha_on_abelian() {
        let (g, pair) = standard_pair(5);
        assert_eq!(detect_alpha(&g, &pair).unwrap(), AlphaResult::Alpha(qi(0)));
    }

    #[test]
    fn detect_alpha_not_closed() {
        // [e2,e3] = e1 with eta = e^1 gives d(eta) != 0.
        let g = LieAlgebra::new(3, &[entry(1, 2, &[(0, 1)])]).unwrap();
        let eta = e(3, &[0]);
        let omega = e(3, &[1, 2]);
        let pair = check_almost_cosymplectic(&g, &eta, &omega).unwrap();
        assert!(matches!(
            detect_alpha(&g, &pair).unwrap(),
            AlphaResult::NotClosed(_)
        ));
    }

    #[test]
    fn symplectic_check() {
        let h = LieAlgebra::abelian(4);
        let good = e(4, &[0, 1]).add(&e(4, &[2, 3])).unwrap();
        let rep = check_symplectic(&h, &good).unwrap();
        assert!(rep.passed(FlagKey::AlmostSymplectic));
        assert!(rep.passed(FlagKey::Symplectic));

        let degenerate = e(4, &[0, 1]);
        let rep = check_symplectic(&h, &degenerate).unwrap();
        assert!(!rep.passed(FlagKey::AlmostSymplectic));
        assert!(matches!(
            check_symplectic(&LieAlgebra::abelian(3), &KForm::zero(3, 2)),
            Err(Error::OddDimension { dim: 3 })
        ));
    }

    #[test]
    fn ist_two_routes_agree() {
        let omega = e(4, &[0, 1]).add(&e(4, &[2, 3])).unwrap();
        let theta = Endo::from_mat(QMat::from_rows(vec![
            vec![qi(1), qi(2), qi(0), qi(-1)],
            vec![qi(0), qi(-1), qi(3), qi(0)],
            vec![qi(2), qi(0), qi(1), qi(1)],
            vec![qi(0), qi(1), qi(0), qi(-1)],
        ]));
        let via_f = f_form(&omega, &theta).unwrap().is_symmetric();
        let via_defect = ist_defect(&omega, &theta).unwrap().is_zero();
        assert_eq!(via_f, via_defect);
        assert!(is_ist(&omega, &Endo::zero(4)).unwrap());
        assert!(!is_ist(&omega, &Endo::identity(4)).unwrap());
    }

    #[test]
    fn ist_space_on_abelian_r4() {
        // On the abelian R^4 with omega = e^{12} + e^{34} and alpha = 0, the
        // i.s.t. derivations are sp(4) intersected with gl = sp(4): dim 10.
        let h = LieAlgebra::abelian(4);
        let omega = e(4, &[0, 1]).add(&e(4, &[2, 3])).unwrap();
        let sp = ist_derivation_space(&h, &omega, &qi(0)).unwrap();
        assert_eq!(sp.dim(), 10);
        assert!(sp.is_linear());
        for b in &sp.basis {
            assert!(is_ist(&omega, b).unwrap());
        }

        // alpha != 0: affine, particular solution has trace -4 alpha... in
        // fact theta = D + alpha I must be in sp(4), so tr D = -4 alpha.
        let affine = ist_derivation_space(&h, &omega, &qi(3)).unwrap();
        assert_eq!(affine.dim(), 10);
        let member = affine.at(&vec![qi(0); 10]);
        assert!(is_ist(&omega, &member.plus_scalar(&qi(3))).unwrap());
    }

    #[test]
    fn alpha_recovery() {
        let omega = e(4, &[0, 1]).add(&e(4, &[2, 3])).unwrap();
        let d = Endo::identity(4).scale(&qr(-3, 2));
        // D = -3/2 I: D + 3/2 I = 0 is an i.s.t., so alpha = 3/2.
        assert_eq!(
            alpha_for_derivation(&omega, &d).unwrap(),
            Some(qr(3, 2))
        );
        // A derivation with no valid alpha.
        let mut bad = QMat::zeros(4, 4);
        *bad.at_mut(0, 0) = qi(1);
        assert_eq!(
            alpha_for_derivation(&omega, &Endo::from_mat(bad)).unwrap(),
            None
        );
    }

    #[test]
    fn acm_standard_structure() {
        let g = LieAlgebra::abelian(5);
        // phi: block J on span(e2..e5), xi = e1, eta = e^1, g = I.
        let mut phi = QMat::zeros(5, 5);
        *phi.at_mut(2, 1) = qi(1);
        *phi.at_mut(1, 2) = qi(-1);
        *phi.at_mut(4, 3) = qi(1);
        *phi.at_mut(3, 4) = qi(-1);
        let phi = Endo::from_mat(phi);
        let s = check_acm(
            &g,
            &phi,
            &Vector::basis(5, 0),
            &e(5, &[0]),
            &QMat::identity(5),
        )
        .unwrap();
        let ff = fundamental_form(&s);
        // Phi(x,y) = g(x, phi y): Phi(e2,e3) = g(e2, phi e3) = g(e2,-e2)?
        // phi e2 = e3 here, so Phi(e2,e3) = g(e2, phi e3).
        assert_eq!(ff.gram().unwrap(), s.metric.mul(&s.phi.m));

        // eta(xi) = 0 is rejected.
        let err = check_acm(
            &g,
            &phi,
            &Vector::basis(5, 1),
            &e(5, &[0]),
            &QMat::identity(5),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotAcm { identity, .. } if identity == "eta(xi)=1"));
    }

    #[test]
    fn nijenhuis_vanishes_on_abelian() {
        let g = LieAlgebra::abelian(4);
        let (j, _) = compatible_acs(&e(4, &[0, 1]).add(&e(4, &[2, 3])).unwrap()).unwrap();
        let mut phi = QMat::zeros(4, 4);
        for i in 0..4 {
            for k in 0..4 {
                *phi.at_mut(i, k) = j.m.at(i, k).clone();
            }
        }
        let n = nijenhuis(&g, &Endo::from_mat(phi)).unwrap();
        assert!(n.is_zero());
    }

    #[test]
    fn darboux_and_compatible_acs() {
        // A 2-form with an overlapping pair: e^{12} - e^{34} + e^{24}.
        let omega = e(4, &[0, 1])
            .sub(&e(4, &[2, 3]))
            .unwrap()
            .add(&e(4, &[1, 3]))
            .unwrap();
        let p = darboux_basis(&omega).unwrap();
        let w = omega.gram().unwrap();
        let canonical = p.transpose().mul(&w).mul(&p);
        // P^T W P must be the standard block form.
        let mut expected = QMat::zeros(4, 4);
        *expected.at_mut(0, 1) = qi(1);
        *expected.at_mut(1, 0) = qi(-1);
        *expected.at_mut(2, 3) = qi(1);
        *expected.at_mut(3, 2) = qi(-1);
        assert_eq!(canonical, expected);

        let (j, h) = compatible_acs(&omega).unwrap();
        assert_eq!(j.compose(&j).m, QMat::identity(4).neg());
        assert!(h.is_positive_definite());
        // h(x, Jy) = omega(x, y) as matrices: H J = W.
        assert_eq!(h.mul(&j.m), w);
        // Compatibility: J^T H J = H.
        assert_eq!(j.m.transpose().mul(&h).mul(&j.m), h);

        let degenerate = e(4, &[0, 1]);
        assert!(darboux_basis(&degenerate).is_err());
    }

    #[test]
    fn lie_derivatives_on_abelian_vanish() {
        let g = LieAlgebra::abelian(5);
        let xi = Vector::basis(5, 0);
        let phi = Endo::identity(5);
        assert!(lie_derivative_phi(&g, &xi, &phi).unwrap().is_zero());
        assert!(lie_derivative_metric(&g, &xi, &QMat::identity(5))
            .unwrap()
            .is_zero());
    }
}
