//! Structure-constant Lie algebras over the rationals.
//!
//! A [`LieAlgebra`] stores the full antisymmetric tensor `c[i][j][k]` with
//! `[e_i, e_j] = sum_k c[i][j][k] e_k`. The Jacobi identity is *not* enforced
//! at construction; callers that need it run [`LieAlgebra::jacobi_defect`]
//! explicitly, so that checking invalid input is itself an operation.

use crate::error::Error;
use crate::linalg::{complete_basis, in_span, span_rref, QMat};
use crate::rat::Q;
use crate::Result;
use num::Zero;
use std::fmt;

/// Element of the algebra: coordinates in the fixed basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector(pub Vec<Q>);

impl Vector {
    pub fn zero(dim: usize) -> Self {
        Vector(vec![Q::zero(); dim])
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Vector::zero(dim);
        v.0[k] = crate::rat::qi(1);
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|q| q.is_zero())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Q) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }
}

/// Endomorphism in the fixed basis, column convention: the image of `e_j`
/// is column `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endo {
    pub m: QMat,
}

impl Endo {
    pub fn zero(dim: usize) -> Self {
        Endo {
            m: QMat::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Endo {
            m: QMat::identity(dim),
        }
    }

    pub fn from_mat(m: QMat) -> Self {
        assert!(m.is_square());
        Endo { m }
    }

    /// Builds from a list of columns `(j, image-of-e_j)`; unlisted columns
    /// are zero.
    pub fn from_columns(dim: usize, cols: &[(usize, Vector)]) -> Self {
        let mut m = QMat::zeros(dim, dim);
        for (j, v) in cols {
            assert_eq!(v.dim(), dim);
            for i in 0..dim {
                *m.at_mut(i, *j) = v.0[i].clone();
            }
        }
        Endo { m }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Vector(self.m.mul_vec(&v.0))
    }

    pub fn compose(&self, other: &Endo) -> Endo {
        Endo {
            m: self.m.mul(&other.m),
        }
    }

    pub fn add(&self, other: &Endo) -> Endo {
        Endo {
            m: self.m.add(&other.m),
        }
    }

    pub fn sub(&self, other: &Endo) -> Endo {
        Endo {
            m: self.m.sub(&other.m),
        }
    }

    pub fn scale(&self, s: &Q) -> Endo {
        Endo { m: self.m.scale(s) }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn inverse(&self) -> Option<Endo> {
        self.m.inverse().map(|m| Endo { m })
    }

    /// `self + alpha * I`.
    pub fn plus_scalar(&self, alpha: &Q) -> Endo {
        self.add(&Endo::identity(self.dim()).scale(alpha))
    }

    pub fn commutes_with(&self, other: &Endo) -> bool {
        self.compose(other) == other.compose(self)
    }
}

/// Linear or affine space of endomorphisms: `particular + span(basis)`.
///
/// Derivation spaces are linear (zero particular part); the solution sets of
/// inhomogeneous conditions such as `theta^T W + W theta = -2 alpha W` are
/// affine. The basis is the canonical reduced-echelon nullspace basis, so two
/// computations of the same space produce identical data.
#[derive(Debug, Clone)]
pub struct MatSpace {
    pub ambient_dim: usize,
    pub particular: Endo,
    pub basis: Vec<Endo>,
}

impl MatSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_linear(&self) -> bool {
        self.particular.is_zero()
    }

    /// The member at the given coefficients (one per basis element).
    pub fn at(&self, coeffs: &[Q]) -> Endo {
        assert_eq!(coeffs.len(), self.basis.len());
        let mut e = self.particular.clone();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            e = e.add(&b.scale(c));
        }
        e
    }

    /// Membership test: `m` lies in `particular + span(basis)`.
    pub fn contains(&self, m: &Endo) -> bool {
        let diff = m.sub(&self.particular).m.flatten();
        let basis: Vec<Vec<Q>> = self.basis.iter().map(|b| b.m.flatten()).collect();
        in_span(&basis, &diff)
    }

    /// Equality as affine sets: same span and the particular parts differ by
    /// an element of the span.
    pub fn same_space(&self, other: &MatSpace) -> bool {
        if self.ambient_dim != other.ambient_dim || self.dim() != other.dim() {
            return false;
        }
        let n = self.ambient_dim * self.ambient_dim;
        let a: Vec<Vec<Q>> = self.basis.iter().map(|b| b.m.flatten()).collect();
        let b: Vec<Vec<Q>> = other.basis.iter().map(|x| x.m.flatten()).collect();
        if span_rref(&a, n) != span_rref(&b, n) {
            return false;
        }
        let diff = self.particular.sub(&other.particular).m.flatten();
        in_span(&a, &diff)
    }
}

/// Bracket table entry used when building an algebra: `[e_i, e_j]` has the
/// sparse coefficient list `out`.
#[derive(Debug, Clone)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub out: Vec<(usize, Q)>,
}

/// Finite-dimensional Lie algebra given by rational structure constants.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    /// `c[i][j][k]`: coefficient of `e_k` in `[e_i, e_j]`.
    c: Vec<Vec<Vec<Q>>>,
    labels: Vec<String>,
}

impl fmt::Debug for LieAlgebra {
    /// Prints only the nonzero upper-triangle brackets.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra(dim {}; ", self.dim)?;
        let mut first = true;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.bracket_basis(i, j);
                if !v.is_zero() {
                    if !first {
                        write!(f, ", ")?;
                    }
                    first = false;
                    write!(f, "[{},{}]=", self.labels[i], self.labels[j])?;
                    let terms: Vec<String> = v
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(_, q)| !q.is_zero())
                        .map(|(k, q)| format!("{}*{}", q, self.labels[k]))
                        .collect();
                    write!(f, "{}", terms.join("+"))?;
                }
            }
        }
        write!(f, ")")
    }
}

impl LieAlgebra {
    /// Builds the algebra from upper-triangle bracket entries (`i < j`); the
    /// antisymmetric completion is stored. Jacobi is *not* checked here.
    pub fn new(dim: usize, entries: &[BracketEntry]) -> Result<Self> {
        let mut c = vec![vec![vec![Q::zero(); dim]; dim]; dim];
        let mut seen = std::collections::BTreeSet::new();
        for e in entries {
            if e.i >= dim {
                return Err(Error::IndexOutOfRange { index: e.i, dim });
            }
            if e.j >= dim {
                return Err(Error::IndexOutOfRange { index: e.j, dim });
            }
            if e.i >= e.j {
                return Err(Error::NotUpperTriangular { i: e.i, j: e.j });
            }
            if !seen.insert((e.i, e.j)) {
                return Err(Error::DuplicateEntry { i: e.i, j: e.j });
            }
            for (k, coeff) in &e.out {
                if *k >= dim {
                    return Err(Error::IndexOutOfRange { index: *k, dim });
                }
                c[e.i][e.j][*k] = &c[e.i][e.j][*k] + coeff;
                c[e.j][e.i][*k] = &c[e.j][e.i][*k] - coeff;
            }
        }
        Ok(LieAlgebra {
            dim,
            c,
            labels: default_labels(dim, 1),
        })
    }

    /// The abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Self {
        LieAlgebra::new(dim, &[]).expect("no entries")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Raw structure constant `c[i][j][k]`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.c[i][j][k]
    }

    /// `[e_i, e_j]` as a vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        Vector(self.c[i][j].clone())
    }

    /// Bilinear antisymmetric contraction with the structure tensor.
    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_dim(x.dim())?;
        self.check_dim(y.dim())?;
        let mut out = vec![Q::zero(); self.dim];
        for i in 0..self.dim {
            if x.0[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y.0[j].is_zero() {
                    continue;
                }
                let xy = &x.0[i] * &y.0[j];
                for (k, out_k) in out.iter_mut().enumerate() {
                    if !self.c[i][j][k].is_zero() {
                        *out_k += &xy * &self.c[i][j][k];
                    }
                }
            }
        }
        Ok(Vector(out))
    }

    /// All Jacobi violations `(i, j, k, defect)` with
    /// `defect = [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
    /// Empty iff the structure constants define a Lie algebra.
    pub fn jacobi_defect(&self) -> Vec<(usize, usize, usize, Vector)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let mut defect = vec![Q::zero(); self.dim];
                    for (l, d) in defect.iter_mut().enumerate() {
                        for m in 0..self.dim {
                            *d += &self.c[i][j][m] * &self.c[m][k][l]
                                + &self.c[j][k][m] * &self.c[m][i][l]
                                + &self.c[k][i][m] * &self.c[m][j][l];
                        }
                    }
                    let v = Vector(defect);
                    if !v.is_zero() {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    /// `ad_x`: the endomorphism `y -> [x, y]`.
    pub fn ad(&self, x: &Vector) -> Result<Endo> {
        self.check_dim(x.dim())?;
        let cols: Vec<(usize, Vector)> = (0..self.dim)
            .map(|j| {
                let ej = Vector::basis(self.dim, j);
                (j, self.bracket(x, &ej).expect("dims checked"))
            })
            .collect();
        Ok(Endo::from_columns(self.dim, &cols))
    }

    /// Leibniz check `D[e_i,e_j] = [De_i,e_j] + [e_i,De_j]` on all pairs.
    pub fn is_derivation(&self, d: &Endo) -> Result<bool> {
        Ok(self.derivation_defect(d)?.is_none())
    }

    /// First pair where the Leibniz rule fails, if any.
    pub fn derivation_defect(&self, d: &Endo) -> Result<Option<(usize, usize)>> {
        self.check_dim(d.dim())?;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let lhs = d.apply(&self.bracket_basis(i, j));
                let dei = d.apply(&Vector::basis(self.dim, i));
                let dej = d.apply(&Vector::basis(self.dim, j));
                let rhs = self
                    .bracket(&dei, &Vector::basis(self.dim, j))?
                    .add(&self.bracket(&Vector::basis(self.dim, i), &dej)?);
                if lhs != rhs {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// The space of derivations, as the exact nullspace of the Leibniz
    /// conditions. The basis is canonical (reduced echelon form).
    pub fn derivation_space(&self) -> MatSpace {
        let n = self.dim;
        let rows = self.derivation_rows();
        let sys = QMat::from_rows(if rows.is_empty() {
            vec![vec![Q::zero(); n * n]]
        } else {
            rows
        });
        let basis = sys
            .nullspace()
            .into_iter()
            .map(|v| Endo::from_mat(QMat::from_flat(n, n, v)))
            .collect();
        MatSpace {
            ambient_dim: n,
            particular: Endo::zero(n),
            basis,
        }
    }

    /// Coefficient rows of the linear system `D is a derivation`, unknowns
    /// ordered row-major `D[l][m] -> l*dim + m`.
    pub(crate) fn derivation_rows(&self) -> Vec<Vec<Q>> {
        let n = self.dim;
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for l in 0..n {
                    let mut row = vec![Q::zero(); n * n];
                    for m in 0..n {
                        // D[e_i,e_j]: c[i][j][m] * D[l][m]
                        row[l * n + m] = &row[l * n + m] + &self.c[i][j][m];
                        // -[De_i, e_j]: -c[m][j][l] * D[m][i]
                        row[m * n + i] = &row[m * n + i] - &self.c[m][j][l];
                        // -[e_i, De_j]: -c[i][m][l] * D[m][j]
                        row[m * n + j] = &row[m * n + j] - &self.c[i][m][l];
                    }
                    rows.push(row);
                }
            }
        }
        rows
    }

    /// Structure constants of the span of `basis` in the given basis, plus a
    /// full change-of-basis matrix whose first columns are that basis.
    /// Fails if the span is not closed under the bracket.
    pub fn restrict_to_subspace(&self, basis: &[Vector]) -> Result<(LieAlgebra, Endo)> {
        for b in basis {
            self.check_dim(b.dim())?;
        }
        let m = basis.len();
        let cols: Vec<Vec<Q>> = basis.iter().map(|v| v.0.clone()).collect();
        let change = complete_basis(&cols, self.dim)?;
        // Coordinates in the span: solve B * gamma = [b_i, b_j].
        let bmat = QMat::from_fn(self.dim, m, |r, c| basis[c].0[r].clone());
        let mut entries = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                let w = self.bracket(&basis[i], &basis[j])?;
                let Some(sol) = bmat.solve(&w.0) else {
                    return Err(Error::NotASubalgebra { i, j });
                };
                let out: Vec<(usize, Q)> = sol
                    .particular
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
        let sub = LieAlgebra::new(m, &entries)?;
        Ok((sub, Endo::from_mat(change)))
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                got,
            })
        } else {
            Ok(())
        }
    }
}

pub(crate) fn default_labels(dim: usize, first: usize) -> Vec<String> {
    (0..dim).map(|i| format!("e{}", i + first)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{qi, qr};

    fn entry(i: usize, j: usize, out: &[(usize, i64)]) -> BracketEntry {
        BracketEntry {
            i,
            j,
            out: out.iter().map(|&(k, v)| (k, qi(v))).collect(),
        }
    }

    /// aff(C): [e1,e3]=e3, [e1,e4]=e4, [e2,e3]=e4, [e2,e4]=-e3.
    fn r2prime() -> LieAlgebra {
        LieAlgebra::new(
            4,
            &[
                entry(0, 2, &[(2, 1)]),
                entry(0, 3, &[(3, 1)]),
                entry(1, 2, &[(3, 1)]),
                entry(1, 3, &[(2, -1)]),
            ],
        )
        .unwrap()
    }

    fn heis3() -> LieAlgebra {
        LieAlgebra::new(3, &[entry(0, 1, &[(2, 1)])]).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            LieAlgebra::new(2, &[entry(2, 0, &[(0, 1)])]),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        ));
        assert!(matches!(
            LieAlgebra::new(3, &[entry(0, 1, &[(2, 1)]), entry(0, 1, &[(2, 1)])]),
            Err(Error::DuplicateEntry { i: 0, j: 1 })
        ));
        assert!(matches!(
            LieAlgebra::new(3, &[entry(1, 0, &[(2, 1)])]),
            Err(Error::NotUpperTriangular { i: 1, j: 0 })
        ));
    }

    #[test]
    fn bracket_on_r2prime() {
        let g = r2prime();
        let e1 = Vector::basis(4, 0);
        let e3 = Vector::basis(4, 2);
        assert_eq!(g.bracket(&e1, &e3).unwrap(), Vector::basis(4, 2));
        // Antisymmetry on a mixed vector.
        let x = e1.add(&e3.scale(&qr(1, 2)));
        assert!(g.bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn jacobi_holds_for_sl2_and_fails_when_corrupted() {
        // lambda1 = lambda2 = lambda3 = 1 on the 3-dimensional factor.
        let sl2 = LieAlgebra::new(
            4,
            &[
                entry(1, 2, &[(3, 1)]),
                entry(2, 3, &[(1, 1)]),
                entry(1, 3, &[(2, -1)]),
            ],
        )
        .unwrap();
        assert!(sl2.jacobi_defect().is_empty());
        assert!(LieAlgebra::abelian(5).jacobi_defect().is_empty());

        // Heisenberg with a corrupting extra bracket [e1,e3]=e1:
        // [[e1,e2],e3] + [[e2,e3],e1] + [[e3,e1],e2] = [e3,e3] + 0 - [e1,e2]
        // = -e3, a nonzero defect on the triple (0,1,2).
        let bad = LieAlgebra::new(
            3,
            &[entry(0, 1, &[(2, 1)]), entry(0, 2, &[(0, 1)])],
        )
        .unwrap();
        let defects = bad.jacobi_defect();
        assert_eq!(defects.len(), 1);
        let (i, j, k, d) = &defects[0];
        assert_eq!((*i, *j, *k), (0, 1, 2));
        assert_eq!(*d, Vector(vec![qi(0), qi(0), qi(-1)]));
    }

    #[test]
    fn ad_matches_bracket_columns_and_is_a_derivation() {
        let g = r2prime();
        let ad1 = g.ad(&Vector::basis(4, 0)).unwrap();
        assert_eq!(ad1.apply(&Vector::basis(4, 2)), Vector::basis(4, 2));
        assert_eq!(ad1.apply(&Vector::basis(4, 3)), Vector::basis(4, 3));
        assert!(ad1.apply(&Vector::basis(4, 0)).is_zero());
        assert!(g.is_derivation(&ad1).unwrap());

        let mixed = Vector(vec![qi(1), qi(-2), qr(1, 3), qi(0)]);
        assert!(g.is_derivation(&g.ad(&mixed).unwrap()).unwrap());
        assert!(LieAlgebra::abelian(3)
            .ad(&Vector::basis(3, 1))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn identity_is_a_derivation_only_when_abelian() {
        assert!(LieAlgebra::abelian(4)
            .is_derivation(&Endo::identity(4))
            .unwrap());
        // On the Heisenberg algebra I[e1,e2] = e3 but [Ie1,e2]+[e1,Ie2] = 2e3.
        assert!(!heis3().is_derivation(&Endo::identity(3)).unwrap());
    }

    #[test]
    fn derivation_space_dimensions() {
        // All endomorphisms on an abelian algebra.
        assert_eq!(LieAlgebra::abelian(3).derivation_space().dim(), 9);
        // Der(h3) is 6-dimensional.
        let der = heis3().derivation_space();
        assert_eq!(der.dim(), 6);
        for b in &der.basis {
            assert!(heis3().is_derivation(b).unwrap());
        }
    }

    #[test]
    fn restrict_to_subspace_cases() {
        let h = heis3();
        // span(e1,e2) is not closed: [e1,e2] = e3.
        let err = h
            .restrict_to_subspace(&[Vector::basis(3, 0), Vector::basis(3, 1)])
            .unwrap_err();
        assert_eq!(err, Error::NotASubalgebra { i: 0, j: 1 });

        // Any single vector spans an abelian line.
        let (line, _) = h
            .restrict_to_subspace(&[Vector(vec![qi(1), qi(2), qi(3)])])
            .unwrap();
        assert_eq!(line.dim(), 1);
        assert!(line.jacobi_defect().is_empty());

        // Dependent input is rejected.
        assert_eq!(
            h.restrict_to_subspace(&[Vector::basis(3, 0), Vector::basis(3, 0)])
                .unwrap_err(),
            Error::LinearlyDependentBasis
        );

        // Restricting r2' to span(e3,e4) gives the abelian plane, and
        // re-embedding reproduces the ambient brackets.
        let g = r2prime();
        let basis = vec![Vector::basis(4, 2), Vector::basis(4, 3)];
        let (sub, change) = g.restrict_to_subspace(&basis).unwrap();
        assert!(sub
            .bracket(&Vector::basis(2, 0), &Vector::basis(2, 1))
            .unwrap()
            .is_zero());
        // First columns of the change matrix are the basis itself.
        assert_eq!(change.m.col(0), basis[0].0);
        assert_eq!(change.m.col(1), basis[1].0);
    }

    #[test]
    fn matspace_membership_and_equality() {
        let der = heis3().derivation_space();
        let member = der.at(&(0..6).map(|i| qi(i as i64 - 3)).collect::<Vec<_>>());
        assert!(der.contains(&member));
        assert!(!der.contains(&Endo::identity(3)));
        let again = heis3().derivation_space();
        assert!(der.same_space(&again));
    }
}
