//! Left-invariant exterior forms and the Chevalley-Eilenberg differential.
//!
//! A [`KForm`] keeps its coefficients on strictly increasing index tuples,
//! with signs absorbed during canonicalization, so equality of forms is a map
//! comparison. Forms carry only the ambient dimension; the differential takes
//! the algebra explicitly, because the same form is reused across different
//! bracket structures.

use crate::error::Error;
use crate::lie::{Endo, LieAlgebra, Vector};
use crate::linalg::QMat;
use crate::rat::Q;
use crate::Result;
use num::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Alternating k-form with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct KForm {
    dim: usize,
    degree: usize,
    /// Strictly increasing tuples -> nonzero coefficients.
    terms: BTreeMap<Vec<usize>, Q>,
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        KForm {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Degree-0 form (a constant).
    pub fn scalar(dim: usize, value: Q) -> Self {
        let mut f = KForm::zero(dim, 0);
        if !value.is_zero() {
            f.terms.insert(vec![], value);
        }
        f
    }

    /// `e^{i1...ik}` for 0-based indices, canonicalizing order and sign.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        KForm::from_terms(dim, indices.len(), vec![(indices.to_vec(), crate::rat::qi(1))])
    }

    /// Builds a form from (tuple, coefficient) terms. Tuples are sorted with
    /// the permutation sign absorbed; repeated indices kill the term; terms
    /// on the same tuple accumulate.
    pub fn from_terms(dim: usize, degree: usize, raw: Vec<(Vec<usize>, Q)>) -> Result<Self> {
        let mut terms: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
        for (idx, coeff) in raw {
            if idx.len() != degree {
                return Err(Error::WrongDegree {
                    expected: degree,
                    got: idx.len(),
                });
            }
            for &i in &idx {
                if i >= dim {
                    return Err(Error::IndexOutOfRange { index: i, dim });
                }
            }
            let Some((sorted, sign)) = sort_with_sign(&idx) else {
                continue; // repeated index
            };
            let signed = if sign { -coeff } else { coeff };
            let slot = terms.entry(sorted).or_insert_with(Q::zero);
            *slot += signed;
        }
        terms.retain(|_, v| !v.is_zero());
        Ok(KForm { dim, degree, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.terms.iter()
    }

    /// Coefficient on a strictly increasing tuple.
    pub fn coeff(&self, idx: &[usize]) -> Q {
        self.terms.get(idx).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient on an arbitrary tuple, resolving sign; 0 on repeats.
    pub fn coeff_signed(&self, idx: &[usize]) -> Q {
        match sort_with_sign(idx) {
            None => Q::zero(),
            Some((sorted, sign)) => {
                let c = self.coeff(&sorted);
                if sign {
                    -c
                } else {
                    c
                }
            }
        }
    }

    pub fn add(&self, other: &KForm) -> Result<KForm> {
        self.check_compat(other)?;
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let slot = terms.entry(k.clone()).or_insert_with(Q::zero);
            *slot += v;
        }
        terms.retain(|_, v| !v.is_zero());
        Ok(KForm {
            dim: self.dim,
            degree: self.degree,
            terms,
        })
    }

    pub fn sub(&self, other: &KForm) -> Result<KForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KForm {
        self.scale(&-crate::rat::qi(1))
    }

    pub fn scale(&self, s: &Q) -> KForm {
        if s.is_zero() {
            return KForm::zero(self.dim, self.degree);
        }
        KForm {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
        }
    }

    /// Graded-antisymmetric shuffle product. Degrees beyond the dimension
    /// give the zero form.
    pub fn wedge(&self, other: &KForm) -> Result<KForm> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let degree = self.degree + other.degree;
        if degree > self.dim {
            return Ok(KForm::zero(self.dim, degree.min(self.dim + 1)));
        }
        let mut out = KForm::zero(self.dim, degree);
        for (i_idx, a) in &self.terms {
            for (j_idx, b) in &other.terms {
                if i_idx.iter().any(|i| j_idx.contains(i)) {
                    continue;
                }
                let mut merged = Vec::with_capacity(degree);
                merged.extend_from_slice(i_idx);
                merged.extend_from_slice(j_idx);
                let (sorted, sign) = sort_with_sign(&merged).expect("disjoint tuples");
                let c = a * b;
                let c = if sign { -c } else { c };
                let slot = out.terms.entry(sorted).or_insert_with(Q::zero);
                *slot += c;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// n-fold wedge power (`wedge_pow(0)` is the constant 1).
    pub fn wedge_pow(&self, n: usize) -> Result<KForm> {
        let mut acc = KForm::scalar(self.dim, crate::rat::qi(1));
        for _ in 0..n {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Full alternating multilinear evaluation.
    pub fn eval(&self, xs: &[&Vector]) -> Result<Q> {
        if xs.len() != self.degree {
            return Err(Error::ArityMismatch {
                degree: self.degree,
                got: xs.len(),
            });
        }
        for x in xs {
            if x.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: x.dim(),
                });
            }
        }
        let k = self.degree;
        let mut acc = Q::zero();
        for (idx, c) in &self.terms {
            // minor determinant det( xs[col][idx[row]] )
            let minor = QMat::from_fn(k, k, |r, col| xs[col].0[idx[r]].clone());
            let d = if k == 0 { crate::rat::qi(1) } else { minor.det() };
            if !d.is_zero() {
                acc += c * d;
            }
        }
        Ok(acc)
    }

    /// Contraction in the first slot.
    pub fn interior(&self, x: &Vector) -> Result<KForm> {
        if self.degree == 0 {
            return Err(Error::DegreeZero);
        }
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        let mut out = KForm::zero(self.dim, self.degree - 1);
        for (idx, c) in &self.terms {
            for (pos, &m) in idx.iter().enumerate() {
                if x.0[m].is_zero() {
                    continue;
                }
                let mut rest: Vec<usize> = idx.clone();
                rest.remove(pos);
                let mut v = &x.0[m] * c;
                if pos % 2 == 1 {
                    v = -v;
                }
                let slot = out.terms.entry(rest).or_insert_with(Q::zero);
                *slot += v;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// `(psi^* a)(x_1,...,x_k) = a(psi x_1,...,psi x_k)`.
    pub fn pullback(&self, psi: &Endo) -> Result<KForm> {
        if psi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: psi.dim(),
            });
        }
        let k = self.degree;
        let images: Vec<Vector> = (0..self.dim)
            .map(|j| psi.apply(&Vector::basis(self.dim, j)))
            .collect();
        let mut raw = Vec::new();
        for idx in increasing_tuples(self.dim, k) {
            let args: Vec<&Vector> = idx.iter().map(|&i| &images[i]).collect();
            let c = self.eval(&args)?;
            if !c.is_zero() {
                raw.push((idx, c));
            }
        }
        KForm::from_terms(self.dim, k, raw)
    }

    /// Chevalley-Eilenberg differential:
    /// `(da)(x_0..x_k) = sum_{p<q} (-1)^{p+q} a([x_p,x_q], x_0..^p..^q..x_k)`.
    pub fn cartan_d(&self, g: &LieAlgebra) -> Result<KForm> {
        if g.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: g.dim(),
            });
        }
        let k = self.degree;
        if k >= self.dim {
            return Ok(KForm::zero(self.dim, k + 1));
        }
        let mut raw = Vec::new();
        for tuple in increasing_tuples(self.dim, k + 1) {
            let mut acc = Q::zero();
            for p in 0..k + 1 {
                for q in p + 1..k + 1 {
                    let v = g.bracket_basis(tuple[p], tuple[q]);
                    if v.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = tuple
                        .iter()
                        .enumerate()
                        .filter(|(t, _)| *t != p && *t != q)
                        .map(|(_, &i)| i)
                        .collect();
                    let mut contribution = Q::zero();
                    for (m, vm) in v.0.iter().enumerate() {
                        if vm.is_zero() {
                            continue;
                        }
                        let mut idx = Vec::with_capacity(k);
                        idx.push(m);
                        idx.extend_from_slice(&rest);
                        let c = self.coeff_signed(&idx);
                        if !c.is_zero() {
                            contribution += vm * c;
                        }
                    }
                    if (p + q) % 2 == 1 {
                        contribution = -contribution;
                    }
                    acc += contribution;
                }
            }
            if !acc.is_zero() {
                raw.push((tuple, acc));
            }
        }
        KForm::from_terms(self.dim, k + 1, raw)
    }

    /// Lie derivative along `x` via Cartan's formula `L_x = d i_x + i_x d`.
    pub fn lie_derivative(&self, g: &LieAlgebra, x: &Vector) -> Result<KForm> {
        if self.degree == 0 {
            return Ok(KForm::zero(self.dim, 0));
        }
        let a = self.interior(x)?.cartan_d(g)?;
        let b = self.cartan_d(g)?.interior(x)?;
        a.add(&b)
    }

    /// True iff the (single) top-degree coefficient is nonzero.
    pub fn is_top_nonzero(&self, g: &LieAlgebra) -> Result<bool> {
        if self.degree != g.dim() || self.dim != g.dim() {
            return Err(Error::WrongDegree {
                expected: g.dim(),
                got: self.degree,
            });
        }
        Ok(!self.is_zero())
    }

    /// Gram matrix of a 2-form: `W[i][j] = omega(e_i, e_j)`.
    pub fn gram(&self) -> Result<QMat> {
        if self.degree != 2 {
            return Err(Error::WrongDegree {
                expected: 2,
                got: self.degree,
            });
        }
        let mut w = QMat::zeros(self.dim, self.dim);
        for (idx, c) in &self.terms {
            *w.at_mut(idx[0], idx[1]) = c.clone();
            *w.at_mut(idx[1], idx[0]) = -c.clone();
        }
        Ok(w)
    }

    /// 2-form from an antisymmetric Gram matrix.
    pub fn from_gram(w: &QMat) -> Result<KForm> {
        if !w.is_antisymmetric() {
            return Err(Error::BadInput("gram matrix must be antisymmetric".into()));
        }
        let dim = w.rows();
        let mut raw = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                if !w.at(i, j).is_zero() {
                    raw.push((vec![i, j], w.at(i, j).clone()));
                }
            }
        }
        KForm::from_terms(dim, 2, raw)
    }

    /// Coefficients of a 1-form as a covector.
    pub fn covector(&self) -> Result<Vec<Q>> {
        if self.degree != 1 {
            return Err(Error::WrongDegree {
                expected: 1,
                got: self.degree,
            });
        }
        let mut v = vec![Q::zero(); self.dim];
        for (idx, c) in &self.terms {
            v[idx[0]] = c.clone();
        }
        Ok(v)
    }

    /// 1-form from a covector.
    pub fn from_covector(coeffs: &[Q]) -> KForm {
        let raw = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (vec![i], c.clone()))
            .collect();
        KForm::from_terms(coeffs.len(), 1, raw).expect("valid covector terms")
    }

    fn check_compat(&self, other: &KForm) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::WrongDegree {
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let sup: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
                format!("{}*e^{{{}}}", c, sup.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Sorts indices ascending, returning the parity of the permutation, or
/// `None` when an index repeats.
fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut swaps = 0usize;
    // insertion sort, counting inversions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, swaps % 2 == 1))
}

/// All strictly increasing k-tuples in `0..dim`, lexicographic.
pub fn increasing_tuples(dim: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > dim {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < dim - (k - i) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::BracketEntry;
    use crate::rat::{qi, qr};

    fn e(dim: usize, idx: &[usize]) -> KForm {
        KForm::basis(dim, idx).unwrap()
    }

    /// aff(C) again; indices 0-based.
    fn r2prime() -> LieAlgebra {
        let entry = |i, j, out: Vec<(usize, i64)>| BracketEntry {
            i,
            j,
            out: out.into_iter().map(|(k, v)| (k, qi(v))).collect(),
        };
        LieAlgebra::new(
            4,
            &[
                entry(0, 2, vec![(2, 1)]),
                entry(0, 3, vec![(3, 1)]),
                entry(1, 2, vec![(3, 1)]),
                entry(1, 3, vec![(2, -1)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn tuple_enumeration() {
        assert_eq!(increasing_tuples(4, 2).len(), 6);
        assert_eq!(increasing_tuples(3, 0), vec![Vec::<usize>::new()]);
        assert!(increasing_tuples(2, 3).is_empty());
    }

    #[test]
    fn canonicalization_absorbs_signs() {
        let f = KForm::from_terms(3, 2, vec![(vec![2, 0], qi(1))]).unwrap();
        assert_eq!(f.coeff(&[0, 2]), qi(-1));
        let zero = KForm::from_terms(3, 2, vec![(vec![1, 1], qi(5))]).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn wedge_basics() {
        let a = e(5, &[0]);
        let b = e(5, &[1]);
        assert_eq!(a.wedge(&b).unwrap(), e(5, &[0, 1]));
        assert_eq!(b.wedge(&a).unwrap(), e(5, &[0, 1]).neg());
        assert!(a.wedge(&a).unwrap().is_zero());

        // (e^{12} + e^{34})^2 = 2 e^{1234}, and wedging with e^0 fills the
        // top degree on a 5-dimensional space.
        let omega = e(5, &[1, 2]).add(&e(5, &[3, 4])).unwrap();
        let sq = omega.wedge_pow(2).unwrap();
        assert_eq!(sq, e(5, &[1, 2, 3, 4]).scale(&qi(2)));
        let top = e(5, &[0]).wedge(&sq).unwrap();
        assert_eq!(top.coeff(&[0, 1, 2, 3, 4]), qi(2));
    }

    #[test]
    fn eval_is_alternating() {
        let f = e(4, &[0, 1]);
        let x = Vector::basis(4, 0);
        let y = Vector::basis(4, 1);
        assert_eq!(f.eval(&[&x, &y]).unwrap(), qi(1));
        assert_eq!(f.eval(&[&y, &x]).unwrap(), qi(-1));
        assert_eq!(f.eval(&[&x, &x]).unwrap(), qi(0));
        assert!(matches!(
            f.eval(&[&x]),
            Err(Error::ArityMismatch { degree: 2, got: 1 })
        ));

        // Omega = X^{16} - X^{25} + X^{34} evaluated on (X1, X6); 0-based.
        let omega = KForm::from_terms(
            6,
            2,
            vec![
                (vec![0, 5], qi(1)),
                (vec![1, 4], qi(-1)),
                (vec![2, 3], qi(1)),
            ],
        )
        .unwrap();
        assert_eq!(
            omega
                .eval(&[&Vector::basis(6, 0), &Vector::basis(6, 5)])
                .unwrap(),
            qi(1)
        );
    }

    #[test]
    fn interior_product() {
        let f = e(3, &[0, 1]);
        assert_eq!(f.interior(&Vector::basis(3, 0)).unwrap(), e(3, &[1]));
        assert_eq!(f.interior(&Vector::basis(3, 1)).unwrap(), e(3, &[0]).neg());
        assert!(f.interior(&Vector::basis(3, 2)).unwrap().is_zero());
        assert!(matches!(
            KForm::scalar(3, qi(1)).interior(&Vector::basis(3, 0)),
            Err(Error::DegreeZero)
        ));

        // i_xi(eta ^ omega) = omega when eta(xi)=1 and i_xi omega = 0.
        let eta = e(5, &[0]);
        let omega = e(5, &[1, 2]).add(&e(5, &[3, 4])).unwrap();
        let xi = Vector::basis(5, 0);
        let contracted = eta.wedge(&omega).unwrap().interior(&xi).unwrap();
        assert_eq!(contracted, omega);
    }

    #[test]
    fn cartan_d_on_r2prime() {
        let g = r2prime();
        // d e^3 = -e^{13} + e^{24} (1-based labels; indices shift down).
        let d = e(4, &[2]).cartan_d(&g).unwrap();
        let expected = e(4, &[0, 2])
            .neg()
            .add(&e(4, &[1, 3]))
            .unwrap();
        assert_eq!(d, expected);

        // On an abelian algebra everything is closed.
        let ab = LieAlgebra::abelian(4);
        for i in 0..4 {
            assert!(e(4, &[i]).cartan_d(&ab).unwrap().is_zero());
        }
    }

    #[test]
    fn d_squared_vanishes_iff_jacobi() {
        let g = r2prime();
        for i in 0..4 {
            let dd = e(4, &[i]).cartan_d(&g).unwrap().cartan_d(&g).unwrap();
            assert!(dd.is_zero(), "d^2 e^{} = {:?}", i + 1, dd);
        }

        // The corrupted Heisenberg: d^2 fails on some 1-form.
        let entry = |i, j, out: Vec<(usize, i64)>| BracketEntry {
            i,
            j,
            out: out.into_iter().map(|(k, v)| (k, qi(v))).collect(),
        };
        let bad = LieAlgebra::new(
            3,
            &[entry(0, 1, vec![(2, 1)]), entry(0, 2, vec![(0, 1)])],
        )
        .unwrap();
        assert!(!bad.jacobi_defect().is_empty());
        let broken = (0..3).any(|i| {
            !e(3, &[i])
                .cartan_d(&bad)
                .unwrap()
                .cartan_d(&bad)
                .unwrap()
                .is_zero()
        });
        assert!(broken);
    }

    #[test]
    fn leibniz_rule_for_d() {
        let g = r2prime();
        let a = e(4, &[0]).add(&e(4, &[2]).scale(&qr(1, 2))).unwrap();
        let b = e(4, &[1, 3]).add(&e(4, &[0, 2])).unwrap();
        let lhs = a.wedge(&b).unwrap().cartan_d(&g).unwrap();
        let da_b = a.cartan_d(&g).unwrap().wedge(&b).unwrap();
        let a_db = a.wedge(&b.cartan_d(&g).unwrap()).unwrap();
        // deg a = 1, so the sign on a ^ db is negative.
        let rhs = da_b.sub(&a_db).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_properties() {
        let g = r2prime();
        let a = e(4, &[0, 1]).add(&e(4, &[2, 3]).scale(&qi(3))).unwrap();
        let id = Endo::identity(4);
        assert_eq!(a.pullback(&id).unwrap(), a);

        let mut d = QMat::identity(4);
        *d.at_mut(0, 0) = qi(2);
        let psi = Endo::from_mat(d);
        assert_eq!(
            e(4, &[0, 1]).pullback(&psi).unwrap(),
            e(4, &[0, 1]).scale(&qi(2))
        );

        // Naturality for a bracket-preserving map: the identity trivially,
        // and a genuine automorphism of r2': e3 -> 2 e3, e4 -> 2 e4.
        let mut auto = QMat::identity(4);
        *auto.at_mut(2, 2) = qi(2);
        *auto.at_mut(3, 3) = qi(2);
        let psi = Endo::from_mat(auto);
        let a = e(4, &[2]);
        let lhs = a.cartan_d(&g).unwrap().pullback(&psi).unwrap();
        let rhs = a.pullback(&psi).unwrap().cartan_d(&g).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gram_roundtrip_and_top() {
        let omega = e(4, &[0, 3]).add(&e(4, &[1, 2])).unwrap();
        let w = omega.gram().unwrap();
        assert_eq!(KForm::from_gram(&w).unwrap(), omega);
        assert!(w.is_antisymmetric());

        let g = LieAlgebra::abelian(5);
        let vol = e(5, &[0, 1, 2, 3, 4]);
        assert!(vol.is_top_nonzero(&g).unwrap());
        assert!(!KForm::zero(5, 5).is_top_nonzero(&g).unwrap());
        assert!(e(5, &[0]).is_top_nonzero(&g).is_err());
    }
}
