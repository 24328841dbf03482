//! Dense exact rational matrices and Gaussian elimination.
//!
//! Dimensions in this crate stay in the single digits, so everything is
//! stored dense and reduced by plain fraction arithmetic. The reduced row
//! echelon form is fully normalized (pivots 1, pivot columns cleared), which
//! makes nullspace bases and solution sets canonical and reproducible.

use crate::error::Error;
use crate::rat::{qi, Q};
use num::{One, Zero};
use std::fmt;

/// Row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMat { rows, cols, data }
    }

    /// Diagonal matrix from the given entries.
    pub fn diag(entries: &[Q]) -> Self {
        let n = entries.len();
        QMat::from_fn(n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                Q::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|q| q.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn neg(&self) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }

    pub fn scale(&self, s: &Q) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * s)
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        QMat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Q::zero();
            for k in 0..self.cols {
                if !self.at(i, k).is_zero() && !other.at(k, j).is_zero() {
                    acc += self.at(i, k) * other.at(k, j);
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for k in 0..self.cols {
                    if !self.at(i, k).is_zero() && !v[k].is_zero() {
                        acc += self.at(i, k) * &v[k];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..=i).all(|j| *self.at(i, j) == -self.at(j, i)))
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.at(r, c).recip();
            for j in c..self.cols {
                let v = self.at(r, j) * &inv;
                *self.at_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for j in c..self.cols {
                        let v = self.at(i, j) - &f * self.at(r, j);
                        *self.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Canonical nullspace basis from the reduced row echelon form: one
    /// vector per free column, unit in that column, pivot entries filled by
    /// back-substitution.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let mut pivot_iter = pivots.iter().copied().collect::<Vec<_>>();
        pivot_iter.sort_unstable();
        for free in 0..self.cols {
            if pivot_iter.binary_search(&free).is_ok() {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.at(row, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * x = b` exactly. Returns `None` when inconsistent,
    /// otherwise the particular solution with all free variables set to zero
    /// together with the canonical nullspace basis.
    pub fn solve(&self, b: &[Q]) -> Option<LinSolution> {
        assert_eq!(self.rows, b.len());
        let mut aug = QMat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut particular = vec![Q::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            particular[pc] = aug.at(row, self.cols).clone();
        }
        Some(LinSolution {
            particular,
            basis: self.nullspace(),
        })
    }

    /// Exact inverse, or `None` if singular.
    pub fn inverse(&self) -> Option<QMat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = QMat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.at(i, j).clone()
            } else if j - n == i {
                Q::one()
            } else {
                Q::zero()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(QMat::from_fn(n, n, |i, j| aug.at(i, j + n).clone()))
    }

    /// Determinant by fraction elimination.
    pub fn det(&self) -> Q {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.at(i, c).is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det *= m.at(c, c).clone();
            let inv = m.at(c, c).recip();
            for i in c + 1..n {
                if m.at(i, c).is_zero() {
                    continue;
                }
                let f = m.at(i, c) * &inv;
                for j in c..n {
                    let v = m.at(i, j) - &f * m.at(c, j);
                    *m.at_mut(i, j) = v;
                }
            }
        }
        det
    }

    /// Positive definiteness by Sylvester's criterion (exact).
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        for k in 1..=self.rows {
            let minor = QMat::from_fn(k, k, |i, j| self.at(i, j).clone());
            if minor.det() <= Q::zero() {
                return false;
            }
        }
        true
    }

    /// Flattens row-major.
    pub fn flatten(&self) -> Vec<Q> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Q>) -> Self {
        assert_eq!(data.len(), rows * cols);
        QMat { rows, cols, data }
    }
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|q| q.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Solution set of a linear system: `particular + span(basis)`.
#[derive(Debug, Clone)]
pub struct LinSolution {
    pub particular: Vec<Q>,
    pub basis: Vec<Vec<Q>>,
}

/// Stacks vectors as rows and row-reduces; used to canonicalize spans.
pub fn span_rref(vectors: &[Vec<Q>], len: usize) -> QMat {
    let mut m = QMat::from_fn(vectors.len(), len, |i, j| vectors[i][j].clone());
    m.rref();
    // Drop zero rows so equal spans produce identical matrices.
    let mut rows = Vec::new();
    for i in 0..m.rows() {
        if m.row(i).iter().any(|q| !q.is_zero()) {
            rows.push(m.row(i).to_vec());
        }
    }
    QMat::from_rows(if rows.is_empty() {
        vec![vec![Q::zero(); len]]
    } else {
        rows
    })
}

/// Is `v` in the span of `vectors`?
pub fn in_span(vectors: &[Vec<Q>], v: &[Q]) -> bool {
    if vectors.is_empty() {
        return v.iter().all(|q| q.is_zero());
    }
    let len = v.len();
    let a = QMat::from_fn(len, vectors.len(), |i, j| vectors[j][i].clone());
    a.solve(v).is_some()
}

/// Completes independent columns to a full basis with standard basis vectors,
/// picking the lowest available indices.
pub fn complete_basis(cols: &[Vec<Q>], dim: usize) -> Result<QMat, Error> {
    let mut chosen: Vec<Vec<Q>> = cols.to_vec();
    let rank_of = |vs: &[Vec<Q>]| -> usize {
        if vs.is_empty() {
            return 0;
        }
        QMat::from_fn(vs.len(), dim, |i, j| vs[i][j].clone()).rank()
    };
    if rank_of(&chosen) != chosen.len() {
        return Err(Error::LinearlyDependentBasis);
    }
    for k in 0..dim {
        if chosen.len() == dim {
            break;
        }
        let mut e = vec![Q::zero(); dim];
        e[k] = qi(1);
        chosen.push(e);
        if rank_of(&chosen) != chosen.len() {
            chosen.pop();
        }
    }
    Ok(QMat::from_fn(dim, dim, |i, j| chosen[j][i].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qr;

    fn m(rows: &[&[i64]]) -> QMat {
        QMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| qi(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_and_rank() {
        let mut a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        let pivots = a.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn nullspace_is_canonical() {
        let a = m(&[&[1, 2, 0, 3]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 3);
        // Unit in each free column, pivot entry filled in.
        assert_eq!(ns[0], vec![qi(-2), qi(1), qi(0), qi(0)]);
        assert_eq!(ns[1], vec![qi(0), qi(0), qi(1), qi(0)]);
        assert_eq!(ns[2], vec![qi(-3), qi(0), qi(0), qi(1)]);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(|q| q.is_zero()));
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let sol = a.solve(&[qi(3), qi(1)]).unwrap();
        assert_eq!(sol.particular, vec![qi(2), qi(1)]);
        assert!(sol.basis.is_empty());

        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(b.solve(&[qi(1), qi(3)]).is_none());
        let under = b.solve(&[qi(1), qi(2)]).unwrap();
        assert_eq!(under.basis.len(), 1);
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det(), qi(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMat::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), qi(-1));
    }

    #[test]
    fn positive_definite() {
        assert!(QMat::identity(3).is_positive_definite());
        assert!(m(&[&[2, 1], &[1, 2]]).is_positive_definite());
        assert!(!m(&[&[1, 2], &[2, 1]]).is_positive_definite());
        assert!(!m(&[&[0, 1], &[1, 0]]).is_positive_definite());
        let half = QMat::from_rows(vec![vec![qr(1, 2)]]);
        assert!(half.is_positive_definite());
    }

    #[test]
    fn span_tools() {
        let u = vec![qi(1), qi(0), qi(1)];
        let v = vec![qi(0), qi(1), qi(1)];
        assert!(in_span(&[u.clone(), v.clone()], &[qi(2), qi(3), qi(5)]));
        assert!(!in_span(&[u.clone(), v.clone()], &[qi(0), qi(0), qi(1)]));
        let a = span_rref(&[u.clone(), v.clone()], 3);
        let b = span_rref(
            &[
                vec![qi(1), qi(1), qi(2)],
                vec![qi(1), qi(-1), qi(0)],
            ],
            3,
        );
        assert_eq!(a, b);
    }

    #[test]
    fn basis_completion() {
        let p = complete_basis(&[vec![qi(0), qi(1), qi(0)]], 3).unwrap();
        assert!(!p.det().is_zero());
        assert!(complete_basis(
            &[vec![qi(1), qi(0)], vec![qi(2), qi(0)]],
            2
        )
        .is_err());
    }
}
