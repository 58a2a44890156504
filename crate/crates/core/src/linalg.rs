//! Exact linear algebra over the rationals: rank, nullspace, solving, and
//! minimum-norm particular solutions via normal equations.

use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Dense rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    a: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            a: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                *m.at_mut(i, j) = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.a[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.a[i * self.cols + j]
    }

    pub fn transpose(&self) -> QMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn matmul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut s = Rational::zero();
            for k in 0..self.cols {
                if !self.at(i, k).is_zero() && !other.at(k, j).is_zero() {
                    s += self.at(i, k) * other.at(k, j);
                }
            }
            s
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "vector length must equal cols");
        (0..self.rows)
            .map(|i| {
                let mut s = Rational::zero();
                for j in 0..self.cols {
                    if !self.at(i, j).is_zero() && !v[j].is_zero() {
                        s += self.at(i, j) * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    /// Reduced row echelon form; returns the pivot column of each pivot row.
    fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.at(i, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    let tmp = m.at(p, j).clone();
                    *m.at_mut(p, j) = m.at(row, j).clone();
                    *m.at_mut(row, j) = tmp;
                }
            }
            let inv = m.at(row, col).recip();
            for j in col..m.cols {
                let v = m.at(row, j) * &inv;
                *m.at_mut(row, j) = v;
            }
            for i in 0..m.rows {
                if i != row && !m.at(i, col).is_zero() {
                    let factor = m.at(i, col).clone();
                    for j in col..m.cols {
                        let v = m.at(i, j) - &(m.at(row, j) * &factor);
                        *m.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Rational::zero(); self.cols];
            vec[free] = Rational::one();
            for (row, &col) in pivots.iter().enumerate() {
                vec[col] = -r.at(row, free).clone();
            }
            basis.push(vec);
        }
        basis
    }

    /// Any solution of `self * x = b`, free variables set to zero.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows, "rhs length must equal rows");
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = r.at(row, self.cols).clone();
        }
        Some(x)
    }

    /// The minimum-Euclidean-norm solution of `self * x = b`, computed over
    /// the rationals from the normal equations `(A Aᵀ) y = b`, `x = Aᵀ y`.
    pub fn solve_min_norm(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        let at = self.transpose();
        let gram = self.matmul(&at);
        let y = gram.solve(b)?;
        let x = at.mul_vec(&y);
        if self.mul_vec(&x) == b {
            Some(x)
        } else {
            None
        }
    }

    /// Determinant of a square matrix by fraction-aware elimination.
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "det needs a square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !m.at(i, col).is_zero()) else {
                return Rational::zero();
            };
            if p != col {
                for j in 0..n {
                    let tmp = m.at(p, j).clone();
                    *m.at_mut(p, j) = m.at(col, j).clone();
                    *m.at_mut(col, j) = tmp;
                }
                det = -det;
            }
            let pivot = m.at(col, col).clone();
            det *= &pivot;
            for i in col + 1..n {
                if m.at(i, col).is_zero() {
                    continue;
                }
                let factor = m.at(i, col) / &pivot;
                for j in col..n {
                    let v = m.at(i, j) - &(m.at(col, j) * &factor);
                    *m.at_mut(i, j) = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols, "inverse needs a square matrix");
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        Some(QMatrix::from_fn(n, n, |i, j| r.at(i, n + j).clone()))
    }

    /// Positive definiteness via Sylvester's criterion.
    pub fn is_positive_definite(&self) -> bool {
        assert_eq!(self.rows, self.cols);
        for k in 1..=self.rows {
            let minor = QMatrix::from_fn(k, k, |i, j| self.at(i, j).clone());
            if !minor.det().is_positive() {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v, 1)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel_of_small_matrices() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let kernel = a.kernel_basis();
        assert_eq!(kernel.len(), 1);
        for v in &kernel {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(QMatrix::identity(4).rank(), 4);
        assert!(QMatrix::identity(4).kernel_basis().is_empty());
    }

    #[test]
    fn solve_finds_exact_solutions_and_detects_inconsistency() {
        let a = m(&[&[2, 0], &[0, 4]]);
        let x = a.solve(&[rat(1, 1), rat(1, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 2), rat(1, 4)]);
        let singular = m(&[&[1, 1], &[1, 1]]);
        assert!(singular.solve(&[rat(0, 1), rat(1, 1)]).is_none());
        assert!(singular.solve(&[rat(1, 1), rat(1, 1)]).is_some());
    }

    #[test]
    fn min_norm_solution_lies_in_the_row_space() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..50 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..6);
            let a = QMatrix::from_fn(rows, cols, |_, _| rat(rng.gen_range(-3..=3), 1));
            let x0: Vec<Rational> = (0..cols).map(|_| rat(rng.gen_range(-2..=2), 1)).collect();
            let b = a.mul_vec(&x0);
            let x = a.solve_min_norm(&b).expect("consistent by construction");
            assert_eq!(a.mul_vec(&x), b);
            // orthogonal to the kernel: x is A^T y
            for k in a.kernel_basis() {
                let dot: Rational = x.iter().zip(&k).map(|(p, q)| p * q).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn min_norm_rejects_targets_outside_the_image() {
        let a = m(&[&[1, 0], &[0, 0]]);
        assert!(a.solve_min_norm(&[rat(1, 1), rat(1, 1)]).is_none());
        assert!(a.solve_min_norm(&[rat(1, 1), rat(0, 1)]).is_some());
    }

    #[test]
    fn det_and_inverse_agree() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 2]]);
        assert_eq!(a.det(), rat(8, 1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.matmul(&inv), QMatrix::identity(3));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det(), rat(0, 1));
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn positive_definiteness_by_sylvester() {
        assert!(QMatrix::identity(3).is_positive_definite());
        assert!(m(&[&[2, 1], &[1, 2]]).is_positive_definite());
        assert!(!m(&[&[1, 2], &[2, 1]]).is_positive_definite());
        assert!(!m(&[&[-1, 0], &[0, 1]]).is_positive_definite());
    }
}
