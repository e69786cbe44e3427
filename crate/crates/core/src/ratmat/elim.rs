//! Gauss–Jordan elimination and everything built on it: rank, inverse,
//! null spaces and the affine solver used as ground truth elsewhere.

use num_traits::{One, Zero};

use super::{Mat, MatError, Scalar};

/// Result of [`Mat::rref_with_transform`]: `transform · M = reduced`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Mat,
    pub transform: Mat,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

/// Outcome of a linear solve that may have no solution. Inconsistency is an
/// answer, not an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Consistency<T> {
    Consistent(T),
    Inconsistent,
}

impl<T> Consistency<T> {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent(_))
    }

    pub fn consistent(self) -> Option<T> {
        match self {
            Consistency::Consistent(t) => Some(t),
            Consistency::Inconsistent => None,
        }
    }

    pub fn as_ref(&self) -> Consistency<&T> {
        match self {
            Consistency::Consistent(t) => Consistency::Consistent(t),
            Consistency::Inconsistent => Consistency::Inconsistent,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Consistency<U> {
        match self {
            Consistency::Consistent(t) => Consistency::Consistent(f(t)),
            Consistency::Inconsistent => Consistency::Inconsistent,
        }
    }
}

/// The set `{ particular + Σ tᵢ·basisᵢ }` of column vectors.
///
/// The basis vectors are linearly independent, so `dim()` is the affine
/// dimension of the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSet {
    particular: Mat,
    basis: Vec<Mat>,
    ambient_dim: usize,
}

impl AffineSet {
    /// Builds a set from a point and spanning vectors; dependent spanning
    /// vectors are dropped so the stored basis is independent.
    pub fn spanned_by(particular: Mat, spanning: &[Mat]) -> Result<Self, MatError> {
        let ambient_dim = particular.rows();
        if particular.cols() != 1 {
            return Err(MatError::Shape {
                op: "affine set point",
                left: particular.shape(),
                right: (ambient_dim, 1),
            });
        }
        let span = Mat::hstack_all(spanning, ambient_dim)?;
        let basis = span
            .pivot_columns()
            .into_iter()
            .map(|j| span.column(j))
            .collect();
        Ok(AffineSet {
            particular,
            basis,
            ambient_dim,
        })
    }

    pub fn particular(&self) -> &Mat {
        &self.particular
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Basis vectors as the columns of one matrix (`ambient_dim × dim`).
    pub fn basis_matrix(&self) -> Mat {
        Mat::hstack_all(&self.basis, self.ambient_dim).expect("basis vectors share a height")
    }

    /// `particular + Σ coeffs[i]·basis[i]`.
    pub fn point(&self, coeffs: &[Scalar]) -> Mat {
        assert_eq!(coeffs.len(), self.dim(), "one coefficient per basis vector");
        self.basis
            .iter()
            .zip(coeffs)
            .fold(self.particular.clone(), |acc, (b, c)| {
                acc.add(&b.scale(c)).expect("same shape")
            })
    }

    pub fn contains(&self, x: &Mat) -> bool {
        if x.shape() != (self.ambient_dim, 1) {
            return false;
        }
        let offset = x.sub(&self.particular).expect("shape checked");
        self.direction_contains(&offset)
    }

    fn direction_contains(&self, v: &Mat) -> bool {
        if self.basis.is_empty() {
            return v.is_zero();
        }
        Mat::solve_affine(&self.basis_matrix(), v)
            .expect("shapes agree")
            .is_consistent()
    }

    /// Set equality: same dimension and mutual containment.
    pub fn same_set(&self, other: &AffineSet) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && self.contains(&other.particular)
            && other.basis.iter().all(|b| self.direction_contains(b))
    }
}

impl Mat {
    /// Reduced row-echelon form together with the regular row transform.
    ///
    /// Pivots are chosen column by column, left to right; within a column the
    /// topmost remaining nonzero entry is used.
    pub fn rref_with_transform(&self) -> Rref {
        let (m, n) = self.shape();
        let mut r = self.clone();
        let mut e = Mat::identity(m);
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == m {
                break;
            }
            let Some(p) = (row..m).find(|&i| !r[(i, col)].is_zero()) else {
                continue;
            };
            r.swap_rows(row, p);
            e.swap_rows(row, p);
            let inv = r[(row, col)].recip();
            r.scale_row(row, &inv);
            e.scale_row(row, &inv);
            for i in 0..m {
                if i != row && !r[(i, col)].is_zero() {
                    let factor = r[(i, col)].clone();
                    r.sub_row_multiple(i, row, &factor);
                    e.sub_row_multiple(i, row, &factor);
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
        Rref {
            reduced: r,
            transform: e,
            rank: pivot_cols.len(),
            pivot_cols,
        }
    }

    /// Reduced row-echelon form without the transform.
    fn rref(&self) -> (Mat, Vec<usize>) {
        let (m, n) = self.shape();
        let mut r = self.clone();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == m {
                break;
            }
            let Some(p) = (row..m).find(|&i| !r[(i, col)].is_zero()) else {
                continue;
            };
            r.swap_rows(row, p);
            let inv = r[(row, col)].recip();
            r.scale_row(row, &inv);
            for i in 0..m {
                if i != row && !r[(i, col)].is_zero() {
                    let factor = r[(i, col)].clone();
                    r.sub_row_multiple(i, row, &factor);
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
        (r, pivot_cols)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Indices of the leftmost maximal set of linearly independent columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Inverse of a square regular matrix; `None` when singular or not square.
    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let rref = self.rref_with_transform();
        (rref.rank == self.rows()).then_some(rref.transform)
    }

    pub fn is_regular(&self) -> bool {
        self.is_square() && self.rank() == self.rows()
    }

    /// Basis of `{x : M·x = 0}`, one column vector per free column.
    pub fn null_space(&self) -> Vec<Mat> {
        let (r, pivots) = self.rref();
        null_basis(&r, &pivots, self.cols())
    }

    /// All solutions of `M·x = v` for a column vector `v`.
    ///
    /// Free variables are set to zero in the particular solution; the basis
    /// has one vector per free column of `M`.
    pub fn solve_affine(&self, v: &Mat) -> Result<Consistency<AffineSet>, MatError> {
        if v.cols() != 1 || v.rows() != self.rows() {
            return Err(MatError::Shape {
                op: "solve_affine",
                left: self.shape(),
                right: v.shape(),
            });
        }
        let n = self.cols();
        let (r, pivots) = self.hstack(v)?.rref();
        if pivots.last() == Some(&n) {
            return Ok(Consistency::Inconsistent);
        }
        let mut particular = Mat::zeros(n, 1);
        for (i, &c) in pivots.iter().enumerate() {
            particular[(c, 0)] = r[(i, n)].clone();
        }
        let basis = null_basis(&r, &pivots, n);
        Ok(Consistency::Consistent(AffineSet {
            particular,
            basis,
            ambient_dim: n,
        }))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let cols = self.cols();
        for j in 0..cols {
            self.data.swap(a * cols + j, b * cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, c: &Scalar) {
        let cols = self.cols();
        for x in &mut self.data[i * cols..(i + 1) * cols] {
            *x *= c;
        }
    }

    /// row[target] -= factor · row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: &Scalar) {
        let cols = self.cols();
        for j in 0..cols {
            let s = &self.data[source * cols + j];
            if !s.is_zero() {
                let d = s * factor;
                self.data[target * cols + j] -= d;
            }
        }
    }
}

/// Null-space basis read off a reduced matrix; only the first `n` columns
/// of `r` are treated as coefficients.
fn null_basis(r: &Mat, pivots: &[usize], n: usize) -> Vec<Mat> {
    let mut is_pivot = vec![false; n];
    for &c in pivots {
        if c < n {
            is_pivot[c] = true;
        }
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut b = Mat::zeros(n, 1);
            b[(f, 0)] = Scalar::one();
            for (i, &c) in pivots.iter().enumerate().filter(|(_, &c)| c < n) {
                b[(c, 0)] = -r[(i, f)].clone();
            }
            b
        })
        .collect()
}
