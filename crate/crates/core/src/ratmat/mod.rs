//! Dense matrices over the exact rationals.
//!
//! Every operation is exact. Shapes are checked at runtime and reported
//! through [`MatError`]. Matrices with a zero dimension are legal values:
//! parameter blocks of a {1}-inverse family are empty whenever the rank is
//! full, and they are carried around as genuine `0 × k` matrices.

mod elim;
mod text;

pub use elim::{AffineSet, Consistency, Rref};
pub use text::ParseError;

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational scalar; always normalized, denominator positive.
pub type Scalar = BigRational;

/// Builds a scalar from an integer.
pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

/// Builds the scalar `num / den`. Panics when `den == 0`.
pub fn frac(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("{op}: shape mismatch between {}x{} and {}x{}", .left.0, .left.1, .right.0, .right.1)]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op}: expected a square matrix, got {}x{}", .shape.0, .shape.1)]
    NotSquare {
        op: &'static str,
        shape: (usize, usize),
    },
    #[error("unvec: cannot reshape {len} entries into {rows}x{cols}")]
    Reshape {
        len: usize,
        rows: usize,
        cols: usize,
    },
}

/// Dense row-major matrix of [`Scalar`]s.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self, MatError> {
        if data.len() != rows * cols {
            return Err(MatError::Reshape {
                len: data.len(),
                rows,
                cols,
            });
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Integer matrix from nested rows. Panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| int(v)));
        }
        Mat {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Column vector from integers.
    pub fn col_ints(entries: &[i64]) -> Self {
        Mat {
            rows: entries.len(),
            cols: 1,
            data: entries.iter().map(|&v| int(v)).collect(),
        }
    }

    /// Permutation matrix whose row `i` is the unit row `e_{order[i]}`,
    /// so that `P·M` lists the rows of `M` in `order`.
    pub fn row_permutation(order: &[usize]) -> Self {
        let n = order.len();
        let mut m = Mat::zeros(n, n);
        for (i, &src) in order.iter().enumerate() {
            m[(i, src)] = Scalar::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Mat {
        Mat::from_fn(self.rows, 1, |i, _| self[(i, j)].clone())
    }

    pub fn mul(&self, rhs: &Mat) -> Result<Mat, MatError> {
        if self.cols != rhs.rows {
            return Err(MatError::Shape {
                op: "mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product of a chain `M₁·M₂·…·Mₖ`.
    pub fn product(factors: &[&Mat]) -> Result<Mat, MatError> {
        let (first, rest) = factors.split_first().expect("empty product");
        rest.iter().try_fold((*first).clone(), |acc, m| acc.mul(m))
    }

    pub fn add(&self, rhs: &Mat) -> Result<Mat, MatError> {
        self.zip_with("add", rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Mat) -> Result<Mat, MatError> {
        self.zip_with("sub", rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        op: &'static str,
        rhs: &Mat,
        f: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<Mat, MatError> {
        if self.shape() != rhs.shape() {
            return Err(MatError::Shape {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Mat) -> Mat {
        let (p, q) = rhs.shape();
        Mat::from_fn(self.rows * p, self.cols * q, |i, j| {
            &self[(i / p, j / q)] * &rhs[(i % p, j % q)]
        })
    }

    /// Column-stacking vectorization, so `vec(AXB) = (Bᵀ ⊗ A)·vec(X)`.
    pub fn vec(&self) -> Mat {
        Mat::from_fn(self.rows * self.cols, 1, |k, _| {
            self[(k % self.rows, k / self.rows)].clone()
        })
    }

    /// Inverse of [`Mat::vec`]: refills a `rows × cols` matrix column by column.
    pub fn unvec(v: &Mat, rows: usize, cols: usize) -> Result<Mat, MatError> {
        let len = v.rows * v.cols;
        if len != rows * cols {
            return Err(MatError::Reshape { len, rows, cols });
        }
        // v may be a row or column vector; its storage order is the same
        Ok(Mat::from_fn(rows, cols, |i, j| {
            v.data[j * rows + i].clone()
        }))
    }

    /// Submatrix on the given row and column ranges.
    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Mat {
        assert!(
            rows.end <= self.rows && cols.end <= self.cols,
            "block out of range"
        );
        let (r0, c0) = (rows.start, cols.start);
        Mat::from_fn(rows.len(), cols.len(), |i, j| {
            self[(r0 + i, c0 + j)].clone()
        })
    }

    /// Assembles `[[tl, tr], [bl, br]]`.
    pub fn from_blocks(tl: &Mat, tr: &Mat, bl: &Mat, br: &Mat) -> Result<Mat, MatError> {
        let top = tl.hstack(tr)?;
        let bottom = bl.hstack(br)?;
        top.vstack(&bottom)
    }

    pub fn hstack(&self, rhs: &Mat) -> Result<Mat, MatError> {
        if self.rows != rhs.rows {
            return Err(MatError::Shape {
                op: "hstack",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Mat::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        }))
    }

    pub fn vstack(&self, rhs: &Mat) -> Result<Mat, MatError> {
        if self.cols != rhs.cols {
            return Err(MatError::Shape {
                op: "vstack",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(Mat {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        })
    }

    /// Stacks a list of blocks with equal column count on top of each other.
    pub fn vstack_all(blocks: &[Mat], cols: usize) -> Result<Mat, MatError> {
        blocks
            .iter()
            .try_fold(Mat::zeros(0, cols), |acc, b| acc.vstack(b))
    }

    /// Horizontally concatenates column vectors (or any equal-height blocks).
    pub fn hstack_all(blocks: &[Mat], rows: usize) -> Result<Mat, MatError> {
        blocks
            .iter()
            .try_fold(Mat::zeros(rows, 0), |acc, b| acc.hstack(b))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            f.write_str(&row.join(" "))?;
        }
        f.write_str("]")
    }
}
