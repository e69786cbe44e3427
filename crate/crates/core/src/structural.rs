//! Consistency of `AXB = C` read off row dependencies of `A` and column
//! dependencies of `B`.
//!
//! `T_A` moves a maximal independent set of rows of `A` to the top, `T_B`
//! moves a maximal independent set of columns of `B` to the left. With
//! `Â = T_A·A`, `B̂ = B·T_B` and `Ĉ = T_A·C·T_B`, the equation is solvable
//! iff every dependent row of `Â` and every dependent column of `B̂` is
//! mirrored, with the same coefficients, in `Ĉ`.

use num_traits::Zero;

use crate::ratmat::{Mat, MatError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutedData {
    /// `m × m` row permutation.
    pub t_a: Mat,
    /// `q × q` column permutation.
    pub t_b: Mat,
    pub a_rank: usize,
    pub b_rank: usize,
    /// `(m − a) × a`: row `i − a` holds the coefficients of `Â_i` over the
    /// first `a` rows of `Â`.
    pub alpha: Mat,
    /// `b × (q − b)`: column `j − b` holds the coefficients of `B̂_j` over
    /// the first `b` columns of `B̂`.
    pub beta: Mat,
    /// Original indices of the rows of `A` in the order of `Â`.
    pub row_order: Vec<usize>,
    /// Original indices of the columns of `B` in the order of `B̂`.
    pub col_order: Vec<usize>,
}

impl PermutedData {
    pub fn a_hat(&self, a: &Mat) -> Result<Mat, MatError> {
        self.t_a.mul(a)
    }

    pub fn b_hat(&self, b: &Mat) -> Result<Mat, MatError> {
        b.mul(&self.t_b)
    }

    pub fn c_hat(&self, c: &Mat) -> Result<Mat, MatError> {
        Mat::product(&[&self.t_a, c, &self.t_b])
    }
}

/// Independent ones first (greedy, leftmost), then the rest in original order.
fn order_with_front(front: &[usize], total: usize) -> Vec<usize> {
    let mut order = front.to_vec();
    order.extend((0..total).filter(|j| !front.contains(j)));
    order
}

/// Coefficients `x` with `Σ x_k · span[:, k] = target`; unique because the
/// spanning columns are independent.
fn coefficients(span: &Mat, target: &Mat) -> Result<Mat, MatError> {
    let set = span
        .solve_affine(target)?
        .consistent()
        .expect("dependent vector lies in the span of the kept ones");
    debug_assert_eq!(set.dim(), 0);
    Ok(set.particular().clone())
}

/// Builds `T_A`, `T_B`, `α` and `β`.
///
/// Rows of `A` are scanned top-down and kept when independent of the rows
/// already kept; columns of `B` left to right.
pub fn permuted_form(a: &Mat, b: &Mat) -> Result<PermutedData, MatError> {
    let (m, q) = (a.rows(), b.cols());

    let kept_rows = a.transpose().pivot_columns();
    let kept_cols = b.pivot_columns();
    let (ra, rb) = (kept_rows.len(), kept_cols.len());

    let row_order = order_with_front(&kept_rows, m);
    let col_order = order_with_front(&kept_cols, q);
    let t_a = Mat::row_permutation(&row_order);
    let t_b = Mat::row_permutation(&col_order).transpose();

    // columns = kept rows of A
    let row_span = Mat::hstack_all(
        &kept_rows
            .iter()
            .map(|&i| a.block(i..i + 1, 0..a.cols()).transpose())
            .collect::<Vec<_>>(),
        a.cols(),
    )?;
    let mut alpha = Mat::zeros(m - ra, ra);
    for (r, &i) in row_order[ra..].iter().enumerate() {
        let coeffs = coefficients(&row_span, &a.block(i..i + 1, 0..a.cols()).transpose())?;
        for l in 0..ra {
            alpha[(r, l)] = coeffs[(l, 0)].clone();
        }
    }

    let col_span = Mat::hstack_all(
        &kept_cols.iter().map(|&j| b.column(j)).collect::<Vec<_>>(),
        b.rows(),
    )?;
    let mut beta = Mat::zeros(rb, q - rb);
    for (c, &j) in col_order[rb..].iter().enumerate() {
        let coeffs = coefficients(&col_span, &b.column(j))?;
        for k in 0..rb {
            beta[(k, c)] = coeffs[(k, 0)].clone();
        }
    }

    Ok(PermutedData {
        t_a,
        t_b,
        a_rank: ra,
        b_rank: rb,
        alpha,
        beta,
        row_order,
        col_order,
    })
}

/// `Ĉ` follows the pattern: for dependent rows `i > a`,
/// `Ĉ_{i,j} = Σ_l α_{i,l}·Ĉ_{l,j}`; for dependent columns `j > b`,
/// `Ĉ_{i,j} = Σ_k β_{k,j}·Ĉ_{i,k}`. The top-left `a × b` block is free.
pub fn structural_check(a: &Mat, b: &Mat, c: &Mat) -> Result<bool, MatError> {
    if c.rows() != a.rows() || c.cols() != b.cols() {
        return Err(MatError::Shape {
            op: "structural_check (C must be rows(A) x cols(B))",
            left: (a.rows(), b.cols()),
            right: c.shape(),
        });
    }
    let data = permuted_form(a, b)?;
    let c_hat = data.c_hat(c)?;
    Ok(pattern_holds(&data, &c_hat))
}

fn pattern_holds(data: &PermutedData, c_hat: &Mat) -> bool {
    let (m, q) = c_hat.shape();
    let (ra, rb) = (data.a_rank, data.b_rank);
    for i in ra..m {
        for j in 0..q {
            let expected = (0..ra).fold(Scalar::zero(), |acc, l| {
                acc + &data.alpha[(i - ra, l)] * &c_hat[(l, j)]
            });
            if c_hat[(i, j)] != expected {
                return false;
            }
        }
    }
    for j in rb..q {
        for i in 0..m {
            let expected = (0..rb).fold(Scalar::zero(), |acc, k| {
                acc + &data.beta[(k, j - rb)] * &c_hat[(i, k)]
            });
            if c_hat[(i, j)] != expected {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::int;

    #[test]
    fn column_a_row_b() {
        let data = permuted_form(&Mat::col_ints(&[1, 2]), &Mat::from_ints(&[[1, 3]])).unwrap();
        assert_eq!((data.a_rank, data.b_rank), (1, 1));
        assert_eq!(data.t_a, Mat::identity(2));
        assert_eq!(data.t_b, Mat::identity(2));
        assert_eq!(data.alpha, Mat::from_ints(&[[2]]));
        assert_eq!(data.beta, Mat::from_ints(&[[3]]));
    }

    #[test]
    fn independent_rows_give_empty_alpha() {
        let a = Mat::from_ints(&[[1, 0, 2], [0, 1, 1]]);
        let data = permuted_form(&a, &Mat::identity(3)).unwrap();
        assert_eq!(data.t_a, Mat::identity(2));
        assert_eq!(data.alpha.shape(), (0, 2));
        assert_eq!(data.beta.shape(), (3, 0));
    }

    #[test]
    fn dependent_row_moves_down() {
        // row 1 = 2·row 0, row 2 independent
        let a = Mat::from_ints(&[[1, 1], [2, 2], [0, 1]]);
        let data = permuted_form(&a, &Mat::identity(1)).unwrap();
        assert_eq!(data.row_order, vec![0, 2, 1]);
        let a_hat = data.a_hat(&a).unwrap();
        assert_eq!(a_hat, Mat::from_ints(&[[1, 1], [0, 1], [2, 2]]));
        assert_eq!(data.alpha, Mat::from_ints(&[[2, 0]]));
    }

    #[test]
    fn zero_matrices_have_rank_zero() {
        let data = permuted_form(&Mat::zeros(2, 3), &Mat::zeros(3, 2)).unwrap();
        assert_eq!((data.a_rank, data.b_rank), (0, 0));
        assert_eq!(data.alpha.shape(), (2, 0));
        assert_eq!(data.beta.shape(), (0, 2));
        assert!(structural_check(&Mat::zeros(2, 3), &Mat::zeros(3, 2), &Mat::zeros(2, 2)).unwrap());
        let mut c = Mat::zeros(2, 2);
        c[(1, 1)] = int(1);
        assert!(!structural_check(&Mat::zeros(2, 3), &Mat::zeros(3, 2), &c).unwrap());
    }

    #[test]
    fn hand_built_pattern() {
        let a = Mat::col_ints(&[1, 2]);
        let b = Mat::from_ints(&[[1, 3]]);
        assert!(structural_check(&a, &b, &Mat::from_ints(&[[1, 3], [2, 6]])).unwrap());
        assert!(!structural_check(&a, &b, &Mat::from_ints(&[[1, 3], [2, 5]])).unwrap());
    }

    #[test]
    fn full_rank_places_no_constraint() {
        let a = Mat::from_ints(&[[1, 2]]);
        let b = Mat::col_ints(&[1, 3]);
        for c in [12, 0, -7] {
            assert!(structural_check(&a, &b, &Mat::from_ints(&[[c]])).unwrap());
        }
    }

    #[test]
    fn shape_mismatch() {
        assert!(structural_check(&Mat::identity(2), &Mat::identity(2), &Mat::zeros(3, 2)).is_err());
    }
}
