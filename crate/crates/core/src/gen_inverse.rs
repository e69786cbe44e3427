//! Rank normal form `Q·A·P = E_a` and the parametrization of all
//! {1}-inverses of `A`:
//!
//! ```text
//! G = P · [ I_a  X1 ] · Q
//!         [ X2   X3 ]
//! ```
//!
//! with `X1: a×(m−a)`, `X2: (n−a)×a`, `X3: (n−a)×(m−a)` arbitrary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ratmat::{int, AffineSet, Mat, MatError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InverseError {
    #[error("parameter block {block} must be {}x{}, got {}x{}", .expected.0, .expected.1, .got.0, .got.1)]
    BlockShape {
        block: &'static str,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Regular `Q` (m×m) and `P` (n×n) with `Q·A·P = E_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankNormalForm {
    pub q: Mat,
    pub p: Mat,
    pub rank: usize,
}

impl RankNormalForm {
    /// `E_a` of shape `m × n`.
    pub fn normal_form(&self) -> Mat {
        let (m, n) = (self.q.rows(), self.p.rows());
        Mat::from_fn(m, n, |i, j| {
            if i == j && i < self.rank {
                int(1)
            } else {
                int(0)
            }
        })
    }

    /// Checks `Q·A·P = E_a` and the regularity of both factors.
    pub fn verifies(&self, a: &Mat) -> bool {
        self.q.is_regular()
            && self.p.is_regular()
            && Mat::product(&[&self.q, a, &self.p]).is_ok_and(|e| e == self.normal_form())
    }
}

/// Computes `Q`, `P` and the rank of `A`.
///
/// `Q` is the row transform of the reduced row-echelon form `R = Q·A`.
/// `P` first moves the pivot columns of `R` to the front, giving
/// `[[I_a, F], [0, 0]]`, then clears `F` with the column operation
/// `[[I_a, −F], [0, I]]`.
pub fn rank_normal_form(a: &Mat) -> RankNormalForm {
    let n = a.cols();
    let rref = a.rref_with_transform();
    let rank = rref.rank;

    let mut order = rref.pivot_cols.clone();
    order.extend((0..n).filter(|j| !rref.pivot_cols.contains(j)));
    // column permutation: column k of R·Π is column order[k] of R
    let perm = Mat::row_permutation(&order).transpose();

    let permuted = rref.reduced.mul(&perm).expect("n×n permutation");
    let f = permuted.block(0..rank, rank..n);
    let clear = Mat::from_fn(n, n, |i, j| {
        if i == j {
            int(1)
        } else if i < rank && j >= rank {
            -f[(i, j - rank)].clone()
        } else {
            int(0)
        }
    });
    let p = perm.mul(&clear).expect("n×n");
    RankNormalForm {
        q: rref.transform,
        p,
        rank,
    }
}

/// The set `A{1}` of all {1}-inverses of an `m × n` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneInverseFamily {
    pub rnf: RankNormalForm,
    pub m: usize,
    pub n: usize,
}

/// The three free blocks of the parametrization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocks {
    pub x1: Mat,
    pub x2: Mat,
    pub x3: Mat,
}

impl OneInverseFamily {
    pub fn new(a: &Mat) -> Self {
        OneInverseFamily {
            rnf: rank_normal_form(a),
            m: a.rows(),
            n: a.cols(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rnf.rank
    }

    /// Shapes of `X1`, `X2`, `X3`.
    pub fn block_shapes(&self) -> [(usize, usize); 3] {
        let (a, m, n) = (self.rank(), self.m, self.n);
        [(a, m - a), (n - a, a), (n - a, m - a)]
    }

    /// Number of free scalar parameters, `nm − a²`.
    pub fn parameter_count(&self) -> usize {
        self.block_shapes().iter().map(|(r, c)| r * c).sum()
    }

    pub fn zero_blocks(&self) -> Blocks {
        let [s1, s2, s3] = self.block_shapes();
        Blocks {
            x1: Mat::zeros(s1.0, s1.1),
            x2: Mat::zeros(s2.0, s2.1),
            x3: Mat::zeros(s3.0, s3.1),
        }
    }

    /// Blocks filled from a flat parameter list (X1, then X2, then X3, each
    /// row-major).
    pub fn blocks_from_params(&self, params: &[Scalar]) -> Blocks {
        assert_eq!(
            params.len(),
            self.parameter_count(),
            "wrong parameter count"
        );
        let mut it = params.iter().cloned();
        let mut take = |(r, c): (usize, usize)| Mat::from_fn(r, c, |_, _| it.next().unwrap());
        let [s1, s2, s3] = self.block_shapes();
        Blocks {
            x1: take(s1),
            x2: take(s2),
            x3: take(s3),
        }
    }

    /// `P · [[I_a, X1], [X2, X3]] · Q`.
    pub fn at(&self, x1: &Mat, x2: &Mat, x3: &Mat) -> Result<Mat, InverseError> {
        let [s1, s2, s3] = self.block_shapes();
        for (block, expected, got) in [("X1", s1, x1), ("X2", s2, x2), ("X3", s3, x3)] {
            if got.shape() != expected {
                return Err(InverseError::BlockShape {
                    block,
                    expected,
                    got: got.shape(),
                });
            }
        }
        let middle = Mat::from_blocks(&Mat::identity(self.rank()), x1, x2, x3)?;
        Ok(Mat::product(&[&self.rnf.p, &middle, &self.rnf.q])?)
    }

    pub fn at_blocks(&self, blocks: &Blocks) -> Result<Mat, InverseError> {
        self.at(&blocks.x1, &blocks.x2, &blocks.x3)
    }

    /// The member with all parameter blocks zero.
    pub fn canonical(&self) -> Mat {
        self.at_blocks(&self.zero_blocks())
            .expect("zero blocks have the right shape")
    }

    /// A member with block entries drawn uniformly from `[-3, 3]`;
    /// deterministic per seed.
    pub fn sample(&self, seed: u64) -> Mat {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params: Vec<Scalar> = (0..self.parameter_count())
            .map(|_| int(rng.random_range(-3..=3)))
            .collect();
        self.at_blocks(&self.blocks_from_params(&params))
            .expect("generated blocks have the right shape")
    }

    /// The whole family as an affine set of vectorized `n × m` matrices.
    ///
    /// The map from parameters to `G` is affine and injective, so the
    /// dimension of the returned set equals [`Self::parameter_count`].
    pub fn as_affine_set(&self) -> AffineSet {
        let count = self.parameter_count();
        let base = self.canonical();
        let directions: Vec<Mat> = (0..count)
            .map(|k| {
                let params: Vec<Scalar> = (0..count).map(|i| int((i == k) as i64)).collect();
                let g = self.at_blocks(&self.blocks_from_params(&params)).unwrap();
                g.sub(&base).unwrap().vec()
            })
            .collect();
        AffineSet::spanned_by(base.vec(), &directions).expect("consistent shapes")
    }
}

/// Free-function form of [`OneInverseFamily::at`].
pub fn one_inverse_at(
    fam: &OneInverseFamily,
    x1: &Mat,
    x2: &Mat,
    x3: &Mat,
) -> Result<Mat, InverseError> {
    fam.at(x1, x2, x3)
}

/// Free-function form of [`OneInverseFamily::sample`].
pub fn sample_one_inverse(fam: &OneInverseFamily, seed: u64) -> Mat {
    fam.sample(seed)
}

/// `A·G·A = A` exactly. `G` must be `n × m` for an `m × n` matrix `A`.
pub fn is_one_inverse(a: &Mat, g: &Mat) -> Result<bool, MatError> {
    if g.shape() != (a.cols(), a.rows()) {
        return Err(MatError::Shape {
            op: "is_one_inverse",
            left: a.shape(),
            right: g.shape(),
        });
    }
    Ok(Mat::product(&[a, g, a])? == *a)
}
