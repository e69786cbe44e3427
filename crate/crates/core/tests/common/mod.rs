//! Seeded generators and brute-force helpers shared by the integration tests.
#![allow(dead_code)]

use axbc_core::gen_inverse::OneInverseFamily;
use axbc_core::ratmat::{int, Mat, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> Mat {
    Mat::from_fn(rows, cols, |_, _| int(rng.random_range(lo..=hi)))
}

/// Random `rows × cols` integer matrix of exactly the requested rank.
pub fn mat_of_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> Mat {
    assert!(rank <= rows.min(cols));
    if rank == 0 {
        return Mat::zeros(rows, cols);
    }
    loop {
        let left = int_mat(rng, rows, rank, -2, 2);
        let right = int_mat(rng, rank, cols, -2, 2);
        let m = left.mul(&right).unwrap();
        if m.rank() == rank {
            return m;
        }
    }
}

/// Random matrix with a uniformly chosen rank in `0..=min(rows, cols)`.
pub fn mat_any_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    let r = rng.random_range(0..=rows.min(cols));
    mat_of_rank(rng, rows, cols, r)
}

pub fn dim(rng: &mut ChaCha8Rng, max: usize) -> usize {
    rng.random_range(1..=max)
}

/// A triple `(A, B, C)` for `AXB = C` with shapes at most `max`.
///
/// Half of the time `C = A·X·B` for a random `X`, otherwise `C` is random,
/// which for rank-deficient `A` or `B` is almost always inconsistent.
pub fn triple(rng: &mut ChaCha8Rng, max: usize) -> (Mat, Mat, Mat) {
    let (m, n, p, q) = (dim(rng, max), dim(rng, max), dim(rng, max), dim(rng, max));
    let a = mat_any_rank(rng, m, n);
    let b = mat_any_rank(rng, p, q);
    let c = if rng.random_bool(0.5) {
        let x = int_mat(rng, n, p, -3, 3);
        axbc_core::Mat::product(&[&a, &x, &b]).unwrap()
    } else {
        int_mat(rng, m, q, -3, 3)
    };
    (a, b, c)
}

/// A consistent triple plus the matrix used to build `C`.
pub fn consistent_triple(rng: &mut ChaCha8Rng, max: usize) -> (Mat, Mat, Mat) {
    let (m, n, p, q) = (dim(rng, max), dim(rng, max), dim(rng, max), dim(rng, max));
    let a = mat_any_rank(rng, m, n);
    let b = mat_any_rank(rng, p, q);
    let x = int_mat(rng, n, p, -3, 3);
    let c = Mat::product(&[&a, &x, &b]).unwrap();
    (a, b, c)
}

/// Every member of `A{1}` whose parameters are integers in `[lo, hi]`.
pub fn all_small_inverses(a: &Mat, lo: i64, hi: i64) -> Vec<Mat> {
    let fam = OneInverseFamily::new(a);
    let count = fam.parameter_count();
    let base = (hi - lo + 1) as usize;
    let total = base.pow(count as u32);
    (0..total)
        .map(|mut code| {
            let params: Vec<Scalar> = (0..count)
                .map(|_| {
                    let v = lo + (code % base) as i64;
                    code /= base;
                    int(v)
                })
                .collect();
            fam.at_blocks(&fam.blocks_from_params(&params)).unwrap()
        })
        .collect()
}

/// Random permutation of `0..n`.
pub fn permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
    v
}
