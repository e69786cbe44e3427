//! The equation `A·X·B = C`: consistency, general solution families and
//! the reproductive / non-reproductive classification of those families.
//!
//! Shapes throughout: `A: m×n`, `B: p×q`, `C: m×q`, `X: n×p`.

use std::fmt;

use thiserror::Error;

use crate::gen_inverse::{is_one_inverse, OneInverseFamily};
use crate::ratmat::{AffineSet, Consistency, Mat, MatError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error("supplied matrix is not a {{1}}-inverse of {which}")]
    NotOneInverse { which: &'static str },
    #[error("the equation has no solution")]
    Inconsistent,
    #[error("the supplied particular matrix does not solve the equation")]
    NotASolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// One summand `sign · L · Y · R` of an affine matrix map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub left: Mat,
    pub right: Mat,
    pub sign: Sign,
}

impl Term {
    pub fn new(left: Mat, right: Mat, sign: Sign) -> Self {
        Term { left, right, sign }
    }

    /// `+ I_n · Y · I_p`
    pub fn identity(n: usize, p: usize) -> Self {
        Term::new(Mat::identity(n), Mat::identity(p), Sign::Plus)
    }
}

/// `Y ↦ shift + Σ sign·L·Y·R` on `n × p` matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMatMap {
    shift: Mat,
    terms: Vec<Term>,
}

impl AffineMatMap {
    /// Checks that every term maps `n×p` to `n×p`, where `n×p` is the shift's shape.
    pub fn new(shift: Mat, terms: Vec<Term>) -> Result<Self, MatError> {
        let (n, p) = shift.shape();
        for t in &terms {
            if t.left.shape() != (n, n) {
                return Err(MatError::Shape {
                    op: "affine map left factor",
                    left: t.left.shape(),
                    right: (n, n),
                });
            }
            if t.right.shape() != (p, p) {
                return Err(MatError::Shape {
                    op: "affine map right factor",
                    left: t.right.shape(),
                    right: (p, p),
                });
            }
        }
        Ok(AffineMatMap { shift, terms })
    }

    pub fn shift(&self) -> &Mat {
        &self.shift
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Shape of the argument (and of the value).
    pub fn shape(&self) -> (usize, usize) {
        self.shift.shape()
    }

    /// The linear part `Σ sign·L·Y·R`.
    pub fn apply_linear(&self, y: &Mat) -> Result<Mat, MatError> {
        if y.shape() != self.shape() {
            return Err(MatError::Shape {
                op: "affine map argument",
                left: y.shape(),
                right: self.shape(),
            });
        }
        let mut out = Mat::zeros(self.shape().0, self.shape().1);
        for t in &self.terms {
            let v = Mat::product(&[&t.left, y, &t.right])?;
            out = match t.sign {
                Sign::Plus => out.add(&v)?,
                Sign::Minus => out.sub(&v)?,
            };
        }
        Ok(out)
    }

    pub fn apply(&self, y: &Mat) -> Result<Mat, MatError> {
        self.shift.add(&self.apply_linear(y)?)
    }

    pub fn is_fixed_point(&self, x: &Mat) -> Result<bool, MatError> {
        Ok(self.apply(x)? == *x)
    }

    /// Matrix of the linear part acting on `vec(Y)`: `Σ sign·(Rᵀ ⊗ L)`.
    pub fn linear_vec_matrix(&self) -> Mat {
        let (n, p) = self.shape();
        let size = n * p;
        self.terms.iter().fold(Mat::zeros(size, size), |acc, t| {
            let k = t.right.transpose().kron(&t.left);
            match t.sign {
                Sign::Plus => acc.add(&k),
                Sign::Minus => acc.sub(&k),
            }
            .expect("terms validated at construction")
        })
    }

    /// The image `{f(Y)}` as an affine set of vectorized matrices.
    pub fn image(&self) -> AffineSet {
        let l = self.linear_vec_matrix();
        let columns: Vec<Mat> = (0..l.cols()).map(|j| l.column(j)).collect();
        AffineSet::spanned_by(self.shift.vec(), &columns).expect("consistent shapes")
    }

    /// Affine dimension of the image, i.e. the rank of the linear part.
    pub fn image_dim(&self) -> usize {
        self.linear_vec_matrix().rank()
    }

    /// Basis matrices of the homogeneous part of the image.
    pub fn image_basis(&self) -> Vec<Mat> {
        let (n, p) = self.shape();
        self.image()
            .basis()
            .iter()
            .map(|b| Mat::unvec(b, n, p).expect("vectorized n×p"))
            .collect()
    }
}

impl fmt::Display for AffineMatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y -> S")?;
        for t in &self.terms {
            let s = match t.sign {
                Sign::Plus => '+',
                Sign::Minus => '-',
            };
            write!(f, " {s} L·Y·R")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReproReason {
    Reproductive,
    LinearPartNotIdempotent,
    ShiftNotFixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReproReport {
    pub is_reproductive: bool,
    /// A `Y` with `f(f(Y)) ≠ f(Y)`, present iff the map is not reproductive.
    pub witness: Option<Mat>,
    pub reason: ReproReason,
}

/// Decides `f∘f = f` for `f(Y) = S + L(Y)`.
///
/// `f(f(Y)) − f(Y) = L(S) + (L² − L)(Y)`, so `f` is reproductive exactly
/// when `L² = L` and `L(S) = 0`. Both are checked on the vec-matrix of `L`.
pub fn reproductivity_of(map: &AffineMatMap) -> Result<ReproReport, MatError> {
    let l = map.linear_vec_matrix();
    let l2 = l.mul(&l)?;
    let (n, p) = map.shape();
    let shift_image = l.mul(&map.shift().vec())?;

    let verified = |y: Mat| -> Result<Option<Mat>, MatError> {
        let fy = map.apply(&y)?;
        Ok((map.apply(&fy)? != fy).then_some(y))
    };

    let (reason, candidates) = if l2 != l {
        let k = (0..l.cols())
            .find(|&k| l2.column(k) != l.column(k))
            .expect("matrices differ in some column");
        let mut e = Mat::zeros(n * p, 1);
        e[(k, 0)] = crate::ratmat::int(1);
        let e = Mat::unvec(&e, n, p)?;
        // L(S) can cancel (L²−L)e_k, but not also (L²−L)·2e_k
        let two_e = e.add(&e)?;
        (
            ReproReason::LinearPartNotIdempotent,
            vec![Mat::zeros(n, p), e, two_e],
        )
    } else if !shift_image.is_zero() {
        (ReproReason::ShiftNotFixed, vec![Mat::zeros(n, p)])
    } else {
        return Ok(ReproReport {
            is_reproductive: true,
            witness: None,
            reason: ReproReason::Reproductive,
        });
    };

    for y in candidates {
        if let Some(w) = verified(y)? {
            return Ok(ReproReport {
                is_reproductive: false,
                witness: Some(w),
                reason,
            });
        }
    }
    unreachable!("one candidate always violates f∘f = f")
}

fn check_shapes(a: &Mat, b: &Mat, c: &Mat) -> Result<(), MatError> {
    if c.rows() != a.rows() {
        return Err(MatError::Shape {
            op: "AXB=C (rows of A and C)",
            left: a.shape(),
            right: c.shape(),
        });
    }
    if c.cols() != b.cols() {
        return Err(MatError::Shape {
            op: "AXB=C (columns of B and C)",
            left: b.shape(),
            right: c.shape(),
        });
    }
    Ok(())
}

fn check_inverses(a: &Mat, b: &Mat, a1: &Mat, b1: &Mat) -> Result<(), SolveError> {
    if !is_one_inverse(a, a1)? {
        return Err(SolveError::NotOneInverse { which: "A" });
    }
    if !is_one_inverse(b, b1)? {
        return Err(SolveError::NotOneInverse { which: "B" });
    }
    Ok(())
}

/// The vectorized system `(Bᵀ ⊗ A)·vec(X) = vec(C)`, solved exactly.
pub fn vectorized_oracle(a: &Mat, b: &Mat, c: &Mat) -> Result<Consistency<AffineSet>, MatError> {
    check_shapes(a, b, c)?;
    b.transpose().kron(a).solve_affine(&c.vec())
}

/// `A·A⁽¹⁾·C·B⁽¹⁾·B = C` for the supplied inverses.
pub fn penrose_check(a: &Mat, b: &Mat, c: &Mat, a1: &Mat, b1: &Mat) -> Result<bool, SolveError> {
    check_shapes(a, b, c)?;
    check_inverses(a, b, a1, b1)?;
    Ok(Mat::product(&[a, a1, c, b1, b])? == *c)
}

/// Consistency decided by the vectorized linear system.
pub fn is_consistent(a: &Mat, b: &Mat, c: &Mat) -> Result<bool, MatError> {
    Ok(vectorized_oracle(a, b, c)?.is_consistent())
}

/// The two parts every family here shares: `A⁽¹⁾A` and `BB⁽¹⁾`.
fn projector_term(a: &Mat, b: &Mat, a1: &Mat, b1: &Mat) -> Result<Term, MatError> {
    Ok(Term::new(a1.mul(a)?, b.mul(b1)?, Sign::Minus))
}

/// `f(Y) = A⁽¹⁾CB⁽¹⁾ + Y − A⁽¹⁾AYBB⁽¹⁾` with the zero-parameter inverses.
pub fn general_solution(a: &Mat, b: &Mat, c: &Mat) -> Result<AffineMatMap, SolveError> {
    let a1 = OneInverseFamily::new(a).canonical();
    let b1 = OneInverseFamily::new(b).canonical();
    general_solution_with(a, b, c, &a1, &b1)
}

/// [`general_solution`] for caller-supplied {1}-inverses.
pub fn general_solution_with(
    a: &Mat,
    b: &Mat,
    c: &Mat,
    a1: &Mat,
    b1: &Mat,
) -> Result<AffineMatMap, SolveError> {
    check_shapes(a, b, c)?;
    check_inverses(a, b, a1, b1)?;
    if !penrose_check(a, b, c, a1, b1)? {
        return Err(SolveError::Inconsistent);
    }
    let shift = Mat::product(&[a1, c, b1])?;
    let (n, p) = (a.cols(), b.rows());
    Ok(AffineMatMap::new(
        shift,
        vec![Term::identity(n, p), projector_term(a, b, a1, b1)?],
    )?)
}

/// `g(Y) = X₀ + Y − A⁽¹⁾AYBB⁽¹⁾` with the zero-parameter inverses.
pub fn solution_from_particular(
    a: &Mat,
    b: &Mat,
    c: &Mat,
    x0: &Mat,
) -> Result<AffineMatMap, SolveError> {
    let a1 = OneInverseFamily::new(a).canonical();
    let b1 = OneInverseFamily::new(b).canonical();
    solution_from_particular_with(a, b, c, x0, &a1, &b1)
}

/// [`solution_from_particular`] for caller-supplied {1}-inverses.
pub fn solution_from_particular_with(
    a: &Mat,
    b: &Mat,
    c: &Mat,
    x0: &Mat,
    a1: &Mat,
    b1: &Mat,
) -> Result<AffineMatMap, SolveError> {
    check_shapes(a, b, c)?;
    check_inverses(a, b, a1, b1)?;
    ensure_solution(a, b, c, x0)?;
    let (n, p) = (a.cols(), b.rows());
    Ok(AffineMatMap::new(
        x0.clone(),
        vec![Term::identity(n, p), projector_term(a, b, a1, b1)?],
    )?)
}

fn ensure_solution(a: &Mat, b: &Mat, c: &Mat, x0: &Mat) -> Result<(), SolveError> {
    check_shapes(a, b, c)?;
    if x0.shape() != (a.cols(), b.rows()) {
        return Err(MatError::Shape {
            op: "particular solution",
            left: x0.shape(),
            right: (a.cols(), b.rows()),
        }
        .into());
    }
    if Mat::product(&[a, x0, b])? != *c {
        return Err(SolveError::NotASolution);
    }
    Ok(())
}

/// `h(Y) = Y − A⁽¹⁾(AYB − C)B⁽¹⁾`, expanded to
/// `A⁽¹⁾CB⁽¹⁾ + Y − (A⁽¹⁾A)·Y·(BB⁽¹⁾)`.
///
/// For a consistent equation the fixed points of `h` are exactly the
/// solutions.
pub fn fixed_point_map(
    a: &Mat,
    b: &Mat,
    c: &Mat,
    a1: &Mat,
    b1: &Mat,
) -> Result<AffineMatMap, SolveError> {
    check_shapes(a, b, c)?;
    check_inverses(a, b, a1, b1)?;
    let (n, p) = (a.cols(), b.rows());
    // −A⁽¹⁾·(−C)·B⁽¹⁾
    let constant = Mat::product(&[a1, c, b1])?;
    let outer = Term::new(a1.mul(a)?, b.mul(b1)?, Sign::Minus);
    Ok(AffineMatMap::new(
        constant,
        vec![Term::identity(n, p), outer],
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// No pair of {1}-inverses gives `A⁽¹⁾CB⁽¹⁾ = X₀`.
    ProvenNotRepresentable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub rank_x0: usize,
    /// `min(rank A, rank B)`
    pub bound: usize,
}

/// One-sided test that `X₀` is not of the form `A⁽¹⁾CB⁽¹⁾`.
///
/// For a consistent equation `A⁽¹⁾CB⁽¹⁾ = (A⁽¹⁾A)·X₀·(BB⁽¹⁾)` has rank at
/// most `min(a, b)`, so a particular solution of larger rank is never of
/// that form.
pub fn representability_certificate(
    a: &Mat,
    b: &Mat,
    c: &Mat,
    x0: &Mat,
) -> Result<Certificate, SolveError> {
    ensure_solution(a, b, c, x0)?;
    let rank_x0 = x0.rank();
    let bound = a.rank().min(b.rank());
    let verdict = if rank_x0 > bound {
        Verdict::ProvenNotRepresentable
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate {
        verdict,
        rank_x0,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> (Mat, Mat, Mat) {
        (
            Mat::from_ints(&[[1, 2]]),
            Mat::col_ints(&[1, 3]),
            Mat::from_ints(&[[12]]),
        )
    }

    fn x0() -> Mat {
        Mat::from_ints(&[[84, -24], [-36, 12]])
    }

    fn inconsistent() -> (Mat, Mat, Mat) {
        (
            Mat::col_ints(&[1, 0]),
            Mat::from_ints(&[[1]]),
            Mat::col_ints(&[0, 1]),
        )
    }

    #[test]
    fn penrose_examples() {
        let (a, b, c) = example();
        let a1 = Mat::col_ints(&[1, 0]);
        let b1 = Mat::from_ints(&[[1, 0]]);
        assert!(penrose_check(&a, &b, &c, &a1, &b1).unwrap());

        let c2 = Mat::from_ints(&[[1, 2], [3, 4]]);
        let id = Mat::identity(2);
        assert!(penrose_check(&id, &id, &c2, &id, &id).unwrap());

        let (a, b, c) = inconsistent();
        let a1 = OneInverseFamily::new(&a).canonical();
        assert!(!penrose_check(&a, &b, &c, &a1, &Mat::from_ints(&[[1]])).unwrap());
    }

    #[test]
    fn penrose_rejects_fake_inverse() {
        let (a, b, c) = example();
        let err = penrose_check(
            &a,
            &b,
            &c,
            &Mat::col_ints(&[0, 0]),
            &Mat::from_ints(&[[1, 0]]),
        );
        assert_eq!(err, Err(SolveError::NotOneInverse { which: "A" }));
    }

    #[test]
    fn consistency_examples() {
        let (a, b, c) = example();
        assert!(is_consistent(&a, &b, &c).unwrap());
        assert!(is_consistent(&a, &b, &Mat::zeros(1, 1)).unwrap());
        let (a, b, c) = inconsistent();
        assert!(!is_consistent(&a, &b, &c).unwrap());
        assert!(is_consistent(&a, &b, &Mat::zeros(1, 2)).is_err());
    }

    #[test]
    fn general_solution_shift_and_dimension() {
        let (a, b, c) = example();
        let f = general_solution(&a, &b, &c).unwrap();
        // zero-parameter inverses are [1, 0]ᵀ and [1, 0]
        assert_eq!(f.shift(), &Mat::from_ints(&[[12, 0], [0, 0]]));
        assert_eq!(f.image_dim(), 3);

        let id = Mat::identity(2);
        let c2 = Mat::from_ints(&[[1, 2], [3, 4]]);
        let f = general_solution(&id, &id, &c2).unwrap();
        assert_eq!(f.apply(&Mat::from_ints(&[[9, 9], [-9, 0]])).unwrap(), c2);
        assert_eq!(f.image_dim(), 0);

        let (a, b, c) = inconsistent();
        assert_eq!(general_solution(&a, &b, &c), Err(SolveError::Inconsistent));
    }

    #[test]
    fn particular_family_contains_x0() {
        let (a, b, c) = example();
        let g = solution_from_particular(&a, &b, &c, &x0()).unwrap();
        assert_eq!(g.apply(&Mat::zeros(2, 2)).unwrap(), x0());
        assert_eq!(g.image_dim(), 3);

        let f = general_solution(&a, &b, &c).unwrap();
        let same = solution_from_particular(&a, &b, &c, f.shift()).unwrap();
        assert_eq!(same, f);

        assert_eq!(
            solution_from_particular(&a, &b, &c, &Mat::identity(2)),
            Err(SolveError::NotASolution)
        );
    }

    #[test]
    fn reproductivity_examples() {
        let (a, b, c) = example();
        let g = solution_from_particular(&a, &b, &c, &x0()).unwrap();
        let rep = reproductivity_of(&g).unwrap();
        assert!(!rep.is_reproductive);
        assert_eq!(rep.reason, ReproReason::ShiftNotFixed);
        let w = rep.witness.unwrap();
        let gw = g.apply(&w).unwrap();
        assert_ne!(g.apply(&gw).unwrap(), gw);

        let f = general_solution(&a, &b, &c).unwrap();
        assert_eq!(
            reproductivity_of(&f).unwrap(),
            ReproReport {
                is_reproductive: true,
                witness: None,
                reason: ReproReason::Reproductive
            }
        );

        let id = AffineMatMap::new(Mat::zeros(2, 3), vec![Term::identity(2, 3)]).unwrap();
        assert!(reproductivity_of(&id).unwrap().is_reproductive);
    }

    #[test]
    fn non_idempotent_linear_part_gets_a_witness() {
        // f(Y) = S + 2Y
        let two = Mat::identity(2).scale(&crate::ratmat::int(2));
        let f = AffineMatMap::new(
            Mat::from_ints(&[[1, 0], [0, -1]]),
            vec![Term::new(two, Mat::identity(2), Sign::Plus)],
        )
        .unwrap();
        let rep = reproductivity_of(&f).unwrap();
        assert_eq!(rep.reason, ReproReason::LinearPartNotIdempotent);
        let w = rep.witness.unwrap();
        let fw = f.apply(&w).unwrap();
        assert_ne!(f.apply(&fw).unwrap(), fw);
    }

    #[test]
    fn witness_survives_cancellation_at_unit_vector() {
        // f(Y) = S + 2Y on 1x1 with S = -1: f(f(e)) - f(e) = 2S + 2e = 0 at e = 1
        let f = AffineMatMap::new(
            Mat::from_ints(&[[-1]]),
            vec![Term::new(
                Mat::from_ints(&[[2]]),
                Mat::from_ints(&[[1]]),
                Sign::Plus,
            )],
        )
        .unwrap();
        let rep = reproductivity_of(&f).unwrap();
        let w = rep.witness.unwrap();
        let fw = f.apply(&w).unwrap();
        assert_ne!(f.apply(&fw).unwrap(), fw);
    }

    #[test]
    fn affine_map_rejects_bad_terms() {
        let err = AffineMatMap::new(
            Mat::zeros(2, 3),
            vec![Term::new(Mat::identity(3), Mat::identity(3), Sign::Plus)],
        );
        assert!(err.is_err());
    }

    #[test]
    fn fixed_point_map_expands_to_general_solution() {
        let (a, b, c) = example();
        let a1 = OneInverseFamily::new(&a).canonical();
        let b1 = OneInverseFamily::new(&b).canonical();
        let h = fixed_point_map(&a, &b, &c, &a1, &b1).unwrap();
        let f = general_solution_with(&a, &b, &c, &a1, &b1).unwrap();
        assert_eq!(h.shift(), f.shift());
        assert_eq!(h.terms(), f.terms());
        // unexpanded form on a few points
        for y in [x0(), Mat::from_ints(&[[1, -1], [2, 5]])] {
            let inner = Mat::product(&[&a, &y, &b]).unwrap().sub(&c).unwrap();
            let direct = y.sub(&Mat::product(&[&a1, &inner, &b1]).unwrap()).unwrap();
            assert_eq!(h.apply(&y).unwrap(), direct);
        }
        assert!(h.is_fixed_point(&x0()).unwrap());
    }

    #[test]
    fn certificate_examples() {
        let (a, b, c) = example();
        let cert = representability_certificate(&a, &b, &c, &x0()).unwrap();
        assert_eq!(
            cert,
            Certificate {
                verdict: Verdict::ProvenNotRepresentable,
                rank_x0: 2,
                bound: 1
            }
        );
        let f = general_solution(&a, &b, &c).unwrap();
        let cert = representability_certificate(&a, &b, &c, f.shift()).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);

        let id = Mat::identity(2);
        let c2 = Mat::from_ints(&[[1, 2], [3, 4]]);
        let cert = representability_certificate(&id, &id, &c2, &c2).unwrap();
        assert_eq!((cert.verdict, cert.bound), (Verdict::Inconclusive, 2));

        assert_eq!(
            representability_certificate(&a, &b, &c, &Mat::zeros(2, 2)),
            Err(SolveError::NotASolution)
        );
    }
}
