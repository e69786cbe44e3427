//! One-sided equations in a square matrix `A` and two coupled systems:
//!
//! * `AX = B ∧ XD = E`
//! * `AXA = A ∧ AX = XA`
//!
//! Every family here is certified against [`stacked_oracle`], which solves
//! the whole system as one vectorized linear system.

use thiserror::Error;

use crate::axbc::{AffineMatMap, Sign, Term};
use crate::gen_inverse::{is_one_inverse, OneInverseFamily};
use crate::ratmat::{AffineSet, Consistency, Mat, MatError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error("supplied matrix is not a {{1}}-inverse of A")]
    NotOneInverse,
}

/// `Σ sign·L·X·R = C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub terms: Vec<Term>,
    pub rhs: Mat,
}

impl Equation {
    /// `L·X·R = C`.
    pub fn simple(left: Mat, right: Mat, rhs: Mat) -> Self {
        Equation {
            terms: vec![Term::new(left, right, Sign::Plus)],
            rhs,
        }
    }

    /// `A·X − X·A = 0`.
    pub fn commutator(a: &Mat) -> Self {
        let n = a.rows();
        Equation {
            terms: vec![
                Term::new(a.clone(), Mat::identity(n), Sign::Plus),
                Term::new(Mat::identity(n), a.clone(), Sign::Minus),
            ],
            rhs: Mat::zeros(n, n),
        }
    }

    pub fn residual(&self, x: &Mat) -> Result<Mat, MatError> {
        let mut lhs = Mat::zeros(self.rhs.rows(), self.rhs.cols());
        for t in &self.terms {
            let v = Mat::product(&[&t.left, x, &t.right])?;
            lhs = match t.sign {
                Sign::Plus => lhs.add(&v)?,
                Sign::Minus => lhs.sub(&v)?,
            };
        }
        lhs.sub(&self.rhs)
    }

    pub fn holds(&self, x: &Mat) -> Result<bool, MatError> {
        Ok(self.residual(x)?.is_zero())
    }
}

/// Several equations in one unknown `X` of shape `n × p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSystem {
    shape: (usize, usize),
    equations: Vec<Equation>,
}

impl MatrixSystem {
    pub fn new(rows: usize, cols: usize) -> Self {
        MatrixSystem {
            shape: (rows, cols),
            equations: Vec::new(),
        }
    }

    pub fn unknown_shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// Adds an equation after checking that each term accepts `X`.
    pub fn with(mut self, eq: Equation) -> Result<Self, MatError> {
        let (n, p) = self.shape;
        for t in &eq.terms {
            let out = (t.left.rows(), t.right.cols());
            if t.left.cols() != n || t.right.rows() != p || out != eq.rhs.shape() {
                return Err(MatError::Shape {
                    op: "system equation",
                    left: (t.left.rows(), t.right.cols()),
                    right: eq.rhs.shape(),
                });
            }
        }
        self.equations.push(eq);
        Ok(self)
    }

    pub fn equation(self, left: Mat, right: Mat, rhs: Mat) -> Result<Self, MatError> {
        self.with(Equation::simple(left, right, rhs))
    }

    pub fn holds(&self, x: &Mat) -> Result<bool, MatError> {
        for eq in &self.equations {
            if !eq.holds(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Solves `[Σ sign·(Rᵀ ⊗ L)]ᵢ · vec(X) = [vec(Cᵢ)]ᵢ` with all equations
/// stacked into one linear system.
pub fn stacked_oracle(sys: &MatrixSystem) -> Result<Consistency<AffineSet>, MatError> {
    let (n, p) = sys.shape;
    let mut blocks = Vec::new();
    let mut rhs = Vec::new();
    for eq in &sys.equations {
        let rows = eq.rhs.rows() * eq.rhs.cols();
        let block = eq
            .terms
            .iter()
            .try_fold(Mat::zeros(rows, n * p), |acc, t| {
                let k = t.right.transpose().kron(&t.left);
                match t.sign {
                    Sign::Plus => acc.add(&k),
                    Sign::Minus => acc.sub(&k),
                }
            })?;
        blocks.push(block);
        rhs.push(eq.rhs.vec());
    }
    let m = Mat::vstack_all(&blocks, n * p)?;
    let v = Mat::vstack_all(&rhs, 1)?;
    m.solve_affine(&v)
}

/// The five one-sided equations in a square `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresicEq {
    /// `AX = 0`
    E1,
    /// `XA = 0`
    E2,
    /// `AXA = A`
    E3,
    /// `AX = A`
    E4,
    /// `XA = A`
    E5,
}

/// Alternative shifts for `E3`–`E5` that reproduce the Penrose-type shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HavericEq {
    E3p,
    E4p,
    E5p,
}

impl HavericEq {
    pub fn base(self) -> PresicEq {
        match self {
            HavericEq::E3p => PresicEq::E3,
            HavericEq::E4p => PresicEq::E4,
            HavericEq::E5p => PresicEq::E5,
        }
    }
}

impl PresicEq {
    pub const ALL: [PresicEq; 5] = [
        PresicEq::E1,
        PresicEq::E2,
        PresicEq::E3,
        PresicEq::E4,
        PresicEq::E5,
    ];

    pub fn haveric(self) -> Option<HavericEq> {
        match self {
            PresicEq::E3 => Some(HavericEq::E3p),
            PresicEq::E4 => Some(HavericEq::E4p),
            PresicEq::E5 => Some(HavericEq::E5p),
            _ => None,
        }
    }

    /// The equation itself, as a one-equation system.
    pub fn system(self, a: &Mat) -> Result<MatrixSystem, SystemError> {
        let n = square(a)?;
        let (i, z) = (Mat::identity(n), Mat::zeros(n, n));
        let eq = match self {
            PresicEq::E1 => Equation::simple(a.clone(), i, z),
            PresicEq::E2 => Equation::simple(i, a.clone(), z),
            PresicEq::E3 => Equation::simple(a.clone(), a.clone(), a.clone()),
            PresicEq::E4 => Equation::simple(a.clone(), i, a.clone()),
            PresicEq::E5 => Equation::simple(i, a.clone(), a.clone()),
        };
        Ok(MatrixSystem::new(n, n).with(eq)?)
    }
}

impl std::str::FromStr for PresicEq {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "E1" => Ok(PresicEq::E1),
            "E2" => Ok(PresicEq::E2),
            "E3" => Ok(PresicEq::E3),
            "E4" => Ok(PresicEq::E4),
            "E5" => Ok(PresicEq::E5),
            _ => Err(format!("unknown equation `{s}`, expected E1..E5")),
        }
    }
}

fn square(a: &Mat) -> Result<usize, MatError> {
    if !a.is_square() {
        return Err(MatError::NotSquare {
            op: "square-matrix family",
            shape: a.shape(),
        });
    }
    Ok(a.rows())
}

fn checked_inverse(a: &Mat, a1: &Mat) -> Result<(), SystemError> {
    if !is_one_inverse(a, a1)? {
        return Err(SystemError::NotOneInverse);
    }
    Ok(())
}

/// Family for `which` built from the zero-parameter {1}-inverse of `A`.
pub fn presic_family(a: &Mat, which: PresicEq) -> Result<AffineMatMap, SystemError> {
    square(a)?;
    presic_family_with(a, &OneInverseFamily::new(a).canonical(), which)
}

/// Family for `which` built from a caller-supplied {1}-inverse `A⁽¹⁾`:
///
/// | eq | family |
/// |----|--------|
/// | E1 | `Y − A⁽¹⁾AY` |
/// | E2 | `Y − YAA⁽¹⁾` |
/// | E3 | `A⁽¹⁾ + Y − A⁽¹⁾AYAA⁽¹⁾` |
/// | E4 | `I + Y − A⁽¹⁾AY` |
/// | E5 | `I + Y − YAA⁽¹⁾` |
pub fn presic_family_with(a: &Mat, a1: &Mat, which: PresicEq) -> Result<AffineMatMap, SystemError> {
    let n = square(a)?;
    checked_inverse(a, a1)?;
    let i = Mat::identity(n);
    let shift = match which {
        PresicEq::E1 | PresicEq::E2 => Mat::zeros(n, n),
        PresicEq::E3 => a1.clone(),
        PresicEq::E4 | PresicEq::E5 => i.clone(),
    };
    Ok(AffineMatMap::new(
        shift,
        one_sided_terms(a, a1, which.base_kind())?,
    )?)
}

/// Family for `which` with the alternative shift:
///
/// | eq  | shift |
/// |-----|-------|
/// | E3′ | `A⁽¹⁾AA⁽¹⁾` |
/// | E4′ | `A⁽¹⁾A` |
/// | E5′ | `AA⁽¹⁾` |
///
/// The linear part is the same as in [`presic_family_with`].
pub fn haveric_family(a: &Mat, which: HavericEq) -> Result<AffineMatMap, SystemError> {
    square(a)?;
    haveric_family_with(a, &OneInverseFamily::new(a).canonical(), which)
}

pub fn haveric_family_with(
    a: &Mat,
    a1: &Mat,
    which: HavericEq,
) -> Result<AffineMatMap, SystemError> {
    square(a)?;
    checked_inverse(a, a1)?;
    let shift = match which {
        HavericEq::E3p => Mat::product(&[a1, a, a1])?,
        HavericEq::E4p => a1.mul(a)?,
        HavericEq::E5p => a.mul(a1)?,
    };
    Ok(AffineMatMap::new(
        shift,
        one_sided_terms(a, a1, which.base().base_kind())?,
    )?)
}

enum Side {
    Left,
    Right,
    Both,
}

impl PresicEq {
    fn base_kind(self) -> Side {
        match self {
            PresicEq::E1 | PresicEq::E4 => Side::Left,
            PresicEq::E2 | PresicEq::E5 => Side::Right,
            PresicEq::E3 => Side::Both,
        }
    }
}

/// `Y − K·Y·M` where `K = A⁽¹⁾A` or `I` and `M = AA⁽¹⁾` or `I`.
fn one_sided_terms(a: &Mat, a1: &Mat, side: Side) -> Result<Vec<Term>, MatError> {
    let n = a.rows();
    let i = Mat::identity(n);
    let (left, right) = match side {
        Side::Left => (a1.mul(a)?, i.clone()),
        Side::Right => (i.clone(), a.mul(a1)?),
        Side::Both => (a1.mul(a)?, a.mul(a1)?),
    };
    Ok(vec![
        Term::identity(n, n),
        Term::new(left, right, Sign::Minus),
    ])
}

/// Both solution families of `AX = B ∧ XD = E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSidedFamilies {
    /// `X₀ + (I − A⁽¹⁾A)·Y·(I − DD⁽¹⁾)` with `X₀` the oracle's particular solution.
    pub general: AffineMatMap,
    /// `A⁽¹⁾B + ED⁽¹⁾ − A⁽¹⁾AED⁽¹⁾ + (I − A⁽¹⁾A)·Y·(I − DD⁽¹⁾)`.
    pub reproductive: AffineMatMap,
}

/// The system `AX = B ∧ XD = E` with `A: m×n`, `X: n×p`, `B: m×p`,
/// `D: p×k`, `E: n×k`.
pub fn two_sided_system(a: &Mat, b: &Mat, d: &Mat, e: &Mat) -> Result<MatrixSystem, MatError> {
    let (n, p) = (a.cols(), d.rows());
    MatrixSystem::new(n, p)
        .equation(a.clone(), Mat::identity(p), b.clone())?
        .equation(Mat::identity(n), d.clone(), e.clone())
}

/// Solves `AX = B ∧ XD = E`; consistency is decided by the stacked oracle.
pub fn two_sided_solve(
    a: &Mat,
    b: &Mat,
    d: &Mat,
    e: &Mat,
) -> Result<Consistency<TwoSidedFamilies>, SystemError> {
    let fa = OneInverseFamily::new(a);
    let fd = OneInverseFamily::new(d);
    two_sided_solve_with(a, b, d, e, &fa.canonical(), &fd.canonical())
}

pub fn two_sided_solve_with(
    a: &Mat,
    b: &Mat,
    d: &Mat,
    e: &Mat,
    a1: &Mat,
    d1: &Mat,
) -> Result<Consistency<TwoSidedFamilies>, SystemError> {
    let sys = two_sided_system(a, b, d, e)?;
    if !is_one_inverse(a, a1)? || !is_one_inverse(d, d1)? {
        return Err(SystemError::NotOneInverse);
    }
    let Consistency::Consistent(set) = stacked_oracle(&sys)? else {
        return Ok(Consistency::Inconsistent);
    };
    let (n, p) = sys.unknown_shape();
    let x0 = Mat::unvec(set.particular(), n, p)?;

    let a1a = a1.mul(a)?;
    let ed1 = e.mul(d1)?;
    let left = Mat::identity(n).sub(&a1a)?;
    let right = Mat::identity(p).sub(&d.mul(d1)?)?;
    let term = || Term::new(left.clone(), right.clone(), Sign::Plus);

    let shift = a1.mul(b)?.add(&ed1)?.sub(&a1a.mul(&ed1)?)?;
    Ok(Consistency::Consistent(TwoSidedFamilies {
        general: AffineMatMap::new(x0, vec![term()])?,
        reproductive: AffineMatMap::new(shift, vec![term()])?,
    }))
}

/// A commuting {1}-inverse `Ā` and the family built from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingFamily {
    pub abar: Mat,
    /// `Y + ĀAĀ − ĀAY − YAĀ + ĀAYAĀ`
    pub family: AffineMatMap,
}

/// `AXA = A ∧ AX − XA = 0`.
pub fn commuting_system(a: &Mat) -> Result<MatrixSystem, SystemError> {
    let n = square(a)?;
    Ok(MatrixSystem::new(n, n)
        .equation(a.clone(), a.clone(), a.clone())?
        .with(Equation::commutator(a))?)
}

/// Solves `AXA = A ∧ AX = XA`. `Ā` is the oracle's particular solution.
pub fn commuting_system_solve(a: &Mat) -> Result<Consistency<CommutingFamily>, SystemError> {
    let sys = commuting_system(a)?;
    let n = a.rows();
    let Consistency::Consistent(set) = stacked_oracle(&sys)? else {
        return Ok(Consistency::Inconsistent);
    };
    let abar = Mat::unvec(set.particular(), n, n)?;
    let family = commuting_family(a, &abar)?;
    Ok(Consistency::Consistent(CommutingFamily { abar, family }))
}

/// The family `Y + ĀAĀ − ĀAY − YAĀ + ĀAYAĀ` for a given `Ā`.
pub fn commuting_family(a: &Mat, abar: &Mat) -> Result<AffineMatMap, SystemError> {
    let n = square(a)?;
    checked_inverse(a, abar)?;
    let i = Mat::identity(n);
    let abar_a = abar.mul(a)?;
    let a_abar = a.mul(abar)?;
    let shift = abar_a.mul(abar)?;
    Ok(AffineMatMap::new(
        shift,
        vec![
            Term::identity(n, n),
            Term::new(abar_a.clone(), i.clone(), Sign::Minus),
            Term::new(i, a_abar.clone(), Sign::Minus),
            Term::new(abar_a, a_abar, Sign::Plus),
        ],
    )?)
}
