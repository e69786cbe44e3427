//! Exact solution theory for the linear matrix equation `A·X·B = C`.
//!
//! * [`ratmat`]: rational matrices, elimination, the vectorized solver.
//! * [`gen_inverse`]: rank normal form and the parametrization of `A{1}`.
//! * [`axbc`]: consistency tests, solution families, reproductivity.
//! * [`systems`]: one-sided equations and two coupled systems.
//! * [`structural`]: consistency via row and column dependencies.
//! * [`cli`]: the `axbc` command-line frontend.

pub mod axbc;
pub mod cli;
pub mod gen_inverse;
pub mod ratmat;
pub mod structural;
pub mod systems;

pub use ratmat::{AffineSet, Consistency, Mat, MatError, Scalar};
