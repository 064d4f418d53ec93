//! Li-Yau type gradient estimates, Harnack inequalities, heat-kernel bounds
//! and entropy functionals on model spaces, with a numerical certification
//! engine that checks each inequality against exact heat kernels.
//!
//! Layout:
//! - [`spaces`]: model geometries and their radial calculus.
//! - [`kernels`]: heat kernels as log-derivative jets.
//! - [`bounds`]: every estimate as a pure scalar function.
//! - [`radial_solver`]: Crank-Nicolson and spectral heat-flow oracles.
//! - [`certify`]: grid and pair sweeps producing verification reports.
//! - [`entropy`]: entropy functionals and their derivative identities.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod certify;
pub mod entropy;
pub mod error;
pub mod kernels;
pub mod par;
pub mod quad;
pub mod radial_solver;
pub mod spaces;
pub mod special;
mod taylor;
mod tridiag;

pub use error::{Error, Result};
