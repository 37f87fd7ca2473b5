//! Numerical toolkit for finite frames in `C^d`.
//!
//! A frame is an ordered family of vectors whose frame operator
//! `S = Σ f_k f_k*` is positive definite. The crate computes optimal frame
//! bounds, duals and Parseval transforms, tests the classical single-element
//! removal criterion, represents families as operator orbits `f_{k+1} = T f_k`,
//! and checks perturbation and invertibility estimates for such orbits.
//!
//! In finite dimensions every family is a Bessel sequence, so the synthesis,
//! analysis and frame operators are defined on the whole space.

pub mod error;
pub mod frame;
pub mod linalg;
pub mod matrix_file;
pub mod orbit;
pub mod stability;
pub mod surgery;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use frame::{BoundsVerdict, FrameBounds, VectorFamily};
pub use linalg::{DenseMatrix, DenseVector};
pub use orbit::{Operator, OrbitConfig, Verdict};
