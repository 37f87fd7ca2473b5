//! Perturbation of orbit frames.
//!
//! For the orbit `{T^i f}_{i≤n}` with lower bound `A` and a second seed `φ`
//! at distance `1/k` from `f`,
//!
//! ```text
//! ‖Σ c_i (T^i f − T^i φ)‖ ≤ μ ‖c‖,   μ = (1/k) (Σ_{i=0}^n ‖T‖^{2i})^{1/2},
//! ```
//!
//! and `μ < √A` makes `{T^i φ}_{i≤n}` a frame with lower bound `(√A − μ)²`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{self, BoundsVerdict, VectorFamily};
use crate::linalg::{self, DenseVector};
use crate::orbit::{orbit_vectors, Operator};

/// Strict-inequality slack in `μ < √A`.
pub const DEFAULT_STABILITY_TOL: f64 = 1e-12;

/// `radius · (Σ_{i=0}^n ‖T‖^{2i})^{1/2}` where `radius = 1/k`.
pub fn perturbation_mu(operator: &Operator, radius: f64, n: usize) -> f64 {
    mu_from_norm(operator.norm(), radius, n)
}

/// Same as [`perturbation_mu`] with `‖T‖` supplied. `0⁰ = 1`.
pub fn mu_from_norm(norm: f64, radius: f64, n: usize) -> f64 {
    let squared = norm * norm;
    let mut term = 1.0;
    let mut sum = 0.0;
    for _ in 0..=n {
        sum += term;
        term *= squared;
    }
    radius * sum.sqrt()
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    /// Lower frame bound of `{T^i f}_{i≤n}`.
    pub lower_bound_a: f64,
    /// `‖f − φ‖`, playing the role of `1/k`.
    pub radius: f64,
    /// `1 / radius`; infinite for identical seeds.
    pub equivalent_k: f64,
    pub mu: f64,
    /// `μ < √A − tol`
    pub sufficient: bool,
    /// `(√A − μ)²` when sufficient, else 0.
    pub certified_lower_bound: f64,
    /// Exact bounds of `{T^i φ}_{i≤n}`.
    pub oracle_bounds: BoundsVerdict,
    /// `‖U_F − U_G‖` for the two truncated orbits.
    pub bessel_difference: f64,
}

/// Compares the `μ < √A` certificate with the exact bounds of the perturbed orbit.
pub fn stability_test(
    operator: &Operator,
    base_seed: &DenseVector,
    perturbed_seed: &DenseVector,
    n: usize,
    tol: f64,
) -> Result<StabilityReport> {
    for seed in [base_seed, perturbed_seed] {
        if seed.len() != operator.dim() {
            return Err(Error::DimensionMismatch {
                expected: operator.dim(),
                found: seed.len(),
            });
        }
    }
    let base = VectorFamily::from_vectors(&orbit_vectors(operator, base_seed, n + 1))?;
    let perturbed = VectorFamily::from_vectors(&orbit_vectors(operator, perturbed_seed, n + 1))?;

    let lower_bound_a = match frame::frame_bounds(&base) {
        Ok(b) => b.lower,
        Err(Error::NotAFrame { lambda_min }) => return Err(Error::BaseNotAFrame { lambda_min }),
        Err(e) => return Err(e),
    };
    let radius = (base_seed - perturbed_seed).norm();
    let mu = perturbation_mu(operator, radius, n);
    let root_a = lower_bound_a.sqrt();
    let sufficient = mu < root_a - tol;
    let certified_lower_bound = if sufficient {
        (root_a - mu).powi(2)
    } else {
        0.0
    };

    Ok(StabilityReport {
        lower_bound_a,
        radius,
        equivalent_k: 1.0 / radius,
        mu,
        sufficient,
        certified_lower_bound,
        oracle_bounds: frame::classify(&perturbed)?,
        bessel_difference: bessel_difference_bound(&base, &perturbed)?,
    })
}

/// Smallest `C` with `‖Σ c_k (f_k − g_k)‖ ≤ C ‖c‖`, i.e. `‖U_F − U_G‖`.
pub fn bessel_difference_bound(first: &VectorFamily, second: &VectorFamily) -> Result<f64> {
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch {
            expected: first.dim(),
            found: second.dim(),
        });
    }
    if first.len() != second.len() {
        return Err(Error::DimensionMismatch {
            expected: first.len(),
            found: second.len(),
        });
    }
    Ok(linalg::operator_norm(
        &(first.as_matrix() - second.as_matrix()),
    ))
}
