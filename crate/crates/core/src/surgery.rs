//! Single-element removal from a non-tight frame.
//!
//! If `‖S^{-1/2} f_j‖ ≤ √(A/B)` then the family without `f_j` is still a frame,
//! and after the Parseval transform its lower bound is at least `1 − A/B`.
//! The report pairs that sufficient condition with the exact bounds of the
//! reduced family so the two can be compared.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{self, BoundsVerdict, FrameBounds, VectorFamily};

#[derive(Debug, Clone, Serialize)]
pub struct RemovalReport {
    /// Zero-based index of the removed element.
    pub index: usize,
    pub bounds: FrameBounds,
    /// `‖S^{-1/2} f_j‖`
    pub criterion_value: f64,
    /// `√(A/B)`
    pub threshold: f64,
    pub removable: bool,
    /// Exact bounds of `F \ {f_j}`.
    pub post_removal_bounds: BoundsVerdict,
    /// `1 − A/B`
    pub certified_lower_bound: f64,
    /// `λ_min` of the Parseval-transformed family with `f_j` removed.
    pub transformed_lower_bound: f64,
    /// `transformed_lower_bound ≥ certified_lower_bound − tol`; only asserted when removable.
    pub certificate_holds: bool,
}

/// Evaluates the removal criterion for element `index` (zero-based).
pub fn removal_test(family: &VectorFamily, index: usize, tol: f64) -> Result<RemovalReport> {
    if index >= family.len() {
        return Err(Error::IndexOutOfRange {
            index,
            len: family.len(),
        });
    }
    let bounds = frame::frame_bounds(family)?;
    let gap = (bounds.upper - bounds.lower) / bounds.upper;
    if gap <= tol {
        return Err(Error::TightFrameExcluded { gap });
    }

    let parseval = frame::parseval_transform(family)?;
    let criterion_value = parseval.vector(index).norm();
    let threshold = bounds.ratio().sqrt();
    let removable = criterion_value <= threshold + tol;

    let post_removal_bounds = match family.without(index) {
        Ok(reduced) => frame::classify(&reduced)?,
        Err(Error::TooFewVectors { .. }) => BoundsVerdict::NotAFrame { lambda_min: 0.0 },
        Err(e) => return Err(e),
    };

    let certified_lower_bound = 1.0 - bounds.ratio();
    let transformed_lower_bound = match parseval.without(index) {
        Ok(reduced) => frame::frame_spectrum(&reduced)?.min(),
        Err(_) => 0.0,
    };
    let certificate_holds =
        !removable || transformed_lower_bound >= certified_lower_bound - tol;

    Ok(RemovalReport {
        index,
        bounds,
        criterion_value,
        threshold,
        removable,
        post_removal_bounds,
        certified_lower_bound,
        transformed_lower_bound,
        certificate_holds,
    })
}

/// Runs [`removal_test`] on every index.
pub fn removal_scan(family: &VectorFamily, tol: f64) -> Result<Vec<RemovalReport>> {
    (0..family.len())
        .map(|j| removal_test(family, j, tol))
        .collect()
}
