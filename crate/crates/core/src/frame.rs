//! Vector families and their synthesis, analysis and frame operators.
//!
//! Inner products are conjugate-linear in the second argument:
//! `⟨x, y⟩ = Σ x_i conj(y_i)`, so the analysis operator maps `f` to
//! `(⟨f, f_k⟩)_k = U* f`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, DenseMatrix, DenseVector, EigenDecomposition, RANK_TOL};

/// Ordered family `f_1, …, f_N` in `C^d`, stored as the `d × N` synthesis matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFamily {
    columns: DenseMatrix,
}

impl VectorFamily {
    /// Column `k` of `columns` is `f_{k+1}`.
    pub fn from_columns(columns: DenseMatrix) -> Result<Self> {
        if columns.nrows() == 0 {
            return Err(Error::InvalidArgument("vectors must have positive dimension".into()));
        }
        if columns.ncols() == 0 {
            return Err(Error::TooFewVectors {
                required: 1,
                found: 0,
            });
        }
        linalg::ensure_finite(&columns)?;
        Ok(Self { columns })
    }

    pub fn from_vectors(vectors: &[DenseVector]) -> Result<Self> {
        let dim = vectors.first().map_or(0, |v| v.len());
        if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        if vectors.is_empty() {
            return Err(Error::TooFewVectors {
                required: 1,
                found: 0,
            });
        }
        Self::from_columns(DenseMatrix::from_columns(vectors))
    }

    /// Convenience constructor from real vectors.
    pub fn from_real(vectors: &[&[f64]]) -> Result<Self> {
        let converted: Vec<DenseVector> = vectors.iter().map(|v| linalg::real_vector(v)).collect();
        Self::from_vectors(&converted)
    }

    pub fn dim(&self) -> usize {
        self.columns.nrows()
    }

    pub fn len(&self) -> usize {
        self.columns.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Zero-based access to `f_{k+1}`.
    pub fn vector(&self, k: usize) -> DenseVector {
        self.columns.column(k).into_owned()
    }

    pub fn vectors(&self) -> impl Iterator<Item = DenseVector> + '_ {
        self.columns.column_iter().map(|c| c.into_owned())
    }

    pub fn as_matrix(&self) -> &DenseMatrix {
        &self.columns
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.columns
    }

    /// The family with element `index` (zero-based) removed.
    pub fn without(&self, index: usize) -> Result<Self> {
        if index >= self.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        if self.len() == 1 {
            return Err(Error::TooFewVectors {
                required: 2,
                found: 1,
            });
        }
        Ok(Self {
            columns: self.columns.clone().remove_column(index),
        })
    }

    /// `{M f_k}` for a `d' × d` matrix `M`.
    pub fn transformed(&self, m: &DenseMatrix) -> Result<Self> {
        if m.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.ncols(),
            });
        }
        Self::from_columns(m * &self.columns)
    }

    /// Elements `range` of the family, in order.
    pub fn slice(&self, start: usize, len: usize) -> Result<Self> {
        if start + len > self.len() {
            return Err(Error::IndexOutOfRange {
                index: start + len,
                len: self.len(),
            });
        }
        Self::from_columns(self.columns.columns(start, len).into_owned())
    }

    /// Concatenation `self ∪ other` preserving order.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let mut columns = DenseMatrix::zeros(self.dim(), self.len() + other.len());
        columns.columns_mut(0, self.len()).copy_from(&self.columns);
        columns
            .columns_mut(self.len(), other.len())
            .copy_from(&other.columns);
        Ok(Self { columns })
    }
}

/// Optimal frame bounds `A = λ_min(S)`, `B = λ_max(S)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    pub fn is_tight(&self, tol: f64) -> bool {
        (self.upper - self.lower) / self.upper <= tol
    }

    pub fn is_parseval(&self, tol: f64) -> bool {
        self.is_tight(tol) && (self.lower - 1.0).abs() <= tol
    }

    /// `A / B`
    pub fn ratio(&self) -> f64 {
        self.lower / self.upper
    }
}

/// `U_F`: `d × N`, column `k` is `f_k`.
pub fn synthesis_matrix(family: &VectorFamily) -> DenseMatrix {
    family.columns.clone()
}

/// `U_F*`: `N × d`, row `k` applied to `f` gives `⟨f, f_k⟩`.
pub fn analysis_matrix(family: &VectorFamily) -> DenseMatrix {
    family.columns.adjoint()
}

/// Bounds when the family spans, otherwise the failing `λ_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsVerdict {
    Frame(FrameBounds),
    NotAFrame { lambda_min: f64 },
}

impl BoundsVerdict {
    pub fn bounds(&self) -> Option<FrameBounds> {
        match self {
            Self::Frame(b) => Some(*b),
            Self::NotAFrame { .. } => None,
        }
    }

    pub fn is_frame(&self) -> bool {
        matches!(self, Self::Frame(_))
    }
}

/// `S_F = U_F U_F*`.
pub fn frame_operator(family: &VectorFamily) -> DenseMatrix {
    &family.columns * family.columns.adjoint()
}

/// Eigendecomposition of `S_F`.
pub fn frame_spectrum(family: &VectorFamily) -> Result<EigenDecomposition> {
    linalg::hermitian_eig(&frame_operator(family))
}

/// True when `λ_min` is indistinguishable from zero relative to `max(1, λ_max)`.
pub(crate) fn is_rank_deficient(lambda_min: f64, lambda_max: f64) -> bool {
    lambda_min <= RANK_TOL * lambda_max.max(1.0)
}

pub(crate) fn bounds_from_spectrum(spectrum: &EigenDecomposition) -> Result<FrameBounds> {
    let (lower, upper) = (spectrum.min(), spectrum.max());
    if is_rank_deficient(lower, upper) {
        return Err(Error::NotAFrame { lambda_min: lower });
    }
    Ok(FrameBounds { lower, upper })
}

pub fn frame_bounds(family: &VectorFamily) -> Result<FrameBounds> {
    bounds_from_spectrum(&frame_spectrum(family)?)
}

/// Like [`frame_bounds`] but folds `NotAFrame` into the verdict.
pub fn classify(family: &VectorFamily) -> Result<BoundsVerdict> {
    match frame_bounds(family) {
        Ok(b) => Ok(BoundsVerdict::Frame(b)),
        Err(Error::NotAFrame { lambda_min }) => Ok(BoundsVerdict::NotAFrame { lambda_min }),
        Err(e) => Err(e),
    }
}

/// Unit eigenvectors of `S_F` attaining `A` and `B`, in that order.
pub fn bound_witnesses(family: &VectorFamily) -> Result<(DenseVector, DenseVector)> {
    let spectrum = frame_spectrum(family)?;
    bounds_from_spectrum(&spectrum)?;
    let last = spectrum.values.len() - 1;
    Ok((
        spectrum.vectors.column(0).into_owned(),
        spectrum.vectors.column(last).into_owned(),
    ))
}

pub fn is_tight(family: &VectorFamily, tol: f64) -> Result<bool> {
    Ok(frame_bounds(family)?.is_tight(tol))
}

pub fn is_parseval(family: &VectorFamily, tol: f64) -> Result<bool> {
    Ok(frame_bounds(family)?.is_parseval(tol))
}

/// Finite-dimensional Riesz basis test: square synthesis matrix with
/// `σ_min > tol · σ_max`.
pub fn is_riesz_basis(family: &VectorFamily, tol: f64) -> bool {
    if family.len() != family.dim() {
        return false;
    }
    let factors = linalg::svd(&family.columns);
    factors.sigma_max() > 0.0 && factors.sigma_min() > tol * factors.sigma_max()
}

/// `{S_F^{-1} f_k}`.
pub fn canonical_dual(family: &VectorFamily) -> Result<VectorFamily> {
    let spectrum = frame_spectrum(family)?;
    bounds_from_spectrum(&spectrum)?;
    family.transformed(&spectrum.map_spectrum(|x| 1.0 / x))
}

/// `S_F^{-1/2}` through the spectral decomposition of `S_F`.
pub fn inverse_sqrt_frame_operator(family: &VectorFamily) -> Result<DenseMatrix> {
    let spectrum = frame_spectrum(family)?;
    bounds_from_spectrum(&spectrum)?;
    Ok(spectrum.map_spectrum(|x| 1.0 / x.sqrt()))
}

/// `{S_F^{-1/2} f_k}`, a Parseval frame.
pub fn parseval_transform(family: &VectorFamily) -> Result<VectorFamily> {
    family.transformed(&inverse_sqrt_frame_operator(family)?)
}
