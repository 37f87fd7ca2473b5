//! Dense complex linear algebra used by the frame routines.
//!
//! Matrices are `nalgebra` dense matrices over `Complex64`. Everything here is a
//! pure function of its inputs. Tolerances are relative to `max(1, ‖input‖)`
//! unless stated otherwise.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type DenseMatrix = DMatrix<Complex64>;
pub type DenseVector = DVector<Complex64>;

/// Residual budget for eigen/SVD reconstructions.
pub const DECOMPOSITION_TOL: f64 = 1e-10;
/// Default tolerance for boolean predicates (tight, Parseval, Riesz, ...).
pub const PREDICATE_TOL: f64 = 1e-9;
/// Singular values below `RANK_TOL * sigma_max` count as zero.
pub const RANK_TOL: f64 = 1e-12;
/// Default condition-number ceiling for `try_inverse`.
pub const COND_TOL: f64 = 1e12;

const HERMITIAN_TOL: f64 = 1e-12;
const SCHUR_MAX_ITER: usize = 100_000;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a matrix from real row-major rows. Panics on ragged input.
pub fn real_matrix(rows: &[&[f64]]) -> DenseMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
    DenseMatrix::from_fn(r, c, |i, j| c64(rows[i][j], 0.0))
}

pub fn real_vector(entries: &[f64]) -> DenseVector {
    DenseVector::from_iterator(entries.len(), entries.iter().map(|&x| c64(x, 0.0)))
}

pub fn real_diagonal(entries: &[f64]) -> DenseMatrix {
    DenseMatrix::from_diagonal(&real_vector(entries))
}

/// Fails with the first non-finite position (column-major index).
pub fn ensure_finite(m: &DenseMatrix) -> Result<()> {
    match m.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(pos) => Err(Error::NonFinite(pos)),
        None => Ok(()),
    }
}

pub fn ensure_square(m: &DenseMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

/// `max(1, ‖m‖₂)`, the scale all relative tolerances are measured against.
pub fn tolerance_scale(m: &DenseMatrix) -> f64 {
    operator_norm(m).max(1.0)
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Real eigenvalues, ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, ordered like `values`.
    pub vectors: DenseMatrix,
}

impl EigenDecomposition {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `V Λ V*`
    pub fn reconstruct(&self) -> DenseMatrix {
        let lambda = DenseMatrix::from_diagonal(&real_vector(&self.values));
        &self.vectors * lambda * self.vectors.adjoint()
    }

    /// Applies `g` to the spectrum: `V g(Λ) V*`.
    pub fn map_spectrum(&self, g: impl Fn(f64) -> f64) -> DenseMatrix {
        let mapped: Vec<f64> = self.values.iter().map(|&x| g(x)).collect();
        let lambda = DenseMatrix::from_diagonal(&real_vector(&mapped));
        &self.vectors * lambda * self.vectors.adjoint()
    }
}

pub fn hermitian_eig(m: &DenseMatrix) -> Result<EigenDecomposition> {
    ensure_square(m)?;
    let adjoint = m.adjoint();
    let asymmetry = (m - &adjoint).norm();
    if asymmetry > HERMITIAN_TOL * m.norm().max(1.0) {
        return Err(Error::NotHermitian { asymmetry });
    }
    let symmetrized = (m + adjoint) * c64(0.5, 0.0);
    let eig = SymmetricEigen::try_new(symmetrized, f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(Error::NoConvergence("Hermitian eigensolver"))?;

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        eig.eigenvectors[(i, order[j])]
    });
    Ok(EigenDecomposition { values, vectors })
}

/// Thin singular value decomposition `M = U Σ V*`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Descending, nonnegative.
    pub singular_values: Vec<f64>,
    /// `rows × min(rows, cols)`
    pub left: DenseMatrix,
    /// `cols × min(rows, cols)`
    pub right: DenseMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> DenseMatrix {
        let sigma = DenseMatrix::from_diagonal(&real_vector(&self.singular_values));
        &self.left * sigma * self.right.adjoint()
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rank_tol · σ_max`.
    pub fn rank(&self, rank_tol: f64) -> usize {
        let cutoff = rank_tol * self.sigma_max();
        self.singular_values
            .iter()
            .filter(|&&s| s > cutoff && s > 0.0)
            .count()
    }
}

pub fn svd(m: &DenseMatrix) -> SvdResult {
    let (rows, cols) = m.shape();
    if rows < cols {
        let SvdResult {
            singular_values,
            left,
            right,
        } = jacobi_svd(m.adjoint());
        return SvdResult {
            singular_values,
            left: right,
            right: left,
        };
    }
    jacobi_svd(m.clone())
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi SVD of a matrix with `rows ≥ cols`.
///
/// Columns are rotated pairwise until they are mutually orthogonal; the
/// column norms are then the singular values.
fn jacobi_svd(mut work: DenseMatrix) -> SvdResult {
    let (rows, cols) = work.shape();
    let mut right = DenseMatrix::identity(cols, cols);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = work.column(p).norm_squared();
                let beta = work.column(q).norm_squared();
                let gamma = work.column(p).dotc(&work.column(q));
                let size = gamma.norm();
                if size == 0.0 || size <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate the phase of column q so that the coupling is real.
                let phase = gamma.conj() / size;
                let zeta = (beta - alpha) / (2.0 * size);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for target in [&mut work, &mut right] {
                    for i in 0..target.nrows() {
                        let up = target[(i, p)];
                        let uq = target[(i, q)] * phase;
                        target[(i, p)] = up * c - uq * s;
                        target[(i, q)] = up * s + uq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(usize, f64)> = (0..cols).map(|j| (j, work.column(j).norm())).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut left = DenseMatrix::zeros(rows, cols);
    let mut sorted_right = DenseMatrix::zeros(cols, cols);
    let mut singular_values = Vec::with_capacity(cols);
    for (k, &(j, sigma)) in order.iter().enumerate() {
        singular_values.push(sigma);
        sorted_right.set_column(k, &right.column(j));
        if sigma > 0.0 {
            left.set_column(k, &(work.column(j) / c64(sigma, 0.0)));
        } else {
            let fill = orthonormal_completion(&left.columns(0, k).into_owned());
            left.set_column(k, &fill);
        }
    }
    SvdResult {
        singular_values,
        left,
        right: sorted_right,
    }
}

/// A unit vector orthogonal to the (orthonormal) columns of `basis`.
fn orthonormal_completion(basis: &DenseMatrix) -> DenseVector {
    let rows = basis.nrows();
    let mut best = DenseVector::zeros(rows);
    let mut best_norm = 0.0;
    for i in 0..rows {
        let mut e = DenseVector::zeros(rows);
        e[i] = Complex64::ONE;
        // Two passes of Gram-Schmidt.
        for _ in 0..2 {
            let coefficients = basis.adjoint() * &e;
            e -= basis * coefficients;
        }
        let n = e.norm();
        if n > best_norm {
            best_norm = n;
            best = e / c64(n, 0.0);
        }
    }
    best
}

/// Largest singular value.
pub fn operator_norm(m: &DenseMatrix) -> f64 {
    if m.is_empty() || m.iter().all(|z| *z == Complex64::ZERO) {
        return 0.0;
    }
    svd(m).sigma_max()
}

/// Eigenvalues of a general square matrix, read off the complex Schur form.
pub fn eigenvalues(m: &DenseMatrix) -> Result<Vec<Complex64>> {
    ensure_square(m)?;
    let schur = Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(Error::NoConvergence("Schur decomposition"))?;
    let (_, triangular) = schur.unpack();
    Ok(triangular.diagonal().iter().copied().collect())
}

pub fn spectral_radius(m: &DenseMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?
        .into_iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Moore–Penrose inverse; singular values at or below `rank_tol · σ_max` are dropped.
pub fn pseudoinverse(m: &DenseMatrix, rank_tol: f64) -> DenseMatrix {
    let factors = svd(m);
    let cutoff = rank_tol * factors.sigma_max();
    let inverted: Vec<f64> = factors
        .singular_values
        .iter()
        .map(|&s| if s > cutoff && s > 0.0 { 1.0 / s } else { 0.0 })
        .collect();
    let sigma_plus = DenseMatrix::from_diagonal(&real_vector(&inverted));
    &factors.right * sigma_plus * factors.left.adjoint()
}

/// `M^n` by repeated squaring; `M^0 = I`.
pub fn matrix_power(m: &DenseMatrix, n: u64) -> Result<DenseMatrix> {
    ensure_square(m)?;
    let mut result = DenseMatrix::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    let mut exponent = n;
    while exponent > 0 {
        if exponent & 1 == 1 {
            result = &result * &base;
        }
        exponent >>= 1;
        if exponent > 0 {
            base = &base * &base;
        }
    }
    Ok(result)
}

/// Inverse via SVD, refused when `σ_min / σ_max ≤ 1 / cond_tol`.
pub fn try_inverse(m: &DenseMatrix, cond_tol: f64) -> Result<DenseMatrix> {
    ensure_square(m)?;
    let factors = svd(m);
    let (smax, smin) = (factors.sigma_max(), factors.sigma_min());
    if smax == 0.0 || smin / smax <= 1.0 / cond_tol {
        return Err(Error::NotInvertible { sigma_min: smin });
    }
    let inverted: Vec<f64> = factors.singular_values.iter().map(|s| 1.0 / s).collect();
    let sigma_inv = DenseMatrix::from_diagonal(&real_vector(&inverted));
    Ok(&factors.right * sigma_inv * factors.left.adjoint())
}

/// Orthonormal basis (as columns) of `ker M`. May have zero columns.
pub fn null_space(m: &DenseMatrix, rank_tol: f64) -> DenseMatrix {
    let (rows, cols) = m.shape();
    // Pad to square so the right factor is a full unitary.
    let size = rows.max(cols);
    let mut padded = DenseMatrix::zeros(size, cols);
    padded.view_mut((0, 0), (rows, cols)).copy_from(m);
    let factors = svd(&padded);
    let rank = factors.rank(rank_tol);
    factors.right.columns(rank, cols - rank).into_owned()
}
