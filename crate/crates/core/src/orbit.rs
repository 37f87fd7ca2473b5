//! Operator orbits `{T^k φ}` and operator representations `f_{k+1} = T f_k`.
//!
//! Orbits are infinite objects; everything here works on a truncation of
//! length `N` together with an explicit estimate of the discarded tail
//! `Σ_{k≥N} ‖T^k φ‖²`, which bounds `‖S_∞ − S_N‖`. Verdicts are three-valued.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{self, BoundsVerdict, VectorFamily};
use crate::linalg::{self, DenseMatrix, DenseVector, COND_TOL, RANK_TOL};

pub const DEFAULT_MAX_LENGTH: usize = 512;
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// Square matrix acting on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: DenseMatrix,
}

impl Operator {
    pub fn new(matrix: DenseMatrix) -> Result<Self> {
        linalg::ensure_square(&matrix)?;
        linalg::ensure_finite(&matrix)?;
        if matrix.nrows() == 0 {
            return Err(Error::InvalidArgument("operator must act on a nonzero space".into()));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DenseMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    /// `T^n`
    pub fn power(&self, n: u64) -> DenseMatrix {
        linalg::matrix_power(&self.matrix, n).expect("operator is square")
    }

    pub fn norm(&self) -> f64 {
        linalg::operator_norm(&self.matrix)
    }

    /// Dimension and finiteness check for a vector in the domain.
    pub fn check_vector(&self, v: &DenseVector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        linalg::ensure_finite(&DenseMatrix::from_column_slice(v.len(), 1, v.as_slice()))
    }
}

#[derive(Debug, Clone)]
pub struct OrbitConfig {
    pub operator: Operator,
    pub seed: DenseVector,
    pub max_length: usize,
    pub tail_tol: f64,
}

impl OrbitConfig {
    pub fn new(operator: Operator, seed: DenseVector) -> Result<Self> {
        Self::with_limits(operator, seed, DEFAULT_MAX_LENGTH, DEFAULT_TAIL_TOL)
    }

    pub fn with_limits(
        operator: Operator,
        seed: DenseVector,
        max_length: usize,
        tail_tol: f64,
    ) -> Result<Self> {
        operator.check_vector(&seed)?;
        if max_length < operator.dim() {
            return Err(Error::InvalidArgument(format!(
                "max_length {max_length} is below the dimension {}",
                operator.dim()
            )));
        }
        if tail_tol.is_nan() || tail_tol <= 0.0 {
            return Err(Error::InvalidArgument("tail_tol must be positive".into()));
        }
        Ok(Self {
            operator,
            seed,
            max_length,
            tail_tol,
        })
    }
}

/// Truncated orbit `{φ, Tφ, …, T^{N−1}φ}`.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub family: VectorFamily,
    /// Estimate of `Σ_{k≥N} ‖T^k φ‖²`; infinite when the orbit does not decay.
    pub tail_bound: f64,
    /// Set when `max_length` was reached before the tail fell under `tail_tol`.
    pub truncated_at_max: bool,
}

/// First `count` orbit vectors, without any truncation logic.
pub fn orbit_vectors(operator: &Operator, seed: &DenseVector, count: usize) -> Vec<DenseVector> {
    let mut out = Vec::with_capacity(count);
    let mut current = seed.clone();
    for _ in 0..count {
        let next = operator.matrix() * &current;
        out.push(std::mem::replace(&mut current, next));
    }
    out
}

/// Tail estimate at truncation `n` from the orbit norms `norms[k] = ‖T^k φ‖`,
/// `k = 0..=2n`.
///
/// Sums the window `k = n..=2n` exactly and extrapolates beyond `2n` with the
/// per-step decay rate implied by `q = norms[2n] / norms[n]`. Returns infinity
/// when `q ≥ 1`.
pub fn tail_estimate(norms: &[f64], n: usize) -> f64 {
    assert!(norms.len() > 2 * n, "need norms up to index 2n");
    let head = norms[n];
    if head == 0.0 {
        return 0.0;
    }
    let window: f64 = norms[n..=2 * n].iter().map(|x| x * x).sum();
    let last = norms[2 * n];
    let q = last / head;
    if !window.is_finite() || !q.is_finite() || q >= 1.0 {
        return f64::INFINITY;
    }
    if last == 0.0 {
        return window;
    }
    let rho_sq = q.powf(2.0 / n.max(1) as f64);
    if rho_sq >= 1.0 {
        return f64::INFINITY;
    }
    window + last * last * rho_sq / (1.0 - rho_sq)
}

/// The shortest truncation whose tail estimate is below `tail_tol`, capped at
/// `max_length`.
pub fn orbit(config: &OrbitConfig) -> Orbit {
    let m = config.max_length;
    let vectors = orbit_vectors(&config.operator, &config.seed, 2 * m + 1);
    let norms: Vec<f64> = vectors.iter().map(|v| v.norm()).collect();

    let mut chosen = None;
    for n in 1..=m {
        let tail = tail_estimate(&norms, n);
        if tail < config.tail_tol {
            chosen = Some((n, tail));
            break;
        }
    }
    let (length, tail_bound, truncated_at_max) = match chosen {
        Some((n, tail)) => (n, tail, false),
        None => (m, tail_estimate(&norms, m), true),
    };
    let family = VectorFamily::from_vectors(&vectors[..length])
        .unwrap_or_else(|_| {
            // Overflowing orbits: keep the finite prefix.
            let finite = vectors[..length]
                .iter()
                .take_while(|v| v.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
                .count()
                .max(1);
            VectorFamily::from_vectors(&vectors[..finite]).expect("seed is finite")
        });
    Orbit {
        family,
        tail_bound,
        truncated_at_max,
    }
}

/// Three-valued answer for a question about an infinite sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Undecidable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictReason {
    /// Truncation spans and the tail is certified small.
    Spans,
    /// Truncation does not span.
    Rank,
    /// Orbit norms do not decay, so no Bessel certificate.
    DivergingBessel,
    /// Spans, but the tail estimate is not below the lower bound.
    Truncation,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub truncation_used: usize,
    pub truncated_at_max: bool,
    /// Bounds of the truncated frame operator `S_N`.
    pub bounds_estimate: BoundsVerdict,
    pub tail_bound: f64,
    /// `B_N + tail_bound`, an upper frame bound estimate for the full orbit.
    pub upper_with_tail: f64,
    pub in_v: Verdict,
    pub reason: VerdictReason,
}

/// Judges a truncated family given an estimate of the discarded tail.
///
/// `Yes` needs `λ_min(S_N)` above both `tail_tol` and the tail estimate; `No`
/// means the truncation fails to span (conclusive once `N ≥ d`, since Krylov
/// spaces stabilise after `d` steps).
pub fn judge_truncation(
    family: &VectorFamily,
    tail_bound: f64,
    tail_tol: f64,
) -> Result<(BoundsVerdict, Verdict, VerdictReason)> {
    let verdict = frame::classify(family)?;
    let (in_v, reason) = match verdict {
        BoundsVerdict::NotAFrame { .. } if !spans_after_normalizing(family) => {
            (Verdict::No, VerdictReason::Rank)
        }
        // Spans, but growth swamps the small eigenvalues of S_N.
        BoundsVerdict::NotAFrame { .. } if !tail_bound.is_finite() => {
            (Verdict::Undecidable, VerdictReason::DivergingBessel)
        }
        BoundsVerdict::NotAFrame { .. } => (Verdict::Undecidable, VerdictReason::Truncation),
        BoundsVerdict::Frame(_) if !tail_bound.is_finite() => {
            (Verdict::Undecidable, VerdictReason::DivergingBessel)
        }
        BoundsVerdict::Frame(b) if b.lower > tail_tol && b.lower > tail_bound => {
            (Verdict::Yes, VerdictReason::Spans)
        }
        BoundsVerdict::Frame(_) => (Verdict::Undecidable, VerdictReason::Truncation),
    };
    Ok((verdict, in_v, reason))
}

/// Rank test on the unit-normalised family; spanning does not depend on scale.
fn spans_after_normalizing(family: &VectorFamily) -> bool {
    let mut columns = family.as_matrix().clone();
    for mut column in columns.column_iter_mut() {
        let norm = column.norm();
        if norm > 0.0 {
            column /= linalg::c64(norm, 0.0);
        }
    }
    linalg::svd(&columns).rank(RANK_TOL) == family.dim()
}

/// Decides `φ ∈ V(T)` at truncation.
pub fn orbit_frame_report(config: &OrbitConfig) -> Result<OrbitReport> {
    let orbit = orbit(config);
    report_for(&orbit, config.tail_tol)
}

fn report_for(orbit: &Orbit, tail_tol: f64) -> Result<OrbitReport> {
    let (bounds_estimate, in_v, reason) =
        judge_truncation(&orbit.family, orbit.tail_bound, tail_tol)?;
    let upper_with_tail = match bounds_estimate {
        BoundsVerdict::Frame(b) => b.upper + orbit.tail_bound,
        BoundsVerdict::NotAFrame { .. } => {
            frame::frame_spectrum(&orbit.family)?.max() + orbit.tail_bound
        }
    };
    Ok(OrbitReport {
        truncation_used: orbit.family.len(),
        truncated_at_max: orbit.truncated_at_max,
        bounds_estimate,
        tail_bound: orbit.tail_bound,
        upper_with_tail,
        in_v,
        reason,
    })
}

/// Outcome of fitting `T` with `T f_k = f_{k+1}`.
#[derive(Debug, Clone)]
pub struct RepresentationReport {
    /// Present when the fitted operator reproduces every step within tolerance.
    pub operator: Option<Operator>,
    /// Minimal-norm least-squares fit `[f_2 … f_N] · [f_1 … f_{N−1}]⁺`.
    pub fitted: DenseMatrix,
    /// `‖T f_k − f_{k+1}‖` for each step.
    pub residuals: Vec<f64>,
    /// `max_k ‖T f_k − f_{k+1}‖`
    pub max_residual: f64,
    /// `[f_1 … f_{N−1}]` has full rank `min(N − 1, d)`.
    pub linearly_independent: bool,
    pub kernel_shift: KernelShiftReport,
}

fn ensure_at_least_two(family: &VectorFamily) -> Result<()> {
    if family.len() < 2 {
        return Err(Error::TooFewVectors {
            required: 2,
            found: family.len(),
        });
    }
    Ok(())
}

fn max_vector_norm(family: &VectorFamily) -> f64 {
    family.vectors().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn build_representation(family: &VectorFamily, tol: f64) -> Result<RepresentationReport> {
    ensure_at_least_two(family)?;
    let n = family.len();
    let u = family.as_matrix();
    let sources = u.columns(0, n - 1).into_owned();
    let targets = u.columns(1, n - 1).into_owned();

    let fitted = &targets * linalg::pseudoinverse(&sources, RANK_TOL);
    let residuals: Vec<f64> = (&fitted * &sources - &targets)
        .column_iter()
        .map(|c| c.norm())
        .collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);

    let rank = linalg::svd(&sources).rank(RANK_TOL);
    let linearly_independent = rank == (n - 1).min(family.dim());

    let scale = max_vector_norm(family).max(1.0);
    let operator = if max_residual <= tol * scale {
        Some(Operator::new(fitted.clone())?)
    } else {
        None
    };
    Ok(RepresentationReport {
        operator,
        fitted,
        residuals,
        max_residual,
        linearly_independent,
        kernel_shift: kernel_shift_invariance(family, tol)?,
    })
}

/// Truncated right-shift test on `ker U_F`.
///
/// Only kernel vectors with `c_N = 0` have a shift that stays inside `C^N`;
/// the rest would need `f_{N+1}`. Those are the vectors tested, so `true`
/// is a necessary condition for shift invariance, not a proof of it.
#[derive(Debug, Clone)]
pub struct KernelShiftReport {
    pub invariant: bool,
    pub kernel_dim: usize,
    /// Dimension of `{c ∈ ker U_F : c_N = 0}`.
    pub testable_dim: usize,
    /// Worst kernel vector, scaled so its largest entry is 1.
    pub witness: Option<DenseVector>,
    /// `‖U_F · shift(witness)‖`
    pub residual: f64,
}

pub fn kernel_shift_invariance(family: &VectorFamily, tol: f64) -> Result<KernelShiftReport> {
    ensure_at_least_two(family)?;
    let n = family.len();
    let u = family.as_matrix();
    let kernel = linalg::null_space(u, RANK_TOL);
    let kernel_dim = kernel.ncols();
    if kernel_dim == 0 {
        return Ok(KernelShiftReport {
            invariant: true,
            kernel_dim,
            testable_dim: 0,
            witness: None,
            residual: 0.0,
        });
    }

    // Combinations of the kernel basis whose last coordinate vanishes.
    let last_row = kernel.rows(n - 1, 1).into_owned();
    let combos = if last_row.iter().all(|z| z.norm() <= RANK_TOL) {
        DenseMatrix::identity(kernel_dim, kernel_dim)
    } else {
        linalg::null_space(&last_row, RANK_TOL)
    };
    let testable = &kernel * combos;
    let testable_dim = testable.ncols();
    if testable_dim == 0 {
        return Ok(KernelShiftReport {
            invariant: true,
            kernel_dim,
            testable_dim,
            witness: None,
            residual: 0.0,
        });
    }

    let mut shift = DenseMatrix::zeros(n, n);
    for i in 0..n - 1 {
        shift[(i + 1, i)] = linalg::c64(1.0, 0.0);
    }
    let images = u * &shift * &testable;
    let factors = linalg::svd(&images);
    let worst = factors.sigma_max();
    let scale = linalg::tolerance_scale(u);
    let invariant = worst <= tol * scale;

    let mut witness: DenseVector = &testable * factors.right.column(0);
    let pivot = witness
        .iter()
        .copied()
        .fold(linalg::c64(0.0, 0.0), |best, z| if z.norm() > best.norm() + 1e-12 { z } else { best });
    witness /= pivot;
    let residual = (u * &shift * &witness).norm();

    Ok(KernelShiftReport {
        invariant,
        kernel_dim,
        testable_dim,
        witness: (!invariant).then_some(witness),
        residual,
    })
}

/// Operators of `T^n(F) = {T^n f_k}` computed from the transformed family and
/// from the closed forms `T^n U_F`, `U_F* (T^n)*`, `T^n S_F (T^n)*`.
#[derive(Debug, Clone)]
pub struct IteratedOperators {
    pub synthesis: DenseMatrix,
    pub analysis: DenseMatrix,
    pub frame_operator: DenseMatrix,
    /// Relative gaps between the direct and closed-form routes.
    pub synthesis_gap: f64,
    pub analysis_gap: f64,
    pub frame_operator_gap: f64,
    /// Gap between `T^n S_F (T^n)*` and `T^n U_F U_F* (T^n)*`.
    pub factorization_gap: f64,
}

impl IteratedOperators {
    pub fn max_gap(&self) -> f64 {
        self.synthesis_gap
            .max(self.analysis_gap)
            .max(self.frame_operator_gap)
            .max(self.factorization_gap)
    }

    pub fn consistent(&self, tol: f64) -> bool {
        self.max_gap() <= tol
    }
}

/// `‖A − B‖_F / ‖A‖_F`, or the absolute gap when `A = 0`.
fn relative_gap(reference: &DenseMatrix, other: &DenseMatrix) -> f64 {
    let gap = (reference - other).norm();
    let size = reference.norm();
    if size > 0.0 {
        gap / size
    } else {
        gap
    }
}

pub fn iterated_family_operators(
    family: &VectorFamily,
    operator: &Operator,
    n: u64,
) -> Result<IteratedOperators> {
    if family.dim() != operator.dim() {
        return Err(Error::DimensionMismatch {
            expected: operator.dim(),
            found: family.dim(),
        });
    }
    let power = operator.power(n);
    let moved = family.transformed(&power)?;

    let synthesis = frame::synthesis_matrix(&moved);
    let analysis = frame::analysis_matrix(&moved);
    let frame_operator = frame::frame_operator(&moved);

    let u = frame::synthesis_matrix(family);
    let s = frame::frame_operator(family);
    let power_adj = power.adjoint();
    let closed_synthesis = &power * &u;
    let closed_analysis = u.adjoint() * &power_adj;
    let closed_frame = &power * &s * &power_adj;
    let factored = &power * &u * u.adjoint() * &power_adj;

    Ok(IteratedOperators {
        synthesis_gap: relative_gap(&synthesis, &closed_synthesis),
        analysis_gap: relative_gap(&analysis, &closed_analysis),
        frame_operator_gap: relative_gap(&frame_operator, &closed_frame),
        factorization_gap: relative_gap(&closed_frame, &factored),
        synthesis,
        analysis,
        frame_operator,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RieszInvertibility {
    pub transformed_is_riesz: bool,
    pub power_invertible: bool,
}

impl RieszInvertibility {
    pub fn holds(&self) -> bool {
        self.transformed_is_riesz == self.power_invertible
    }
}

/// For a Riesz basis `F`, compares "`T^n(F)` is a Riesz basis" with
/// "`T^n` is invertible", both at tolerance `tol`.
pub fn riesz_iff_invertible(
    family: &VectorFamily,
    operator: &Operator,
    n: u64,
    tol: f64,
) -> Result<RieszInvertibility> {
    if family.dim() != operator.dim() {
        return Err(Error::DimensionMismatch {
            expected: operator.dim(),
            found: family.dim(),
        });
    }
    if !frame::is_riesz_basis(family, tol) {
        return Err(Error::PreconditionFailed("family is not a Riesz basis".into()));
    }
    let power = operator.power(n);
    let moved = family.transformed(&power)?;
    Ok(RieszInvertibility {
        transformed_is_riesz: frame::is_riesz_basis(&moved, tol),
        power_invertible: linalg::try_inverse(&power, 1.0 / tol).is_ok(),
    })
}

/// Bounded search for `n ≤ max_steps` with `‖T^n φ − f‖ < 1/k`.
///
/// A negative answer only means no such `n` was found within the search.
#[derive(Debug, Clone, Serialize)]
pub struct BallMembership {
    pub member: bool,
    /// Smallest `n` that lands in the ball.
    pub witness: Option<usize>,
    pub closest_distance: f64,
    pub closest_step: usize,
    pub searched_steps: usize,
}

pub fn ball_membership(
    operator: &Operator,
    phi: &DenseVector,
    center: &DenseVector,
    k: u32,
    max_steps: usize,
) -> Result<BallMembership> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    operator.check_vector(phi)?;
    operator.check_vector(center)?;
    let radius = 1.0 / f64::from(k);

    let mut current = phi.clone();
    let mut closest = (f64::INFINITY, 0);
    for step in 0..=max_steps {
        let distance = (&current - center).norm();
        if distance < closest.0 {
            closest = (distance, step);
        }
        if distance < radius {
            return Ok(BallMembership {
                member: true,
                witness: Some(step),
                closest_distance: distance,
                closest_step: step,
                searched_steps: step,
            });
        }
        current = operator.matrix() * current;
    }
    Ok(BallMembership {
        member: false,
        witness: None,
        closest_distance: closest.0,
        closest_step: closest.1,
        searched_steps: max_steps,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SeedClassification {
    pub index: usize,
    pub in_v: Verdict,
    pub reason: VerdictReason,
    pub bounds_estimate: BoundsVerdict,
}

/// A seed in `V(T)` that was not found in the ball `B(f, k)` of another seed `f`.
#[derive(Debug, Clone, Serialize)]
pub struct BallViolation {
    pub seed: usize,
    pub center: usize,
    pub k: u32,
    pub closest_distance: f64,
    pub closest_step: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VsetExperiment {
    pub seeds: Vec<SeedClassification>,
    pub in_v_count: usize,
    pub checks: usize,
    pub violations: Vec<BallViolation>,
    /// No pair of in-V seeds to compare.
    pub vacuous: bool,
}

/// Checks that every seed judged to lie in `V(T)` is found in every ball
/// `B(f, k)` around the other in-V seeds `f`. Violations are reported, not
/// raised.
pub fn vset_ball_experiment(
    operator: &Operator,
    seeds: &[DenseVector],
    ks: &[u32],
    max_length: usize,
    tail_tol: f64,
) -> Result<VsetExperiment> {
    let mut classified = Vec::with_capacity(seeds.len());
    for (index, seed) in seeds.iter().enumerate() {
        let config =
            OrbitConfig::with_limits(operator.clone(), seed.clone(), max_length, tail_tol)?;
        let report = orbit_frame_report(&config)?;
        classified.push(SeedClassification {
            index,
            in_v: report.in_v,
            reason: report.reason,
            bounds_estimate: report.bounds_estimate,
        });
    }
    let members: Vec<usize> = classified
        .iter()
        .filter(|c| c.in_v == Verdict::Yes)
        .map(|c| c.index)
        .collect();

    let mut checks = 0;
    let mut violations = Vec::new();
    for &seed in &members {
        for &center in &members {
            if seed == center {
                continue;
            }
            for &k in ks {
                checks += 1;
                let hit = ball_membership(operator, &seeds[seed], &seeds[center], k, max_length)?;
                if !hit.member {
                    violations.push(BallViolation {
                        seed,
                        center,
                        k,
                        closest_distance: hit.closest_distance,
                        closest_step: hit.closest_step,
                    });
                }
            }
        }
    }
    Ok(VsetExperiment {
        in_v_count: members.len(),
        vacuous: members.len() < 2,
        seeds: classified,
        checks,
        violations,
    })
}

/// `1 / ‖T^{-1}‖`: every `U` with `‖T − U‖` below it is invertible.
pub fn invertibility_neighborhood(operator: &Operator) -> Result<f64> {
    let inverse = linalg::try_inverse(operator.matrix(), COND_TOL)?;
    Ok(1.0 / linalg::operator_norm(&inverse))
}

/// `r(T^{-1}(T − U))`, which stays below 1 inside the neighborhood.
pub fn neighborhood_certificate(operator: &Operator, other: &DenseMatrix) -> Result<f64> {
    if other.shape() != operator.matrix().shape() {
        return Err(Error::DimensionMismatch {
            expected: operator.dim(),
            found: other.nrows(),
        });
    }
    let inverse = linalg::try_inverse(operator.matrix(), COND_TOL)?;
    linalg::spectral_radius(&(inverse * (operator.matrix() - other)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, real_diagonal, real_matrix, real_vector};
    use approx::assert_abs_diff_eq;

    fn op(rows: &[&[f64]]) -> Operator {
        Operator::new(real_matrix(rows)).unwrap()
    }

    fn diag(entries: &[f64]) -> Operator {
        Operator::new(real_diagonal(entries)).unwrap()
    }

    fn fib() -> Operator {
        op(&[&[0.0, 1.0], &[1.0, 1.0]])
    }

    fn close(a: &DenseMatrix, b: &DenseMatrix, eps: f64) -> bool {
        a.shape() == b.shape() && (a - b).iter().all(|z| z.norm() <= eps)
    }

    #[test]
    fn representation_of_fibonacci_family() {
        let f = VectorFamily::from_real(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]).unwrap();
        let report = build_representation(&f, 1e-9).unwrap();
        let t = report.operator.expect("exact representation");
        assert!(close(t.matrix(), fib().matrix(), 1e-12));
        assert!(report.max_residual <= 1e-12);
        assert!(report.linearly_independent);
    }

    #[test]
    fn representation_of_scaling() {
        let f = VectorFamily::from_real(&[&[1.0, 0.0], &[2.0, 0.0]]).unwrap();
        let report = build_representation(&f, 1e-9).unwrap();
        let t = report.operator.unwrap();
        assert!(close(t.matrix(), &real_diagonal(&[2.0, 0.0]), 1e-14));
        assert_eq!(report.max_residual, 0.0);
    }

    #[test]
    fn representation_of_swap_and_zero_obstruction() {
        let swap = VectorFamily::from_real(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let report = build_representation(&swap, 1e-9).unwrap();
        assert!(close(
            report.operator.unwrap().matrix(),
            &real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]]),
            1e-14
        ));

        let blocked = VectorFamily::from_real(&[&[1.0, 0.0], &[0.0, 0.0], &[0.0, 1.0]]).unwrap();
        let report = build_representation(&blocked, 1e-9).unwrap();
        assert!(report.operator.is_none());
        assert_abs_diff_eq!(report.max_residual, 1.0, epsilon = 1e-14);
        assert!(!report.linearly_independent);
    }

    #[test]
    fn representation_needs_two_vectors() {
        let single = VectorFamily::from_real(&[&[1.0]]).unwrap();
        assert!(matches!(
            build_representation(&single, 1e-9),
            Err(Error::TooFewVectors { required: 2, found: 1 })
        ));
    }

    #[test]
    fn kernel_shift_examples() {
        let independent = VectorFamily::from_real(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let r = kernel_shift_invariance(&independent, 1e-9).unwrap();
        assert!(r.invariant);
        assert_eq!(r.kernel_dim, 0);

        let triple = VectorFamily::from_real(&[&[1.0, 0.0], &[1.0, 0.0], &[1.0, 0.0]]).unwrap();
        let r = kernel_shift_invariance(&triple, 1e-9).unwrap();
        assert!(r.invariant);
        assert_eq!((r.kernel_dim, r.testable_dim), (2, 1));

        let mixed = VectorFamily::from_real(&[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let r = kernel_shift_invariance(&mixed, 1e-9).unwrap();
        assert!(!r.invariant);
        assert_abs_diff_eq!(r.residual, 2f64.sqrt(), epsilon = 1e-12);
        let w = r.witness.unwrap();
        assert!(close(
            &DenseMatrix::from_column_slice(3, 1, w.as_slice()),
            &real_matrix(&[&[1.0], &[-1.0], &[0.0]]),
            1e-12
        ));
    }

    #[test]
    fn orbit_of_zero_operator_stops_after_seed() {
        let config = OrbitConfig::new(diag(&[0.0, 0.0]), real_vector(&[1.0, 0.0])).unwrap();
        let orbit = orbit(&config);
        assert_eq!(orbit.family.len(), 1);
        assert_eq!(orbit.tail_bound, 0.0);
        assert!(!orbit.truncated_at_max);
    }

    #[test]
    fn orbit_of_diagonal_contraction() {
        let config = OrbitConfig::new(diag(&[0.9, 0.5]), real_vector(&[1.0, 1.0])).unwrap();
        let orbit = orbit(&config);
        assert!(orbit.tail_bound < 1e-10);
        for (k, v) in orbit.family.vectors().enumerate() {
            assert_abs_diff_eq!(v[0].re, 0.9f64.powi(k as i32), epsilon = 1e-14);
            assert_abs_diff_eq!(v[1].re, 0.5f64.powi(k as i32), epsilon = 1e-14);
        }
    }

    #[test]
    fn orbit_of_fibonacci_matrix() {
        let vectors = orbit_vectors(&fib(), &real_vector(&[1.0, 0.0]), 12);
        let (mut a, mut b) = (1.0, 0.0);
        for v in vectors {
            assert_eq!((v[0].re, v[1].re), (a, b));
            (a, b) = (b, a + b);
        }
        let config = OrbitConfig::new(fib(), real_vector(&[1.0, 0.0])).unwrap();
        let report = orbit_frame_report(&config).unwrap();
        assert_eq!(report.in_v, Verdict::Undecidable);
        assert_eq!(report.reason, VerdictReason::DivergingBessel);
    }

    #[test]
    fn orbit_report_golden_values() {
        let config = OrbitConfig::new(diag(&[0.9, 0.5]), real_vector(&[1.0, 1.0])).unwrap();
        let report = orbit_frame_report(&config).unwrap();
        // S_∞ = [[1/0.19, 1/0.55], [1/0.55, 1/0.75]] by summing the three geometric series.
        let (a, b, c): (f64, f64, f64) = (1.0 / 0.19, 1.0 / 0.55, 1.0 / 0.75);
        let mean = (a + c) / 2.0;
        let spread = (((a - c) / 2.0).powi(2) + b * b).sqrt();
        let bounds = report.bounds_estimate.bounds().unwrap();
        assert_abs_diff_eq!(bounds.lower, mean - spread, epsilon = 1e-9);
        assert_abs_diff_eq!(bounds.upper, mean + spread, epsilon = 1e-9);
        assert_eq!(report.in_v, Verdict::Yes);

        let axis = OrbitConfig::new(diag(&[0.9, 0.5]), real_vector(&[1.0, 0.0])).unwrap();
        let report = orbit_frame_report(&axis).unwrap();
        assert_eq!((report.in_v, report.reason), (Verdict::No, VerdictReason::Rank));

        let still = OrbitConfig::new(Operator::identity(2), real_vector(&[1.0, 0.0])).unwrap();
        let report = orbit_frame_report(&still).unwrap();
        assert_eq!(report.in_v, Verdict::No);
        assert!(report.truncated_at_max);
        assert!(report.tail_bound.is_infinite());
    }

    #[test]
    fn config_validation() {
        assert!(OrbitConfig::new(diag(&[1.0, 1.0]), real_vector(&[1.0])).is_err());
        assert!(
            OrbitConfig::with_limits(diag(&[1.0, 1.0]), real_vector(&[1.0, 0.0]), 1, 1e-10)
                .is_err()
        );
        assert!(
            OrbitConfig::with_limits(diag(&[1.0, 1.0]), real_vector(&[1.0, 0.0]), 8, 0.0)
                .is_err()
        );
        assert!(Operator::new(DenseMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn tail_estimate_for_geometric_norms() {
        // norms 0.5^k: exact tail from n is (0.25^n) / 0.75.
        let norms: Vec<f64> = (0..=40).map(|k| 0.5f64.powi(k)).collect();
        let exact = 0.25f64.powi(10) / 0.75;
        assert_abs_diff_eq!(tail_estimate(&norms, 10), exact, epsilon = 1e-15);
    }

    #[test]
    fn iterated_operators_examples() {
        let basis = VectorFamily::from_real(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let ops = iterated_family_operators(&basis, &diag(&[2.0, 3.0]), 1).unwrap();
        assert!(close(&ops.frame_operator, &real_diagonal(&[4.0, 9.0]), 1e-14));
        assert!(ops.consistent(1e-12));

        let f = VectorFamily::from_real(&[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let same = iterated_family_operators(&f, &Operator::identity(2), 3).unwrap();
        assert!(close(&same.frame_operator, &frame::frame_operator(&f), 1e-15));
        assert!(close(&same.synthesis, &frame::synthesis_matrix(&f), 1e-15));

        let ops = iterated_family_operators(&f, &fib(), 2).unwrap();
        assert!(ops.consistent(1e-12));

        assert!(matches!(
            iterated_family_operators(&f, &Operator::identity(3), 1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn riesz_examples() {
        let basis = VectorFamily::from_real(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        let r = riesz_iff_invertible(&basis, &fib(), 3, 1e-9).unwrap();
        assert_eq!((r.transformed_is_riesz, r.power_invertible), (true, true));
        let r = riesz_iff_invertible(&basis, &op(&[&[0.0, 1.0], &[0.0, 0.0]]), 1, 1e-9).unwrap();
        assert_eq!((r.transformed_is_riesz, r.power_invertible), (false, false));
        let r = riesz_iff_invertible(&basis, &diag(&[1.0, 0.0]), 2, 1e-9).unwrap();
        assert!(r.holds() && !r.power_invertible);

        let overcomplete =
            VectorFamily::from_real(&[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            riesz_iff_invertible(&overcomplete, &fib(), 1, 1e-9),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn ball_examples() {
        let phi = real_vector(&[0.3, -0.7]);
        let hit = ball_membership(&fib(), &phi, &phi, 5, 10).unwrap();
        assert_eq!(hit.witness, Some(0));

        let halving = diag(&[0.5, 0.5]);
        let hit =
            ball_membership(&halving, &real_vector(&[8.0, 8.0]), &real_vector(&[1.0, 1.0]), 2, 512)
                .unwrap();
        assert_eq!(hit.witness, Some(3));
        assert_eq!(hit.closest_distance, 0.0);

        let miss = ball_membership(
            &Operator::identity(2),
            &real_vector(&[2.0, 0.0]),
            &real_vector(&[0.0, 0.0]),
            1,
            64,
        )
        .unwrap();
        assert!(!miss.member);
        assert_eq!(miss.searched_steps, 64);
        assert_abs_diff_eq!(miss.closest_distance, 2.0);

        assert!(ball_membership(&halving, &phi, &phi, 0, 4).is_err());
    }

    #[test]
    fn vset_examples() {
        let t = diag(&[0.9, 0.5]);
        let same = vec![real_vector(&[1.0, 1.0]); 3];
        let report = vset_ball_experiment(&t, &same, &[1, 2, 4], 512, 1e-10).unwrap();
        assert_eq!(report.in_v_count, 3);
        assert!(report.violations.is_empty());
        assert_eq!(report.checks, 18);

        let singular = diag(&[1.0, 0.0]);
        let seeds = vec![real_vector(&[1.0, 1.0]), real_vector(&[2.0, -1.0])];
        let report = vset_ball_experiment(&singular, &seeds, &[1, 2], 512, 1e-10).unwrap();
        assert!(report.vacuous);
        assert_eq!(report.checks, 0);
    }

    #[test]
    fn neighborhood_examples() {
        let two = Operator::new(DenseMatrix::identity(2, 2) * c64(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(invertibility_neighborhood(&two).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            invertibility_neighborhood(&diag(&[3.0, 1.0])).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            invertibility_neighborhood(&fib()).unwrap(),
            (5f64.sqrt() - 1.0) / 2.0,
            epsilon = 1e-13
        );
        assert!(matches!(
            invertibility_neighborhood(&op(&[&[0.0, 1.0], &[0.0, 0.0]])),
            Err(Error::NotInvertible { .. })
        ));
        let nudged = fib().matrix() + real_matrix(&[&[0.3, 0.0], &[0.0, 0.0]]);
        assert!(neighborhood_certificate(&fib(), &nudged).unwrap() < 1.0);
    }
}
