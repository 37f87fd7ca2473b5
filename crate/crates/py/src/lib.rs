//! Python bindings. Vectors are lists of numbers (`complex` accepted),
//! families are lists of vectors, operators are lists of rows. Results come
//! back as floats when every entry is real and as `complex` otherwise.

use framekit::frame::{self, BoundsVerdict, VectorFamily};
use framekit::linalg::{self, PREDICATE_TOL};
use framekit::orbit::{self, OrbitConfig, Verdict, VerdictReason};
use framekit::{stability, surgery, Complex64, DenseMatrix, DenseVector};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(framekit, FrameError, PyValueError, "Invalid input or failed precondition.");
create_exception!(framekit, NotAFrameError, FrameError, "The family does not span.");

fn to_py_err(e: framekit::Error) -> PyErr {
    match e {
        framekit::Error::NotAFrame { .. } | framekit::Error::BaseNotAFrame { .. } => {
            NotAFrameError::new_err(e.to_string())
        }
        _ => FrameError::new_err(e.to_string()),
    }
}

fn family_from(vectors: Vec<Vec<Complex64>>) -> PyResult<VectorFamily> {
    let vectors: Vec<DenseVector> = vectors.into_iter().map(DenseVector::from_vec).collect();
    VectorFamily::from_vectors(&vectors).map_err(to_py_err)
}

fn matrix_from(rows: Vec<Vec<Complex64>>) -> PyResult<DenseMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(FrameError::new_err("rows have different lengths"));
    }
    Ok(DenseMatrix::from_row_iterator(rows.len(), cols, rows.into_iter().flatten()))
}

fn numbers<'py>(py: Python<'py>, entries: &[Complex64], real: bool) -> PyResult<Bound<'py, PyList>> {
    if real {
        PyList::new(py, entries.iter().map(|z| z.re))
    } else {
        PyList::new(py, entries.iter().copied())
    }
}

fn is_real<'a>(entries: impl IntoIterator<Item = &'a Complex64>) -> bool {
    entries.into_iter().all(|z| z.im == 0.0)
}

fn vector_out<'py>(py: Python<'py>, v: &DenseVector) -> PyResult<Bound<'py, PyList>> {
    numbers(py, v.as_slice(), is_real(v.iter()))
}

/// Rows of `m`.
fn rows_out<'py>(py: Python<'py>, m: &DenseMatrix) -> PyResult<Bound<'py, PyList>> {
    let real = is_real(m.iter());
    let rows = m
        .row_iter()
        .map(|r| numbers(py, &r.iter().copied().collect::<Vec<_>>(), real))
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, rows)
}

/// Columns of `m`, i.e. the vectors of a family.
fn columns_out<'py>(py: Python<'py>, m: &DenseMatrix) -> PyResult<Bound<'py, PyList>> {
    let real = is_real(m.iter());
    let cols = m
        .column_iter()
        .map(|c| numbers(py, c.as_slice(), real))
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, cols)
}

fn bounds_dict<'py>(py: Python<'py>, verdict: &BoundsVerdict) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    match verdict {
        BoundsVerdict::Frame(b) => {
            d.set_item("A", b.lower)?;
            d.set_item("B", b.upper)?;
            d.set_item("not_a_frame", false)?;
        }
        BoundsVerdict::NotAFrame { lambda_min } => {
            d.set_item("lambda_min", lambda_min)?;
            d.set_item("not_a_frame", true)?;
        }
    }
    Ok(d)
}

fn verdict_out(v: Verdict) -> Option<bool> {
    match v {
        Verdict::Yes => Some(true),
        Verdict::No => Some(false),
        Verdict::Undecidable => None,
    }
}

fn reason_name(r: VerdictReason) -> &'static str {
    match r {
        VerdictReason::Spans => "spans",
        VerdictReason::Rank => "rank",
        VerdictReason::DivergingBessel => "diverging_bessel",
        VerdictReason::Truncation => "truncation",
    }
}

/// A finite family of vectors in C^d.
#[pyclass(name = "Frame", module = "framekit", frozen)]
struct PyFrame {
    inner: VectorFamily,
}

#[pymethods]
impl PyFrame {
    #[new]
    fn new(vectors: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self {
            inner: family_from(vectors)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Frame(dim={}, len={})", self.inner.dim(), self.inner.len())
    }

    fn vectors<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        columns_out(py, self.inner.as_matrix())
    }

    /// `(A, B)`; raises `NotAFrameError` when the family does not span.
    fn bounds(&self) -> PyResult<(f64, f64)> {
        let b = frame::frame_bounds(&self.inner).map_err(to_py_err)?;
        Ok((b.lower, b.upper))
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        bounds_dict(py, &frame::classify(&self.inner).map_err(to_py_err)?)
    }

    /// Unit eigenvectors of `S` for `A` and `B`.
    fn bound_witnesses<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyList>, Bound<'py, PyList>)> {
        let (lower, upper) = frame::bound_witnesses(&self.inner).map_err(to_py_err)?;
        Ok((vector_out(py, &lower)?, vector_out(py, &upper)?))
    }

    #[pyo3(signature = (tol = PREDICATE_TOL))]
    fn is_tight(&self, tol: f64) -> PyResult<bool> {
        frame::is_tight(&self.inner, tol).map_err(to_py_err)
    }

    #[pyo3(signature = (tol = PREDICATE_TOL))]
    fn is_parseval(&self, tol: f64) -> PyResult<bool> {
        frame::is_parseval(&self.inner, tol).map_err(to_py_err)
    }

    #[pyo3(signature = (tol = PREDICATE_TOL))]
    fn is_riesz_basis(&self, tol: f64) -> bool {
        frame::is_riesz_basis(&self.inner, tol)
    }

    fn frame_operator<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        rows_out(py, &frame::frame_operator(&self.inner))
    }

    fn canonical_dual(&self) -> PyResult<PyFrame> {
        Ok(PyFrame {
            inner: frame::canonical_dual(&self.inner).map_err(to_py_err)?,
        })
    }

    fn parseval_transform(&self) -> PyResult<PyFrame> {
        Ok(PyFrame {
            inner: frame::parseval_transform(&self.inner).map_err(to_py_err)?,
        })
    }

    /// Removal criterion for the element at zero-based `index`.
    #[pyo3(signature = (index, tol = PREDICATE_TOL))]
    fn removal_test<'py>(&self, py: Python<'py>, index: usize, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = surgery::removal_test(&self.inner, index, tol).map_err(to_py_err)?;
        let d = PyDict::new(py);
        d.set_item("index", r.index)?;
        d.set_item("A", r.bounds.lower)?;
        d.set_item("B", r.bounds.upper)?;
        d.set_item("criterion_value", r.criterion_value)?;
        d.set_item("threshold", r.threshold)?;
        d.set_item("removable", r.removable)?;
        d.set_item("post_removal", bounds_dict(py, &r.post_removal_bounds)?)?;
        d.set_item("certified_lower_bound", r.certified_lower_bound)?;
        d.set_item("transformed_lower_bound", r.transformed_lower_bound)?;
        d.set_item("certificate_holds", r.certificate_holds)?;
        Ok(d)
    }

    /// Fits `T` with `T f_k = f_{k+1}`; `operator` is `None` when no exact fit exists.
    #[pyo3(signature = (tol = PREDICATE_TOL))]
    fn representation<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = orbit::build_representation(&self.inner, tol).map_err(to_py_err)?;
        let d = PyDict::new(py);
        let operator = r.operator.as_ref().map(|op| rows_out(py, op.matrix())).transpose()?;
        d.set_item("operator", operator)?;
        d.set_item("fitted", rows_out(py, &r.fitted)?)?;
        d.set_item("residuals", r.residuals)?;
        d.set_item("max_residual", r.max_residual)?;
        d.set_item("linearly_independent", r.linearly_independent)?;
        d.set_item("kernel_shift_invariant", r.kernel_shift.invariant)?;
        Ok(d)
    }
}

/// `(seed, center, k, closest_distance)`
type Violation = (usize, usize, u32, f64);

/// A square matrix acting on C^d.
#[pyclass(name = "Operator", module = "framekit", frozen)]
struct PyOperator {
    inner: orbit::Operator,
}

impl PyOperator {
    fn vector(&self, v: Vec<Complex64>) -> PyResult<DenseVector> {
        let v = DenseVector::from_vec(v);
        self.inner.check_vector(&v).map_err(to_py_err)?;
        Ok(v)
    }
}

#[pymethods]
impl PyOperator {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        Ok(Self {
            inner: orbit::Operator::new(matrix_from(rows)?).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __repr__(&self) -> String {
        format!("Operator(dim={})", self.inner.dim())
    }

    fn matrix<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        rows_out(py, self.inner.matrix())
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn spectral_radius(&self) -> PyResult<f64> {
        linalg::spectral_radius(self.inner.matrix()).map_err(to_py_err)
    }

    /// `1/‖T⁻¹‖`, or `None` for a singular operator.
    fn neighborhood_radius(&self) -> PyResult<Option<f64>> {
        match orbit::invertibility_neighborhood(&self.inner) {
            Ok(r) => Ok(Some(r)),
            Err(framekit::Error::NotInvertible { .. }) => Ok(None),
            Err(e) => Err(to_py_err(e)),
        }
    }

    /// The first `count` orbit vectors `φ, Tφ, …` as a `Frame`.
    fn orbit(&self, seed: Vec<Complex64>, count: usize) -> PyResult<PyFrame> {
        let seed = self.vector(seed)?;
        let vectors = orbit::orbit_vectors(&self.inner, &seed, count);
        Ok(PyFrame {
            inner: VectorFamily::from_vectors(&vectors).map_err(to_py_err)?,
        })
    }

    /// Decides whether the orbit of `seed` is a frame; `in_V` is `None` when undecidable.
    #[pyo3(signature = (seed, n_max = orbit::DEFAULT_MAX_LENGTH, tail_tol = orbit::DEFAULT_TAIL_TOL))]
    fn orbit_report<'py>(
        &self,
        py: Python<'py>,
        seed: Vec<Complex64>,
        n_max: usize,
        tail_tol: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let config = OrbitConfig::with_limits(self.inner.clone(), self.vector(seed)?, n_max, tail_tol)
            .map_err(to_py_err)?;
        let r = orbit::orbit_frame_report(&config).map_err(to_py_err)?;
        let d = bounds_dict(py, &r.bounds_estimate)?;
        d.set_item("in_V", verdict_out(r.in_v))?;
        d.set_item("reason", reason_name(r.reason))?;
        d.set_item("truncation_used", r.truncation_used)?;
        d.set_item("truncated_at_max", r.truncated_at_max)?;
        d.set_item("tail_bound", r.tail_bound)?;
        d.set_item("upper_with_tail", r.upper_with_tail)?;
        Ok(d)
    }

    /// Perturbation certificate for the orbits of `base` and `perturbed` up to `T^n`.
    #[pyo3(signature = (base, perturbed, n = 10, tol = stability::DEFAULT_STABILITY_TOL))]
    fn stability<'py>(
        &self,
        py: Python<'py>,
        base: Vec<Complex64>,
        perturbed: Vec<Complex64>,
        n: usize,
        tol: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let (base, perturbed) = (self.vector(base)?, self.vector(perturbed)?);
        let r = stability::stability_test(&self.inner, &base, &perturbed, n, tol).map_err(to_py_err)?;
        let d = PyDict::new(py);
        d.set_item("lower_bound_A", r.lower_bound_a)?;
        d.set_item("k_inverse", r.radius)?;
        d.set_item("mu", r.mu)?;
        d.set_item("sufficient", r.sufficient)?;
        d.set_item("certified_lower_bound", r.certified_lower_bound)?;
        d.set_item("oracle_bounds", bounds_dict(py, &r.oracle_bounds)?)?;
        d.set_item("bessel_difference", r.bessel_difference)?;
        Ok(d)
    }

    /// Ball-inclusion experiment over `seeds`; returns `(in_V_count, checks, violations)`
    /// where each violation is `(seed, center, k, closest_distance)` with zero-based indices.
    #[pyo3(signature = (seeds, ks, n_max = orbit::DEFAULT_MAX_LENGTH, tail_tol = orbit::DEFAULT_TAIL_TOL))]
    fn vset(
        &self,
        seeds: Vec<Vec<Complex64>>,
        ks: Vec<u32>,
        n_max: usize,
        tail_tol: f64,
    ) -> PyResult<(usize, usize, Vec<Violation>)> {
        let seeds = seeds
            .into_iter()
            .map(|s| self.vector(s))
            .collect::<PyResult<Vec<_>>>()?;
        let e = orbit::vset_ball_experiment(&self.inner, &seeds, &ks, n_max, tail_tol)
            .map_err(to_py_err)?;
        let violations = e
            .violations
            .iter()
            .map(|v| (v.seed, v.center, v.k, v.closest_distance))
            .collect();
        Ok((e.in_v_count, e.checks, violations))
    }
}

/// `radius · (Σ_{i=0}^n norm^{2i})^{1/2}`
#[pyfunction]
fn perturbation_mu(norm: f64, radius: f64, n: usize) -> f64 {
    stability::mu_from_norm(norm, radius, n)
}

/// Optimal frame bounds of a list of vectors.
#[pyfunction]
fn frame_bounds(vectors: Vec<Vec<Complex64>>) -> PyResult<(f64, f64)> {
    PyFrame::new(vectors)?.bounds()
}

#[pymodule]
#[pyo3(name = "framekit")]
fn framekit_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFrame>()?;
    m.add_class::<PyOperator>()?;
    m.add_function(wrap_pyfunction!(perturbation_mu, m)?)?;
    m.add_function(wrap_pyfunction!(frame_bounds, m)?)?;
    m.add("FrameError", m.py().get_type::<FrameError>())?;
    m.add("NotAFrameError", m.py().get_type::<NotAFrameError>())?;
    Ok(())
}
