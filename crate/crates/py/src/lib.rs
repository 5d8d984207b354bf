//! Python bindings. Matrices cross the boundary as lists of rows, reports as JSON text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use quadric_core::hypersurface::{HypersurfaceData, HypersurfaceRecord};
use quadric_core::linalg::{Operator, DEFAULT_EIGEN_TOL};
use quadric_core::models::{PrincipalCandidate, TubeOptions, TubeVariant};
use quadric_core::report::to_json_string;
use quadric_core::theorem::{self, CLASSIFY_TOL};
use quadric_core::{suites, GeometryError};

fn err(e: GeometryError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows(op: &Operator) -> Vec<Vec<f64>> {
    (0..op.nrows()).map(|i| op.row(i).iter().copied().collect()).collect()
}

fn matrix(rows: &[Vec<f64>]) -> PyResult<Operator> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(Operator::from_fn(n, n, |i, j| rows[i][j]))
}

#[pyclass(name = "TangentModel", frozen)]
struct PyTangentModel(quadric_core::TangentModel);

#[pymethods]
impl PyTangentModel {
    #[new]
    fn new(m: usize) -> PyResult<Self> {
        quadric_core::TangentModel::new(m).map(Self).map_err(err)
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn j(&self) -> Vec<Vec<f64>> {
        rows(self.0.j())
    }

    /// The conjugation `cos θ A + sin θ JA`.
    #[pyo3(signature = (theta = 0.0))]
    fn conjugation(&self, theta: f64) -> Vec<Vec<f64>> {
        rows(&self.0.rotate_conjugation(theta))
    }

    fn curvature(&self, x: Vec<f64>, y: Vec<f64>, z: Vec<f64>) -> PyResult<Vec<f64>> {
        let v = |c: Vec<f64>| self.0.vector(&c).map_err(err);
        Ok(self.0.ambient_curvature(&v(x)?, &v(y)?, &v(z)?).iter().copied().collect())
    }

    fn jacobi(&self, u: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        let u = self.0.vector(&u).map_err(err)?;
        self.0.ambient_jacobi(&u).map(|r| rows(&r)).map_err(err)
    }

    /// Returns `(t, kind)` with `t` in `[0, π/4]`.
    fn canonical_angle(&self, u: Vec<f64>) -> PyResult<(f64, &'static str)> {
        let u = self.0.vector(&u).map_err(err)?;
        let c = self.0.canonical_angle(&u).map_err(err)?;
        Ok((c.t, c.kind.label()))
    }

    fn __repr__(&self) -> String {
        format!("TangentModel(m={})", self.0.m())
    }
}

#[pyclass(name = "Hypersurface", frozen)]
struct PyHypersurface(HypersurfaceData);

#[pymethods]
impl PyHypersurface {
    #[new]
    #[pyo3(signature = (m, normal, shape, alpha, q_xi = 0.0))]
    fn new(m: usize, normal: Vec<f64>, shape: Vec<Vec<f64>>, alpha: f64, q_xi: f64) -> PyResult<Self> {
        let rec = HypersurfaceRecord {
            m,
            normal,
            shape,
            alpha,
            q_xi,
            family: None,
            k: None,
            r: None,
        };
        HypersurfaceData::from_record(&rec).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        suites::load_hypersurface(text)
            .map(Self)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        to_json_string(&self.0.to_record())
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    #[getter]
    fn normal(&self) -> Vec<f64> {
        self.0.normal().iter().copied().collect()
    }

    #[getter]
    fn xi(&self) -> Vec<f64> {
        self.0.xi().iter().copied().collect()
    }

    fn shape(&self) -> Vec<Vec<f64>> {
        rows(self.0.shape())
    }

    fn is_hopf(&self) -> bool {
        self.0.is_hopf()
    }

    fn structure_jacobi(&self) -> Vec<Vec<f64>> {
        rows(&self.0.structure_jacobi())
    }

    /// Eigenvalues of `S` on the tangent space, ascending.
    fn shape_spectrum(&self) -> PyResult<Vec<f64>> {
        Ok(self.0.tangent_spectrum(self.0.shape()).map_err(err)?.eigenvalues)
    }

    fn structure_jacobi_spectrum(&self) -> PyResult<Vec<f64>> {
        Ok(self
            .0
            .tangent_spectrum(&self.0.structure_jacobi())
            .map_err(err)?
            .eigenvalues)
    }

    fn hopf_identity_residual(&self) -> PyResult<f64> {
        self.0.hopf_identity_residual().map_err(err)
    }

    fn reeb_parallel_residual(&self) -> PyResult<f64> {
        self.0.reeb_parallel_residual().map_err(err)
    }

    fn ricci(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        let x = self.0.model().vector(&x).map_err(err)?;
        Ok(self.0.ricci(&x).map_err(err)?.iter().copied().collect())
    }

    #[pyo3(signature = (tol = CLASSIFY_TOL))]
    fn classify(&self, tol: f64) -> PyResult<String> {
        Ok(theorem::classify(&self.0, tol).map_err(err)?.verdict.label())
    }

    fn __repr__(&self) -> String {
        format!("Hypersurface(m={}, alpha={})", self.0.m(), self.0.alpha())
    }
}

#[pyclass(name = "Tube", frozen)]
struct PyTube(quadric_core::TubeModel);

#[pymethods]
impl PyTube {
    #[new]
    #[pyo3(signature = (k, r, non_vanishing = true, swapped = false))]
    fn new(k: usize, r: f64, non_vanishing: bool, swapped: bool) -> PyResult<Self> {
        let opts = TubeOptions {
            non_vanishing,
            variant: if swapped {
                TubeVariant::Swapped
            } else {
                TubeVariant::Preserving
            },
        };
        quadric_core::TubeModel::build_with(k, r, opts).map(Self).map_err(err)
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn r(&self) -> f64 {
        self.0.r()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    fn hypersurface(&self) -> PyHypersurface {
        PyHypersurface(self.0.data().clone())
    }

    /// `(value, multiplicity)` pairs the shape operator should have.
    fn expected_shape_spectrum(&self) -> Vec<(f64, usize)> {
        self.0.expected_shape_spectrum()
    }

    fn expected_structure_jacobi_spectrum(&self) -> Vec<(f64, usize)> {
        self.0.expected_structure_jacobi_spectrum()
    }

    fn __repr__(&self) -> String {
        format!("Tube(k={}, r={})", self.0.k(), self.0.r())
    }
}

/// Eigenvalues (ascending) and `(value, multiplicity)` clusters of a symmetric matrix.
#[pyfunction]
#[pyo3(signature = (rows, tol = DEFAULT_EIGEN_TOL))]
#[allow(clippy::type_complexity)]
fn sym_eigen(rows: Vec<Vec<f64>>, tol: f64) -> PyResult<(Vec<f64>, Vec<(f64, usize)>)> {
    let rep = quadric_core::sym_eigen(&matrix(&rows)?, tol).map_err(err)?;
    let mult = rep.multiplicities();
    Ok((rep.eigenvalues, mult))
}

/// Runs the principal nonexistence certificate; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (m, alphas = None, samples = 25, seed = 7, tol = suites::DEFAULT_TOL))]
fn nonexistence(m: usize, alphas: Option<Vec<f64>>, samples: usize, seed: u64, tol: f64) -> PyResult<String> {
    let alphas = alphas.unwrap_or_else(|| theorem::sample_alphas(samples, seed));
    suites::cmd_nonexistence(m, &alphas, seed, tol)
        .map(|r| r.to_json())
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (m, tol = suites::DEFAULT_TOL, seed = 7))]
fn verify_ambient(m: usize, tol: f64, seed: u64) -> PyResult<String> {
    suites::cmd_verify_ambient(m, tol, seed).map(|r| r.to_json()).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (k, r, tol = 1e-11, non_vanishing = true))]
fn verify_tube(k: usize, r: f64, tol: f64, non_vanishing: bool) -> PyResult<String> {
    let opts = TubeOptions {
        non_vanishing,
        ..Default::default()
    };
    suites::cmd_verify_tube(k, r, tol, opts).map(|r| r.to_json()).map_err(err)
}

/// Hopf data with `A`-principal normal at which `R_ξ` is Reeb-parallel.
#[pyfunction]
fn principal_point(m: usize, alpha: f64) -> PyResult<PyHypersurface> {
    PrincipalCandidate::reeb_parallel_point(m, alpha)
        .map(|c| PyHypersurface(c.data().clone()))
        .map_err(err)
}

#[pymodule]
fn quadric(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyTangentModel>()?;
    m.add_class::<PyHypersurface>()?;
    m.add_class::<PyTube>()?;
    m.add_function(wrap_pyfunction!(sym_eigen, m)?)?;
    m.add_function(wrap_pyfunction!(nonexistence, m)?)?;
    m.add_function(wrap_pyfunction!(verify_ambient, m)?)?;
    m.add_function(wrap_pyfunction!(verify_tube, m)?)?;
    m.add_function(wrap_pyfunction!(principal_point, m)?)?;
    Ok(())
}
