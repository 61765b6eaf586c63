//! Python bindings for the `acg_closure` crate.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use acg_closure::{acg, carlson, cli, lambert, relation, ClosureMethod, EigenTriple, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NoConvergence { .. } | Error::Quadrature { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

type Triple = (f64, f64, f64);

fn triple(t: Triple) -> EigenTriple {
    EigenTriple::new(t.0, t.1, t.2)
}

fn untriple(t: EigenTriple) -> Triple {
    (t[0], t[1], t[2])
}

#[pyfunction]
fn rc(x: f64, y: f64) -> PyResult<f64> {
    carlson::rc(x, y).map_err(to_py)
}

#[pyfunction]
fn rf(x: f64, y: f64, z: f64) -> PyResult<f64> {
    carlson::rf(x, y, z).map_err(to_py)
}

#[pyfunction]
fn rd(x: f64, y: f64, z: f64) -> PyResult<f64> {
    carlson::rd(x, y, z).map_err(to_py)
}

#[pyfunction]
fn rj(x: f64, y: f64, z: f64, p: f64) -> PyResult<f64> {
    carlson::rj(x, y, z, p).map_err(to_py)
}

#[pyfunction]
fn rd_partials(x: f64, y: f64, z: f64) -> PyResult<Triple> {
    carlson::rd_partials(x, y, z).map_err(to_py)
}

#[pyfunction]
fn w_m1(x: f64) -> PyResult<f64> {
    lambert::w_m1(x).map_err(to_py)
}

#[pyfunction]
fn f_axial(x: f64) -> PyResult<f64> {
    relation::f_axial(x).map_err(to_py)
}

#[pyfunction]
fn a_from_b(b: Triple) -> PyResult<Triple> {
    acg::a_from_b(&triple(b)).map(untriple).map_err(to_py)
}

#[pyfunction]
fn b_from_a(a: Triple) -> PyResult<Triple> {
    acg::b_from_a(&triple(a)).map(untriple).map_err(to_py)
}

#[pyfunction]
fn axial_invert(a: f64) -> PyResult<f64> {
    acg::axial_invert(a).map_err(to_py)
}

/// Fully symmetric rank-4 tensor in 3D (zero-based indices).
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct SymTensor4 {
    inner: acg_closure::SymTensor4,
}

#[pymethods]
impl SymTensor4 {
    fn get(&self, i: usize, j: usize, k: usize, l: usize) -> PyResult<f64> {
        if i > 2 || j > 2 || k > 2 || l > 2 {
            return Err(PyValueError::new_err("indices must be 0, 1 or 2"));
        }
        Ok(self.inner.get(i, j, k, l))
    }

    /// The 3x3 matrix of A_iijj.
    fn iijj(&self) -> [[f64; 3]; 3] {
        self.inner.iijj()
    }

    /// The 15 independent components in sorted multi-index order.
    fn components(&self) -> Vec<f64> {
        self.inner.components().to_vec()
    }

    fn contraction(&self, i: usize) -> PyResult<f64> {
        if i > 2 {
            return Err(PyValueError::new_err("index must be 0, 1 or 2"));
        }
        Ok(self.inner.contraction(i))
    }

    fn __repr__(&self) -> String {
        format!("SymTensor4(iijj={:?})", self.inner.iijj())
    }
}

/// Result of `closure`.
#[pyclass(frozen, skip_from_py_object)]
struct Closure {
    #[pyo3(get)]
    moment: Py<SymTensor4>,
    #[pyo3(get)]
    b: Triple,
    #[pyo3(get)]
    route: &'static str,
}

#[pyfunction]
#[pyo3(signature = (a, method = "exact"))]
fn closure(py: Python<'_>, a: Triple, method: &str) -> PyResult<Closure> {
    let method: ClosureMethod = method.parse().map_err(to_py)?;
    let c = acg::closure(&triple(a), method).map_err(to_py)?;
    Ok(Closure {
        moment: Py::new(py, SymTensor4 { inner: c.moment })?,
        b: untriple(c.b),
        route: c.route,
    })
}

/// CSV text of a figure sweep; `lo`/`hi` default to the line's range.
#[pyfunction]
#[pyo3(signature = (line, points = 200, lo = None, hi = None, spacing = "log"))]
fn sweep(
    line: &str,
    points: usize,
    lo: Option<f64>,
    hi: Option<f64>,
    spacing: &str,
) -> PyResult<String> {
    let line: cli::SweepLine = line.parse().map_err(to_py)?;
    let (dlo, dhi) = line.default_range();
    let spacing = match spacing {
        "log" => cli::Spacing::Log,
        "linear" => cli::Spacing::Linear,
        other => return Err(PyValueError::new_err(format!("unknown spacing `{other}`"))),
    };
    let spec = cli::SweepSpec {
        line,
        range: (lo.unwrap_or(dlo), hi.unwrap_or(dhi)),
        points,
        spacing,
    };
    spec.csv().map_err(to_py)
}

/// List of (name, max_error, tolerance, passed) rows.
#[pyfunction]
fn verify(py: Python<'_>) -> Vec<(&'static str, f64, f64, bool)> {
    let report = py.detach(cli::verify);
    report
        .checks
        .iter()
        .map(|c| (c.name, c.max_error, c.tolerance, c.passed))
        .collect()
}

#[pymodule]
fn acg_closure_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(rc, m)?)?;
    m.add_function(wrap_pyfunction!(rf, m)?)?;
    m.add_function(wrap_pyfunction!(rd, m)?)?;
    m.add_function(wrap_pyfunction!(rj, m)?)?;
    m.add_function(wrap_pyfunction!(rd_partials, m)?)?;
    m.add_function(wrap_pyfunction!(w_m1, m)?)?;
    m.add_function(wrap_pyfunction!(f_axial, m)?)?;
    m.add_function(wrap_pyfunction!(a_from_b, m)?)?;
    m.add_function(wrap_pyfunction!(b_from_a, m)?)?;
    m.add_function(wrap_pyfunction!(axial_invert, m)?)?;
    m.add_function(wrap_pyfunction!(closure, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_class::<SymTensor4>()?;
    m.add_class::<Closure>()?;
    Ok(())
}
