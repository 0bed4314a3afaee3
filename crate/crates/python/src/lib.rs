//! Python bindings: `import mpghz`.

use multiport_ghz::report::{run as run_report, RunOptions};
use multiport_ghz::verify::{Harness, Level};
use multiport_ghz::{
    self as core, ClosedForm, Complex64, ComplexMatrix, OutputPattern, PostselectedState,
    SchemeInstance, SchemeKind,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    m.to_rows()
}

#[pyfunction]
fn build_dft(n: usize) -> PyResult<Vec<Vec<Complex64>>> {
    core::build_dft(n).map(|m| to_rows(&m)).map_err(err)
}

#[pyfunction]
fn build_2n_port(n: usize) -> PyResult<Vec<Vec<Complex64>>> {
    core::build_2n_port(n).map(|m| to_rows(&m)).map_err(err)
}

/// Permanent of a square complex matrix given as a list of rows.
#[pyfunction]
#[pyo3(signature = (rows, method = "ryser"))]
fn perm(rows: Vec<Vec<Complex64>>, method: &str) -> PyResult<Complex64> {
    let m = ComplexMatrix::from_rows(&rows).map_err(err)?;
    match method {
        "ryser" => core::perm_ryser(&m).map_err(err),
        "naive" => core::perm_naive(&m).map_err(err),
        other => Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
}

#[pyfunction]
fn closed_form(name: &str, n: usize) -> PyResult<f64> {
    let which: ClosedForm = name.parse().map_err(err)?;
    core::closed_form(which, n).map_err(err)
}

#[pyfunction]
fn ztl_allowed(pattern: Vec<usize>) -> PyResult<bool> {
    let n = pattern.len();
    if n == 0 {
        return Err(PyValueError::new_err("empty pattern"));
    }
    let p = OutputPattern::new(pattern);
    Ok(core::ztl_allowed(&p, n))
}

#[pyfunction]
fn internal_survivors(scheme: &str, n: usize) -> PyResult<Vec<usize>> {
    let kind: SchemeKind = scheme.parse().map_err(err)?;
    Ok(core::internal_survivors(kind, n)
        .map_err(err)?
        .into_iter()
        .collect())
}

/// Full report of one scheme run, as a JSON string.
#[pyfunction]
#[pyo3(signature = (scheme, n, mode = 1, allow_special_n4 = false, tol = 1e-10))]
fn run(scheme: &str, n: usize, mode: usize, allow_special_n4: bool, tol: f64) -> PyResult<String> {
    let opts = RunOptions {
        kind: scheme.parse().map_err(err)?,
        n,
        mode,
        allow_special_n4,
        tol,
    };
    let report = run_report(&opts).map_err(err)?;
    serde_json::to_string(&report).map_err(err)
}

/// Runs the acceptance checks; returns `(id, name, passed, detail)` tuples.
#[pyfunction]
#[pyo3(signature = (level = "quick"))]
fn verify(level: &str) -> PyResult<Vec<(u32, String, bool, String)>> {
    let level = match level {
        "quick" => Level::Quick,
        "full" => Level::Full,
        other => return Err(PyValueError::new_err(format!("unknown level {other:?}"))),
    };
    Ok(Harness::new(level)
        .run_all()
        .into_iter()
        .map(|o| (o.id, o.name, o.passed, o.detail))
        .collect())
}

#[pyclass(name = "Scheme", frozen)]
struct PyScheme {
    inner: SchemeInstance,
}

#[pymethods]
impl PyScheme {
    #[new]
    #[pyo3(signature = (kind, n, mode = 1))]
    fn new(kind: &str, n: usize, mode: usize) -> PyResult<Self> {
        let kind: SchemeKind = kind.parse().map_err(err)?;
        let inner = core::make_scheme(kind, n, mode).map_err(err)?;
        Ok(Self { inner })
    }

    /// The odd-scheme input at any `n`, including even `n`.
    #[staticmethod]
    fn odd_input(n: usize) -> PyResult<Self> {
        let inner = core::schemes::odd_phase_input(n).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn kind(&self) -> String {
        self.inner.kind.to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn target(&self) -> Vec<usize> {
        self.inner.target.counts().to_vec()
    }

    fn closed_form_reference(&self) -> Option<f64> {
        self.inner.closed_form_reference()
    }

    fn postselect(&self, py: Python<'_>) -> PyResult<PyState> {
        let inner = py.detach(|| self.inner.postselect()).map_err(err)?;
        Ok(PyState { inner })
    }

    /// `(occupations, probability)` for every output pattern.
    fn full_distribution(&self, py: Python<'_>) -> PyResult<Vec<(Vec<usize>, f64)>> {
        let dist = py.detach(|| self.inner.full_distribution()).map_err(err)?;
        Ok(dist
            .into_iter()
            .map(|(p, prob)| (p.counts().to_vec(), prob))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Scheme({:?}, n={})", self.inner.kind.name(), self.inner.n)
    }
}

#[pyclass(name = "PostselectedState", frozen)]
struct PyState {
    inner: PostselectedState,
}

#[pymethods]
impl PyState {
    #[getter]
    fn probability(&self) -> f64 {
        self.inner.probability()
    }

    #[getter]
    fn pattern(&self) -> Vec<usize> {
        self.inner.pattern().counts().to_vec()
    }

    /// Assignment string to amplitude, in enumeration order.
    fn amplitudes(&self) -> Vec<(String, Complex64)> {
        self.inner
            .amplitudes()
            .iter()
            .map(|(a, z)| (a.to_string(), *z))
            .collect()
    }

    #[pyo3(signature = (tol = 1e-10))]
    fn support(&self, tol: f64) -> Vec<String> {
        self.inner
            .support(tol)
            .into_iter()
            .map(|a| a.to_string())
            .collect()
    }

    fn weight_by_eta_count(&self) -> Vec<f64> {
        self.inner.weight_by_eta_count()
    }

    /// `(fidelity, relative_phase)` against the closest GHZ state.
    fn ghz_fidelity(&self) -> PyResult<(f64, f64)> {
        let g = core::ghz_fidelity(&self.inner).map_err(err)?;
        Ok((g.fidelity, g.relative_phase))
    }

    fn __repr__(&self) -> String {
        format!(
            "PostselectedState(pattern={}, probability={:e})",
            self.inner.pattern(),
            self.inner.probability()
        )
    }
}

#[pymodule]
fn mpghz(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(build_dft, m)?)?;
    m.add_function(wrap_pyfunction!(build_2n_port, m)?)?;
    m.add_function(wrap_pyfunction!(perm, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(ztl_allowed, m)?)?;
    m.add_function(wrap_pyfunction!(internal_survivors, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_class::<PyScheme>()?;
    m.add_class::<PyState>()?;
    Ok(())
}
