//! Python bindings for the `annulus` crate.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

use annulus::experiment::{absolute_spec, scaled_spec, summarize, write_summary_csv, write_trials_csv, GridPoint};
use annulus::{analysis, geometry, io, recovery, Error, GeometricInstance, Model, RecoveryOutcome, RegimeVerdict};
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_model(name: &str) -> PyResult<Model> {
    serde_json::from_value(serde_json::Value::String(name.replace('-', "_")))
        .map_err(|_| PyValueError::new_err(format!("unknown model {name:?}")))
}

#[pyfunction]
fn connectivity_scale(n: usize, t: usize) -> f64 {
    annulus::connectivity_scale(n, t)
}

#[pyfunction]
fn surface_area(t: usize) -> f64 {
    geometry::surface_area(t)
}

#[pyfunction]
fn psi(t: usize) -> f64 {
    geometry::psi(t)
}

#[pyfunction]
fn cap_fraction(t: usize, r: f64) -> PyResult<f64> {
    geometry::cap_fraction(t, r).map_err(py_err)
}

#[pyfunction]
fn annulus_fraction(t: usize, r1: f64, r2: f64) -> PyResult<f64> {
    geometry::annulus_fraction(t, r1, r2).map_err(py_err)
}

#[pyfunction]
fn lens_fraction(t: usize, r1: f64, r2: f64, ell: f64) -> PyResult<f64> {
    geometry::lens_fraction(t, r1, r2, ell).map_err(py_err)
}

#[pyfunction]
fn solve_t1(b: f64) -> PyResult<f64> {
    recovery::solve_t1(b).map_err(py_err)
}

#[pyfunction]
fn solve_t2(b: f64) -> Option<f64> {
    recovery::solve_t2(b)
}

#[pyfunction]
fn min_a_for_recovery(b: f64) -> PyResult<f64> {
    recovery::min_a_for_recovery(b).map_err(py_err)
}

#[pyfunction]
fn recovery_guaranteed(a: f64, b: f64) -> PyResult<bool> {
    recovery::recovery_guaranteed(a, b).map_err(py_err)
}

/// Thresholds for scaled parameters `(a, b)` as a dict.
#[pyfunction]
fn recovery_thresholds<'py>(py: Python<'py>, a: f64, b: f64) -> PyResult<Bound<'py, PyDict>> {
    let th = recovery::compute_thresholds(a, b).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("t1", th.t1)?;
    d.set_item("t2", th.t2)?;
    d.set_item("theta1", th.theta1)?;
    d.set_item("theta2", th.theta2)?;
    d.set_item("e_s", th.e_s)?;
    d.set_item("e_d", th.e_d)?;
    Ok(d)
}

fn verdict(v: RegimeVerdict) -> (String, f64) {
    (v.verdict.to_string(), v.margin)
}

#[pyfunction]
fn predicted_vrg_connectivity(a: f64, b: f64) -> (String, f64) {
    verdict(analysis::predicted_vrg_connectivity(a, b))
}

#[pyfunction]
fn predicted_isolated_rag(t: usize, a: f64, b: f64) -> (String, f64) {
    verdict(analysis::predicted_isolated_rag(t, a, b))
}

/// Runs a sweep from its JSON config. Returns `(trials_csv, summary_csv)`.
#[pyfunction]
fn run_sweep(py: Python<'_>, config_json: &str) -> PyResult<(String, String)> {
    let config: annulus::SweepConfig =
        serde_json::from_str(config_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let records = py.detach(|| config.run()).map_err(py_err)?;
    let mut trials = Vec::new();
    write_trials_csv(&records, false, &mut trials).map_err(py_err)?;
    let mut summary = Vec::new();
    write_summary_csv(&summarize(&records), &mut summary).map_err(py_err)?;
    Ok((
        String::from_utf8(trials).expect("ascii csv"),
        String::from_utf8(summary).expect("ascii csv"),
    ))
}

fn outcome_dict<'py>(py: Python<'py>, out: &RecoveryOutcome) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("labels", out.partition.labels().to_vec())?;
    d.set_item("components", out.component_count)?;
    d.set_item("removed_edges", out.removed_edges)?;
    d.set_item("ambiguous", out.ambiguous)?;
    d.set_item("accuracy", out.accuracy)?;
    d.set_item("exact", out.exact)?;
    Ok(d)
}

/// A sampled graph with its vertex positions.
#[pyclass(frozen)]
struct Instance {
    inner: GeometricInstance,
}

#[pymethods]
impl Instance {
    /// Samples an instance. `a`, `b`, `c` are multiples of
    /// `(ln n / n)^(1/t)` unless `absolute` is set.
    #[staticmethod]
    #[pyo3(signature = (model, n, a, b, t=1, c=None, seed=0, absolute=false))]
    #[allow(clippy::too_many_arguments)]
    fn generate(
        py: Python<'_>,
        model: &str,
        n: usize,
        a: f64,
        b: f64,
        t: usize,
        c: Option<f64>,
        seed: u64,
        absolute: bool,
    ) -> PyResult<Self> {
        let model = parse_model(model)?;
        let point = GridPoint { n, t, a, b, c };
        let spec = if absolute {
            absolute_spec(model, &point)
        } else {
            scaled_spec(model, &point)
        }
        .map_err(py_err)?;
        let inner = py.detach(|| annulus::generate(spec, n, seed)).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let file = File::open(path).map_err(|e| py_err(e.into()))?;
        let inner = io::read_instance(BufReader::new(file)).map_err(py_err)?;
        Ok(Self { inner })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        let file = File::create(path).map_err(|e| py_err(e.into()))?;
        let mut w = BufWriter::new(file);
        io::write_instance(&self.inner, &mut w).map_err(py_err)?;
        w.flush().map_err(|e| py_err(e.into()))
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.graph.edge_count()
    }

    #[getter]
    fn t(&self) -> usize {
        self.inner.dim_t()
    }

    #[getter]
    fn model(&self) -> &'static str {
        self.inner.model().name()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner.graph.edges().collect()
    }

    /// Circle positions as floats, sphere positions as coordinate lists.
    fn positions(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        Ok(match &self.inner.positions {
            annulus::Positions::Circle(p) => p.iter().map(|x| x.value()).collect::<Vec<_>>().into_pyobject(py)?.into_any().unbind(),
            annulus::Positions::Sphere(p) => p
                .iter()
                .map(|x| x.coords().to_vec())
                .collect::<Vec<_>>()
                .into_pyobject(py)?
                .into_any()
                .unbind(),
        })
    }

    fn truth(&self) -> Option<Vec<u8>> {
        self.inner.truth.as_ref().map(|p| p.labels().to_vec())
    }

    fn degrees(&self) -> Vec<usize> {
        (0..self.inner.n()).map(|u| self.inner.graph.degree(u)).collect()
    }

    fn components(&self) -> usize {
        analysis::connected_components(&self.inner.graph).count
    }

    fn isolated(&self) -> usize {
        analysis::count_isolated(&self.inner.graph)
    }

    fn no_left_neighbor(&self) -> PyResult<usize> {
        analysis::count_no_left_neighbor(&self.inner).map_err(py_err)
    }

    /// Common-neighbor count of every edge, keyed by `(u, v)` with `u < v`.
    fn triangle_counts(&self) -> Vec<((u32, u32), u32)> {
        analysis::edge_triangle_counts(&self.inner.graph).iter().collect()
    }

    /// Compares the edge set with a brute-force rebuild from the positions.
    fn verify(&self) -> bool {
        io::verify_against_oracle(&self.inner)
    }

    /// Recovers the two clusters. `mode` is `"triangle"` or `"with-locations"`.
    #[pyo3(signature = (mode="triangle", c_s=1.0, c_d=1.0))]
    fn recover<'py>(&self, py: Python<'py>, mode: &str, c_s: f64, c_d: f64) -> PyResult<Bound<'py, PyDict>> {
        let out = match mode {
            "triangle" => py.detach(|| recovery::recover_instance(&self.inner, c_s, c_d)),
            "with-locations" | "with_locations" => py.detach(|| recovery::recover_instance_with_locations(&self.inner)),
            other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
        }
        .map_err(py_err)?;
        outcome_dict(py, &out)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(model={}, n={}, m={}, t={}, seed={})",
            self.inner.model().name(),
            self.inner.n(),
            self.inner.graph.edge_count(),
            self.inner.dim_t(),
            self.inner.seed
        )
    }
}

#[pymodule]
fn annulus_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_function(wrap_pyfunction!(connectivity_scale, m)?)?;
    m.add_function(wrap_pyfunction!(surface_area, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(cap_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(annulus_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(lens_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(solve_t1, m)?)?;
    m.add_function(wrap_pyfunction!(solve_t2, m)?)?;
    m.add_function(wrap_pyfunction!(min_a_for_recovery, m)?)?;
    m.add_function(wrap_pyfunction!(recovery_guaranteed, m)?)?;
    m.add_function(wrap_pyfunction!(recovery_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_vrg_connectivity, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_isolated_rag, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
