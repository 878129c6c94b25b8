//! Python bindings for the `galphac` crate.

use galphac::bipartitions::{cardinality, enumerate_bipartitions};
use galphac::experiments::{run_sweep, SweepSpec};
use galphac::io::{density_to_json, parse_density, parse_state, state_to_json};
use galphac::measures::{continuity_bound_bipartite, evaluate, AlphaParam, MeasureSpec, QParam};
use galphac::roof::{estimate_convex_roof, RoofConfig, RoofTarget};
use galphac::states::{self, Family, FamilyParam, Seed};
use galphac::{DensityMatrix, PureState, C64};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: galphac::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Normalised pure state on a tensor product of local spaces.
#[pyclass(name = "PureState", module = "galphac_py", frozen, from_py_object)]
#[derive(Clone)]
struct PyPureState(PureState);

#[pymethods]
impl PyPureState {
    #[new]
    #[pyo3(signature = (amplitudes, local_dims, normalize = false))]
    fn new(amplitudes: Vec<C64>, local_dims: Vec<usize>, normalize: bool) -> PyResult<Self> {
        let state = if normalize {
            PureState::normalized(amplitudes, local_dims)
        } else {
            PureState::new(amplitudes, local_dims)
        };
        state.map(Self).map_err(err)
    }

    /// `ghz:3`, `w:4`, `typeA:0.5`, `typeB:0.5`, `fam4:1.2` or `random:2,2,2:7`.
    #[staticmethod]
    fn builtin(id: &str) -> PyResult<Self> {
        states::builtin(id).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_state(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        state_to_json(&self.0)
    }

    #[getter]
    fn amplitudes(&self) -> Vec<C64> {
        self.0.amplitudes().to_vec()
    }

    #[getter]
    fn local_dims(&self) -> Vec<usize> {
        self.0.local_dims().to_vec()
    }

    #[getter]
    fn n_parties(&self) -> usize {
        self.0.n_parties()
    }

    fn projector(&self) -> PyDensityMatrix {
        PyDensityMatrix(self.0.projector())
    }

    fn __repr__(&self) -> String {
        format!("PureState(local_dims={:?})", self.0.local_dims())
    }
}

#[pyclass(name = "DensityMatrix", module = "galphac_py", frozen, from_py_object)]
#[derive(Clone)]
struct PyDensityMatrix(DensityMatrix);

#[pymethods]
impl PyDensityMatrix {
    /// Mixture `Σ p_i |ψ_i><ψ_i|`.
    #[staticmethod]
    fn from_ensemble(weights: Vec<f64>, members: Vec<PyPureState>) -> PyResult<Self> {
        if weights.len() != members.len() {
            return Err(PyValueError::new_err(
                "weights and members differ in length",
            ));
        }
        let pairs: Vec<(f64, PureState)> = weights
            .into_iter()
            .zip(members.into_iter().map(|m| m.0))
            .collect();
        DensityMatrix::from_ensemble(&pairs).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_density(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        density_to_json(&self.0)
    }

    #[getter]
    fn local_dims(&self) -> Vec<usize> {
        self.0.local_dims().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(local_dims={:?})", self.0.local_dims())
    }
}

fn spec(measure: &str, alpha: f64, q: f64) -> PyResult<MeasureSpec> {
    MeasureSpec::parse_with_defaults(measure, alpha, q).map_err(err)
}

/// Aggregate value of a measure: galphac, gqc, gmc, ggm or fill.
#[pyfunction]
#[pyo3(signature = (state, measure = "galphac", alpha = 0.5, q = 3.0))]
fn measure(state: &PyPureState, measure: &str, alpha: f64, q: f64) -> PyResult<f64> {
    Ok(evaluate(&state.0, &spec(measure, alpha, q)?)
        .map_err(err)?
        .aggregate())
}

/// Full report: aggregate, per-cut values keyed by cut label, and the ceiling.
#[pyfunction]
#[pyo3(signature = (state, measure = "galphac", alpha = 0.5, q = 3.0))]
fn report<'py>(
    py: Python<'py>,
    state: &PyPureState,
    measure: &str,
    alpha: f64,
    q: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = evaluate(&state.0, &spec(measure, alpha, q)?).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("measure", r.measure().to_string())?;
    out.set_item("aggregate", r.aggregate())?;
    out.set_item("upper_limit", r.upper_limit())?;
    let per_cut: Vec<(String, f64)> = r
        .per_cut()
        .iter()
        .map(|c| (c.cut.to_string(), c.value))
        .collect();
    out.set_item("per_cut", per_cut)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (state, alpha = 0.5))]
fn galpha_c(state: &PyPureState, alpha: f64) -> PyResult<f64> {
    let a = AlphaParam::new(alpha).map_err(err)?;
    Ok(galphac::measures::galpha_c(&state.0, a)
        .map_err(err)?
        .aggregate())
}

#[pyfunction]
#[pyo3(signature = (state, q = 3.0))]
fn gqc(state: &PyPureState, q: f64) -> PyResult<f64> {
    let q = QParam::new(q).map_err(err)?;
    Ok(galphac::measures::gqc(&state.0, q)
        .map_err(err)?
        .aggregate())
}

#[pyfunction]
fn gmc(state: &PyPureState) -> PyResult<f64> {
    Ok(galphac::measures::gmc(&state.0).map_err(err)?.aggregate())
}

#[pyfunction]
fn ggm(state: &PyPureState) -> PyResult<f64> {
    Ok(galphac::measures::ggm(&state.0).map_err(err)?.aggregate())
}

#[pyfunction]
fn concurrence_fill(state: &PyPureState) -> PyResult<f64> {
    galphac::measures::concurrence_fill(&state.0).map_err(err)
}

#[pyfunction]
fn ghz(n: usize) -> PyResult<PyPureState> {
    states::ghz(n).map(PyPureState).map_err(err)
}

#[pyfunction]
fn w(n: usize) -> PyResult<PyPureState> {
    states::w(n).map(PyPureState).map_err(err)
}

#[pyfunction]
fn random_state(local_dims: Vec<usize>, seed: u64) -> PyResult<PyPureState> {
    states::random_pure(&local_dims, Seed(seed))
        .map(PyPureState)
        .map_err(err)
}

/// Member of a one-parameter family: typeA, typeB or fam4.
#[pyfunction]
fn family_state(family: &str, theta: f64) -> PyResult<PyPureState> {
    let f: Family = family.parse().map_err(err)?;
    Ok(PyPureState(f.at(FamilyParam::new(theta).map_err(err)?)))
}

/// Canonical bipartition labels of `n` parties, e.g. `"0|12"`.
#[pyfunction]
fn bipartitions(n: usize) -> PyResult<Vec<String>> {
    Ok(enumerate_bipartitions(n)
        .map_err(err)?
        .iter()
        .map(|b| b.to_string())
        .collect())
}

#[pyfunction]
#[pyo3(name = "cardinality")]
fn py_cardinality(n: usize) -> PyResult<u64> {
    cardinality(n).map_err(err)
}

/// Per-cut continuity bound `ε^α d^(1−α)`.
#[pyfunction]
fn continuity_bound(epsilon: f64, d: usize, alpha: f64) -> PyResult<f64> {
    continuity_bound_bipartite(epsilon, d, AlphaParam::new(alpha).map_err(err)?).map_err(err)
}

/// θ grid and one list of values per measure.
#[pyfunction]
#[pyo3(signature = (family, measures, start = 0.0, end = std::f64::consts::FRAC_PI_2, step = 1e-3))]
fn sweep(
    family: &str,
    measures: Vec<String>,
    start: f64,
    end: f64,
    step: f64,
) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let measures = measures
        .iter()
        .map(|m| spec(m, 0.5, 3.0))
        .collect::<PyResult<Vec<_>>>()?;
    let k = measures.len();
    let result = run_sweep(&SweepSpec {
        family: family.parse().map_err(err)?,
        theta_start: start,
        theta_end: end,
        theta_step: step,
        measures,
    })
    .map_err(err)?;
    Ok((result.thetas(), (0..k).map(|i| result.column(i)).collect()))
}

/// Upper bound on the GαC convex roof of `rho`; returns a dict with the bound,
/// convergence data and the best ensemble's weights.
#[pyfunction]
#[pyo3(signature = (rho, alpha = 0.5, restarts = 20, max_iterations = 2000, tolerance = 1e-8, seed = 0, ensemble_size = None))]
#[allow(clippy::too_many_arguments)]
fn convex_roof<'py>(
    py: Python<'py>,
    rho: &PyDensityMatrix,
    alpha: f64,
    restarts: usize,
    max_iterations: usize,
    tolerance: f64,
    seed: u64,
    ensemble_size: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let target = RoofTarget::GAlphaC(AlphaParam::new(alpha).map_err(err)?);
    let cfg = RoofConfig {
        ensemble_size,
        restarts,
        max_iterations,
        tolerance,
        seed: Seed(seed),
    };
    let r = py
        .detach(|| estimate_convex_roof(&rho.0, &target, &cfg))
        .map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("upper_bound", r.upper_bound)?;
    out.set_item("converged", r.converged)?;
    out.set_item("iterations_used", r.iterations_used)?;
    out.set_item("best_restart", r.best_restart)?;
    out.set_item("weights", r.best_ensemble.weights().to_vec())?;
    let members: Vec<PyPureState> = r
        .best_ensemble
        .members()
        .iter()
        .cloned()
        .map(PyPureState)
        .collect();
    out.set_item("members", members)?;
    Ok(out)
}

#[pymodule]
fn galphac_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPureState>()?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(galpha_c, m)?)?;
    m.add_function(wrap_pyfunction!(gqc, m)?)?;
    m.add_function(wrap_pyfunction!(gmc, m)?)?;
    m.add_function(wrap_pyfunction!(ggm, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence_fill, m)?)?;
    m.add_function(wrap_pyfunction!(ghz, m)?)?;
    m.add_function(wrap_pyfunction!(w, m)?)?;
    m.add_function(wrap_pyfunction!(random_state, m)?)?;
    m.add_function(wrap_pyfunction!(family_state, m)?)?;
    m.add_function(wrap_pyfunction!(bipartitions, m)?)?;
    m.add_function(wrap_pyfunction!(py_cardinality, m)?)?;
    m.add_function(wrap_pyfunction!(continuity_bound, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(convex_roof, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
