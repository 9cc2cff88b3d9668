//! Python bindings: graphs, certified profiles, per-vertex analyses and the
//! dual-width bound. Exact or float arithmetic is chosen when a profile is
//! built; everything returned to Python is plain numbers, lists and dicts.

use drgkit_core::drg::DrgError;
use drgkit_core::families::{self, FamilyError, GraphSpec, DEFAULT_SIZE_CAP};
use drgkit_core::linalg::parse_rational;
use drgkit_core::terwilliger::{
    analyze, check_dual_width_bound, representative_base_vertices, LocalAlgebra, OracleConfig, TerwilligerError,
    VerifyTolerances,
};
use drgkit_core::{DrgProfile, Rational, Scalar};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyFloat, PyInt, PyString};

fn family_err(e: FamilyError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn drg_err(e: DrgError) -> PyErr {
    match e {
        DrgError::SpectrumValidation(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn terwilliger_err(e: TerwilligerError) -> PyErr {
    use TerwilligerError as E;
    match e {
        E::Drg(inner) => drg_err(inner),
        E::Linalg(_) | E::InvariantViolation(_) | E::OrthogonalityViolation { .. } | E::IrreducibilityNotCertified { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A simple connected graph.
#[pyclass(module = "drgkit", frozen, skip_from_py_object)]
struct Graph {
    inner: drgkit_core::Graph,
}

#[pymethods]
impl Graph {
    /// Build from a spec such as `hamming:3,2`, `johnson:6,3`, `cycle:6`,
    /// or an edge-list path.
    #[staticmethod]
    #[pyo3(signature = (spec, size_cap = DEFAULT_SIZE_CAP))]
    fn from_spec(spec: &str, size_cap: usize) -> PyResult<Self> {
        let spec: GraphSpec = spec.parse().map_err(family_err)?;
        Ok(Self { inner: spec.build(size_cap).map_err(family_err)? })
    }

    #[staticmethod]
    fn hamming(diameter: usize, q: usize) -> PyResult<Self> {
        Ok(Self { inner: families::hamming(diameter, q, DEFAULT_SIZE_CAP).map_err(family_err)? })
    }

    #[staticmethod]
    fn johnson(n: usize, k: usize) -> PyResult<Self> {
        Ok(Self { inner: families::johnson(n, k, DEFAULT_SIZE_CAP).map_err(family_err)? })
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        Ok(Self { inner: families::cycle(n, DEFAULT_SIZE_CAP).map_err(family_err)? })
    }

    /// Parse edge-list text: a header line `n m` followed by `m` lines `u v`.
    #[staticmethod]
    #[pyo3(signature = (text, name = "edge-list"))]
    fn from_edge_list(text: &str, name: &str) -> PyResult<Self> {
        Ok(Self { inner: families::parse_edge_list(name, text).map_err(family_err)? })
    }

    fn to_edge_list(&self) -> String {
        families::to_edge_list(&self.inner)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn __repr__(&self) -> String {
        format!("Graph('{}', n={}, edges={})", self.inner.name(), self.inner.n(), self.inner.edge_count())
    }
}

enum Certified {
    Exact(DrgProfile<Rational>),
    Float(DrgProfile<f64>),
}

/// A certified distance-regular graph with its spectrum and Q-polynomial
/// orderings. `mode` is `"exact"`, `"float"`, or `"auto"` (exact when the
/// spectrum is rational).
#[pyclass(module = "drgkit", frozen)]
struct Profile {
    inner: Certified,
}

/// Result of analyzing one base vertex.
#[pyclass(module = "drgkit", frozen, get_all)]
struct Analysis {
    base_vertex: usize,
    ordering: Vec<usize>,
    theta_star: Vec<f64>,
    v_dims: Vec<Vec<usize>>,
    vtilde_dims: Vec<Vec<usize>>,
    displacement_dims: Vec<usize>,
    /// `(endpoint, dual_endpoint, diameter, displacement, dim)` per module,
    /// or `None` when the oracle did not run.
    modules: Option<Vec<(usize, usize, usize, isize, usize)>>,
    /// `(id, name, status, worst_residual, witness)` per check.
    checks: Vec<(String, String, String, f64, Option<String>)>,
    all_passed: bool,
}

#[pymethods]
impl Analysis {
    fn __repr__(&self) -> String {
        format!("Analysis(base_vertex={}, vtilde_dims={:?}, all_passed={})", self.base_vertex, self.vtilde_dims, self.all_passed)
    }
}

fn run_analysis<S: Scalar>(
    profile: &DrgProfile<S>,
    ordering: usize,
    base_vertex: usize,
    oracle: bool,
    seed: u64,
    tol: f64,
) -> PyResult<Analysis> {
    let ordering = profile.ordering(ordering).map_err(drg_err)?.to_vec();
    let local = LocalAlgebra::new(profile, &ordering, base_vertex).map_err(terwilliger_err)?;
    let config = OracleConfig::default();
    let a = analyze(&local, oracle.then_some((seed, &config)), &VerifyTolerances { oracle: tol })
        .map_err(terwilliger_err)?;
    Ok(Analysis {
        base_vertex,
        theta_star: local.theta_star().iter().map(Scalar::to_f64).collect(),
        v_dims: a.split.v_dims(),
        vtilde_dims: a.split.vtilde_dims(),
        displacement_dims: a.displacement.dims(),
        modules: a.modules.as_ref().map(|ms| {
            ms.iter().map(|r| (r.endpoint, r.dual_endpoint, r.diameter, r.displacement, r.dim())).collect()
        }),
        checks: a
            .report
            .checks
            .iter()
            .map(|c| {
                (c.id.to_string(), c.name.to_string(), format!("{:?}", c.status).to_lowercase(), c.worst_residual, c.witness.clone())
            })
            .collect(),
        all_passed: a.report.all_passed(),
        ordering,
    })
}

/// Reads a Python int, float or string (`"3/4"`, `"0.25"`) as a rational.
fn literal(item: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = if item.is_instance_of::<PyInt>() {
        item.extract::<i64>()?.to_string()
    } else if item.is_instance_of::<PyFloat>() {
        item.extract::<f64>()?.to_string()
    } else if item.is_instance_of::<PyString>() {
        item.extract::<String>()?
    } else {
        return Err(PyValueError::new_err("vector entries must be int, float or str"));
    };
    parse_rational(&text).ok_or_else(|| PyValueError::new_err(format!("`{text}` is not a number")))
}

fn dual_width_dict<'py, S: Scalar>(
    py: Python<'py>,
    profile: &DrgProfile<S>,
    ordering: usize,
    v: &[S],
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let ordering = profile.ordering(ordering).map_err(drg_err)?.to_vec();
    let r = check_dual_width_bound(profile, &ordering, v, tol).map_err(terwilliger_err)?;
    let d = PyDict::new(py);
    d.set_item("dual_width", r.dual_width)?;
    d.set_item("bound", r.bound)?;
    d.set_item("support", r.support)?;
    d.set_item("min_margin", r.min_margin)?;
    d.set_item("tightest_vertex", r.tightest_vertex)?;
    d.set_item("pass", r.pass)?;
    Ok(d)
}

macro_rules! dispatch {
    ($self:expr, $p:ident => $body:expr) => {
        match &$self.inner {
            Certified::Exact($p) => $body,
            Certified::Float($p) => $body,
        }
    };
}

#[pymethods]
impl Profile {
    #[new]
    #[pyo3(signature = (graph, mode = "auto"))]
    fn new(py: Python<'_>, graph: &Graph, mode: &str) -> PyResult<Self> {
        let g = graph.inner.clone();
        let inner = py.detach(|| match mode {
            "exact" => DrgProfile::certify(g).map(Certified::Exact).map_err(drg_err),
            "float" => DrgProfile::certify(g).map(Certified::Float).map_err(drg_err),
            "auto" => match DrgProfile::<Rational>::certify(g.clone()) {
                Ok(p) => Ok(Certified::Exact(p)),
                Err(DrgError::ExactModeUnsupported) => DrgProfile::certify(g).map(Certified::Float).map_err(drg_err),
                Err(e) => Err(drg_err(e)),
            },
            other => Err(PyValueError::new_err(format!("mode must be exact, float or auto, not `{other}`"))),
        })?;
        Ok(Self { inner })
    }

    #[getter]
    fn mode(&self) -> &'static str {
        match self.inner {
            Certified::Exact(_) => "exact",
            Certified::Float(_) => "float",
        }
    }

    #[getter]
    fn n(&self) -> usize {
        dispatch!(self, p => p.n())
    }

    #[getter]
    fn diameter(&self) -> usize {
        dispatch!(self, p => p.diameter())
    }

    /// Eigenvalues in decreasing order.
    #[getter]
    fn theta(&self) -> Vec<f64> {
        dispatch!(self, p => p.theta().iter().map(Scalar::to_f64).collect())
    }

    /// Eigenvalues as exact literals, or `None` in float mode.
    #[getter]
    fn theta_exact(&self) -> Option<Vec<String>> {
        match &self.inner {
            Certified::Exact(p) => Some(p.theta().iter().map(ToString::to_string).collect()),
            Certified::Float(_) => None,
        }
    }

    #[getter]
    fn multiplicities(&self) -> Vec<usize> {
        dispatch!(self, p => p.multiplicities().to_vec())
    }

    #[getter]
    fn orderings(&self) -> Vec<Vec<usize>> {
        dispatch!(self, p => p.qpoly_orderings().to_vec())
    }

    fn intersection_array(&self) -> (Vec<u64>, Vec<u64>) {
        dispatch!(self, p => {
            let q = p.intersection_numbers();
            let d = p.diameter();
            ((0..d).map(|i| q.b(i)).collect(), (1..=d).map(|i| q.c(i)).collect())
        })
    }

    /// One vertex per class of a cheap distance invariant.
    fn representative_base_vertices(&self) -> Vec<usize> {
        dispatch!(self, p => representative_base_vertices(p.distances()))
    }

    #[pyo3(signature = (base_vertex, ordering = 0, oracle = true, seed = 1, tol = 1e-6))]
    fn analyze(
        &self,
        py: Python<'_>,
        base_vertex: usize,
        ordering: usize,
        oracle: bool,
        seed: u64,
        tol: f64,
    ) -> PyResult<Analysis> {
        py.detach(|| dispatch!(self, p => run_analysis(p, ordering, base_vertex, oracle, seed, tol)))
    }

    /// Dual width of `vector` and the distance bound it implies.
    #[pyo3(signature = (vector, ordering = 0, tol = 1e-7))]
    fn dual_width<'py>(
        &self,
        py: Python<'py>,
        vector: Vec<Bound<'py, PyAny>>,
        ordering: usize,
        tol: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let values: Vec<Rational> = vector.iter().map(literal).collect::<PyResult<_>>()?;
        match &self.inner {
            Certified::Exact(p) => dual_width_dict(py, p, ordering, &values, tol),
            Certified::Float(p) => {
                let v: Vec<f64> = values.iter().map(Scalar::to_f64).collect();
                dual_width_dict(py, p, ordering, &v, tol)
            }
        }
    }

    fn __repr__(&self) -> String {
        format!("Profile(mode='{}', n={}, diameter={})", self.mode(), self.n(), self.diameter())
    }
}

#[pymodule]
fn drgkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Profile>()?;
    m.add_class::<Analysis>()?;
    Ok(())
}
