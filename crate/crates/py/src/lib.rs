//! Python bindings. Reports come back as plain dicts and lists.

use num_complex::Complex64;
use num_rational::Rational64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use kuratree_core::blaschke as bl;
use kuratree_core::corner::{dimension, Calculus, KIndex, ParamSpace};
use kuratree_core::cover as cv;
use kuratree_core::novikov as nv;
use kuratree_core::rational::parse_rational;
use kuratree_core::tree as tr;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Any serializable value as the matching Python object.
fn to_py<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn rational(s: &str) -> PyResult<Rational64> {
    parse_rational(s).map_err(PyValueError::new_err)
}

#[pyclass(name = "ClassMonoid", frozen)]
struct PyClassMonoid(kuratree_core::ClassMonoid);

#[pymethods]
impl PyClassMonoid {
    /// One generator `b` with energy 1 and Maslov index 2.
    #[staticmethod]
    fn unit() -> Self {
        PyClassMonoid(kuratree_core::ClassMonoid::unit())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        kuratree_core::ClassMonoid::from_json(text).map(PyClassMonoid).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.0.to_file()).expect("monoid serializes")
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn energy(&self, beta: Vec<u32>) -> PyResult<String> {
        let b = self.0.element(beta).map_err(err)?;
        Ok(kuratree_core::rational::format_rational(&self.0.energy(&b)))
    }

    fn maslov(&self, beta: Vec<u32>) -> PyResult<i64> {
        Ok(self.0.maslov(&self.0.element(beta).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        let names: Vec<&str> = self.0.generators().iter().map(|g| g.name.as_str()).collect();
        format!("ClassMonoid({names:?})")
    }
}

fn monoid_or_unit(m: Option<&PyClassMonoid>) -> kuratree_core::ClassMonoid {
    m.map_or_else(kuratree_core::ClassMonoid::unit, |m| m.0.clone())
}

fn index(m: &kuratree_core::ClassMonoid, k: usize, ell: usize, beta: Vec<u32>, interval: bool) -> PyResult<KIndex> {
    let beta = if beta.is_empty() { m.zero() } else { m.element(beta).map_err(err)? };
    let param = if interval { ParamSpace::Interval } else { ParamSpace::Point };
    Ok(KIndex::new(k, ell, beta).with_param(param))
}

#[pyclass(name = "DecoratedTree", frozen)]
struct PyTree(kuratree_core::DecoratedTree);

#[pymethods]
impl PyTree {
    #[staticmethod]
    fn parse(canonical: &str) -> PyResult<Self> {
        kuratree_core::DecoratedTree::parse_canonical(canonical).map(PyTree).map_err(err)
    }

    fn canonical_form(&self) -> String {
        self.0.canonical_form()
    }

    fn record<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.record())
    }

    fn leq(&self, other: &PyTree) -> bool {
        tr::tree_leq(&self.0, &other.0)
    }

    fn __repr__(&self) -> String {
        format!("DecoratedTree({:?})", self.0.canonical_form())
    }
}

/// Stable trees of `(k, ℓ, β)` in canonical order.
#[pyfunction]
#[pyo3(signature = (k, ell, beta, monoid=None))]
fn enumerate_trees(k: usize, ell: usize, beta: Vec<u32>, monoid: Option<&PyClassMonoid>) -> PyResult<Vec<PyTree>> {
    let m = monoid_or_unit(monoid);
    let idx = index(&m, k, ell, beta, false)?;
    Ok(tr::enumerate_trees(k, ell, &idx.beta, &m).into_iter().map(PyTree).collect())
}

/// Number of stable trees by number of interior vertices.
#[pyfunction]
#[pyo3(signature = (k, ell, beta, monoid=None))]
fn count_trees(k: usize, ell: usize, beta: Vec<u32>, monoid: Option<&PyClassMonoid>) -> PyResult<Vec<u128>> {
    let m = monoid_or_unit(monoid);
    let idx = index(&m, k, ell, beta, false)?;
    Ok(tr::count_trees(k, ell, &idx.beta, &m, &kuratree_core::DefaultActivity))
}

#[pyfunction]
#[pyo3(signature = (k, ell, beta, interval=false, monoid=None))]
fn moduli_dimension(k: usize, ell: usize, beta: Vec<u32>, interval: bool, monoid: Option<&PyClassMonoid>) -> PyResult<i64> {
    let m = monoid_or_unit(monoid);
    Ok(dimension(&index(&m, k, ell, beta, interval)?, &m))
}

#[pyfunction]
#[pyo3(signature = (k, ell, beta, interval=false, monoid=None))]
fn normalized_boundary<'py>(
    py: Python<'py>,
    k: usize,
    ell: usize,
    beta: Vec<u32>,
    interval: bool,
    monoid: Option<&PyClassMonoid>,
) -> PyResult<Bound<'py, PyAny>> {
    let m = monoid_or_unit(monoid);
    let idx = index(&m, k, ell, beta, interval)?;
    let terms: Vec<_> = Calculus::new(&m).normalized_boundary(&idx).iter().map(|t| t.record()).collect();
    to_py(py, &terms)
}

#[pyfunction]
#[pyo3(signature = (k, ell, beta, codim, interval=false, monoid=None))]
fn normalized_corner<'py>(
    py: Python<'py>,
    k: usize,
    ell: usize,
    beta: Vec<u32>,
    codim: usize,
    interval: bool,
    monoid: Option<&PyClassMonoid>,
) -> PyResult<Bound<'py, PyAny>> {
    let m = monoid_or_unit(monoid);
    let idx = index(&m, k, ell, beta, interval)?;
    let strata: Vec<_> = Calculus::new(&m).normalized_corner(&idx, codim).iter().map(|d| d.record()).collect();
    to_py(py, &strata)
}

#[pyfunction]
#[pyo3(signature = (k, ell, beta, interval=false, monoid=None))]
fn check_d_squared<'py>(
    py: Python<'py>,
    k: usize,
    ell: usize,
    beta: Vec<u32>,
    interval: bool,
    monoid: Option<&PyClassMonoid>,
) -> PyResult<Bound<'py, PyAny>> {
    let m = monoid_or_unit(monoid);
    let idx = index(&m, k, ell, beta, interval)?;
    to_py(py, &Calculus::new(&m).check_d_squared(&idx))
}

#[pyfunction]
#[pyo3(signature = (k, ell, beta, m1, m2, interval=false, monoid=None))]
#[allow(clippy::too_many_arguments)]
fn check_corner_consistency<'py>(
    py: Python<'py>,
    k: usize,
    ell: usize,
    beta: Vec<u32>,
    m1: usize,
    m2: usize,
    interval: bool,
    monoid: Option<&PyClassMonoid>,
) -> PyResult<Bound<'py, PyAny>> {
    let m = monoid_or_unit(monoid);
    let idx = index(&m, k, ell, beta, interval)?;
    to_py(py, &Calculus::new(&m).check_corner_consistency(&idx, m1, m2))
}

#[pyclass(name = "OperationTable", frozen)]
struct PyTable(nv::OperationTable);

#[pymethods]
impl PyTable {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        nv::OperationTable::from_json(text).map(PyTable).map_err(err)
    }

    /// One of the shipped consistent tables: `dga`, `gauge`, `curved`, `curved-gauge`.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        nv::fixtures::consistent_fixtures()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| PyTable(t))
            .ok_or_else(|| PyValueError::new_err(format!("no fixture {name:?}")))
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn num_entries(&self) -> usize {
        self.0.num_entries()
    }

    /// Adds `coefficient` (as `p/q`) to `m_{k,β}(inputs) → output`, by basis labels.
    fn add(&self, beta: Vec<u32>, inputs: Vec<String>, output: &str, coefficient: &str) -> PyResult<PyTable> {
        let mut t = self.0.clone();
        let b = t.monoid().element(beta).map_err(err)?;
        let c = kuratree_core::rational::parse_big_rational(coefficient).map_err(PyValueError::new_err)?;
        let labels: Vec<&str> = inputs.iter().map(String::as_str).collect();
        let current = {
            let idx: Option<Vec<usize>> = labels.iter().map(|l| t.basis().index_of(l)).collect();
            let out = t.basis().index_of(output);
            match (idx, out) {
                (Some(i), Some(o)) => t.coefficient(labels.len(), &b, &i, o),
                _ => return Err(PyValueError::new_err("unknown basis label")),
            }
        };
        t.set_labels(&b, &labels, output, current + c).map_err(err)?;
        Ok(PyTable(t))
    }
}

#[pyfunction]
fn ainf_defect<'py>(py: Python<'py>, table: &PyTable, e0: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &nv::ainf_defect(&table.0, rational(e0)?).map_err(err)?)
}

/// Checks a family given as JSON text.
#[pyfunction]
fn check_family<'py>(py: Python<'py>, family_json: &str, e0: &str) -> PyResult<Bound<'py, PyAny>> {
    let fam = nv::FamilyTable::from_json(family_json).map_err(err)?;
    to_py(py, &nv::check_family(&fam, rational(e0)?).map_err(err)?)
}

#[pyclass(name = "StratifiedModel", frozen)]
struct PyModel(cv::StratifiedModel);

#[pymethods]
impl PyModel {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        cv::StratifiedModel::from_json(text).map(PyModel).map_err(err)
    }

    /// One of the shipped models: `disk`, `two-level`, `three-level`.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        cv::fixtures::cover_fixtures()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, m)| PyModel(m))
            .ok_or_else(|| PyValueError::new_err(format!("no fixture {name:?}")))
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn num_points(&self) -> usize {
        self.0.num_points()
    }
}

#[pyclass(name = "Cover", frozen)]
struct PyCover(cv::CoverMaps);

#[pymethods]
impl PyCover {
    #[staticmethod]
    fn from_json(model: &PyModel, text: &str) -> PyResult<Self> {
        cv::CoverMaps::from_json(&model.0, text).map(PyCover).map_err(err)
    }

    fn to_json(&self, model: &PyModel) -> String {
        self.0.to_json(&model.0)
    }

    #[getter]
    fn num_bases(&self) -> usize {
        self.0.bases.len()
    }

    fn union(&self, other: &PyCover) -> PyCover {
        PyCover(self.0.union(&other.0))
    }
}

#[pyfunction]
#[pyo3(signature = (model, order="forward"))]
fn build_cover(model: &PyModel, order: &str) -> PyResult<PyCover> {
    let order = match order {
        "forward" => cv::BuildOrder::Forward,
        "reverse" => cv::BuildOrder::Reverse,
        _ => return Err(PyValueError::new_err("order is 'forward' or 'reverse'")),
    };
    let config = cv::CoverConfig { order, ..cv::CoverConfig::default() };
    cv::build_cover(&model.0, &config).map(PyCover).map_err(err)
}

#[pyfunction]
fn verify_cover<'py>(py: Python<'py>, model: &PyModel, cover: &PyCover) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &cv::verify_cover(&model.0, &cover.0))
}

#[pyfunction]
fn compare_covers<'py>(py: Python<'py>, model: &PyModel, first: &PyCover, second: &PyCover) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &cv::compare_covers(&model.0, &first.0, &second.0, &cv::CoverConfig::default()))
}

#[pyclass(name = "BlaschkeMap", frozen)]
struct PyBlaschke(bl::BlaschkeMap);

#[pymethods]
impl PyBlaschke {
    #[new]
    #[pyo3(signature = (zeros, theta=0.0))]
    fn new(zeros: Vec<Complex64>, theta: f64) -> PyResult<Self> {
        bl::BlaschkeMap::new(zeros, theta).map(PyBlaschke).map_err(err)
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.0.degree()
    }

    /// `u(z)` for `|z| = 1`.
    fn evaluate(&self, z: Complex64) -> PyResult<Complex64> {
        bl::evaluate(&self.0, z).map_err(err)
    }

    fn winding(&self) -> f64 {
        bl::winding(&self.0)
    }

    fn maslov(&self) -> PyResult<i64> {
        bl::maslov_via_winding(&self.0).map_err(err)
    }
}

#[pyfunction]
fn moduli_dim_check<'py>(py: Python<'py>, d: u32, k: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bl::moduli_dim_check(d, k).map_err(err)?)
}

/// Fiber product of two full charts given as `(d, k)`.
#[pyfunction]
#[pyo3(signature = (first, second, slot, seeds=64))]
fn solve_fiber_product<'py>(
    py: Python<'py>,
    first: (u32, usize),
    second: (u32, usize),
    slot: usize,
    seeds: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let f1 = bl::Family::full_chart(first.0, first.1).map_err(err)?;
    let f2 = bl::Family::full_chart(second.0, second.1).map_err(err)?;
    let seeds: Vec<u64> = (0..seeds).collect();
    let r = py.detach(|| bl::solve_fiber_product(&f1, &f2, slot, &seeds)).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (d1, d2, w=0.7))]
fn degeneration_path<'py>(py: Python<'py>, d1: u32, d2: u32, w: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bl::degeneration_path(d1 + d2, (d1, d2), w).map_err(err)?)
}

#[pymodule]
fn kuratree(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyClassMonoid>()?;
    m.add_class::<PyTree>()?;
    m.add_class::<PyTable>()?;
    m.add_class::<PyModel>()?;
    m.add_class::<PyCover>()?;
    m.add_class::<PyBlaschke>()?;
    m.add_function(wrap_pyfunction!(enumerate_trees, m)?)?;
    m.add_function(wrap_pyfunction!(count_trees, m)?)?;
    m.add_function(wrap_pyfunction!(moduli_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_corner, m)?)?;
    m.add_function(wrap_pyfunction!(check_d_squared, m)?)?;
    m.add_function(wrap_pyfunction!(check_corner_consistency, m)?)?;
    m.add_function(wrap_pyfunction!(ainf_defect, m)?)?;
    m.add_function(wrap_pyfunction!(check_family, m)?)?;
    m.add_function(wrap_pyfunction!(build_cover, m)?)?;
    m.add_function(wrap_pyfunction!(verify_cover, m)?)?;
    m.add_function(wrap_pyfunction!(compare_covers, m)?)?;
    m.add_function(wrap_pyfunction!(moduli_dim_check, m)?)?;
    m.add_function(wrap_pyfunction!(solve_fiber_product, m)?)?;
    m.add_function(wrap_pyfunction!(degeneration_path, m)?)?;
    Ok(())
}
