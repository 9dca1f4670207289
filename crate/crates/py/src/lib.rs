//! Python bindings for `ruled-strata`.
//!
//! Classes wrap the small value types; reports come back as plain
//! dictionaries decoded from the same JSON the command-line tool prints.

use num_complex::Complex64;
use num_rational::Rational64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use ruled_strata::homology::{self, parse_rational, RuledSurface};
use ruled_strata::plumbing::{self, Attach};
use ruled_strata::projective_maps::{self, PolyMap, DEFAULT_TOL};
use ruled_strata::report::{self, DEFAULT_SAMPLES, DEFAULT_SEED};
use ruled_strata::stable_trees::DEFAULT_BRANCH_DEPTH;
use ruled_strata::{bundles, ProjPoint};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn surface(s: &str) -> PyResult<RuledSurface> {
    s.parse().map_err(err)
}

fn rational(s: &str) -> PyResult<Rational64> {
    parse_rational(s).map_err(err)
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    PyModule::import(py, "json")?.call_method1("loads", (text,))
}

/// Integer homology class `a·X + b·Y` on one of the two surfaces.
#[pyclass(name = "H2Class", module = "ruled_strata", frozen, skip_from_py_object, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyH2Class(homology::H2Class);

#[pymethods]
impl PyH2Class {
    #[new]
    #[pyo3(signature = (a, b, surface="trivial"))]
    fn new(a: i64, b: i64, surface: &str) -> PyResult<Self> {
        Ok(PyH2Class(homology::H2Class::new(self::surface(surface)?, a, b)))
    }

    /// Class of the curve that defines the stratum `J_k`.
    #[staticmethod]
    #[pyo3(signature = (k, surface="trivial"))]
    fn stratum(k: i64, surface: &str) -> PyResult<Self> {
        Ok(PyH2Class(self::surface(surface)?.stratum_class(k).map_err(err)?))
    }

    #[getter]
    fn coeffs(&self) -> (i64, i64) {
        (self.0.coeffs[0], self.0.coeffs[1])
    }

    #[getter]
    fn surface(&self) -> String {
        self.0.surface.to_string()
    }

    fn intersect(&self, other: PyRef<'_, PyH2Class>) -> PyResult<i64> {
        homology::intersect(&self.0, &other.0).map_err(err)
    }

    fn chern(&self) -> i64 {
        homology::chern_pairing(&self.0)
    }

    fn adjunction_codim(&self) -> i64 {
        homology::adjunction_codim(&self.0)
    }

    /// Symplectic area as a `"p/q"` string for the form with parameter `lam`.
    fn area(&self, lam: &str) -> PyResult<String> {
        let form = homology::SymplecticForm::new(self.0.surface, rational(lam)?).map_err(err)?;
        Ok(homology::area(&form, &self.0).map_err(err)?.to_string())
    }

    fn __repr__(&self) -> String {
        format!("H2Class({})", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Rank-2 bundle `O(k)⊕O(m)` over the sphere.
#[pyclass(name = "Rank2Bundle", module = "ruled_strata", frozen, skip_from_py_object, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyRank2Bundle(bundles::Rank2Bundle);

#[pymethods]
impl PyRank2Bundle {
    #[new]
    fn new(k: i64, m: i64) -> Self {
        PyRank2Bundle(bundles::Rank2Bundle::new(k, m))
    }

    #[getter]
    fn degrees(&self) -> (i64, i64) {
        self.0.degrees
    }

    fn sum(&self) -> i64 {
        self.0.sum()
    }

    fn is_isomorphic(&self, other: PyRef<'_, PyRank2Bundle>) -> bool {
        self.0.is_isomorphic(&other.0)
    }

    fn plumb_with_canonical(&self) -> Self {
        PyRank2Bundle(plumbing::plumb_with_canonical(&self.0))
    }

    #[pyo3(signature = (singular=false))]
    fn plumb_with_ly(&self, singular: bool) -> PyResult<Self> {
        let attach = if singular { Attach::Singular } else { Attach::Regular };
        Ok(PyRank2Bundle(plumbing::plumb_with_ly(&self.0, attach).map_err(err)?))
    }

    fn twist_by_attaching(&self) -> Self {
        PyRank2Bundle(plumbing::twist_by_attaching(&self.0))
    }

    /// Sphere bundle identified as a blow-down pullback; only `O(-1)⊕C`.
    fn identify_pullback(&self) -> PyResult<PySpace> {
        Ok(PySpace(plumbing::identify_pullback_over_blowdown(&self.0).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!("Rank2Bundle({})", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Link space in normal form.
#[pyclass(name = "Space", module = "ruled_strata", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySpace(plumbing::Space);

#[pymethods]
impl PySpace {
    /// `L(p, q)`, normalized.
    #[staticmethod]
    fn lens(p: i64, q: i64) -> Self {
        PySpace(plumbing::Space::lens(p, q))
    }

    #[getter]
    fn tag(&self) -> &'static str {
        self.0.tag()
    }

    /// `(p, q)` when the space is a lens space, else `None`.
    #[getter]
    fn pq(&self) -> Option<(i64, i64)> {
        self.0.as_lens()
    }

    #[getter]
    fn common_name(&self) -> Option<&'static str> {
        self.0.common_name()
    }

    fn equivalent(&self, other: PyRef<'_, PySpace>) -> bool {
        plumbing::lens_equivalent(&self.0, &other.0)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.to_record(Vec::new()))
    }

    fn __eq__(&self, other: PyRef<'_, PySpace>) -> bool {
        self.0.normalize() == other.0.normalize()
    }

    fn __repr__(&self) -> String {
        format!("Space({})", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Stated and adjunction codimension of the stratum `J_k`.
#[pyfunction]
#[pyo3(signature = (k, surface="trivial"))]
fn strata_codim(k: i64, surface: &str) -> PyResult<(i64, i64)> {
    let c = homology::strata_codim(self::surface(surface)?, k).map_err(err)?;
    Ok((c.stated, c.adjunction))
}

/// Indices `k` of the strata that exist for the form with parameter `lam`.
#[pyfunction]
#[pyo3(signature = (lam, surface="trivial"))]
fn admissible_strata(lam: &str, surface: &str) -> PyResult<Vec<i64>> {
    let form = homology::SymplecticForm::new(self::surface(surface)?, rational(lam)?).map_err(err)?;
    Ok(homology::admissible_strata(&form))
}

#[pyfunction]
fn link_dimension(m: i64, k: i64) -> PyResult<i64> {
    Ok(homology::link_dimension(m, k).map_err(err)?.dim)
}

/// Lens space bounded by a linear chain plus any notes from degenerate steps.
#[pyfunction]
fn chain_to_lens(chain: Vec<i64>) -> PyResult<(PySpace, Vec<String>)> {
    let (space, notes) = plumbing::chain_to_lens(&chain).map_err(err)?;
    Ok((PySpace(space), notes))
}

/// Chain left after repeatedly blowing down ±1 vertices.
#[pyfunction]
fn blow_down(chain: Vec<i64>) -> PyResult<Vec<i64>> {
    plumbing::blow_down_all(&plumbing::PlumbingGraph::chain(&chain))
        .as_chain()
        .ok_or_else(|| PyValueError::new_err("blow-down left a non-linear graph"))
}

#[pyfunction]
fn lens_equivalent(a: PyRef<'_, PySpace>, b: PyRef<'_, PySpace>) -> bool {
    plumbing::lens_equivalent(&a.0, &b.0)
}

#[pyfunction]
fn link_adjacent(k: i64) -> PyResult<PySpace> {
    Ok(PySpace(plumbing::link_adjacent(k).map_err(err)?))
}

/// `(stated, derived)` links for the blow-up with `m = k + 1`.
#[pyfunction]
fn link_nontrivial(k: i64) -> PyResult<(PySpace, PySpace)> {
    let l = plumbing::link_nontrivial(k).map_err(err)?;
    Ok((PySpace(l.stated), PySpace(l.derived)))
}

fn poly_map(name: &str) -> PyResult<PolyMap> {
    match name {
        "phi30" => Ok(PolyMap::Phi30),
        "phi32" => Ok(PolyMap::Phi32),
        "h" => Ok(PolyMap::H),
        _ => Err(PyValueError::new_err(format!(
            "unknown map {name:?}, expected phi30, phi32 or h"
        ))),
    }
}

/// Number of preimages of a target point and whether it is non-generic.
#[pyfunction]
fn count_preimages(map: &str, target: Vec<Complex64>) -> PyResult<(usize, bool)> {
    let point = ProjPoint::new(target).map_err(err)?;
    let c = projective_maps::count_preimages(poly_map(map)?, &point).map_err(err)?;
    Ok((c.count, c.non_generic))
}

/// Runs the numeric identity checks and returns one dict per check.
#[pyfunction]
#[pyo3(signature = (samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED, tol=DEFAULT_TOL))]
fn verify_identities(py: Python<'_>, samples: usize, seed: u64, tol: f64) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &projective_maps::verify_identities(samples, seed, tol).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (lam, surface="trivial"))]
fn strata_report<'py>(py: Python<'py>, lam: &str, surface: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &report::run_strata(rational(lam)?, self::surface(surface)?).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (m, k, surface="trivial"))]
fn links_report<'py>(py: Python<'py>, m: i64, k: i64, surface: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &report::run_links(m, k, self::surface(surface)?).map_err(err)?)
}

#[pyfunction]
fn plumb_report(py: Python<'_>, chain: Vec<i64>) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &report::run_plumb(&chain).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (n, depth=DEFAULT_BRANCH_DEPTH, pointed=false))]
fn decompositions_report(py: Python<'_>, n: i64, depth: u32, pointed: bool) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &report::run_decompositions(n, depth, pointed).map_err(err)?)
}

#[pymodule]
#[pyo3(name = "ruled_strata")]
fn ruled_strata_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyH2Class>()?;
    m.add_class::<PyRank2Bundle>()?;
    m.add_class::<PySpace>()?;
    m.add_function(wrap_pyfunction!(strata_codim, m)?)?;
    m.add_function(wrap_pyfunction!(admissible_strata, m)?)?;
    m.add_function(wrap_pyfunction!(link_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(chain_to_lens, m)?)?;
    m.add_function(wrap_pyfunction!(blow_down, m)?)?;
    m.add_function(wrap_pyfunction!(lens_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(link_adjacent, m)?)?;
    m.add_function(wrap_pyfunction!(link_nontrivial, m)?)?;
    m.add_function(wrap_pyfunction!(count_preimages, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identities, m)?)?;
    m.add_function(wrap_pyfunction!(strata_report, m)?)?;
    m.add_function(wrap_pyfunction!(links_report, m)?)?;
    m.add_function(wrap_pyfunction!(plumb_report, m)?)?;
    m.add_function(wrap_pyfunction!(decompositions_report, m)?)?;
    Ok(())
}
