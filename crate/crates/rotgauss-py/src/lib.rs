//! Python bindings: the indefinite algebra primitives plus the high-level
//! classify / verify entry points. Structured results cross the boundary as
//! JSON-shaped dictionaries.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

type MeshRow = (f64, f64, f64, f64, f64, f64);

use rotgauss::checks::{run_theorem_check, CheckContext};
use rotgauss::classify::{classify as classify_rs, Tolerances};
use rotgauss::families::make_family;
use rotgauss::geometry::{GeometryOptions, GridSpec};
use rotgauss::pseudo::{
    bivector_inner, gram_schmidt_indefinite, hodge_complement, wedge, Ambient, Bivector,
    CausalCharacter, PseudoVector,
};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn ambient(t: u8) -> PyResult<Ambient> {
    Ambient::new(t).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// A vector of E^4_t.
#[pyclass(name = "PseudoVector", skip_from_py_object)]
#[derive(Clone)]
struct PyPseudoVector {
    inner: PseudoVector,
}

#[pymethods]
impl PyPseudoVector {
    #[new]
    fn new(coords: [f64; 4], t: u8) -> PyResult<Self> {
        Ok(PyPseudoVector { inner: PseudoVector::new(coords, ambient(t)?) })
    }

    #[getter]
    fn coords(&self) -> [f64; 4] {
        self.inner.coords
    }

    fn inner_product(&self, other: &PyPseudoVector) -> PyResult<f64> {
        if self.inner.ambient != other.inner.ambient {
            return Err(PyValueError::new_err("ambient signatures differ"));
        }
        Ok(self.inner.inner(&other.inner))
    }

    fn causal_character(&self) -> &'static str {
        match self.inner.causal_character() {
            CausalCharacter::Spacelike => "spacelike",
            CausalCharacter::Timelike => "timelike",
            CausalCharacter::Lightlike => "lightlike",
        }
    }

    fn wedge(&self, other: &PyPseudoVector) -> PyResult<PyBivector> {
        if self.inner.ambient != other.inner.ambient {
            return Err(PyValueError::new_err("ambient signatures differ"));
        }
        Ok(PyBivector { inner: wedge(&self.inner, &other.inner) })
    }

    fn __repr__(&self) -> String {
        format!("PseudoVector({:?}, t={})", self.inner.coords, self.inner.ambient.index())
    }
}

/// A bivector of Λ²E^4_t in Plücker coordinates (12,13,14,23,24,34).
#[pyclass(name = "Bivector", skip_from_py_object)]
#[derive(Clone)]
struct PyBivector {
    inner: Bivector,
}

#[pymethods]
impl PyBivector {
    #[new]
    fn new(plucker: [f64; 6], t: u8) -> PyResult<Self> {
        Ok(PyBivector { inner: Bivector::new(plucker, ambient(t)?) })
    }

    #[getter]
    fn plucker(&self) -> [f64; 6] {
        self.inner.plucker
    }

    fn inner_product(&self, other: &PyBivector) -> PyResult<f64> {
        if self.inner.ambient != other.inner.ambient {
            return Err(PyValueError::new_err("ambient signatures differ"));
        }
        Ok(bivector_inner(&self.inner, &other.inner))
    }

    fn hodge_complement(&self, orientation: f64) -> PyResult<PyBivector> {
        Ok(PyBivector { inner: hodge_complement(&self.inner, orientation).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Bivector({:?}, t={})", self.inner.plucker, self.inner.ambient.index())
    }
}

/// Indefinite Gram-Schmidt: returns ((e1, e2), (sign1, sign2)).
#[pyfunction]
fn gram_schmidt(
    v1: &PyPseudoVector,
    v2: &PyPseudoVector,
) -> PyResult<((PyPseudoVector, PyPseudoVector), (f64, f64))> {
    let ([e1, e2], [s1, s2]) = gram_schmidt_indefinite(&v1.inner, &v2.inner).map_err(err)?;
    Ok((
        (PyPseudoVector { inner: e1 }, PyPseudoVector { inner: e2 }),
        (s1, s2),
    ))
}

fn parse_grid_tuple(grid: (f64, f64, usize, f64, f64, usize)) -> PyResult<GridSpec> {
    GridSpec::new((grid.0, grid.1, grid.2), (grid.3, grid.4, grid.5)).map_err(err)
}

/// Classify the Gauss map of a family over a grid.
///
/// `family`, `profile`, `params` use the same grammar as the CLI; the grid
/// is `(s_min, s_max, ns, t_min, t_max, nt)`.
#[pyfunction]
#[pyo3(signature = (family, grid, profile=None, params=""))]
fn classify(
    py: Python<'_>,
    family: &str,
    grid: (f64, f64, usize, f64, f64, usize),
    profile: Option<&str>,
    params: &str,
) -> PyResult<Py<PyDict>> {
    let fam = make_family(family, profile, params).map_err(err)?;
    let spec = parse_grid_tuple(grid)?;
    let (result, _) =
        classify_rs(&fam, &spec, &GeometryOptions::default(), &Tolerances::default())
            .map_err(err)?;
    let out = PyDict::new(py);
    out.set_item(
        "verdict",
        match result.verdict {
            rotgauss::classify::Verdict::Harmonic => "harmonic",
            rotgauss::classify::Verdict::FirstKind => "first_kind",
            rotgauss::classify::Verdict::SecondKind => "second_kind",
            rotgauss::classify::Verdict::NotPointwise1Type => "not_pointwise_1_type",
        },
    )?;
    out.set_item("c", result.c.plucker)?;
    out.set_item("c12", result.c_frame.c12_mean)?;
    out.set_item("c34", result.c_frame.c34_mean)?;
    out.set_item("max_parallel_residual", result.residuals.max_parallel)?;
    out.set_item("ls_residual", result.residuals.ls_residual)?;
    out.set_item("constancy_residual", result.residuals.constancy)?;
    out.set_item("n_samples", result.n_samples)?;
    Ok(out.into())
}

/// Sample surface coordinates over a grid; returns rows of (s, t, x1..x4).
#[pyfunction]
#[pyo3(signature = (family, grid, profile=None, params=""))]
fn mesh(
    family: &str,
    grid: (f64, f64, usize, f64, f64, usize),
    profile: Option<&str>,
    params: &str,
) -> PyResult<Vec<MeshRow>> {
    let fam = make_family(family, profile, params).map_err(err)?;
    let spec = parse_grid_tuple(grid)?;
    let mut rows = Vec::new();
    for i in 0..spec.ns {
        for j in 0..spec.nt {
            let (s, t) = (spec.s_at(i), spec.t_at(j));
            if let Ok(jet) = fam.jet(s, t) {
                let c = jet.value.coords;
                rows.push((s, t, c[0], c[1], c[2], c[3]));
            }
        }
    }
    Ok(rows)
}

/// Run one registry check; returns {"id", "pass", "facts": [(name, detail, pass)]}.
#[pyfunction]
#[pyo3(signature = (id, seed=rotgauss::checks::DEFAULT_SEED))]
fn run_check(py: Python<'_>, id: &str, seed: u64) -> PyResult<Py<PyDict>> {
    let check = run_theorem_check(id, &CheckContext::seeded(seed)).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("id", check.id)?;
    out.set_item("title", check.title)?;
    out.set_item("pass", check.pass)?;
    out.set_item(
        "facts",
        check
            .facts
            .iter()
            .map(|f| (f.name.clone(), f.detail.clone(), f.pass))
            .collect::<Vec<_>>(),
    )?;
    Ok(out.into())
}

/// Registered check ids.
#[pyfunction]
fn check_ids() -> Vec<&'static str> {
    rotgauss::checks::check_ids()
}

/// Family catalog as (name, description) pairs.
#[pyfunction]
fn families() -> Vec<(&'static str, &'static str)> {
    rotgauss::families::catalog()
}

#[pymodule]
fn rotgauss_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPseudoVector>()?;
    m.add_class::<PyBivector>()?;
    m.add_function(wrap_pyfunction!(gram_schmidt, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(mesh, m)?)?;
    m.add_function(wrap_pyfunction!(run_check, m)?)?;
    m.add_function(wrap_pyfunction!(check_ids, m)?)?;
    m.add_function(wrap_pyfunction!(families, m)?)?;
    Ok(())
}
