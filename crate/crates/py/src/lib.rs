//! Python bindings: the `Diagram` class plus catalog, move, and
//! experiment entry points. Structured reports cross as JSON strings;
//! scalar results cross natively.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use akmove_core::diagram::{canon, edit, parse};
use akmove_core::{catalog, invariants, lab, moves, AkError, SingularDiagram};

fn err(e: AkError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// A planar link/spatial-graph diagram.
#[pyclass(name = "Diagram")]
#[derive(Clone)]
struct PyDiagram {
    inner: akmove_core::Diagram,
}

#[pymethods]
impl PyDiagram {
    /// Parse a PD code, e.g. "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)".
    #[staticmethod]
    fn from_pd(text: &str) -> PyResult<Self> {
        Ok(PyDiagram {
            inner: parse::parse_pd(text).map_err(err)?,
        })
    }

    /// Parse a signed Gauss code.
    #[staticmethod]
    fn from_gauss(text: &str) -> PyResult<Self> {
        Ok(PyDiagram {
            inner: parse::parse_gauss(text).map_err(err)?,
        })
    }

    /// A built-in diagram by catalog name.
    #[staticmethod]
    fn from_catalog(name: &str) -> PyResult<Self> {
        Ok(PyDiagram {
            inner: catalog::named(name).map_err(err)?,
        })
    }

    fn pd(&self) -> PyResult<String> {
        parse::serialize(&self.inner).map_err(err)
    }

    fn gauss(&self) -> PyResult<String> {
        parse::to_gauss(&self.inner).map_err(err)
    }

    /// Canonical code: equal codes mean identical diagrams up to relabeling.
    fn canonical(&self) -> PyResult<String> {
        Ok(canon::canonical(&self.inner).map_err(err)?.0)
    }

    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map_err(err)
    }

    #[getter]
    fn crossings(&self) -> usize {
        self.inner.crossings.len()
    }

    fn components(&self) -> PyResult<usize> {
        self.inner.component_count().map_err(err)
    }

    fn writhe(&self) -> PyResult<i64> {
        invariants::writhe(&self.inner).map_err(err)
    }

    fn linking_number(&self, i: usize, j: usize) -> PyResult<i64> {
        invariants::linking_number(&self.inner, i, j).map_err(err)
    }

    fn linking_matrix(&self) -> PyResult<Vec<(usize, usize, i64)>> {
        invariants::linking_matrix(&self.inner).map_err(err)
    }

    /// Conway polynomial coefficients, constant term first.
    #[pyo3(signature = (budget = invariants::DEFAULT_BUDGET))]
    fn conway(&self, budget: u64) -> PyResult<Vec<i64>> {
        Ok(invariants::conway_with(&self.inner, budget)
            .map_err(err)?
            .coeffs()
            .to_vec())
    }

    #[pyo3(signature = (budget = invariants::DEFAULT_BUDGET))]
    fn arf(&self, budget: u64) -> PyResult<i64> {
        invariants::arf(&self.inner, budget).map_err(err)
    }

    /// The standard invariant report, as a JSON string.
    #[pyo3(signature = (budget = invariants::DEFAULT_BUDGET))]
    fn report(&self, budget: u64) -> PyResult<String> {
        to_json(&invariants::report(&self.inner, budget).map_err(err)?)
    }

    fn crossing_change(&self, crossing: usize) -> PyResult<Self> {
        Ok(PyDiagram {
            inner: moves::crossing_change(&self.inner, crossing).map_err(err)?,
        })
    }

    fn delta_move(&self, arcs: [u32; 3]) -> PyResult<Self> {
        Ok(PyDiagram {
            inner: moves::delta_move(&self.inner, &arcs).map_err(err)?,
        })
    }

    /// Apply a move described by a JSON site record, e.g.
    /// '{"move":"delta","arcs":[1,3,5]}'.
    fn apply_move(&self, spec_json: &str) -> PyResult<Self> {
        let spec: moves::MoveSpec = serde_json::from_str(spec_json)
            .map_err(|e| PyValueError::new_err(format!("bad move spec: {e}")))?;
        let registry = moves::Registry::new();
        Ok(PyDiagram {
            inner: moves::apply_move(&self.inner, &spec, &registry).map_err(err)?,
        })
    }

    fn mirror(&self) -> Self {
        PyDiagram {
            inner: edit::mirror(&self.inner),
        }
    }

    fn connected_sum(&self, arc: u32, other: &PyDiagram, other_arc: u32) -> PyResult<Self> {
        Ok(PyDiagram {
            inner: edit::connected_sum(&self.inner, arc, &other.inner, other_arc).map_err(err)?,
        })
    }

    /// Evaluate the given marked crossings as a singular diagram:
    /// the alternating-sign resolution, summed under `invariant`.
    #[pyo3(signature = (marked, invariant, budget = invariants::DEFAULT_BUDGET))]
    fn evaluate_singular(&self, marked: Vec<usize>, invariant: &str, budget: u64) -> PyResult<String> {
        let inv = parse_invariant(invariant)?;
        let s = SingularDiagram::new(self.inner.clone(), marked).map_err(err)?;
        to_json(&invariants::evaluate_singular(&s, inv, budget).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "Diagram({} crossings, {} free loops)",
            self.inner.crossings.len(),
            self.inner.free_loops
        )
    }

    fn __eq__(&self, other: &PyDiagram) -> bool {
        self.inner == other.inner
    }
}

/// Accept an invariant either as bare shorthand ("arf", "conway") or as
/// the JSON form ('{"linking_number":[0,1]}', '{"conway_coeff":2}').
fn parse_invariant(text: &str) -> PyResult<invariants::Invariant> {
    serde_json::from_str(text)
        .or_else(|_| serde_json::from_str(&format!("\"{text}\"")))
        .map_err(|e| PyValueError::new_err(format!("bad invariant {text:?}: {e}")))
}

#[pyfunction]
fn catalog_names() -> Vec<String> {
    catalog::NAMES.iter().map(|s| s.to_string()).collect()
}

/// The built-in link models as (name, type_index, feet count).
#[pyfunction]
fn model_catalog() -> Vec<(String, usize, usize)> {
    moves::band::model_catalog()
        .into_iter()
        .map(|m| (m.name, m.type_index, m.feet.len()))
        .collect()
}

/// The Whitehead-link experiment report, as a JSON string.
#[pyfunction]
#[pyo3(signature = (budget = invariants::DEFAULT_BUDGET))]
fn whitehead_experiment(budget: u64) -> PyResult<String> {
    to_json(&lab::whitehead_experiment(budget).map_err(err)?)
}

/// Run the order-(n;k) alternating-sum test described by a JSON scheme
/// spec; returns the experiment report as a JSON string.
#[pyfunction]
#[pyo3(signature = (spec_json, budget = invariants::DEFAULT_BUDGET))]
fn order_nk_test(spec_json: &str, budget: u64) -> PyResult<String> {
    let spec: lab::SchemeSpec = serde_json::from_str(spec_json)
        .map_err(|e| PyValueError::new_err(format!("bad scheme spec: {e}")))?;
    let registry = moves::Registry::new();
    let (inv, scheme) = spec.resolve(&registry).map_err(err)?;
    to_json(&lab::order_nk_test(inv, &scheme, budget).map_err(err)?)
}

#[pymodule]
fn akmove(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDiagram>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(model_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(whitehead_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(order_nk_test, m)?)?;
    Ok(())
}
