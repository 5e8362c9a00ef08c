//! Python bindings for `cohomlen`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use cohomlen::asymptotics::{
    fit_quasipolynomial, fraction_string, length_sequence_range, limit_via_volume as limit_core,
    sequence_generating_function, AsymptoticsError, LengthSequence,
};
use cohomlen::dsl::{format_graph, format_ideal, parse_graph, parse_ideal};
use cohomlen::graphs;
use cohomlen::homology::FieldSpec;
use cohomlen::ideal::{ExponentVector, IdealFamily};
use cohomlen::polyhedra::{self, CoConvexRegion};
use cohomlen::takayama::{self, GradedPieceQuery};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn asym_err(e: AsymptoticsError) -> PyErr {
    match e {
        AsymptoticsError::Consistency(_) | AsymptoticsError::TooLarge(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        e => value_err(e),
    }
}

fn field(characteristic: u64) -> PyResult<FieldSpec> {
    FieldSpec::from_characteristic(characteristic).map_err(value_err)
}

/// A monomial ideal given by exponent vectors of its generators.
#[pyclass(name = "MonomialIdeal", module = "cohomlen", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyIdeal {
    inner: cohomlen::ideal::MonomialIdeal,
}

#[pymethods]
impl PyIdeal {
    #[new]
    fn new(dim: usize, gens: Vec<Vec<i64>>) -> PyResult<Self> {
        let inner = cohomlen::ideal::MonomialIdeal::new(dim, gens.into_iter().map(ExponentVector::new))
            .map_err(value_err)?;
        Ok(PyIdeal { inner })
    }

    /// Parse `ring d; ideal x1*x2, ...;`.
    #[staticmethod]
    fn parse(src: &str) -> PyResult<Self> {
        Ok(PyIdeal {
            inner: parse_ideal(src).map_err(value_err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn gens(&self) -> Vec<Vec<i64>> {
        self.inner.gens().iter().map(|g| g.entries().to_vec()).collect()
    }

    fn power(&self, n: u32) -> PyResult<Self> {
        Ok(PyIdeal {
            inner: self.inner.power(n).map_err(value_err)?,
        })
    }

    fn contains(&self, a: Vec<i64>) -> PyResult<bool> {
        self.inner.contains(&ExponentVector::new(a)).map_err(value_err)
    }

    fn to_dsl(&self) -> String {
        format_ideal(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("MonomialIdeal.parse({:?})", format_ideal(&self.inner))
    }
}

/// A simple graph on vertices `0..dim`.
#[pyclass(name = "Graph", module = "cohomlen", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyGraph {
    inner: graphs::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(dim: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph {
            inner: graphs::Graph::new(dim, edges).map_err(value_err)?,
        })
    }

    /// Parse `graph d; edges 1-2, 2-3;` (1-based vertices).
    #[staticmethod]
    fn parse(src: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: parse_graph(src).map_err(value_err)?,
        })
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        PyGraph {
            inner: graphs::Graph::path(n),
        }
    }

    #[staticmethod]
    fn cycle(n: usize) -> Self {
        PyGraph {
            inner: graphs::Graph::cycle(n),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().iter().copied().collect()
    }

    fn edge_ideal(&self) -> PyIdeal {
        PyIdeal {
            inner: graphs::edge_ideal(&self.inner),
        }
    }

    fn to_dsl(&self) -> String {
        format_graph(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Graph.parse({:?})", format_graph(&self.inner))
    }
}

/// Quasi-polynomial with coefficients as `"p/q"` strings, lowest degree first.
#[pyclass(name = "QuasiPolynomial", module = "cohomlen", frozen, get_all, skip_from_py_object)]
pub struct PyQuasiPolynomial {
    period: usize,
    polys: Vec<Vec<String>>,
    valid_from: u64,
}

#[pymethods]
impl PyQuasiPolynomial {
    fn __repr__(&self) -> String {
        format!(
            "QuasiPolynomial(period={}, polys={:?}, valid_from={})",
            self.period, self.polys, self.valid_from
        )
    }
}

fn family(ideal: &PyIdeal, kind: &str) -> PyResult<IdealFamily> {
    let base = ideal.inner.clone();
    match kind {
        "powers" => Ok(IdealFamily::powers(base)),
        "sat" => Ok(IdealFamily::saturated_powers(base)),
        "intclosure" => Ok(IdealFamily::integral_closure_powers(base)),
        other => Err(PyValueError::new_err(format!(
            "unknown family `{other}`; expected powers, sat or intclosure"
        ))),
    }
}

fn sequence(
    py: Python<'_>,
    ideal: &PyIdeal,
    i: usize,
    start: u64,
    end: u64,
    kind: &str,
    characteristic: u64,
) -> PyResult<LengthSequence> {
    let fam = family(ideal, kind)?;
    let f = field(characteristic)?;
    py.detach(|| length_sequence_range(&fam, i, start, end, f))
        .map_err(asym_err)
}

/// `dim_k H^i_m(R/I)_a`.
#[pyfunction]
#[pyo3(signature = (ideal, i, degree, characteristic=0))]
fn graded_dim(ideal: &PyIdeal, i: usize, degree: Vec<i64>, characteristic: u64) -> PyResult<usize> {
    let q = GradedPieceQuery {
        ideal: ideal.inner.clone(),
        i,
        degree: ExponentVector::new(degree),
    };
    takayama::graded_dim(&q, field(characteristic)?).map_err(value_err)
}

/// `λ(H^i_m(R/I_n))`, or `None` when infinite.
#[pyfunction]
#[pyo3(signature = (ideal, i, n=1, family="powers", characteristic=0))]
fn length(
    py: Python<'_>,
    ideal: &PyIdeal,
    i: usize,
    n: u64,
    family: &str,
    characteristic: u64,
) -> PyResult<Option<u64>> {
    let s = sequence(py, ideal, i, n, n, family, characteristic)?;
    Ok(s.values[0].1.value())
}

/// Lengths for `n = start, ..., end`; `None` marks infinite entries.
#[pyfunction]
#[pyo3(signature = (ideal, i, start, end, family="powers", characteristic=0))]
fn length_sequence(
    py: Python<'_>,
    ideal: &PyIdeal,
    i: usize,
    start: u64,
    end: u64,
    family: &str,
    characteristic: u64,
) -> PyResult<Vec<Option<u64>>> {
    let s = sequence(py, ideal, i, start, end, family, characteristic)?;
    Ok(s.values.iter().map(|(_, r)| r.value()).collect())
}

/// Fit a quasi-polynomial to the lengths for `n = 1, ..., end`.
#[pyfunction]
#[pyo3(signature = (ideal, i, end, max_degree=None, max_period=2, family="powers", characteristic=0))]
#[allow(clippy::too_many_arguments)]
fn fit(
    py: Python<'_>,
    ideal: &PyIdeal,
    i: usize,
    end: u64,
    max_degree: Option<usize>,
    max_period: usize,
    family: &str,
    characteristic: u64,
) -> PyResult<PyQuasiPolynomial> {
    let s = sequence(py, ideal, i, 1, end, family, characteristic)?;
    let qp = fit_quasipolynomial(&s, max_degree.unwrap_or(s.dim()), max_period).map_err(asym_err)?;
    Ok(PyQuasiPolynomial {
        period: qp.period,
        polys: qp
            .polys
            .iter()
            .map(|p| p.iter().map(fraction_string).collect())
            .collect(),
        valid_from: qp.valid_from,
    })
}

/// `(numerator, denominator_factors)` of the generating function of the
/// lengths for `n = 0, ..., end`.
#[pyfunction]
#[pyo3(signature = (ideal, i, end, max_degree=None, max_period=2, family="powers", characteristic=0))]
#[allow(clippy::too_many_arguments)]
fn generating_function(
    py: Python<'_>,
    ideal: &PyIdeal,
    i: usize,
    end: u64,
    max_degree: Option<usize>,
    max_period: usize,
    family: &str,
    characteristic: u64,
) -> PyResult<(Vec<String>, Vec<u64>)> {
    let s = sequence(py, ideal, i, 1, end, family, characteristic)?;
    let (_, g) = sequence_generating_function(&s, max_degree.unwrap_or(s.dim()), max_period)
        .map_err(asym_err)?;
    Ok((
        g.numerator.iter().map(|c| c.to_string()).collect(),
        g.denominator_factors,
    ))
}

/// Exact `lim λ(H^i_m(R/Ī^n)) / n^d` as a `"p/q"` string.
#[pyfunction]
fn limit_via_volume(py: Python<'_>, ideal: &PyIdeal, i: usize) -> PyResult<String> {
    let inner = ideal.inner.clone();
    let l = py.detach(|| limit_core(&inner, i)).map_err(asym_err)?;
    Ok(fraction_string(&l))
}

/// `(finite, witnesses)` from the star-deletion criterion.
#[pyfunction]
fn prop45_criterion(graph: &PyGraph) -> PyResult<(bool, Vec<String>)> {
    let r = graphs::prop45_criterion(&graph.inner).map_err(value_err)?;
    let w = r
        .witnesses
        .iter()
        .map(|w| match w {
            graphs::VertexWitness::IsolatedAfterStar => "isolated_after_star",
            graphs::VertexWitness::BipartiteComponent => "bipartite_component",
            graphs::VertexWitness::Fail => "fail",
        })
        .map(String::from)
        .collect();
    Ok((r.finite, w))
}

#[pyfunction]
fn locally_bipartite(graph: &PyGraph) -> PyResult<bool> {
    graphs::locally_bipartite(&graph.inner).map_err(value_err)
}

fn region(outer: &PyIdeal, inner: Vec<PyRef<'_, PyIdeal>>) -> PyResult<CoConvexRegion> {
    let inner: Vec<_> = inner.iter().map(|p| p.inner.clone()).collect();
    CoConvexRegion::from_ideals(outer.inner.dim(), std::slice::from_ref(&outer.inner), &inner)
        .map_err(value_err)
}

/// Volume of `conv(outer) \ ∪ conv(inner_j)` as a `"p/q"` string.
#[pyfunction]
fn coconvex_volume(outer: &PyIdeal, inner: Vec<PyRef<'_, PyIdeal>>) -> PyResult<String> {
    let c = region(outer, inner)?;
    Ok(fraction_string(&polyhedra::coconvex_volume(&c).map_err(value_err)?))
}

/// Lattice points of `n` times the co-convex region.
#[pyfunction]
fn lattice_count(outer: &PyIdeal, inner: Vec<PyRef<'_, PyIdeal>>, n: u64) -> PyResult<u64> {
    let c = region(outer, inner)?;
    Ok(polyhedra::lattice_count(&c, n))
}

#[pymodule]
#[pyo3(name = "cohomlen")]
fn cohomlen_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyIdeal>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyQuasiPolynomial>()?;
    m.add_function(wrap_pyfunction!(graded_dim, m)?)?;
    m.add_function(wrap_pyfunction!(length, m)?)?;
    m.add_function(wrap_pyfunction!(length_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(generating_function, m)?)?;
    m.add_function(wrap_pyfunction!(limit_via_volume, m)?)?;
    m.add_function(wrap_pyfunction!(prop45_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(locally_bipartite, m)?)?;
    m.add_function(wrap_pyfunction!(coconvex_volume, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_count, m)?)?;
    Ok(())
}
