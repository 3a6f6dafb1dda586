//! Python bindings: `import pysymjoin`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use symjoin::homology::{reduced_homology, verify_connectivity_homology, HomologyProfile};
use symjoin::joins::{in_deleted_join, in_symmetrized_join};
use symjoin::morse::{
    build_matching, connectivity_lower_bound, critical_report, passport, to_dot,
    verify_acyclicity, verify_matching, Connectivity, PassportEntry,
};
use symjoin::unavoidability::{
    deficiency, is_collectively_unavoidable, is_collectively_unavoidable_bruteforce,
};
use symjoin::{fixtures, Complex, Family, JoinCell, JoinComplex, VertexSet};

fn err(e: symjoin::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn profile_dict<'py>(py: Python<'py>, h: &HomologyProfile) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("betti", h.betti.clone())?;
    d.set_item("torsion", h.torsion.clone())?;
    d.set_item("reduced_minus_one", h.minus_one)?;
    d.set_item("void", h.void)?;
    Ok(d)
}

fn json_value<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// A simplicial complex on the ground set `{1, ..., m}`.
#[pyclass(name = "Complex", module = "pysymjoin", frozen)]
struct PyComplex {
    inner: Complex,
}

#[pymethods]
impl PyComplex {
    /// Downward closure of the given facets (lists of 1-based vertices).
    #[new]
    fn new(m: usize, facets: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(PyComplex {
            inner: Complex::from_facet_lists(m, &facets).map_err(err)?,
        })
    }

    /// All subsets of `[m]` with at most `c` elements.
    #[staticmethod]
    fn skeleton(m: usize, c: usize) -> PyResult<Self> {
        Ok(PyComplex {
            inner: Complex::skeleton(m, c).map_err(err)?,
        })
    }

    #[staticmethod]
    fn rp2() -> Self {
        PyComplex {
            inner: Complex::rp2_minimal(),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyComplex {
            inner: Complex::from_json(text).map_err(err)?,
        })
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.ground()
    }

    fn facets(&self) -> Vec<Vec<usize>> {
        self.inner.facets().into_iter().map(VertexSet::to_vec).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, face: Vec<usize>) -> PyResult<bool> {
        let f = VertexSet::new(self.inner.ground(), &face).map_err(err)?;
        Ok(self.inner.contains(f))
    }

    fn __eq__(&self, other: PyRef<'_, PyComplex>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Complex(m={}, facets={:?})", self.inner.ground(), self.facets())
    }

    fn dimension(&self) -> Option<isize> {
        self.inner.dimension()
    }

    /// Face counts by cardinality, starting with the empty face.
    fn face_counts(&self) -> Vec<usize> {
        self.inner.cardinality_counts()
    }

    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    fn is_balanced(&self, k: usize) -> bool {
        self.inner.is_balanced(k)
    }

    fn alexander_dual(&self) -> Self {
        PyComplex {
            inner: self.inner.alexander_dual(),
        }
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// Reduced integral homology: `{"betti": [...], "torsion": [[...], ...], ...}`.
    #[pyo3(signature = (max_dim=None))]
    fn homology<'py>(&self, py: Python<'py>, max_dim: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
        let h = reduced_homology(&self.inner, max_dim).map_err(err)?;
        profile_dict(py, &h)
    }

    fn verify_connectivity(&self, c: i64) -> PyResult<bool> {
        verify_connectivity_homology(&self.inner, c).map_err(err)
    }
}

/// An ordered tuple of complexes on a common ground set.
#[pyclass(name = "Family", module = "pysymjoin", frozen)]
struct PyFamily {
    inner: Family,
}

#[pymethods]
impl PyFamily {
    #[new]
    fn new(complexes: Vec<PyRef<'_, PyComplex>>) -> PyResult<Self> {
        let members = complexes.iter().map(|c| c.inner.clone()).collect();
        Ok(PyFamily {
            inner: Family::new(members).map_err(err)?,
        })
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.ground()
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    fn complex(&self, i: usize) -> PyResult<PyComplex> {
        self.inner
            .complexes()
            .get(i)
            .map(|c| PyComplex { inner: c.clone() })
            .ok_or_else(|| PyValueError::new_err(format!("no complex at index {i}")))
    }

    fn is_balanced(&self, k: usize) -> bool {
        self.inner.is_balanced(k)
    }

    /// Certificate `{"verdict", "method", "witness"}`. With `k` the deficiency
    /// and clique criterion is used for balanced families; without it, brute force.
    #[pyo3(signature = (k=None))]
    fn unavoidable<'py>(&self, py: Python<'py>, k: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
        let cert = match k {
            Some(k) => is_collectively_unavoidable(&self.inner, k),
            None => is_collectively_unavoidable_bruteforce(&self.inner),
        };
        json_value(py, &cert.to_json())
    }

    /// Whether `(A_1, ..., A_r)` is a cell of the deleted (or symmetrized) join.
    #[pyo3(signature = (blocks, symmetrized=true))]
    fn join_contains(&self, blocks: Vec<Vec<usize>>, symmetrized: bool) -> PyResult<bool> {
        let cell = JoinCell::from_lists(self.inner.ground(), &blocks).map_err(err)?;
        if symmetrized {
            in_symmetrized_join(&cell, &self.inner).map_err(err)
        } else {
            in_deleted_join(&cell, &self.inner).map_err(err)
        }
    }

    fn __repr__(&self) -> String {
        format!("Family(m={}, r={})", self.inner.ground(), self.inner.r())
    }
}

/// A materialized deleted or symmetrized deleted join.
#[pyclass(name = "JoinComplex", module = "pysymjoin", frozen)]
struct PyJoinComplex {
    inner: JoinComplex,
}

#[pymethods]
impl PyJoinComplex {
    #[staticmethod]
    fn symmetrized(family: PyRef<'_, PyFamily>) -> Self {
        PyJoinComplex {
            inner: JoinComplex::symmetrized(&family.inner),
        }
    }

    #[staticmethod]
    fn deleted(family: PyRef<'_, PyFamily>) -> Self {
        PyJoinComplex {
            inner: JoinComplex::deleted(&family.inner),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Number of cells in each dimension.
    fn counts(&self) -> Vec<usize> {
        self.inner.counts()
    }

    /// Cells as `(A_1,...,A_r;B)` strings, by dimension then lexicographically.
    fn cells(&self) -> Vec<String> {
        self.inner.cells().iter().map(ToString::to_string).collect()
    }

    fn __contains__(&self, blocks: Vec<Vec<usize>>) -> PyResult<bool> {
        let cell = JoinCell::from_lists(self.inner.ground(), &blocks).map_err(err)?;
        Ok(self.inner.contains(&cell))
    }

    /// Runs the pivot matching and summarizes its critical cells.
    fn morse<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let j = &self.inner;
        let g = build_matching(j).map_err(err)?;
        let report = critical_report(j, &g);
        let d = PyDict::new(py);
        d.set_item("matching_valid", verify_matching(j, &g))?;
        d.set_item("acyclic", verify_acyclicity(j, &g))?;
        d.set_item("pairs", g.pairs.len())?;
        d.set_item("critical_counts", g.critical_counts())?;
        d.set_item("base", report.base.as_ref().map(ToString::to_string))?;
        d.set_item(
            "large",
            report.large.iter().map(ToString::to_string).collect::<Vec<_>>(),
        )?;
        d.set_item(
            "violations",
            report.violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
        )?;
        d.set_item("theorem_holds", report.theorem_holds())?;
        match connectivity_lower_bound(&report) {
            Ok(Connectivity::AtLeast(c)) => d.set_item("connectivity", c)?,
            Ok(Connectivity::Contractible) => d.set_item("connectivity", "contractible")?,
            Err(_) => d.set_item("connectivity", py.None())?,
        }
        Ok(d)
    }

    #[pyo3(signature = (max_dim=None))]
    fn homology<'py>(&self, py: Python<'py>, max_dim: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
        let h = reduced_homology(&self.inner, max_dim).map_err(err)?;
        profile_dict(py, &h)
    }

    fn verify_connectivity(&self, c: i64) -> PyResult<bool> {
        verify_connectivity_homology(&self.inner, c).map_err(err)
    }

    /// The modified Hasse diagram of the matching in Graphviz DOT.
    fn to_dot(&self) -> PyResult<String> {
        let g = build_matching(&self.inner).map_err(err)?;
        Ok(to_dot(&self.inner, &g))
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyJoinComplex {
            inner: JoinComplex::from_json(text).map_err(err)?,
        })
    }
}

/// Passport of the cell `(A_1, ..., A_r; B)`; `None` stands for infinity.
#[pyfunction(name = "passport")]
fn passport_py(m: usize, blocks: Vec<Vec<usize>>) -> PyResult<Vec<Option<usize>>> {
    let cell = JoinCell::from_lists(m, &blocks).map_err(err)?;
    Ok(passport(&cell)
        .0
        .into_iter()
        .map(|e| match e {
            PassportEntry::Finite(a) => Some(a),
            PassportEntry::Infinite => None,
        })
        .collect())
}

/// `d = r(k + 2) - m`.
#[pyfunction(name = "deficiency")]
fn deficiency_py(m: usize, r: usize, k: usize) -> i64 {
    deficiency(m, r, k)
}

/// A named instance: `two_points`, `rp2_triple`, `skeleta_triple` or `bier_m4`.
#[pyfunction]
fn fixture(name: &str) -> PyResult<PyFamily> {
    let inner = match name {
        "two_points" => fixtures::two_points(),
        "rp2_triple" => fixtures::rp2_triple(),
        "skeleta_triple" => fixtures::skeleta_triple(),
        "bier_m4" => {
            let (k, dual) = fixtures::bier_pair_m4();
            Family::new(vec![k, dual]).map_err(err)?
        }
        other => return Err(PyValueError::new_err(format!("unknown fixture '{other}'"))),
    };
    Ok(PyFamily { inner })
}

#[pymodule]
fn pysymjoin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComplex>()?;
    m.add_class::<PyFamily>()?;
    m.add_class::<PyJoinComplex>()?;
    m.add_function(wrap_pyfunction!(passport_py, m)?)?;
    m.add_function(wrap_pyfunction!(deficiency_py, m)?)?;
    m.add_function(wrap_pyfunction!(fixture, m)?)?;
    Ok(())
}
