use std::time::Duration;

use pyo3::exceptions::{PyTimeoutError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sdepth_core::bounds::{self, BoundTarget};
use sdepth_core::format::{parse_ideal, write_ideal};
use sdepth_core::poset::{self as core_poset, elements, mask_of};
use sdepth_core::{
    Decision, Interval, Monomial, MonomialIdeal, PartitionCertificate, SdepthResult, SdepthValue,
    SearchOptions, SearchStats, SubsetPoset,
};

fn err(e: sdepth_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_list(mask: u32) -> Vec<usize> {
    elements(mask).collect()
}

fn from_list(n: usize, list: &[usize]) -> PyResult<u32> {
    if let Some(&bad) = list.iter().find(|&&e| e == 0 || e > n) {
        return Err(PyValueError::new_err(format!(
            "element {bad} outside 1..={n}"
        )));
    }
    Ok(mask_of(list))
}

/// A monomial ideal in `n` variables, kept by its minimal generators.
#[pyclass(name = "Ideal", module = "sdepth", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyIdeal(MonomialIdeal);

#[pymethods]
impl PyIdeal {
    /// Builds the ideal generated by the given exponent vectors.
    #[new]
    fn new(n: usize, exponents: Vec<Vec<u32>>) -> PyResult<Self> {
        let gens = exponents.into_iter().map(Monomial::new).collect();
        Ok(PyIdeal(sdepth_core::minimalize(gens, n).map_err(err)?))
    }

    /// Squarefree ideal from 1-based generator supports.
    #[staticmethod]
    fn from_supports(n: usize, supports: Vec<Vec<usize>>) -> PyResult<Self> {
        let gens = supports
            .iter()
            .map(|s| Monomial::from_support(n, s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        Ok(PyIdeal(sdepth_core::minimalize(gens, n).map_err(err)?))
    }

    #[staticmethod]
    fn line(n: usize) -> PyResult<Self> {
        sdepth_core::line_ideal(n).map(PyIdeal).map_err(err)
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        sdepth_core::cycle_ideal(n).map(PyIdeal).map_err(err)
    }

    #[staticmethod]
    fn veronese(n: usize, d: usize) -> PyResult<Self> {
        sdepth_core::veronese_ideal(n, d).map(PyIdeal).map_err(err)
    }

    /// Parses the `ring`/`gen` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_ideal(text).map(PyIdeal).map_err(err)
    }

    fn to_text(&self) -> String {
        write_ideal(&self.0)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.0.generators().iter().map(|g| g.to_string()).collect()
    }

    #[getter]
    fn exponents(&self) -> Vec<Vec<u32>> {
        self.0
            .generators()
            .iter()
            .map(|g| g.exponents().to_vec())
            .collect()
    }

    fn is_squarefree(&self) -> bool {
        self.0.is_squarefree()
    }

    fn contains(&self, exponents: Vec<u32>) -> PyResult<bool> {
        self.0.contains(&Monomial::new(exponents)).map_err(err)
    }

    fn colon_by_variable(&self, j: usize) -> PyResult<Self> {
        self.0.colon_by_variable(j).map(PyIdeal).map_err(err)
    }

    fn add_variable(&self, j: usize) -> PyResult<Self> {
        self.0.add_variable(j).map(PyIdeal).map_err(err)
    }

    fn is_subideal_of(&self, other: &PyIdeal) -> PyResult<bool> {
        self.0.is_subideal_of(&other.0).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.num_generators()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ideal(n={}, {})", self.0.n(), self.0)
    }
}

/// A subset poset inside `2^[n]`, the characteristic poset of a module.
#[pyclass(name = "Poset", module = "sdepth", frozen)]
struct PyPoset {
    poset: SubsetPoset,
    describe: String,
}

#[pymethods]
impl PyPoset {
    /// Poset of the quotient `S/I`.
    #[staticmethod]
    fn quotient(ideal: &PyIdeal) -> PyResult<Self> {
        Ok(PyPoset {
            poset: core_poset::poset_of_quotient(&ideal.0).map_err(err)?,
            describe: format!("S/I, I = {}", ideal.0),
        })
    }

    /// Poset of the ideal `I` itself.
    #[staticmethod]
    fn ideal(ideal: &PyIdeal) -> PyResult<Self> {
        Ok(PyPoset {
            poset: core_poset::poset_of_ideal(&ideal.0).map_err(err)?,
            describe: format!("I = {}", ideal.0),
        })
    }

    /// Poset of `J/I`; `smaller` must be contained in `larger`.
    #[staticmethod]
    fn pair(larger: &PyIdeal, smaller: &PyIdeal) -> PyResult<Self> {
        Ok(PyPoset {
            poset: core_poset::poset_of_ideal_quotient(&larger.0, &smaller.0).map_err(err)?,
            describe: format!("J/I, J = {}, I = {}", larger.0, smaller.0),
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.poset.n()
    }

    fn __len__(&self) -> usize {
        self.poset.len()
    }

    fn __contains__(&self, subset: Vec<usize>) -> PyResult<bool> {
        Ok(self.poset.contains(from_list(self.poset.n(), &subset)?))
    }

    fn level_counts(&self) -> Vec<u64> {
        self.poset.level_counts()
    }

    fn level(&self, t: usize) -> Vec<Vec<usize>> {
        if t > self.poset.n() {
            return Vec::new();
        }
        self.poset.level(t).iter().map(|&m| to_list(m)).collect()
    }

    fn maximal_members(&self) -> Vec<Vec<usize>> {
        self.poset.maximal_members().map(to_list).collect()
    }

    fn __repr__(&self) -> String {
        format!("Poset({}, {} members)", self.describe, self.poset.len())
    }
}

/// Result of an exact Stanley depth computation.
#[pyclass(name = "SdepthResult", module = "sdepth", frozen, get_all)]
struct PySdepthResult {
    /// Exact value (or certified lower end when inconclusive); `None` for the zero module.
    value: Option<usize>,
    infinite: bool,
    inconclusive: bool,
    upper_bound: Option<usize>,
    refutation_k: Option<usize>,
    /// Intervals `(F, G)` of the certificate, as 1-based lists.
    certificate: Option<Vec<(Vec<usize>, Vec<usize>)>>,
    stats: Py<PyDict>,
}

#[pymethods]
impl PySdepthResult {
    fn __repr__(&self) -> String {
        match (self.infinite, self.inconclusive) {
            (true, _) => "SdepthResult(infinite)".into(),
            (false, false) => format!("SdepthResult({})", self.value.unwrap_or(0)),
            (false, true) => format!(
                "SdepthResult(inconclusive, {}..={})",
                self.value.unwrap_or(0),
                self.upper_bound.map_or("?".into(), |u| u.to_string())
            ),
        }
    }
}

fn stats_dict<'py>(py: Python<'py>, stats: &SearchStats) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("nodes", stats.nodes)?;
    d.set_item("prunes_alpha", stats.prunes_alpha)?;
    d.set_item("prunes_existence", stats.prunes_existence)?;
    d.set_item("prunes_hall", stats.prunes_hall)?;
    d.set_item("wall_ms", stats.wall_ms)?;
    Ok(d)
}

fn intervals_of(cert: &PartitionCertificate) -> Vec<(Vec<usize>, Vec<usize>)> {
    cert.intervals
        .iter()
        .map(|iv| (to_list(iv.bottom), to_list(iv.top)))
        .collect()
}

fn options(timeout: Option<f64>, workers: usize, hall: bool) -> PyResult<SearchOptions> {
    let timeout = match timeout {
        Some(t) if t > 0.0 && t.is_finite() => Some(Duration::from_secs_f64(t)),
        Some(_) => return Err(PyValueError::new_err("timeout must be positive")),
        None => None,
    };
    Ok(SearchOptions {
        workers: workers.max(1),
        timeout,
        hall_check: hall,
    })
}

fn wrap_result(py: Python<'_>, r: SdepthResult) -> PyResult<PySdepthResult> {
    Ok(PySdepthResult {
        value: r.value.finite(),
        infinite: r.value == SdepthValue::Infinite,
        inconclusive: r.inconclusive,
        upper_bound: r.upper_bound,
        refutation_k: r.refutation_k,
        certificate: r.certificate.as_ref().map(intervals_of),
        stats: stats_dict(py, &r.stats)?.unbind(),
    })
}

/// Exact Stanley depth of a poset, scanning upwards from `lower_hint`.
#[pyfunction]
#[pyo3(signature = (poset, *, lower_hint=None, timeout=None, workers=1, hall=false))]
fn sdepth_exact(
    py: Python<'_>,
    poset: &PyPoset,
    lower_hint: Option<usize>,
    timeout: Option<f64>,
    workers: usize,
    hall: bool,
) -> PyResult<PySdepthResult> {
    let opts = options(timeout, workers, hall)?;
    let p = &poset.poset;
    let result = py.detach(|| sdepth_core::sdepth_exact(p, lower_hint, &opts));
    wrap_result(py, result)
}

/// Brute-force reference value for posets with few members.
#[pyfunction]
fn naive_oracle(py: Python<'_>, poset: &PyPoset) -> PyResult<PySdepthResult> {
    let result = sdepth_core::naive_oracle(&poset.poset).map_err(err)?;
    wrap_result(py, result)
}

/// Decides `sdepth >= k`. Returns the partition as `(F, G)` pairs, or `None`
/// if there is none; raises `TimeoutError` when the budget runs out.
#[pyfunction]
#[pyo3(signature = (poset, k, *, timeout=None, workers=1, hall=false))]
fn decide_at_least(
    py: Python<'_>,
    poset: &PyPoset,
    k: usize,
    timeout: Option<f64>,
    workers: usize,
    hall: bool,
) -> PyResult<Option<Vec<(Vec<usize>, Vec<usize>)>>> {
    let opts = options(timeout, workers, hall)?;
    let p = &poset.poset;
    let report = py
        .detach(|| sdepth_core::decide_at_least(p, k, &opts))
        .map_err(err)?;
    match report.decision {
        Decision::Certificate(cert) => Ok(Some(intervals_of(&cert))),
        Decision::Refuted => Ok(None),
        Decision::TimedOut => Err(PyTimeoutError::new_err("search budget exhausted")),
    }
}

/// Checks that the intervals partition the poset. Returns `None` when valid,
/// otherwise `(kind, message)`.
#[pyfunction]
#[pyo3(signature = (poset, intervals, claimed_sdepth=None))]
fn verify_partition(
    poset: &PyPoset,
    intervals: Vec<(Vec<usize>, Vec<usize>)>,
    claimed_sdepth: Option<usize>,
) -> PyResult<Option<(String, String)>> {
    let n = poset.poset.n();
    let intervals = intervals
        .iter()
        .map(|(f, g)| Ok(Interval::new(from_list(n, f)?, from_list(n, g)?)))
        .collect::<PyResult<Vec<_>>>()?;
    let mut cert = PartitionCertificate::from_intervals(n, intervals);
    if let Some(c) = claimed_sdepth {
        cert.claimed_sdepth = c;
    }
    Ok(sdepth_core::verify_partition(&poset.poset, &cert)
        .err()
        .map(|v| (v.kind().to_string(), v.to_string())))
}

/// Alpha sequence of level counts `beta` at level `k`; returns `(alpha, passes)`.
#[pyfunction]
fn alpha_test(beta: Vec<u64>, k: usize) -> PyResult<(Vec<i64>, bool)> {
    let t = sdepth_core::alpha_test(&beta, k).map_err(err)?;
    Ok((t.alpha.iter().map(|&a| a as i64).collect(), t.pass))
}

/// All applicable bounds as a dict. `kind` is "ideal", "quotient" or "pair";
/// pairs take the larger ideal first.
#[pyfunction]
#[pyo3(signature = (kind, ideal, smaller=None))]
fn bound_report<'py>(
    py: Python<'py>,
    kind: &str,
    ideal: &PyIdeal,
    smaller: Option<&PyIdeal>,
) -> PyResult<Bound<'py, PyAny>> {
    let target = match (kind, smaller) {
        ("ideal", None) => BoundTarget::Ideal(ideal.0.clone()),
        ("quotient", None) => BoundTarget::Quotient(ideal.0.clone()),
        ("pair", Some(s)) => BoundTarget::Pair {
            larger: ideal.0.clone(),
            smaller: s.0.clone(),
        },
        _ => {
            return Err(PyValueError::new_err(
                "kind must be 'ideal' or 'quotient' with one ideal, or 'pair' with two",
            ))
        }
    };
    let report = bounds::bound_report(&target).map_err(err)?;
    let text = serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyfunction]
fn okazaki_lower(ideal: &PyIdeal) -> PyResult<i64> {
    bounds::okazaki_lower(&ideal.0).map_err(err)
}

#[pyfunction]
fn quotient_gen_lower(ideal: &PyIdeal) -> PyResult<i64> {
    bounds::quotient_gen_lower(&ideal.0).map_err(err)
}

#[pyfunction]
fn pair_lower(larger: &PyIdeal, smaller: &PyIdeal) -> PyResult<i64> {
    bounds::pair_lower(&larger.0, &smaller.0).map_err(err)
}

#[pyfunction]
fn sdepth_line_quotient(n: usize) -> PyResult<i64> {
    bounds::sdepth_line_quotient(n).map_err(err)
}

#[pyfunction]
fn depth_line_quotient(n: usize) -> PyResult<i64> {
    bounds::depth_line_quotient(n).map_err(err)
}

#[pyfunction]
fn depth_cycle_quotient(n: usize) -> PyResult<i64> {
    bounds::depth_cycle_quotient(n).map_err(err)
}

#[pyfunction]
fn sdepth_cycle_mod_line(n: usize) -> PyResult<i64> {
    bounds::sdepth_cycle_mod_line(n).map_err(err)
}

/// `(lower, upper, exact)` for `sdepth(S/J_n)`.
#[pyfunction]
fn sdepth_cycle_quotient_bracket(n: usize) -> PyResult<(i64, i64, Option<i64>)> {
    let b = bounds::sdepth_cycle_quotient_bracket(n).map_err(err)?;
    Ok((b.lower, b.upper, b.exact))
}

#[pyfunction]
fn cycle_beta_closed(n: usize, t: usize) -> i64 {
    bounds::cycle_beta_closed(n, t) as i64
}

#[pymodule]
fn sdepth(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyIdeal>()?;
    m.add_class::<PyPoset>()?;
    m.add_class::<PySdepthResult>()?;
    m.add_function(wrap_pyfunction!(sdepth_exact, m)?)?;
    m.add_function(wrap_pyfunction!(naive_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(decide_at_least, m)?)?;
    m.add_function(wrap_pyfunction!(verify_partition, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_test, m)?)?;
    m.add_function(wrap_pyfunction!(bound_report, m)?)?;
    m.add_function(wrap_pyfunction!(okazaki_lower, m)?)?;
    m.add_function(wrap_pyfunction!(quotient_gen_lower, m)?)?;
    m.add_function(wrap_pyfunction!(pair_lower, m)?)?;
    m.add_function(wrap_pyfunction!(sdepth_line_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(depth_line_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(depth_cycle_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(sdepth_cycle_mod_line, m)?)?;
    m.add_function(wrap_pyfunction!(sdepth_cycle_quotient_bracket, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_beta_closed, m)?)?;
    Ok(())
}
