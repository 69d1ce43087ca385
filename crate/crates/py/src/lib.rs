//! Python bindings: `import burgess`.

use std::collections::BTreeMap;
use std::sync::Arc;

use burgess_core::bounds::{self, BoundReport};
use burgess_core::modular::{self, PrimeModulus};
use burgess_core::pipeline;
use burgess_core::sums::{self, Coefficient, PhaseMode, RealPolynomial};
use burgess_core::verify;
use burgess_core::vinogradov;
use burgess_core::{DirichletCharacter, Error, TupleAssignment};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(burgess, GuardError, PyRuntimeError, "Enumeration exceeded its work guard.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Guard { .. } => GuardError::new_err(e.to_string()),
        Error::Overflow(_) => PyOverflowError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for burgess_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// A coefficient given as a float or as a `(num, den)` pair.
#[derive(FromPyObject)]
enum PyCoefficient {
    Rational((i64, u64)),
    Real(f64),
}

fn polynomial(coeffs: Vec<PyCoefficient>) -> PyResult<RealPolynomial> {
    let coeffs = coeffs
        .into_iter()
        .map(|c| match c {
            PyCoefficient::Rational((num, den)) => Coefficient::rational(num, den),
            PyCoefficient::Real(v) => Coefficient::Real(v),
        })
        .collect();
    RealPolynomial::new(coeffs).py()
}

fn phase_mode(mode: &str) -> PyResult<PhaseMode> {
    match mode {
        "auto" => Ok(PhaseMode::Auto),
        "exact" => Ok(PhaseMode::Exact),
        "float" => Ok(PhaseMode::Float),
        other => Err(PyValueError::new_err(format!("unknown phase mode {other:?}"))),
    }
}

fn tuple(entries: Vec<u64>, tau: Option<u64>) -> PyResult<TupleAssignment> {
    match tau {
        Some(t) => TupleAssignment::new(entries, t).py(),
        None => TupleAssignment::from_entries(entries).py(),
    }
}

/// Dirichlet character `χ_j` modulo a prime `q`.
#[pyclass(name = "Character", module = "burgess", frozen)]
struct PyCharacter {
    inner: DirichletCharacter,
}

#[pymethods]
impl PyCharacter {
    #[new]
    fn new(q: u64, index: u64) -> PyResult<Self> {
        let modulus = Arc::new(PrimeModulus::new(q).py()?);
        Ok(Self { inner: DirichletCharacter::new(modulus, index).py()? })
    }

    /// The real character of order 2.
    #[staticmethod]
    fn quadratic(q: u64) -> PyResult<Self> {
        let modulus = Arc::new(PrimeModulus::new(q).py()?);
        Ok(Self { inner: DirichletCharacter::quadratic(modulus).py()? })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn index(&self) -> u64 {
        self.inner.index()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.inner.order()
    }

    #[getter]
    fn generator(&self) -> u64 {
        self.inner.modulus().generator()
    }

    fn is_principal(&self) -> bool {
        self.inner.is_principal()
    }

    fn __call__(&self, n: i64) -> Complex64 {
        self.inner.eval(n)
    }

    /// `χ(n) = e(k / (q-1))`; `None` when `q | n`.
    fn exponent(&self, n: i64) -> Option<u64> {
        self.inner.exponent(n)
    }

    /// `Σ_{N<n≤N+H} e(f(n)) χ(n)` with `f` given by its coefficients.
    #[pyo3(signature = (coeffs, n_start, h, mode = "auto"))]
    fn mixed_sum(&self, coeffs: Vec<PyCoefficient>, n_start: i64, h: f64, mode: &str) -> PyResult<Complex64> {
        let f = polynomial(coeffs)?;
        Ok(sums::mixed_sum_with_mode(&self.inner, &f, n_start, h, phase_mode(mode)?).py()?.value)
    }

    fn plain_sum(&self, n_start: i64, h: f64) -> PyResult<Complex64> {
        Ok(sums::plain_sum(&self.inner, n_start, h).py()?.value)
    }

    /// `Σ_{m=1}^q χ(F_x(m))`.
    #[pyo3(signature = (x, tau = None))]
    fn complete_sum(&self, x: Vec<u64>, tau: Option<u64>) -> PyResult<Complex64> {
        Ok(sums::complete_sum(&self.inner, &tuple(x, tau)?).py()?.value)
    }

    /// `(applicable, magnitude, bound, degree, holds)` for the Weil bound.
    #[pyo3(signature = (x, tau = None))]
    fn weil(&self, x: Vec<u64>, tau: Option<u64>) -> PyResult<(bool, f64, f64, u64, bool)> {
        let r = sums::weil_report(&self.inner, &tuple(x, tau)?).py()?;
        Ok((r.applicable, r.magnitude, r.bound, r.degree, r.holds))
    }

    fn __repr__(&self) -> String {
        format!("Character(q={}, index={})", self.inner.q(), self.inner.index())
    }
}

/// Result of a bound evaluation.
#[pyclass(name = "BoundReport", module = "burgess", frozen, get_all)]
struct PyBoundReport {
    theorem: String,
    q: f64,
    h: f64,
    r: u32,
    d: u32,
    bound: f64,
    exponents: (f64, f64, f64),
    valid: bool,
    reason: Option<String>,
    nontrivial: bool,
    unconditional: bool,
}

#[pymethods]
impl PyBoundReport {
    fn __repr__(&self) -> String {
        format!(
            "BoundReport(theorem={:?}, r={}, d={}, bound={}, valid={})",
            self.theorem, self.r, self.d, self.bound, self.valid
        )
    }
}

impl From<BoundReport> for PyBoundReport {
    fn from(rep: BoundReport) -> Self {
        Self {
            theorem: rep.theorem.tag().to_owned(),
            q: rep.params.q,
            h: rep.params.h,
            r: rep.params.r,
            d: rep.params.d,
            bound: rep.bound,
            exponents: (rep.exponents.h, rep.exponents.q, rep.exponents.log),
            valid: rep.valid,
            reason: rep.reason,
            nontrivial: rep.nontrivial,
            unconditional: rep.unconditional,
        }
    }
}

#[pyfunction]
fn is_prime(n: u64) -> bool {
    modular::is_prime(n)
}

#[pyfunction]
fn primitive_root(q: u64) -> PyResult<u64> {
    modular::find_primitive_root(q).py()
}

#[pyfunction]
#[pyo3(signature = (r, d, x, method = "mitm"))]
fn count_j(r: usize, d: u32, x: u64, method: &str) -> PyResult<u128> {
    match method {
        "mitm" => vinogradov::count_j_mitm(r, d, x).py(),
        "bruteforce" => vinogradov::count_j_bruteforce(r, d, x).py(),
        other => Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
}

#[pyfunction]
fn count_bad(r: usize, tau: u64) -> PyResult<u128> {
    vinogradov::count_bad(r, tau).py()
}

#[pyfunction]
fn is_bad(x: Vec<u64>) -> bool {
    vinogradov::is_bad(&x)
}

#[pyfunction]
fn burgess_classical(q: f64, h: f64, r: u32) -> PyResult<PyBoundReport> {
    Ok(bounds::burgess_classical(q, h, r).py()?.into())
}

#[pyfunction]
#[pyo3(signature = (q, h, r, d, eps = bounds::DEFAULT_EPS))]
fn enflo_bound(q: f64, h: f64, r: u32, d: u32, eps: f64) -> PyResult<PyBoundReport> {
    Ok(bounds::enflo_bound(q, h, r, d, eps).py()?.into())
}

#[pyfunction]
fn chang_refined_bound(q: f64, h: f64, r: u32, d: u32) -> PyResult<PyBoundReport> {
    Ok(bounds::chang_refined_bound(q, h, r, d).py()?.into())
}

#[pyfunction]
#[pyo3(signature = (q, h, r, d, eps = bounds::DEFAULT_EPS))]
fn vinogradov_bound(q: f64, h: f64, r: u32, d: u32, eps: f64) -> PyResult<PyBoundReport> {
    Ok(bounds::vinogradov_bound(q, h, r, d, eps).py()?.into())
}

#[pyfunction]
#[pyo3(signature = (q, h, r, d, delta, eps = bounds::DEFAULT_EPS))]
fn intermediate_bound(q: f64, h: f64, r: u32, d: u32, delta: f64, eps: f64) -> PyResult<PyBoundReport> {
    Ok(bounds::intermediate_bound(q, h, r, d, eps, delta).py()?.into())
}

#[pyfunction]
#[pyo3(signature = (q, h, d, eps = bounds::DEFAULT_EPS, delta_wooley = None))]
fn best_bound(q: f64, h: f64, d: u32, eps: f64, delta_wooley: Option<f64>) -> PyResult<PyBoundReport> {
    Ok(bounds::best_bound(q, h, d, eps, delta_wooley).py()?.into())
}

#[pyfunction]
fn delta_chang(kappa: f64, d: u32) -> f64 {
    bounds::delta_chang(kappa, d)
}

#[pyfunction]
fn delta_chang_refined(kappa: f64, d: u32) -> f64 {
    bounds::delta_chang_refined(kappa, d)
}

#[pyfunction]
fn delta_vin(kappa: f64, d: u32) -> f64 {
    bounds::delta_vin(kappa, d)
}

#[pyfunction]
fn optimal_r_chang(kappa: f64, d: u32) -> u32 {
    bounds::optimal_r_chang(kappa, d)
}

#[pyfunction]
fn optimal_r_vin(kappa: f64, d: u32) -> u32 {
    bounds::optimal_r_vin(kappa, d)
}

/// `(a, m)` with `n = aq + pm`, `0 ≤ a < p`.
#[pyfunction]
fn decompose(n: i64, p: u64, q: u64) -> PyResult<(u64, i64)> {
    let dec = pipeline::decompose(n, p, q, 0).py()?;
    Ok((dec.a, dec.m))
}

#[pyfunction]
fn prime_window(p: u64) -> PyResult<Vec<u64>> {
    pipeline::prime_window(p).py()
}

#[pyfunction]
fn choose_p(q: u64, h: u64, r: u32, d: u32) -> PyResult<u64> {
    pipeline::choose_p(q, h, r, d).py()
}

/// `{"counts": {m: 𝒜(m)}, "s1", "s2", "hp_lt_q", "n"}`.
#[pyfunction]
fn count_profile(py: Python<'_>, n: i64, h: u64, p: u64, q: u64) -> PyResult<Py<pyo3::types::PyDict>> {
    let prof = pipeline::count_profile(n, h, p, q).py()?;
    let dict = pyo3::types::PyDict::new(py);
    let counts: BTreeMap<i64, u64> = prof.counts;
    dict.set_item("counts", counts)?;
    dict.set_item("s1", prof.s1)?;
    dict.set_item("s2", prof.s2)?;
    dict.set_item("hp_lt_q", prof.hp_lt_q)?;
    dict.set_item("n", prof.n)?;
    dict.set_item("primes", prof.primes)?;
    Ok(dict.unbind())
}

/// Vertex numerators `(c_0, …, c_d)` of the `Q^D` grid, lexicographic.
#[pyfunction]
fn grid_vertices(base: u64, d: u32) -> PyResult<Vec<Vec<u64>>> {
    Ok(pipeline::grid_vertices(base, d)
        .py()?
        .into_iter()
        .map(|v| v.numerators().to_vec())
        .collect())
}

#[pyfunction]
#[pyo3(signature = (x, base, d, tau = None))]
fn xi_identity_check(x: Vec<u64>, base: u64, d: u32, tau: Option<u64>) -> PyResult<bool> {
    Ok(pipeline::xi_identity_check(&tuple(x, tau)?, base, d).py()?.passed)
}

/// `{"s4", "s4_dual", "j", "chang_shape", "vin_shape", "chang_ratio", "vin_ratio"}`.
#[pyfunction]
fn s4_empirical(
    py: Python<'_>,
    chi: &PyCharacter,
    r: usize,
    d: u32,
    base: u64,
    tau: u64,
) -> PyResult<Py<pyo3::types::PyDict>> {
    let rep = pipeline::s4_empirical(&chi.inner, r, d, base, tau).py()?;
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("s4", rep.s4)?;
    dict.set_item("s4_dual", rep.s4_dual)?;
    dict.set_item("j", rep.j)?;
    dict.set_item("chang_shape", rep.chang_shape)?;
    dict.set_item("vin_shape", rep.vin_shape)?;
    dict.set_item("chang_ratio", rep.chang_ratio)?;
    dict.set_item("vin_ratio", rep.vin_ratio)?;
    Ok(dict.unbind())
}

type CriterionRow = (u8, String, bool, String, f64);

/// Runs the acceptance suite; one `(id, name, passed, detail, seconds)` per criterion.
#[pyfunction]
#[pyo3(signature = (seed = verify::DEFAULT_SEED, criterion = None))]
fn run_acceptance(py: Python<'_>, seed: u64, criterion: Option<u8>) -> PyResult<Vec<CriterionRow>> {
    let ids: Vec<u8> = match criterion {
        Some(id) => vec![id],
        None => verify::criterion_ids().collect(),
    };
    py.detach(|| {
        ids.into_iter()
            .map(|id| {
                verify::run_criterion(id, seed)
                    .map(|o| (o.id, o.name.to_owned(), o.passed, o.detail, o.elapsed.as_secs_f64()))
                    .ok_or_else(|| PyValueError::new_err(format!("unknown criterion {id}")))
            })
            .collect()
    })
}

#[pymodule]
pub fn burgess(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GuardError", m.py().get_type::<GuardError>())?;
    m.add_class::<PyCharacter>()?;
    m.add_class::<PyBoundReport>()?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(primitive_root, m)?)?;
    m.add_function(wrap_pyfunction!(count_j, m)?)?;
    m.add_function(wrap_pyfunction!(count_bad, m)?)?;
    m.add_function(wrap_pyfunction!(is_bad, m)?)?;
    m.add_function(wrap_pyfunction!(burgess_classical, m)?)?;
    m.add_function(wrap_pyfunction!(enflo_bound, m)?)?;
    m.add_function(wrap_pyfunction!(chang_refined_bound, m)?)?;
    m.add_function(wrap_pyfunction!(vinogradov_bound, m)?)?;
    m.add_function(wrap_pyfunction!(intermediate_bound, m)?)?;
    m.add_function(wrap_pyfunction!(best_bound, m)?)?;
    m.add_function(wrap_pyfunction!(delta_chang, m)?)?;
    m.add_function(wrap_pyfunction!(delta_chang_refined, m)?)?;
    m.add_function(wrap_pyfunction!(delta_vin, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_r_chang, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_r_vin, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(prime_window, m)?)?;
    m.add_function(wrap_pyfunction!(choose_p, m)?)?;
    m.add_function(wrap_pyfunction!(count_profile, m)?)?;
    m.add_function(wrap_pyfunction!(grid_vertices, m)?)?;
    m.add_function(wrap_pyfunction!(xi_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(s4_empirical, m)?)?;
    m.add_function(wrap_pyfunction!(run_acceptance, m)?)?;
    Ok(())
}
