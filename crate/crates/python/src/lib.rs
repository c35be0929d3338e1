use num_bigint::BigInt;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use dwork_zeta::deformation;
use dwork_zeta::diagonal;
use dwork_zeta::dwork;
use dwork_zeta::fredholm;
use dwork_zeta::oracle;
use dwork_zeta::padic::{self, PadicRing};
use dwork_zeta::poly::Polynomial;
use dwork_zeta::selftest;
use dwork_zeta::zeta::{self, ZetaData};
use dwork_zeta::ZetaError;

fn err(e: ZetaError) -> PyErr {
    match e {
        ZetaError::InvalidArgument(_)
        | ZetaError::InvalidPrime(_)
        | ZetaError::Parse(_)
        | ZetaError::Unsupported(_)
        | ZetaError::Singular(_)
        | ZetaError::NotIntegral(_)
        | ZetaError::Contract(_) => PyValueError::new_err(e.to_string()),
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

/// Element of Z/p^N.
#[pyclass(name = "PadicInt", module = "dwork_zeta_py", from_py_object)]
#[derive(Clone)]
struct PyPadicInt {
    inner: padic::PadicInt,
}

#[pymethods]
impl PyPadicInt {
    #[new]
    fn new(p: u64, precision: u32, value: BigInt) -> PyResult<Self> {
        let ring = PadicRing::new(p, precision).map_err(err)?;
        Ok(PyPadicInt { inner: padic::from_bigint(&ring, &value) })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.ring().p()
    }

    #[getter]
    fn precision(&self) -> u32 {
        self.inner.ring().precision()
    }

    #[getter]
    fn value(&self) -> BigInt {
        BigInt::from(self.inner.residue().clone())
    }

    fn centered_lift(&self) -> BigInt {
        self.inner.centered_lift()
    }

    /// (valuation, is_lower_bound)
    fn valuation(&self) -> (i64, bool) {
        let v = self.inner.valuation();
        (v.value.to_integer(), v.at_least)
    }

    fn inverse(&self) -> Option<Self> {
        self.inner.inverse().map(|inner| PyPadicInt { inner })
    }

    fn __pow__(&self, e: u64, _m: Option<u64>) -> Self {
        PyPadicInt { inner: self.inner.pow(e) }
    }

    fn __add__(&self, o: &Self) -> PyResult<Self> {
        self.inner.try_add(&o.inner).map(|inner| PyPadicInt { inner }).map_err(err)
    }

    fn __sub__(&self, o: &Self) -> PyResult<Self> {
        self.inner.try_sub(&o.inner).map(|inner| PyPadicInt { inner }).map_err(err)
    }

    fn __mul__(&self, o: &Self) -> PyResult<Self> {
        self.inner.try_mul(&o.inner).map(|inner| PyPadicInt { inner }).map_err(err)
    }

    fn __neg__(&self) -> Self {
        PyPadicInt { inner: -&self.inner }
    }

    fn __eq__(&self, o: &Self) -> bool {
        self.inner == o.inner
    }

    fn __repr__(&self) -> String {
        format!("PadicInt({} mod {}^{})", self.inner.residue(), self.p(), self.precision())
    }
}

/// Zeta function Z(T) = P(T)^{±1} / ∏(1 - p^j T)^c.
#[pyclass(name = "Zeta", module = "dwork_zeta_py")]
struct PyZeta {
    inner: ZetaData,
}

#[pymethods]
impl PyZeta {
    #[getter]
    fn p(&self) -> u64 {
        self.inner.p
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn d(&self) -> u32 {
        self.inner.d
    }

    #[getter]
    fn gamma(&self) -> Option<u64> {
        self.inner.gamma
    }

    #[getter]
    fn method(&self) -> String {
        self.inner.method.clone()
    }

    #[getter]
    fn numerator(&self) -> Vec<BigInt> {
        self.inner.numerator.clone()
    }

    #[getter]
    fn numerator_is_inverted(&self) -> bool {
        self.inner.numerator_is_inverted
    }

    #[getter]
    fn denominator_factors(&self) -> Vec<(u32, u32)> {
        self.inner.denominator_factors.clone()
    }

    #[getter]
    fn denominator(&self) -> Vec<BigInt> {
        self.inner.denominator()
    }

    #[getter]
    fn counts(&self) -> Vec<(u32, BigInt)> {
        self.inner.counts.clone()
    }

    fn predicted_count(&self, s: u32) -> PyResult<BigInt> {
        if s == 0 {
            return Err(PyValueError::new_err("s must be positive"));
        }
        Ok(self.inner.predicted_count(s))
    }

    /// Verification report as a JSON string.
    fn verify(&self) -> PyResult<String> {
        let rep = zeta::verify_report(&self.inner).map_err(err)?;
        Ok(serde_json::to_string(&rep).expect("serializable"))
    }

    fn verified(&self) -> PyResult<bool> {
        Ok(zeta::verify_report(&self.inner).map_err(err)?.all_ok())
    }

    fn to_json(&self) -> String {
        self.inner.to_json(serde_json::json!({})).to_string()
    }

    fn __repr__(&self) -> String {
        format!("Zeta(p={}, n={}, method={:?}, numerator={:?})", self.inner.p, self.inner.n, self.inner.method, self.inner.numerator)
    }
}

#[pyfunction]
fn teichmuller(p: u64, precision: u32, a: u64) -> PyResult<PyPadicInt> {
    let ring = PadicRing::new(p, precision).map_err(err)?;
    Ok(PyPadicInt { inner: padic::teichmuller(&ring, a) })
}

/// Γ_p(num/den) by the Roberts sum, or the Morita product when `morita` is set.
#[pyfunction]
#[pyo3(signature = (p, precision, num, den=1, morita=false))]
fn gamma_p(p: u64, precision: u32, num: i64, den: i64, morita: bool) -> PyResult<PyPadicInt> {
    if den == 0 {
        return Err(PyValueError::new_err("zero denominator"));
    }
    let ring = PadicRing::new(p, precision).map_err(err)?;
    let z = num_rational::BigRational::new(num.into(), den.into());
    let inner = if morita {
        dwork::gamma_p_at(&padic::from_rational(&ring, &z).map_err(err)?)
    } else {
        dwork::gamma_p_rational(&ring, &z)
    }
    .map_err(err)?;
    Ok(PyPadicInt { inner })
}

#[pyfunction]
#[pyo3(signature = (poly, p, s=1, nvars=None))]
fn count_points(py: Python<'_>, poly: &str, p: u64, s: u32, nvars: Option<usize>) -> PyResult<u64> {
    let f = Polynomial::parse(poly, p, nvars).map_err(err)?;
    py.detach(|| oracle::count_projective(&f, &oracle::ff_build(p, s)?)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (poly, p, precision, counts=None, nvars=None))]
fn zeta_direct(py: Python<'_>, poly: &str, p: u64, precision: u32, counts: Option<u32>, nvars: Option<usize>) -> PyResult<PyZeta> {
    let f = Polynomial::parse(poly, p, nvars).map_err(err)?;
    let run = py.detach(|| fredholm::zeta_direct(&f, precision, counts)).map_err(err)?;
    Ok(PyZeta { inner: run.zeta })
}

#[pyfunction]
#[pyo3(signature = (p, n, d, precision=None))]
fn zeta_diagonal(py: Python<'_>, p: u64, n: usize, d: u32, precision: Option<u32>) -> PyResult<PyZeta> {
    let inner = py.detach(|| diagonal::diagonal_fermat_zeta(n, d, p, precision)).map_err(err)?;
    Ok(PyZeta { inner })
}

#[pyfunction]
#[pyo3(signature = (p, gamma, n1=None))]
fn zeta_dwork4(py: Python<'_>, p: u64, gamma: u64, n1: Option<u64>) -> PyResult<PyZeta> {
    let inner = py.detach(|| deformation::assemble_p(p, gamma, n1)).map_err(err)?;
    Ok(PyZeta { inner })
}

/// Newton polygon slopes (as "a/b" strings) of an integer polynomial.
#[pyfunction]
fn newton_slopes(p: u64, coeffs: Vec<BigInt>) -> PyResult<Vec<String>> {
    let np = zeta::numerator_newton_polygon(p, &coeffs).map_err(err)?;
    Ok(np.slope_multiset().iter().map(|s| s.to_string()).collect())
}

/// Runs acceptance criteria; returns (id, name, passed, detail) tuples.
#[pyfunction]
#[pyo3(signature = (only=None))]
fn run_selftest(py: Python<'_>, only: Option<Vec<u8>>) -> Vec<(u8, String, bool, String)> {
    let ids = only.unwrap_or_else(|| selftest::CRITERIA.iter().map(|c| c.0).collect());
    py.detach(|| {
        ids.into_iter()
            .map(|id| {
                let o = selftest::run(id);
                (o.id, o.name.to_string(), o.passed, o.detail)
            })
            .collect()
    })
}

#[pymodule]
fn dwork_zeta_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPadicInt>()?;
    m.add_class::<PyZeta>()?;
    m.add_function(wrap_pyfunction!(teichmuller, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_p, m)?)?;
    m.add_function(wrap_pyfunction!(count_points, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_direct, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_diagonal, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_dwork4, m)?)?;
    m.add_function(wrap_pyfunction!(newton_slopes, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    Ok(())
}
