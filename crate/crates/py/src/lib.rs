//! Python bindings: `import pynflrc`.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use nflrc::analysis::{self, Options};
use nflrc::code_params::{self, CodeSpec as CoreSpec};
use nflrc::codec::{self, Codeword, MessagePoly};
use nflrc::{prime_tools, wire};

create_exception!(pynflrc, NflrcError, PyException);

fn err(e: nflrc::Error) -> PyErr {
    NflrcError::new_err(e.to_string())
}

/// Number field Q(α) given the lower coefficients of the monic minimal polynomial.
#[pyclass(name = "NumberField", frozen)]
struct PyNumberField(Arc<nflrc::NumberField>);

#[pymethods]
impl PyNumberField {
    #[new]
    fn new(min_poly: Vec<BigInt>) -> PyResult<Self> {
        nflrc::NumberField::new(min_poly).map(|k| Self(Arc::new(k))).map_err(err)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn c_alpha(&self) -> BigInt {
        self.0.c_alpha().clone()
    }

    #[getter]
    fn discriminant(&self) -> BigInt {
        self.0.discriminant().clone()
    }

    /// Norm of Σ coeffs[i] α^i.
    fn norm(&self, coeffs: Vec<BigInt>) -> PyResult<BigInt> {
        Ok(self.0.element(coeffs).map_err(err)?.norm())
    }

    /// `count` totally split primes from `start`, as `(p, roots)` pairs.
    #[pyo3(signature = (count, start = 2))]
    fn split_primes(&self, count: usize, start: u64) -> PyResult<Vec<(u64, Vec<u64>)>> {
        let found = prime_tools::next_split_primes(&self.0, count, start).map_err(err)?;
        Ok(found.into_iter().map(|sp| (sp.p, sp.roots)).collect())
    }

    fn __repr__(&self) -> String {
        format!("NumberField({})", self.0)
    }
}

#[pyclass(name = "CodeSpec", frozen)]
struct PyCodeSpec(CoreSpec);

#[pymethods]
impl PyCodeSpec {
    #[new]
    #[pyo3(signature = (field, r, s, radix, primes))]
    fn new(field: &PyNumberField, r: u32, s: u32, radix: BigUint, primes: Vec<u64>) -> PyResult<Self> {
        CoreSpec::from_primes(Arc::clone(&field.0), r, s, radix, &primes)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text)
            .map(Self)
            .map_err(|e| NflrcError::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.0).expect("spec serializes")
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> Option<usize> {
        self.0.m()
    }

    #[getter]
    fn distance_bound(&self) -> Option<usize> {
        self.0.dist_lb()
    }

    #[getter]
    fn is_good(&self) -> bool {
        self.0.is_good()
    }

    #[getter]
    fn rate(&self) -> f64 {
        code_params::rate(&self.0)
    }

    #[getter]
    fn size(&self) -> BigUint {
        self.0.size()
    }

    #[getter]
    fn capacity_bytes(&self) -> usize {
        codec::capacity_bytes(&self.0)
    }

    fn __repr__(&self) -> String {
        let ps: Vec<String> = self.0.moduli().iter().map(u64::to_string).collect();
        format!(
            "CodeSpec(r={}, s={}, M={}, primes=[{}])",
            self.0.r(),
            self.0.s(),
            self.0.radix(),
            ps.join(", ")
        )
    }
}

/// Symbols of the codeword for message number `index`, one list per group.
#[pyfunction]
fn encode(spec: &PyCodeSpec, index: BigUint) -> PyResult<Vec<Vec<u64>>> {
    let msg = MessagePoly::from_index(&spec.0, &index).map_err(err)?;
    Ok(codec::encode(&spec.0, &msg).symbols().to_vec())
}

fn codeword(spec: &CoreSpec, symbols: Vec<Vec<Option<u64>>>) -> PyResult<Codeword> {
    let mask = symbols.iter().map(|g| g.iter().map(Option::is_some).collect()).collect();
    let values = symbols
        .into_iter()
        .map(|g| g.into_iter().map(|v| v.unwrap_or(0)).collect())
        .collect();
    Codeword::with_mask(spec.moduli(), values, mask).map_err(err)
}

/// Message number from a codeword; erased symbols are `None`.
#[pyfunction]
fn decode(spec: &PyCodeSpec, symbols: Vec<Vec<Option<u64>>>) -> PyResult<BigUint> {
    let cw = codeword(&spec.0, symbols)?;
    let msg = codec::global_decode(&spec.0, &cw).map_err(err)?;
    Ok(msg.index(spec.0.radix()))
}

/// Recover one symbol from the rest of its group.
#[pyfunction]
fn local_recover(spec: &PyCodeSpec, symbols: Vec<Vec<Option<u64>>>, group: usize, slot: usize) -> PyResult<u64> {
    let cw = codeword(&spec.0, symbols)?;
    codec::local_recover(&spec.0, &cw, group, slot).map_err(err)
}

/// Encode bytes into the binary record format.
#[pyfunction]
fn encode_bytes<'py>(py: Python<'py>, spec: &PyCodeSpec, data: &[u8]) -> PyResult<Bound<'py, PyBytes>> {
    let chunk = codec::capacity_bytes(&spec.0).max(1);
    let msgs = if data.is_empty() {
        vec![codec::msg_from_bytes(&spec.0, &[]).map_err(err)?]
    } else {
        data.chunks(chunk)
            .map(|c| codec::msg_from_bytes(&spec.0, c))
            .collect::<nflrc::Result<_>>()
            .map_err(err)?
    };
    let bytes = wire::to_bytes(&codec::encode_many(&spec.0, &msgs)).map_err(err)?;
    Ok(PyBytes::new(py, &bytes))
}

/// Inverse of `encode_bytes`; tolerates erasures the decoder can handle.
#[pyfunction]
fn decode_bytes<'py>(py: Python<'py>, spec: &PyCodeSpec, records: &[u8]) -> PyResult<Bound<'py, PyBytes>> {
    let mut out = Vec::new();
    for cw in wire::from_bytes(records).map_err(err)? {
        let msg = codec::global_decode(&spec.0, &cw).map_err(err)?;
        out.extend(codec::msg_to_bytes(&spec.0, &msg).map_err(err)?);
    }
    Ok(PyBytes::new(py, &out))
}

/// Exhaustive minimum distance; returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (spec, threads = 0, force = false))]
fn analyze(py: Python<'_>, spec: &PyCodeSpec, threads: usize, force: bool) -> PyResult<String> {
    let opts = Options { threads, force };
    let rep = py
        .detach(|| analysis::brute_min_distance(&spec.0, opts))
        .map_err(err)?;
    Ok(rep.to_json())
}

#[pymodule]
fn pynflrc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNumberField>()?;
    m.add_class::<PyCodeSpec>()?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(local_recover, m)?)?;
    m.add_function(wrap_pyfunction!(encode_bytes, m)?)?;
    m.add_function(wrap_pyfunction!(decode_bytes, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add("NflrcError", m.py().get_type::<NflrcError>())?;
    Ok(())
}
