//! Python bindings. Exact rationals and dyadics cross as strings like `"3/8"`.

use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

use tiling_owf::compile::{compile_to_tiles, CompiledReduction};
use tiling_owf::dist::{self, Measure, RoundedDistribution};
use tiling_owf::gf2::{FieldElement, ReductionPolynomial};
use tiling_owf::owf;
use tiling_owf::tiling::{self, SweepOrder};
use tiling_owf::tm::{self, library};
use tiling_owf::Bits;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A tile set with named tiles.
#[pyclass(name = "TileSet", frozen)]
struct PyTileSet(tiling::TileSet);

#[pymethods]
impl PyTileSet {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        tiling::TileSet::parse(text).map(Self).map_err(err)
    }

    /// The four-tile example set, optionally with the fifth tile.
    #[staticmethod]
    #[pyo3(signature = (with_fifth = false))]
    fn example(with_fifth: bool) -> Self {
        Self(tiling::example_tiles(with_fifth))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    /// Expand a top line such as `"T1 T2"` and return the bottom line.
    fn expand(&self, top: &str) -> PyResult<String> {
        let line = self.0.parse_line(top).map_err(err)?;
        let (bottom, _) = tiling::tiling_expansion(&line, &self.0).map_err(err)?;
        Ok(self.0.format_line(&bottom))
    }

    /// Expanded board as rows of tile names, `None` for empty cells.
    fn board(&self, top: &str) -> PyResult<Vec<Vec<Option<String>>>> {
        let line = self.0.parse_line(top).map_err(err)?;
        let b = tiling::expand(&tiling::board_from_top(&line, &self.0).map_err(err)?, &self.0);
        Ok((0..b.side())
            .map(|r| (0..b.side()).map(|c| b.get(r, c).map(|t| self.0.tile_name(t))).collect())
            .collect())
    }

    /// Binary instance encoding as a `0`/`1` string.
    fn encode(&self, top: &str) -> PyResult<String> {
        let line = self.0.parse_line(top).map_err(err)?;
        Ok(tiling::encode_instance(&line, &self.0).map_err(err)?.to_string())
    }
}

/// A single-tape machine.
#[pyclass(name = "Machine", frozen)]
struct PyMachine(tm::Machine);

#[pymethods]
impl PyMachine {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        tm::Machine::parse(text).map(Self).map_err(err)
    }

    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        library::by_name(name).map(Self).ok_or_else(|| err(format!("unknown machine {name}")))
    }

    fn run(&self, input: &str, budget: usize) -> PyResult<String> {
        let w = self.0.parse_word(input).map_err(err)?;
        Ok(self.0.format_word(&tm::tm_run(&self.0, &w, budget).map_err(err)?))
    }

    fn force_length(&self) -> Self {
        Self(tm::force_length(&self.0))
    }

    fn compile(&self) -> PyResult<PyReduction> {
        compile_to_tiles(&self.0).map(PyReduction).map_err(err)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

/// A machine compiled to tiles.
#[pyclass(name = "Reduction", frozen)]
struct PyReduction(CompiledReduction);

#[pymethods]
impl PyReduction {
    fn tile_count(&self) -> usize {
        self.0.tiles().len()
    }

    /// Expand the encoded input on a square of side `width` and decode the
    /// bottom row.
    fn run(&self, input: &str, width: usize) -> PyResult<String> {
        let m = self.0.machine();
        let w = m.parse_word(input).map_err(err)?;
        let ex = self.0.expand(&w, width, SweepOrder::RowMajor).map_err(err)?;
        let out = self.0.decode(&ex.board.row(width - 1)).map_err(err)?;
        Ok(m.format_word(&out))
    }
}

#[pyfunction]
fn gf2_mul(n: u32, a: u64, b: u64) -> PyResult<u64> {
    let x = FieldElement::new(n, a).map_err(err)?;
    let y = FieldElement::new(n, b).map_err(err)?;
    Ok(x.mul(&y).map_err(err)?.value())
}

#[pyfunction]
fn gf2_inv(n: u32, a: u64) -> PyResult<u64> {
    Ok(FieldElement::new(n, a).map_err(err)?.inv().map_err(err)?.value())
}

#[pyfunction]
fn gf2_modulus(n: u32) -> PyResult<String> {
    Ok(ReductionPolynomial::for_width(n).map_err(err)?.to_string())
}

/// `(histogram, mean_siblings)` for a named candidate function on `n` bits.
#[pyfunction]
fn sibling_stats(name: &str, n: u32) -> PyResult<(Vec<(u64, u64)>, String)> {
    let f = owf::CandidateFunction::named(name, n).map_err(err)?;
    let s = owf::sibling_stats(&f).map_err(err)?;
    Ok((s.histogram.into_iter().collect(), s.mean_siblings.to_string()))
}

/// A finite probability measure on `{0..N}`.
#[pyclass(name = "Measure", frozen)]
struct PyMeasure(Measure);

#[pymethods]
impl PyMeasure {
    #[new]
    fn new(densities: Vec<String>) -> PyResult<Self> {
        let d = densities
            .iter()
            .map(|s| dist::parse_rational(s).ok_or_else(|| err(format!("bad rational {s}"))))
            .collect::<PyResult<Vec<_>>>()?;
        Measure::new(d).map(Self).map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Measure::parse(text).map(Self).map_err(err)
    }

    #[staticmethod]
    fn uniform(size: usize) -> PyResult<Self> {
        Measure::uniform(size).map(Self).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.size()
    }

    fn density(&self, x: usize) -> PyResult<String> {
        if x >= self.0.size() {
            return Err(PyIndexError::new_err(x));
        }
        Ok(self.0.density(x).to_string())
    }

    fn round(&self) -> PyResult<PyRounded> {
        dist::perfect_round(&self.0).map(PyRounded).map_err(err)
    }
}

/// A perfectly rounded distribution.
#[pyclass(name = "Rounded", frozen)]
struct PyRounded(RoundedDistribution);

#[pymethods]
impl PyRounded {
    /// Interior cumulative values.
    fn values(&self) -> Vec<String> {
        self.0.values().iter().map(|v| v.to_string()).collect()
    }

    fn ell(&self, x: usize) -> PyResult<u32> {
        self.0.ell(x).map_err(err)
    }

    /// Violations against `measure`; empty when perfectly rounded.
    fn check(&self, measure: &PyMeasure) -> Vec<String> {
        dist::check_perfectly_rounded(&self.0, &measure.0)
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect()
    }

    fn encode(&self, x: usize) -> PyResult<String> {
        Ok(dist::m_encode(&self.0, x).map_err(err)?.to_string())
    }

    fn decode(&self, code: &str) -> PyResult<usize> {
        let b = Bits::parse(code).ok_or_else(|| err(format!("bad bit string {code}")))?;
        dist::m_decode(&self.0, &b).map_err(err)
    }
}

#[pymodule]
fn tiling_owf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTileSet>()?;
    m.add_class::<PyMachine>()?;
    m.add_class::<PyReduction>()?;
    m.add_class::<PyMeasure>()?;
    m.add_class::<PyRounded>()?;
    m.add_function(wrap_pyfunction!(gf2_mul, m)?)?;
    m.add_function(wrap_pyfunction!(gf2_inv, m)?)?;
    m.add_function(wrap_pyfunction!(gf2_modulus, m)?)?;
    m.add_function(wrap_pyfunction!(sibling_stats, m)?)?;
    Ok(())
}
