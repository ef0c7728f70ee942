//! Python bindings for the `fanochain` solver.
//!
//! Models are immutable `ChainModel` objects; the free functions mirror the
//! library API and return plain Python containers (lists, dicts, complex)
//! except for discrete states and exceptional points, which get small
//! classes of their own.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fanochain::sweep::DEFAULT_SEED_THRESHOLD;
use fanochain::{ChainVariant, Sheet, SheetedEnergy, SweepParameter};

fn to_py(e: fanochain::Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn parse_sheet(sheet: &str) -> PyResult<Sheet> {
    sheet.parse().map_err(to_py)
}

/// Impurity level coupled to a semi-infinite or infinite chain.
#[pyclass(name = "ChainModel", module = "pyfanochain", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyChainModel {
    inner: fanochain::ChainModel,
}

#[pymethods]
impl PyChainModel {
    /// Semi-infinite chain with the impurity coupled to site `n_d`.
    #[staticmethod]
    #[pyo3(signature = (n_d, e_d, g, v = 1.0, weight = 1.0, e_c = 0.0))]
    fn semi_infinite(n_d: u32, e_d: f64, g: f64, v: f64, weight: f64, e_c: f64) -> PyResult<Self> {
        let inner = fanochain::ChainModel::semi_infinite(n_d, e_d, g)
            .with_v(v)
            .with_transition_weight(weight)
            .with_e_c(e_c);
        Ok(Self {
            inner: inner.validate().map_err(to_py)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (e_d, g, v = 1.0, weight = 1.0, e_c = 0.0))]
    fn infinite(e_d: f64, g: f64, v: f64, weight: f64, e_c: f64) -> PyResult<Self> {
        let inner = fanochain::ChainModel::infinite(e_d, g)
            .with_v(v)
            .with_transition_weight(weight)
            .with_e_c(e_c);
        Ok(Self {
            inner: inner.validate().map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: fanochain::ChainModel::from_json(text).map_err(to_py)?,
        })
    }

    /// Copy with a new level energy.
    fn with_e_d(&self, e_d: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.with_e_d(e_d).validate().map_err(to_py)?,
        })
    }

    fn with_g(&self, g: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.with_g(g).validate().map_err(to_py)?,
        })
    }

    #[getter]
    fn n_d(&self) -> Option<u32> {
        self.inner.n_d()
    }

    #[getter]
    fn infinite_chain(&self) -> bool {
        self.inner.variant == ChainVariant::Infinite
    }

    #[getter]
    fn e_d(&self) -> f64 {
        self.inner.e_d
    }

    #[getter]
    fn g(&self) -> f64 {
        self.inner.g
    }

    #[getter]
    fn v(&self) -> f64 {
        self.inner.v
    }

    #[getter]
    fn weight(&self) -> f64 {
        self.inner.transition_weight
    }

    #[getter]
    fn e_c(&self) -> f64 {
        self.inner.e_c
    }

    fn __repr__(&self) -> String {
        match self.inner.n_d() {
            Some(n) => format!(
                "ChainModel.semi_infinite(n_d={n}, e_d={}, g={}, v={})",
                self.inner.e_d, self.inner.g, self.inner.v
            ),
            None => format!(
                "ChainModel.infinite(e_d={}, g={}, v={})",
                self.inner.e_d, self.inner.g, self.inner.v
            ),
        }
    }
}

/// One eigenvalue of the dispersion relation.
#[pyclass(name = "DiscreteState", module = "pyfanochain", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyDiscreteState {
    inner: fanochain::DiscreteState,
}

#[pymethods]
impl PyDiscreteState {
    #[getter]
    fn z(&self) -> Complex64 {
        self.inner.z.value
    }

    #[getter]
    fn sheet(&self) -> &'static str {
        self.inner.z.sheet.as_str()
    }

    /// `bound`, `virtual`, `resonance`, `anti-resonance` or `bic`.
    #[getter]
    fn class_(&self) -> &'static str {
        self.inner.class.as_str()
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy()
    }

    #[getter]
    fn width(&self) -> f64 {
        self.inner.width()
    }

    #[getter]
    fn norm(&self) -> Complex64 {
        self.inner.norm
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }

    #[getter]
    fn near_degenerate(&self) -> bool {
        self.inner.near_degenerate
    }

    fn __repr__(&self) -> String {
        let z = self.inner.z.value;
        format!(
            "DiscreteState({}, z={}{:+}j, sheet={})",
            self.inner.class.as_str(),
            z.re,
            z.im,
            self.inner.z.sheet.as_str()
        )
    }
}

#[pyclass(
    name = "ExceptionalPoint",
    module = "pyfanochain",
    frozen,
    from_py_object
)]
#[derive(Clone)]
pub struct PyEpResult {
    inner: fanochain::EpResult,
}

#[pymethods]
impl PyEpResult {
    #[getter]
    fn g(&self) -> f64 {
        self.inner.g
    }

    #[getter]
    fn e_d(&self) -> f64 {
        self.inner.e_d
    }

    #[getter]
    fn z(&self) -> Complex64 {
        self.inner.z
    }

    #[getter]
    fn residuals(&self) -> (f64, f64) {
        (self.inner.res_eta, self.inner.res_eta_prime)
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }

    fn __repr__(&self) -> String {
        format!(
            "ExceptionalPoint(g={}, e_d={}, z={}{:+}j)",
            self.inner.g, self.inner.e_d, self.inner.z.re, self.inner.z.im
        )
    }
}

/// Bound states, virtual states, resonances and BICs of `model`.
#[pyfunction]
fn discrete_states(model: &PyChainModel) -> PyResult<Vec<PyDiscreteState>> {
    let states = fanochain::discrete_states(&model.inner).map_err(to_py)?;
    Ok(states
        .into_iter()
        .map(|inner| PyDiscreteState { inner })
        .collect())
}

/// Level energies at which the coupling site decouples from the band.
#[pyfunction]
fn bic_energies(model: &PyChainModel) -> PyResult<Vec<f64>> {
    fanochain::bic_energies(&model.inner).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (model, z, sheet = "I"))]
fn self_energy(model: &PyChainModel, z: Complex64, sheet: &str) -> PyResult<Complex64> {
    let z = SheetedEnergy::new(z, parse_sheet(sheet)?);
    fanochain::self_energy(&model.inner, z).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (model, z, sheet = "I", order = 1))]
fn self_energy_deriv(
    model: &PyChainModel,
    z: Complex64,
    sheet: &str,
    order: u8,
) -> PyResult<Complex64> {
    let z = SheetedEnergy::new(z, parse_sheet(sheet)?);
    fanochain::self_energy_deriv(&model.inner, z, order).map_err(to_py)
}

/// Absorption spectrum on a list of real energies inside the band.
#[pyfunction]
fn green_spectrum(model: &PyChainModel, omega: Vec<f64>) -> PyResult<Vec<f64>> {
    fanochain::green_spectrum(&model.inner, &omega).map_err(to_py)
}

/// Spectrum with its per-resonance Fano decomposition, as a dict.
#[pyfunction]
#[pyo3(signature = (model, omega = None))]
fn decompose<'py>(
    py: Python<'py>,
    model: &PyChainModel,
    omega: Option<Vec<f64>>,
) -> PyResult<Bound<'py, PyDict>> {
    let omega = omega.unwrap_or_else(fanochain::spectrum::default_grid);
    let grid = fanochain::decompose(&model.inner, &omega).map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("omega", &grid.omega)?;
    out.set_item("total", &grid.total)?;
    out.set_item("continuum_residual", &grid.continuum_residual)?;
    out.set_item("near_exceptional_point", grid.near_exceptional_point)?;
    let lines: Vec<(f64, f64)> = grid
        .bound_lines
        .iter()
        .map(|l| (l.energy, l.weight))
        .collect();
    out.set_item("bound_lines", lines)?;
    let mut tracks = Vec::with_capacity(grid.resonances.len());
    for r in &grid.resonances {
        let d = PyDict::new(py);
        d.set_item("label", &r.label)?;
        d.set_item("z", r.z)?;
        d.set_item("norm", r.norm)?;
        d.set_item("degree_of_asymmetry", r.degree_of_asymmetry)?;
        d.set_item("q", r.q)?;
        d.set_item("total", &r.component.total)?;
        d.set_item("symmetric", &r.component.symmetric)?;
        d.set_item("antisymmetric", &r.component.antisymmetric)?;
        tracks.push(d);
    }
    out.set_item("resonances", tracks)?;
    Ok(out)
}

/// Band integral plus line weights; should equal the model's weight.
#[pyfunction]
fn sum_rule(model: &PyChainModel) -> PyResult<(f64, f64)> {
    let s = fanochain::spectrum::sum_rule(&model.inner).map_err(to_py)?;
    Ok((s.band, s.lines))
}

/// Follows each resonance while `parameter` (`"ed"` or `"g"`) runs over
/// `values`. Returns `{label: [(param, z, bic), ...]}`.
#[pyfunction]
#[pyo3(signature = (model, values, parameter = "ed"))]
fn trace<'py>(
    py: Python<'py>,
    model: &PyChainModel,
    values: Vec<f64>,
    parameter: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let parameter: SweepParameter = parameter.parse().map_err(to_py)?;
    let t = fanochain::trace(&model.inner, parameter, &values).map_err(to_py)?;
    let out = PyDict::new(py);
    for b in &t.branches {
        let points: Vec<(f64, Complex64, bool)> =
            b.points.iter().map(|p| (p.param, p.z, p.bic)).collect();
        out.set_item(&b.label, points)?;
    }
    Ok(out)
}

/// Refines a guess `(g, e_d, z)` to a double root.
#[pyfunction]
#[pyo3(signature = (model, g, e_d, z, tol = fanochain::sweep::EP_TOL))]
fn find_ep(model: &PyChainModel, g: f64, e_d: f64, z: Complex64, tol: f64) -> PyResult<PyEpResult> {
    let seed = fanochain::EpSeed {
        g,
        e_d,
        z,
        distance: f64::NAN,
    };
    let inner = fanochain::sweep::find_ep_with(&model.inner, &seed, tol).map_err(to_py)?;
    Ok(PyEpResult { inner })
}

/// Grid scan for near-coalescing resonance pairs, returned as
/// `(g, e_d, z, distance)` seeds for [`find_ep`].
#[pyfunction]
#[pyo3(signature = (model, g_range, ed_range, grid = (31, 41), threshold = DEFAULT_SEED_THRESHOLD))]
fn scan_for_ep_seeds(
    model: &PyChainModel,
    g_range: (f64, f64),
    ed_range: (f64, f64),
    grid: (usize, usize),
    threshold: f64,
) -> PyResult<Vec<(f64, f64, Complex64, f64)>> {
    let seeds = fanochain::scan_for_ep_seeds(&model.inner, g_range, ed_range, grid, threshold)
        .map_err(to_py)?;
    Ok(seeds
        .into_iter()
        .map(|s| (s.g, s.e_d, s.z, s.distance))
        .collect())
}

#[pymodule]
pub fn pyfanochain(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyChainModel>()?;
    m.add_class::<PyDiscreteState>()?;
    m.add_class::<PyEpResult>()?;
    m.add_function(wrap_pyfunction!(discrete_states, m)?)?;
    m.add_function(wrap_pyfunction!(bic_energies, m)?)?;
    m.add_function(wrap_pyfunction!(self_energy, m)?)?;
    m.add_function(wrap_pyfunction!(self_energy_deriv, m)?)?;
    m.add_function(wrap_pyfunction!(green_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(sum_rule, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(find_ep, m)?)?;
    m.add_function(wrap_pyfunction!(scan_for_ep_seeds, m)?)?;
    Ok(())
}
