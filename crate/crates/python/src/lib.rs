//! Python bindings: exact scalars, sessions built from JSON configs, toroidal
//! brackets, realized modules and verification reports.

use std::sync::Arc;

use lietorus::grading::EigenspaceDecomposition;
use lietorus::linalg::Matrix;
use lietorus::repmod::{build_realized, iso_check, RealizedModule};
use lietorus::toroidal::ToroidalAlgebra;
use lietorus::verify::{sweep_jacobi, sweep_lietorus, sweep_module, Status, SweepConfig, SweepReport, SweepTarget};
use lietorus::CycScalar;
use lietorus_cli::config::{Session as CliSession, SessionConfig};
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn lib_err(e: lietorus::Error) -> PyErr {
    match e {
        lietorus::Error::DivisionByZero => PyZeroDivisionError::new_err("division by zero"),
        other => err(other),
    }
}

fn render(x: &CycScalar) -> String {
    x.render(x.conductor())
}

fn render_matrix(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows).map(|i| m.row(i).iter().map(render).collect()).collect()
}

/// An exact element of a cyclotomic field.
#[pyclass(name = "Scalar", module = "lietorus", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyScalar(CycScalar);

#[pymethods]
impl PyScalar {
    /// Parses `"p/q"`, `"z^k@N"` or a sum of such terms; bare `z` means `z_conductor`.
    #[new]
    #[pyo3(signature = (text, conductor = 1))]
    fn new(text: &str, conductor: u32) -> PyResult<Self> {
        CycScalar::parse_with(text, conductor).map(PyScalar).map_err(lib_err)
    }

    #[staticmethod]
    fn root_of_unity(n: u32, k: i64) -> Self {
        PyScalar(CycScalar::root_of_unity(n, k))
    }

    #[getter]
    fn conductor(&self) -> u32 {
        self.0.conductor()
    }

    fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    fn __add__(&self, o: &Self) -> Self {
        PyScalar(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &Self) -> Self {
        PyScalar(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &Self) -> Self {
        PyScalar(&self.0 * &o.0)
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        self.0.checked_div(&o.0).map(PyScalar).map_err(lib_err)
    }

    fn __neg__(&self) -> Self {
        PyScalar(-&self.0)
    }

    fn __pow__(&self, e: i64, _modulo: Option<i64>) -> PyResult<Self> {
        self.0.pow(e).map(PyScalar).map_err(lib_err)
    }

    fn __str__(&self) -> String {
        render(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Scalar('{}')", render(&self.0))
    }
}

/// Outcome of a verification sweep.
#[pyclass(name = "Report", module = "lietorus", frozen)]
struct PyReport(SweepReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn all_pass(&self) -> bool {
        self.0.all_pass()
    }

    /// `(check, passed, witness count)` for each check.
    fn checks(&self) -> Vec<(String, bool, usize)> {
        self.0.checks.iter().map(|c| (c.check.clone(), c.status == Status::Pass, c.witnesses.len())).collect()
    }

    fn summary_lines(&self) -> Vec<String> {
        self.0.summary_lines()
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }
}

/// A graded simple Lie algebra together with the session parameters of a JSON config.
#[pyclass(name = "Session", module = "lietorus", frozen)]
struct PySession(Arc<CliSession>);

impl PySession {
    fn dec(&self) -> Arc<EigenspaceDecomposition> {
        self.0.dec.clone()
    }

    fn sweep(&self, target: SweepTarget, window: Option<i64>, phi: Option<(i64, i64)>, samples: Option<usize>, seed: Option<u64>) -> SweepConfig {
        let c = &self.0.config;
        let mut cfg = SweepConfig::new(target, window.unwrap_or(c.window))
            .with_samples(samples.unwrap_or(c.samples))
            .with_seed(seed.unwrap_or(c.seed));
        cfg.phi = match phi {
            Some((a, b)) => (CycScalar::from_int(a), CycScalar::from_int(b)),
            None => self.0.phi.clone(),
        };
        cfg
    }
}

#[pymethods]
impl PySession {
    /// Builds a session from the text of a JSON config.
    #[new]
    fn new(config_json: &str) -> PyResult<Self> {
        let config = SessionConfig::from_json(config_json, "<string>").map_err(err)?;
        CliSession::validate(config, "<string>").map(|s| PySession(Arc::new(s))).map_err(err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let config = SessionConfig::load(std::path::Path::new(path)).map_err(err)?;
        CliSession::validate(config, path).map(|s| PySession(Arc::new(s))).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.dec.n()
    }

    #[getter]
    fn m(&self) -> Vec<u32> {
        self.0.dec.m().to_vec()
    }

    #[getter]
    fn algebra_dim(&self) -> usize {
        self.0.dec.g.dim()
    }

    /// Dimensions of the graded pieces, in group order.
    fn class_dims(&self) -> Vec<(Vec<u32>, usize)> {
        let dec = &self.0.dec;
        dec.group.elements().into_iter().map(|k| {
            let d = dec.class_dim(&k);
            (k, d)
        }).collect()
    }

    fn torus_check(&self) -> PyResult<PyReport> {
        let cfg = self.sweep(SweepTarget::Algebra, None, None, None, None);
        sweep_lietorus(&self.0.dec, &cfg).map(PyReport).map_err(lib_err)
    }

    #[pyo3(signature = (window = None, phi = None, samples = None, seed = None))]
    fn algebra_check(&self, py: Python<'_>, window: Option<i64>, phi: Option<(i64, i64)>, samples: Option<usize>, seed: Option<u64>) -> PyResult<PyReport> {
        let cfg = self.sweep(SweepTarget::Algebra, window, phi, samples, seed);
        let dec = self.dec();
        py.detach(|| sweep_jacobi(dec, &cfg)).map(PyReport).map_err(lib_err)
    }

    #[pyo3(signature = (window = None, phi = None))]
    fn toroidal(&self, window: Option<i64>, phi: Option<(i64, i64)>) -> PyToroidal {
        let cfg = self.sweep(SweepTarget::Algebra, window, phi, None, None);
        PyToroidal(ToroidalAlgebra::new(self.dec(), cfg.phi, cfg.window))
    }

    /// The realized module of the config's `module` section.
    #[pyo3(signature = (window = None))]
    fn module(&self, window: Option<i64>) -> PyResult<PyModuleHandle> {
        let spec = self.0.module_spec_required().map_err(err)?;
        let t = ToroidalAlgebra::new(self.dec(), self.0.phi.clone(), window.unwrap_or(self.0.config.window));
        let m = build_realized(&t, spec).map_err(lib_err)?;
        Ok(PyModuleHandle { module: m, session: self.0.clone() })
    }

    /// `(isomorphic, clauses, certificate)` for the modules of two sessions.
    fn iso_check(&self, other: &PySession) -> PyResult<(bool, [bool; 3], String)> {
        let a = &self.0.module_spec_required().map_err(err)?.params;
        let b = &other.0.module_spec_required().map_err(err)?.params;
        let v = iso_check(&self.0.dec, a, &other.0.dec, b).map_err(lib_err)?;
        Ok((v.isomorphic, v.clauses, v.certificate))
    }
}

/// Brackets of the toroidal algebra on a degree window, on element literals.
#[pyclass(name = "ToroidalAlgebra", module = "lietorus", frozen)]
struct PyToroidal(ToroidalAlgebra);

#[pymethods]
impl PyToroidal {
    fn bracket(&self, x: &str, y: &str) -> PyResult<String> {
        let x = self.0.parse(x).map_err(lib_err)?;
        let y = self.0.parse(y).map_err(lib_err)?;
        self.0.bracket(&x, &y).map(|z| self.0.render(&z)).map_err(lib_err)
    }

    /// Canonical rendering of a literal.
    fn normalize(&self, x: &str) -> PyResult<String> {
        let x = self.0.parse(x).map_err(lib_err)?;
        self.0.normalize(&x).map(|z| self.0.render(&z)).map_err(lib_err)
    }

    /// Literal of `I(u, r)`.
    fn i_element(&self, u: Vec<i64>, r: Vec<i64>) -> PyResult<String> {
        let u: Vec<CycScalar> = u.into_iter().map(CycScalar::from_int).collect();
        self.0.i_element(&u, &r).map(|z| self.0.render(&z)).map_err(lib_err)
    }

    /// The `gl_n` matrix of an element of the I-subalgebra.
    fn pi_map(&self, x: &str) -> PyResult<Vec<Vec<String>>> {
        let x = self.0.parse(x).map_err(lib_err)?;
        self.0.pi_map(&x).map(|m| render_matrix(&m)).map_err(lib_err)
    }

    fn window_basis(&self) -> Vec<String> {
        self.0.window_basis().iter().map(|x| self.0.render(x)).collect()
    }
}

/// A realized level-zero module.
#[pyclass(name = "Module", module = "lietorus", frozen)]
struct PyModuleHandle {
    module: RealizedModule,
    session: Arc<CliSession>,
}

#[pymethods]
impl PyModuleHandle {
    #[getter]
    fn dim_gl_module(&self) -> usize {
        self.module.dim_v1()
    }

    fn piece_dim(&self, k: Vec<i64>) -> usize {
        self.module.piece_dim(&k)
    }

    /// Dimensions of the graded pieces of the loop factor, in group order.
    fn class_dims(&self) -> Vec<usize> {
        self.module.graded.as_ref().map(|g| g.class_dims()).unwrap_or_default()
    }

    /// `(degree, weight coordinates, dimension)` rows.
    fn weight_table(&self) -> Vec<(Vec<i64>, Vec<String>, usize)> {
        self.module.weight_table().into_iter().map(|e| (e.k, e.weight.iter().map(render).collect(), e.dim)).collect()
    }

    fn weight_table_tsv(&self) -> String {
        self.module.weight_table_tsv()
    }

    /// `(degree, dim, expected, interior)` rows.
    fn highest_weight_spaces(&self) -> PyResult<Vec<(Vec<i64>, usize, usize, bool)>> {
        let rows = self.module.highest_weight_space().map_err(lib_err)?;
        Ok(rows.into_iter().map(|e| (e.k, e.dim, e.expected, e.interior)).collect())
    }

    #[pyo3(signature = (samples = None, seed = None))]
    fn check(&self, py: Python<'_>, samples: Option<usize>, seed: Option<u64>) -> PyResult<PyReport> {
        let c = &self.session.config;
        let cfg = SweepConfig::new(SweepTarget::Module, self.module.torus.window.w)
            .with_samples(samples.unwrap_or(c.samples))
            .with_seed(seed.unwrap_or(c.seed));
        py.detach(|| sweep_module(&self.module, &cfg)).map(PyReport).map_err(lib_err)
    }

    /// `(generator, degree, exponent)` for seeded nilpotency samples.
    fn integrability(&self, samples: usize, seed: u64) -> Vec<(String, Vec<i64>, Option<usize>)> {
        self.module.check_integrable(samples, seed).into_iter().map(|s| (s.generator, s.degree, s.exponent)).collect()
    }
}

#[pymodule]
#[pyo3(name = "lietorus")]
fn lietorus_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalar>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PySession>()?;
    m.add_class::<PyToroidal>()?;
    m.add_class::<PyModuleHandle>()?;
    Ok(())
}
