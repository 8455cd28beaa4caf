//! Python bindings: R-matrices, Zhukovski points and the verification suites.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use slsq::halg::atypical_rep;
use slsq::rmatrix::{self, RMatrix};
use slsq::suites::{self, SuiteConfig};
use slsq::zparam::{self, SqrtBranches, ZBranch};
use slsq::{RepLabels, SuperMatrix};

type Labels = (Complex64, Complex64, Complex64, Complex64);
type Matrix = Vec<Vec<Complex64>>;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn labels((gamma, nu, a1, a2): Labels) -> PyResult<RepLabels> {
    RepLabels::new(gamma, nu, a1, a2).map_err(err)
}

fn rows(m: &SuperMatrix) -> Matrix {
    let d = m.data();
    (0..d.nrows()).map(|i| (0..d.ncols()).map(|j| d[(i, j)]).collect()).collect()
}

fn r_rows(r: slsq::Result<RMatrix>) -> PyResult<Matrix> {
    r.map(|r| rows(&r.entries)).map_err(err)
}

/// Trigonometric R-matrix at `(theta1, theta2, lam)` as nested rows.
#[pyfunction]
fn r_trig(theta1: f64, theta2: f64, lam: f64) -> Matrix {
    rows(&rmatrix::r_trig(theta1, theta2, lam).entries)
}

/// Closed-form R-matrix for labels `(gamma, nu, alpha1, alpha2)`.
#[pyfunction]
fn r_closed(a: Labels, b: Labels) -> PyResult<Matrix> {
    r_rows(rmatrix::r_closed(&labels(a)?, &labels(b)?))
}

/// R-matrix from the nullspace of the intertwining equations, normalized to `r11 = 1`.
#[pyfunction]
fn r_solve(a: Labels, b: Labels) -> PyResult<Matrix> {
    r_rows(rmatrix::r_solve(&atypical_rep(&labels(a)?), &atypical_rep(&labels(b)?)))
}

#[pyfunction]
fn ybe_residual(a: Labels, b: Labels, c: Labels) -> PyResult<f64> {
    rmatrix::ybe_residual([&labels(a)?, &labels(b)?, &labels(c)?]).map_err(err)
}

/// `(x+, x-)` on the mass shell.
#[pyfunction]
#[pyo3(signature = (p, m, h, inner=false))]
fn zhukovski(p: Complex64, m: Complex64, h: Complex64, inner: bool) -> PyResult<(Complex64, Complex64)> {
    let branch = if inner { ZBranch::Inner } else { ZBranch::Outer };
    let zp = zparam::zhukovski_solve(p, m, h, branch).map_err(err)?;
    Ok((zp.xplus, zp.xminus))
}

/// Module labels `(gamma, nu, alpha1, alpha2)` of a left- or right-moving magnon.
#[pyfunction]
#[pyo3(signature = (p, m, h, moving="left"))]
fn magnon_labels(p: Complex64, m: Complex64, h: Complex64, moving: &str) -> PyResult<Labels> {
    let zp = zparam::zhukovski_solve(p, m, h, ZBranch::Outer).map_err(err)?;
    let ml = match moving {
        "left" => zparam::left_labels(&zp, SqrtBranches::default()),
        "right" => zparam::right_labels(&zp, SqrtBranches::default()),
        other => return Err(PyValueError::new_err(format!("moving must be 'left' or 'right', got {other:?}"))),
    }
    .map_err(err)?;
    let l = ml.labels;
    Ok((l.gamma, l.nu, l.alpha1, l.alpha2))
}

/// `(H, M)` on the massless slice.
#[pyfunction]
fn dispersion(theta: f64, lam: f64, h: f64) -> (f64, Complex64) {
    zparam::dispersion(theta, lam, h)
}

/// Runs a verification suite and returns its report as JSON.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (suite, samples=20, seed=0, tolerance=None, levels=8, order=4, offshell=false))]
fn verify(
    py: Python<'_>,
    suite: &str,
    samples: usize,
    seed: u64,
    tolerance: Option<f64>,
    levels: u32,
    order: usize,
    offshell: bool,
) -> PyResult<String> {
    let cfg = SuiteConfig { samples, seed, tolerance, levels, order, offshell };
    let report = py.detach(|| suites::run_suite(suite, &cfg)).map_err(err)?;
    serde_json::to_string(&report).map_err(err)
}

#[pymodule]
fn slsq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(r_trig, m)?)?;
    m.add_function(wrap_pyfunction!(r_closed, m)?)?;
    m.add_function(wrap_pyfunction!(r_solve, m)?)?;
    m.add_function(wrap_pyfunction!(ybe_residual, m)?)?;
    m.add_function(wrap_pyfunction!(zhukovski, m)?)?;
    m.add_function(wrap_pyfunction!(magnon_labels, m)?)?;
    m.add_function(wrap_pyfunction!(dispersion, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("SUITES", suites::SUITES.to_vec())?;
    Ok(())
}
