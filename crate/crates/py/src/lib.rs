//! Python bindings for `gsb-core`.
//!
//! Points of `K` are passed as a list of angles on tori and as a nested 2x2
//! complex list on SU(2). Points of `K_C` are pairs `(x, y)` with `x` in `K`
//! and `y` the Lie algebra coordinates.

use gsb_core::bounds::{lattice_limit_check, smoothness_report, SmoothnessOptions};
use gsb_core::kernels::{k_sobolev_integral, k_sobolev_spectral, k_t, reproduce_check};
use gsb_core::sobolev::{holo_sobolev_norm, sobolev_norm, symbol_positivity_threshold, toeplitz_symbol};
use gsb_core::transform::{
    ct_forward, ct_inverse_integral, ct_inverse_spectral, eval_holo, holo_inner, holo_l2_norm, l2_norm_k,
    InversionOptions,
};
use gsb_core::{CoefVec, GroupElement, GroupSpec, GsbError, IrrepLabel, KernelQuery, LatticePoly, PointKC, QuadSpec, C64};
use nalgebra::{DMatrix, Matrix2};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: GsbError) -> PyErr {
    match e {
        GsbError::InvalidArgument(_)
        | GsbError::InvalidPoint(_)
        | GsbError::LabelMismatch { .. }
        | GsbError::OverflowGuard { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_label(s: &str) -> PyResult<IrrepLabel> {
    s.parse().map_err(to_py)
}

fn k_element(spec: GroupSpec, x: &Bound<'_, PyAny>) -> PyResult<GroupElement> {
    let g = match spec {
        GroupSpec::Torus { .. } => {
            let angles: Vec<f64> = x.extract()?;
            GroupElement::Torus(angles.into_iter().map(|a| C64::new(a, 0.0)).collect())
        }
        GroupSpec::Su2 => {
            let rows: Vec<Vec<C64>> = x.extract()?;
            if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
                return Err(PyValueError::new_err("SU(2) elements are 2x2 nested lists"));
            }
            GroupElement::Su2(Matrix2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1]))
        }
    };
    g.validate(spec).map_err(to_py)?;
    Ok(g)
}

fn point(spec: GroupSpec, x: &Bound<'_, PyAny>, y: Vec<f64>) -> PyResult<PointKC> {
    let p = PointKC {
        x: k_element(spec, x)?,
        y,
    };
    p.validate(spec).map_err(to_py)?;
    Ok(p)
}

/// `(value, stabilized, [(R, value at R)], gap)`.
type InversionTuple = (C64, bool, Vec<(f64, C64)>, f64);

/// A compact group: `"torus:<rank>"` or `"su2"`.
#[pyclass(name = "GroupSpec", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGroupSpec {
    inner: GroupSpec,
}

#[pymethods]
impl PyGroupSpec {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(PyGroupSpec {
            inner: name.parse().map_err(to_py)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn volume(&self) -> f64 {
        self.inner.volume()
    }

    #[getter]
    fn delta_sq(&self) -> f64 {
        self.inner.delta_sq()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("GroupSpec('{}')", self.inner)
    }
}

/// Peter-Weyl coefficients of a function on `K`: `f(x) = Σ tr(π(x) B_π)`.
#[pyclass(name = "CoefVec", from_py_object)]
#[derive(Clone)]
struct PyCoefVec {
    inner: CoefVec,
}

#[pymethods]
impl PyCoefVec {
    /// Builds coefficients from `{label: square nested list of complex}`.
    #[new]
    fn new(group: &PyGroupSpec, blocks: Vec<(String, Vec<Vec<C64>>)>) -> PyResult<Self> {
        let mut f = CoefVec::new(group.inner);
        for (label, rows) in blocks {
            let l = parse_label(&label)?;
            let d = rows.len();
            if rows.iter().any(|r| r.len() != d) {
                return Err(PyValueError::new_err(format!("block for {label} is not square")));
            }
            let b = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
            f.insert(l, b).map_err(to_py)?;
        }
        Ok(PyCoefVec { inner: f })
    }

    #[staticmethod]
    fn character(group: &PyGroupSpec, label: &str) -> PyResult<Self> {
        let inner = CoefVec::character(group.inner, parse_label(label)?).map_err(to_py)?;
        Ok(PyCoefVec { inner })
    }

    /// The function `x ↦ π(x)_{ij}`.
    #[staticmethod]
    fn matrix_entry(group: &PyGroupSpec, label: &str, i: usize, j: usize) -> PyResult<Self> {
        let inner = CoefVec::matrix_entry(group.inner, parse_label(label)?, i, j).map_err(to_py)?;
        Ok(PyCoefVec { inner })
    }

    #[staticmethod]
    fn constant(group: &PyGroupSpec, value: C64) -> Self {
        PyCoefVec {
            inner: CoefVec::constant(group.inner, value),
        }
    }

    #[getter]
    fn group(&self) -> PyGroupSpec {
        PyGroupSpec { inner: self.inner.spec() }
    }

    fn labels(&self) -> Vec<String> {
        self.inner.iter().map(|(l, _)| l.to_string()).collect()
    }

    fn block(&self, label: &str) -> PyResult<Vec<Vec<C64>>> {
        let b = self
            .inner
            .get(&parse_label(label)?)
            .ok_or_else(|| PyValueError::new_err(format!("no block for {label}")))?;
        Ok((0..b.nrows()).map(|i| (0..b.ncols()).map(|j| b[(i, j)]).collect()).collect())
    }

    fn __call__(&self, x: &Bound<'_, PyAny>) -> PyResult<C64> {
        let g = k_element(self.inner.spec(), x)?;
        self.inner.eval(&g).map_err(to_py)
    }

    fn l2_norm(&self) -> f64 {
        l2_norm_k(&self.inner)
    }

    fn inner(&self, other: &PyCoefVec) -> C64 {
        self.inner.inner(&other.inner)
    }

    fn sobolev_norm(&self, n: u32, c: f64) -> f64 {
        sobolev_norm(&self.inner, n, c)
    }

    /// `C_t f` as a holomorphic function on `K_C`.
    fn transform(&self, t: f64) -> PyResult<PyHoloFunc> {
        Ok(PyHoloFunc {
            inner: ct_forward(&self.inner, t).map_err(to_py)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("CoefVec(group='{}', labels={:?})", self.inner.spec(), self.labels())
    }
}

/// A holomorphic function `F = C_t f` on `K_C`.
#[pyclass(name = "HoloFunc", from_py_object)]
#[derive(Clone)]
struct PyHoloFunc {
    inner: gsb_core::HoloFunc,
}

#[pymethods]
impl PyHoloFunc {
    #[getter]
    fn t(&self) -> f64 {
        self.inner.t()
    }

    #[getter]
    fn group(&self) -> PyGroupSpec {
        PyGroupSpec { inner: self.inner.spec() }
    }

    /// `F(x e^{iY})`.
    fn __call__(&self, x: &Bound<'_, PyAny>, y: Vec<f64>) -> PyResult<C64> {
        let p = point(self.inner.spec(), x, y)?;
        eval_holo(&self.inner, &p).map_err(to_py)
    }

    /// `(‖F‖_{L^2(ν_t)}, quadrature gap)`.
    fn l2_norm(&self) -> PyResult<(f64, f64)> {
        let e = holo_l2_norm(&self.inner, &QuadSpec::kspace(self.inner.spec())).map_err(to_py)?;
        Ok((e.value, e.gap))
    }

    fn inner(&self, other: &PyHoloFunc) -> PyResult<(C64, f64)> {
        holo_inner(&self.inner, &other.inner, &QuadSpec::kspace(self.inner.spec())).map_err(to_py)
    }

    fn sobolev_norm(&self, n: u32, c: f64) -> PyResult<(f64, f64)> {
        let e = holo_sobolev_norm(&self.inner, n, c, &QuadSpec::kspace(self.inner.spec())).map_err(to_py)?;
        Ok((e.value, e.gap))
    }

    /// Exact inverse from the damped coefficients.
    fn inverse(&self) -> PyCoefVec {
        PyCoefVec {
            inner: ct_inverse_spectral(&self.inner),
        }
    }

    /// `f(x)` by the truncated integral: `(value, stabilized, [(R, value)], gap)`.
    fn invert_at(&self, x: &Bound<'_, PyAny>) -> PyResult<InversionTuple> {
        let spec = self.inner.spec();
        let g = k_element(spec, x)?;
        let opts = InversionOptions::for_spec(spec, self.inner.t());
        let inv = ct_inverse_integral(&self.inner, &g, &opts).map_err(to_py)?;
        Ok((inv.value, inv.stabilized, inv.trace, inv.gap))
    }

    /// Reproducing identity at `(x, y)`: `(F(g), ∫ k_t(g,h) F(h) dν_t(h), residual)`.
    fn reproduce(&self, x: &Bound<'_, PyAny>, y: Vec<f64>) -> PyResult<(C64, C64, f64)> {
        let p = point(self.inner.spec(), x, y)?;
        let r = reproduce_check(&self.inner, &p, &QuadSpec::kspace(self.inner.spec())).map_err(to_py)?;
        Ok((r.value, r.reproduced, r.residual))
    }

    /// `G_n` at radii 6 and 12 for `n ≤ n_max`: `[(n, change, stable)]`.
    #[pyo3(signature = (n_max=4))]
    fn smoothness(&self, n_max: u32) -> PyResult<Vec<(u32, f64, bool)>> {
        let rep = smoothness_report(&self.inner, n_max, "python", &SmoothnessOptions::default()).map_err(to_py)?;
        Ok(rep.flags.iter().map(|f| (f.n, f.change, f.stable)).collect())
    }
}

/// Reproducing kernel `k_t(g, h)`; points are `(x, y)` pairs.
#[pyfunction]
fn heat_kernel(
    group: &PyGroupSpec,
    t: f64,
    g: (Bound<'_, PyAny>, Vec<f64>),
    h: (Bound<'_, PyAny>, Vec<f64>),
) -> PyResult<C64> {
    let spec = group.inner;
    let (g, h) = (point(spec, &g.0, g.1)?, point(spec, &h.0, h.1)?);
    Ok(k_t(spec, t, &g, &h, 1e-14).map_err(to_py)?.value)
}

/// Sobolev reproducing kernel `k_t^{2n}(g, h)` by the spectral series or the `s`-integral.
#[pyfunction]
#[pyo3(signature = (group, t, n, c, g, h, route="spectral"))]
fn sobolev_kernel(
    group: &PyGroupSpec,
    t: f64,
    n: u32,
    c: f64,
    g: (Bound<'_, PyAny>, Vec<f64>),
    h: (Bound<'_, PyAny>, Vec<f64>),
    route: &str,
) -> PyResult<C64> {
    let spec = group.inner;
    let q = KernelQuery {
        spec,
        g: point(spec, &g.0, g.1)?,
        h: point(spec, &h.0, h.1)?,
        t,
        n,
        c,
    };
    match route {
        "spectral" => Ok(k_sobolev_spectral(&q, 1e-15).map_err(to_py)?.value),
        "integral" => Ok(k_sobolev_integral(&q, &QuadSpec::laguerre()).map_err(to_py)?.value),
        _ => Err(PyValueError::new_err("route must be 'spectral' or 'integral'")),
    }
}

/// Coefficients of the Toeplitz symbol of `(c - Δ)^n` as a polynomial in `|Y|^2`.
#[pyfunction]
fn symbol(group: &PyGroupSpec, t: f64, c: f64, n: u32) -> PyResult<Vec<f64>> {
    Ok(toeplitz_symbol(group.inner, t, c, n).map_err(to_py)?.coefficients)
}

/// Smallest `c` on the grid making the symbol positive, if any.
#[pyfunction]
fn positivity_threshold(group: &PyGroupSpec, t: f64, n: u32, grid: Vec<f64>) -> PyResult<Option<f64>> {
    symbol_positivity_threshold(group.inner, t, n, &grid).map_err(to_py)
}

/// `[(tau, scaled, target, gap)]` for the constant lattice polynomial.
#[pyfunction]
fn lattice_limit(group: &PyGroupSpec, taus: Vec<f64>) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let rows = lattice_limit_check(group.inner, &LatticePoly::one(), &taus).map_err(to_py)?;
    Ok(rows.iter().map(|r| (r.tau, r.scaled, r.target, r.gap)).collect())
}

#[pymodule]
pub fn gsb(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroupSpec>()?;
    m.add_class::<PyCoefVec>()?;
    m.add_class::<PyHoloFunc>()?;
    m.add_function(wrap_pyfunction!(heat_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(sobolev_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(symbol, m)?)?;
    m.add_function(wrap_pyfunction!(positivity_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_limit, m)?)?;
    Ok(())
}
