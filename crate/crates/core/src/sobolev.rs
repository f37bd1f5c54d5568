//! Sobolev norms on `K` and `K_C`, the Toeplitz symbols of `(c - Δ)^n`, and
//! the first-order symbol of a left-invariant field.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{GsbError, Result};
use crate::group::{lie_rep_matrix, GroupSpec, C64};
use crate::heat::CoefVec;
use crate::polar::norm;
use crate::quadrature::{Estimate, QuadSpec};
use crate::transform::{ct_forward, ct_inverse_spectral, holo_gram, holo_l2_norm, HoloFunc, Provenance};

fn neg_pow(lam: f64, n: u32) -> f64 {
    (-lam).powi(n as i32)
}

/// `Δ^n f`: block `π` is multiplied by `(-λ_π)^n`.
pub fn laplacian_apply(f: &CoefVec, n: u32) -> CoefVec {
    f.scale_blocks(|lam| neg_pow(lam, n))
}

/// `Δ^n F` on a holomorphic function.
///
/// When `F = C_t f` is known, the result is recomputed as `C_t(Δ^n f)`, so
/// that the provenance stays available to the spectral inverse.
pub fn laplacian_apply_holo(f: &HoloFunc, n: u32) -> Result<HoloFunc> {
    match f.provenance() {
        Provenance::Forward { source } => ct_forward(&laplacian_apply(source, n), f.t()),
        Provenance::Supplied => Ok(HoloFunc::with_parts(
            laplacian_apply(f.coefs(), n),
            f.t(),
            Provenance::Supplied,
        )),
    }
}

/// `‖(c - Δ)^n f‖_{L^2(K)}`.
pub fn sobolev_norm(f: &CoefVec, n: u32, c: f64) -> f64 {
    f.scale_blocks(|lam| (c + lam).powi(n as i32))
        .plancherel_norm_sq()
        .sqrt()
}

/// `(c - Δ)^n F`, provenance kept.
pub fn shifted_power(f: &HoloFunc, n: u32, c: f64) -> HoloFunc {
    f.scale_blocks(|lam| (c + lam).powi(n as i32))
}

/// `‖(c - Δ)^n F‖_{L^2(K_C, ν_t)}` by quadrature.
pub fn holo_sobolev_norm(f: &HoloFunc, n: u32, c: f64, quad: &QuadSpec) -> Result<Estimate> {
    if !(c > 0.0) {
        return Err(GsbError::InvalidArgument("c must be positive".into()));
    }
    holo_l2_norm(&shifted_power(f, n, c), quad)
}

/// Real polynomial in `u = |Y|^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyU {
    /// `coefficients[l]` multiplies `u^l`.
    pub coefficients: Vec<f64>,
    pub n: u32,
    pub c: f64,
    pub t: f64,
    #[serde(serialize_with = "display")]
    pub spec: GroupSpec,
}

fn display<S: serde::Serializer>(v: &GroupSpec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl PolyU {
    pub fn eval(&self, u: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    /// Highest power with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.coefficients.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }

    pub fn all_positive(&self) -> bool {
        self.coefficients.iter().all(|c| *c > 0.0)
    }
}

/// Coefficients `C[j][a]` of `φ_n = Σ C[j][a] u^j w^a` with `w = 1/t`.
///
/// One step maps `q` to `c q + ∂_t q + q (-(d/2) w - |δ|^2 + u w^2)`, using
/// `∂_t w^a = -a w^{a+1}`.
pub fn symbol_table(spec: GroupSpec, c: f64, n: u32) -> Vec<Vec<f64>> {
    let n = n as usize;
    let d = spec.dim() as f64;
    let delta_sq = spec.delta_sq();
    let mut q = vec![vec![0.0; 2 * n + 1]; n + 1];
    q[0][0] = 1.0;
    for k in 0..n {
        let mut next = vec![vec![0.0; 2 * n + 1]; n + 1];
        for j in 0..=k {
            for a in 0..=2 * k {
                let v = q[j][a];
                if v == 0.0 {
                    continue;
                }
                next[j][a] += (c - delta_sq) * v;
                next[j][a + 1] += -(a as f64 + 0.5 * d) * v;
                next[j + 1][a + 2] += v;
            }
        }
        q = next;
    }
    q
}

/// `t^{-a}` by repeated multiplication of `1/t`, so results do not depend on
/// how `powi` is lowered.
pub fn inv_pow(t: f64, a: usize) -> f64 {
    let w = 1.0 / t;
    (0..a).fold(1.0, |acc, _| acc * w)
}

/// `φ_n = p_{n,c,t}(|Y|^2)`, the Toeplitz symbol of `(c - Δ)^n`.
pub fn toeplitz_symbol(spec: GroupSpec, t: f64, c: f64, n: u32) -> Result<PolyU> {
    if !(t > 0.0) || !(c > 0.0) {
        return Err(GsbError::InvalidArgument("need t > 0 and c > 0".into()));
    }
    let table = symbol_table(spec, c, n);
    let coefficients = table
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(a, v)| v * inv_pow(t, a))
                .sum()
        })
        .collect();
    Ok(PolyU {
        coefficients,
        n,
        c,
        t,
        spec,
    })
}

/// Smallest `c` in an ascending grid for which every coefficient of `φ_n` is
/// positive, or `None`.
pub fn symbol_positivity_threshold(spec: GroupSpec, t: f64, n: u32, c_grid: &[f64]) -> Result<Option<f64>> {
    if c_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(GsbError::InvalidArgument("c grid must be ascending".into()));
    }
    for &c in c_grid {
        if c > 0.0 && toeplitz_symbol(spec, t, c, n)?.all_positive() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// `∫ conj(F_1) sym(|Y|^2) F_2 ν_t dg`, with its quadrature gap.
pub fn toeplitz_quadratic_form(f1: &HoloFunc, f2: &HoloFunc, sym: &PolyU, quad: &QuadSpec) -> Result<(C64, f64)> {
    let m = |y: &[f64]| {
        let r = norm(y);
        C64::new(sym.eval(r * r), 0.0)
    };
    let (g, gap) = holo_gram(&[f1, f2], Some(&m), quad)?;
    Ok((g[(0, 1)], gap))
}

/// `⟨F_1, (c - Δ)^n F_2⟩_{L^2(ν_t)}`, computed on `K` through the isometry.
pub fn shifted_form_spectral(f1: &HoloFunc, f2: &HoloFunc, n: u32, c: f64) -> C64 {
    let a = ct_inverse_spectral(f1);
    let b = ct_inverse_spectral(f2).scale_blocks(|lam| (c + lam).powi(n as i32));
    a.inner(&b)
}

/// `X_k f` for the left-invariant field `X_k`: block `B` becomes `dπ(X_k) B`.
pub fn left_field_apply(f: &CoefVec, k: usize) -> Result<CoefVec> {
    let spec = f.spec();
    if k >= spec.dim() {
        return Err(GsbError::InvalidArgument(format!("no basis vector X_{k}")));
    }
    let mut v = vec![C64::new(0.0, 0.0); spec.dim()];
    v[k] = C64::new(1.0, 0.0);
    let mut out = CoefVec::new(spec);
    for (l, b) in f.iter() {
        let d: DMatrix<C64> = lie_rep_matrix(spec, l, &v)?;
        out.insert(l.clone(), d * b)?;
    }
    Ok(out)
}

/// `⟨F_1, X_k F_2⟩_{L^2(ν_t)}` via the isometry (`X_k` commutes with the heat operator).
pub fn left_field_form_spectral(f1: &HoloFunc, f2: &HoloFunc, k: usize) -> Result<C64> {
    let a = ct_inverse_spectral(f1);
    let b = left_field_apply(&ct_inverse_spectral(f2), k)?;
    Ok(a.inner(&b))
}

/// `φ_{X_k}(x e^{iY}) = (i/2) Σ_l d_{kl}(Y) ∂ log ν_t / ∂y_l`.
///
/// `∂ log ν_t/∂y_l = y_l h(|Y|)` with `h = (log Φ)'/s - 2/t`, and `d(Y) Y = Y`,
/// so the sum collapses to `y_k h(|Y|)`.
pub fn phi_x(spec: GroupSpec, t: f64, k: usize, y: &[f64]) -> C64 {
    let h = match spec {
        GroupSpec::Torus { .. } => -2.0 / t,
        GroupSpec::Su2 => {
            let s = norm(y);
            // 1/s^2 - coth(s)/s
            let g = if s < 1e-3 {
                -1.0 / 3.0 + s * s / 45.0
            } else {
                1.0 / (s * s) - 1.0 / (s * s.tanh())
            };
            g - 2.0 / t
        }
    };
    C64::new(0.0, 0.5 * y[k] * h)
}

/// `∫ conj(F_1) φ_{X_k} F_2 ν_t dg`.
pub fn left_field_form_symbol(f1: &HoloFunc, f2: &HoloFunc, k: usize, quad: &QuadSpec) -> Result<(C64, f64)> {
    let spec = f1.spec();
    let t = f1.t();
    if k >= spec.dim() {
        return Err(GsbError::InvalidArgument(format!("no basis vector X_{k}")));
    }
    let m = move |y: &[f64]| phi_x(spec, t, k, y);
    let (g, gap) = holo_gram(&[f1, f2], Some(&m), quad)?;
    Ok((g[(0, 1)], gap))
}

/// `(∫ |F|^2 (1 + |Y|^2)^{2n} ν_t dg)^{1/2}`.
pub fn weighted_norm(f: &HoloFunc, n: u32, quad: &QuadSpec) -> Result<Estimate> {
    let m = |y: &[f64]| {
        let r = norm(y);
        C64::new((1.0 + r * r).powi(2 * n as i32), 0.0)
    };
    let (g, gap) = holo_gram(&[f], Some(&m), quad)?;
    Ok(Estimate {
        value: g[(0, 0)].re.max(0.0).sqrt(),
        gap,
    })
}
