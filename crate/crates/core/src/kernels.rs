//! Reproducing kernels of the holomorphic spaces: `k_t(g, h) = ρ_{2t}(g h^*)`
//! and the Sobolev kernels `k_t^{2n} = (c - Δ)^{-2n} ρ_{2t}`, the pointwise
//! envelopes, and the reproducing-property residual.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::error::{GsbError, Result};
use crate::group::{GroupElement, GroupSpec, C64};
use crate::heat::{character_series, CoefVec, SeriesValue, SeriesWeights};
use crate::polar::{log_phi, norm, polar_compose, polar_decompose, PointKC};
use crate::quadrature::{integrate_kspace_scaled, integrate_laguerre, Integral, QuadSpec};
use crate::sobolev::sobolev_norm;
use crate::transform::{ct_inverse_spectral, positive_reps, HoloFunc};

/// Arguments of `k_t^{2n}(g, h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelQuery {
    pub spec: GroupSpec,
    pub g: PointKC,
    pub h: PointKC,
    pub t: f64,
    pub n: u32,
    /// Sobolev shift; only read when `n >= 1`.
    pub c: f64,
}

impl KernelQuery {
    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0) {
            return Err(GsbError::InvalidArgument("t must be positive".into()));
        }
        if self.n >= 1 && !(self.c > self.spec.delta_sq() && self.c > 0.0) {
            return Err(GsbError::InvalidArgument(format!(
                "Sobolev kernels need c > |δ|^2 = {} and c > 0, got c = {}",
                self.spec.delta_sq(),
                self.c
            )));
        }
        self.g.validate(self.spec)?;
        self.h.validate(self.spec)
    }
}

/// Polar form of `g h^*`.
pub fn g_star_h(spec: GroupSpec, g: &PointKC, h: &PointKC) -> Result<PointKC> {
    let gg = polar_compose(spec, g);
    let hh = polar_compose(spec, h);
    let prod = match (&gg, &hh) {
        (GroupElement::Torus(a), GroupElement::Torus(b)) => {
            GroupElement::Torus(a.iter().zip(b).map(|(x, y)| x - y.conj()).collect())
        }
        (GroupElement::Su2(a), GroupElement::Su2(b)) => GroupElement::Su2(a * b.adjoint()),
        _ => return Err(GsbError::InvalidPoint("mismatched points".into())),
    };
    polar_decompose(spec, &prod)
}

/// `k_t(g, h) = ρ_{2t}(g h^*)`.
pub fn k_t(spec: GroupSpec, t: f64, g: &PointKC, h: &PointKC, tol: f64) -> Result<SeriesValue> {
    if !(t > 0.0) {
        return Err(GsbError::InvalidArgument("t must be positive".into()));
    }
    let p = g_star_h(spec, g, h)?;
    character_series(spec, &SeriesWeights { s: t, c: 0.0, p: 0 }, &p, tol)
}

/// `Σ_π (dim π / vol K) e^{-λ_π t} (c + λ_π)^{-2n} χ_π(g h^*)`.
pub fn k_sobolev_spectral(q: &KernelQuery, tol: f64) -> Result<SeriesValue> {
    q.validate()?;
    let p = g_star_h(q.spec, &q.g, &q.h)?;
    character_series(
        q.spec,
        &SeriesWeights {
            s: q.t,
            c: q.c,
            p: 2 * q.n,
        },
        &p,
        tol,
    )
}

/// `(1/(2n-1)!) ∫_0^∞ s^{2n-1} e^{-cs} ρ_{2(t+s)}(g h^*) ds`, by Gauss-Laguerre in `s`.
pub fn k_sobolev_integral(q: &KernelQuery, quad: &QuadSpec) -> Result<Integral> {
    q.validate()?;
    if q.n == 0 {
        return Err(GsbError::InvalidArgument("the s-integral route needs n >= 1".into()));
    }
    let p = g_star_h(q.spec, &q.g, &q.h)?;
    let failed = AtomicBool::new(false);
    let inner = |s: f64| -> C64 {
        let w = SeriesWeights { s: q.t + s, c: 0.0, p: 0 };
        match character_series(q.spec, &w, &p, 1e-15) {
            Ok(v) => v.value,
            Err(_) => {
                failed.store(true, Ordering::Relaxed);
                C64::new(f64::NAN, 0.0)
            }
        }
    };
    let mut res = integrate_laguerre(q.c, q.n as usize, inner, quad)?;
    if failed.load(Ordering::Relaxed) {
        return Err(GsbError::InvalidArgument("heat kernel series failed inside the s-integral".into()));
    }
    let inv_fact = (-ln_gamma(2.0 * q.n as f64)).exp();
    res.value *= inv_fact;
    for v in res.level_values.iter_mut() {
        *v *= inv_fact;
    }
    Ok(res)
}

/// `log(Φ(Y) e^{|Y|^2/t})`.
pub fn log_envelope_l2(spec: GroupSpec, t: f64, y: &[f64]) -> f64 {
    let r = norm(y);
    log_phi(spec, y) + r * r / t
}

/// `Φ(Y) e^{|Y|^2/t}`.
pub fn envelope_l2(spec: GroupSpec, t: f64, y: &[f64]) -> f64 {
    log_envelope_l2(spec, t, y).exp()
}

/// `log(Φ(Y) e^{|Y|^2/t} (1 + |Y|^2)^{-2n})`.
pub fn log_envelope_sobolev(spec: GroupSpec, t: f64, n: u32, y: &[f64]) -> f64 {
    let r = norm(y);
    log_envelope_l2(spec, t, y) - 2.0 * n as f64 * (r * r).ln_1p()
}

pub fn envelope_sobolev(spec: GroupSpec, t: f64, n: u32, y: &[f64]) -> f64 {
    log_envelope_sobolev(spec, t, n, y).exp()
}

/// Residual of the reproducing identity at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReproCheck {
    pub value: C64,
    pub reproduced: C64,
    /// `|F(g) - ∫ k_t(g,h) F(h) ν_t(h) dh| / (1 + |F(g)|)`.
    pub residual: f64,
    pub gap: f64,
}

/// Evaluates `∫ k_t(g, h) F(h) ν_t(h) dh` and compares it with `F(g)`.
///
/// The `K` part of the `h` integral is exact: with `h = x e^{iY}`,
/// `∫_K k_t(g, x e^{iY}) F(x e^{iY}) dx = Σ_π e^{-λ_π t} tr(π(g) π(e^{2iY}) B_π)`.
pub fn reproduce_check(f: &HoloFunc, g: &PointKC, quad: &QuadSpec) -> Result<ReproCheck> {
    let spec = f.spec();
    let t = f.t();
    g.validate(spec)?;
    let ge = polar_compose(spec, g);
    let value = f.eval(&ge)?;
    // tr(π(g) P B) = tr(P · B π(g)), so only B π(g) is kept per irrep
    let terms: Vec<_> = f
        .coefs()
        .iter()
        .map(|(l, b)| {
            let lam = crate::group::eigenvalue_unchecked(l);
            Ok((l.clone(), b * crate::group::rep_matrix(spec, l, &ge)?, lam))
        })
        .collect::<Result<_>>()?;
    // |π(e^{2iY})| grows like e^{2 g |Y|}
    let growth = 2.0 * f.coefs().growth_rate();
    let q = quad.clone().with_growth(quad.growth.max(growth));
    let res = integrate_kspace_scaled(
        spec,
        t,
        1,
        |y| {
            let reps = positive_reps(spec, terms.iter().map(|(l, _, _)| l), y, 2.0);
            let top = reps.values().map(|(l, _)| *l).fold(f64::NEG_INFINITY, f64::max);
            let top = if top.is_finite() { top } else { 0.0 };
            let mut acc = C64::new(0.0, 0.0);
            for (l, bg, lam) in &terms {
                let (lg, p) = &reps[l];
                acc += p.component_mul(&bg.transpose()).sum() * ((lg - top) - lam * t).exp();
            }
            (top, vec![acc])
        },
        &q,
    )?;
    let reproduced = res.values[0];
    Ok(ReproCheck {
        value,
        reproduced,
        residual: (value - reproduced).norm() / (1.0 + value.norm()),
        gap: res.gap,
    })
}

/// `k_t^{2n}(g, g) (1 + |Y|^2)^{2n} / (Φ(Y) e^{|Y|^2/t})` at `g = e^{iY}`.
///
/// `k_t^{2n}(g, g)` only depends on `Y`, since `g g^* = x e^{2iY} x^{-1}`.
pub fn diagonal_ratio(spec: GroupSpec, t: f64, n: u32, c: f64, y: &[f64], tol: f64) -> Result<f64> {
    let p = PointKC::positive(spec, y.iter().map(|v| 2.0 * v).collect());
    let k = character_series(spec, &SeriesWeights { s: t, c, p: 2 * n }, &p, tol)?;
    if !(k.value.re > 0.0) {
        return Err(GsbError::InvalidArgument(format!(
            "diagonal kernel value {} is not positive",
            k.value
        )));
    }
    Ok((k.value.re.ln() - log_envelope_sobolev(spec, t, n, y)).exp())
}

/// Deterministic directions in `k`: `count` angles on the circle, a Fibonacci
/// spiral on the sphere, or `±1` on the line.
pub fn grid_directions(d: usize, count: usize) -> Vec<Vec<f64>> {
    match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let a = golden * k as f64;
                    let mut v = vec![rho * a.cos(), rho * a.sin(), z];
                    v.resize(d, 0.0);
                    v
                })
                .collect()
        }
    }
}

/// Polar grid `{ (radius · i / n_radial) ω_j }` with `i = 0..=n_radial`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarGrid {
    pub radius: f64,
    pub n_radial: usize,
    pub n_angular: usize,
}

impl PolarGrid {
    pub fn points(&self, spec: GroupSpec) -> Vec<Vec<f64>> {
        let dirs = grid_directions(spec.dim(), self.n_angular);
        let mut out = vec![vec![0.0; spec.dim()]];
        for i in 1..=self.n_radial {
            let r = self.radius * i as f64 / self.n_radial as f64;
            for d in &dirs {
                out.push(d.iter().map(|c| c * r).collect());
            }
        }
        out
    }

    pub fn refined(&self) -> PolarGrid {
        PolarGrid {
            radius: self.radius,
            n_radial: 2 * self.n_radial,
            n_angular: 2 * self.n_angular,
        }
    }
}

/// Supremum of [`diagonal_ratio`] over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSweep {
    pub gamma: f64,
    pub argmax: Vec<f64>,
    pub points: usize,
}

pub fn diagonal_sweep(spec: GroupSpec, t: f64, n: u32, c: f64, grid: &PolarGrid, tol: f64) -> Result<DiagonalSweep> {
    let pts = grid.points(spec);
    let vals = pts
        .par_iter()
        .map(|y| diagonal_ratio(spec, t, n, c, y, tol))
        .collect::<Result<Vec<f64>>>()?;
    let (i, gamma) = vals
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if *v > acc.1 { (i, *v) } else { acc });
    Ok(DiagonalSweep {
        gamma,
        argmax: pts[i].clone(),
        points: pts.len(),
    })
}

/// One row of the pointwise bound `|F(g)|^2 ≤ ‖F‖^2 k_t^{2n}(g, g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseRow {
    pub lhs: f64,
    pub rhs: f64,
}

/// Checks the pointwise bound with the exact (spectral) Sobolev norm.
pub fn pointwise_bound(f: &HoloFunc, n: u32, c: f64, points: &[PointKC], tol: f64) -> Result<Vec<PointwiseRow>> {
    let spec = f.spec();
    let src: CoefVec = ct_inverse_spectral(f);
    let norm = sobolev_norm(&src, n, c);
    points
        .par_iter()
        .map(|p| {
            let v = f.eval(&polar_compose(spec, p))?;
            let gg = g_star_h(spec, p, p)?;
            let k = character_series(spec, &SeriesWeights { s: f.t(), c, p: 2 * n }, &gg, tol)?;
            Ok(PointwiseRow {
                lhs: v.norm_sqr(),
                rhs: norm * norm * k.value.re,
            })
        })
        .collect()
}
