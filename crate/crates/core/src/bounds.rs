//! Gaussian lattice sums over the closed Weyl chamber, their `τ^{r/2}`
//! scaling limit, and the growth functional used to classify smoothness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{GsbError, Result};
use crate::group::{root_data, GroupElement, GroupSpec, C64};
use crate::heat::{character_series, SeriesWeights};
use crate::kernels::{log_envelope_l2, PolarGrid};
use crate::polar::{log_phi, norm, PointKC, OVERFLOW_GUARD};
use crate::quadrature::gauss_legendre;
use crate::sampling::random_k;
use crate::transform::{positive_reps, HoloFunc};

/// Polynomial `P` evaluated at `|γ|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticePoly {
    /// `coefficients[k]` multiplies `x^k`.
    pub coefficients: Vec<f64>,
}

impl LatticePoly {
    pub fn one() -> Self {
        LatticePoly { coefficients: vec![1.0] }
    }

    pub fn new(coefficients: Vec<f64>) -> Self {
        LatticePoly { coefficients }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }

    fn abs_sum(&self) -> f64 {
        self.coefficients.iter().map(|c| c.abs()).sum()
    }
}

/// Lattice points `Γ ∩ C̄` with `|γ| ≤ radius`. Tori use the whole lattice.
pub fn chamber_lattice_points(spec: GroupSpec, radius: f64) -> Vec<Vec<f64>> {
    match spec {
        GroupSpec::Torus { rank } => {
            let step = 2.0 * std::f64::consts::PI;
            let kmax = (radius / step).floor() as i64;
            let mut pts: Vec<Vec<f64>> = vec![Vec::new()];
            for _ in 0..rank {
                pts = pts
                    .into_iter()
                    .flat_map(|p| {
                        (-kmax..=kmax).map(move |k| {
                            let mut q = p.clone();
                            q.push(step * k as f64);
                            q
                        })
                    })
                    .filter(|p| norm(p) <= radius)
                    .collect();
            }
            pts
        }
        GroupSpec::Su2 => {
            let rd = root_data(spec);
            let basis = &rd.lattice_basis[0];
            let len = norm(basis);
            let kmax = (radius / len).floor() as i64;
            (0..=kmax).map(|k| basis.iter().map(|b| b * k as f64).collect()).collect()
        }
    }
}

/// Radius beyond which `P(x) e^{-x^2}` (with `x = |γ|/√τ`) is below `1e-16`
/// of the leading term, accounting for the growth of the point count.
fn cut_scale(p: &LatticePoly, rank: usize) -> f64 {
    let lead = p.eval(0.0).abs().max(1e-300);
    let logs = p.abs_sum().max(1e-300).ln() - lead.ln();
    let k = (p.degree() + rank) as f64;
    let mut x: f64 = 5.0;
    while -x * x + k * (1.0 + x).ln() + logs > (1e-16f64).ln() {
        x += 0.25;
    }
    x
}

/// `Σ_{γ ∈ Γ ∩ C̄} P(|γ|/√τ) e^{-|γ|^2/τ}`.
pub fn lattice_sum(spec: GroupSpec, tau: f64, p: &LatticePoly) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(GsbError::InvalidArgument("tau must be positive".into()));
    }
    let radius = cut_scale(p, spec.rank()) * tau.sqrt();
    Ok(lattice_sum_cut(spec, tau, p, radius))
}

/// [`lattice_sum`] with an explicit cut radius.
pub fn lattice_sum_cut(spec: GroupSpec, tau: f64, p: &LatticePoly, radius: f64) -> f64 {
    let sq = tau.sqrt();
    let mut terms: Vec<f64> = chamber_lattice_points(spec, radius)
        .par_iter()
        .map(|g| {
            let r = norm(g);
            p.eval(r / sq) * (-r * r / tau).exp()
        })
        .collect();
    // small terms first, for a deterministic and accurate sum
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    terms.iter().sum()
}

/// `(1/A) ∫_{C̄} P(|x|) e^{-|x|^2} dx` with `A` the covolume of `Γ`.
pub fn chamber_integral(spec: GroupSpec, p: &LatticePoly) -> f64 {
    let r = spec.rank();
    let rd = root_data(spec);
    // measure of the unit sphere inside the chamber
    let sphere = match spec {
        GroupSpec::Torus { .. } => 2.0 * std::f64::consts::PI.powf(r as f64 / 2.0) / gamma(r as f64 / 2.0),
        GroupSpec::Su2 => 1.0,
    };
    let rule = gauss_legendre(24);
    let (panels, top) = (24, 12.0);
    let h = top / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let a = k as f64 * h;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let rho = a + 0.5 * h * (x + 1.0);
            acc += 0.5 * h * w * p.eval(rho) * (-rho * rho).exp() * rho.powi(r as i32 - 1);
        }
    }
    sphere * acc / rd.lattice_covolume()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeRow {
    pub tau: f64,
    /// `τ^{-r/2}` times the lattice sum.
    pub scaled: f64,
    pub target: f64,
    /// `|scaled - target| / |target|`.
    pub gap: f64,
}

/// Table of the scaled lattice sums against their limit.
pub fn lattice_limit_check(spec: GroupSpec, p: &LatticePoly, taus: &[f64]) -> Result<Vec<LatticeRow>> {
    if taus.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GsbError::InvalidArgument("tau list must be strictly ascending".into()));
    }
    let target = chamber_integral(spec, p);
    let half_rank = spec.rank() as f64 / 2.0;
    taus.iter()
        .map(|&tau| {
            let scaled = lattice_sum(spec, tau, p)? * tau.powf(-half_rank);
            Ok(LatticeRow {
                tau,
                scaled,
                target,
                gap: (scaled - target).abs() / target.abs(),
            })
        })
        .collect()
}

/// Empirical `α_t = sup_τ lattice_sum(τ) / τ^{r/2}` over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaEstimate {
    pub t: f64,
    pub value: f64,
    pub argmax_tau: f64,
    pub tau_grid: Vec<f64>,
}

pub fn alpha_t_estimate(spec: GroupSpec, t: f64, p: &LatticePoly, tau_grid: &[f64]) -> Result<AlphaEstimate> {
    if !(t > 0.0) || tau_grid.is_empty() {
        return Err(GsbError::InvalidArgument("need t > 0 and a nonempty tau grid".into()));
    }
    let half_rank = spec.rank() as f64 / 2.0;
    let mut best = (f64::NEG_INFINITY, tau_grid[0]);
    for &tau in tau_grid {
        let v = lattice_sum(spec, tau, p)? * tau.powf(-half_rank);
        if v > best.0 {
            best = (v, tau);
        }
    }
    Ok(AlphaEstimate {
        t,
        value: best.0,
        argmax_tau: best.1,
        tau_grid: tau_grid.to_vec(),
    })
}

/// One evaluation of the heat-kernel consistency bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConsistencyRow {
    pub tau: f64,
    pub y_norm: f64,
    /// `ρ_{2τ}(g g^*)` for `g = e^{iY}`.
    pub lhs: f64,
    /// `α τ^{(r-d)/2} e^{|δ|^2 τ} e^{|Y|^2/τ} Φ(Y)`.
    pub rhs: f64,
}

/// Compares `ρ_{2τ}(g g^*)` with the lattice-sum bound at `|Y| = r_i`.
pub fn consistency_rows(spec: GroupSpec, alpha: f64, taus: &[f64], radii: &[f64]) -> Result<Vec<ConsistencyRow>> {
    let d = spec.dim() as f64;
    let r = spec.rank() as f64;
    let mut out = Vec::new();
    for &tau in taus {
        for &rad in radii {
            let mut y = vec![0.0; spec.dim()];
            y[spec.dim() - 1] = rad;
            let p = PointKC::positive(spec, y.iter().map(|v| 2.0 * v).collect());
            let lhs = character_series(spec, &SeriesWeights { s: tau, c: 0.0, p: 0 }, &p, 1e-14)?
                .value
                .re;
            let log_rhs = alpha.ln() + 0.5 * (r - d) * tau.ln() + spec.delta_sq() * tau + log_envelope_l2(spec, tau, &y);
            out.push(ConsistencyRow {
                tau,
                y_norm: rad,
                lhs,
                rhs: log_rhs.exp(),
            });
        }
    }
    Ok(out)
}

/// `log |F(x e^{iY})|`, overflow-safe.
fn log_abs_eval(f: &HoloFunc, x: &GroupElement, y: &[f64]) -> Result<f64> {
    let spec = f.spec();
    let reps = positive_reps(spec, f.coefs().iter().map(|(l, _)| l), y, 1.0);
    let top = reps.values().map(|(l, _)| *l).fold(f64::NEG_INFINITY, f64::max);
    let top = if top.is_finite() { top } else { 0.0 };
    let mut acc = C64::new(0.0, 0.0);
    for (l, b) in f.coefs().iter() {
        let (lg, p) = &reps[l];
        let m = crate::group::rep_matrix(spec, l, x)? * p * b;
        acc += m.trace() * (lg - top).exp();
    }
    Ok(top + acc.norm().ln())
}

/// `G_n(F)` on a grid, with the point where the sup is attained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthValue {
    pub value: f64,
    pub log_value: f64,
    pub argmax: Vec<f64>,
}

/// Deterministic `K` samples used by the growth functional: the identity and
/// `count - 1` seeded Haar draws.
pub fn k_samples(spec: GroupSpec, count: usize) -> Vec<GroupElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = vec![GroupElement::identity(spec)];
    out.extend((1..count).map(|_| random_k(spec, &mut rng)));
    out
}

/// `G_n(F) = sup |F(x e^{iY})|^2 (1 + |Y|^2)^{2n} / (Φ(Y) e^{|Y|^2/t})` over the
/// grid in `Y` and the given `K` samples.
pub fn growth_functional(f: &HoloFunc, n: u32, grid: &PolarGrid, xs: &[GroupElement]) -> Result<GrowthValue> {
    let spec = f.spec();
    if grid.radius > OVERFLOW_GUARD {
        return Err(GsbError::OverflowGuard {
            norm: grid.radius,
            guard: OVERFLOW_GUARD,
        });
    }
    let t = f.t();
    let pts = grid.points(spec);
    let vals = pts
        .par_iter()
        .map(|y| {
            let r = norm(y);
            let weight = 2.0 * n as f64 * (r * r).ln_1p() - log_phi(spec, y) - r * r / t;
            let mut best = f64::NEG_INFINITY;
            for x in xs {
                best = best.max(2.0 * log_abs_eval(f, x, y)? + weight);
            }
            Ok(best)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (i, log_value) = vals
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if *v > acc.1 { (i, *v) } else { acc });
    Ok(GrowthValue {
        value: log_value.exp(),
        log_value,
        argmax: pts[i].clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub n: u32,
    pub radius: f64,
    pub value: f64,
    pub argmax_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityFlag {
    pub n: u32,
    pub change: f64,
    pub stable: bool,
}

/// `G_n` for `n = 0..=n_max` at two radii, with the doubling-stability flags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub spec: String,
    pub t: f64,
    pub descriptor: String,
    pub rows: Vec<BoundRow>,
    pub flags: Vec<StabilityFlag>,
}

impl BoundReport {
    pub fn all_stable(&self) -> bool {
        self.flags.iter().all(|f| f.stable)
    }
}

/// Settings of [`smoothness_report`]. The outer grid keeps the radial
/// spacing of the inner one.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessOptions {
    pub radius: f64,
    pub outer_radius: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    pub k_samples: usize,
    /// Relative change allowed between the two radii.
    pub threshold: f64,
}

impl Default for SmoothnessOptions {
    fn default() -> Self {
        SmoothnessOptions {
            radius: 6.0,
            outer_radius: 12.0,
            n_radial: 40,
            n_angular: 16,
            k_samples: 4,
            threshold: 0.1,
        }
    }
}

pub fn smoothness_report(f: &HoloFunc, n_max: u32, descriptor: &str, opts: &SmoothnessOptions) -> Result<BoundReport> {
    let spec = f.spec();
    let xs = k_samples(spec, opts.k_samples);
    let inner = PolarGrid {
        radius: opts.radius,
        n_radial: opts.n_radial,
        n_angular: opts.n_angular,
    };
    let outer = PolarGrid {
        radius: opts.outer_radius,
        n_radial: ((opts.n_radial as f64) * opts.outer_radius / opts.radius).round() as usize,
        n_angular: opts.n_angular,
    };
    let mut rows = Vec::new();
    let mut flags = Vec::new();
    for n in 0..=n_max {
        let a = growth_functional(f, n, &inner, &xs)?;
        let b = growth_functional(f, n, &outer, &xs)?;
        let change = (b.value - a.value).abs() / a.value;
        rows.push(BoundRow {
            n,
            radius: inner.radius,
            value: a.value,
            argmax_norm: norm(&a.argmax),
        });
        rows.push(BoundRow {
            n,
            radius: outer.radius,
            value: b.value,
            argmax_norm: norm(&b.argmax),
        });
        flags.push(StabilityFlag {
            n,
            change,
            stable: change <= opts.threshold,
        });
    }
    Ok(BoundReport {
        spec: spec.to_string(),
        t: f.t(),
        descriptor: descriptor.to_string(),
        rows,
        flags,
    })
}
