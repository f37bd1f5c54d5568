//! Quadrature rules and the shared integrators over `k`, over `K` and over
//! the half line.
//!
//! Every integral is computed at each refinement level of its [`QuadSpec`];
//! the value of the top level is returned together with the relative gap to
//! the level below it.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{GsbError, Result};
use crate::group::{GroupElement, GroupSpec, Mat2, C64};
use crate::heat::log_c_t;
use crate::polar::{log_phi, OVERFLOW_GUARD};

/// A one-dimensional rule: nodes and positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum RuleKey {
    Legendre(usize),
    Hermite(usize),
    Laguerre(usize, u64),
}

fn cached(key: RuleKey, build: impl FnOnce() -> Rule) -> Arc<Rule> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<Rule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&key) {
        return r.clone();
    }
    let rule = Arc::new(build());
    cache.lock().unwrap().insert(key, rule.clone());
    rule
}

/// Gauss-Legendre on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Arc<Rule> {
    assert!(n >= 1);
    cached(RuleKey::Legendre(n), || {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let p = if n == 1 { x } else { p1 };
                let pm1 = if n == 1 { 1.0 } else { p0 };
                dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            if n == 1 {
                dp = 1.0;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Rule { nodes, weights }
    })
}

/// Golub-Welsch: nodes and weights from the Jacobi matrix of a weight with mass `mu0`.
fn golub_welsch(diag: &[f64], off: &[f64], log_mu0: f64) -> Rule {
    let n = diag.len();
    let mut j = DMatrix::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = diag[i];
        if i + 1 < n {
            j[(i, i + 1)] = off[i];
            j[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], (log_mu0 + 2.0 * v0.abs().ln()).exp())
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Gauss-Hermite for the weight `e^{-x^2}` on the real line.
pub fn gauss_hermite(n: usize) -> Arc<Rule> {
    assert!(n >= 1);
    cached(RuleKey::Hermite(n), || {
        let diag = vec![0.0; n];
        let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let mut rule = golub_welsch(&diag, &off, 0.5 * PI.ln());
        // polish with Newton on the orthonormal recurrence; Christoffel weights
        // keep full relative accuracy at the outer nodes
        for (x, w) in rule.nodes.iter_mut().zip(rule.weights.iter_mut()) {
            for _ in 0..3 {
                let (p, pm1, _) = hermite_orthonormal(n, *x);
                let dp = (2.0 * n as f64).sqrt() * pm1;
                *x -= p / dp;
            }
            *w = 1.0 / hermite_orthonormal(n, *x).2;
        }
        // the eigen-solver leaves the symmetry slightly broken; restore it
        for i in 0..n / 2 {
            let x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
            let w = 0.5 * (rule.weights[n - 1 - i] + rule.weights[i]);
            rule.nodes[i] = -x;
            rule.nodes[n - 1 - i] = x;
            rule.weights[i] = w;
            rule.weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            rule.nodes[n / 2] = 0.0;
        }
        rule
    })
}

/// `(p_n(x), p_{n-1}(x), Σ_{k<n} p_k(x)^2)` for the orthonormal Hermite polynomials.
fn hermite_orthonormal(n: usize, x: f64) -> (f64, f64, f64) {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    let mut sq = 0.0;
    for k in 0..n {
        sq += cur * cur;
        let next = (2.0 / (k as f64 + 1.0)).sqrt() * x * cur - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev, sq)
}

/// Generalized Gauss-Laguerre for the weight `x^alpha e^{-x}` on `(0, ∞)`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Arc<Rule> {
    assert!(n >= 1 && alpha > -1.0);
    cached(RuleKey::Laguerre(n, alpha.to_bits()), || {
        let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
        let off: Vec<f64> = (1..n).map(|k| (k as f64 * (k as f64 + alpha)).sqrt()).collect();
        golub_welsch(&diag, &off, ln_gamma(alpha + 1.0))
    })
}

/// Which product rule an integral uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Tensor Gauss-Hermite over `k`; level = nodes per axis.
    TensorHermite,
    /// Composite Gauss-Legendre in `|Y|` times a product rule on the sphere;
    /// level = radial nodes (a multiple of 16).
    RadialAngular,
    /// Trapezoid rule on the torus `K`; level = nodes per axis.
    TrigExact,
    /// Generalized Gauss-Laguerre on the half line; level = nodes.
    Laguerre,
}

/// Quadrature configuration shared by all integrals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub scheme: Scheme,
    pub levels: Vec<usize>,
    /// Truncation radius in `k`; `None` picks one from `t` and `growth`.
    pub radius: Option<f64>,
    /// Exponential growth rate in `|Y|` of the integrand (before the Gaussian weight).
    pub growth: f64,
    /// Relative agreement required between the top two levels.
    pub tolerance: f64,
}

impl QuadSpec {
    /// Defaults for integrals over `k` with weight `ν_t`.
    pub fn kspace(spec: GroupSpec) -> Self {
        match spec {
            GroupSpec::Torus { .. } => QuadSpec {
                scheme: Scheme::TensorHermite,
                levels: vec![96, 128],
                radius: None,
                growth: 0.0,
                tolerance: 1e-9,
            },
            GroupSpec::Su2 => QuadSpec {
                scheme: Scheme::RadialAngular,
                levels: vec![64, 96],
                radius: None,
                growth: 0.0,
                tolerance: 1e-6,
            },
        }
    }

    pub fn laguerre() -> Self {
        QuadSpec {
            scheme: Scheme::Laguerre,
            levels: vec![16, 32, 64],
            radius: None,
            growth: 0.0,
            tolerance: 1e-8,
        }
    }

    pub fn with_growth(mut self, growth: f64) -> Self {
        self.growth = growth;
        self
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = Some(radius);
        self
    }

    pub fn with_levels(mut self, levels: Vec<usize>) -> Self {
        self.levels = levels;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.len() < 2 {
            return Err(GsbError::InvalidArgument("quadrature needs at least two levels".into()));
        }
        if self.levels.contains(&0) {
            return Err(GsbError::InvalidArgument("quadrature levels must be positive".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(GsbError::InvalidArgument("quadrature tolerance must be positive".into()));
        }
        if let Some(r) = self.radius {
            if !(r > 0.0 && r <= OVERFLOW_GUARD) {
                return Err(GsbError::InvalidArgument(format!(
                    "quadrature radius must lie in (0, {OVERFLOW_GUARD}]"
                )));
            }
        }
        if self.scheme == Scheme::RadialAngular && self.levels.iter().any(|l| l % 16 != 0) {
            return Err(GsbError::InvalidArgument("radial levels must be multiples of 16".into()));
        }
        Ok(())
    }

    fn resolved_radius(&self, spec: GroupSpec, t: f64) -> f64 {
        self.radius.unwrap_or_else(|| {
            let g = self.growth + if spec.is_torus() { 0.0 } else { 1.0 };
            (0.5 * g * t + 8.0 * t.sqrt()).min(OVERFLOW_GUARD)
        })
    }
}

/// A real quantity computed by quadrature, with its inter-level gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub gap: f64,
}

/// Result of a multi-level integral.
#[derive(Debug, Clone, PartialEq)]
pub struct Integral {
    pub value: C64,
    /// `|top - previous| / ∫|f|` between the top two levels.
    pub gap: f64,
    pub level_values: Vec<C64>,
    pub converged: bool,
    pub tolerance: f64,
}

impl Integral {
    /// The value, or a [`GsbError::QuadratureGap`] when levels disagree.
    pub fn require(&self) -> Result<C64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(GsbError::QuadratureGap {
                gap: self.gap,
                tolerance: self.tolerance,
                levels: self.level_values.iter().map(|v| v.re).collect(),
            })
        }
    }
}

/// Vector-valued version of [`Integral`].
#[derive(Debug, Clone, PartialEq)]
pub struct VecIntegral {
    pub values: Vec<C64>,
    pub gap: f64,
    pub level_values: Vec<Vec<C64>>,
    pub converged: bool,
    pub tolerance: f64,
}

impl VecIntegral {
    pub fn require(&self) -> Result<&[C64]> {
        if self.converged {
            Ok(&self.values)
        } else {
            Err(GsbError::QuadratureGap {
                gap: self.gap,
                tolerance: self.tolerance,
                levels: self.level_values.iter().map(|v| v.first().map_or(0.0, |z| z.re)).collect(),
            })
        }
    }

    fn component(self, i: usize) -> Integral {
        Integral {
            value: self.values[i],
            gap: self.gap,
            level_values: self.level_values.iter().map(|v| v[i]).collect(),
            converged: self.converged,
            tolerance: self.tolerance,
        }
    }
}

/// A node in `k` with the logarithm of its full weight.
struct Node {
    y: Vec<f64>,
    log_w: f64,
}

fn sphere_nodes(d: usize, level: usize) -> Vec<(Vec<f64>, f64)> {
    match d {
        1 => vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)],
        2 => {
            let n = level.max(64);
            (0..n)
                .map(|k| {
                    let a = TAU * k as f64 / n as f64;
                    (vec![a.cos(), a.sin()], TAU / n as f64)
                })
                .collect()
        }
        3 => {
            let nt = (level / 4).max(8);
            let np = 2 * nt;
            let gl = gauss_legendre(nt);
            let mut out = Vec::with_capacity(nt * np);
            for (ct, wt) in gl.nodes.iter().zip(&gl.weights) {
                let st = (1.0 - ct * ct).max(0.0).sqrt();
                for k in 0..np {
                    let a = TAU * k as f64 / np as f64;
                    out.push((vec![st * a.cos(), st * a.sin(), *ct], wt * TAU / np as f64));
                }
            }
            out
        }
        _ => unreachable!("radial-angular rules cover dimensions 1 to 3"),
    }
}

/// Composite 16-point Gauss-Legendre on `[0, radius]` with `level` nodes.
fn radial_rule(radius: f64, level: usize) -> Vec<(f64, f64)> {
    let panels = level / 16;
    let gl = gauss_legendre(16);
    let h = radius / panels as f64;
    let mut out = Vec::with_capacity(level);
    for p in 0..panels {
        let a = p as f64 * h;
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            out.push((a + 0.5 * h * (x + 1.0), 0.5 * h * w));
        }
    }
    out
}

/// Radial-angular nodes for plain Lebesgue measure on the ball of radius `radius` in `R^d`.
fn ball_nodes(d: usize, radius: f64, level: usize) -> Vec<Node> {
    let sphere = sphere_nodes(d, level);
    let mut out = Vec::with_capacity(level * sphere.len());
    for (r, wr) in radial_rule(radius, level) {
        let jac = (d as f64 - 1.0) * r.ln();
        for (dir, wa) in &sphere {
            out.push(Node {
                y: dir.iter().map(|c| c * r).collect(),
                log_w: wr.ln() + wa.ln() + jac,
            });
        }
    }
    out
}

/// Log of the `ν_t` weight in `k`: `c_t e^{-|Y|^2/t} / Φ(Y)`.
pub(crate) fn log_nu_weight(spec: GroupSpec, t: f64, y: &[f64]) -> f64 {
    let r2: f64 = y.iter().map(|v| v * v).sum();
    log_c_t(spec, t) - r2 / t - log_phi(spec, y)
}

fn kspace_nodes(spec: GroupSpec, t: f64, q: &QuadSpec, level: usize) -> Result<Vec<Node>> {
    let d = spec.dim();
    match q.scheme {
        Scheme::TensorHermite => {
            if !spec.is_torus() {
                return Err(GsbError::InvalidArgument(
                    "tensor Gauss-Hermite is only available on tori (Φ ≡ 1)".into(),
                ));
            }
            // Y = sqrt(t) x absorbs e^{-|Y|^2/t}; c_t t^{d/2} = π^{-d/2}
            let rule = gauss_hermite(level);
            let st = t.sqrt();
            let mut out = vec![Node {
                y: Vec::with_capacity(d),
                log_w: -0.5 * d as f64 * PI.ln(),
            }];
            for _ in 0..d {
                out = out
                    .into_iter()
                    .flat_map(|n| {
                        rule.nodes.iter().zip(&rule.weights).map(move |(x, w)| {
                            let mut y = n.y.clone();
                            y.push(st * x);
                            Node {
                                y,
                                log_w: n.log_w + w.ln(),
                            }
                        })
                    })
                    .collect();
            }
            if let Some(r) = q.radius {
                out.retain(|n| n.y.iter().map(|v| v * v).sum::<f64>().sqrt() <= r);
            }
            Ok(out)
        }
        Scheme::RadialAngular => {
            if d > 3 {
                return Err(GsbError::InvalidArgument(
                    "radial-angular rules cover dimensions up to 3".into(),
                ));
            }
            let mut out = ball_nodes(d, q.resolved_radius(spec, t), level);
            for n in out.iter_mut() {
                n.log_w += log_nu_weight(spec, t, &n.y);
            }
            Ok(out)
        }
        _ => Err(GsbError::InvalidArgument(format!(
            "scheme {:?} does not integrate over the Lie algebra",
            q.scheme
        ))),
    }
}

fn gap_of(top: &[C64], prev: &[C64], abs_top: &[f64]) -> f64 {
    let scale = abs_top.iter().cloned().fold(0.0, f64::max);
    let diff = top
        .iter()
        .zip(prev)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        diff / scale
    }
}

/// Integrates a vector-valued function against `ν_t` over `k`.
///
/// The integrand returns `(log_scale, values)`; each node contributes
/// `exp(log_weight + log_scale) · values`, which keeps very large
/// integrands and very small weights from overflowing separately.
pub fn integrate_kspace_scaled<F>(spec: GroupSpec, t: f64, len: usize, f: F, q: &QuadSpec) -> Result<VecIntegral>
where
    F: Fn(&[f64]) -> (f64, Vec<C64>) + Sync,
{
    q.validate()?;
    if !(t > 0.0) {
        return Err(GsbError::InvalidArgument("t must be positive".into()));
    }
    let node_sets = q
        .levels
        .iter()
        .map(|&level| kspace_nodes(spec, t, q, level))
        .collect::<Result<Vec<_>>>()?;
    Ok(sum_levels(node_sets, len, f, q.tolerance))
}

/// `∫_{|Y| ≤ radius} f(Y) dY` over `k` (plain Lebesgue measure), using the
/// radial-angular rule at each level; `f` returns `(log_scale, values)`.
pub fn integrate_ball_scaled<F>(
    spec: GroupSpec,
    radius: f64,
    levels: &[usize],
    tolerance: f64,
    len: usize,
    f: F,
) -> Result<VecIntegral>
where
    F: Fn(&[f64]) -> (f64, Vec<C64>) + Sync,
{
    let q = QuadSpec {
        scheme: Scheme::RadialAngular,
        levels: levels.to_vec(),
        radius: Some(radius),
        growth: 0.0,
        tolerance,
    };
    q.validate()?;
    if spec.dim() > 3 {
        return Err(GsbError::InvalidArgument("ball rules cover dimensions up to 3".into()));
    }
    let node_sets = levels.iter().map(|&l| ball_nodes(spec.dim(), radius, l)).collect();
    Ok(sum_levels(node_sets, len, f, tolerance))
}

fn sum_levels<F>(node_sets: Vec<Vec<Node>>, len: usize, f: F, tolerance: f64) -> VecIntegral
where
    F: Fn(&[f64]) -> (f64, Vec<C64>) + Sync,
{
    let n_levels = node_sets.len();
    let mut level_values = Vec::with_capacity(n_levels);
    let mut abs_top = vec![0.0; len];
    for (li, nodes) in node_sets.into_iter().enumerate() {
        let contributions: Vec<Vec<C64>> = nodes
            .par_iter()
            .map(|n| {
                let (ls, vals) = f(&n.y);
                debug_assert_eq!(vals.len(), len);
                let w = (n.log_w + ls).exp();
                vals.into_iter().map(|v| if w == 0.0 { C64::new(0.0, 0.0) } else { v * w }).collect()
            })
            .collect();
        let mut acc = vec![C64::new(0.0, 0.0); len];
        let is_top = li + 1 == n_levels;
        for c in &contributions {
            for i in 0..len {
                acc[i] += c[i];
                if is_top {
                    abs_top[i] += c[i].norm();
                }
            }
        }
        level_values.push(acc);
    }
    let n = level_values.len();
    let gap = gap_of(&level_values[n - 1], &level_values[n - 2], &abs_top);
    VecIntegral {
        values: level_values[n - 1].clone(),
        gap,
        converged: gap <= tolerance,
        level_values,
        tolerance,
    }
}

/// `∫_k f(Y) c_t e^{-|Y|^2/t} Φ(Y)^{-1} dY`.
pub fn integrate_kspace<F>(spec: GroupSpec, t: f64, f: F, q: &QuadSpec) -> Result<Integral>
where
    F: Fn(&[f64]) -> C64 + Sync,
{
    Ok(integrate_kspace_scaled(spec, t, 1, |y| (0.0, vec![f(y)]), q)?.component(0))
}

/// `∫_0^∞ s^{2n-1} e^{-cs} f(s) ds` by generalized Gauss-Laguerre in `u = cs`.
pub fn integrate_laguerre<F>(c: f64, n: usize, f: F, q: &QuadSpec) -> Result<Integral>
where
    F: Fn(f64) -> C64 + Sync,
{
    q.validate()?;
    if !(c > 0.0) || n == 0 {
        return Err(GsbError::InvalidArgument("need c > 0 and n >= 1".into()));
    }
    let alpha = (2 * n - 1) as f64;
    let scale = c.powi(-(2 * n as i32));
    let mut level_values = Vec::new();
    let mut abs_top = 0.0;
    for (li, &level) in q.levels.iter().enumerate() {
        let rule = gauss_laguerre(level, alpha);
        let vals: Vec<C64> = rule.nodes.par_iter().map(|u| f(u / c)).collect();
        let mut acc = C64::new(0.0, 0.0);
        let mut abs = 0.0;
        for (v, w) in vals.iter().zip(&rule.weights) {
            acc += v * *w;
            abs += v.norm() * w;
        }
        if li + 1 == q.levels.len() {
            abs_top = abs * scale;
        }
        level_values.push(acc * scale);
    }
    let k = level_values.len();
    let gap = gap_of(&level_values[k - 1..], &level_values[k - 2..k - 1], &[abs_top]);
    Ok(Integral {
        value: level_values[k - 1],
        gap,
        converged: gap <= q.tolerance,
        level_values,
        tolerance: q.tolerance,
    })
}

/// `∫_K f(x) dx` under Riemannian-volume Haar.
///
/// Tori use the trapezoid rule with `level` nodes per axis (exact for
/// trigonometric polynomials of degree below `level`). `SU(2)` uses Hopf
/// coordinates `x = [[a, -b̄], [b, ā]]`, `a = cos η e^{iξ_1}`,
/// `b = sin η e^{iξ_2}`, in which Haar measure is `4 du dξ_1 dξ_2` with
/// `u = sin² η`; Gauss-Legendre in `u` and trapezoid in both angles.
pub fn integrate_k<F>(spec: GroupSpec, f: F, level: usize) -> C64
where
    F: Fn(&GroupElement) -> C64 + Sync,
{
    assert!(level >= 1);
    match spec {
        GroupSpec::Torus { rank } => {
            let total = level.pow(rank as u32);
            let vals: Vec<C64> = (0..total)
                .into_par_iter()
                .map(|idx| {
                    let mut rem = idx;
                    let z: Vec<C64> = (0..rank)
                        .map(|_| {
                            let k = rem % level;
                            rem /= level;
                            C64::new(TAU * k as f64 / level as f64, 0.0)
                        })
                        .collect();
                    f(&GroupElement::Torus(z))
                })
                .collect();
            let sum: C64 = vals.iter().sum();
            sum * (spec.volume() / total as f64)
        }
        GroupSpec::Su2 => {
            let gl = gauss_legendre(level);
            let na = 2 * level;
            let vals: Vec<C64> = (0..level)
                .into_par_iter()
                .map(|iu| {
                    let u = 0.5 * (gl.nodes[iu] + 1.0);
                    let (c, s) = ((1.0 - u).sqrt(), u.sqrt());
                    let mut acc = C64::new(0.0, 0.0);
                    for i1 in 0..na {
                        let a = C64::from_polar(c, TAU * i1 as f64 / na as f64);
                        for i2 in 0..na {
                            let b = C64::from_polar(s, TAU * i2 as f64 / na as f64);
                            acc += f(&GroupElement::Su2(Mat2::new(a, -b.conj(), b, a.conj())));
                        }
                    }
                    acc * (0.5 * gl.weights[iu])
                })
                .collect();
            let sum: C64 = vals.iter().sum();
            sum * (4.0 * (TAU / na as f64).powi(2))
        }
    }
}
