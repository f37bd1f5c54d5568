//! The transform `C_t`: heat damping followed by holomorphic continuation,
//! its two inverses, and `L^2(K_C, ν_t)` norms and inner products.
//!
//! Integrals over `K_C` are split along `g = x e^{iY}`. The `K` part is done
//! exactly: for `F(x e^{iY}) = Σ_π tr(π(x) M_π(Y))` with
//! `M_π(Y) = π(e^{iY}) B_π`, Schur orthogonality gives
//! `∫_K conj(F_1) F_2 dx = Σ_π (vol K / dim π) tr(M_{1,π}^* M_{2,π})`.
//! Only the integral over `k` is numeric.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{GsbError, Result};
use crate::group::{su2_positive_exp, su2_rep, GroupElement, GroupSpec, IrrepLabel, C64};
use crate::heat::{heat_operator, CoefVec};
use crate::polar::{log_phi, norm, polar_compose, PointKC, OVERFLOW_GUARD};
use crate::quadrature::{integrate_ball_scaled, integrate_kspace_scaled, Estimate, QuadSpec, VecIntegral};

/// Where a holomorphic function came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    /// Produced by [`ct_forward`] from this coefficient vector.
    Forward { source: CoefVec },
    /// Damped coefficients supplied directly.
    Supplied,
}

/// A holomorphic function on `K_C` given by damped Peter-Weyl blocks:
/// `F(g) = Σ_π tr(π(g) B_π)` with the heat factor already applied.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloFunc {
    coefs: CoefVec,
    t: f64,
    provenance: Provenance,
}

impl HoloFunc {
    /// Wraps blocks that are already damped at time `t`.
    pub fn from_damped(coefs: CoefVec, t: f64) -> Result<Self> {
        check_t(t)?;
        Ok(HoloFunc {
            coefs,
            t,
            provenance: Provenance::Supplied,
        })
    }

    pub fn coefs(&self) -> &CoefVec {
        &self.coefs
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn spec(&self) -> GroupSpec {
        self.coefs.spec()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_forward(&self) -> bool {
        matches!(self.provenance, Provenance::Forward { .. })
    }

    pub fn eval(&self, g: &GroupElement) -> Result<C64> {
        self.coefs.eval(g)
    }

    /// Multiplies by a scalar, keeping provenance.
    pub fn scale(&self, alpha: C64) -> HoloFunc {
        HoloFunc {
            coefs: self.coefs.scale(alpha),
            t: self.t,
            provenance: match &self.provenance {
                Provenance::Forward { source } => Provenance::Forward {
                    source: source.scale(alpha),
                },
                Provenance::Supplied => Provenance::Supplied,
            },
        }
    }

    /// Applies `factor(λ_π)` blockwise to the function and to its source.
    pub(crate) fn scale_blocks(&self, factor: impl Fn(f64) -> f64) -> HoloFunc {
        HoloFunc {
            coefs: self.coefs.scale_blocks(&factor),
            t: self.t,
            provenance: match &self.provenance {
                Provenance::Forward { source } => Provenance::Forward {
                    source: source.scale_blocks(&factor),
                },
                Provenance::Supplied => Provenance::Supplied,
            },
        }
    }

    pub(crate) fn with_parts(coefs: CoefVec, t: f64, provenance: Provenance) -> Self {
        HoloFunc { coefs, t, provenance }
    }
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(GsbError::InvalidArgument(format!("t must be positive, got {t}")))
    }
}

/// `C_t f`.
pub fn ct_forward(f: &CoefVec, t: f64) -> Result<HoloFunc> {
    check_t(t)?;
    Ok(HoloFunc {
        coefs: heat_operator(f, t)?,
        t,
        provenance: Provenance::Forward { source: f.clone() },
    })
}

/// `F(x e^{iY})` for a polar point.
pub fn eval_holo(f: &HoloFunc, p: &PointKC) -> Result<C64> {
    p.validate(f.spec())?;
    f.eval(&polar_compose(f.spec(), p))
}

/// `‖f‖_{L^2(K)}` from the Plancherel formula.
pub fn l2_norm_k(f: &CoefVec) -> f64 {
    f.plancherel_norm_sq().sqrt()
}

/// Exact inverse of the damping on a finite support. Functions produced by
/// [`ct_forward`] return their source unchanged.
pub fn ct_inverse_spectral(f: &HoloFunc) -> CoefVec {
    match &f.provenance {
        Provenance::Forward { source } => source.clone(),
        Provenance::Supplied => f.coefs.scale_blocks(|lam| (0.5 * lam * f.t).exp()),
    }
}

/// `π(e^{i s Y})` for every label, each normalized to entries of order one,
/// with the logarithm of the removed factor.
pub(crate) fn positive_reps<'a>(
    spec: GroupSpec,
    labels: impl Iterator<Item = &'a IrrepLabel>,
    y: &[f64],
    s: f64,
) -> BTreeMap<IrrepLabel, (f64, DMatrix<C64>)> {
    let r = s * norm(y);
    let scaled_su2 = if spec.is_torus() {
        None
    } else {
        let ys: Vec<f64> = y.iter().map(|v| v * s).collect();
        Some(su2_positive_exp(&ys) * C64::new((-0.5 * r).exp(), 0.0))
    };
    let mut out = BTreeMap::new();
    for l in labels {
        if out.contains_key(l) {
            continue;
        }
        let entry = match l {
            IrrepLabel::Torus(n) => {
                let log = -s * n.iter().zip(y).map(|(a, b)| *a as f64 * b).sum::<f64>();
                (log, DMatrix::from_element(1, 1, C64::new(1.0, 0.0)))
            }
            IrrepLabel::Su2(m) => {
                let m = *m as usize;
                (0.5 * (m as f64 - 1.0) * r, su2_rep(m, scaled_su2.as_ref().unwrap()))
            }
        };
        out.insert(l.clone(), entry);
    }
    out
}

fn same_family(fs: &[&HoloFunc]) -> Result<(GroupSpec, f64)> {
    let first = fs
        .first()
        .ok_or_else(|| GsbError::InvalidArgument("at least one function is required".into()))?;
    let (spec, t) = (first.spec(), first.t);
    for f in fs {
        if f.spec() != spec || f.t != t {
            return Err(GsbError::InvalidArgument(
                "functions must share the group and the time parameter".into(),
            ));
        }
    }
    Ok((spec, t))
}

/// Gram entries `∫ conj(F_i) F_j m(Y) ν_t dg` as a flat row-major vector.
/// Weight `m(Y)` applied inside a Gram integral.
pub type Multiplier<'a> = dyn Fn(&[f64]) -> C64 + Sync + 'a;

/// Without a multiplier only `i ≤ j` is stored; a multiplier may be complex,
/// so then every `(i, j)` is computed.
fn gram_integral(
    fs: &[&HoloFunc],
    multiplier: Option<&Multiplier<'_>>,
    quad: &QuadSpec,
) -> Result<VecIntegral> {
    let (spec, t) = same_family(fs)?;
    let labels: BTreeSet<IrrepLabel> = fs.iter().flat_map(|f| f.coefs.iter().map(|(l, _)| l.clone())).collect();
    let growth = 2.0 * fs.iter().map(|f| f.coefs.growth_rate()).fold(0.0, f64::max);
    let q = quad.clone().with_growth(quad.growth.max(growth));
    let vol = spec.volume();
    let k = fs.len();
    let full = multiplier.is_some();
    let len = if full { k * k } else { k * (k + 1) / 2 };
    integrate_kspace_scaled(
        spec,
        t,
        len,
        |y| {
            let reps = positive_reps(spec, labels.iter(), y, 1.0);
            let top = reps.values().map(|(l, _)| *l).fold(f64::NEG_INFINITY, f64::max);
            let top = if top.is_finite() { top } else { 0.0 };
            // M_{i,π} = π(e^{iY}) B_{i,π}, rescaled by e^{-top}
            let blocks: Vec<Vec<(usize, DMatrix<C64>)>> = fs
                .iter()
                .map(|f| {
                    f.coefs
                        .iter()
                        .map(|(l, b)| {
                            let (lg, p) = &reps[l];
                            (l.dim(), (p * b) * C64::new((lg - top).exp(), 0.0))
                        })
                        .collect()
                })
                .collect();
            let keys: Vec<Vec<&IrrepLabel>> = fs.iter().map(|f| f.coefs.iter().map(|(l, _)| l).collect()).collect();
            let mut vals = Vec::with_capacity(len);
            for i in 0..k {
                for j in (if full { 0 } else { i })..k {
                    let mut acc = C64::new(0.0, 0.0);
                    for (a, la) in keys[i].iter().enumerate() {
                        if let Some(b) = keys[j].iter().position(|lb| lb == la) {
                            let (dim, ma) = &blocks[i][a];
                            let mb = &blocks[j][b].1;
                            acc += ma.dotc(mb) * (vol / *dim as f64);
                        }
                    }
                    vals.push(acc);
                }
            }
            if let Some(m) = multiplier {
                let w = m(y);
                for v in vals.iter_mut() {
                    *v *= w;
                }
            }
            (2.0 * top, vals)
        },
        &q,
    )
}

/// Gram matrix `G_{ij} = ∫_{K_C} conj(F_i) F_j m(|Y|) ν_t dg` with optional multiplier.
pub fn holo_gram(
    fs: &[&HoloFunc],
    multiplier: Option<&Multiplier<'_>>,
    quad: &QuadSpec,
) -> Result<(DMatrix<C64>, f64)> {
    let res = gram_integral(fs, multiplier, quad)?;
    let vals = res.require()?;
    let k = fs.len();
    if multiplier.is_some() {
        return Ok((DMatrix::from_row_slice(k, k, vals), res.gap));
    }
    let mut g = DMatrix::from_element(k, k, C64::new(0.0, 0.0));
    let mut idx = 0;
    for i in 0..k {
        for j in i..k {
            g[(i, j)] = vals[idx];
            if i != j {
                g[(j, i)] = vals[idx].conj();
            }
            idx += 1;
        }
    }
    Ok((g, res.gap))
}

/// `⟨F_1, F_2⟩_{L^2(ν_t)}`.
pub fn holo_inner(f1: &HoloFunc, f2: &HoloFunc, quad: &QuadSpec) -> Result<(C64, f64)> {
    let (g, gap) = holo_gram(&[f1, f2], None, quad)?;
    Ok((g[(0, 1)], gap))
}

/// `‖F‖_{L^2(K_C, ν_t)}`.
pub fn holo_l2_norm(f: &HoloFunc, quad: &QuadSpec) -> Result<Estimate> {
    let res = gram_integral(&[f], None, quad)?;
    let v = res.require()?[0].re;
    Ok(Estimate {
        value: v.max(0.0).sqrt(),
        gap: res.gap,
    })
}

/// Options for the truncated inversion integral.
#[derive(Debug, Clone, PartialEq)]
pub struct InversionOptions {
    /// Increasing truncation radii; the last one gives the returned value.
    pub radii: Vec<f64>,
    pub levels: Vec<usize>,
    /// Largest acceptable last increment, relative to `max(1, |value|)`.
    pub tolerance: f64,
}

impl InversionOptions {
    pub fn for_spec(spec: GroupSpec, t: f64) -> Self {
        let s = t.sqrt();
        match spec {
            GroupSpec::Torus { .. } => InversionOptions {
                radii: vec![6.0 * s, 8.0 * s, 10.0 * s, 12.0 * s],
                levels: vec![64, 128],
                tolerance: 1e-8,
            },
            GroupSpec::Su2 => InversionOptions {
                radii: vec![6.0, 8.0, 10.0],
                levels: vec![64, 96],
                tolerance: 1e-2,
            },
        }
    }
}

/// Reconstruction at one point with its radius trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Inversion {
    pub value: C64,
    /// `(R, value at R)` in increasing `R`.
    pub trace: Vec<(f64, C64)>,
    /// `|v_k - v_{k-1}|` along the trace.
    pub increments: Vec<f64>,
    pub stabilized: bool,
    /// Inter-level quadrature gap at the largest radius.
    pub gap: f64,
}

impl Inversion {
    pub fn require(&self) -> Result<C64> {
        if self.stabilized {
            Ok(self.value)
        } else {
            Err(GsbError::NotStabilized {
                increments: self.increments.clone(),
            })
        }
    }
}

/// Increments below this are treated as converged noise when checking monotonicity.
const INCREMENT_FLOOR: f64 = 1e-12;

/// Recovers `f(x)` from `F = C_t f` by the truncated integral
/// `(2πt)^{-d/2} e^{-|δ|^2 t/2} ∫_{|Y| ≤ R} F(x e^{iY}) e^{-|Y|^2/2t} Φ(Y/2)^{-1} dY`.
pub fn ct_inverse_integral(f: &HoloFunc, x: &GroupElement, opts: &InversionOptions) -> Result<Inversion> {
    let spec = f.spec();
    let t = f.t;
    x.validate(spec)?;
    if opts.radii.is_empty() || opts.radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GsbError::InvalidArgument("radii must be nonempty and increasing".into()));
    }
    if opts.radii.iter().any(|r| !(*r > 0.0) || *r > OVERFLOW_GUARD) {
        return Err(GsbError::InvalidArgument(format!("radii must lie in (0, {OVERFLOW_GUARD}]")));
    }
    let d = spec.dim() as f64;
    let log_pref = -0.5 * d * (2.0 * PI * t).ln() - 0.5 * spec.delta_sq() * t;
    let px: BTreeMap<IrrepLabel, DMatrix<C64>> = f
        .coefs
        .iter()
        .map(|(l, _)| Ok((l.clone(), crate::group::rep_matrix(spec, l, x)?)))
        .collect::<Result<_>>()?;
    let labels: Vec<IrrepLabel> = f.coefs.iter().map(|(l, _)| l.clone()).collect();
    let integrand = |y: &[f64]| {
        let reps = positive_reps(spec, labels.iter(), y, 1.0);
        let top = reps.values().map(|(l, _)| *l).fold(f64::NEG_INFINITY, f64::max);
        let top = if top.is_finite() { top } else { 0.0 };
        let mut acc = C64::new(0.0, 0.0);
        for (l, b) in f.coefs.iter() {
            let (lg, p) = &reps[l];
            acc += (&px[l] * p * b).trace() * (lg - top).exp();
        }
        let r2: f64 = y.iter().map(|v| v * v).sum();
        let half: Vec<f64> = y.iter().map(|v| 0.5 * v).collect();
        (top + log_pref - r2 / (2.0 * t) - log_phi(spec, &half), vec![acc])
    };
    let mut trace = Vec::with_capacity(opts.radii.len());
    let mut gap = 0.0;
    for &r in &opts.radii {
        let res = integrate_ball_scaled(spec, r, &opts.levels, 1e-10, 1, integrand)?;
        gap = res.gap;
        trace.push((r, res.values[0]));
    }
    let increments: Vec<f64> = trace.windows(2).map(|w| (w[1].1 - w[0].1).norm()).collect();
    let value = trace.last().unwrap().1;
    let monotone = increments
        .windows(2)
        .all(|w| w[1] <= w[0].max(INCREMENT_FLOOR));
    let last_ok = increments
        .last()
        .is_none_or(|inc| *inc <= opts.tolerance * value.norm().max(1.0));
    Ok(Inversion {
        value,
        trace,
        increments,
        stabilized: monotone && last_ok,
        gap,
    })
}

/// `(L_x F)(g) = F(x^{-1} g)`, realized on blocks as `B_π ↦ B_π π(x)^{-1}`.
pub fn left_translate(f: &HoloFunc, x: &GroupElement) -> Result<HoloFunc> {
    let spec = f.spec();
    x.validate(spec)?;
    let inv = x.inverse();
    let shift = |c: &CoefVec| -> Result<CoefVec> {
        let mut out = CoefVec::new(spec);
        for (l, b) in c.iter() {
            out.insert(l.clone(), b * crate::group::rep_matrix(spec, l, &inv)?)?;
        }
        Ok(out)
    };
    let provenance = match &f.provenance {
        Provenance::Forward { source } => Provenance::Forward { source: shift(source)? },
        Provenance::Supplied => Provenance::Supplied,
    };
    Ok(HoloFunc {
        coefs: shift(&f.coefs)?,
        t: f.t,
        provenance,
    })
}

/// Fourier coefficients of a function sampled on the uniform torus grid.
///
/// `samples[i]` is the value at angles `2π k_a / n` where
/// `i = Σ_a k_a n^a` (axis 0 varies fastest). Frequencies with
/// `max |n_a| ≤ cutoff` are kept; the result is exact for trigonometric
/// polynomials whose frequencies stay below `n / 2`.
pub fn torus_coefs_from_grid(rank: usize, n: usize, samples: &[C64], cutoff: usize) -> Result<CoefVec> {
    let spec = GroupSpec::torus(rank);
    let total = n.pow(rank as u32);
    if samples.len() != total {
        return Err(GsbError::InvalidArgument(format!(
            "expected {total} samples on a {n}^{rank} grid, got {}",
            samples.len()
        )));
    }
    if 2 * cutoff >= n {
        return Err(GsbError::InvalidArgument("cutoff must stay below half the grid size".into()));
    }
    let mut out = CoefVec::new(spec);
    for label in crate::group::enumerate_irreps(spec, cutoff.max(1)) {
        let freq = match &label {
            IrrepLabel::Torus(v) => v.clone(),
            _ => unreachable!(),
        };
        if freq.iter().any(|v| v.unsigned_abs() as usize > cutoff) {
            continue;
        }
        let mut acc = C64::new(0.0, 0.0);
        for (i, s) in samples.iter().enumerate() {
            let mut rem = i;
            let mut phase = 0.0;
            for f in &freq {
                let k = rem % n;
                rem /= n;
                phase -= *f as f64 * 2.0 * PI * k as f64 / n as f64;
            }
            acc += s * C64::from_polar(1.0, phase);
        }
        let c = acc / total as f64;
        if c.norm() > 0.0 {
            out.insert(label, DMatrix::from_element(1, 1, c))?;
        }
    }
    Ok(out)
}
