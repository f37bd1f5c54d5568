//! Peter-Weyl coefficient vectors, the heat kernel `ρ_t` and its
//! holomorphic continuation, the density `ν_t`, and the heat semigroup.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GsbError, Result};
use crate::group::{
    eigenvalue_unchecked, rep_matrix, sl2_eigenvalue, su2_character_weighted, torus_pairing, GroupElement,
    GroupSpec, IrrepLabel, C64, I,
};
use crate::polar::{log_phi, polar_compose, PointKC};

/// A finitely supported family of Fourier blocks, representing
/// `f(x) = Σ_π tr(π(x) B_π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefVec {
    spec: GroupSpec,
    entries: BTreeMap<IrrepLabel, DMatrix<C64>>,
}

impl CoefVec {
    pub fn new(spec: GroupSpec) -> Self {
        CoefVec {
            spec,
            entries: BTreeMap::new(),
        }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    /// Sets the block of `label`, replacing any previous one.
    pub fn insert(&mut self, label: IrrepLabel, block: DMatrix<C64>) -> Result<()> {
        self.spec.check_label(&label)?;
        let d = label.dim();
        if block.nrows() != d || block.ncols() != d {
            return Err(GsbError::InvalidArgument(format!(
                "block for {label} must be {d}x{d}, got {}x{}",
                block.nrows(),
                block.ncols()
            )));
        }
        self.entries.insert(label, block);
        Ok(())
    }

    pub fn with(mut self, label: IrrepLabel, block: DMatrix<C64>) -> Result<Self> {
        self.insert(label, block)?;
        Ok(self)
    }

    /// The constant function `value`.
    pub fn constant(spec: GroupSpec, value: C64) -> Self {
        let mut out = CoefVec::new(spec);
        out.entries.insert(IrrepLabel::trivial(spec), DMatrix::from_element(1, 1, value));
        out
    }

    /// The matrix entry `x ↦ π(x)_{ij}`.
    pub fn matrix_entry(spec: GroupSpec, label: IrrepLabel, i: usize, j: usize) -> Result<Self> {
        spec.check_label(&label)?;
        let d = label.dim();
        if i >= d || j >= d {
            return Err(GsbError::InvalidArgument(format!("entry ({i},{j}) outside a {d}-dimensional irrep")));
        }
        let mut b = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        b[(j, i)] = C64::new(1.0, 0.0);
        CoefVec::new(spec).with(label, b)
    }

    /// The character `χ_π`.
    pub fn character(spec: GroupSpec, label: IrrepLabel) -> Result<Self> {
        let d = label.dim();
        CoefVec::new(spec).with(label, DMatrix::identity(d, d))
    }

    /// Blockwise sum.
    pub fn add(&self, other: &CoefVec) -> Result<CoefVec> {
        if self.spec != other.spec {
            return Err(GsbError::LabelMismatch {
                label: other.spec.to_string(),
                group: self.spec.to_string(),
            });
        }
        let mut out = self.clone();
        for (l, b) in &other.entries {
            out.entries
                .entry(l.clone())
                .and_modify(|a| *a += b)
                .or_insert_with(|| b.clone());
        }
        Ok(out)
    }

    pub fn get(&self, label: &IrrepLabel) -> Option<&DMatrix<C64>> {
        self.entries.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IrrepLabel, &DMatrix<C64>)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Applies `factor(λ_π)` to every block.
    pub fn scale_blocks(&self, factor: impl Fn(f64) -> f64) -> CoefVec {
        CoefVec {
            spec: self.spec,
            entries: self
                .entries
                .iter()
                .map(|(l, b)| (l.clone(), b * C64::new(factor(eigenvalue_unchecked(l)), 0.0)))
                .collect(),
        }
    }

    pub fn scale(&self, alpha: C64) -> CoefVec {
        CoefVec {
            spec: self.spec,
            entries: self.entries.iter().map(|(l, b)| (l.clone(), b * alpha)).collect(),
        }
    }

    /// `Σ_π (vol K / dim π) ‖B_π‖²_HS`, equal to `∫_K |f|^2 dx`.
    pub fn plancherel_norm_sq(&self) -> f64 {
        let vol = self.spec.volume();
        self.entries
            .iter()
            .map(|(l, b)| vol / l.dim() as f64 * b.norm_squared())
            .sum()
    }

    /// `⟨f, g⟩ = ∫_K conj(f) g dx`, computed from the blocks.
    pub fn inner(&self, other: &CoefVec) -> C64 {
        let vol = self.spec.volume();
        let mut acc = C64::new(0.0, 0.0);
        for (l, a) in &self.entries {
            if let Some(b) = other.entries.get(l) {
                acc += (a.adjoint() * b).trace() * (vol / l.dim() as f64);
            }
        }
        acc
    }

    /// `Σ_π tr(π(g) B_π)` at any point of `K_C`.
    pub fn eval(&self, g: &GroupElement) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (l, b) in &self.entries {
            acc += (rep_matrix(self.spec, l, g)? * b).trace();
        }
        Ok(acc)
    }

    /// Largest irrep dimension present (1 for tori and for empty vectors).
    pub fn max_dim(&self) -> usize {
        self.entries.keys().map(|l| l.dim()).max().unwrap_or(1)
    }

    /// Exponential growth rate in `|Y|` of `|f(x e^{iY})|`.
    pub fn growth_rate(&self) -> f64 {
        self.entries
            .keys()
            .map(|l| match l {
                IrrepLabel::Torus(n) => n.iter().map(|v| (v * v) as f64).sum::<f64>().sqrt(),
                IrrepLabel::Su2(m) => (*m as f64 - 1.0) / 2.0,
            })
            .fold(0.0, f64::max)
    }
}

/// Outcome of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub cutoff: usize,
    pub tail_bound: f64,
    pub tolerance: f64,
}

/// `log c_t` with `c_t = (π t)^{-d/2} e^{-|δ|^2 t}`.
pub fn log_c_t(spec: GroupSpec, t: f64) -> f64 {
    -0.5 * spec.dim() as f64 * (PI * t).ln() - spec.delta_sq() * t
}

pub fn c_t(spec: GroupSpec, t: f64) -> f64 {
    log_c_t(spec, t).exp()
}

/// `ν_t(x e^{iY}) = c_t Φ(Y) e^{-|Y|^2/t}`.
pub fn nu_t(spec: GroupSpec, t: f64, y: &[f64]) -> f64 {
    let r2: f64 = y.iter().map(|v| v * v).sum();
    (log_c_t(spec, t) + log_phi(spec, y) - r2 / t).exp()
}

/// `e^{tΔ/2}` on coefficients.
pub fn heat_operator(f: &CoefVec, t: f64) -> Result<CoefVec> {
    if !(t >= 0.0) {
        return Err(GsbError::InvalidArgument(
            "negative-time damping is only available through the spectral inverse".into(),
        ));
    }
    Ok(f.scale_blocks(|lam| (-0.5 * lam * t).exp()))
}

/// Checks a truncation against a tolerance.
fn tail_check(cutoff: usize, tail_bound: f64, tol: f64) -> Result<TruncationReport> {
    if tail_bound <= tol {
        Ok(TruncationReport {
            cutoff,
            tail_bound,
            tolerance: tol,
        })
    } else {
        Err(GsbError::TailBound {
            cutoff,
            tail_bound,
            tolerance: tol,
        })
    }
}

/// `ρ_t` truncated at `cutoff`: blocks `dim π e^{-λ_π t/2} / vol K · I`.
///
/// The report bounds `sup_K |ρ_t - truncation|`; it fails when that bound
/// exceeds `tol`.
pub fn heat_coeffs(spec: GroupSpec, t: f64, cutoff: usize, tol: f64) -> Result<(CoefVec, TruncationReport)> {
    if !(t > 0.0) {
        return Err(GsbError::InvalidArgument("t must be positive".into()));
    }
    let vol = spec.volume();
    let mut out = CoefVec::new(spec);
    for l in crate::group::enumerate_irreps(spec, cutoff) {
        let d = l.dim();
        let w = d as f64 * (-0.5 * eigenvalue_unchecked(&l) * t).exp() / vol;
        out.entries.insert(l, DMatrix::identity(d, d) * C64::new(w, 0.0));
    }
    let weights = SeriesWeights { s: 0.5 * t, c: 0.0, p: 0 };
    let bound = tail_bound(spec, &weights, &vec![0.0; spec.dim()], cutoff);
    let report = tail_check(cutoff, bound, tol)?;
    Ok((out, report))
}

/// Weights `w_π = (dim π / vol K) e^{-λ_π s} (c + λ_π)^{-p}` of a character series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesWeights {
    pub s: f64,
    pub c: f64,
    pub p: u32,
}

impl SeriesWeights {
    fn log_weight(&self, spec: GroupSpec, dim: usize, lambda: f64) -> f64 {
        let mut lw = (dim as f64 / spec.volume()).ln() - lambda * self.s;
        if self.p > 0 {
            lw -= self.p as f64 * (self.c + lambda).ln();
        }
        lw
    }
}

/// Largest cutoff tried before a series is declared non-convergent.
const MAX_SU2_CUTOFF: usize = 8192;
const MAX_TORUS_TERMS: usize = 4_000_000;

/// Rigorous bound on `Σ_{π beyond cutoff} |w_π χ_π(x e^{iY})|`.
pub(crate) fn tail_bound(spec: GroupSpec, w: &SeriesWeights, y: &[f64], cutoff: usize) -> f64 {
    match spec {
        GroupSpec::Su2 => {
            // |χ_m(x e^{iY})| ≤ m e^{(m-1)r/2}
            let r: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            let m = (cutoff + 1) as f64;
            let lam = |m: f64| (m * m - 1.0) / 4.0;
            let log_b = w.log_weight(spec, cutoff + 1, lam(m)) + m.ln() + 0.5 * (m - 1.0) * r;
            // the ratio of consecutive bounds decreases in m, so its value at
            // the first omitted term bounds all later ratios
            let log_q = 2.0 * ((m + 1.0) / m).ln() - (2.0 * m + 1.0) * w.s / 4.0 + 0.5 * r;
            if log_q >= 0.0 {
                f64::INFINITY
            } else {
                log_b.exp() / (1.0 - log_q.exp())
            }
        }
        GroupSpec::Torus { rank } => {
            let m = cutoff as f64;
            let mut inside = 1.0;
            let mut total = 1.0;
            for yi in y.iter().take(rank) {
                let a = yi.abs();
                // the box part, and a bound on the one-dimensional tail beyond it
                let boxed: f64 = (-(cutoff as i64)..=cutoff as i64)
                    .map(|k| {
                        let k = k as f64;
                        (-k * k * w.s + k.abs() * a).exp()
                    })
                    .sum();
                let k1 = m + 1.0;
                let log_q = -(2.0 * k1 + 1.0) * w.s + a;
                let tail = if log_q >= 0.0 {
                    f64::INFINITY
                } else {
                    2.0 * (-k1 * k1 * w.s + k1 * a).exp() / (1.0 - log_q.exp())
                };
                inside *= boxed;
                total *= boxed + tail;
            }
            let mut bound = (total - inside).max(0.0) / spec.volume();
            if w.p > 0 {
                bound *= (w.c + (m + 1.0) * (m + 1.0)).powi(-(w.p as i32));
            }
            bound
        }
    }
}

/// Value of a character series together with its truncation report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: C64,
    pub report: TruncationReport,
}

/// `Σ_π w_π χ_π(g)` for `g = x e^{iY}`, truncated adaptively until the tail
/// bound is below `tol · |value|` (or below rounding level of the partial sum).
pub fn character_series(spec: GroupSpec, w: &SeriesWeights, p: &PointKC, tol: f64) -> Result<SeriesValue> {
    p.validate(spec)?;
    if !(w.s > 0.0) {
        return Err(GsbError::InvalidArgument("series time parameter must be positive".into()));
    }
    if w.p > 0 && !(w.c > 0.0) {
        return Err(GsbError::InvalidArgument("Sobolev shift c must be positive".into()));
    }
    let g = polar_compose(spec, p);
    match (&g, spec) {
        (GroupElement::Su2(m), GroupSpec::Su2) => {
            let lambda = sl2_eigenvalue(m.trace());
            let mut sum = C64::new(0.0, 0.0);
            let mut abs_sum = 0.0;
            let mut last = f64::INFINITY;
            for dim in 1..=MAX_SU2_CUTOFF {
                let lam = (dim * dim - 1) as f64 / 4.0;
                let term = su2_character_weighted(dim, lambda, w.log_weight(spec, dim, lam));
                sum += term;
                abs_sum += term.norm();
                // only check once the Gaussian has taken over
                if dim >= 2 {
                    let bound = tail_bound(spec, w, &p.y, dim);
                    last = bound;
                    if bound <= tol * sum.norm() || bound <= 1e-16 * abs_sum {
                        return Ok(SeriesValue {
                            value: sum,
                            report: TruncationReport {
                                cutoff: dim,
                                tail_bound: bound,
                                tolerance: tol,
                            },
                        });
                    }
                }
            }
            Err(GsbError::TailBound {
                cutoff: MAX_SU2_CUTOFF,
                tail_bound: last,
                tolerance: tol,
            })
        }
        (GroupElement::Torus(z), GroupSpec::Torus { rank }) => {
            let mut sum = C64::new(0.0, 0.0);
            let mut abs_sum = 0.0;
            let mut last = f64::INFINITY;
            let mut cutoff = 0usize;
            loop {
                // shell of labels with max |n_i| == cutoff
                for_each_shell(rank, cutoff as i64, |n| {
                    let lam: f64 = n.iter().map(|v| (v * v) as f64).sum();
                    let lw = w.log_weight(spec, 1, lam);
                    let term = (I * torus_pairing(n, z) + lw).exp();
                    sum += term;
                    abs_sum += term.norm();
                });
                if cutoff >= 1 {
                    let bound = tail_bound(spec, w, &p.y, cutoff);
                    last = bound;
                    if bound <= tol * sum.norm() || bound <= 1e-16 * abs_sum {
                        return Ok(SeriesValue {
                            value: sum,
                            report: TruncationReport {
                                cutoff,
                                tail_bound: bound,
                                tolerance: tol,
                            },
                        });
                    }
                }
                cutoff += 1;
                if (2 * cutoff + 1).pow(rank as u32) > MAX_TORUS_TERMS {
                    return Err(GsbError::TailBound {
                        cutoff: cutoff - 1,
                        tail_bound: last,
                        tolerance: tol,
                    });
                }
            }
        }
        _ => unreachable!("validated above"),
    }
}

fn for_each_shell(rank: usize, m: i64, mut f: impl FnMut(&[i64])) {
    let mut n = vec![-m; rank];
    loop {
        if n.iter().any(|v| v.abs() == m) {
            f(&n);
        }
        let mut i = 0;
        loop {
            if i == rank {
                return;
            }
            if n[i] < m {
                n[i] += 1;
                break;
            }
            n[i] = -m;
            i += 1;
        }
    }
}

/// `ρ_t(x e^{iY})` with a rigorous relative tail bound `tol`.
pub fn rho_eval(spec: GroupSpec, t: f64, p: &PointKC, tol: f64) -> Result<SeriesValue> {
    if !(t > 0.0) {
        return Err(GsbError::InvalidArgument("t must be positive".into()));
    }
    character_series(spec, &SeriesWeights { s: 0.5 * t, c: 0.0, p: 0 }, p, tol)
}
