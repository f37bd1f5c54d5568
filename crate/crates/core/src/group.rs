//! Group-theoretic data for the tori `T^r = R^r / 2πZ^r` and for `SU(2)`.
//!
//! Conventions used everywhere in the crate:
//!
//! * `SU(2)` carries the bi-invariant metric `|Y|^2 = 2 tr(Y^* Y)`. The fixed
//!   orthonormal basis of `su(2)` is `X_k = i σ_k / 2`, so a Lie algebra
//!   element is stored as its coordinate 3-vector and `|Y|` is the Euclidean
//!   norm of the coordinates. With this metric `SU(2)` is a round 3-sphere of
//!   radius 2 and has volume `16 π^2`.
//! * The torus carries the flat metric; a point of `T^r_C = C^r / 2πZ^r` is
//!   stored through additive coordinates `z = x + i y`.
//! * Haar measure on `K` is the Riemannian volume (not a probability measure).
//! * Irreducible representations of `SU(2)` are labelled by their dimension
//!   `m` and realised on homogeneous polynomials of degree `m - 1`, in the
//!   basis that makes the restriction to `SU(2)` unitary.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GsbError, Result};

pub type C64 = Complex64;
pub type Mat2 = Matrix2<Complex64>;

pub(crate) const I: C64 = C64::new(0.0, 1.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);

/// Which compact group is in play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupSpec {
    Torus { rank: usize },
    Su2,
}

impl GroupSpec {
    pub fn torus(rank: usize) -> Self {
        assert!(rank >= 1, "torus rank must be positive");
        GroupSpec::Torus { rank }
    }

    /// `d = dim K`.
    pub fn dim(&self) -> usize {
        match self {
            GroupSpec::Torus { rank } => *rank,
            GroupSpec::Su2 => 3,
        }
    }

    /// `r = dim t`.
    pub fn rank(&self) -> usize {
        match self {
            GroupSpec::Torus { rank } => *rank,
            GroupSpec::Su2 => 1,
        }
    }

    /// Riemannian volume of `K`.
    pub fn volume(&self) -> f64 {
        match self {
            GroupSpec::Torus { rank } => (2.0 * PI).powi(*rank as i32),
            GroupSpec::Su2 => 16.0 * PI * PI,
        }
    }

    /// `|δ|^2` for the half-sum of positive roots.
    pub fn delta_sq(&self) -> f64 {
        match self {
            GroupSpec::Torus { .. } => 0.0,
            GroupSpec::Su2 => 0.25,
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self, GroupSpec::Torus { .. })
    }

    pub(crate) fn check_label(&self, label: &IrrepLabel) -> Result<()> {
        let ok = match (self, label) {
            (GroupSpec::Torus { rank }, IrrepLabel::Torus(n)) => n.len() == *rank,
            (GroupSpec::Su2, IrrepLabel::Su2(m)) => *m >= 1,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(GsbError::LabelMismatch {
                label: label.to_string(),
                group: self.to_string(),
            })
        }
    }

    pub(crate) fn check_coords(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.dim() {
            return Err(GsbError::InvalidArgument(format!(
                "Lie algebra vector has {} coordinates, {} expects {}",
                y.len(),
                self,
                self.dim()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Torus { rank } => write!(f, "torus:{rank}"),
            GroupSpec::Su2 => write!(f, "su2"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GsbError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "su2" || s == "su(2)" {
            return Ok(GroupSpec::Su2);
        }
        if let Some(rest) = s.strip_prefix("torus") {
            let rank = match rest.strip_prefix(':') {
                Some(r) => r
                    .parse::<usize>()
                    .map_err(|_| GsbError::InvalidArgument(format!("bad torus rank in '{s}'")))?,
                None if rest.is_empty() => 1,
                None => return Err(GsbError::InvalidArgument(format!("unknown group '{s}'"))),
            };
            if rank == 0 {
                return Err(GsbError::InvalidArgument("torus rank must be positive".into()));
            }
            return Ok(GroupSpec::Torus { rank });
        }
        Err(GsbError::InvalidArgument(format!("unknown group '{s}'")))
    }
}

/// Label of an irreducible representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IrrepLabel {
    /// Character `θ ↦ e^{i n·θ}`.
    Torus(Vec<i64>),
    /// Irrep of dimension `m`.
    Su2(u32),
}

impl IrrepLabel {
    pub fn dim(&self) -> usize {
        match self {
            IrrepLabel::Torus(_) => 1,
            IrrepLabel::Su2(m) => *m as usize,
        }
    }

    /// The trivial representation of `spec`.
    pub fn trivial(spec: GroupSpec) -> Self {
        match spec {
            GroupSpec::Torus { rank } => IrrepLabel::Torus(vec![0; rank]),
            GroupSpec::Su2 => IrrepLabel::Su2(1),
        }
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepLabel::Torus(n) => {
                let parts: Vec<String> = n.iter().map(|v| v.to_string()).collect();
                write!(f, "n=({})", parts.join(","))
            }
            IrrepLabel::Su2(m) => write!(f, "m={m}"),
        }
    }
}

/// Parses `n=(1,-2)` (torus) or `m=3` (`SU(2)`), the `Display` forms.
impl FromStr for IrrepLabel {
    type Err = GsbError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || GsbError::InvalidArgument(format!("cannot parse irrep label '{s}'"));
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("m=") {
            let m: u32 = rest.trim().parse().map_err(|_| bad())?;
            if m == 0 {
                return Err(bad());
            }
            return Ok(IrrepLabel::Su2(m));
        }
        let inner = s
            .strip_prefix("n=")
            .and_then(|r| r.trim().strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let n = inner
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        Ok(IrrepLabel::Torus(n))
    }
}

/// Root system data in coordinates on the maximal torus algebra `t ≅ R^rank`.
///
/// For `SU(2)`, `t` is spanned by the basis vector `X_3` and the single
/// positive root is `α(h X_3) = h`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootData {
    pub positive_roots: Vec<Vec<f64>>,
    pub delta: Vec<f64>,
    pub delta_sq: f64,
    /// Basis of the kernel of `exp` restricted to `t`.
    pub lattice_basis: Vec<Vec<f64>>,
    /// Closed chamber as inequalities `a · h >= 0`; empty means all of `t`.
    pub chamber: Vec<Vec<f64>>,
}

impl RootData {
    /// Volume of a fundamental domain of the lattice.
    pub fn lattice_covolume(&self) -> f64 {
        let r = self.lattice_basis.len();
        let m = DMatrix::from_fn(r, r, |i, j| self.lattice_basis[j][i]);
        m.determinant().abs()
    }

    pub fn in_chamber(&self, h: &[f64]) -> bool {
        self.chamber
            .iter()
            .all(|a| a.iter().zip(h).map(|(x, y)| x * y).sum::<f64>() >= 0.0)
    }
}

pub fn root_data(spec: GroupSpec) -> RootData {
    match spec {
        GroupSpec::Torus { rank } => RootData {
            positive_roots: Vec::new(),
            delta: vec![0.0; rank],
            delta_sq: 0.0,
            lattice_basis: (0..rank)
                .map(|i| {
                    let mut v = vec![0.0; rank];
                    v[i] = 2.0 * PI;
                    v
                })
                .collect(),
            chamber: Vec::new(),
        },
        GroupSpec::Su2 => RootData {
            positive_roots: vec![vec![1.0]],
            delta: vec![0.5],
            delta_sq: 0.25,
            // exp(θ X_3) = diag(e^{iθ/2}, e^{-iθ/2}) is the identity iff θ ∈ 4πZ.
            lattice_basis: vec![vec![4.0 * PI]],
            chamber: vec![vec![1.0]],
        },
    }
}

/// A point of the complexification `K_C`.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    /// Additive coordinates `z ∈ C^r`, taken modulo `2π` in the real part.
    Torus(Vec<C64>),
    /// A matrix in `SL(2, C)`.
    Su2(Mat2),
}

impl GroupElement {
    pub fn identity(spec: GroupSpec) -> Self {
        match spec {
            GroupSpec::Torus { rank } => GroupElement::Torus(vec![ZERO; rank]),
            GroupSpec::Su2 => GroupElement::Su2(Mat2::identity()),
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (GroupElement::Torus(a), GroupElement::Torus(b)) if a.len() == b.len() => Ok(
                GroupElement::Torus(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            ),
            (GroupElement::Su2(a), GroupElement::Su2(b)) => Ok(GroupElement::Su2(a * b)),
            _ => Err(GsbError::InvalidPoint("mismatched group elements".into())),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Torus(z) => GroupElement::Torus(z.iter().map(|v| -v).collect()),
            GroupElement::Su2(g) => GroupElement::Su2(sl2_inverse(g)),
        }
    }

    /// Checks membership in `K_C` for `spec`.
    pub fn validate(&self, spec: GroupSpec) -> Result<()> {
        match (spec, self) {
            (GroupSpec::Torus { rank }, GroupElement::Torus(z)) => {
                if z.len() != rank {
                    return Err(GsbError::InvalidPoint(format!(
                        "expected {rank} torus coordinates, got {}",
                        z.len()
                    )));
                }
                if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                    return Err(GsbError::InvalidPoint("non-finite coordinate".into()));
                }
                Ok(())
            }
            (GroupSpec::Su2, GroupElement::Su2(g)) => {
                let det = g.determinant();
                let scale = 1.0 + g.norm_squared();
                if !(det.re.is_finite() && det.im.is_finite()) || (det - ONE).norm() > 1e-9 * scale
                {
                    return Err(GsbError::InvalidPoint(format!(
                        "SU(2) complexification needs det = 1, got {det}"
                    )));
                }
                Ok(())
            }
            _ => Err(GsbError::InvalidPoint(format!("element does not belong to {spec}"))),
        }
    }
}

pub(crate) fn sl2_inverse(g: &Mat2) -> Mat2 {
    let det = g.determinant();
    Mat2::new(g[(1, 1)], -g[(0, 1)], -g[(1, 0)], g[(0, 0)]) / det
}

/// Pauli matrices `σ_1, σ_2, σ_3`.
pub fn pauli() -> [Mat2; 3] {
    [
        Mat2::new(ZERO, ONE, ONE, ZERO),
        Mat2::new(ZERO, -I, I, ZERO),
        Mat2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// The fixed orthonormal basis `X_k = i σ_k / 2` of `su(2)`.
pub fn su2_basis() -> [Mat2; 3] {
    pauli().map(|s| s * C64::new(0.0, 0.5))
}

/// `Σ_k v_k X_k` for complex coordinates (an element of `sl(2, C)`).
pub fn su2_algebra_element(v: &[C64]) -> Mat2 {
    let b = su2_basis();
    b[0] * v[0] + b[1] * v[1] + b[2] * v[2]
}

/// Coordinates of a traceless anti-Hermitian `Z` in the basis `X_k`.
pub fn su2_coords(z: &Mat2) -> [f64; 3] {
    let s = pauli();
    let c = |k: usize| (-I * (s[k] * z).trace()).re;
    [c(0), c(1), c(2)]
}

/// `exp(Σ v_k X_k)` in `SU(2)`.
pub fn su2_exp(v: &[f64]) -> Mat2 {
    let theta = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let half = 0.5 * theta;
    // sin(θ/2)/θ, with its limit 1/2 at θ = 0
    let sinc = if theta < 1e-8 {
        0.5 - theta * theta / 48.0
    } else {
        half.sin() / theta
    };
    let s = pauli();
    let mut m = Mat2::identity() * C64::new(half.cos(), 0.0);
    for k in 0..3 {
        m += s[k] * C64::new(0.0, sinc * v[k]);
    }
    m
}

/// `e^{iY}` for `Y = Σ y_k X_k`; Hermitian, positive and of determinant one.
pub fn su2_positive_exp(y: &[f64]) -> Mat2 {
    let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
    let half = 0.5 * r;
    let shc = if r < 1e-8 {
        0.5 + r * r / 48.0
    } else {
        half.sinh() / r
    };
    let s = pauli();
    let mut m = Mat2::identity() * C64::new(half.cosh(), 0.0);
    for k in 0..3 {
        m -= s[k] * C64::new(shc * y[k], 0.0);
    }
    m
}

/// Rotation of coordinates induced by `Ad_x`, i.e. `x (v·X) x^{-1}`.
pub fn su2_adjoint(x: &Mat2, v: &[f64]) -> [f64; 3] {
    let z = su2_algebra_element(&[v[0].into(), v[1].into(), v[2].into()]);
    su2_coords(&(x * z * x.adjoint()))
}

pub fn enumerate_irreps(spec: GroupSpec, cutoff: usize) -> Vec<IrrepLabel> {
    assert!(cutoff >= 1, "cutoff must be at least 1");
    match spec {
        GroupSpec::Su2 => (1..=cutoff as u32).map(IrrepLabel::Su2).collect(),
        GroupSpec::Torus { rank } => {
            let c = cutoff as i64;
            let mut out = vec![Vec::with_capacity(rank)];
            for _ in 0..rank {
                out = out
                    .into_iter()
                    .flat_map(|prefix: Vec<i64>| {
                        (-c..=c).map(move |v| {
                            let mut p = prefix.clone();
                            p.push(v);
                            p
                        })
                    })
                    .collect();
            }
            out.into_iter().map(IrrepLabel::Torus).collect()
        }
    }
}

/// `λ_π` with `Δ_K` acting on matrix entries of `π` as `-λ_π`.
pub fn laplacian_eigenvalue(spec: GroupSpec, label: &IrrepLabel) -> Result<f64> {
    spec.check_label(label)?;
    Ok(eigenvalue_unchecked(label))
}

pub(crate) fn eigenvalue_unchecked(label: &IrrepLabel) -> f64 {
    match label {
        IrrepLabel::Torus(n) => n.iter().map(|v| (v * v) as f64).sum(),
        IrrepLabel::Su2(m) => {
            let m = *m as f64;
            (m * m - 1.0) / 4.0
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn powers(z: C64, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = ONE;
    for _ in 0..=n {
        out.push(acc);
        acc *= z;
    }
    out
}

/// `π_m(g)` for the `m`-dimensional irrep, on the basis
/// `e_k = sqrt(C(m-1, k)) z_1^{m-1-k} z_2^k` with `(π(g)p)(z) = p(z g)`.
pub(crate) fn su2_rep(m: usize, g: &Mat2) -> DMatrix<C64> {
    let deg = m - 1;
    let (a, b, c, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    // z g = (a z1 + c z2, b z1 + d z2)
    let (pa, pb, pc, pd) = (powers(a, deg), powers(b, deg), powers(c, deg), powers(d, deg));
    let binom: Vec<Vec<f64>> = (0..=deg).map(|n| (0..=n).map(|k| binomial(n, k)).collect()).collect();
    let norm: Vec<f64> = (0..=deg).map(|k| binom[deg][k].sqrt()).collect();
    let mut out = DMatrix::from_element(m, m, ZERO);
    for k in 0..m {
        let p = deg - k;
        let q = k;
        // (a z1 + c z2)^p (b z1 + d z2)^q, coefficient of z2^l
        for i in 0..=p {
            let first = pa[p - i] * pc[i] * binom[p][i];
            for j in 0..=q {
                let l = i + j;
                out[(l, k)] += first * pb[q - j] * pd[j] * binom[q][j];
            }
        }
        for l in 0..m {
            out[(l, k)] *= norm[k] / norm[l];
        }
    }
    out
}

/// Differential `dπ_m(Z)` for `Z ∈ sl(2, C)`.
pub(crate) fn su2_lie_rep(m: usize, z: &Mat2) -> DMatrix<C64> {
    let deg = m - 1;
    let norm: Vec<f64> = (0..=deg).map(|k| binomial(deg, k).sqrt()).collect();
    let mut out = DMatrix::from_element(m, m, ZERO);
    for k in 0..m {
        let p = (deg - k) as f64;
        let q = k as f64;
        out[(k, k)] += z[(0, 0)] * p + z[(1, 1)] * q;
        if k + 1 < m {
            out[(k + 1, k)] += z[(1, 0)] * p * norm[k] / norm[k + 1];
        }
        if k >= 1 {
            out[(k - 1, k)] += z[(0, 1)] * q * norm[k] / norm[k - 1];
        }
    }
    out
}

/// `π(g)`; holomorphic in `g` and unitary on `K`.
pub fn rep_matrix(spec: GroupSpec, label: &IrrepLabel, g: &GroupElement) -> Result<DMatrix<C64>> {
    spec.check_label(label)?;
    g.validate(spec)?;
    Ok(match (label, g) {
        (IrrepLabel::Torus(n), GroupElement::Torus(z)) => {
            DMatrix::from_element(1, 1, (I * torus_pairing(n, z)).exp())
        }
        (IrrepLabel::Su2(m), GroupElement::Su2(g)) => su2_rep(*m as usize, g),
        _ => unreachable!("validated above"),
    })
}

/// `dπ(Z)` for `Z = Σ v_k X_k` with complex coordinates `v` (so `Z ∈ k_C`).
pub fn lie_rep_matrix(spec: GroupSpec, label: &IrrepLabel, v: &[C64]) -> Result<DMatrix<C64>> {
    spec.check_label(label)?;
    if v.len() != spec.dim() {
        return Err(GsbError::InvalidArgument("wrong number of Lie algebra coordinates".into()));
    }
    Ok(match label {
        IrrepLabel::Torus(n) => {
            let s: C64 = n.iter().zip(v).map(|(a, b)| b * *a as f64).sum();
            DMatrix::from_element(1, 1, I * s)
        }
        IrrepLabel::Su2(m) => su2_lie_rep(*m as usize, &su2_algebra_element(v)),
    })
}

pub(crate) fn torus_pairing(n: &[i64], z: &[C64]) -> C64 {
    n.iter().zip(z).map(|(a, b)| b * *a as f64).sum()
}

/// Eigenvalue `λ` of an `SL(2, C)` matrix with trace `tr`, chosen with `|λ| >= 1`.
pub(crate) fn sl2_eigenvalue(tr: C64) -> C64 {
    let disc = (tr * tr - 4.0).sqrt();
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    if l1.norm() >= l2.norm() {
        l1
    } else {
        l2
    }
}

/// `exp(log_weight) · χ_m(g)` for `g ∈ SL(2, C)` with big eigenvalue `lambda`,
/// evaluated without forming `λ^m` so that large weights and large
/// characters can be combined without overflow.
pub(crate) fn su2_character_weighted(m: usize, lambda: C64, log_weight: f64) -> C64 {
    let inv = lambda.inv();
    let gap = lambda - inv;
    if gap.norm() < 1e-4 {
        // near λ = ±1 the ratio is 0/0-like; the Chebyshev recursion is exact there
        let tr = lambda + inv;
        let (mut prev, mut cur) = (ZERO, ONE);
        for _ in 1..m {
            let next = tr * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur * log_weight.exp();
    }
    // χ_m = λ^{m-1} (1 - λ^{-2m}) / (1 - λ^{-2})
    let inv2 = inv * inv;
    let tail = (ONE - inv2.powu(m as u32)) / (ONE - inv2);
    let log_scale = lambda.ln() * (m as f64 - 1.0) + log_weight;
    log_scale.exp() * tail
}

/// `χ_π(g) = tr π(g)`.
pub fn character(spec: GroupSpec, label: &IrrepLabel, g: &GroupElement) -> Result<C64> {
    spec.check_label(label)?;
    g.validate(spec)?;
    Ok(match (label, g) {
        (IrrepLabel::Torus(n), GroupElement::Torus(z)) => (I * torus_pairing(n, z)).exp(),
        (IrrepLabel::Su2(m), GroupElement::Su2(g)) => {
            let lambda = sl2_eigenvalue(g.trace());
            su2_character_weighted(*m as usize, lambda, 0.0)
        }
        _ => unreachable!("validated above"),
    })
}
