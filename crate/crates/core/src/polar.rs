//! Polar coordinates `g = x e^{iY}` on `K_C`, the function `Φ`, the Haar
//! density in polar form and the left-invariant frame `X_k`, `JX_k`
//! written against `(x, Y)` derivatives.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GsbError, Result};
use crate::group::{
    pauli, sl2_inverse, su2_adjoint, su2_exp, su2_positive_exp, GroupElement, GroupSpec, Mat2, C64,
};

/// Largest `|Y|` accepted anywhere in the crate; `e^{|Y|}` stays far from
/// overflow and characters up to the supported cutoffs remain finite.
pub const OVERFLOW_GUARD: f64 = 50.0;

/// Polar pair `(x, Y)` with `x ∈ K` and `Y ∈ k` in the fixed orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PointKC {
    pub x: GroupElement,
    pub y: Vec<f64>,
}

impl PointKC {
    pub fn identity(spec: GroupSpec) -> Self {
        PointKC {
            x: GroupElement::identity(spec),
            y: vec![0.0; spec.dim()],
        }
    }

    /// `e^{iY}`, the point with trivial `K` part.
    pub fn positive(spec: GroupSpec, y: Vec<f64>) -> Self {
        PointKC {
            x: GroupElement::identity(spec),
            y,
        }
    }

    pub fn y_norm(&self) -> f64 {
        norm(&self.y)
    }

    pub fn validate(&self, spec: GroupSpec) -> Result<()> {
        spec.check_coords(&self.y)?;
        self.x.validate(spec)?;
        let r = self.y_norm();
        if !r.is_finite() {
            return Err(GsbError::InvalidPoint("non-finite Lie algebra coordinate".into()));
        }
        if r > OVERFLOW_GUARD {
            return Err(GsbError::OverflowGuard {
                norm: r,
                guard: OVERFLOW_GUARD,
            });
        }
        match &self.x {
            GroupElement::Torus(z) => {
                if z.iter().any(|v| v.im != 0.0) {
                    return Err(GsbError::InvalidPoint("torus K part must be real".into()));
                }
            }
            GroupElement::Su2(x) => {
                if (x.adjoint() * x - Mat2::identity()).norm() > 1e-9 {
                    return Err(GsbError::InvalidPoint("SU(2) K part must be unitary".into()));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn norm(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Splits `g = x e^{iY}`.
pub fn polar_decompose(spec: GroupSpec, g: &GroupElement) -> Result<PointKC> {
    g.validate(spec)?;
    match g {
        GroupElement::Torus(z) => {
            let y: Vec<f64> = z.iter().map(|v| v.im).collect();
            check_guard(&y)?;
            Ok(PointKC {
                x: GroupElement::Torus(z.iter().map(|v| C64::new(v.re.rem_euclid(TAU), 0.0)).collect()),
                y,
            })
        }
        GroupElement::Su2(g) => {
            let gg = g.adjoint() * g;
            // sqrt of a 2x2 positive matrix with det 1: (A + I)/sqrt(tr A + 2)
            let tr = gg.trace().re;
            let p = (gg + Mat2::identity()) / C64::new((tr + 2.0).sqrt(), 0.0);
            let half_tr = p.trace() * 0.5;
            let traceless = p - Mat2::identity() * half_tr;
            let s = pauli();
            let v: Vec<f64> = (0..3).map(|k| -0.5 * (traceless * s[k]).trace().re).collect();
            let vn = norm(&v);
            let r = 2.0 * vn.asinh();
            let y: Vec<f64> = if vn == 0.0 {
                vec![0.0; 3]
            } else {
                v.iter().map(|c| c * r / vn).collect()
            };
            check_guard(&y)?;
            let x = g * sl2_inverse(&p);
            Ok(PointKC {
                x: GroupElement::Su2(x),
                y,
            })
        }
    }
}

fn check_guard(y: &[f64]) -> Result<()> {
    let r = norm(y);
    if r > OVERFLOW_GUARD {
        Err(GsbError::OverflowGuard {
            norm: r,
            guard: OVERFLOW_GUARD,
        })
    } else {
        Ok(())
    }
}

/// `x e^{iY}`.
pub fn polar_compose(spec: GroupSpec, p: &PointKC) -> GroupElement {
    debug_assert_eq!(p.y.len(), spec.dim());
    match &p.x {
        GroupElement::Torus(x) => GroupElement::Torus(
            x.iter().zip(&p.y).map(|(a, b)| C64::new(a.re, *b)).collect(),
        ),
        GroupElement::Su2(x) => GroupElement::Su2(x * su2_positive_exp(&p.y)),
    }
}

/// Polar form of `(x e^{iY})^* = e^{iY} x^{-1} = x^{-1} e^{i Ad_x Y}`.
pub fn star(spec: GroupSpec, p: &PointKC) -> PointKC {
    let _ = spec;
    match &p.x {
        GroupElement::Torus(x) => PointKC {
            x: GroupElement::Torus(x.iter().map(|a| C64::new((-a.re).rem_euclid(TAU), 0.0)).collect()),
            y: p.y.clone(),
        },
        GroupElement::Su2(x) => PointKC {
            x: GroupElement::Su2(x.adjoint()),
            y: su2_adjoint(x, &p.y).to_vec(),
        },
    }
}

/// `s / sinh s`, with its Taylor expansion near zero.
pub(crate) fn s_over_sinh(s: f64) -> f64 {
    if s < 1e-4 {
        let s2 = s * s;
        1.0 - s2 / 6.0 + 7.0 * s2 * s2 / 360.0
    } else {
        s / s.sinh()
    }
}

/// `Φ(Y)`: identically one on tori, `|Y| / sinh|Y|` on `SU(2)`.
pub fn phi(spec: GroupSpec, y: &[f64]) -> f64 {
    match spec {
        GroupSpec::Torus { .. } => 1.0,
        GroupSpec::Su2 => s_over_sinh(norm(y)),
    }
}

/// `log Φ(Y)`, stable for large `|Y|`.
pub(crate) fn log_phi(spec: GroupSpec, y: &[f64]) -> f64 {
    match spec {
        GroupSpec::Torus { .. } => 0.0,
        GroupSpec::Su2 => {
            let s = norm(y);
            if s < 20.0 {
                s_over_sinh(s).ln()
            } else {
                // sinh s = e^s (1 - e^{-2s}) / 2
                s.ln() + std::f64::consts::LN_2 - s - (-(-2.0 * s).exp()).ln_1p()
            }
        }
    }
}

/// Density of `dg` against `dx dY`, that is `Φ(Y)^{-2}`.
pub fn haar_density(spec: GroupSpec, y: &[f64]) -> f64 {
    let p = phi(spec, y);
    1.0 / (p * p)
}

/// Coefficients of the frame expansion
///
/// `X_k = Σ_l a_{lk} X̃_l + b_{lk} ∂/∂y_l` and `JX_k = Σ_l c_{lk} X̃_l + d_{lk} ∂/∂y_l`,
///
/// stored so that column `k` describes `X_k` (resp. `JX_k`). Here `X̃_l` is the
/// derivative along `x e^{sX_l} e^{iY}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameCoefficients {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

/// `ad Y` as a matrix on coordinates: with `[X_j, X_k] = -ε_{jkl} X_l`,
/// `ad Y (v) = -(y × v)`.
fn su2_ad(y: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(
        3,
        3,
        &[0.0, y[2], -y[1], -y[2], 0.0, y[0], y[1], -y[0], 0.0],
    )
}

/// `tanh(s/2)/s` and `s coth s`, with series near zero.
fn frame_scalars(s: f64) -> (f64, f64) {
    if s < 1e-4 {
        let s2 = s * s;
        (0.5 - s2 / 24.0, 1.0 + s2 / 3.0 - s2 * s2 / 45.0)
    } else {
        ((0.5 * s).tanh() / s, s / s.tanh())
    }
}

pub fn frame_coefficients(spec: GroupSpec, y: &[f64]) -> FrameCoefficients {
    let n = spec.dim();
    match spec {
        GroupSpec::Torus { .. } => FrameCoefficients {
            a: DMatrix::identity(n, n),
            b: DMatrix::zeros(n, n),
            c: DMatrix::zeros(n, n),
            d: DMatrix::identity(n, n),
        },
        GroupSpec::Su2 => {
            // ad Y has eigenvalues 0, ±i s, so the matrix functions reduce to
            // scalars on the projections onto Y and its orthogonal complement.
            let s = norm(y);
            let ad = su2_ad(y);
            let (th, sc) = frame_scalars(s);
            let mut proj = DMatrix::zeros(3, 3);
            if s > 0.0 {
                for i in 0..3 {
                    for j in 0..3 {
                        proj[(i, j)] = y[i] * y[j] / (s * s);
                    }
                }
            }
            let perp = DMatrix::identity(3, 3) - &proj;
            FrameCoefficients {
                a: DMatrix::identity(3, 3),
                b: ad.clone(),
                c: ad * (-th),
                d: proj + perp * sc,
            }
        }
    }
}

/// Which left-invariant field to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameKind {
    X,
    JX,
}

/// Finite-difference controls for [`frame_apply`].
#[derive(Debug, Clone, Copy)]
pub struct FdOptions {
    /// Base step; `None` means `1e-5 (1 + |Y|)`.
    pub h: Option<f64>,
    /// Largest acceptable Richardson error estimate, relative to `1 + |result|`.
    pub tol: f64,
}

impl Default for FdOptions {
    fn default() -> Self {
        FdOptions { h: None, tol: 1e-6 }
    }
}

/// Moves `p` by `x ↦ x e^{sX_l}`.
fn shift_x(spec: GroupSpec, p: &PointKC, l: usize, s: f64) -> GroupElement {
    let x = match &p.x {
        GroupElement::Torus(x) => {
            let mut x = x.clone();
            x[l] += s;
            GroupElement::Torus(x)
        }
        GroupElement::Su2(x) => {
            let mut v = [0.0; 3];
            v[l] = s;
            GroupElement::Su2(x * su2_exp(&v))
        }
    };
    polar_compose(spec, &PointKC { x, y: p.y.clone() })
}

fn shift_y(spec: GroupSpec, p: &PointKC, l: usize, s: f64) -> GroupElement {
    let mut y = p.y.clone();
    y[l] += s;
    polar_compose(spec, &PointKC { x: p.x.clone(), y })
}

fn central(f: &dyn Fn(f64) -> C64, h: f64) -> C64 {
    (f(h) - f(-h)) / (2.0 * h)
}

/// Applies `X_k` or `JX_k` to a holomorphic evaluator at `p` through the
/// polar frame expansion, using central differences in `x` and `Y`.
///
/// The step is checked by comparing steps `h` and `h/2`; a disagreement
/// above `opts.tol · (1 + |value|)` is reported as [`GsbError::StepTooLarge`].
pub fn frame_apply(
    spec: GroupSpec,
    f: &(dyn Fn(&GroupElement) -> C64 + Sync),
    p: &PointKC,
    k: usize,
    kind: FrameKind,
    opts: FdOptions,
) -> Result<C64> {
    p.validate(spec)?;
    let n = spec.dim();
    if k >= n {
        return Err(GsbError::InvalidArgument(format!("basis index {k} out of range for {spec}")));
    }
    let h = opts.h.unwrap_or(1e-5 * (1.0 + p.y_norm()));
    if !(h > 0.0 && h.is_finite()) {
        return Err(GsbError::InvalidArgument("finite-difference step must be positive".into()));
    }
    let fc = frame_coefficients(spec, &p.y);
    let (cx, cy) = match kind {
        FrameKind::X => (&fc.a, &fc.b),
        FrameKind::JX => (&fc.c, &fc.d),
    };
    let eval = |h: f64| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for l in 0..n {
            let wx = cx[(l, k)];
            if wx != 0.0 {
                acc += central(&|s| f(&shift_x(spec, p, l, s)), h) * wx;
            }
            let wy = cy[(l, k)];
            if wy != 0.0 {
                acc += central(&|s| f(&shift_y(spec, p, l, s)), h) * wy;
            }
        }
        acc
    };
    let coarse = eval(h);
    let fine = eval(0.5 * h);
    // central differences are second order, so the Richardson estimate of the
    // error of `fine` is (fine - coarse) / 3
    let estimate = (fine - coarse).norm() / 3.0;
    let value = fine + (fine - coarse) / 3.0;
    if estimate > opts.tol * (1.0 + value.norm()) {
        return Err(GsbError::StepTooLarge {
            estimate,
            tolerance: opts.tol,
        });
    }
    Ok(value)
}

/// Reference derivative along the group curve `g e^{sX_k}` (or `g e^{isX_k}`),
/// used as an independent oracle for [`frame_apply`].
pub fn group_curve_derivative(
    spec: GroupSpec,
    f: &dyn Fn(&GroupElement) -> C64,
    g: &GroupElement,
    k: usize,
    kind: FrameKind,
    h: f64,
) -> C64 {
    let step = |s: f64| -> GroupElement {
        match (spec, g) {
            (GroupSpec::Torus { .. }, GroupElement::Torus(z)) => {
                let mut z = z.clone();
                z[k] += match kind {
                    FrameKind::X => C64::new(s, 0.0),
                    FrameKind::JX => C64::new(0.0, s),
                };
                GroupElement::Torus(z)
            }
            (GroupSpec::Su2, GroupElement::Su2(m)) => {
                let mut v = [0.0; 3];
                v[k] = s;
                let e = match kind {
                    FrameKind::X => su2_exp(&v),
                    // e^{i s X_k}
                    FrameKind::JX => su2_positive_exp(&v),
                };
                GroupElement::Su2(m * e)
            }
            _ => panic!("element does not match group"),
        }
    };
    let d1 = (f(&step(h)) - f(&step(-h))) / (2.0 * h);
    let d2 = (f(&step(0.5 * h)) - f(&step(-0.5 * h))) / h;
    d2 + (d2 - d1) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn times_i(z: C64) -> C64 {
        C64::new(-z.im, z.re)
    }
    use crate::group::{rep_matrix, su2_rep, IrrepLabel, I};
    use crate::sampling::{random_k, random_point};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mat(g: &GroupElement) -> Mat2 {
        match g {
            GroupElement::Su2(m) => *m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn decompose_examples() {
        let su2 = GroupSpec::Su2;
        let p = polar_decompose(su2, &GroupElement::identity(su2)).unwrap();
        assert!(p.y_norm() < 1e-15);
        assert!((mat(&p.x) - Mat2::identity()).norm() < 1e-15);

        let e = std::f64::consts::E;
        let g = Mat2::new(C64::new(e, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0 / e, 0.0));
        let p = polar_decompose(su2, &GroupElement::Su2(g)).unwrap();
        assert!((mat(&p.x) - Mat2::identity()).norm() < 1e-12);
        // iY = diag(1, -1) means Y = -i diag(1,-1) = -2 X_3
        assert!((p.y[0]).abs() < 1e-12 && (p.y[1]).abs() < 1e-12);
        assert!((p.y[2] + 2.0).abs() < 1e-12);

        let t = GroupSpec::torus(2);
        let z = vec![C64::new(7.0, -0.5), C64::new(-1.0, 2.0)];
        let p = polar_decompose(t, &GroupElement::Torus(z)).unwrap();
        assert_eq!(p.y, vec![-0.5, 2.0]);
        match &p.x {
            GroupElement::Torus(x) => {
                assert!((x[0].re - (7.0 - TAU)).abs() < 1e-14);
                assert!((x[1].re - (TAU - 1.0)).abs() < 1e-14);
            }
            _ => unreachable!(),
        }
        assert!(polar_decompose(su2, &GroupElement::Su2(Mat2::identity() * C64::new(2.0, 0.0))).is_err());
    }

    #[test]
    fn compose_round_trip_su2() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let su2 = GroupSpec::Su2;
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let p = random_point(su2, &mut rng, 4.0);
            let g = polar_compose(su2, &p);
            let q = polar_decompose(su2, &g).unwrap();
            let back = polar_compose(su2, &q);
            worst = worst.max((mat(&back) - mat(&g)).norm());
            // uniqueness of the decomposition
            worst = worst.max((mat(&q.x) - mat(&p.x)).norm());
            worst = worst.max(norm(&q.y.iter().zip(&p.y).map(|(a, b)| a - b).collect::<Vec<_>>()));
        }
        assert!(worst < 1e-10, "worst {worst}");
    }

    #[test]
    fn star_examples() {
        let su2 = GroupSpec::Su2;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = random_k(su2, &mut rng);
        let s = star(su2, &PointKC { x: x.clone(), y: vec![0.0; 3] });
        assert!((mat(&s.x) - sl2_inverse(&mat(&x))).norm() < 1e-12);
        let y = vec![0.3, -0.2, 1.0];
        let s = star(su2, &PointKC::positive(su2, y.clone()));
        assert!((mat(&s.x) - Mat2::identity()).norm() < 1e-15);
        assert_eq!(s.y, y);
        for _ in 0..20 {
            let p = random_point(su2, &mut rng, 3.0);
            let g = mat(&polar_compose(su2, &p));
            let sp = star(su2, &p);
            assert!((mat(&polar_compose(su2, &sp)) - g.adjoint()).norm() < 1e-12);
            let back = star(su2, &sp);
            assert!((mat(&back.x) - mat(&p.x)).norm() < 1e-12);
            assert!(norm(&back.y.iter().zip(&p.y).map(|(a, b)| a - b).collect::<Vec<_>>()) < 1e-12);
        }
    }

    #[test]
    fn phi_and_density_examples() {
        assert_eq!(phi(GroupSpec::torus(3), &[1.0, 2.0, 3.0]), 1.0);
        assert_eq!(haar_density(GroupSpec::torus(1), &[4.0]), 1.0);
        let s = 2.0f64;
        let y = [0.0, s * 0.6, s * 0.8];
        assert!((phi(GroupSpec::Su2, &y) - s / s.sinh()).abs() < 1e-14);
        assert!((haar_density(GroupSpec::Su2, &y) - (s.sinh() / s).powi(2)).abs() < 1e-12);
        assert_eq!(phi(GroupSpec::Su2, &[0.0; 3]), 1.0);
        assert_eq!(haar_density(GroupSpec::Su2, &[0.0; 3]), 1.0);
        let tiny = phi(GroupSpec::Su2, &[1e-9, 0.0, 0.0]);
        assert!((tiny - 1.0).abs() < 1e-15);
        for s in [0.5, 10.0, 30.0, 49.0] {
            let direct = (s / f64::sinh(s)).ln();
            assert!((log_phi(GroupSpec::Su2, &[s, 0.0, 0.0]) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn frame_at_zero_and_torus() {
        for spec in [GroupSpec::Su2, GroupSpec::torus(2)] {
            let fc = frame_coefficients(spec, &vec![0.0; spec.dim()]);
            let n = spec.dim();
            assert_eq!(fc.a, DMatrix::identity(n, n));
            assert_eq!(fc.d, DMatrix::identity(n, n));
            assert_eq!(fc.b, DMatrix::zeros(n, n));
            assert_eq!(fc.c, DMatrix::zeros(n, n));
        }
        let fc = frame_coefficients(GroupSpec::torus(2), &[3.0, -1.0]);
        assert_eq!(fc.a, DMatrix::identity(2, 2));
        assert_eq!(fc.c, DMatrix::zeros(2, 2));
    }

    #[test]
    fn frame_matches_group_curve_derivatives() {
        let su2 = GroupSpec::Su2;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let p = random_point(su2, &mut rng, 2.5);
            let g = polar_compose(su2, &p);
            for (i, j) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
                let f = move |h: &GroupElement| su2_rep(2, &mat(h))[(i, j)];
                for k in 0..3 {
                    for kind in [FrameKind::X, FrameKind::JX] {
                        let got = frame_apply(su2, &f, &p, k, kind, FdOptions::default()).unwrap();
                        let oracle = group_curve_derivative(su2, &f, &g, k, kind, 1e-4);
                        assert!((got - oracle).norm() < 1e-6 * (1.0 + oracle.norm()), "{got} vs {oracle}");
                    }
                }
            }
        }
    }

    #[test]
    fn holomorphy_identity_on_random_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for spec in [GroupSpec::Su2, GroupSpec::torus(2)] {
            for sample in 0..50 {
                let p = random_point(spec, &mut rng, 3.0);
                let label = match spec {
                    GroupSpec::Su2 => IrrepLabel::Su2(2 + (sample % 3) as u32),
                    _ => IrrepLabel::Torus(vec![1, -2]),
                };
                let f = |h: &GroupElement| rep_matrix(spec, &label, h).unwrap()[(0, 0)];
                let val = f(&polar_compose(spec, &p)).norm();
                for k in 0..spec.dim() {
                    let x = frame_apply(spec, &f, &p, k, FrameKind::X, FdOptions::default()).unwrap();
                    let jx = frame_apply(spec, &f, &p, k, FrameKind::JX, FdOptions::default()).unwrap();
                    assert!((jx - times_i(x)).norm() <= 1e-6 * (1.0 + val));
                }
            }
        }
    }

    #[test]
    fn frame_apply_examples() {
        let spec = GroupSpec::torus(1);
        let p = PointKC {
            x: GroupElement::Torus(vec![C64::new(0.4, 0.0)]),
            y: vec![-0.3],
        };
        let n = 3i64;
        let f = |h: &GroupElement| match h {
            GroupElement::Torus(z) => (I * z[0] * n as f64).exp(),
            _ => unreachable!(),
        };
        let fv = f(&polar_compose(spec, &p));
        let x = frame_apply(spec, &f, &p, 0, FrameKind::X, FdOptions::default()).unwrap();
        assert!((x - I * n as f64 * fv).norm() < 1e-8);
        let jx = frame_apply(spec, &f, &p, 0, FrameKind::JX, FdOptions::default()).unwrap();
        assert!((jx - I * x).norm() < 1e-8);

        let one = |_: &GroupElement| C64::new(1.0, 0.0);
        for spec in [GroupSpec::Su2, GroupSpec::torus(2)] {
            let p = PointKC::positive(spec, vec![0.5; spec.dim()]);
            for k in 0..spec.dim() {
                for kind in [FrameKind::X, FrameKind::JX] {
                    assert_eq!(frame_apply(spec, &one, &p, k, kind, FdOptions::default()).unwrap().norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn oversized_step_is_reported() {
        let spec = GroupSpec::Su2;
        let p = PointKC::positive(spec, vec![0.5, 0.1, -0.2]);
        let f = |h: &GroupElement| su2_rep(5, &mat(h))[(0, 4)];
        let err = frame_apply(spec, &f, &p, 0, FrameKind::JX, FdOptions { h: Some(0.5), tol: 1e-10 });
        assert!(matches!(err, Err(GsbError::StepTooLarge { .. })));
    }

    proptest! {
        #[test]
        fn phi_is_even_and_ad_invariant(y in prop::array::uniform3(-6.0f64..6.0), seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = mat(&random_k(GroupSpec::Su2, &mut rng));
            let p = phi(GroupSpec::Su2, &y);
            let neg = [-y[0], -y[1], -y[2]];
            prop_assert!((phi(GroupSpec::Su2, &neg) - p).abs() <= 1e-12);
            prop_assert!((phi(GroupSpec::Su2, &su2_adjoint(&x, &y)) - p).abs() <= 1e-12);
            prop_assert!(p > 0.0 && p <= 1.0);
        }

        #[test]
        fn torus_round_trip(x in -20.0f64..20.0, y in -10.0f64..10.0) {
            let spec = GroupSpec::torus(1);
            let p = polar_decompose(spec, &GroupElement::Torus(vec![C64::new(x, y)])).unwrap();
            let g = polar_compose(spec, &p);
            match g {
                GroupElement::Torus(z) => {
                    prop_assert!(((z[0].re - x).rem_euclid(TAU)).min(TAU - (z[0].re - x).rem_euclid(TAU)) < 1e-12);
                    prop_assert_eq!(z[0].im, y);
                }
                _ => unreachable!(),
            }
        }
    }
}
