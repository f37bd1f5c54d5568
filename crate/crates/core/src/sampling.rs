//! Deterministic random points for property checks and CLI sweeps.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, UnitBall, UnitSphere};

use crate::group::{GroupElement, GroupSpec, Mat2, C64};
use crate::polar::PointKC;

/// Haar-distributed point of `K`.
pub fn random_k<R: Rng + ?Sized>(spec: GroupSpec, rng: &mut R) -> GroupElement {
    match spec {
        GroupSpec::Torus { rank } => GroupElement::Torus(
            (0..rank)
                .map(|_| C64::new(rng.gen_range(0.0..std::f64::consts::TAU), 0.0))
                .collect(),
        ),
        GroupSpec::Su2 => {
            // a uniformly distributed unit quaternion
            let q: Vec<f64> = loop {
                let q: Vec<f64> = (0..4).map(|_| StandardNormal.sample(rng)).collect();
                let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
                if n > 1e-12 {
                    break q.iter().map(|v| v / n).collect();
                }
            };
            let a = C64::new(q[0], q[1]);
            let b = C64::new(q[2], q[3]);
            GroupElement::Su2(Mat2::new(a, -b.conj(), b, a.conj()))
        }
    }
}

/// Random `Y` uniform in the ball of radius `max_norm`.
pub fn random_y<R: Rng + ?Sized>(spec: GroupSpec, rng: &mut R, max_norm: f64) -> Vec<f64> {
    match spec.dim() {
        3 => {
            let v: [f64; 3] = UnitBall.sample(rng);
            v.iter().map(|c| c * max_norm).collect()
        }
        d => {
            let dir: Vec<f64> = if d == 2 {
                let v: [f64; 2] = rand_distr::UnitCircle.sample(rng);
                v.to_vec()
            } else if d == 1 {
                vec![if rng.gen_bool(0.5) { 1.0 } else { -1.0 }]
            } else {
                let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
                let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                v.iter().map(|c| c / n).collect()
            };
            let r = max_norm * rng.gen::<f64>().powf(1.0 / d as f64);
            dir.iter().map(|c| c * r).collect()
        }
    }
}

/// Random polar point with Haar `x` and `|Y| ≤ max_norm`.
pub fn random_point<R: Rng + ?Sized>(spec: GroupSpec, rng: &mut R, max_norm: f64) -> PointKC {
    PointKC {
        x: random_k(spec, rng),
        y: random_y(spec, rng, max_norm),
    }
}

/// Uniform direction on the unit sphere of `su(2)`.
pub fn random_direction3<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    UnitSphere.sample(rng)
}
