//! `gsb verify`: each suite compares two independently computed sides per case.

use std::fmt;

use clap::ValueEnum;
use gsb_core::group::enumerate_irreps;
use gsb_core::heat::nu_t;
use gsb_core::kernels::{k_sobolev_integral, k_sobolev_spectral, reproduce_check};
use gsb_core::polar::haar_density;
use gsb_core::quadrature::integrate_ball_scaled;
use gsb_core::sampling::random_point;
use gsb_core::sobolev::{
    holo_sobolev_norm, laplacian_apply, laplacian_apply_holo, left_field_apply, phi_x, shifted_form_spectral,
    sobolev_norm, symbol_positivity_threshold, toeplitz_symbol, weighted_norm,
};
use gsb_core::transform::{ct_forward, ct_inverse_spectral, holo_gram, holo_l2_norm, l2_norm_k};
use gsb_core::{CoefVec, GroupSpec, GsbError, HoloFunc, IrrepLabel, KernelQuery, PointKC, QuadSpec, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{CPolicy, RunConfig};
use crate::output::{tag_num, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Unitarity,
    Reproducing,
    SobolevIsometry,
    KernelTworoute,
    Toeplitz,
    WeightedNorm,
    Mass,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

pub const VERIFY_COLUMNS: [&str; 7] = ["case_id", "lhs", "rhs", "rel_err", "tol", "pass", "gap"];

/// One verified comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
    pub gap: f64,
}

impl Case {
    /// `rel_err = |lhs - rhs| / |rhs|`, passing when within `tol`.
    pub fn relative(id: impl Into<String>, lhs: f64, rhs: f64, tol: f64, gap: f64) -> Case {
        let rel_err = (lhs - rhs).abs() / rhs.abs();
        Case::judged(id, lhs, rhs, rel_err, tol, gap)
    }

    pub fn judged(id: impl Into<String>, lhs: f64, rhs: f64, rel_err: f64, tol: f64, gap: f64) -> Case {
        Case {
            id: id.into(),
            lhs,
            rhs,
            rel_err,
            tol,
            pass: rel_err.is_finite() && rel_err <= tol,
            gap,
        }
    }

    fn failed(id: String, tol: f64, err: &GsbError) -> Case {
        eprintln!("case {id}: {err}");
        Case {
            id,
            lhs: f64::NAN,
            rhs: f64::NAN,
            rel_err: f64::NAN,
            tol,
            pass: false,
            gap: f64::NAN,
        }
    }
}

/// A suite that cannot run with the given configuration.
#[derive(Debug)]
pub struct SuiteConfigError(pub String);

/// Runs `f` on every item in parallel, keeping input order.
fn run_cases<T, F>(items: &[T], tol: f64, f: F) -> Vec<Case>
where
    T: Sync,
    F: Fn(&T) -> (String, Result<Vec<Case>, GsbError>) + Sync,
{
    items
        .par_iter()
        .map(|item| match f(item) {
            (_, Ok(cases)) => cases,
            (id, Err(e)) => vec![Case::failed(id, tol, &e)],
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Test basis: torus characters with `|n| ≤ cutoff`, SU(2) matrix entries with `m ≤ cutoff`.
pub fn basis(spec: GroupSpec, cutoff: usize) -> Vec<(String, CoefVec)> {
    let mut out = Vec::new();
    for l in enumerate_irreps(spec, cutoff) {
        match &l {
            IrrepLabel::Torus(n) => {
                if n.iter().map(|v| v * v).sum::<i64>() as f64 <= (cutoff * cutoff) as f64 {
                    out.push((l.to_string(), CoefVec::character(spec, l.clone()).expect("label from spec")));
                }
            }
            IrrepLabel::Su2(m) => {
                for i in 0..*m as usize {
                    for j in 0..*m as usize {
                        let f = CoefVec::matrix_entry(spec, l.clone(), i, j).expect("index in range");
                        out.push((format!("{l}[{i},{j}]"), f));
                    }
                }
            }
        }
    }
    out
}

fn default_tol(spec: GroupSpec) -> f64 {
    if spec.is_torus() {
        1e-6
    } else {
        1e-3
    }
}

fn unitarity(cfg: &RunConfig, t: f64) -> Vec<Case> {
    let spec = cfg.group;
    let tol = cfg.tolerance.unwrap_or(default_tol(spec));
    let quad = cfg.kspace_quad();
    run_cases(&basis(spec, cfg.cutoff), tol, |(id, f)| {
        let r = (|| {
            let big = ct_forward(f, t)?;
            let got = holo_l2_norm(&big, &quad)?;
            Ok(vec![Case::relative(id.clone(), got.value, l2_norm_k(f), tol, got.gap)])
        })();
        (id.clone(), r)
    })
}

fn mass(cfg: &RunConfig, t: f64) -> Vec<Case> {
    let spec = cfg.group;
    let tol = cfg.tolerance.unwrap_or(1e-10);
    let levels = cfg.levels.clone().unwrap_or_else(|| vec![64, 96]);
    let radius = (t / 2.0 + 9.0 * t.sqrt()).min(gsb_core::polar::OVERFLOW_GUARD);
    let id = format!("mass/{spec}/t={}", tag_num(t));
    let r = integrate_ball_scaled(spec, radius, &levels, tol, 1, |y| {
        (0.0, vec![C64::new(nu_t(spec, t, y) * haar_density(spec, y), 0.0)])
    });
    match r {
        Ok(res) => {
            let total = spec.volume() * res.values[0].re;
            vec![Case::relative(id, total, spec.volume(), tol, res.gap * spec.volume())]
        }
        Err(e) => vec![Case::failed(id, tol, &e)],
    }
}

fn reproducing(cfg: &RunConfig, t: f64) -> Vec<Case> {
    let spec = cfg.group;
    let tol = cfg.tolerance.unwrap_or(default_tol(spec));
    let quad = cfg.kspace_quad();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let points: Vec<PointKC> = (0..20).map(|_| random_point(spec, &mut rng, 3.0)).collect();
    let fs: Vec<(String, CoefVec)> = basis(spec, cfg.cutoff).into_iter().take(5).collect();
    run_cases(&fs, tol, |(id, f)| {
        let r = (|| {
            let big = ct_forward(f, t)?;
            points
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    let rc = reproduce_check(&big, p, &quad)?;
                    Ok(Case::judged(
                        format!("{id}@p{k}"),
                        rc.value.norm(),
                        rc.reproduced.norm(),
                        rc.residual,
                        tol,
                        rc.gap,
                    ))
                })
                .collect()
        })();
        (id.clone(), r)
    })
}

fn sobolev_isometry(cfg: &RunConfig, t: f64) -> Vec<Case> {
    let spec = cfg.group;
    let tol = cfg.tolerance.unwrap_or(default_tol(spec));
    let quad = cfg.kspace_quad();
    let c = cfg.kernel_c();
    let ns = cfg.n.clone();
    run_cases(&basis(spec, cfg.cutoff), tol, |(id, f)| {
        let r = (|| {
            let big = ct_forward(f, t)?;
            let mut out = Vec::new();
            for &n in &ns {
                let got = holo_sobolev_norm(&big, n, c, &quad)?;
                out.push(Case::relative(format!("{id}/n={n}"), got.value, sobolev_norm(f, n, c), tol, got.gap));
                // commutation with the heat flow is exact on coefficients
                let a = ct_forward(&laplacian_apply(f, n), t)?;
                let b = laplacian_apply_holo(&big, n)?;
                let diff = coef_max_diff(a.coefs(), b.coefs());
                out.push(Case::judged(format!("{id}/n={n}/commute"), diff, 0.0, diff, 0.0, 0.0));
            }
            Ok(out)
        })();
        (id.clone(), r)
    })
}

fn coef_max_diff(a: &CoefVec, b: &CoefVec) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for (l, ba) in a.iter() {
        match b.get(l) {
            Some(bb) => worst = worst.max((ba - bb).iter().map(|z| z.norm()).fold(0.0, f64::max)),
            None => return f64::INFINITY,
        }
    }
    worst
}

fn kernel_two_route(cfg: &RunConfig, t: f64) -> Result<Vec<Case>, SuiteConfigError> {
    let spec = cfg.group;
    let tol = cfg.tolerance.unwrap_or(1e-6);
    let c = cfg.kernel_c();
    if !(c > spec.delta_sq()) {
        return Err(SuiteConfigError(format!(
            "kernel-tworoute needs c > |δ|^2 = {}",
            spec.delta_sq()
        )));
    }
    let ns: Vec<u32> = cfg.n.iter().copied().filter(|n| *n >= 1).collect();
    if ns.is_empty() {
        return Err(SuiteConfigError("kernel-tworoute needs some n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let queries: Vec<KernelQuery> = (0..30)
        .map(|k| KernelQuery {
            spec,
            g: random_point(spec, &mut rng, 1.5),
            h: random_point(spec, &mut rng, 1.5),
            t,
            n: ns[k % ns.len()],
            c,
        })
        .collect();
    let laguerre = QuadSpec::laguerre().with_levels(vec![32, 64, 128]);
    let indexed: Vec<(usize, KernelQuery)> = queries.into_iter().enumerate().collect();
    Ok(run_cases(&indexed, tol, |(k, q)| {
        let id = format!("q{k}/n={}", q.n);
        let r = (|| {
            let a = k_sobolev_spectral(q, 1e-15)?.value;
            let b = k_sobolev_integral(q, &laguerre)?;
            let rel = (a - b.value).norm() / a.norm();
            Ok(vec![Case::judged(id.clone(), b.value.norm(), a.norm(), rel, tol, b.gap)])
        })();
        (id, r)
    }))
}

fn toeplitz(cfg: &RunConfig, t: f64) -> Vec<Case> {
    let spec = cfg.group;
    let tol = cfg.tolerance.unwrap_or(1e-3);
    let quad = cfg.kspace_quad();
    let c = cfg.kernel_c();
    let named = basis(spec, cfg.cutoff);
    let fs = match named.iter().map(|(_, f)| ct_forward(f, t)).collect::<Result<Vec<HoloFunc>, _>>() {
        Ok(v) => v,
        Err(e) => return vec![Case::failed("toeplitz".into(), tol, &e)],
    };
    let refs: Vec<&HoloFunc> = fs.iter().collect();
    let ids: Vec<&str> = named.iter().map(|(id, _)| id.as_str()).collect();
    let mut out = Vec::new();

    for &n in &cfg.n {
        let id = format!("shift/n={n}");
        let sym = match toeplitz_symbol(spec, t, c, n) {
            Ok(s) => s,
            Err(e) => {
                out.push(Case::failed(id, tol, &e));
                continue;
            }
        };
        let m = |y: &[f64]| {
            let u: f64 = y.iter().map(|v| v * v).sum();
            C64::new(sym.eval(u), 0.0)
        };
        match holo_gram(&refs, Some(&m), &quad) {
            Ok((g, gap)) => {
                let diag: Vec<f64> = fs.iter().map(|f| shifted_form_spectral(f, f, n, c).re).collect();
                for i in 0..fs.len() {
                    for j in 0..fs.len() {
                        let want = shifted_form_spectral(&fs[i], &fs[j], n, c);
                        let scale = (diag[i] * diag[j]).sqrt();
                        let rel = (g[(i, j)] - want).norm() / scale;
                        out.push(Case::judged(
                            format!("{id}/{}|{}", ids[i], ids[j]),
                            g[(i, j)].norm(),
                            want.norm(),
                            rel,
                            tol,
                            gap,
                        ));
                    }
                }
            }
            Err(e) => out.push(Case::failed(id, tol, &e)),
        }
    }

    let originals: Vec<CoefVec> = fs.iter().map(ct_inverse_spectral).collect();
    for k in 0..spec.dim() {
        let id = format!("X{k}");
        let m = move |y: &[f64]| phi_x(spec, t, k, y);
        let res = holo_gram(&refs, Some(&m), &quad).and_then(|(g, gap)| {
            let moved = originals
                .iter()
                .map(|f| left_field_apply(f, k))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((g, gap, moved))
        });
        match res {
            Ok((g, gap, moved)) => {
                for i in 0..fs.len() {
                    for j in 0..fs.len() {
                        let want = originals[i].inner(&moved[j]);
                        let scale = originals[i].plancherel_norm_sq().sqrt() * moved[j].plancherel_norm_sq().sqrt();
                        // X_k annihilates constants; the form is then identically zero
                        let rel = if scale > 0.0 {
                            (g[(i, j)] - want).norm() / scale
                        } else {
                            g[(i, j)].norm()
                        };
                        out.push(Case::judged(
                            format!("{id}/{}|{}", ids[i], ids[j]),
                            g[(i, j)].norm(),
                            want.norm(),
                            rel,
                            tol,
                            gap,
                        ));
                    }
                }
            }
            Err(e) => out.push(Case::failed(id, tol, &e)),
        }
    }
    out
}

/// The `c` making `φ_{2n}` positive on the test grid, or the configured one.
fn weighted_c(cfg: &RunConfig, t: f64, n: u32) -> Result<Option<f64>, GsbError> {
    match cfg.c {
        CPolicy::Fixed(c) => Ok(Some(c)),
        CPolicy::Auto => {
            let grid: Vec<f64> = (1..=400).map(|k| 0.05 * k as f64).collect();
            symbol_positivity_threshold(cfg.group, t, 2 * n, &grid)
        }
    }
}

fn weighted_norm_suite(cfg: &RunConfig, t: f64) -> Vec<Case> {
    let spec = cfg.group;
    let spread_tol = cfg.tolerance.unwrap_or(50.0);
    let quad = cfg.kspace_quad();
    let named = basis(spec, cfg.cutoff);
    let mut out = Vec::new();
    for &n in &cfg.n {
        let c = match weighted_c(cfg, t, n) {
            Ok(Some(c)) => c,
            Ok(None) => {
                let e = GsbError::InvalidArgument(format!("no positivity threshold for n={n}"));
                out.push(Case::failed(format!("spread/n={n}"), spread_tol, &e));
                continue;
            }
            Err(e) => {
                out.push(Case::failed(format!("spread/n={n}"), spread_tol, &e));
                continue;
            }
        };
        let rows = run_cases(&named, f64::INFINITY, |(id, f)| {
            let id = format!("{id}/n={n}");
            let r = (|| {
                let big = ct_forward(f, t)?;
                let w = weighted_norm(&big, n, &quad)?;
                let l2 = holo_l2_norm(&big, &quad)?;
                let s = holo_sobolev_norm(&big, n, c, &quad)?;
                let ratio = w.value / s.value;
                let mut case = Case::judged(id.clone(), w.value, s.value, ratio, f64::INFINITY, w.gap.max(s.gap));
                // the weight is at least 1, so the weighted norm dominates L^2
                case.pass &= w.value >= l2.value * (1.0 - 1e-12);
                Ok(vec![case])
            })();
            (id, r)
        });
        let ratios: Vec<f64> = rows.iter().map(|r| r.rel_err).collect();
        let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let gap = rows.iter().map(|r| r.gap).fold(0.0, f64::max);
        out.extend(rows);
        out.push(Case::judged(format!("spread/n={n}"), max, min, max / min, spread_tol, gap));
    }
    out
}

/// Runs one suite for every configured `t`, one table per `t`.
pub fn run(suite: Suite, cfg: &RunConfig) -> Result<Vec<Table>, SuiteConfigError> {
    let mut tables = Vec::new();
    for &t in &cfg.t {
        let cases = match suite {
            Suite::Unitarity => unitarity(cfg, t),
            Suite::Reproducing => reproducing(cfg, t),
            Suite::SobolevIsometry => sobolev_isometry(cfg, t),
            Suite::KernelTworoute => kernel_two_route(cfg, t)?,
            Suite::Toeplitz => toeplitz(cfg, t),
            Suite::WeightedNorm => weighted_norm_suite(cfg, t),
            Suite::Mass => mass(cfg, t),
        };
        let mut table = Table::new(
            format!("{suite}_{}_t{}", cfg.group_tag(), tag_num(t)),
            &VERIFY_COLUMNS,
        );
        for c in cases {
            table.push(vec![
                c.id.into(),
                c.lhs.into(),
                c.rhs.into(),
                c.rel_err.into(),
                c.tol.into(),
                c.pass.into(),
                c.gap.into(),
            ]);
        }
        tables.push(table);
    }
    Ok(tables)
}

/// True when every `pass` cell of every verify table is `true`.
pub fn all_pass(tables: &[Table]) -> bool {
    use crate::output::Cell;
    tables
        .iter()
        .all(|t| !t.rows.is_empty() && t.rows.iter().all(|r| r[5] == Cell::Flag(true)))
}
