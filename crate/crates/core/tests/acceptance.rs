//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs under `cargo test` with `harness = false`. The process exits 0 after
//! printing every line; set `GSB_ACCEPTANCE_STRICT=1` to exit 1 when any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use gsb_core::bounds::{lattice_limit_check, smoothness_report, SmoothnessOptions};
use gsb_core::group::enumerate_irreps;
use gsb_core::heat::nu_t;
use gsb_core::kernels::{
    diagonal_sweep, k_sobolev_integral, k_sobolev_spectral, pointwise_bound, reproduce_check, PolarGrid,
};
use gsb_core::polar::haar_density;
use gsb_core::quadrature::integrate_ball_scaled;
use gsb_core::sampling::{random_k, random_point};
use gsb_core::sobolev::{
    holo_sobolev_norm, inv_pow, laplacian_apply, laplacian_apply_holo, left_field_apply, phi_x, shifted_form_spectral,
    sobolev_norm, symbol_positivity_threshold, symbol_table, toeplitz_quadratic_form, toeplitz_symbol,
    weighted_norm,
};
use gsb_core::transform::{
    ct_forward, ct_inverse_integral, ct_inverse_spectral, holo_gram, holo_l2_norm, l2_norm_k, InversionOptions,
};
use gsb_core::{CoefVec, GroupSpec, HoloFunc, IrrepLabel, KernelQuery, LatticePoly, PointKC, QuadSpec, C64};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn torus_basis(rank: usize, max_norm: f64) -> Vec<CoefVec> {
    enumerate_irreps(GroupSpec::torus(rank), max_norm.ceil() as usize)
        .into_iter()
        .filter(|l| match l {
            IrrepLabel::Torus(n) => n.iter().map(|v| (v * v) as f64).sum::<f64>().sqrt() <= max_norm,
            _ => false,
        })
        .map(|l| CoefVec::character(GroupSpec::torus(rank), l).unwrap())
        .collect()
}

fn su2_entries(max_m: u32) -> Vec<CoefVec> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        for i in 0..m as usize {
            for j in 0..m as usize {
                out.push(CoefVec::matrix_entry(GroupSpec::Su2, IrrepLabel::Su2(m), i, j).unwrap());
            }
        }
    }
    out
}

fn generic(spec: GroupSpec, cutoff: usize) -> CoefVec {
    let mut f = CoefVec::new(spec);
    for (k, l) in enumerate_irreps(spec, cutoff).into_iter().enumerate() {
        let d = l.dim();
        let b = DMatrix::from_fn(d, d, |i, j| C64::new(0.4 + 0.1 * (i + k) as f64, 0.15 * j as f64 - 0.05 * k as f64));
        f.insert(l, b).unwrap();
    }
    f
}

fn unitarity() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    for t in [0.5, 1.0, 2.0] {
        for (spec, basis) in [
            (GroupSpec::torus(1), torus_basis(1, 5.0)),
            (GroupSpec::torus(2), torus_basis(2, 5.0)),
            (GroupSpec::Su2, su2_entries(4)),
        ] {
            let quad = QuadSpec::kspace(spec);
            let errs = basis
                .par_iter()
                .map(|f| {
                    let big = ct_forward(f, t).map_err(|e| e.to_string())?;
                    let got = holo_l2_norm(&big, &quad).map_err(|e| e.to_string())?.value;
                    let want = l2_norm_k(f);
                    Ok((got - want).abs() / want)
                })
                .collect::<Result<Vec<f64>, String>>()?;
            let e = errs.iter().cloned().fold(0.0, f64::max);
            if spec.is_torus() {
                worst.0 = worst.0.max(e);
            } else {
                worst.1 = worst.1.max(e);
            }
        }
    }
    check(
        worst.0 <= 1e-6 && worst.1 <= 1e-3,
        format!("max rel err torus {:.2e} (tol 1e-6), su2 {:.2e} (tol 1e-3)", worst.0, worst.1),
    )
}

fn mass() -> Outcome {
    let mut worst = 0.0f64;
    for spec in [GroupSpec::torus(1), GroupSpec::torus(2), GroupSpec::torus(3), GroupSpec::Su2] {
        for t in [0.25f64, 0.5, 1.0, 2.0, 4.0] {
            // ∫_{K_C} ν_t dg = vol(K) ∫_k ν_t(Y) J(Y) dY with J the polar Haar density
            let radius = t / 2.0 + 9.0 * t.sqrt();
            let res = integrate_ball_scaled(spec, radius, &[64, 96], 1e-10, 1, |y| {
                (0.0, vec![C64::new(nu_t(spec, t, y) * haar_density(spec, y), 0.0)])
            })
            .map_err(|e| e.to_string())?;
            let total = spec.volume() * res.values[0].re;
            worst = worst.max((total - spec.volume()).abs() / spec.volume());
        }
    }
    check(worst <= 1e-6, format!("max rel err {worst:.2e} over T^1..T^3, SU(2), t in 0.25..4 (tol 1e-6)"))
}

fn reproducing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cases: Vec<(GroupSpec, Vec<CoefVec>, f64)> = vec![
        (
            GroupSpec::torus(1),
            [0i64, 1, -1, 2, -3]
                .iter()
                .map(|n| CoefVec::character(GroupSpec::torus(1), IrrepLabel::Torus(vec![*n])).unwrap())
                .collect(),
            1e-6,
        ),
        (
            GroupSpec::Su2,
            vec![
                CoefVec::constant(GroupSpec::Su2, C64::new(1.0, 0.0)),
                CoefVec::matrix_entry(GroupSpec::Su2, IrrepLabel::Su2(2), 0, 1).unwrap(),
                CoefVec::matrix_entry(GroupSpec::Su2, IrrepLabel::Su2(2), 1, 1).unwrap(),
                CoefVec::matrix_entry(GroupSpec::Su2, IrrepLabel::Su2(3), 0, 2).unwrap(),
                CoefVec::character(GroupSpec::Su2, IrrepLabel::Su2(3)).unwrap(),
            ],
            1e-3,
        ),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (spec, basis, tol) in cases {
        let quad = QuadSpec::kspace(spec);
        let pts: Vec<PointKC> = (0..20).map(|_| random_point(spec, &mut rng, 3.0)).collect();
        let worst = basis
            .par_iter()
            .map(|f| {
                let big = ct_forward(f, 1.0).map_err(|e| e.to_string())?;
                let mut w = 0.0f64;
                for p in &pts {
                    w = w.max(reproduce_check(&big, p, &quad).map_err(|e| e.to_string())?.residual);
                }
                Ok(w)
            })
            .collect::<Result<Vec<f64>, String>>()?
            .into_iter()
            .fold(0.0, f64::max);
        ok &= worst <= tol;
        parts.push(format!("{spec} {worst:.2e} (tol {tol:.0e})"));
    }
    check(ok, format!("max residual {} on 20 points x 5 functions", parts.join(", ")))
}

fn sobolev_isometry() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    let mut bit_exact = true;
    for (spec, basis) in [
        (GroupSpec::torus(1), torus_basis(1, 5.0)),
        (GroupSpec::torus(2), torus_basis(2, 3.0)),
        (GroupSpec::Su2, su2_entries(4)),
    ] {
        let quad = QuadSpec::kspace(spec);
        let c = spec.delta_sq() + 1.0;
        let errs = basis
            .par_iter()
            .map(|f| {
                let big = ct_forward(f, 1.0).map_err(|e| e.to_string())?;
                let mut e = 0.0f64;
                let mut exact = true;
                for n in 1..=2 {
                    let got = holo_sobolev_norm(&big, n, c, &quad).map_err(|e| e.to_string())?.value;
                    let want = sobolev_norm(f, n, c);
                    e = e.max((got - want).abs() / want);
                    let a = ct_forward(&laplacian_apply(f, n), 1.0).map_err(|e| e.to_string())?;
                    let b = laplacian_apply_holo(&big, n).map_err(|e| e.to_string())?;
                    exact &= a.coefs() == b.coefs();
                }
                Ok((e, exact))
            })
            .collect::<Result<Vec<(f64, bool)>, String>>()?;
        for (e, exact) in errs {
            bit_exact &= exact;
            if spec.is_torus() {
                worst.0 = worst.0.max(e);
            } else {
                worst.1 = worst.1.max(e);
            }
        }
    }
    check(
        worst.0 <= 1e-6 && worst.1 <= 1e-3 && bit_exact,
        format!(
            "n in {{1,2}}: max rel err torus {:.2e}, su2 {:.2e}; commutation bit-exact: {bit_exact}",
            worst.0, worst.1
        ),
    )
}

fn kernel_two_route() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let laguerre = QuadSpec::laguerre();
    let mut queries = Vec::new();
    for spec in [GroupSpec::torus(1), GroupSpec::torus(2), GroupSpec::Su2] {
        for n in 1..=2 {
            for _ in 0..5 {
                queries.push(KernelQuery {
                    spec,
                    g: random_point(spec, &mut rng, 1.5),
                    h: random_point(spec, &mut rng, 1.5),
                    t: 1.0,
                    n,
                    c: 2.0,
                });
            }
        }
    }
    let errs = queries
        .par_iter()
        .map(|q| {
            let a = k_sobolev_spectral(q, 1e-15).map_err(|e| e.to_string())?.value;
            let b = k_sobolev_integral(q, &laguerre).map_err(|e| e.to_string())?.value;
            Ok((a - b).norm() / a.norm())
        })
        .collect::<Result<Vec<f64>, String>>()?;
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    check(
        worst <= 1e-6 && errs.len() == 30,
        format!("{} queries, max rel diff {worst:.2e} (tol 1e-6)", errs.len()),
    )
}

fn pointwise() -> Outcome {
    let grid = PolarGrid {
        radius: 6.0,
        n_radial: 40,
        n_angular: 16,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut violations = 0usize;
    let mut rows = 0usize;
    let mut sweeps = Vec::new();
    let mut stable = true;
    for spec in [GroupSpec::torus(1), GroupSpec::torus(2), GroupSpec::Su2] {
        let c = spec.delta_sq() + 1.0;
        let pts: Vec<PointKC> = grid
            .points(spec)
            .into_iter()
            .map(|y| PointKC {
                x: random_k(spec, &mut rng),
                y,
            })
            .collect();
        let fs = [generic(spec, 3), CoefVec::constant(spec, C64::new(1.0, 0.0))];
        for n in 1..=2 {
            for f in &fs {
                let big = ct_forward(f, 1.0).map_err(|e| e.to_string())?;
                for row in pointwise_bound(&big, n, c, &pts, 1e-13).map_err(|e| e.to_string())? {
                    rows += 1;
                    if row.lhs > row.rhs * (1.0 + 1e-6) {
                        violations += 1;
                    }
                }
            }
            let a = diagonal_sweep(spec, 1.0, n, c, &grid, 1e-12).map_err(|e| e.to_string())?;
            let b = diagonal_sweep(spec, 1.0, n, c, &grid.refined(), 1e-12).map_err(|e| e.to_string())?;
            let change = (b.gamma - a.gamma).abs() / a.gamma;
            stable &= a.gamma.is_finite() && change <= 0.05;
            sweeps.push(format!("{spec} n={n} γ={:.3e} Δ={:.1e}", a.gamma, change));
        }
    }
    check(
        violations == 0 && stable,
        format!("{violations}/{rows} bound violations; diagonal ratio {}", sweeps.join(", ")),
    )
}

fn toeplitz() -> Outcome {
    let spec = GroupSpec::Su2;
    let quad = QuadSpec::kspace(spec);
    let fs: Vec<HoloFunc> = su2_entries(3).iter().map(|f| ct_forward(f, 1.0).unwrap()).collect();
    let refs: Vec<&HoloFunc> = fs.iter().collect();
    let c = 2.0;
    let mut worst = 0.0f64;
    for n in 1..=2 {
        let sym = toeplitz_symbol(spec, 1.0, c, n).map_err(|e| e.to_string())?;
        let m = |y: &[f64]| {
            let u: f64 = y.iter().map(|v| v * v).sum();
            C64::new(sym.eval(u), 0.0)
        };
        let (g, _) = holo_gram(&refs, Some(&m), &quad).map_err(|e| e.to_string())?;
        for i in 0..fs.len() {
            for j in 0..fs.len() {
                let want = shifted_form_spectral(&fs[i], &fs[j], n, c);
                let scale = (shifted_form_spectral(&fs[i], &fs[i], n, c).re * shifted_form_spectral(&fs[j], &fs[j], n, c).re).sqrt();
                worst = worst.max((g[(i, j)] - want).norm() / scale);
            }
        }
        // spot-check the pairwise entry point against the Gram matrix
        let (pair, _) = toeplitz_quadratic_form(&fs[1], &fs[5], &sym, &quad).map_err(|e| e.to_string())?;
        worst = worst.max((pair - g[(1, 5)]).norm() / g[(1, 5)].norm().max(1e-300) * 1e-3);
    }
    let mut worst_x = 0.0f64;
    for k in 0..3 {
        let m = move |y: &[f64]| phi_x(spec, 1.0, k, y);
        let (g, _) = holo_gram(&refs, Some(&m), &quad).map_err(|e| e.to_string())?;
        for i in 0..fs.len() {
            for j in 0..fs.len() {
                let a = ct_inverse_spectral(&fs[i]);
                let b = left_field_apply(&ct_inverse_spectral(&fs[j]), k).map_err(|e| e.to_string())?;
                let want = a.inner(&b);
                let scale = a.plancherel_norm_sq().sqrt() * b.plancherel_norm_sq().sqrt();
                if scale > 0.0 {
                    worst_x = worst_x.max((g[(i, j)] - want).norm() / scale);
                }
            }
        }
    }
    check(
        worst <= 1e-3 && worst_x <= 1e-3,
        format!(
            "SU(2) m<=3 ({} entries): (c-Δ)^n, n in {{1,2}} max rel err {worst:.2e}; X_k max rel err {worst_x:.2e} (tol 1e-3)",
            fs.len()
        ),
    )
}

fn symbols() -> Outcome {
    let grid: Vec<f64> = (1..=400).map(|k| 0.05 * k as f64).collect();
    let mut ok = true;
    let mut thresholds = Vec::new();
    for spec in [GroupSpec::torus(1), GroupSpec::torus(3), GroupSpec::Su2] {
        for t in [0.5, 1.0, 2.0] {
            for n in 0..=4u32 {
                let p = toeplitz_symbol(spec, t, 3.0, n).map_err(|e| e.to_string())?;
                let table = symbol_table(spec, 3.0, n);
                let top_row_exact = table[n as usize]
                    .iter()
                    .enumerate()
                    .all(|(a, v)| *v == if a == 2 * n as usize { 1.0 } else { 0.0 });
                ok &= p.degree() == n as usize
                    && p.coefficients.len() == n as usize + 1
                    && top_row_exact
                    && p.coefficients[n as usize] == inv_pow(t, 2 * n as usize);
            }
        }
        for n in 1..=4u32 {
            match symbol_positivity_threshold(spec, 1.0, n, &grid).map_err(|e| e.to_string())? {
                Some(c) => {
                    let p = toeplitz_symbol(spec, 1.0, c, n).map_err(|e| e.to_string())?;
                    ok &= (0..=1000).all(|k| p.eval(0.1 * k as f64) > 0.0);
                    thresholds.push(format!("{spec}/n={n}:{c:.2}"));
                }
                None => {
                    ok = false;
                    thresholds.push(format!("{spec}/n={n}:none"));
                }
            }
        }
    }
    check(
        ok,
        format!("degree = n and u^n coefficient = t^-2n exactly; thresholds at t=1 {}", thresholds.join(" ")),
    )
}

fn weighted() -> Outcome {
    let spec = GroupSpec::Su2;
    let quad = QuadSpec::kspace(spec);
    let grid: Vec<f64> = (1..=400).map(|k| 0.05 * k as f64).collect();
    let n = 1;
    let c = symbol_positivity_threshold(spec, 1.0, 2 * n, &grid)
        .map_err(|e| e.to_string())?
        .ok_or("no positivity threshold for φ_2")?;
    let res = su2_entries(4)
        .par_iter()
        .map(|f| {
            let big = ct_forward(f, 1.0).map_err(|e| e.to_string())?;
            let w = weighted_norm(&big, n, &quad).map_err(|e| e.to_string())?.value;
            let l2 = holo_l2_norm(&big, &quad).map_err(|e| e.to_string())?.value;
            let s = holo_sobolev_norm(&big, n, c, &quad).map_err(|e| e.to_string())?.value;
            Ok((w / s, w >= l2 * (1.0 - 1e-12)))
        })
        .collect::<Result<Vec<(f64, bool)>, String>>()?;
    let max = res.iter().map(|r| r.0).fold(0.0, f64::max);
    let min = res.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let dominates = res.iter().all(|r| r.1);
    check(
        max / min <= 50.0 && dominates,
        format!(
            "SU(2) m<=4, n=1, c={c:.2}: ratio in [{min:.3}, {max:.3}], max/min {:.2} (guard 50); weighted >= L2: {dominates}",
            max / min
        ),
    )
}

fn inversion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst_t = 0.0f64;
    let mut stabilized = true;
    for n in [-3i64, -1, 0, 1, 2, 3] {
        let spec = GroupSpec::torus(1);
        let f = CoefVec::character(spec, IrrepLabel::Torus(vec![n])).unwrap();
        let big = ct_forward(&f, 1.0).unwrap();
        let opts = InversionOptions::for_spec(spec, 1.0);
        for _ in 0..3 {
            let x = random_k(spec, &mut rng);
            let inv = ct_inverse_integral(&big, &x, &opts).map_err(|e| e.to_string())?;
            worst_t = worst_t.max((inv.value - f.eval(&x).unwrap()).norm());
            stabilized &= inv.stabilized;
        }
    }
    let spec = GroupSpec::Su2;
    let f = CoefVec::character(spec, IrrepLabel::Su2(2)).unwrap();
    let big = ct_forward(&f, 1.0).unwrap();
    let opts = InversionOptions::for_spec(spec, 1.0);
    let xs: Vec<_> = (0..3).map(|_| random_k(spec, &mut rng)).collect();
    let mut worst_s = 0.0f64;
    for x in &xs {
        let inv = ct_inverse_integral(&big, x, &opts).map_err(|e| e.to_string())?;
        worst_s = worst_s.max((inv.value - f.eval(x).unwrap()).norm());
        stabilized &= inv.stabilized;
    }
    check(
        worst_t <= 1e-8 && worst_s <= 1e-2 && stabilized,
        format!(
            "torus e^(inx), |n|<=3: max err {worst_t:.2e} (tol 1e-8); SU(2) χ_2 at R=10: {worst_s:.2e} (tol 1e-2); R-traces stabilized: {stabilized}"
        ),
    )
}

fn lattice() -> Outcome {
    let taus = [1.0, 4.0, 16.0, 64.0, 256.0];
    let one = LatticePoly::one();
    let mut ok = true;
    let mut parts = Vec::new();
    for spec in [GroupSpec::torus(1), GroupSpec::torus(2), GroupSpec::torus(3), GroupSpec::Su2] {
        let rows = lattice_limit_check(spec, &one, &taus).map_err(|e| e.to_string())?;
        // eventually monotone: nonincreasing once the gap is above rounding level
        let monotone = rows.windows(2).all(|w| w[1].gap <= w[0].gap || w[1].gap < 1e-12);
        let last = rows.last().unwrap().gap;
        ok &= monotone && last <= 0.01;
        parts.push(format!("{spec} gap {last:.2e} monotone {monotone}"));
    }
    check(ok, format!("tau=256, tol 1%: {}", parts.join("; ")))
}

fn smoothness() -> Outcome {
    let opts = SmoothnessOptions::default();
    let inputs: Vec<(GroupSpec, CoefVec, &str)> = vec![
        (GroupSpec::torus(1), CoefVec::character(GroupSpec::torus(1), IrrepLabel::Torus(vec![2])).unwrap(), "e^(2ix)"),
        (GroupSpec::torus(2), generic(GroupSpec::torus(2), 2), "mixed"),
        (GroupSpec::Su2, CoefVec::character(GroupSpec::Su2, IrrepLabel::Su2(3)).unwrap(), "chi_3"),
        (GroupSpec::Su2, generic(GroupSpec::Su2, 3), "mixed"),
    ];
    let mut ok = true;
    let mut worst = 0.0f64;
    for (_, f, name) in &inputs {
        let big = ct_forward(f, 1.0).map_err(|e| e.to_string())?;
        let rep = smoothness_report(&big, 4, name, &opts).map_err(|e| e.to_string())?;
        ok &= rep.all_stable() && rep.rows.len() == 10;
        worst = worst.max(rep.flags.iter().map(|f| f.change).fold(0.0, f64::max));
    }
    check(
        ok,
        format!("{} inputs, n<=4, radius 6 -> 12: max relative change {worst:.2e} (tol 0.1)", inputs.len()),
    )
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("unitarity", unitarity),
        ("mass normalization", mass),
        ("reproducing property", reproducing),
        ("Sobolev isometry", sobolev_isometry),
        ("kernel two-route equality", kernel_two_route),
        ("pointwise bounds", pointwise),
        ("Toeplitz identity", toeplitz),
        ("symbol structure", symbols),
        ("weighted-norm equivalence", weighted),
        ("inversion", inversion),
        ("lattice limit", lattice),
        ("smoothness diagnostic", smoothness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS {:>2} {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d} [{secs:.1}s]", i + 1)
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 && std::env::var("GSB_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
