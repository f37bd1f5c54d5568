//! `gsb report`: diagnostic tables with no pass/fail verdict.

use clap::ValueEnum;
use gsb_core::bounds::{consistency_rows, lattice_limit_check, lattice_sum, smoothness_report, SmoothnessOptions};
use gsb_core::sobolev::toeplitz_symbol;
use gsb_core::transform::ct_forward;
use gsb_core::{CoefVec, GsbError, LatticePoly, C64};

use crate::config::RunConfig;
use crate::output::{tag_num, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    Bounds,
    Smoothness,
    Lattice,
    Symbol,
}

pub const SYMBOL_COLUMNS: [&str; 6] = ["power", "coefficient", "degree", "n", "c", "t"];
pub const LATTICE_COLUMNS: [&str; 4] = ["tau", "scaled", "target", "gap"];
pub const ALPHA_COLUMNS: [&str; 4] = ["t", "tau", "scaled", "alpha"];
pub const CONSISTENCY_COLUMNS: [&str; 5] = ["tau", "y_norm", "lhs", "rhs", "ratio"];
pub const SMOOTHNESS_COLUMNS: [&str; 6] = ["n", "radius", "value", "argmax_norm", "change", "stable"];

const CONSISTENCY_RADII: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

fn symbol(cfg: &RunConfig) -> Result<Vec<Table>, GsbError> {
    let c = cfg.kernel_c();
    let mut out = Vec::new();
    for &t in &cfg.t {
        let mut table = Table::new(format!("symbol_{}_t{}", cfg.group_tag(), tag_num(t)), &SYMBOL_COLUMNS);
        for &n in &cfg.n {
            let p = toeplitz_symbol(cfg.group, t, c, n)?;
            for (power, coef) in p.coefficients.iter().enumerate() {
                table.push(vec![
                    power.into(),
                    (*coef).into(),
                    p.degree().into(),
                    n.into(),
                    c.into(),
                    t.into(),
                ]);
            }
        }
        out.push(table);
    }
    Ok(out)
}

fn lattice(cfg: &RunConfig) -> Result<Vec<Table>, GsbError> {
    let rows = lattice_limit_check(cfg.group, &LatticePoly::one(), &cfg.tau)?;
    let mut table = Table::new(format!("lattice_{}", cfg.group_tag()), &LATTICE_COLUMNS);
    for r in rows {
        table.push(vec![r.tau.into(), r.scaled.into(), r.target.into(), r.gap.into()]);
    }
    Ok(vec![table])
}

/// `α_t` over `τ ∈ {t, 2t, 4t}`, then the heat-kernel bound it implies.
fn bounds(cfg: &RunConfig) -> Result<Vec<Table>, GsbError> {
    let spec = cfg.group;
    let half_rank = spec.rank() as f64 / 2.0;
    let radii = cfg.radii.clone().unwrap_or_else(|| CONSISTENCY_RADII.to_vec());
    let mut out = Vec::new();
    for &t in &cfg.t {
        let taus = [t, 2.0 * t, 4.0 * t];
        let scaled = taus
            .iter()
            .map(|&tau| Ok(lattice_sum(spec, tau, &LatticePoly::one())? * tau.powf(-half_rank)))
            .collect::<Result<Vec<f64>, GsbError>>()?;
        let alpha = scaled.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let tag = format!("{}_t{}", cfg.group_tag(), tag_num(t));
        let mut a = Table::new(format!("bounds_alpha_{tag}"), &ALPHA_COLUMNS);
        for (tau, s) in taus.iter().zip(&scaled) {
            a.push(vec![t.into(), (*tau).into(), (*s).into(), alpha.into()]);
        }
        let mut b = Table::new(format!("bounds_consistency_{tag}"), &CONSISTENCY_COLUMNS);
        for r in consistency_rows(spec, alpha, &taus, &radii)? {
            b.push(vec![r.tau.into(), r.y_norm.into(), r.lhs.into(), r.rhs.into(), (r.lhs / r.rhs).into()]);
        }
        out.push(a);
        out.push(b);
    }
    Ok(out)
}

/// `G_n` of `C_t f` at two radii; `f ≡ 1` unless a coefficient file is given.
fn smoothness(cfg: &RunConfig, coefs: Option<&CoefVec>) -> Result<Vec<Table>, GsbError> {
    let spec = cfg.group;
    let one = CoefVec::constant(spec, C64::new(1.0, 0.0));
    let (f, descriptor) = match coefs {
        Some(f) => (f, "file"),
        None => (&one, "one"),
    };
    let mut opts = SmoothnessOptions::default();
    if let Some(r) = &cfg.radii {
        if r.len() != 2 {
            return Err(GsbError::InvalidArgument("smoothness needs exactly two radii".into()));
        }
        opts.radius = r[0];
        opts.outer_radius = r[1];
    }
    let mut out = Vec::new();
    for &t in &cfg.t {
        let rep = smoothness_report(&ct_forward(f, t)?, cfg.n_max, descriptor, &opts)?;
        let mut table = Table::new(
            format!("smoothness_{}_t{}", cfg.group_tag(), tag_num(t)),
            &SMOOTHNESS_COLUMNS,
        );
        for row in &rep.rows {
            let flag = rep.flags.iter().find(|fl| fl.n == row.n);
            table.push(vec![
                row.n.into(),
                row.radius.into(),
                row.value.into(),
                row.argmax_norm.into(),
                flag.map_or(f64::NAN, |fl| fl.change).into(),
                flag.is_some_and(|fl| fl.stable).into(),
            ]);
        }
        out.push(table);
    }
    Ok(out)
}

pub fn run(kind: ReportKind, cfg: &RunConfig, coefs: Option<&CoefVec>) -> Result<Vec<Table>, GsbError> {
    match kind {
        ReportKind::Symbol => symbol(cfg),
        ReportKind::Lattice => lattice(cfg),
        ReportKind::Bounds => bounds(cfg),
        ReportKind::Smoothness => smoothness(cfg, coefs),
    }
}
