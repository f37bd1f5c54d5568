//! `gsb invert`: reconstruct `f` on `K` from `C_t f` by the truncated integral.

use gsb_core::transform::{ct_forward, ct_inverse_integral, InversionOptions};
use gsb_core::{CoefVec, GroupElement, GsbError};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::output::{fmt_num, tag_num, Table};

pub const INVERT_COLUMNS: [&str; 11] = [
    "point",
    "value_re",
    "value_im",
    "spectral_re",
    "spectral_im",
    "abs_err",
    "stabilized",
    "radius",
    "trace",
    "gap",
    "error",
];

fn describe(x: &GroupElement) -> String {
    match x {
        GroupElement::Torus(z) => z.iter().map(|v| fmt_num(v.re)).collect::<Vec<_>>().join(" "),
        GroupElement::Su2(m) => [m[(0, 0)].re, m[(0, 0)].im, m[(1, 0)].re, m[(1, 0)].im]
            .iter()
            .map(|v| fmt_num(*v))
            .collect::<Vec<_>>()
            .join(" "),
    }
}

/// One table per `t`. The second value is false when some point failed outright.
pub fn run(cfg: &RunConfig, f: &CoefVec, points: &[GroupElement]) -> Result<(Vec<Table>, bool), GsbError> {
    let spec = f.spec();
    let mut tables = Vec::new();
    let mut ok = true;
    for &t in &cfg.t {
        let big = ct_forward(f, t)?;
        let mut opts = InversionOptions::for_spec(spec, t);
        if let Some(r) = &cfg.radii {
            opts.radii = r.clone();
        }
        if let Some(l) = &cfg.levels {
            opts.levels = l.clone();
        }
        if let Some(tol) = cfg.tolerance {
            opts.tolerance = tol;
        }
        let results: Vec<_> = points
            .par_iter()
            .map(|x| (f.eval(x), ct_inverse_integral(&big, x, &opts)))
            .collect();
        let mut table = Table::new(format!("invert_{}_t{}", spec.to_string().replace(':', ""), tag_num(t)), &INVERT_COLUMNS);
        for (x, (want, got)) in points.iter().zip(results) {
            match (want, got) {
                (Ok(w), Ok(inv)) => {
                    let trace = inv
                        .trace
                        .iter()
                        .map(|(r, v)| format!("{}:{}:{}", tag_num(*r), fmt_num(v.re), fmt_num(v.im)))
                        .collect::<Vec<_>>()
                        .join(";");
                    table.push(vec![
                        describe(x).into(),
                        inv.value.re.into(),
                        inv.value.im.into(),
                        w.re.into(),
                        w.im.into(),
                        (inv.value - w).norm().into(),
                        inv.stabilized.into(),
                        inv.trace.last().map_or(f64::NAN, |(r, _)| *r).into(),
                        trace.into(),
                        inv.gap.into(),
                        "".into(),
                    ]);
                }
                (w, g) => {
                    ok = false;
                    let msg = w.err().or(g.err()).map(|e| e.to_string()).unwrap_or_default();
                    let nan = f64::NAN;
                    table.push(vec![
                        describe(x).into(),
                        nan.into(),
                        nan.into(),
                        nan.into(),
                        nan.into(),
                        nan.into(),
                        false.into(),
                        nan.into(),
                        "".into(),
                        nan.into(),
                        msg.into(),
                    ]);
                }
            }
        }
        tables.push(table);
    }
    Ok((tables, ok))
}
