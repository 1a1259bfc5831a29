use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use weldlab_core::cauchy::jump_decompose;
use weldlab_core::grunsky::{
    grunsky_matrix_coeff, grunsky_matrix_proj, grunsky_norm, kahler_potential_of, multi_grunsky, pi_report,
};
use weldlab_core::operator::hs_norm;
use weldlab_core::sewing::sew_two_full;
use weldlab_core::suite::run_suite;
use weldlab_core::welding::{map_diagnostics, weld, DiagGrid};
use weldlab_core::{BoundaryFunction, CircleHomeo, OperatorMatrix, PowerSeriesMap, RiggedSphere};

use crate::config::{read_json, Command, Route, RunConfig};

/// A report plus an optional matrix for the CSV side file.
pub struct Artifact {
    pub report: Value,
    pub matrix: Option<OperatorMatrix>,
}

impl Artifact {
    fn report(report: impl Serialize) -> Result<Self> {
        Ok(Self { report: serde_json::to_value(report)?, matrix: None })
    }
}

pub fn run(cfg: &RunConfig) -> Result<Artifact> {
    let c = &cfg.common;
    let n = c.order;
    match &cfg.command {
        Command::Weld { homeo } => {
            let mut h: CircleHomeo = read_json(homeo)?;
            h = CircleHomeo::new(h.cos_coeffs().to_vec(), h.sin_coeffs().to_vec(), c.grid)?;
            Artifact::report(weld(&h, n, c.tol)?)
        }
        Command::Grunsky { map } => {
            let f: PowerSeriesMap = read_json(map)?;
            let gr = match c.route {
                Route::Coeff => grunsky_matrix_coeff(&f, n)?,
                Route::Proj => grunsky_matrix_proj(&f, n)?,
            };
            let report = json!({
                "hs_norm": hs_norm(&gr),
                "operator_norm": grunsky_norm(&gr),
                "matrix": gr.to_json(),
            });
            Ok(Artifact { report, matrix: Some(gr) })
        }
        Command::Jump { map, boundary } => {
            let f: PowerSeriesMap = read_json(map)?;
            let h: BoundaryFunction = read_json(boundary)?;
            Artifact::report(jump_decompose(&f, &h, n)?)
        }
        Command::Sew { left, i, right, j } => {
            let s1: RiggedSphere = read_json(left)?;
            let s2: RiggedSphere = read_json(right)?;
            let sewn = sew_two_full(&s1, *i, &s2, *j, n, c.tol)?;
            Artifact::report(json!({
                "sphere": sewn.sphere,
                "invariants": sewn.invariants,
                "seam_residual": sewn.residual,
            }))
        }
        Command::Periods { sphere } => {
            let s: RiggedSphere = read_json(sphere)?;
            let gr = multi_grunsky(&s, n)?;
            let report = json!({ "hs_norm": hs_norm(&gr), "matrix": gr.to_json() });
            Ok(Artifact { report, matrix: Some(gr) })
        }
        Command::Diag { map } => {
            let f: PowerSeriesMap = read_json(map)?;
            let gr = grunsky_matrix_coeff(&f, n)?;
            let pi = pi_report(&f, n, c.tol)?;
            let d = map_diagnostics(&f, &DiagGrid::default())?;
            Artifact::report(json!({
                "grunsky_hs_norm": hs_norm(&gr),
                "grunsky_operator_norm": grunsky_norm(&gr),
                "grunsky_max_entry": gr.entries.iter().map(|z| z.norm()).fold(0.0, f64::max),
                "kahler_potential": kahler_potential_of(&gr.entries)?,
                "pi": pi,
                "a1inf_norm": d.a1inf_norm,
                "a12_norm": d.a12_norm,
                "fprime0": d.fprime0,
            }))
        }
        Command::Suite => {
            let report = run_suite(c.seed);
            for r in &report.criteria {
                eprintln!("{}", r.line());
            }
            Artifact::report(report)
        }
    }
}

/// Writes the report (with the config) as JSON to `--out` or stdout, and
/// the matrix, if any, as CSV next to it.
pub fn write(cfg: &RunConfig, art: &Artifact) -> Result<()> {
    let doc = json!({ "config": cfg, "result": art.report });
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    match &cfg.common.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            if let Some(m) = &art.matrix {
                write_csv(cfg, m, &path.with_extension("csv"))?;
            }
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_csv(cfg: &RunConfig, m: &OperatorMatrix, path: &Path) -> Result<()> {
    let header = format!("# weldlab {}\n", serde_json::to_string(cfg)?);
    std::fs::write(path, header + &m.to_csv()).with_context(|| format!("writing {}", path.display()))
}
