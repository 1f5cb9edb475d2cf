//! `soliton`: tabulates `|Q_j(t)|` for the pure-soliton solution on the half
//! lattice and checks the boundary closure at every sample.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::config::{Format, Mode, RunConfig};
use super::output::{emit, site_label, to_json, Table};
use super::Outcome;
use crate::boundary::Branch;
use crate::error::Result;
use crate::mirror::{standard_t_samples, verify_boundary, BoundaryCheck, SolitonSolution, BOUNDARY_TOL};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolitonReport {
    pub f1inf: C64,
    pub branch: Branch,
    /// Both closures over `t = -10..=10`.
    pub check: BoundaryCheck,
    pub sites: Vec<i64>,
    pub times: Vec<f64>,
    pub abs_q: Vec<Vec<f64>>,
    /// Closure residual on `branch` at each sample time.
    pub boundary_residual: Vec<f64>,
}

impl SolitonReport {
    pub fn max_boundary_residual(&self) -> f64 {
        self.boundary_residual.iter().fold(0.0, |m, v| if v.is_nan() { f64::INFINITY } else { m.max(*v) })
    }

    pub fn passed(&self) -> bool {
        self.max_boundary_residual() < BOUNDARY_TOL
    }

    pub fn table(&self) -> Table {
        let mut cols = vec!["t".to_string()];
        cols.extend(self.sites.iter().map(|j| site_label("abs_q", *j)));
        cols.push("boundary_residual".into());
        let mut table = Table::new(cols);
        for (k, t) in self.times.iter().enumerate() {
            let mut row = vec![*t];
            row.extend(&self.abs_q[k]);
            row.push(self.boundary_residual[k]);
            table.push(row);
        }
        table
    }
}

/// Sample times `t_start, t_start + dt·stride, …` up to `t_end`.
fn sample_times(t_start: f64, t_end: f64, step: f64) -> Vec<f64> {
    let count = ((t_end - t_start) / step + 1e-9).floor() as usize;
    (0..=count).map(|k| t_start + k as f64 * step).collect()
}

/// Evaluates the configured soliton on its grid without writing anything.
pub fn soliton_grid(cfg: &RunConfig) -> Result<SolitonReport> {
    let p = cfg.model_params()?;
    let dd = cfg.discrete_data()?;
    let sol_cfg = cfg.soliton.as_ref().expect("validated by discrete_data");
    let time = cfg.time()?;
    let branch = dd.bp.branch;
    let sol = SolitonSolution::new(&dd, &p)?;
    let check = verify_boundary(&dd, &standard_t_samples(), &p)?;
    let lo = if sol_cfg.mirror { -sol_cfg.j_max - 1 } else { -1 };
    let sites: Vec<i64> = (lo..=sol_cfg.j_max).collect();
    let times = sample_times(time.t_start, time.t_end, time.dt * time.sample_stride as f64);
    let mut abs_q = Vec::with_capacity(times.len());
    let mut boundary_residual = Vec::with_capacity(times.len());
    for &t in &times {
        let row = sites.iter().map(|&j| sol.q(j, t).map(|q| q.norm())).collect::<Result<Vec<_>>>()?;
        abs_q.push(row);
        boundary_residual.push(sol.closure_residual(t, branch).unwrap_or(f64::INFINITY));
    }
    Ok(SolitonReport { f1inf: dd.f1inf, branch, check, sites, times, abs_q, boundary_residual })
}

pub fn run_soliton(cfg: &RunConfig) -> Result<Outcome> {
    let report = soliton_grid(cfg)?;
    let bytes = match cfg.output.format {
        Format::Csv => {
            let certified = match report.check.certified {
                Some(b) => format!("{b:?}").to_lowercase(),
                None => "none".into(),
            };
            let trailer = vec![
                format!("f1inf={} {}", report.f1inf.re, report.f1inf.im),
                format!(
                    "closure over t=-10..10: plus={:e} minus={:e} certified={certified}",
                    report.check.plus, report.check.minus
                ),
            ];
            report.table().to_csv(&trailer)?
        }
        Format::Json => to_json(&serde_json::json!({ "config": cfg, "results": &report }))?,
    };
    emit(cfg.output.path.as_deref(), &bytes)?;
    let message = format!(
        "{} sites x {} times, max boundary residual ({:?}) {:.2e}",
        report.sites.len(),
        report.times.len(),
        report.branch,
        report.max_boundary_residual()
    );
    Ok(Outcome { mode: Mode::Soliton, passed: report.passed(), message })
}
