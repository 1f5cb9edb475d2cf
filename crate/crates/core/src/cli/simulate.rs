//! `simulate`: time stepping of the periodic or open chain with conserved
//! quantity monitors.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::config::{Format, Mode, Picture, RunConfig};
use super::output::{emit, site_label, to_json, Table};
use super::Outcome;
use crate::dynamics::{
    integrate_partial, to_extrinsic, validate_branch, ExtrinsicFlow, Flow, IntegrateOptions, Monitor, OpenFlow,
    PeriodicFlow, Trajectory,
};
use crate::error::Result;
use crate::lax::Topology;

/// Drift budget for the monitored quantities.
pub const DRIFT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulateReport {
    pub topology: Topology,
    pub picture: Picture,
    pub dt: f64,
    pub times: Vec<f64>,
    /// `|q_j(t)|`, one row per sample.
    pub abs_q: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arg_q: Option<Vec<Vec<f64>>>,
    pub monitors: Vec<Monitor>,
    /// Relative drift of `(H, I0, I1)`.
    pub drift: Option<[f64; 3]>,
    /// Round-trip error of the change of variables (extrinsic picture only).
    pub round_trip: Option<f64>,
    /// `None` when the run reached `t_end`; otherwise why it stopped.
    pub aborted: Option<String>,
}

fn trajectory(cfg: &RunConfig) -> Result<(Trajectory, Option<String>, Option<f64>)> {
    let p = cfg.model_params()?;
    let lat = cfg.lattice()?;
    let t = cfg.time()?;
    let s = cfg.initial_state()?;
    let mut opts = IntegrateOptions::new(t.t_end, t.dt).stride(t.sample_stride);
    opts.t0 = t.t_start;
    let (flow, y0, round_trip): (Box<dyn Flow>, Vec<C64>, Option<f64>) = match (lat.topology, lat.picture) {
        (Topology::Periodic, _) => (Box::new(PeriodicFlow { p }), PeriodicFlow::pack(&s), None),
        (_, Picture::Intrinsic) => {
            let bp = cfg.boundary()?;
            (Box::new(OpenFlow { bp, p }), OpenFlow::pack(&s), None)
        }
        (_, Picture::Extrinsic) => {
            let bp = cfg.boundary()?;
            let rt = validate_branch(&s, &bp)?;
            let e = to_extrinsic(&s, &bp)?;
            (Box::new(ExtrinsicFlow { bp, p }), ExtrinsicFlow::pack(&e), Some(rt))
        }
    };
    let (traj, err) = integrate_partial(flow.as_ref(), y0, &opts)?;
    Ok((traj, err.map(|e| e.to_string()), round_trip))
}

/// Runs the configured simulation without writing anything.
pub fn simulate(cfg: &RunConfig) -> Result<SimulateReport> {
    let lat = cfg.lattice()?;
    let (traj, aborted, round_trip) = trajectory(cfg)?;
    let sites = lat.n + 1;
    let abs_q = traj.states.iter().map(|y| y[..sites].iter().map(|v| v.norm()).collect()).collect();
    let arg_q = cfg
        .output
        .phases
        .then(|| traj.states.iter().map(|y| y[..sites].iter().map(|v| v.arg()).collect()).collect());
    Ok(SimulateReport {
        topology: lat.topology,
        picture: lat.picture,
        dt: traj.dt,
        drift: traj.relative_drift(),
        times: traj.times,
        abs_q,
        arg_q,
        monitors: traj.monitors,
        round_trip,
        aborted,
    })
}

impl SimulateReport {
    pub fn table(&self) -> Table {
        let sites = self.abs_q.first().map(|r| r.len()).unwrap_or(0) as i64;
        let mut cols = vec!["t".to_string()];
        cols.extend((0..sites).map(|j| site_label("abs_q", j)));
        if self.arg_q.is_some() {
            cols.extend((0..sites).map(|j| site_label("arg_q", j)));
        }
        for m in ["h", "i0", "i1"] {
            cols.push(format!("{m}_re"));
            cols.push(format!("{m}_im"));
        }
        let mut table = Table::new(cols);
        for (k, t) in self.times.iter().enumerate() {
            let mut row = vec![*t];
            row.extend(&self.abs_q[k]);
            if let Some(arg) = &self.arg_q {
                row.extend(&arg[k]);
            }
            match self.monitors.get(k) {
                Some(m) => {
                    for v in [m.hamiltonian, m.i0, m.i1] {
                        row.extend([v.re, v.im]);
                    }
                }
                None => row.extend([f64::NAN; 6]),
            }
            table.push(row);
        }
        table
    }

    pub fn passed(&self) -> bool {
        self.aborted.is_none() && self.drift.map(|d| d.iter().all(|v| *v <= DRIFT_TOL)).unwrap_or(true)
    }
}

pub fn run_simulate(cfg: &RunConfig) -> Result<Outcome> {
    let report = simulate(cfg)?;
    let bytes = match cfg.output.format {
        Format::Csv => {
            let mut trailer = Vec::new();
            if let Some(d) = report.drift {
                trailer.push(format!("relative drift h={:e} i0={:e} i1={:e}", d[0], d[1], d[2]));
            }
            if let Some(why) = &report.aborted {
                trailer.push(format!("aborted: {why}"));
            }
            report.table().to_csv(&trailer)?
        }
        Format::Json => to_json(&serde_json::json!({ "config": cfg, "results": &report }))?,
    };
    emit(cfg.output.path.as_deref(), &bytes)?;
    let message = match (&report.aborted, report.drift) {
        (Some(why), _) => format!("aborted after {} samples: {why}", report.times.len()),
        (None, Some(d)) => format!("{} samples, relative drift {:.2e} {:.2e} {:.2e}", report.times.len(), d[0], d[1], d[2]),
        (None, None) => format!("{} samples", report.times.len()),
    };
    Ok(Outcome { mode: Mode::Simulate, passed: report.passed(), message })
}
