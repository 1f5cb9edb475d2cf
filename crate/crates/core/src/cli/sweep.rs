//! `sweep`: runs one mode over a list of configuration patches in parallel.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::{merge, Format, Mode, RunConfig};
use super::output::{emit, to_json, Table};
use super::Outcome;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepEntry {
    pub index: usize,
    pub output: PathBuf,
    pub exit_code: i32,
    pub passed: bool,
    pub message: String,
}

/// `dir/stem_k.ext` next to the summary path.
fn run_path(summary: &Path, k: usize, format: Format) -> PathBuf {
    let stem = summary.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    summary.with_file_name(format!("{stem}_{k}.{ext}"))
}

/// Builds and validates the configuration of every run.
fn expand(cfg: &RunConfig, summary: &Path) -> Result<Vec<RunConfig>> {
    let sw = cfg.sweep.as_ref().ok_or_else(|| Error::Config("missing required field `sweep`".into()))?;
    let mut base = cfg.clone();
    base.sweep = None;
    base.mode = Some(sw.mode);
    let base = serde_json::to_value(&base).map_err(|e| Error::Config(e.to_string()))?;
    sw.runs
        .iter()
        .enumerate()
        .map(|(k, patch)| {
            let mut v = base.clone();
            merge(&mut v, patch);
            let mut run: RunConfig =
                serde_json::from_value(v).map_err(|e| Error::Config(format!("sweep run {k}: {e}")))?;
            run.mode = Some(sw.mode);
            run.sweep = None;
            run.output.path = Some(run_path(summary, k, run.output.format));
            run.validate().map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("sweep run {k}: {m}")),
                other => other,
            })?;
            Ok(run)
        })
        .collect()
}

pub fn run_sweep(cfg: &RunConfig) -> Result<Outcome> {
    let summary = cfg
        .output
        .path
        .clone()
        .ok_or_else(|| Error::Config("sweep needs an output path for its summary".into()))?;
    let runs = expand(cfg, &summary)?;
    let entries: Vec<SweepEntry> = runs
        .par_iter()
        .enumerate()
        .map(|(index, run)| {
            let result = super::run(run);
            let (passed, message) = match &result {
                Ok(o) => (o.passed, o.message.clone()),
                Err(e) => (false, e.to_string()),
            };
            SweepEntry {
                index,
                output: run.output.path.clone().unwrap_or_default(),
                exit_code: super::exit_code(&result),
                passed,
                message,
            }
        })
        .collect();
    let bytes = match cfg.output.format {
        Format::Csv => {
            let mut t = Table::new(vec!["run".into(), "exit_code".into(), "passed".into()]);
            for e in &entries {
                t.push(vec![e.index as f64, f64::from(e.exit_code), if e.passed { 1.0 } else { 0.0 }]);
            }
            let trailer: Vec<String> =
                entries.iter().map(|e| format!("{}: {} {}", e.index, e.output.display(), e.message)).collect();
            t.to_csv(&trailer)?
        }
        Format::Json => to_json(&serde_json::json!({ "config": cfg, "results": &entries }))?,
    };
    emit(Some(&summary), &bytes)?;
    let failed = entries.iter().filter(|e| !e.passed).count();
    Ok(Outcome {
        mode: Mode::Sweep,
        passed: failed == 0,
        message: format!("{} runs, {failed} failed", entries.len()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_paths_follow_the_summary() {
        let p = run_path(Path::new("/tmp/out/summary.json"), 3, Format::Csv);
        assert_eq!(p, PathBuf::from("/tmp/out/summary_3.csv"));
    }

    #[test]
    fn sweeps_write_one_file_per_run() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("sum.csv");
        let cfg = RunConfig::from_json(&format!(
            r#"{{
            "mode": "sweep",
            "model": {{"preset": "dnls", "nu": -1}},
            "boundary": {{"a": [1, 0], "b": [-0.4, 0], "c": [0, 0], "d": [0, 0]}},
            "lattice": {{"n": 3, "topology": "open", "init": {{"kind": "random", "amplitude": 0.3}}}},
            "time": {{"t_end": 0.2, "dt": 0.01}},
            "sweep": {{"mode": "simulate", "runs": [{{"seed": 1}}, {{"seed": 2}}, {{"boundary": {{"b": [0.5, 0]}}}}]}},
            "output": {{"path": "{}"}}
        }}"#,
            out.display()
        ))
        .unwrap();
        let o = run_sweep(&cfg).unwrap();
        assert!(o.passed, "{o:?}");
        for k in 0..3 {
            assert!(dir.path().join(format!("sum_{k}.csv")).exists());
        }
        assert!(out.exists());
    }

    #[test]
    fn bad_patch_is_a_config_error() {
        let cfg = RunConfig::from_json(
            r#"{
            "mode": "sweep",
            "model": {"preset": "dnls"},
            "sweep": {"mode": "simulate", "runs": [{"time": {"t_end": 1, "dt": -1}}]},
            "output": {"path": "/tmp/never.csv"}
        }"#,
        )
        .unwrap();
        assert!(matches!(run_sweep(&cfg), Err(Error::Config(_))));
    }
}
