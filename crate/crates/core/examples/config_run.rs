//! Drives a run from an in-memory configuration, the way the binary does.

use al_lattice::cli::{run, simulate, RunConfig};

const CONFIG: &str = r#"{
  "mode": "simulate",
  "model": {"preset": "dnls", "nu": -1},
  "boundary": {"a": [1.0, 0.0], "b": [-0.4, 0.0], "c": [0.0, 0.0], "d": [0.0, 0.0]},
  "lattice": {"n": 6, "topology": "open", "init": {"kind": "random", "amplitude": 0.3}},
  "time": {"t_end": 2.0, "dt": 0.01, "sample_stride": 50},
  "seed": 4
}"#;

fn main() -> al_lattice::error::Result<()> {
    let cfg = RunConfig::from_json(CONFIG)?;
    let report = simulate(&cfg)?;
    for (t, row) in report.times.iter().zip(&report.abs_q) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.4}")).collect();
        println!("t = {t:.1}: {}", cells.join(" "));
    }
    let outcome = run(&cfg)?;
    eprintln!("{} (exit {})", outcome.message, outcome.exit_code());
    Ok(())
}
