//! Run configuration read from JSON, plus command-line overrides.

use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryParams, Branch};
use crate::error::{Error, Result};
use crate::lax::{LatticeState, ModelParams, Reduction, Topology};
use crate::mirror::DiscreteData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Simulate,
    Soliton,
    Verify,
    Sweep,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("format must be csv or json, got {s:?}"))),
        }
    }
}

/// Bulk model: a named preset or explicit coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Preset {
        preset: Preset,
        #[serde(default = "default_nu")]
        nu: i8,
    },
    Explicit(ModelParams),
}

fn default_nu() -> i8 {
    -1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Dnls,
    Dmkdv,
    AblowitzLadik,
}

impl ModelSpec {
    pub fn params(&self) -> Result<ModelParams> {
        let p = match *self {
            ModelSpec::Preset { preset: Preset::Dnls, nu } => ModelParams::dnls(nu),
            ModelSpec::Preset { preset: Preset::Dmkdv, nu } => ModelParams::dmkdv(nu),
            ModelSpec::Preset { preset: Preset::AblowitzLadik, .. } => ModelParams::ablowitz_ladik(),
            ModelSpec::Explicit(p) => p,
        };
        p.validate().map_err(|e| Error::Config(format!("model: {e}")))?;
        Ok(p)
    }
}

/// Initial fields for `simulate`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum InitSpec {
    Zeros,
    /// Uniform in the square `|Re|, |Im| ≤ amplitude/√2`, from the run seed.
    Random { amplitude: f64 },
    Explicit {
        q: Vec<C64>,
        #[serde(default)]
        r: Option<Vec<C64>>,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    #[default]
    Intrinsic,
    Extrinsic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    /// Last site index; the chain has `n + 1` sites.
    pub n: usize,
    pub topology: Topology,
    pub init: InitSpec,
    #[serde(default)]
    pub picture: Picture,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeConfig {
    #[serde(default)]
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    #[serde(default = "one")]
    pub sample_stride: usize,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolitonConfig {
    pub zetas: Vec<C64>,
    pub ds: Vec<C64>,
    #[serde(default)]
    pub f1inf_index: usize,
    #[serde(default = "default_j_max")]
    pub j_max: i64,
    /// Also emit the full-line values `j < -1` (the mirror side).
    #[serde(default)]
    pub mirror: bool,
}

fn default_j_max() -> i64 {
    40
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Add the phase of every field to the simulate output.
    #[serde(default)]
    pub phases: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Random points per algebraic identity.
    #[serde(default = "default_points")]
    pub points: usize,
    /// Add this to the upper-right entry of `k⁻` (negative control).
    #[serde(default)]
    pub corrupt_k_minus: Option<f64>,
}

fn default_points() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Mode every run executes.
    pub mode: Mode,
    /// JSON objects merged into the base configuration, one per run.
    pub runs: Vec<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub mode: Option<Mode>,
    pub model: ModelSpec,
    #[serde(default)]
    pub boundary: Option<BoundaryParams>,
    #[serde(default)]
    pub lattice: Option<LatticeConfig>,
    #[serde(default)]
    pub time: Option<TimeConfig>,
    #[serde(default)]
    pub soliton: Option<SolitonConfig>,
    #[serde(default)]
    pub verify: Option<VerifyConfig>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub seed: u64,
}

/// Values given on the command line; each replaces the config entry.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub branch: Option<Branch>,
    pub f1inf_index: Option<usize>,
}

fn missing(field: &str) -> Error {
    Error::Config(format!("missing required field `{field}`"))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.mode.is_some() {
            self.mode = o.mode;
        }
        if let Some(out) = &o.out {
            self.output.path = Some(out.clone());
        }
        if let Some(f) = o.format {
            self.output.format = f;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let (Some(b), Some(bp)) = (o.branch, self.boundary.as_mut()) {
            bp.branch = b;
        }
        if let (Some(k), Some(sol)) = (o.f1inf_index, self.soliton.as_mut()) {
            sol.f1inf_index = k;
        }
    }

    pub fn mode(&self) -> Result<Mode> {
        self.mode.ok_or_else(|| missing("mode"))
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        self.model.params()
    }

    pub fn boundary(&self) -> Result<BoundaryParams> {
        self.boundary.ok_or_else(|| missing("boundary"))
    }

    pub fn time(&self) -> Result<TimeConfig> {
        let t = self.time.ok_or_else(|| missing("time"))?;
        if !(t.dt > 0.0) || !t.dt.is_finite() {
            return Err(Error::Config(format!("time.dt must be positive, got {}", t.dt)));
        }
        if !(t.t_end > t.t_start) || !t.t_end.is_finite() || !t.t_start.is_finite() {
            return Err(Error::Config(format!("time.t_end ({}) must exceed time.t_start ({})", t.t_end, t.t_start)));
        }
        if t.sample_stride == 0 {
            return Err(Error::Config("time.sample_stride must be at least 1".into()));
        }
        Ok(t)
    }

    pub fn lattice(&self) -> Result<&LatticeConfig> {
        self.lattice.as_ref().ok_or_else(|| missing("lattice"))
    }

    pub fn discrete_data(&self) -> Result<DiscreteData> {
        let sol = self.soliton.as_ref().ok_or_else(|| missing("soliton"))?;
        let p = self.model_params()?;
        DiscreteData::with_root_index(sol.zetas.clone(), sol.ds.clone(), self.boundary()?, sol.f1inf_index, &p)
            .map_err(|e| match e {
                Error::InvalidParams(m) => Error::Config(format!("soliton: {m}")),
                other => other,
            })
    }

    /// Initial lattice state; `r` follows the reduction when not given.
    pub fn initial_state(&self) -> Result<LatticeState> {
        let lat = self.lattice()?;
        let p = self.model_params()?;
        let len = lat.n + 1;
        if lat.topology == Topology::HalfInfinite {
            return Err(Error::Config("lattice.topology must be periodic or open".into()));
        }
        let partner = |q: &[C64]| -> Vec<C64> {
            match p.reduction {
                Reduction::Dnls { nu } => q.iter().map(|x| x.conj() * nu as f64).collect(),
                Reduction::Dmkdv { nu } => q.iter().map(|x| x * nu as f64).collect(),
                Reduction::None => vec![C64::default(); q.len()],
            }
        };
        let (q, r) = match &lat.init {
            InitSpec::Zeros => (vec![C64::default(); len], vec![C64::default(); len]),
            InitSpec::Random { amplitude } => {
                if !(*amplitude >= 0.0) {
                    return Err(Error::Config("lattice.init.amplitude must be non-negative".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let side = amplitude / std::f64::consts::SQRT_2;
                let mut draw = || {
                    if side == 0.0 {
                        C64::default()
                    } else {
                        C64::new(rng.gen_range(-side..side), rng.gen_range(-side..side))
                    }
                };
                let real = matches!(p.reduction, Reduction::Dmkdv { .. });
                let q: Vec<C64> = (0..len).map(|_| if real { C64::new(draw().re, 0.0) } else { draw() }).collect();
                let r = match p.reduction {
                    Reduction::None => (0..len).map(|_| draw()).collect(),
                    _ => partner(&q),
                };
                (q, r)
            }
            InitSpec::Explicit { q, r } => {
                if q.len() != len {
                    return Err(Error::Config(format!("lattice.init.q has {} entries, expected n + 1 = {len}", q.len())));
                }
                let r = r.clone().unwrap_or_else(|| partner(q));
                (q.clone(), r)
            }
        };
        LatticeState::new(q, r, lat.topology)
    }

    /// Checks that everything the selected mode needs is present and sane.
    pub fn validate(&self) -> Result<()> {
        self.model_params()?;
        match self.mode()? {
            Mode::Simulate => {
                self.time()?;
                let lat = self.lattice()?;
                if lat.topology == Topology::Open {
                    self.boundary()?;
                    if lat.n < 1 {
                        return Err(Error::Config("lattice.n must be at least 1 for an open chain".into()));
                    }
                }
                self.initial_state()?;
            }
            Mode::Soliton => {
                self.time()?;
                self.discrete_data()?;
                let j_max = self.soliton.as_ref().map(|s| s.j_max).unwrap_or(0);
                if j_max < 1 {
                    return Err(Error::Config("soliton.j_max must be at least 1".into()));
                }
            }
            Mode::Verify => {}
            Mode::Sweep => {
                let sw = self.sweep.as_ref().ok_or_else(|| missing("sweep"))?;
                if sw.mode == Mode::Sweep {
                    return Err(Error::Config("sweep.mode cannot itself be sweep".into()));
                }
                if sw.runs.is_empty() {
                    return Err(Error::Config("sweep.runs is empty".into()));
                }
            }
        }
        Ok(())
    }
}

/// Recursive JSON merge: objects merge key by key, anything else replaces.
pub fn merge(base: &mut serde_json::Value, patch: &serde_json::Value) {
    match (base, patch) {
        (serde_json::Value::Object(b), serde_json::Value::Object(p)) => {
            for (k, v) in p {
                merge(b.entry(k.clone()).or_insert(serde_json::Value::Null), v);
            }
        }
        (b, p) => *b = p.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG: &str = r#"{
        "mode": "soliton",
        "model": {"preset": "dnls", "nu": -1},
        "boundary": {"a": [1, 0], "b": [-1.7, 0], "c": [1.1, 0], "d": [1.1, 0]},
        "time": {"t_start": -10, "t_end": 10, "dt": 0.5},
        "soliton": {"zetas": [[0.6, 1.9]], "ds": [[0.1, 0]]}
    }"#;

    #[test]
    fn parses_and_validates() {
        let cfg = RunConfig::from_json(FIG).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.boundary().unwrap().branch, Branch::Minus);
        assert_eq!(cfg.soliton.as_ref().unwrap().j_max, 40);
    }

    #[test]
    fn overrides_apply() {
        let mut cfg = RunConfig::from_json(FIG).unwrap();
        cfg.apply(&Overrides { branch: Some(Branch::Plus), f1inf_index: Some(3), seed: Some(9), ..Default::default() });
        assert_eq!(cfg.boundary().unwrap().branch, Branch::Plus);
        assert_eq!(cfg.soliton.as_ref().unwrap().f1inf_index, 3);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn bad_time_is_named() {
        let mut cfg = RunConfig::from_json(FIG).unwrap();
        cfg.time = Some(TimeConfig { t_start: 1.0, t_end: 0.0, dt: 0.1, sample_stride: 1 });
        let e = cfg.validate().unwrap_err();
        assert!(e.to_string().contains("t_end"), "{e}");
        assert_eq!(e.exit_code(), 2);
        cfg.time = Some(TimeConfig { t_start: 0.0, t_end: 1.0, dt: 0.0, sample_stride: 1 });
        assert!(cfg.validate().unwrap_err().to_string().contains("dt"));
    }

    #[test]
    fn missing_section_is_named() {
        let mut cfg = RunConfig::from_json(FIG).unwrap();
        cfg.soliton = None;
        let e = cfg.validate().unwrap_err();
        assert!(e.to_string().contains("soliton"));
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn random_init_respects_reduction() {
        let mut cfg = RunConfig::from_json(FIG).unwrap();
        cfg.lattice = Some(LatticeConfig { n: 5, topology: Topology::Open, init: InitSpec::Random { amplitude: 0.1 }, picture: Picture::Intrinsic });
        let s = cfg.initial_state().unwrap();
        assert!(s.q.iter().all(|x| x.norm() <= 0.1));
        for (q, r) in s.q.iter().zip(&s.r) {
            assert_eq!(*r, -q.conj());
        }
        assert_eq!(cfg.initial_state().unwrap(), s);
    }

    #[test]
    fn merge_patches_nested_fields() {
        let mut base = serde_json::json!({"boundary": {"a": [1, 0], "b": [0, 0]}, "seed": 1});
        merge(&mut base, &serde_json::json!({"boundary": {"b": [2, 0]}, "seed": 5}));
        assert_eq!(base, serde_json::json!({"boundary": {"a": [1, 0], "b": [2, 0]}, "seed": 5}));
    }
}
