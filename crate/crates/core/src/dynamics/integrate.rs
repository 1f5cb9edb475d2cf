//! Fixed-step classical Runge–Kutta integration with conserved-quantity
//! monitors.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::equations::{rhs_open_intrinsic, rhs_periodic};
use super::extrinsic::{from_extrinsic, rhs_open_extrinsic, ExtrinsicState};
use super::reduced::rhs_reduced;
use crate::boundary::{self, BoundaryParams};
use crate::error::{Error, Result};
use crate::lax::{self, LatticeState, ModelParams, Reduction, Topology};

/// Largest admissible field modulus before the run is declared blown up.
pub const BLOWUP_CAP: f64 = 1e6;

/// Conserved quantities recorded along a trajectory.
///
/// Open chains: `ℍ` and the two leading coefficients of `b(z)`.
/// Periodic chains: `H`, the product charge `C` and `C Σ r_j q_{j+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Monitor {
    pub hamiltonian: C64,
    pub i0: C64,
    pub i1: C64,
}

/// A vector field on a flat state vector.
pub trait Flow: Sync {
    fn rhs(&self, y: &[C64]) -> Result<Vec<C64>>;

    fn monitor(&self, _y: &[C64]) -> Result<Option<Monitor>> {
        Ok(None)
    }
}

fn pack(q: &[C64], r: &[C64]) -> Vec<C64> {
    q.iter().chain(r).copied().collect()
}

fn split(y: &[C64]) -> (Vec<C64>, Vec<C64>) {
    let half = y.len() / 2;
    (y[..half].to_vec(), y[half..].to_vec())
}

fn lattice(y: &[C64], topology: Topology) -> LatticeState {
    let (q, r) = split(y);
    LatticeState { q, r, topology }
}

fn open_monitor(s: &LatticeState, bp: &BoundaryParams, p: &ModelParams) -> Result<Monitor> {
    let oc = boundary::open_charges_and_hamiltonian(s, bp, p)?;
    Ok(Monitor { hamiltonian: oc.hamiltonian, i0: oc.i0, i1: oc.i1 })
}

fn periodic_monitor(s: &LatticeState, p: &ModelParams) -> Result<Monitor> {
    let c = lax::product_charge(s);
    let n = s.len() as i64;
    let hop: C64 = (0..n).map(|j| s.r_at(j) * s.q_at(j + 1)).sum();
    Ok(Monitor { hamiltonian: lax::hamiltonian_periodic(s, p)?, i0: c, i1: c * hop })
}

/// Periodic chain; state `[q_0..q_N, r_0..r_N]`.
pub struct PeriodicFlow {
    pub p: ModelParams,
}

impl PeriodicFlow {
    pub fn pack(s: &LatticeState) -> Vec<C64> {
        pack(&s.q, &s.r)
    }

    pub fn unpack(y: &[C64]) -> LatticeState {
        lattice(y, Topology::Periodic)
    }
}

impl Flow for PeriodicFlow {
    fn rhs(&self, y: &[C64]) -> Result<Vec<C64>> {
        let d = rhs_periodic(&Self::unpack(y), &self.p)?;
        Ok(pack(&d.q, &d.r))
    }

    fn monitor(&self, y: &[C64]) -> Result<Option<Monitor>> {
        periodic_monitor(&Self::unpack(y), &self.p).map(Some)
    }
}

/// Open chain, intrinsic picture.
pub struct OpenFlow {
    pub bp: BoundaryParams,
    pub p: ModelParams,
}

impl OpenFlow {
    pub fn pack(s: &LatticeState) -> Vec<C64> {
        pack(&s.q, &s.r)
    }

    pub fn unpack(y: &[C64]) -> LatticeState {
        lattice(y, Topology::Open)
    }
}

impl Flow for OpenFlow {
    fn rhs(&self, y: &[C64]) -> Result<Vec<C64>> {
        let d = rhs_open_intrinsic(&Self::unpack(y), &self.bp, &self.p)?;
        Ok(pack(&d.q, &d.r))
    }

    fn monitor(&self, y: &[C64]) -> Result<Option<Monitor>> {
        open_monitor(&Self::unpack(y), &self.bp, &self.p).map(Some)
    }
}

/// Open chain, extrinsic picture; monitors are evaluated after mapping back.
pub struct ExtrinsicFlow {
    pub bp: BoundaryParams,
    pub p: ModelParams,
}

impl ExtrinsicFlow {
    pub fn pack(e: &ExtrinsicState) -> Vec<C64> {
        pack(&e.q, &e.r)
    }

    pub fn unpack(&self, y: &[C64]) -> ExtrinsicState {
        let (q, r) = split(y);
        ExtrinsicState { q, r, bp: self.bp, topology: Topology::Open }
    }
}

impl Flow for ExtrinsicFlow {
    fn rhs(&self, y: &[C64]) -> Result<Vec<C64>> {
        let d = rhs_open_extrinsic(&self.unpack(y), &self.p)?;
        Ok(pack(&d.q, &d.r))
    }

    fn monitor(&self, y: &[C64]) -> Result<Option<Monitor>> {
        let s = from_extrinsic(&self.unpack(y))?;
        open_monitor(&s, &self.bp, &self.p).map(Some)
    }
}

/// Single-field reduced equation; periodic when `bp` is `None`.
pub struct ReducedFlow {
    pub bp: Option<BoundaryParams>,
    pub p: ModelParams,
}

impl ReducedFlow {
    /// Second field implied by the reduction.
    pub fn partner(&self, q: &[C64]) -> Vec<C64> {
        match self.p.reduction {
            Reduction::Dnls { nu } => q.iter().map(|x| x.conj() * nu as f64).collect(),
            Reduction::Dmkdv { nu } => q.iter().map(|x| x * nu as f64).collect(),
            Reduction::None => q.to_vec(),
        }
    }
}

impl Flow for ReducedFlow {
    fn rhs(&self, y: &[C64]) -> Result<Vec<C64>> {
        rhs_reduced(y, self.bp.as_ref(), &self.p)
    }

    fn monitor(&self, y: &[C64]) -> Result<Option<Monitor>> {
        let r = self.partner(y);
        match self.bp {
            None => periodic_monitor(&LatticeState { q: y.to_vec(), r, topology: Topology::Periodic }, &self.p).map(Some),
            Some(bp) => {
                let e = ExtrinsicState { q: y.to_vec(), r, bp, topology: Topology::Open };
                open_monitor(&from_extrinsic(&e)?, &bp, &self.p).map(Some)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrateOptions {
    pub t0: f64,
    pub t_end: f64,
    pub dt: f64,
    /// Record state and monitors every `stride` steps (and at the end).
    pub stride: usize,
    pub monitors: bool,
    pub blowup_cap: f64,
}

impl IntegrateOptions {
    pub fn new(t_end: f64, dt: f64) -> Self {
        IntegrateOptions { t0: 0.0, t_end, dt, stride: 1, monitors: true, blowup_cap: BLOWUP_CAP }
    }

    pub fn stride(mut self, stride: usize) -> Self {
        self.stride = stride.max(1);
        self
    }

    pub fn without_monitors(mut self) -> Self {
        self.monitors = false;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<C64>>,
    pub monitors: Vec<Monitor>,
    /// Step actually used (`t_end - t0` divided into whole steps).
    pub dt: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &[C64] {
        self.states.last().map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Largest `|m(t) - m(t0)| / max(1, |m(t0)|)` for each monitored quantity.
    pub fn relative_drift(&self) -> Option<[f64; 3]> {
        let first = self.monitors.first()?;
        let rel = |a: C64, b: C64| (a - b).norm() / b.norm().max(1.0);
        Some(self.monitors.iter().fold([0.0f64; 3], |acc, m| {
            [
                acc[0].max(rel(m.hamiltonian, first.hamiltonian)),
                acc[1].max(rel(m.i0, first.i0)),
                acc[2].max(rel(m.i1, first.i1)),
            ]
        }))
    }
}

fn axpy(y: &[C64], k: &[C64], h: f64) -> Vec<C64> {
    y.iter().zip(k).map(|(a, b)| a + b * h).collect()
}

/// One classical Runge–Kutta step of size `h` (negative `h` steps backwards).
pub fn rk4_step<F: Flow + ?Sized>(flow: &F, y: &[C64], h: f64) -> Result<Vec<C64>> {
    let k1 = flow.rhs(y)?;
    let k2 = flow.rhs(&axpy(y, &k1, h / 2.0))?;
    let k3 = flow.rhs(&axpy(y, &k2, h / 2.0))?;
    let k4 = flow.rhs(&axpy(y, &k3, h))?;
    Ok(y.iter()
        .enumerate()
        .map(|(i, v)| v + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0))
        .collect())
}

/// Classical fourth-order Runge–Kutta from `t0` to `t_end`.
pub fn integrate<F: Flow + ?Sized>(flow: &F, y0: Vec<C64>, opts: &IntegrateOptions) -> Result<Trajectory> {
    match integrate_partial(flow, y0, opts)? {
        (traj, None) => Ok(traj),
        (_, Some(e)) => Err(e),
    }
}

/// Like [`integrate`], but a blow-up returns the samples recorded so far
/// together with the error instead of discarding them.
pub fn integrate_partial<F: Flow + ?Sized>(
    flow: &F,
    y0: Vec<C64>,
    opts: &IntegrateOptions,
) -> Result<(Trajectory, Option<Error>)> {
    let span = opts.t_end - opts.t0;
    if !(opts.dt > 0.0) || !span.is_finite() || span < 0.0 {
        return Err(Error::InvalidParams(format!("need dt > 0 and t_end ≥ t0, got dt = {}, span = {span}", opts.dt)));
    }
    let steps = ((span / opts.dt) - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 { 0.0 } else { span / steps as f64 };
    let mut traj = Trajectory { times: vec![], states: vec![], monitors: vec![], dt: h };
    let record = |traj: &mut Trajectory, t: f64, y: &[C64]| -> Result<()> {
        if opts.monitors {
            if let Some(m) = flow.monitor(y)? {
                traj.monitors.push(m);
            }
        }
        traj.times.push(t);
        traj.states.push(y.to_vec());
        Ok(())
    };
    let mut y = y0;
    record(&mut traj, opts.t0, &y)?;
    for step in 1..=steps {
        let t_last = opts.t0 + h * (step - 1) as f64;
        let t = opts.t0 + h * step as f64;
        let blow = |cause: String| Error::BlowUp { t_last, t_fail: t, cause };
        y = match rk4_step(flow, &y, h) {
            Ok(next) => next,
            Err(e) => return Ok((traj, Some(blow(e.to_string())))),
        };
        let peak = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if !peak.is_finite() || peak > opts.blowup_cap {
            return Ok((traj, Some(blow(format!("field modulus {peak:.3e} exceeds cap {:.1e}", opts.blowup_cap)))));
        }
        if step % opts.stride == 0 || step == steps {
            if let Err(e) = record(&mut traj, t, &y) {
                return Ok((traj, Some(blow(e.to_string()))));
            }
        }
    }
    Ok((traj, None))
}

/// Step-halving diagnostics at `t_end` with steps `dt`, `dt/2`, `dt/4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepHalving {
    /// `|y_dt - y_{dt/2}|_∞`.
    pub coarse: f64,
    /// `|y_{dt/2} - y_{dt/4}|_∞`.
    pub fine: f64,
    /// Richardson error estimate for the `dt/4` run.
    pub error_estimate: f64,
    pub order: f64,
}

pub fn step_halving<F: Flow + ?Sized>(flow: &F, y0: &[C64], t_end: f64, dt: f64) -> Result<StepHalving> {
    let run = |h: f64| -> Result<Vec<C64>> {
        Ok(integrate(flow, y0.to_vec(), &IntegrateOptions::new(t_end, h).without_monitors().stride(usize::MAX))?
            .final_state()
            .to_vec())
    };
    let (a, b, c) = (run(dt)?, run(dt / 2.0)?, run(dt / 4.0)?);
    let dist = |x: &[C64], y: &[C64]| x.iter().zip(y).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
    let (coarse, fine) = (dist(&a, &b), dist(&b, &c));
    Ok(StepHalving { coarse, fine, error_estimate: fine / 15.0, order: (coarse / fine).log2() })
}
