//! Bulk Lax structures of the Ablowitz–Ladik chain in the unit-determinant
//! normalisation: the space Lax matrix, the classical r-matrix, the time Lax
//! matrix, monodromy and transfer matrix, and the periodic Hamiltonian.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{laurent_extract, re, M2, M4, I, LAURENT_RADIUS, ONE, ZERO};
use crate::error::{Error, Result};

/// Floor on `|1 - q r|` below which a site is singular.
pub const FIELD_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Reduction {
    None,
    /// `r_j = ν q_j^*`.
    Dnls { nu: i8 },
    /// `q_j = ν r_j`, real fields.
    Dmkdv { nu: i8 },
}

impl Default for Reduction {
    fn default() -> Self {
        Reduction::None
    }
}

/// Bulk coefficients `(α, β, γ)` of the equations of motion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    #[serde(default)]
    pub reduction: Reduction,
}

impl ModelParams {
    pub fn new(alpha: C64, beta: C64, gamma: C64) -> Result<Self> {
        let p = ModelParams { alpha, beta, gamma, reduction: Reduction::None };
        p.validate()?;
        Ok(p)
    }

    /// Discrete NLS: `α = β = 1/2`, `γ = -1`, `r = ν q^*`.
    pub fn dnls(nu: i8) -> Self {
        ModelParams { alpha: re(0.5), beta: re(0.5), gamma: re(-1.0), reduction: Reduction::Dnls { nu } }
    }

    /// Discrete mKdV: `α = -β = i/2`, `γ = 0`, `q = ν r` real.
    pub fn dmkdv(nu: i8) -> Self {
        ModelParams { alpha: I * 0.5, beta: -I * 0.5, gamma: ZERO, reduction: Reduction::Dmkdv { nu } }
    }

    /// Ablowitz–Ladik coefficients without a field reduction.
    pub fn ablowitz_ladik() -> Self {
        ModelParams { reduction: Reduction::None, ..ModelParams::dnls(-1) }
    }

    pub fn validate(&self) -> Result<()> {
        if !((self.alpha * self.beta).norm() > 0.0) {
            return Err(Error::InvalidParams("alpha * beta must be nonzero".into()));
        }
        let close = |a: C64, b: C64| (a - b).norm() < 1e-14;
        match self.reduction {
            Reduction::None => Ok(()),
            Reduction::Dnls { nu } | Reduction::Dmkdv { nu } if nu != 1 && nu != -1 => {
                Err(Error::InvalidParams(format!("nu must be ±1, got {nu}")))
            }
            Reduction::Dnls { .. } => {
                if close(self.alpha, re(0.5)) && close(self.beta, re(0.5)) && close(self.gamma, re(-1.0)) {
                    Ok(())
                } else {
                    Err(Error::InvalidParams("dnls requires alpha = beta = 1/2, gamma = -1".into()))
                }
            }
            Reduction::Dmkdv { .. } => {
                if close(self.alpha, I * 0.5) && close(self.beta, -I * 0.5) && close(self.gamma, ZERO) {
                    Ok(())
                } else {
                    Err(Error::InvalidParams("dmkdv requires alpha = -beta = i/2, gamma = 0".into()))
                }
            }
        }
    }

    /// `√(β/α)` on the principal branch. Every other square root of the
    /// ratio is derived from this one so the branch choices stay coherent.
    pub fn sqrt_beta_over_alpha(&self) -> C64 {
        (self.beta / self.alpha).sqrt()
    }

    pub fn sqrt_alpha_over_beta(&self) -> C64 {
        self.sqrt_beta_over_alpha().inv()
    }

    /// `√(αβ)`, taken as `α √(β/α)`.
    pub fn sqrt_alpha_beta(&self) -> C64 {
        self.alpha * self.sqrt_beta_over_alpha()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Periodic,
    Open,
    HalfInfinite,
}

impl Topology {
    pub fn name(&self) -> &'static str {
        match self {
            Topology::Periodic => "periodic",
            Topology::Open => "open",
            Topology::HalfInfinite => "half_infinite",
        }
    }
}

/// Field amplitudes on sites `0..=N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeState {
    pub q: Vec<C64>,
    pub r: Vec<C64>,
    pub topology: Topology,
}

impl LatticeState {
    pub fn new(q: Vec<C64>, r: Vec<C64>, topology: Topology) -> Result<Self> {
        if q.len() != r.len() || q.is_empty() {
            return Err(Error::InvalidParams(format!(
                "field lengths q = {}, r = {} must match and be nonzero",
                q.len(),
                r.len()
            )));
        }
        let s = LatticeState { q, r, topology };
        s.check_fields()?;
        Ok(s)
    }

    pub fn zeros(n: usize, topology: Topology) -> Self {
        LatticeState { q: vec![ZERO; n + 1], r: vec![ZERO; n + 1], topology }
    }

    /// Index of the last site.
    pub fn n(&self) -> usize {
        self.q.len() - 1
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Field at any integer site: periodic wrap, or zero outside `0..=N`.
    pub fn q_at(&self, j: i64) -> C64 {
        self.field_at(&self.q, j)
    }

    pub fn r_at(&self, j: i64) -> C64 {
        self.field_at(&self.r, j)
    }

    fn field_at(&self, f: &[C64], j: i64) -> C64 {
        let len = f.len() as i64;
        match self.topology {
            Topology::Periodic => f[j.rem_euclid(len) as usize],
            _ if (0..len).contains(&j) => f[j as usize],
            _ => ZERO,
        }
    }

    pub fn check_fields(&self) -> Result<()> {
        for (site, (q, r)) in self.q.iter().zip(&self.r).enumerate() {
            let modulus = (ONE - q * r).norm();
            if !(modulus > FIELD_FLOOR) {
                return Err(Error::SingularField { site, modulus });
            }
        }
        Ok(())
    }

    /// Checks the field reduction demanded by `p`, if any.
    pub fn check_reduction(&self, p: &ModelParams, tol: f64) -> Result<()> {
        match p.reduction {
            Reduction::None => Ok(()),
            Reduction::Dnls { nu } => {
                for (j, (q, r)) in self.q.iter().zip(&self.r).enumerate() {
                    if (r - q.conj() * nu as f64).norm() > tol {
                        return Err(Error::Constraint(format!("r_{j} = ν conj(q_{j}) fails")));
                    }
                }
                Ok(())
            }
            Reduction::Dmkdv { nu } => {
                for (j, (q, r)) in self.q.iter().zip(&self.r).enumerate() {
                    if (q - r * nu as f64).norm() > tol || r.im.abs() > tol {
                        return Err(Error::Constraint(format!("q_{j} = ν r_{j} with r_{j} real fails")));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn require(&self, expected: Topology) -> Result<()> {
        if self.topology == expected {
            Ok(())
        } else {
            Err(Error::Topology { expected: expected.name(), got: self.topology.name() })
        }
    }
}

/// Conserved charges of the periodic chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChargeSet {
    /// `∏ (1 - q_j r_j)^{-1/2}`.
    pub c: C64,
    /// Laurent coefficients of the transfer matrix, keyed by exponent.
    pub i: BTreeMap<i32, C64>,
}

impl ChargeSet {
    pub fn get(&self, n: i32) -> C64 {
        self.i.get(&n).copied().unwrap_or(ZERO)
    }
}

/// Space Lax matrix `(1 - qr)^{-1/2} [[z, q], [r, 1/z]]`, unit determinant.
pub fn ell(q: C64, r: C64, z: C64) -> Result<M2> {
    if z == ZERO {
        return Err(Error::ZeroSpectral);
    }
    let x = ONE - q * r;
    if !(x.norm() > FIELD_FLOOR) {
        return Err(Error::SingularField { site: 0, modulus: x.norm() });
    }
    Ok(M2::new(z, q, r, z.inv()).scale(x.sqrt().inv()))
}

/// Time derivative of [`ell`] given `q̇`, `ṙ`.
pub fn ell_dot(q: C64, r: C64, qdot: C64, rdot: C64, z: C64) -> Result<M2> {
    let l = ell(q, r, z)?;
    let x = ONE - q * r;
    let k = x.sqrt().inv();
    let prefactor = (qdot * r + q * rdot) / (x * 2.0);
    Ok(l.scale(prefactor) + M2::new(ZERO, qdot, rdot, ZERO).scale(k))
}

/// Classical r-matrix `i/(2(1-z²)) [[z²+1,0,0,0],[0,0,2z,0],[0,2z,0,0],[0,0,0,z²+1]]`.
pub fn r_matrix(z: C64) -> Result<M4> {
    let den = (ONE - z * z) * 2.0;
    if !(den.norm() > 1e-14) {
        return Err(Error::Pole(format!("{z}")));
    }
    let pre = I / den;
    let d = (z * z + ONE) * pre;
    let o = z * 2.0 * pre;
    let mut m = M4::zero();
    m[(0, 0)] = d;
    m[(3, 3)] = d;
    m[(1, 2)] = o;
    m[(2, 1)] = o;
    Ok(m)
}

/// `ω(z) = α z² + γ + β / z²`.
pub fn omega(z: C64, p: &ModelParams) -> Result<C64> {
    if z == ZERO {
        return Err(Error::ZeroSpectral);
    }
    let z2 = z * z;
    Ok(p.alpha * z2 + p.gamma + p.beta / z2)
}

/// Time Lax matrix at site `j` from the fields at `j` and `j - 1`.
pub fn time_lax_a(q_j: C64, r_j: C64, q_jm1: C64, r_jm1: C64, z: C64, p: &ModelParams) -> Result<M2> {
    let w = omega(z, p)?;
    let (al, be) = (p.alpha, p.beta);
    let diag = w - be * r_j * q_jm1 - al * q_j * r_jm1;
    let upper = al * z * q_j * 2.0 - be * q_jm1 * 2.0 / z;
    let lower = al * z * r_jm1 * 2.0 - be * r_j * 2.0 / z;
    Ok(M2::new(diag, upper, lower, -diag).scale(I))
}

/// Ordered product `ℓ(N) ⋯ ℓ(0)`.
pub fn monodromy(s: &LatticeState, z: C64) -> Result<M2> {
    if s.topology == Topology::HalfInfinite {
        return Err(Error::Topology { expected: "periodic or open", got: s.topology.name() });
    }
    let mut out = M2::identity();
    for (site, (&q, &r)) in s.q.iter().zip(&s.r).enumerate() {
        let l = ell(q, r, z).map_err(|e| match e {
            Error::SingularField { modulus, .. } => Error::SingularField { site, modulus },
            e => e,
        })?;
        out = l * out;
    }
    Ok(out)
}

/// Single-row transfer matrix `tr L(z)`.
pub fn transfer(s: &LatticeState, z: C64) -> Result<C64> {
    Ok(monodromy(s, z)?.trace())
}

/// `∏ (1 - q_j r_j)^{-1/2}`.
pub fn product_charge(s: &LatticeState) -> C64 {
    s.q.iter().zip(&s.r).map(|(q, r)| (ONE - q * r).sqrt().inv()).product()
}

/// Product charge and the Laurent charges of the transfer matrix over the
/// window `[-N-1, N+1]` (exponents of the parity of `N + 1`).
pub fn transfer_and_charges(s: &LatticeState) -> Result<ChargeSet> {
    s.require(Topology::Periodic)?;
    s.check_fields()?;
    let n = s.n() as i32;
    let series = laurent_extract(|z| transfer(s, z), (-n - 1, n + 1), LAURENT_RADIUS)?;
    let i = series
        .coefficients
        .into_iter()
        .filter(|(k, _)| (k + n + 1).rem_euclid(2) == 0)
        .collect();
    Ok(ChargeSet { c: product_charge(s), i })
}

/// `H = 2 Σ (-α r_j q_{j+1} - β q_j r_{j+1} + γ ln(1 - q_j r_j))`, periodic.
pub fn hamiltonian_periodic(s: &LatticeState, p: &ModelParams) -> Result<C64> {
    s.require(Topology::Periodic)?;
    s.check_fields()?;
    let mut h = ZERO;
    for j in 0..s.len() as i64 {
        let (q, r) = (s.q_at(j), s.r_at(j));
        h += -p.alpha * r * s.q_at(j + 1) - p.beta * q * s.r_at(j + 1) + p.gamma * (ONE - q * r).ln();
    }
    Ok(h * 2.0)
}
