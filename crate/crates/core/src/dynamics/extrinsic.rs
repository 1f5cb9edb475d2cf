//! Extrinsic picture: bulk equations at every site `j ≥ 0` plus a closure
//! on the ghost site `j = -1`.

use num_complex::Complex64 as C64;

use super::equations::{bulk_q, bulk_r, require_open, Derivatives};
use crate::algebra::{I, ONE};
use crate::boundary::{BoundaryParams, Branch};
use crate::error::{Error, Result};
use crate::lax::{LatticeState, ModelParams, Topology, FIELD_FLOOR};

/// Round-trip tolerance used to accept a branch selector.
pub const ROUND_TRIP_TOL: f64 = 1e-10;

/// Fields `Q_j, R_j` for `j = 0..=N`. The ghost values `Q_{-1}, R_{-1}` are
/// not stored: they follow from the closure every time they are needed.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtrinsicState {
    pub q: Vec<C64>,
    pub r: Vec<C64>,
    pub bp: BoundaryParams,
    pub topology: Topology,
}

impl ExtrinsicState {
    pub fn new(q: Vec<C64>, r: Vec<C64>, bp: BoundaryParams, topology: Topology) -> Result<Self> {
        // reuse the site checks of the intrinsic state
        LatticeState::new(q.clone(), r.clone(), topology)?;
        Ok(ExtrinsicState { q, r, bp, topology })
    }

    pub fn n(&self) -> usize {
        self.q.len() - 1
    }

    pub fn q_at(&self, j: i64) -> C64 {
        self.q.get(j as usize).copied().filter(|_| j >= 0).unwrap_or_default()
    }

    pub fn r_at(&self, j: i64) -> C64 {
        self.r.get(j as usize).copied().filter(|_| j >= 0).unwrap_or_default()
    }

    /// Ghost values from the configured closure.
    pub fn ghost(&self, p: &ModelParams) -> Result<(C64, C64)> {
        ghost_closure(self, p)
    }

    /// The fields as a plain lattice state (no change of variables).
    pub fn as_lattice(&self) -> LatticeState {
        LatticeState { q: self.q.clone(), r: self.r.clone(), topology: self.topology }
    }

    fn check_fields(&self) -> Result<()> {
        for (site, (q, r)) in self.q.iter().zip(&self.r).enumerate() {
            let modulus = (ONE - q * r).norm();
            if !(modulus > FIELD_FLOOR) {
                return Err(Error::SingularField { site, modulus });
            }
        }
        Ok(())
    }
}

/// `Q0 = q0 - c(1 - q0 r0)/D`, `R0 = r0 + d(1 - q0 r0)/D`; other sites unchanged.
pub fn to_extrinsic(s: &LatticeState, bp: &BoundaryParams) -> Result<ExtrinsicState> {
    require_open(s)?;
    s.check_fields()?;
    let (q0, r0) = (s.q[0], s.r[0]);
    let den = bp.denominator(q0, r0)?;
    let x0 = ONE - q0 * r0;
    let mut q = s.q.clone();
    let mut r = s.r.clone();
    q[0] = q0 - bp.c * x0 / den;
    r[0] = r0 + bp.d * x0 / den;
    let e = ExtrinsicState { q, r, bp: *bp, topology: s.topology };
    e.check_fields()?;
    Ok(e)
}

/// Inverse change of variables on the configured branch.
pub fn from_extrinsic(e: &ExtrinsicState) -> Result<LatticeState> {
    let bp = &e.bp;
    let (big_q, big_r) = (e.q[0], e.r[0]);
    let x = ONE - big_q * big_r;
    let root = bp.root(big_q, big_r);
    let (q0, r0) = match bp.branch {
        Branch::Minus => {
            let den = bp.a + root;
            if !(den.norm() > crate::boundary::BOUNDARY_FLOOR) {
                return Err(Error::BranchSingular(Branch::Minus));
            }
            (big_q + bp.c * x * 2.0 / den, big_r - bp.d * x * 2.0 / den)
        }
        Branch::Plus => {
            if bp.c == C64::default() || bp.d == C64::default() {
                return Err(Error::BranchSingular(Branch::Plus));
            }
            (big_q - (bp.a + root) / (bp.d * 2.0), big_r + (bp.a + root) / (bp.c * 2.0))
        }
    };
    let mut q = e.q.clone();
    let mut r = e.r.clone();
    q[0] = q0;
    r[0] = r0;
    LatticeState::new(q, r, e.topology)
}

/// Round-trip error of the change of variables at `s` for the branch in `bp`.
/// Fails with [`Error::BranchMismatch`] above [`ROUND_TRIP_TOL`].
pub fn validate_branch(s: &LatticeState, bp: &BoundaryParams) -> Result<f64> {
    let back = from_extrinsic(&to_extrinsic(s, bp)?)?;
    let residual = (back.q[0] - s.q[0]).norm().max((back.r[0] - s.r[0]).norm());
    if residual > ROUND_TRIP_TOL * (1.0 + s.q[0].norm().max(s.r[0].norm())) {
        return Err(Error::BranchMismatch { branch: bp.branch, residual });
    }
    Ok(residual)
}

/// Ghost values from the three-site closure on sites `-1, 0, 1`.
///
/// For `c = d = 0` this is the discrete Robin condition
/// `β Q_{-1} + (b/a) Q_0 = 0`, `α R_{-1} + (b/a) R_0 = 0`.
pub fn ghost_closure(e: &ExtrinsicState, p: &ModelParams) -> Result<(C64, C64)> {
    let bp = &e.bp;
    let (q0, r0, q1, r1) = (e.q[0], e.r[0], e.q_at(1), e.r_at(1));
    let ratio = bp.closure_ratio(q0, r0)?;
    let gq = p.alpha / p.beta * q1 + (bp.a * p.alpha * q1 + bp.b * q0) * ratio / p.beta;
    let gr = p.beta / p.alpha * r1 + (bp.a * p.beta * r1 + bp.b * r0) * ratio / p.alpha;
    Ok((gq, gr))
}

/// Ghost values from the two-site closure involving `Q̇_0, Ṙ_0`.
///
/// Eliminating `Q_1` between the three-site closure and the bulk equation at
/// `j = 0` gives
/// `Q_{-1} = κ (i c d Q̇_0 + (2γcd + ab ∓ b√S) Q_0) / β`,
/// `R_{-1} = κ (-i c d Ṙ_0 + (2γcd + ab ∓ b√S) R_0) / α`
/// with `κ = -(a ± √S) / (±4 c d √S (1 - Q_0 R_0))`. On the minus branch
/// `κ = -1/(√S (a + √S))`, which is regular at `c d = 0`.
pub fn ghost_from_velocity(
    q0: C64,
    r0: C64,
    q0_dot: C64,
    r0_dot: C64,
    bp: &BoundaryParams,
    p: &ModelParams,
) -> Result<(C64, C64)> {
    let x = ONE - q0 * r0;
    let root = bp.root(q0, r0);
    let cd = bp.cd();
    let sign = bp.branch.sign();
    let kappa = match bp.branch {
        Branch::Minus => {
            let den = root * (bp.a + root);
            if !(den.norm() > crate::boundary::BOUNDARY_FLOOR) {
                return Err(Error::BranchSingular(Branch::Minus));
            }
            -den.inv()
        }
        Branch::Plus => {
            let den = cd * root * x * 4.0;
            if !(den.norm() > crate::boundary::BOUNDARY_FLOOR) {
                return Err(Error::BranchSingular(Branch::Plus));
            }
            -(bp.a + root) / den
        }
    };
    let coeff = p.gamma * cd * 2.0 + bp.a * bp.b - bp.b * root * sign;
    let gq = kappa * (I * cd * q0_dot + coeff * q0) / p.beta;
    let gr = kappa * (-I * cd * r0_dot + coeff * r0) / p.alpha;
    Ok((gq, gr))
}

/// Bulk equations at every site `0..=N` with the ghost from the closure and
/// `Q_{N+1} = R_{N+1} = 0`.
pub fn rhs_open_extrinsic(e: &ExtrinsicState, p: &ModelParams) -> Result<Derivatives> {
    e.check_fields()?;
    if e.n() < 1 {
        return Err(Error::InvalidParams("open chain needs at least two sites".into()));
    }
    let (gq, gr) = ghost_closure(e, p)?;
    let qm = |j: i64| if j < 0 { gq } else { e.q_at(j) };
    let rm = |j: i64| if j < 0 { gr } else { e.r_at(j) };
    let n = e.q.len() as i64;
    let q = (0..n).map(|j| bulk_q(p, e.q_at(j), e.r_at(j), e.q_at(j + 1), qm(j - 1))).collect();
    let r = (0..n).map(|j| bulk_r(p, e.q_at(j), e.r_at(j), e.r_at(j + 1), rm(j - 1))).collect();
    Ok(Derivatives { q, r })
}

/// Maps intrinsic derivatives through the change of variables at `s`.
pub fn push_forward(s: &LatticeState, bp: &BoundaryParams, d: &Derivatives) -> Result<Derivatives> {
    let (q0, r0) = (s.q[0], s.r[0]);
    let den = bp.denominator(q0, r0)?;
    let mix = ((bp.d + bp.a * r0 - bp.c * r0 * r0) * d.q[0] - (bp.c - bp.a * q0 - bp.d * q0 * q0) * d.r[0]) / (den * den);
    let mut out = d.clone();
    out.q[0] += bp.c * mix;
    out.r[0] -= bp.d * mix;
    Ok(out)
}
