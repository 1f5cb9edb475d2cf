//! Reflected k-soliton solutions of focusing DNLS on the half lattice and
//! the checks that tie them to the boundary.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::backlund::{BacklundChain, BacklundSeeds};
use super::folding::{fold, FullLineFields};
use super::spectral::{octet_expand, DiscreteData, OctetData};
use crate::algebra::{DMat, I, ZERO};
use crate::boundary::{Branch, BoundaryParams};
use crate::dynamics::{bulk_q, reduced_ghost};
use crate::error::{Error, Result};
use crate::lax::{omega, time_lax_a, ModelParams, Reduction};

/// Cap on the condition number of the (equilibrated) linear system.
pub const CONDITION_CAP: f64 = 1e12;
/// Boundary residual below which a branch counts as certified.
pub const BOUNDARY_TOL: f64 = 1e-8;
const RUIZ_SWEEPS: usize = 30;

/// A pure-soliton solution ready for evaluation at any `(j, t)`.
#[derive(Clone, Debug)]
pub struct SolitonSolution {
    dd: DiscreteData,
    oct: OctetData,
    p: ModelParams,
    z2: Vec<C64>,
    zbar2: Vec<C64>,
    w: Vec<C64>,
    wbar: Vec<C64>,
}

impl SolitonSolution {
    /// Builds the octets once. Only focusing DNLS (`ν = -1`) is supported.
    pub fn new(dd: &DiscreteData, p: &ModelParams) -> Result<Self> {
        p.validate()?;
        if p.reduction != (Reduction::Dnls { nu: -1 }) {
            return Err(Error::Constraint("soliton solutions need the focusing dnls reduction (nu = -1)".into()));
        }
        dd.bp.check_dnls(-1, 1e-12)?;
        let oct = octet_expand(dd, p)?;
        let z2 = oct.z.iter().map(|z| z * z).collect();
        let zbar2 = oct.zbar.iter().map(|z| z * z).collect();
        let w = oct.z.iter().map(|z| omega(*z, p)).collect::<Result<_>>()?;
        let wbar = oct.zbar.iter().map(|z| omega(*z, p)).collect::<Result<_>>()?;
        Ok(SolitonSolution { dd: dd.clone(), oct, p: *p, z2, zbar2, w, wbar })
    }

    pub fn data(&self) -> &DiscreteData {
        &self.dd
    }

    pub fn octets(&self) -> &OctetData {
        &self.oct
    }

    /// `Q_j(t)` on the whole line.
    ///
    /// The linear system `μ̄ x = v` is solved in the augmented form
    /// `[[I, A], [B, I]] (x, y) = (v, 0)` with `μ̄ = I - AB`, after Ruiz
    /// equilibration: the entries of `μ̄` span many decades once `|j|` grows.
    pub fn q(&self, j: i64, t: f64) -> Result<C64> {
        let n = self.oct.len();
        if n == 0 {
            return Ok(ZERO);
        }
        // the closed form runs backwards in the time of the equations of motion
        let tau = -t;
        let jj = j as i32;
        let (c, cbar) = (&self.oct.c, &self.oct.cbar);
        let mut m = DMat::identity(2 * n);
        for r in 0..n {
            let head = cbar[r] * self.zbar2[r].powi(jj + 1) * 4.0;
            for pp in 0..n {
                let phase = (I * (self.w[pp] - self.wbar[r]) * (2.0 * tau)).exp();
                m[(r, n + pp)] = head * c[pp] * self.z2[pp].powi(-jj) * phase / (self.zbar2[r] - self.z2[pp]);
            }
        }
        for pp in 0..n {
            for l in 0..n {
                m[(n + pp, l)] = (self.z2[pp] - self.zbar2[l]).inv();
            }
        }
        let mut rhs = vec![ZERO; 2 * n];
        for r in 0..n {
            rhs[r] = cbar[r] * self.zbar2[r].powi(jj) * (-I * self.wbar[r] * (2.0 * tau)).exp();
        }
        let eq = m.equilibrate(RUIZ_SWEEPS)?;
        let cond = eq.scaled.condition()?;
        if !(cond <= CONDITION_CAP) {
            return Err(Error::IllConditioned(cond));
        }
        let x = eq.solve(&rhs)?;
        let q = x[..n].iter().sum::<C64>() * -2.0;
        if !q.is_finite() {
            return Err(Error::NonFinite(format!("soliton value at j = {j}, t = {t}")));
        }
        Ok(q)
    }

    /// `R_j = -Q_j*`.
    pub fn r(&self, j: i64, t: f64) -> Result<C64> {
        Ok(-self.q(j, t)?.conj())
    }

    pub fn full_line(&self, lo: i64, hi: i64, t: f64) -> Result<FullLineFields> {
        let mut q = Vec::with_capacity((hi - lo + 1).max(0) as usize);
        for j in lo..=hi {
            q.push(self.q(j, t)?);
        }
        let r = q.iter().map(|x| -x.conj()).collect();
        Ok(FullLineFields::new(lo, q, r))
    }

    /// Full-line fields on `-J-3..=J+3` and their folded mirror.
    pub fn mirror_pair(&self, half_width: i64, t: f64) -> Result<(FullLineFields, FullLineFields)> {
        let f = self.full_line(-half_width - 3, half_width + 3, t)?;
        let m = fold(&f, &self.p);
        Ok((f, m))
    }

    /// `∂ₜQ_j` by a central difference of step `h`.
    pub fn q_dot(&self, j: i64, t: f64, h: f64) -> Result<C64> {
        Ok((self.q(j, t + h)? - self.q(j, t - h)?) / (2.0 * h))
    }

    /// `|∂ₜQ_j - i(Q_{j+1} - 2Q_j + Q_{j-1} + |Q_j|²(Q_{j+1} + Q_{j-1}))|`
    /// with the central-difference time derivative.
    pub fn bulk_residual(&self, j: i64, t: f64, h: f64) -> Result<f64> {
        Ok((self.q_dot(j, t, h)? - self.bulk_rhs(j, t)?).norm())
    }

    /// Same residual with a Richardson-extrapolated derivative built from
    /// steps `h` and `h/2` (truncation `O(h⁴)`).
    pub fn bulk_residual_richardson(&self, j: i64, t: f64, h: f64) -> Result<f64> {
        let coarse = self.q_dot(j, t, h)?;
        let fine = self.q_dot(j, t, h / 2.0)?;
        Ok(((fine * 4.0 - coarse) / 3.0 - self.bulk_rhs(j, t)?).norm())
    }

    fn bulk_rhs(&self, j: i64, t: f64) -> Result<C64> {
        let q = self.q(j, t)?;
        Ok(bulk_q(&self.p, q, -q.conj(), self.q(j + 1, t)?, self.q(j - 1, t)?))
    }

    /// `|Q_{-1} - ghost(Q_0, Q_1)|` for the closure on branch `branch`.
    pub fn closure_residual(&self, t: f64, branch: Branch) -> Result<f64> {
        self.closure_residual_with(t, &self.dd.bp.with_branch(branch))
    }

    /// Closure residual against arbitrary boundary parameters (used by the
    /// perturbation checks).
    pub fn closure_residual_with(&self, t: f64, bp: &BoundaryParams) -> Result<f64> {
        let ghost = reduced_ghost(self.q(0, t)?, self.q(1, t)?, bp, &self.p)?;
        Ok((self.q(-1, t)? - ghost).norm())
    }

    /// Bäcklund chain between the solution at time `t` and its mirror, seeded
    /// by the time-dependent reflection matrix on `branch`.
    pub fn backlund_chain(&self, half_width: i64, t: f64, branch: Branch) -> Result<BacklundChain> {
        let (f, m) = self.mirror_pair(half_width, t)?;
        let seeds = BacklundSeeds::from_boundary(f.q_at(0), f.r_at(0), &self.dd.bp.with_branch(branch), &self.p)?;
        BacklundChain::build(f, m, seeds, half_width)
    }

    /// Residual of `∂ₜB(0) = A(0,z) B(0) - B(0) Ã(0,z)` with `Ã` built on the
    /// mirror fields and `∂ₜB(0)` by a central difference of step `h`.
    pub fn backlund_time_residual(&self, t: f64, z: C64, branch: Branch, h: f64) -> Result<f64> {
        let b_at = |s: f64| self.backlund_chain(1, s, branch).and_then(|ch| ch.matrix(0, z));
        let b_dot = (b_at(t + h)? - b_at(t - h)?).scale(C64::from(0.5 / h));
        let (f, m) = self.mirror_pair(1, t)?;
        let a = time_lax_a(f.q_at(0), f.r_at(0), f.q_at(-1), f.r_at(-1), z, &self.p)?;
        let at = time_lax_a(m.q_at(0), m.r_at(0), m.q_at(-1), m.r_at(-1), z, &self.p)?;
        let b = b_at(t)?;
        Ok((b_dot - (a * b - b * at)).norm())
    }
}

/// `Q_j(t)` on the half lattice, ghost site included (`j ≥ -1`).
pub fn soliton_solution(dd: &DiscreteData, j: i64, t: f64, p: &ModelParams) -> Result<C64> {
    if j < -1 {
        return Err(Error::IndexRange { index: j, max: i64::MAX });
    }
    SolitonSolution::new(dd, p)?.q(j, t)
}

/// Boundary residuals of a soliton for both closures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryCheck {
    pub plus: f64,
    pub minus: f64,
    /// The branch whose residual is below [`BOUNDARY_TOL`], when exactly one is.
    pub certified: Option<Branch>,
}

impl BoundaryCheck {
    pub fn residual(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.plus,
            Branch::Minus => self.minus,
        }
    }

    /// Residual of the certified branch, or the smaller of the two.
    pub fn best(&self) -> f64 {
        self.certified.map(|b| self.residual(b)).unwrap_or(self.plus.min(self.minus))
    }
}

/// Largest closure residual over `t_samples` on each branch. A branch whose
/// closure cannot be evaluated reports an infinite residual.
pub fn verify_boundary(dd: &DiscreteData, t_samples: &[f64], p: &ModelParams) -> Result<BoundaryCheck> {
    let sol = SolitonSolution::new(dd, p)?;
    let mut worst = [0.0f64; 2];
    for (slot, branch) in [Branch::Plus, Branch::Minus].into_iter().enumerate() {
        for &t in t_samples {
            let res = match sol.closure_residual(t, branch) {
                Ok(v) => v,
                Err(Error::IllConditioned(c)) => return Err(Error::IllConditioned(c)),
                Err(_) => f64::INFINITY,
            };
            worst[slot] = worst[slot].max(if res.is_nan() { f64::INFINITY } else { res });
        }
    }
    let [plus, minus] = worst;
    let certified = match (plus < BOUNDARY_TOL, minus < BOUNDARY_TOL) {
        (true, false) => Some(Branch::Plus),
        (false, true) => Some(Branch::Minus),
        _ => None,
    };
    Ok(BoundaryCheck { plus, minus, certified })
}

/// `t = -10, -9, …, 10`.
pub fn standard_t_samples() -> Vec<f64> {
    (-10..=10).map(f64::from).collect()
}
