//! Open chain: reflection matrices, double-row transfer matrix, the open
//! Hamiltonian and the boundary-modified time Lax matrices.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    in_space_a, in_space_b, laurent_extract, M2, M4, I, LAURENT_RADIUS, ONE, ZERO,
};
use crate::error::{Error, Result};
use crate::lax::{self, ell, monodromy, omega, time_lax_a, LatticeState, ModelParams, Topology};

/// Floor on `|a + d q0 - c r0|`.
pub const BOUNDARY_FLOOR: f64 = 1e-12;

/// Sign in front of `√(4cd(1 - Q0 R0) + a²)` in the closure, the inverse
/// change of variables and the time-dependent reflection matrix.
///
/// `Minus` is the branch that stays regular as `c d → 0` and reduces to the
/// Robin closure there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    #[default]
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Branch {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(Error::Config(format!("branch must be plus or minus, got {s:?}"))),
        }
    }
}

/// Coefficients of the left reflection matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryParams {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    #[serde(default)]
    pub branch: Branch,
}

impl BoundaryParams {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        BoundaryParams { a, b, c, d, branch: Branch::default() }
    }

    /// Real `a`, `b` and `c = d^*`: the focusing DNLS boundary.
    pub fn dnls_focusing(a: f64, b: f64, d: C64) -> Self {
        BoundaryParams::new(C64::new(a, 0.0), C64::new(b, 0.0), d.conj(), d)
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }

    /// Diagonal reflection matrix, `c = d = 0`.
    pub fn is_robin(&self) -> bool {
        self.c == ZERO && self.d == ZERO
    }

    pub fn cd(&self) -> C64 {
        self.c * self.d
    }

    /// `a + d q0 - c r0`, checked against the floor.
    pub fn denominator(&self, q0: C64, r0: C64) -> Result<C64> {
        let den = self.a + self.d * q0 - self.c * r0;
        if !(den.norm() > BOUNDARY_FLOOR) {
            return Err(Error::BoundarySingular(den.norm()));
        }
        Ok(den)
    }

    /// `√(4cd(1 - Q0 R0) + a²)`, taken as `a √(1 + 4cd(1 - Q0 R0)/a²)` so that
    /// it tends to `a` (not `-a`) as `c d → 0`.
    pub fn root(&self, q0: C64, r0: C64) -> C64 {
        let x = ONE - q0 * r0;
        if self.a == ZERO {
            return (self.cd() * x * 4.0).sqrt();
        }
        self.a * (ONE + self.cd() * x * 4.0 / (self.a * self.a)).sqrt()
    }

    /// `(a ± √S) / (2 c d (1 - Q0 R0))` for the configured branch, in a form
    /// that stays finite on the minus branch as `c d → 0`.
    pub fn closure_ratio(&self, q0: C64, r0: C64) -> Result<C64> {
        let x = ONE - q0 * r0;
        let root = self.root(q0, r0);
        match self.branch {
            Branch::Minus => {
                let den = self.a + root;
                if !(den.norm() > BOUNDARY_FLOOR) {
                    return Err(Error::BranchSingular(Branch::Minus));
                }
                Ok(-2.0 / den)
            }
            Branch::Plus => {
                let den = self.cd() * x * 2.0;
                if !(den.norm() > BOUNDARY_FLOOR) {
                    return Err(Error::BranchSingular(Branch::Plus));
                }
                Ok((self.a + root) / den)
            }
        }
    }

    /// Constraints under the DNLS reduction `r = ν q^*`: `a, b` real and `c = -ν d^*`.
    pub fn check_dnls(&self, nu: i8, tol: f64) -> Result<()> {
        if self.a.im.abs() > tol {
            return Err(Error::Constraint("dnls boundary requires a real".into()));
        }
        if self.b.im.abs() > tol {
            return Err(Error::Constraint("dnls boundary requires b real".into()));
        }
        if (self.c + self.d.conj() * nu as f64).norm() > tol {
            return Err(Error::Constraint("dnls boundary requires c = -ν conj(d)".into()));
        }
        Ok(())
    }

    /// Constraints under the DMKdV reduction: all real, `c = -ν d`, `b = 0`.
    pub fn check_dmkdv(&self, nu: i8, tol: f64) -> Result<()> {
        if [self.a, self.b, self.c, self.d].iter().any(|x| x.im.abs() > tol) {
            return Err(Error::Constraint("dmkdv boundary requires a, b, c, d real".into()));
        }
        if self.b.norm() > tol {
            return Err(Error::Constraint("dmkdv boundary requires b=0".into()));
        }
        if (self.c + self.d * nu as f64).norm() > tol {
            return Err(Error::Constraint("dmkdv boundary requires c = -ν d".into()));
        }
        Ok(())
    }
}

/// `τ(z) = √(β/α) / z`.
pub fn tau(z: C64, p: &ModelParams) -> Result<C64> {
    if z == ZERO {
        return Err(Error::ZeroSpectral);
    }
    Ok(p.sqrt_beta_over_alpha() / z)
}

/// Left reflection matrix, the general solution of the reflection equation.
pub fn k_minus(z: C64, bp: &BoundaryParams, p: &ModelParams) -> Result<M2> {
    if z == ZERO {
        return Err(Error::ZeroSpectral);
    }
    let s = p.sqrt_beta_over_alpha();
    let z2 = z * z;
    Ok(M2::new(
        bp.a * z + bp.b / (p.alpha * z),
        bp.c * (z2 / s - s / z2),
        bp.d * (z2 - p.beta / (z2 * p.alpha)),
        bp.a * s / z + bp.b * z / p.sqrt_alpha_beta(),
    ))
}

/// Right reflection matrix `diag(z, √(β/α)/z)`.
pub fn k_plus(z: C64, p: &ModelParams) -> Result<M2> {
    if z == ZERO {
        return Err(Error::ZeroSpectral);
    }
    Ok(M2::diag(z, p.sqrt_beta_over_alpha() / z))
}

/// Frobenius norm of the four-term reflection-equation combination for `k`.
pub fn reflection_residual<K>(k: K, w: C64, z: C64, p: &ModelParams) -> Result<f64>
where
    K: Fn(C64) -> Result<M2>,
{
    let (tw, tz) = (tau(w, p)?, tau(z, p)?);
    let ka = in_space_a(&k(w)?);
    let kb = in_space_b(&k(z)?);
    let r1 = lax::r_matrix(w / z)?;
    let r2 = lax::r_matrix(tw / tz)?;
    let r3 = lax::r_matrix(tw / z)?;
    let r4 = lax::r_matrix(w / tz)?;
    let total: M4 = r1 * ka * kb + ka * kb * r2 - ka * r3 * kb - kb * r4 * ka;
    Ok(total.norm())
}

/// Double-row transfer matrix `tr(k⁺(z) L(z) k⁻(z) L(τ(z))⁻¹)`.
pub fn double_row_transfer(s: &LatticeState, z: C64, bp: &BoundaryParams, p: &ModelParams) -> Result<C64> {
    s.require(Topology::Open)?;
    let l = monodromy(s, z)?;
    let l_tau_inv = monodromy(s, tau(z, p)?)?.inv()?;
    Ok((k_plus(z, p)? * l * k_minus(z, bp, p)? * l_tau_inv).trace())
}

/// Leading charges of the double-row transfer matrix and the open Hamiltonian
/// computed two ways.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpenCharges {
    /// Coefficient of `z^{-2N-4}`.
    pub i0: C64,
    /// Coefficient of `z^{-2N-2}`.
    pub i1: C64,
    /// Hamiltonian assembled from `i0`, `i1`.
    pub hamiltonian_from_charges: C64,
    /// Closed-form Hamiltonian (bulk sums plus boundary term).
    pub hamiltonian: C64,
}

/// Radius used to extract the leading negative-power coefficients of `b(z)`.
/// Inside the unit disk those terms dominate the samples, which keeps the
/// extraction at relative machine precision for long chains.
pub const OPEN_CHARGE_RADIUS: f64 = 1.0 / LAURENT_RADIUS;

pub fn open_charges_and_hamiltonian(s: &LatticeState, bp: &BoundaryParams, p: &ModelParams) -> Result<OpenCharges> {
    s.require(Topology::Open)?;
    s.check_fields()?;
    bp.denominator(s.q[0], s.r[0])?;
    let n = s.n() as i32;
    let series = laurent_extract(|z| double_row_transfer(s, z, bp, p), (-2 * n - 4, 2 * n + 4), OPEN_CHARGE_RADIUS)?;
    let i0 = series.coeff(-2 * n - 4);
    let i1 = series.coeff(-2 * n - 2);
    Ok(OpenCharges {
        i0,
        i1,
        hamiltonian_from_charges: hamiltonian_from_charges(i0, i1, s.n(), p),
        hamiltonian: hamiltonian_open(s, bp, p)?,
    })
}

/// `-2β I1/I0 - 2γ ln((α/β)^{(N+3)/2} I0)`.
///
/// The normalising power makes this agree with [`hamiltonian_open`] for any
/// ratio `α/β`; at `α = β` it is 1.
pub fn hamiltonian_from_charges(i0: C64, i1: C64, n: usize, p: &ModelParams) -> C64 {
    let norm = p.sqrt_alpha_over_beta().powi(n as i32 + 3);
    -p.beta * 2.0 * i1 / i0 - p.gamma * 2.0 * (norm * i0).ln()
}

/// Boundary contribution `𝔹(q0, r0, q1, r1)` to the open Hamiltonian.
pub fn boundary_term(q0: C64, r0: C64, q1: C64, r1: C64, bp: &BoundaryParams, p: &ModelParams) -> Result<C64> {
    let den = bp.denominator(q0, r0)?;
    let e = bp.b + p.alpha * bp.d * q1 - p.beta * bp.c * r1;
    Ok(-(ONE - q0 * r0) * e * 2.0 / den - p.gamma * 2.0 * den.ln())
}

/// Closed-form open Hamiltonian.
pub fn hamiltonian_open(s: &LatticeState, bp: &BoundaryParams, p: &ModelParams) -> Result<C64> {
    s.require(Topology::Open)?;
    s.check_fields()?;
    let n = s.n();
    let mut h = ZERO;
    for j in 0..n {
        h -= (p.alpha * s.r[j] * s.q[j + 1] + p.beta * s.q[j] * s.r[j + 1]) * 2.0;
    }
    for j in 0..=n {
        h += p.gamma * 2.0 * (ONE - s.q[j] * s.r[j]).ln();
    }
    Ok(h + boundary_term(s.q[0], s.r[0], s.q_at(1), s.r_at(1), bp, p)?)
}

/// Time Lax matrix of the open chain at site `j ∈ 0..=N+1`.
pub fn boundary_lax(s: &LatticeState, j: usize, z: C64, bp: &BoundaryParams, p: &ModelParams) -> Result<M2> {
    s.require(Topology::Open)?;
    let n = s.n();
    if j > n + 1 {
        return Err(Error::IndexRange { index: j as i64, max: n as i64 + 1 });
    }
    let jj = j as i64;
    let bulk = || time_lax_a(s.q_at(jj), s.r_at(jj), s.q_at(jj - 1), s.r_at(jj - 1), z, p);
    match j {
        0 => boundary_lax_origin(s.q[0], s.r[0], s.q_at(1), s.r_at(1), z, bp, p),
        1 => {
            let (q0, r0, q1, r1) = (s.q[0], s.r[0], s.q_at(1), s.r_at(1));
            let den = bp.denominator(q0, r0)?;
            let pre = I * (ONE - q0 * r0) / den;
            let (bc, ad) = (p.beta * bp.c, p.alpha * bp.d);
            // off-diagonal entries carry a factor 2, like the bulk matrix
            let corr = M2::new(bc * r1 - ad * q1, bc * 2.0 / z, ad * 2.0 * z, ad * q1 - bc * r1);
            Ok(bulk()? + corr.scale(pre))
        }
        // 2..=N is the bulk form; at N+1 the bulk form with q_{N+1} = 0 is the right edge.
        _ => bulk(),
    }
}

fn boundary_lax_origin(q0: C64, r0: C64, q1: C64, r1: C64, z: C64, bp: &BoundaryParams, p: &ModelParams) -> Result<M2> {
    let den = bp.denominator(q0, r0)?;
    let w = omega(z, p)?;
    let (a, b, c, d) = (bp.a, bp.b, bp.c, bp.d);
    let x = ONE - q0 * r0;
    let e = b + p.alpha * d * q1 - p.beta * c * r1;
    let z2 = z * z;
    let t1 = M2::new(a, c * 2.0 / z, d * 2.0 * z, -a).scale(w - x * e / den);
    let t2 = M2::new(ONE + q0 * r0, q0 * 2.0 / z, -r0 * 2.0 * z, -ONE - q0 * r0).scale(b);
    let diag = (c * r0 + d * q0) * (p.alpha * z2 - p.beta / z2);
    let t3 = M2::new(
        diag,
        p.alpha * 2.0 * (c - a * q0 + c * q0 * r0) * z,
        p.beta * 2.0 * (d + a * r0 + d * q0 * r0) / z,
        -diag,
    );
    Ok((t1 + t2 - t3).scale(I / den))
}

/// `ℓ(j, z)` on an open chain.
pub fn ell_at(s: &LatticeState, j: usize, z: C64) -> Result<M2> {
    ell(s.q[j], s.r[j], z)
}
