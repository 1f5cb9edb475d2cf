//! Residuals of the structural identities: r-matrix, reflection equation,
//! Poisson algebra and zero curvature. Each returns a norm that should vanish.

use num_complex::Complex64 as C64;

use crate::algebra::{in_space_a, in_space_b, DMat, M4};
use crate::algebra::M2;
use crate::boundary::{boundary_lax, double_row_transfer, k_minus, k_plus, reflection_residual, tau, BoundaryParams};
use crate::dynamics::{rhs_open_intrinsic, rhs_periodic, Derivatives};
use crate::error::Result;
use crate::lax::{ell, ell_dot, monodromy, omega, r_matrix, time_lax_a, LatticeState, ModelParams, Topology};
use crate::poisson::{bracket, hamiltonian_flow_rhs, Observable};

/// Classical Yang–Baxter combination
/// `[r13(w/ν), r23(z/ν)] + [r12(w/z), r13(w/ν)] + [r12(w/z), r23(z/ν)]`
/// evaluated as an 8×8 matrix, divided by `max(1, ‖r‖‖r'‖)` over the pairs
/// (the r-matrices have poles, where the terms grow).
pub fn yang_baxter_residual(w: C64, z: C64, nu: C64) -> Result<f64> {
    let id = DMat::identity(2);
    let p23 = id.kron(&DMat::from(M4::swap()));
    let ab = |m: M4| DMat::from(m).kron(&id);
    let bc = |m: M4| id.kron(&DMat::from(m));
    let ac = |m: M4| p23.matmul(&ab(m)).matmul(&p23);
    let r_ac = ac(r_matrix(w / nu)?);
    let r_bc = bc(r_matrix(z / nu)?);
    let r_ab = ab(r_matrix(w / z)?);
    let (nab, nac, nbc) = (r_ab.norm(), r_ac.norm(), r_bc.norm());
    let scale = (nac * nbc).max(nab * nac).max(nab * nbc).max(1.0);
    Ok(r_ac.commutator(&r_bc).add(&r_ab.commutator(&r_ac)).add(&r_ab.commutator(&r_bc)).norm() / scale)
}

/// `‖r12(w) + r21(1/w)‖`, relative to `‖r(w)‖` when that exceeds 1.
pub fn r_skew_residual(w: C64) -> Result<f64> {
    let r = r_matrix(w)?;
    Ok((r + r_matrix(w.inv())?.swap_spaces()).norm() / r.norm().max(1.0))
}

/// `‖r12(w) - r21(w)‖`.
pub fn r_space_symmetry_residual(w: C64) -> Result<f64> {
    let r = r_matrix(w)?;
    Ok((r - r.swap_spaces()).norm())
}

/// Reflection-equation residual of `k` divided by the size of its terms,
/// `‖k(w)‖ ‖k(z)‖ max(1, ‖r‖)` over the four r-matrices involved (they
/// have poles at `w² = z²` and `w z = √(β/α)`).
pub fn reflection_relative_residual<K>(k: K, w: C64, z: C64, p: &ModelParams) -> Result<f64>
where
    K: Fn(C64) -> Result<M2> + Copy,
{
    let (tw, tz) = (tau(w, p)?, tau(z, p)?);
    let r_max = [w / z, tw / tz, tw / z, w / tz]
        .into_iter()
        .map(|x| r_matrix(x).map(|r| r.norm()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(1.0, f64::max);
    let scale = k(w)?.norm() * k(z)?.norm() * r_max;
    Ok(reflection_residual(k, w, z, p)? / scale.max(f64::MIN_POSITIVE))
}

/// `|ω(τ(z)) - ω(z)|`, relative.
pub fn omega_tau_residual(z: C64, p: &ModelParams) -> Result<f64> {
    let w = omega(z, p)?;
    Ok((omega(tau(z, p)?, p)? - w).norm() / w.norm().max(1.0))
}

/// Residual of `{T1(w), T2(z)} = [r12(w/z), T1(w) T2(z)]` for the monodromy
/// of `s`, brackets by central differences of step `h`.
pub fn rll_residual(s: &LatticeState, w: C64, z: C64, h: f64) -> Result<f64> {
    let tw = monodromy(s, w)?;
    let tz = monodromy(s, z)?;
    let rhs = r_matrix(w / z)?.commutator(&(in_space_a(&tw) * in_space_b(&tz)));
    let entry = |x: C64, i: usize, k: usize| {
        Observable::new(format!("T({x})[{i}{k}]"), move |st: &LatticeState| Ok(monodromy(st, x)?[(i, k)]))
    };
    let mut worst = 0.0f64;
    for m in 0..16 {
        let (i, j, k, l) = (m >> 3, (m >> 2) & 1, (m >> 1) & 1, m & 1);
        let got = bracket(&entry(w, i, k), &entry(z, j, l), s, h)?;
        worst = worst.max((got - rhs[(2 * i + j, 2 * k + l)]).norm());
    }
    Ok(worst)
}

/// `|{t(w), t(z)}|` for the periodic transfer matrix.
pub fn transfer_involution_residual(s: &LatticeState, w: C64, z: C64, h: f64) -> Result<f64> {
    Ok(bracket(&Observable::transfer(w), &Observable::transfer(z), s, h)?.norm())
}

/// `|{b(w), b(z)}|` for the double-row transfer matrix.
pub fn double_row_involution_residual(
    s: &LatticeState,
    w: C64,
    z: C64,
    bp: &BoundaryParams,
    p: &ModelParams,
    h: f64,
) -> Result<f64> {
    let (bp, p) = (*bp, *p);
    Ok(bracket(&Observable::double_row(w, bp, p), &Observable::double_row(z, bp, p), s, h)?.norm())
}

/// Largest gap between the closed-form right-hand side and the Hamiltonian
/// flow `{H, ·}` computed from brackets.
pub fn flow_consistency_residual(s: &LatticeState, bp: Option<&BoundaryParams>, p: &ModelParams, h: f64) -> Result<f64> {
    let (obs, closed) = match bp {
        None => (Observable::hamiltonian_periodic(*p), rhs_periodic(s, p)?),
        Some(bp) => (Observable::hamiltonian_open(*bp, *p), rhs_open_intrinsic(s, bp, p)?),
    };
    let (q, r) = hamiltonian_flow_rhs(&obs, s, h)?;
    Ok(closed.max_abs_diff(&Derivatives { q, r }))
}

fn zero_curvature<A>(s: &LatticeState, d: &Derivatives, z: C64, a: A) -> Result<f64>
where
    A: Fn(usize) -> Result<crate::algebra::M2>,
{
    let mut worst = 0.0f64;
    for j in 0..s.len() {
        let l = ell(s.q[j], s.r[j], z)?;
        let ldot = ell_dot(s.q[j], s.r[j], d.q[j], d.r[j], z)?;
        worst = worst.max((ldot - (a(j + 1)? * l - l * a(j)?)).norm());
    }
    Ok(worst)
}

/// `max_j ‖∂ₜℓ(j) - A(j+1)ℓ(j) + ℓ(j)A(j)‖` on a periodic chain, with
/// `∂ₜℓ` from the equations of motion.
pub fn periodic_zero_curvature_residual(s: &LatticeState, z: C64, p: &ModelParams) -> Result<f64> {
    s.require(Topology::Periodic)?;
    let d = rhs_periodic(s, p)?;
    let a = |j: usize| {
        let jj = j as i64;
        time_lax_a(s.q_at(jj), s.r_at(jj), s.q_at(jj - 1), s.r_at(jj - 1), z, p)
    };
    zero_curvature(s, &d, z, a)
}

/// Same on the open chain with the boundary-modified time Lax matrices.
pub fn open_zero_curvature_residual(s: &LatticeState, z: C64, bp: &BoundaryParams, p: &ModelParams) -> Result<f64> {
    let d = rhs_open_intrinsic(s, bp, p)?;
    zero_curvature(s, &d, z, |j| boundary_lax(s, j, z, bp, p))
}

/// Residuals of `𝔸(0,z)k⁻(z) = k⁻(z)𝔸(0,τ(z))` and
/// `𝔸(N+1,τ(z))k⁺(z) = k⁺(z)𝔸(N+1,z)`.
pub fn boundary_zero_curvature_residuals(
    s: &LatticeState,
    z: C64,
    bp: &BoundaryParams,
    p: &ModelParams,
) -> Result<(f64, f64)> {
    let tz = tau(z, p)?;
    let km = k_minus(z, bp, p)?;
    let left = boundary_lax(s, 0, z, bp, p)? * km - km * boundary_lax(s, 0, tz, bp, p)?;
    let end = s.n() + 1;
    let kp = k_plus(z, p)?;
    let right = boundary_lax(s, end, tz, bp, p)? * kp - kp * boundary_lax(s, end, z, bp, p)?;
    Ok((left.norm(), right.norm()))
}

/// `|b(z) - b(τ(z))|`, relative: the double-row transfer matrix is
/// invariant under `τ`.
pub fn double_row_tau_residual(s: &LatticeState, z: C64, bp: &BoundaryParams, p: &ModelParams) -> Result<f64> {
    let b = double_row_transfer(s, z, bp, p)?;
    Ok((double_row_transfer(s, tau(z, p)?, bp, p)? - b).norm() / b.norm().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::c;
    use crate::poisson::DEFAULT_STEP;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rc(rng: &mut impl Rng, s: f64) -> C64 {
        c(rng.gen_range(-s..s), rng.gen_range(-s..s))
    }

    fn spectral(rng: &mut impl Rng) -> C64 {
        C64::from_polar(rng.gen_range(0.6..1.6), rng.gen_range(0.0..std::f64::consts::TAU))
    }

    fn state(rng: &mut impl Rng, n: usize, topo: Topology) -> LatticeState {
        let q = (0..=n).map(|_| rc(rng, 0.4)).collect();
        let r = (0..=n).map(|_| rc(rng, 0.4)).collect();
        LatticeState::new(q, r, topo).unwrap()
    }

    #[test]
    fn zero_curvature_periodic_and_open() {
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        for n in 1..6 {
            let p = ModelParams::new(rc(&mut rng, 1.0), rc(&mut rng, 1.0), rc(&mut rng, 1.0)).unwrap();
            let bp = BoundaryParams::new(c(1.1, 0.2), rc(&mut rng, 1.0), rc(&mut rng, 0.6), rc(&mut rng, 0.6));
            let z = spectral(&mut rng);
            let s = state(&mut rng, n, Topology::Periodic);
            assert!(periodic_zero_curvature_residual(&s, z, &p).unwrap() < 1e-10);
            let s = state(&mut rng, n, Topology::Open);
            assert!(open_zero_curvature_residual(&s, z, &bp, &p).unwrap() < 1e-10, "N = {n}");
            let (l, r) = boundary_zero_curvature_residuals(&s, z, &bp, &p).unwrap();
            assert!(l < 1e-10 && r < 1e-10, "N = {n}: {l:e} {r:e}");
        }
    }

    #[test]
    fn rll_for_short_chains() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for n in 0..3 {
            let s = state(&mut rng, n, Topology::Periodic);
            let res = rll_residual(&s, spectral(&mut rng), spectral(&mut rng), DEFAULT_STEP).unwrap();
            assert!(res < 1e-6, "N = {n}: {res:e}");
        }
    }

    #[test]
    fn r_matrix_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        for _ in 0..20 {
            let (w, z, nu) = (spectral(&mut rng), spectral(&mut rng), spectral(&mut rng));
            assert!(yang_baxter_residual(w, z, nu).unwrap() < 1e-12);
            assert!(r_skew_residual(w).unwrap() < 1e-12);
            assert_eq!(r_space_symmetry_residual(w).unwrap(), 0.0);
        }
    }

    #[test]
    fn double_row_is_tau_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        let p = ModelParams::new(rc(&mut rng, 1.0), rc(&mut rng, 1.0), rc(&mut rng, 1.0)).unwrap();
        let bp = BoundaryParams::new(c(1.1, 0.2), rc(&mut rng, 1.0), rc(&mut rng, 0.6), rc(&mut rng, 0.6));
        let s = state(&mut rng, 3, Topology::Open);
        assert!(double_row_tau_residual(&s, spectral(&mut rng), &bp, &p).unwrap() < 1e-10);
    }
}
