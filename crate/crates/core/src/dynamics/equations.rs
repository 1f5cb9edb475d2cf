//! Closed-form equations of motion in the intrinsic picture.

use num_complex::Complex64 as C64;

use crate::algebra::{I, ONE};
use crate::boundary::BoundaryParams;
use crate::error::{Error, Result};
use crate::lax::{LatticeState, ModelParams, Topology};

/// Field derivatives `(q̇_j, ṙ_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivatives {
    pub q: Vec<C64>,
    pub r: Vec<C64>,
}

impl Derivatives {
    pub fn max_abs_diff(&self, other: &Derivatives) -> f64 {
        self.q
            .iter()
            .zip(&other.q)
            .chain(self.r.iter().zip(&other.r))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Bulk right-hand side at one site given its neighbours.
pub(crate) fn bulk_q(p: &ModelParams, q: C64, r: C64, q_next: C64, q_prev: C64) -> C64 {
    I * 2.0 * (p.alpha * q_next + p.gamma * q + p.beta * q_prev - q * r * (p.alpha * q_next + p.beta * q_prev))
}

pub(crate) fn bulk_r(p: &ModelParams, q: C64, r: C64, r_next: C64, r_prev: C64) -> C64 {
    -I * 2.0 * (p.beta * r_next + p.gamma * r + p.alpha * r_prev - q * r * (p.alpha * r_prev + p.beta * r_next))
}

/// Periodic chain.
pub fn rhs_periodic(s: &LatticeState, p: &ModelParams) -> Result<Derivatives> {
    s.require(Topology::Periodic)?;
    s.check_fields()?;
    let n = s.len() as i64;
    let q = (0..n).map(|j| bulk_q(p, s.q_at(j), s.r_at(j), s.q_at(j + 1), s.q_at(j - 1))).collect();
    let r = (0..n).map(|j| bulk_r(p, s.q_at(j), s.r_at(j), s.r_at(j + 1), s.r_at(j - 1))).collect();
    Ok(Derivatives { q, r })
}

pub(crate) fn require_open(s: &LatticeState) -> Result<()> {
    match s.topology {
        Topology::Open | Topology::HalfInfinite => Ok(()),
        Topology::Periodic => Err(Error::Topology { expected: Topology::Open.name(), got: s.topology.name() }),
    }
}

/// Open chain with the general left boundary and a free right end
/// (`q_{N+1} = r_{N+1} = 0`).
pub fn rhs_open_intrinsic(s: &LatticeState, bp: &BoundaryParams, p: &ModelParams) -> Result<Derivatives> {
    require_open(s)?;
    s.check_fields()?;
    if s.n() < 1 {
        return Err(Error::InvalidParams("open chain needs at least two sites".into()));
    }
    let (a, b, c, d) = (bp.a, bp.b, bp.c, bp.d);
    let (q0, r0, q1, r1) = (s.q[0], s.r[0], s.q[1], s.r[1]);
    let den = bp.denominator(q0, r0)?;
    let x0 = ONE - q0 * r0;
    let x1 = ONE - q1 * r1;
    let e = b + p.alpha * d * q1 - p.beta * c * r1;

    let mut dq: Vec<C64> = Vec::with_capacity(s.len());
    let mut dr: Vec<C64> = Vec::with_capacity(s.len());
    let n = s.len() as i64;
    for j in 0..n {
        let (q, r) = (s.q_at(j), s.r_at(j));
        dq.push(bulk_q(p, q, r, s.q_at(j + 1), s.q_at(j - 1)));
        dr.push(bulk_r(p, q, r, s.r_at(j + 1), s.r_at(j - 1)));
    }
    // site 0: no left neighbour, plus the boundary source
    dq[0] = I * 2.0
        * (p.alpha * q1 + p.gamma * q0 - p.alpha * q0 * r0 * q1
            + x0 / den * ((c - a * q0 - d * q0 * q0) * e / den - p.gamma * c));
    dr[0] = -I * 2.0
        * (p.beta * r1 + p.gamma * r0 - p.beta * q0 * r0 * r1
            - x0 / den * ((d + a * r0 - c * r0 * r0) * e / den - p.gamma * d));
    // site 1 feels the boundary through 𝔹(q0, r0, q1, r1)
    dq[1] -= I * 2.0 * p.beta * c * x0 * x1 / den;
    dr[1] -= I * 2.0 * p.alpha * d * x0 * x1 / den;
    Ok(Derivatives { q: dq, r: dr })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c, re, ZERO};
    use crate::poisson::{hamiltonian_flow_rhs, Observable, DEFAULT_STEP};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rc(rng: &mut impl Rng, s: f64) -> C64 {
        c(rng.gen_range(-s..s), rng.gen_range(-s..s))
    }

    fn random_state(rng: &mut impl Rng, n: usize, topo: Topology, amp: f64) -> LatticeState {
        let q = (0..=n).map(|_| rc(rng, amp)).collect();
        let r = (0..=n).map(|_| rc(rng, amp)).collect();
        LatticeState::new(q, r, topo).unwrap()
    }

    #[test]
    fn vacuum_is_stationary() {
        let p = ModelParams::dnls(-1);
        let d = rhs_periodic(&LatticeState::zeros(4, Topology::Periodic), &p).unwrap();
        assert!(d.q.iter().chain(&d.r).all(|x| *x == ZERO));
        let bp = BoundaryParams::new(re(1.3), ZERO, c(0.4, 0.1), c(-0.3, 0.2));
        let d = rhs_open_intrinsic(&LatticeState::zeros(4, Topology::Open), &bp, &p).unwrap();
        // b = 0: the γ-source on site 0 and the coupling on site 1 survive
        let den = bp.a;
        assert!((d.q[0] - I * 2.0 * (-p.gamma * bp.c / den)).norm() < 1e-15);
        assert!((d.r[0] + I * 2.0 * (p.gamma * bp.d / den)).norm() < 1e-15);
        assert!((d.q[1] + I * 2.0 * p.beta * bp.c / den).norm() < 1e-15);
        assert!((d.r[1] + I * 2.0 * p.alpha * bp.d / den).norm() < 1e-15);
        assert!(d.q[2..].iter().chain(&d.r[2..]).all(|x| x.norm() < 1e-15));
    }

    #[test]
    fn boundary_source_on_vacuum_by_substitution() {
        let p = ModelParams::new(c(0.4, 0.1), c(0.3, -0.2), c(-0.7, 0.3)).unwrap();
        let bp = BoundaryParams::new(c(1.1, 0.2), c(0.5, -0.3), c(0.2, 0.6), c(-0.4, 0.1));
        let d = rhs_open_intrinsic(&LatticeState::zeros(2, Topology::Open), &bp, &p).unwrap();
        let (a, b, cc, dd) = (bp.a, bp.b, bp.c, bp.d);
        assert!((d.q[0] - I * 2.0 * (cc * b / (a * a) - p.gamma * cc / a)).norm() < 1e-14);
        assert!((d.r[0] - I * 2.0 * (dd * b / (a * a) - p.gamma * dd / a)).norm() < 1e-14);
        assert!((d.q[1] + I * 2.0 * p.beta * cc / a).norm() < 1e-14);
        assert!((d.r[1] + I * 2.0 * p.alpha * dd / a).norm() < 1e-14);
    }

    #[test]
    fn robin_sub_case() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let p = ModelParams::new(rc(&mut rng, 1.0), rc(&mut rng, 1.0), rc(&mut rng, 1.0)).unwrap();
        let bp = BoundaryParams::new(c(0.9, 0.2), c(-0.4, 0.3), ZERO, ZERO);
        let s = random_state(&mut rng, 4, Topology::Open, 0.4);
        let d = rhs_open_intrinsic(&s, &bp, &p).unwrap();
        let (q0, r0, q1, r1) = (s.q[0], s.r[0], s.q[1], s.r[1]);
        let ba = bp.b / bp.a;
        let x0 = ONE - q0 * r0;
        let want_q0 = I * 2.0 * (p.alpha * q1 + p.gamma * q0 - p.alpha * q0 * r0 * q1 - ba * x0 * q0);
        let want_r0 = -I * 2.0 * (p.beta * r1 + p.gamma * r0 - p.beta * q0 * r0 * r1 - ba * x0 * r0);
        assert!((d.q[0] - want_q0).norm() < 1e-14);
        assert!((d.r[0] - want_r0).norm() < 1e-14);
        let n = 4;
        let want_qn = I * 2.0 * (p.gamma * s.q[n] + p.beta * s.q[n - 1] - p.beta * s.q[n] * s.r[n] * s.q[n - 1]);
        assert!((d.q[n] - want_qn).norm() < 1e-14);
    }

    #[test]
    fn periodic_matches_poisson_flow() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for n in [1usize, 2, 3] {
            let p = ModelParams::new(rc(&mut rng, 1.0), rc(&mut rng, 1.0), rc(&mut rng, 1.0)).unwrap();
            let s = random_state(&mut rng, n, Topology::Periodic, 0.4);
            let (fq, fr) = hamiltonian_flow_rhs(&Observable::hamiltonian_periodic(p), &s, DEFAULT_STEP).unwrap();
            let d = rhs_periodic(&s, &p).unwrap();
            assert!(d.max_abs_diff(&Derivatives { q: fq, r: fr }) < 1e-6, "N={n}");
        }
    }

    #[test]
    fn open_matches_poisson_flow() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in [1usize, 2, 3, 4] {
            let p = ModelParams::new(rc(&mut rng, 1.0), rc(&mut rng, 1.0), rc(&mut rng, 1.0)).unwrap();
            let bp = BoundaryParams::new(c(1.2, 0.1), rc(&mut rng, 1.0), rc(&mut rng, 0.6), rc(&mut rng, 0.6));
            let s = random_state(&mut rng, n, Topology::Open, 0.4);
            let (fq, fr) = hamiltonian_flow_rhs(&Observable::hamiltonian_open(bp, p), &s, DEFAULT_STEP).unwrap();
            let d = rhs_open_intrinsic(&s, &bp, &p).unwrap();
            assert!(d.max_abs_diff(&Derivatives { q: fq, r: fr }) < 1e-6, "N={n}");
        }
    }

    #[test]
    fn dnls_linear_dispersion() {
        // q_j = ε e^{iθj}: the linearised flow multiplies q by i(2cos θ - 2)
        let p = ModelParams::dnls(-1);
        let n = 16usize;
        let theta = std::f64::consts::TAU * 3.0 / n as f64;
        let eps = 1e-7;
        let q: Vec<C64> = (0..n).map(|j| C64::from_polar(eps, theta * j as f64)).collect();
        let r = q.iter().map(|x| -x.conj()).collect();
        let s = LatticeState::new(q.clone(), r, Topology::Periodic).unwrap();
        let d = rhs_periodic(&s, &p).unwrap();
        let freq: Vec<C64> = d.q.iter().zip(&q).map(|(dq, q)| dq / q).collect();
        let want = I * (2.0 * theta.cos() - 2.0);
        assert!(freq.iter().all(|f| (f - want).norm() < 1e-12));
    }

    #[test]
    fn topology_and_size_errors() {
        let p = ModelParams::dnls(-1);
        let bp = BoundaryParams::new(ONE, ZERO, ZERO, ZERO);
        assert!(matches!(rhs_periodic(&LatticeState::zeros(2, Topology::Open), &p), Err(Error::Topology { .. })));
        assert!(matches!(rhs_open_intrinsic(&LatticeState::zeros(0, Topology::Open), &bp, &p), Err(Error::InvalidParams(_))));
        let sing = BoundaryParams::new(ZERO, ONE, ZERO, ZERO);
        assert!(matches!(rhs_open_intrinsic(&LatticeState::zeros(2, Topology::Open), &sing, &p), Err(Error::BoundarySingular(_))));
    }
}
