//! Structural invariants at random spectral points, parameters and states.

use al_lattice::algebra::c;
use al_lattice::boundary::{k_minus, k_plus, tau, BoundaryParams};
use al_lattice::checks::{
    boundary_zero_curvature_residuals, double_row_tau_residual, omega_tau_residual, open_zero_curvature_residual,
    periodic_zero_curvature_residual, r_skew_residual, reflection_relative_residual, yang_baxter_residual,
};
use al_lattice::dynamics::{from_extrinsic, to_extrinsic};
use al_lattice::lax::{monodromy, LatticeState, ModelParams, Topology};
use al_lattice::C64;
use proptest::prelude::*;

fn cplx(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| c(a, b))
}

/// Spectral parameters kept away from the origin and the unit circle poles.
fn spectral() -> impl Strategy<Value = C64> {
    (0.3f64..2.5, 0.0f64..std::f64::consts::TAU).prop_map(|(m, th)| C64::from_polar(m, th))
}

fn field(n: usize, amp: f64) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((0.0..amp, 0.0..std::f64::consts::TAU).prop_map(|(m, th)| C64::from_polar(m, th)), n)
}

fn focusing_state(topology: Topology) -> impl Strategy<Value = LatticeState> {
    (2usize..7).prop_flat_map(move |n| field(n, 0.4)).prop_map(move |q| {
        let r = q.iter().map(|x| -x.conj()).collect();
        LatticeState::new(q, r, topology).unwrap()
    })
}

fn generic_state(topology: Topology) -> impl Strategy<Value = LatticeState> {
    (2usize..6)
        .prop_flat_map(|n| (field(n, 0.4), field(n, 0.4)))
        .prop_map(move |(q, r)| LatticeState::new(q, r, topology).unwrap())
}

fn boundary() -> impl Strategy<Value = BoundaryParams> {
    (0.8f64..1.5, cplx(1.0), cplx(0.5), cplx(0.5)).prop_map(|(a, b, cc, d)| BoundaryParams::new(c(a, 0.0), b, cc, d))
}

fn generic_model() -> impl Strategy<Value = ModelParams> {
    (cplx(1.0), cplx(1.0), cplx(1.0)).prop_filter_map("degenerate", |(a, b, g)| {
        (a.norm() > 0.2 && b.norm() > 0.2).then(|| ModelParams::new(a, b, g).ok()).flatten()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn yang_baxter_holds(w in spectral(), z in spectral(), nu in spectral()) {
        prop_assume!((w / z - 1.0).norm() > 1e-2 && (w / nu - 1.0).norm() > 1e-2 && (z / nu - 1.0).norm() > 1e-2);
        prop_assert!(yang_baxter_residual(w, z, nu).unwrap() < 1e-12);
    }

    #[test]
    fn r_matrix_is_skew(w in spectral()) {
        prop_assume!((w - 1.0).norm() > 1e-2);
        prop_assert!(r_skew_residual(w).unwrap() < 1e-12);
    }

    #[test]
    fn k_minus_solves_reflection(w in spectral(), z in spectral(), bp in boundary(), p in generic_model()) {
        let res = reflection_relative_residual(|x| k_minus(x, &bp, &p), w, z, &p);
        if let Ok(r) = res { prop_assert!(r < 1e-12, "{r}"); }
    }

    #[test]
    fn k_plus_solves_reflection_at_tau(w in spectral(), z in spectral(), p in generic_model()) {
        let res = reflection_relative_residual(|x| k_plus(tau(x, &p)?, &p), w, z, &p);
        if let Ok(r) = res { prop_assert!(r < 1e-12, "{r}"); }
    }

    #[test]
    fn dispersion_is_tau_invariant(z in spectral(), p in generic_model()) {
        prop_assert!(omega_tau_residual(z, &p).unwrap() < 1e-12);
    }

    #[test]
    fn tau_is_an_involution(z in spectral(), p in generic_model()) {
        let back = tau(tau(z, &p).unwrap(), &p).unwrap();
        prop_assert!((back - z).norm() < 1e-12 * z.norm().max(1.0));
    }

    #[test]
    fn monodromy_has_unit_determinant(s in generic_state(Topology::Periodic), z in spectral()) {
        let t = monodromy(&s, z).unwrap();
        prop_assert!((t.det() - 1.0).norm() < 1e-10 * t.norm().powi(2).max(1.0));
    }

    #[test]
    fn periodic_zero_curvature(s in generic_state(Topology::Periodic), z in spectral(), p in generic_model()) {
        prop_assert!(periodic_zero_curvature_residual(&s, z, &p).unwrap() < 1e-10);
    }

    #[test]
    fn open_zero_curvature(s in focusing_state(Topology::Open), z in spectral(), bp in boundary()) {
        let p = ModelParams::dnls(-1);
        if let Ok(r) = open_zero_curvature_residual(&s, z, &bp, &p) { prop_assert!(r < 1e-10, "{r}"); }
        if let Ok((l, r)) = boundary_zero_curvature_residuals(&s, z, &bp, &p) {
            prop_assert!(l < 1e-10 && r < 1e-10, "{l} {r}");
        }
    }

    #[test]
    fn double_row_transfer_is_tau_invariant(s in focusing_state(Topology::Open), z in spectral(), bp in boundary()) {
        let p = ModelParams::dnls(-1);
        prop_assert!(double_row_tau_residual(&s, z, &bp, &p).unwrap() < 1e-10);
    }

    #[test]
    fn extrinsic_round_trip(s in focusing_state(Topology::Open), bp in boundary()) {
        let e = to_extrinsic(&s, &bp).unwrap();
        let back = from_extrinsic(&e).unwrap();
        let gap = back.q.iter().zip(&s.q).chain(back.r.iter().zip(&s.r)).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
        prop_assert!(gap < 1e-12, "{gap}");
    }
}
