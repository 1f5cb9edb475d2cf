//! Finite-difference Poisson brackets on the Ablowitz–Ladik phase space,
//! `{q_j, r_k} = i δ_jk (1 - q_j r_j)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::algebra::{I, ONE};
use crate::boundary::{self, BoundaryParams};
use crate::error::{Error, Result};
use crate::lax::{self, LatticeState, ModelParams};

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-3;

type EvalFn = dyn Fn(&LatticeState) -> Result<C64> + Send + Sync;

/// A phase-space function, holomorphic in every `q_j`, `r_j`.
#[derive(Clone)]
pub struct Observable {
    pub label: String,
    eval: Arc<EvalFn>,
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Observable").field("label", &self.label).finish()
    }
}

impl Observable {
    pub fn new(label: impl Into<String>, eval: impl Fn(&LatticeState) -> Result<C64> + Send + Sync + 'static) -> Self {
        Observable { label: label.into(), eval: Arc::new(eval) }
    }

    pub fn eval(&self, s: &LatticeState) -> Result<C64> {
        let v = (self.eval)(s)?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite(format!("observable {}", self.label)));
        }
        Ok(v)
    }

    pub fn q(j: usize) -> Self {
        Observable::new(format!("q{j}"), move |s| Ok(s.q[j]))
    }

    pub fn r(j: usize) -> Self {
        Observable::new(format!("r{j}"), move |s| Ok(s.r[j]))
    }

    /// Pointwise product.
    pub fn product(&self, other: &Observable) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Observable::new(format!("{}*{}", self.label, other.label), move |s| Ok(f.eval(s)? * g.eval(s)?))
    }

    /// Entry `(row, col)` of `ℓ(j, z)`.
    pub fn ell_entry(j: usize, z: C64, row: usize, col: usize) -> Self {
        Observable::new(format!("ell{j}[{row}{col}]({z})"), move |s| Ok(lax::ell(s.q[j], s.r[j], z)?[(row, col)]))
    }

    /// Periodic transfer matrix `𝔱(z)`.
    pub fn transfer(z: C64) -> Self {
        Observable::new(format!("t({z})"), move |s| lax::transfer(s, z))
    }

    /// Open double-row transfer matrix `b(z)`.
    pub fn double_row(z: C64, bp: BoundaryParams, p: ModelParams) -> Self {
        Observable::new(format!("b({z})"), move |s| boundary::double_row_transfer(s, z, &bp, &p))
    }

    pub fn hamiltonian_periodic(p: ModelParams) -> Self {
        Observable::new("H", move |s| lax::hamiltonian_periodic(s, &p))
    }

    pub fn hamiltonian_open(bp: BoundaryParams, p: ModelParams) -> Self {
        Observable::new("H_open", move |s| boundary::hamiltonian_open(s, &bp, &p))
    }
}

/// Partial derivatives `(∂F/∂q_j, ∂F/∂r_j)` for every site.
///
/// Observables are holomorphic, so the central differences along `h` and
/// `ih` share the derivative and have opposite `h²` errors; their mean is
/// accurate to `O(h⁴)`.
pub fn gradient(f: &Observable, s: &LatticeState, h: f64) -> Result<(Vec<C64>, Vec<C64>)> {
    let n = s.len();
    let mut work = s.clone();
    let mut dq = Vec::with_capacity(n);
    let mut dr = Vec::with_capacity(n);
    for j in 0..n {
        dq.push(central(f, &mut work, h, |w| &mut w.q[j])?);
        dr.push(central(f, &mut work, h, |w| &mut w.r[j])?);
    }
    Ok((dq, dr))
}

fn central(f: &Observable, work: &mut LatticeState, h: f64, slot: impl Fn(&mut LatticeState) -> &mut C64) -> Result<C64> {
    let x0 = *slot(work);
    let mut diff = |step: C64| -> Result<C64> {
        *slot(work) = x0 + step;
        let up = f.eval(work);
        *slot(work) = x0 - step;
        let down = f.eval(work);
        *slot(work) = x0;
        Ok((up? - down?) / (step * 2.0))
    };
    let real = diff(C64::new(h, 0.0))?;
    let imag = diff(C64::new(0.0, h))?;
    Ok((real + imag) * 0.5)
}

/// `{F, G} = Σ_j i(1 - q_j r_j)(∂F/∂q_j ∂G/∂r_j - ∂F/∂r_j ∂G/∂q_j)`.
pub fn bracket(f: &Observable, g: &Observable, s: &LatticeState, h: f64) -> Result<C64> {
    s.check_fields()?;
    let (fq, fr) = gradient(f, s, h)?;
    let (gq, gr) = gradient(g, s, h)?;
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..s.len() {
        acc += I * (ONE - s.q[j] * s.r[j]) * (fq[j] * gr[j] - fr[j] * gq[j]);
    }
    Ok(acc)
}

/// Hamilton's equations `q̇_j = {H, q_j}`, `ṙ_j = {H, r_j}`.
pub fn hamiltonian_flow_rhs(h_obs: &Observable, s: &LatticeState, h: f64) -> Result<(Vec<C64>, Vec<C64>)> {
    s.check_fields()?;
    let (hq, hr) = gradient(h_obs, s, h)?;
    let mut qdot = Vec::with_capacity(s.len());
    let mut rdot = Vec::with_capacity(s.len());
    for j in 0..s.len() {
        let x = ONE - s.q[j] * s.r[j];
        qdot.push(-I * x * hr[j]);
        rdot.push(I * x * hq[j]);
    }
    Ok((qdot, rdot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c, in_space_a, in_space_b};
    use crate::lax::Topology;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rc(rng: &mut impl Rng, s: f64) -> C64 {
        c(rng.gen_range(-s..s), rng.gen_range(-s..s))
    }

    fn random_state(rng: &mut impl Rng, n: usize, topo: Topology) -> LatticeState {
        let q = (0..=n).map(|_| rc(rng, 0.4)).collect();
        let r = (0..=n).map(|_| rc(rng, 0.4)).collect();
        LatticeState::new(q, r, topo).unwrap()
    }

    fn spectral(rng: &mut impl Rng) -> C64 {
        C64::from_polar(rng.gen_range(0.7..1.4), rng.gen_range(0.0..std::f64::consts::TAU))
    }

    #[test]
    fn coordinate_brackets() {
        let s = LatticeState::new(vec![c(0.3, 0.0), c(0.2, 0.1)], vec![c(0.1, 0.0), c(-0.1, 0.3)], Topology::Open).unwrap();
        let v = bracket(&Observable::q(0), &Observable::r(0), &s, DEFAULT_STEP).unwrap();
        assert!((v - c(0.0, 0.97)).norm() < 1e-9);
        let v = bracket(&Observable::q(0), &Observable::q(1), &s, DEFAULT_STEP).unwrap();
        assert!(v.norm() < 1e-12);
        let v = bracket(&Observable::q(0), &Observable::r(1), &s, DEFAULT_STEP).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn antisymmetry_and_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let s = random_state(&mut rng, 2, Topology::Periodic);
        let f = Observable::transfer(c(1.1, 0.4));
        let g = Observable::q(1).product(&Observable::r(2));
        let fg = bracket(&f, &g, &s, DEFAULT_STEP).unwrap();
        let gf = bracket(&g, &f, &s, DEFAULT_STEP).unwrap();
        assert!((fg + gf).norm() < 1e-8);

        let (a, b, h) = (Observable::q(0), Observable::r(0), Observable::r(1).product(&Observable::q(2)));
        let lhs = bracket(&a.product(&b), &h, &s, DEFAULT_STEP).unwrap();
        let rhs = a.eval(&s).unwrap() * bracket(&b, &h, &s, DEFAULT_STEP).unwrap()
            + b.eval(&s).unwrap() * bracket(&a, &h, &s, DEFAULT_STEP).unwrap();
        assert!((lhs - rhs).norm() < 1e-6);
    }

    #[test]
    fn jacobi_on_coordinate_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let s = random_state(&mut rng, 1, Topology::Open);
        let coords = [Observable::q(0), Observable::r(0), Observable::q(1), Observable::r(1)];
        let nested = |x: &Observable, y: &Observable, z: &Observable| {
            let (y, z) = (y.clone(), z.clone());
            let inner = Observable::new("inner", move |st| bracket(&y, &z, st, 1e-4));
            bracket(x, &inner, &s, 1e-4).unwrap()
        };
        for (i, x) in coords.iter().enumerate() {
            for (j, y) in coords.iter().enumerate().skip(i) {
                for z in coords.iter().skip(j) {
                    let total = nested(x, y, z) + nested(y, z, x) + nested(z, x, y);
                    assert!(total.norm() < 1e-6, "{} {} {}: {}", x.label, y.label, z.label, total);
                }
            }
        }
    }

    #[test]
    fn rll_algebra_single_site() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..5 {
            let s = random_state(&mut rng, 0, Topology::Open);
            let (w, z) = (spectral(&mut rng), spectral(&mut rng));
            let lw = lax::ell(s.q[0], s.r[0], w).unwrap();
            let lz = lax::ell(s.q[0], s.r[0], z).unwrap();
            let rhs = lax::r_matrix(w / z).unwrap().commutator(&(in_space_a(&lw) * in_space_b(&lz)));
            for (i, j, k, l) in indices4(2) {
                let f = Observable::ell_entry(0, w, i, k);
                let g = Observable::ell_entry(0, z, j, l);
                let got = bracket(&f, &g, &s, DEFAULT_STEP).unwrap();
                let want = rhs[(2 * i + j, 2 * k + l)];
                assert!((got - want).norm() < 1e-6, "entry {i}{j}{k}{l}: {got} vs {want}");
            }
        }
    }

    fn indices4(d: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
        (0..d * d * d * d).map(move |m| (m / (d * d * d), (m / (d * d)) % d, (m / d) % d, m % d))
    }

    #[test]
    fn transfer_matrices_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for n in 1..=3 {
            let s = random_state(&mut rng, n, Topology::Periodic);
            let (w, z) = (spectral(&mut rng), spectral(&mut rng));
            let v = bracket(&Observable::transfer(w), &Observable::transfer(z), &s, DEFAULT_STEP).unwrap();
            assert!(v.norm() < 1e-6, "N={n}: {v}");
        }
    }

    #[test]
    fn double_row_transfer_matrices_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for n in 1..=3 {
            let p = ModelParams::new(rc(&mut rng, 1.0), rc(&mut rng, 1.0), rc(&mut rng, 1.0)).unwrap();
            let bp = BoundaryParams::new(c(1.0, 0.3), rc(&mut rng, 1.0), rc(&mut rng, 1.0), rc(&mut rng, 1.0));
            let s = random_state(&mut rng, n, Topology::Open);
            let (w, z) = (spectral(&mut rng), spectral(&mut rng));
            let v = bracket(&Observable::double_row(w, bp, p), &Observable::double_row(z, bp, p), &s, DEFAULT_STEP).unwrap();
            assert!(v.norm() < 1e-6, "N={n}: {v}");
        }
    }

    #[test]
    fn vacuum_is_stationary() {
        let s = LatticeState::zeros(3, Topology::Periodic);
        let (qd, rd) = hamiltonian_flow_rhs(&Observable::hamiltonian_periodic(ModelParams::dnls(-1)), &s, DEFAULT_STEP).unwrap();
        assert!(qd.iter().chain(&rd).all(|x| x.norm() < 1e-12));
    }

    #[test]
    fn errors_propagate() {
        let s = LatticeState { q: vec![ONE], r: vec![ONE], topology: Topology::Open };
        assert!(matches!(bracket(&Observable::q(0), &Observable::r(0), &s, DEFAULT_STEP), Err(Error::SingularField { .. })));
        let s = LatticeState::zeros(1, Topology::Open);
        let nan = Observable::new("nan", |_| Ok(C64::new(f64::NAN, 0.0)));
        assert!(matches!(bracket(&nan, &Observable::r(0), &s, DEFAULT_STEP), Err(Error::NonFinite(_))));
    }
}
