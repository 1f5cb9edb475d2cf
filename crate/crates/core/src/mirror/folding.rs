//! Fields on the full line and the folding map that produces the mirror
//! solution.

use num_complex::Complex64 as C64;

use crate::algebra::M2;
use crate::lax::ModelParams;

/// `Q_j, R_j` for `j ∈ lo..lo+len`; zero outside the window.
#[derive(Clone, Debug, PartialEq)]
pub struct FullLineFields {
    pub lo: i64,
    pub q: Vec<C64>,
    pub r: Vec<C64>,
}

impl FullLineFields {
    pub fn new(lo: i64, q: Vec<C64>, r: Vec<C64>) -> Self {
        assert_eq!(q.len(), r.len(), "q and r lengths differ");
        FullLineFields { lo, q, r }
    }

    /// Samples `f(j) = (Q_j, R_j)` on `lo..=hi`.
    pub fn from_fn(lo: i64, hi: i64, mut f: impl FnMut(i64) -> (C64, C64)) -> Self {
        let (q, r) = (lo..=hi).map(&mut f).unzip();
        FullLineFields { lo, q, r }
    }

    /// Last index inside the window.
    pub fn hi(&self) -> i64 {
        self.lo + self.q.len() as i64 - 1
    }

    fn slot(&self, j: i64) -> Option<usize> {
        (j >= self.lo && j <= self.hi()).then(|| (j - self.lo) as usize)
    }

    pub fn q_at(&self, j: i64) -> C64 {
        self.slot(j).map(|k| self.q[k]).unwrap_or_default()
    }

    pub fn r_at(&self, j: i64) -> C64 {
        self.slot(j).map(|k| self.r[k]).unwrap_or_default()
    }

    /// Largest `|Q_j|, |R_j|` over the window.
    pub fn sup(&self) -> f64 {
        self.q.iter().chain(&self.r).map(|x| x.norm()).fold(0.0, f64::max)
    }
}

/// `J = diag(√(β/α), √(α/β))`.
pub fn j_matrix(p: &ModelParams) -> M2 {
    M2::diag(p.sqrt_beta_over_alpha(), p.sqrt_alpha_over_beta())
}

/// `J^n` for any integer `n`.
pub fn j_power(p: &ModelParams, n: i64) -> M2 {
    let s = p.sqrt_beta_over_alpha();
    M2::diag(s.powi(n as i32), s.powi(-n as i32))
}

/// Mirror fields `Q̃_j = -(β/α)^{1/2+j} Q_{-j-1}`, `R̃_j = -(α/β)^{1/2+j} R_{-j-1}`.
/// Under `α = β` this is `Q̃_j = -Q_{-j-1}`. The window is reflected
/// accordingly.
pub fn fold(f: &FullLineFields, p: &ModelParams) -> FullLineFields {
    let s = p.sqrt_beta_over_alpha();
    FullLineFields::from_fn(-f.hi() - 1, -f.lo - 1, |j| {
        let k = (2 * j + 1) as i32;
        (-s.powi(k) * f.q_at(-j - 1), -s.powi(-k) * f.r_at(-j - 1))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c, ONE, ZERO};
    use crate::boundary::tau;
    use crate::lax::ell;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rc(rng: &mut impl Rng, s: f64) -> C64 {
        c(rng.gen_range(-s..s), rng.gen_range(-s..s))
    }

    #[test]
    fn delta_folds_to_shifted_delta() {
        let p = ModelParams::dnls(-1);
        let f = FullLineFields::new(0, vec![ONE], vec![-ONE]);
        let m = fold(&f, &p);
        assert_eq!((m.lo, m.hi()), (-1, -1));
        assert_eq!(m.q_at(-1), -ONE);
        assert_eq!(m.q_at(0), ZERO);
    }

    #[test]
    fn fold_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(80);
        for p in [ModelParams::dnls(-1), ModelParams::new(c(0.3, 0.2), c(0.7, -0.1), c(0.2, 0.0)).unwrap()] {
            let f = FullLineFields::from_fn(-4, 6, |_| (rc(&mut rng, 1.0), rc(&mut rng, 1.0)));
            let back = fold(&fold(&f, &p), &p);
            assert_eq!((back.lo, back.hi()), (f.lo, f.hi()));
            for j in -4..=6 {
                assert!((back.q_at(j) - f.q_at(j)).norm() < 1e-13);
                assert!((back.r_at(j) - f.r_at(j)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn folded_lax_matrix_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        let p = ModelParams::new(c(0.4, 0.1), c(0.6, -0.2), c(-0.3, 0.1)).unwrap();
        let f = FullLineFields::from_fn(-5, 5, |_| (rc(&mut rng, 0.4), rc(&mut rng, 0.4)));
        let m = fold(&f, &p);
        for _ in 0..20 {
            let z = C64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..6.28));
            for j in -3..=3i64 {
                let lhs = ell(m.q_at(j), m.r_at(j), z).unwrap();
                let inner = ell(f.q_at(-j - 1), f.r_at(-j - 1), tau(z, &p).unwrap()).unwrap().inv().unwrap();
                let rhs = j_power(&p, j + 1) * inner * j_power(&p, -j);
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }
}
