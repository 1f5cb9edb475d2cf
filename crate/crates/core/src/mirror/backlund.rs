//! Bäcklund matrix linking a full-line solution to its folded mirror, built
//! site by site from its value at `j = 0`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::folding::FullLineFields;
use crate::algebra::{M2, ONE, ZERO};
use crate::boundary::{BoundaryParams, Branch, BOUNDARY_FLOOR};
use crate::error::{Error, Result};
use crate::lax::{ell, ModelParams, FIELD_FLOOR};

/// Tolerance on the two field constraints checked at every site.
pub const CONSTRAINT_TOL: f64 = 1e-8;

/// The eight site-dependent coefficients of the Bäcklund ansatz.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct BacklundSeeds {
    pub f1: C64,
    pub f2: C64,
    pub g1: C64,
    pub g2: C64,
    pub x1: C64,
    pub x2: C64,
    pub y1: C64,
    pub y2: C64,
}

impl BacklundSeeds {
    /// Coefficients that make `B(0, z)` equal the time-dependent `K⁻(z)` at
    /// edge fields `(Q0, R0)`:
    /// `y¹ = x² = 0`, `g¹ = b/α`, `f² = b/√(αβ)`, `g² = √(β/α) f¹`,
    /// `y² = -cd/(√(β/α) f¹)`, `x¹ = -(β/α) cd/f¹`, and
    /// `f¹ = (a ∓ √S)/2` with the sign opposite to the branch of `K⁻`.
    pub fn from_boundary(big_q: C64, big_r: C64, bp: &BoundaryParams, p: &ModelParams) -> Result<Self> {
        let root = bp.root(big_q, big_r);
        let x = ONE - big_q * big_r;
        let f1 = match bp.branch {
            Branch::Minus => (bp.a + root) * 0.5,
            // (a - √S)/2 = -2cd(1 - Q0R0)/(a + √S)
            Branch::Plus => {
                let den = bp.a + root;
                if !(den.norm() > BOUNDARY_FLOOR) {
                    return Err(Error::BranchSingular(Branch::Plus));
                }
                -bp.cd() * x * 2.0 / den
            }
        };
        if !(f1.norm() > BOUNDARY_FLOOR) {
            return Err(Error::BranchSingular(bp.branch));
        }
        let s = p.sqrt_beta_over_alpha();
        Ok(BacklundSeeds {
            f1,
            f2: bp.b / p.sqrt_alpha_beta(),
            g1: bp.b / p.alpha,
            g2: s * f1,
            x1: -s * s * bp.cd() / f1,
            x2: ZERO,
            y1: ZERO,
            y2: -bp.cd() / (s * f1),
        })
    }

    fn as_array(&self) -> [C64; 8] {
        [self.f1, self.f2, self.g1, self.g2, self.x1, self.x2, self.y1, self.y2]
    }

    /// Largest coefficient difference.
    pub fn max_abs_diff(&self, other: &BacklundSeeds) -> f64 {
        self.as_array().iter().zip(other.as_array()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Field accessor pair `(solution, mirror)`.
struct Pair<'a> {
    f: &'a FullLineFields,
    m: &'a FullLineFields,
}

impl Pair<'_> {
    fn q(&self, j: i64) -> C64 {
        self.f.q_at(j)
    }
    fn r(&self, j: i64) -> C64 {
        self.f.r_at(j)
    }
    fn qt(&self, j: i64) -> C64 {
        self.m.q_at(j)
    }
    fn rt(&self, j: i64) -> C64 {
        self.m.r_at(j)
    }

    fn ratio(&self, j: i64) -> Result<C64> {
        let num = ONE - self.r(j) * self.q(j);
        let den = ONE - self.rt(j) * self.qt(j);
        if !(num.norm() > FIELD_FLOOR) || !(den.norm() > FIELD_FLOOR) {
            return Err(Error::SingularField { site: j.unsigned_abs() as usize, modulus: num.norm().min(den.norm()) });
        }
        Ok((num / den).sqrt())
    }

    /// Coefficients at `j + 1` from those at `j`.
    fn forward(&self, j: i64, c: &BacklundSeeds) -> Result<BacklundSeeds> {
        let s = self.ratio(j)?;
        Ok(BacklundSeeds {
            f1: (c.f1 + c.y1 * (self.q(j) * self.r(j - 1) - self.qt(j + 1) * self.rt(j))) / s,
            f2: (c.f2 + c.y2 * (self.qt(j) * self.rt(j - 1) - self.q(j + 1) * self.r(j))) * s,
            g1: (c.g1 + c.x1 * (self.qt(j - 1) * self.rt(j) - self.q(j) * self.r(j + 1))) * s,
            g2: (c.g2 + c.x2 * (self.q(j - 1) * self.r(j) - self.qt(j) * self.rt(j + 1))) / s,
            x1: c.x1 * s,
            x2: c.x2 / s,
            y1: c.y1 / s,
            y2: c.y2 * s,
        })
    }

    /// Coefficients at `j` from those at `j + 1`.
    fn backward(&self, j: i64, n: &BacklundSeeds) -> Result<BacklundSeeds> {
        let s = self.ratio(j)?;
        let (x1, x2, y1, y2) = (n.x1 / s, n.x2 * s, n.y1 * s, n.y2 / s);
        Ok(BacklundSeeds {
            f1: n.f1 * s - y1 * (self.q(j) * self.r(j - 1) - self.qt(j + 1) * self.rt(j)),
            f2: n.f2 / s - y2 * (self.qt(j) * self.rt(j - 1) - self.q(j + 1) * self.r(j)),
            g1: n.g1 / s - x1 * (self.qt(j - 1) * self.rt(j) - self.q(j) * self.r(j + 1)),
            g2: n.g2 * s - x2 * (self.q(j - 1) * self.r(j) - self.qt(j) * self.rt(j + 1)),
            x1,
            x2,
            y1,
            y2,
        })
    }

    /// Residuals of the two constraints on the fields at site `j`.
    fn constraints(&self, j: i64, c: &BacklundSeeds) -> (f64, f64) {
        let (q, r, qt, rt) = (|k| self.q(k), |k| self.r(k), |k| self.qt(k), |k| self.rt(k));
        let xq = |k| ONE - q(k) * r(k);
        let xt = |k| ONE - qt(k) * rt(k);
        let upper = c.f1 * qt(j) - c.f2 * q(j) - c.y2 * q(j + 1) * xq(j) + c.y1 * qt(j + 1) * xt(j)
            - (c.g2 * q(j - 1) - c.g1 * qt(j - 1) - c.x1 * qt(j - 2) * xt(j - 1) + c.x2 * q(j - 2) * xq(j - 1));
        let lower = c.g2 * rt(j) - c.g1 * r(j) - c.x1 * r(j + 1) * xq(j) + c.x2 * rt(j + 1) * xt(j)
            - (c.f1 * r(j - 1) - c.f2 * rt(j - 1) - c.y2 * rt(j - 2) * xt(j - 1) + c.y1 * r(j - 2) * xq(j - 1));
        (upper.norm(), lower.norm())
    }

    fn matrix(&self, j: i64, c: &BacklundSeeds, z: C64) -> M2 {
        let (q, r, qt, rt) = (|k| self.q(k), |k| self.r(k), |k| self.qt(k), |k| self.rt(k));
        let z2 = z * z;
        let base = M2::new(z * c.f1 + c.g1 / z, c.f1 * qt(j) - c.f2 * q(j), -c.g1 * r(j) + c.g2 * rt(j), z * c.f2 + c.g2 / z);
        let mx1 = M2::new(z.inv(), -qt(j - 1), -r(j) - z2 * r(j + 1) * (ONE - q(j) * r(j)), z * r(j) * qt(j - 1));
        let mx2 = M2::new(z * rt(j) * q(j - 1), q(j - 1), rt(j) + z2 * rt(j + 1) * (ONE - qt(j) * rt(j)), z.inv());
        let my2 = M2::new(q(j) * rt(j - 1) / z, -q(j) - q(j + 1) * (ONE - r(j) * q(j)) / z2, -rt(j - 1), z);
        let my1 = M2::new(z, qt(j) + qt(j + 1) * (ONE - rt(j) * qt(j)) / z2, r(j - 1), qt(j) * r(j - 1) / z);
        base + mx1.scale(c.x1 / z2) + mx2.scale(c.x2 / z2) + my2.scale(z2 * c.y2) + my1.scale(z2 * c.y1)
    }
}

/// Bäcklund coefficients on a symmetric window `-J..=J`, propagated from
/// `j = 0` in both directions, with the field constraints checked at every
/// site.
#[derive(Clone, Debug)]
pub struct BacklundChain {
    fields: FullLineFields,
    mirror: FullLineFields,
    half_width: i64,
    coeffs: Vec<BacklundSeeds>,
    /// Largest constraint residual met over the window.
    pub max_constraint: f64,
}

impl BacklundChain {
    pub fn build(fields: FullLineFields, mirror: FullLineFields, seeds: BacklundSeeds, half_width: i64) -> Result<Self> {
        if half_width < 1 {
            return Err(Error::InvalidParams("Backlund window needs J ≥ 1".into()));
        }
        let pair = Pair { f: &fields, m: &mirror };
        let jj = half_width as usize;
        let mut coeffs = vec![BacklundSeeds::default(); 2 * jj + 1];
        coeffs[jj] = seeds;
        for j in 0..half_width {
            let next = pair.forward(j, &coeffs[jj + j as usize])?;
            coeffs[jj + j as usize + 1] = next;
        }
        for j in (-half_width..0).rev() {
            let prev = pair.backward(j, &coeffs[(jj as i64 + j + 1) as usize])?;
            coeffs[(jj as i64 + j) as usize] = prev;
        }
        let mut max_constraint = 0.0f64;
        for j in -half_width..=half_width {
            let c = &coeffs[(jj as i64 + j) as usize];
            if c.as_array().iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("Backlund coefficients at site {j}")));
            }
            let (upper, lower) = pair.constraints(j, c);
            for (which, residual) in [("q-field constraint", upper), ("r-field constraint", lower)] {
                if residual > CONSTRAINT_TOL {
                    return Err(Error::BacklundConstraint { which, site: j, residual });
                }
            }
            max_constraint = max_constraint.max(upper).max(lower);
        }
        Ok(BacklundChain { fields, mirror, half_width, coeffs, max_constraint })
    }

    pub fn window(&self) -> (i64, i64) {
        (-self.half_width, self.half_width)
    }

    fn slot(&self, j: i64) -> Result<usize> {
        if j.abs() > self.half_width {
            return Err(Error::IndexRange { index: j, max: self.half_width });
        }
        Ok((j + self.half_width) as usize)
    }

    pub fn coefficients(&self, j: i64) -> Result<&BacklundSeeds> {
        Ok(&self.coeffs[self.slot(j)?])
    }

    /// `B(j, z)`.
    pub fn matrix(&self, j: i64, z: C64) -> Result<M2> {
        if z == ZERO {
            return Err(Error::ZeroSpectral);
        }
        let c = self.coeffs[self.slot(j)?];
        Ok(Pair { f: &self.fields, m: &self.mirror }.matrix(j, &c, z))
    }

    /// `‖B(j+1) ℓ̃(j) - ℓ(j) B(j)‖`.
    pub fn space_residual(&self, j: i64, z: C64) -> Result<f64> {
        let lt = ell(self.mirror.q_at(j), self.mirror.r_at(j), z)?;
        let l = ell(self.fields.q_at(j), self.fields.r_at(j), z)?;
        Ok((self.matrix(j + 1, z)? * lt - l * self.matrix(j, z)?).norm())
    }

    /// Largest space residual over the whole window.
    pub fn max_space_residual(&self, z: C64) -> Result<f64> {
        (-self.half_width..self.half_width).try_fold(0.0f64, |acc, j| Ok(acc.max(self.space_residual(j, z)?)))
    }

    /// Spread of `det B(j, z)` over the window.
    pub fn det_spread(&self, z: C64) -> Result<f64> {
        let d0 = self.matrix(0, z)?.det();
        (-self.half_width..=self.half_width).try_fold(0.0f64, |acc, j| Ok(acc.max((self.matrix(j, z)?.det() - d0).norm())))
    }

    /// Difference between the coefficients at the two ends of the window.
    pub fn tail_mismatch(&self) -> f64 {
        self.coeffs[0].max_abs_diff(&self.coeffs[self.coeffs.len() - 1])
    }

    /// Largest field modulus at the two ends of the window.
    pub fn tail_fields(&self) -> f64 {
        let j = self.half_width;
        [self.fields.q_at(j), self.fields.q_at(-j), self.fields.r_at(j), self.fields.r_at(-j)]
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }
}
