//! Small dense complex matrices and Laurent-coefficient extraction.
//!
//! Everything in the model lives in `C^2` or `C^2 ⊗ C^2`, so the fixed-size
//! [`M2`] and [`M4`] types carry the bulk of the work. [`DMat`] covers the
//! few places that need other sizes: the triple tensor product used for the
//! Yang–Baxter check and the `2k × 2k` soliton systems.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Determinant modulus below which a matrix is treated as singular.
pub const DET_FLOOR: f64 = 1e-14;

/// Default sampling radius for Laurent extraction. Off the unit circle,
/// where the r-matrix has its poles.
pub const LAURENT_RADIUS: f64 = 1.3;

/// Default reconstruction tolerance (relative to the sampled magnitude).
pub const LAURENT_TOL: f64 = 1e-9;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct M2(pub [[C64; 2]; 2]);

impl M2 {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        M2([[a, b], [c, d]])
    }

    pub const fn zero() -> Self {
        M2([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        M2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn diag(a: C64, d: C64) -> Self {
        M2([[a, ZERO], [ZERO, d]])
    }

    pub const fn sigma3() -> Self {
        M2::diag(ONE, C64 { re: -1.0, im: 0.0 })
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, s: C64) -> M2 {
        let m = &self.0;
        M2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn adjugate(&self) -> M2 {
        let m = &self.0;
        M2([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]])
    }

    pub fn inv(&self) -> Result<M2> {
        let det = self.det();
        if !(det.norm() > DET_FLOOR) {
            return Err(Error::SingularMatrix(det.norm()));
        }
        Ok(self.adjugate().scale(det.inv()))
    }

    pub fn conj(&self) -> M2 {
        let m = &self.0;
        M2([[m[0][0].conj(), m[0][1].conj()], [m[1][0].conj(), m[1][1].conj()]])
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.re.is_finite() && x.im.is_finite())
    }

    pub fn commutator(&self, other: &M2) -> M2 {
        *self * *other - *other * *self
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, n: i32) -> Result<M2> {
        let base = if n < 0 { self.inv()? } else { *self };
        let mut out = M2::identity();
        for _ in 0..n.unsigned_abs() {
            out = out * base;
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for M2 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for M2 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Add for M2 {
    type Output = M2;
    fn add(self, o: M2) -> M2 {
        let (a, b) = (&self.0, &o.0);
        M2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl AddAssign for M2 {
    fn add_assign(&mut self, o: M2) {
        *self = *self + o;
    }
}

impl Sub for M2 {
    type Output = M2;
    fn sub(self, o: M2) -> M2 {
        let (a, b) = (&self.0, &o.0);
        M2([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

impl Neg for M2 {
    type Output = M2;
    fn neg(self) -> M2 {
        self.scale(-ONE)
    }
}

impl Mul for M2 {
    type Output = M2;
    fn mul(self, o: M2) -> M2 {
        let (a, b) = (&self.0, &o.0);
        M2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Mul<C64> for M2 {
    type Output = M2;
    fn mul(self, s: C64) -> M2 {
        self.scale(s)
    }
}

impl fmt::Debug for M2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1])
    }
}

/// A 4×4 complex matrix acting on `C^2 ⊗ C^2`.
#[derive(Clone, Copy, PartialEq)]
pub struct M4(pub [[C64; 4]; 4]);

impl M4 {
    pub const fn zero() -> Self {
        M4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = M4::zero();
        for i in 0..4 {
            m.0[i][i] = ONE;
        }
        m
    }

    /// The flip operator `P (x ⊗ y) = y ⊗ x`.
    pub fn swap() -> Self {
        let mut m = M4::zero();
        for a in 0..2 {
            for b in 0..2 {
                m.0[2 * a + b][2 * b + a] = ONE;
            }
        }
        m
    }

    /// Exchanges the two tensor factors: `P M P`.
    pub fn swap_spaces(&self) -> M4 {
        let p = M4::swap();
        p * *self * p
    }

    pub fn scale(&self, s: C64) -> M4 {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|x| *x *= s);
        m
    }

    pub fn det(&self) -> C64 {
        DMat::from(*self).det()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn commutator(&self, other: &M4) -> M4 {
        *self * *other - *other * *self
    }
}

impl Index<(usize, usize)> for M4 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for M4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Add for M4 {
    type Output = M4;
    fn add(self, o: M4) -> M4 {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] += o.0[i][j];
            }
        }
        m
    }
}

impl Sub for M4 {
    type Output = M4;
    fn sub(self, o: M4) -> M4 {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] -= o.0[i][j];
            }
        }
        m
    }
}

impl Mul for M4 {
    type Output = M4;
    fn mul(self, o: M4) -> M4 {
        let mut m = M4::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    m.0[i][j] += a * o.0[k][j];
                }
            }
        }
        m
    }
}

impl fmt::Debug for M4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Tensor product: entry `(2m+p, 2n+q)` is `a[m][n] * b[p][q]`.
pub fn kron(a: &M2, b: &M2) -> M4 {
    let mut out = M4::zero();
    for m in 0..2 {
        for n in 0..2 {
            for p in 0..2 {
                for q in 0..2 {
                    out.0[2 * m + p][2 * n + q] = a.0[m][n] * b.0[p][q];
                }
            }
        }
    }
    out
}

/// `M ⊗ I` and `I ⊗ M`.
pub fn in_space_a(m: &M2) -> M4 {
    kron(m, &M2::identity())
}

pub fn in_space_b(m: &M2) -> M4 {
    kron(&M2::identity(), m)
}

/// Dense row-major complex matrix of arbitrary shape.
#[derive(Clone, PartialEq)]
pub struct DMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl DMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DMat { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = DMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn kron(&self, other: &DMat) -> DMat {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        DMat::from_fn(r, c, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn matmul(&self, other: &DMat) -> DMat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = DMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &DMat) -> DMat {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        DMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &DMat) -> DMat {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        DMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn commutator(&self, other: &DMat) -> DMat {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Determinant by partial-pivot elimination.
    pub fn det(&self) -> C64 {
        match self.lu() {
            Ok(lu) => lu.det(),
            Err(_) => ZERO,
        }
    }

    pub fn lu(&self) -> Result<Lu> {
        assert_eq!(self.rows, self.cols, "LU of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if !(pmax > 0.0) {
                return Err(Error::SingularMatrix(0.0));
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                for j in k + 1..n {
                    let v = a[(k, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
        Ok(Lu { lu: a, perm, sign })
    }

    pub fn inverse(&self) -> Result<DMat> {
        let lu = self.lu()?;
        let n = self.rows;
        let mut inv = DMat::zeros(n, n);
        for j in 0..n {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            let col = lu.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }

    /// One-norm condition number `‖A‖₁ ‖A⁻¹‖₁`.
    pub fn condition(&self) -> Result<f64> {
        Ok(self.norm_1() * self.inverse()?.norm_1())
    }

    /// Ruiz scaling: `diag(row) · A · diag(col)` with every row and column of
    /// the result having max-modulus close to 1.
    pub fn equilibrate(&self, sweeps: usize) -> Result<Equilibrated> {
        if self.data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("matrix entry before equilibration".into()));
        }
        let mut row = vec![1.0; self.rows];
        let mut col = vec![1.0; self.cols];
        let mut m = self.clone();
        for _ in 0..sweeps {
            for i in 0..m.rows {
                let peak = (0..m.cols).map(|j| m[(i, j)].norm()).fold(0.0, f64::max);
                if peak > 0.0 {
                    let s = peak.sqrt().recip();
                    row[i] *= s;
                    (0..m.cols).for_each(|j| m[(i, j)] *= s);
                }
            }
            for j in 0..m.cols {
                let peak = (0..m.rows).map(|i| m[(i, j)].norm()).fold(0.0, f64::max);
                if peak > 0.0 {
                    let s = peak.sqrt().recip();
                    col[j] *= s;
                    (0..m.rows).for_each(|i| m[(i, j)] *= s);
                }
            }
        }
        Ok(Equilibrated { scaled: m, row, col })
    }
}

/// Result of [`DMat::equilibrate`].
pub struct Equilibrated {
    pub scaled: DMat,
    pub row: Vec<f64>,
    pub col: Vec<f64>,
}

impl Equilibrated {
    /// Solves the original system `A x = b` through the scaled one.
    pub fn solve(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        let lu = self.scaled.lu()?;
        let b: Vec<C64> = rhs.iter().zip(&self.row).map(|(v, s)| v * s).collect();
        Ok(lu.solve(&b).iter().zip(&self.col).map(|(v, s)| v * s).collect())
    }
}

impl From<M4> for DMat {
    fn from(m: M4) -> DMat {
        DMat::from_fn(4, 4, |i, j| m.0[i][j])
    }
}

impl From<M2> for DMat {
    fn from(m: M2) -> DMat {
        DMat::from_fn(2, 2, |i, j| m.0[i][j])
    }
}

impl Index<(usize, usize)> for DMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DMat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

/// Packed LU factors with row permutation.
pub struct Lu {
    lu: DMat,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn det(&self) -> C64 {
        (0..self.lu.rows).fold(re(self.sign), |acc, i| acc * self.lu[(i, i)])
    }

    pub fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let n = self.lu.rows;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let v = x[k];
                x[i] -= self.lu[(i, k)] * v;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let v = x[k];
                x[i] -= self.lu[(i, k)] * v;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

/// Finite Laurent polynomial recovered by sampling on a circle.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    pub coefficients: BTreeMap<i32, C64>,
    pub radius: f64,
}

impl LaurentSeries {
    pub fn coeff(&self, n: i32) -> C64 {
        self.coefficients.get(&n).copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coefficients.iter().map(|(&n, &c)| c * z.powi(n)).sum()
    }

    /// Drops coefficients whose modulus is below `tol`.
    pub fn pruned(&self, tol: f64) -> LaurentSeries {
        LaurentSeries {
            coefficients: self
                .coefficients
                .iter()
                .filter(|(_, c)| c.norm() > tol)
                .map(|(&n, &c)| (n, c))
                .collect(),
            radius: self.radius,
        }
    }
}

/// Recovers the Laurent coefficients of `f` on the exponent window
/// `lo..=hi` by discrete Fourier inversion on the circle `|z| = radius`.
///
/// The fit is checked on the sample points and on the interleaved
/// half-step points; any mass outside the window shows up there.
pub fn laurent_extract<F>(f: F, window: (i32, i32), radius: f64) -> Result<LaurentSeries>
where
    F: Fn(C64) -> Result<C64>,
{
    laurent_extract_tol(f, window, radius, LAURENT_TOL)
}

pub fn laurent_extract_tol<F>(f: F, (lo, hi): (i32, i32), radius: f64, tol: f64) -> Result<LaurentSeries>
where
    F: Fn(C64) -> Result<C64>,
{
    if hi < lo || !(radius > 0.0) {
        return Err(Error::InvalidParams(format!("window ({lo}, {hi}) radius {radius}")));
    }
    let width = (hi - lo + 1) as usize;
    let m = 2 * width + 4;
    let point = |theta: f64| C64::from_polar(radius, theta);
    let samples: Vec<(C64, C64)> = (0..m)
        .map(|k| {
            let z = point(2.0 * PI * k as f64 / m as f64);
            f(z).map(|v| (z, v))
        })
        .collect::<Result<_>>()?;

    let mut coefficients = BTreeMap::new();
    for n in lo..=hi {
        let sum: C64 = samples.iter().map(|&(z, v)| v * z.powi(-n)).sum();
        coefficients.insert(n, sum / m as f64);
    }
    let series = LaurentSeries { coefficients, radius };

    let mut scale = 1.0f64;
    let mut residual = 0.0f64;
    for &(z, v) in &samples {
        scale = scale.max(v.norm());
        residual = residual.max((series.eval(z) - v).norm());
    }
    for k in 0..m {
        let z = point(2.0 * PI * (k as f64 + 0.5) / m as f64);
        let v = f(z)?;
        scale = scale.max(v.norm());
        residual = residual.max((series.eval(z) - v).norm());
    }
    if !(residual <= tol * scale) {
        return Err(Error::LaurentResidual { residual: residual / scale, tol });
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_m2(rng: &mut impl Rng) -> M2 {
        let mut m = M2::zero();
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        m
    }

    #[test]
    fn kron_identity_and_sigma3() {
        assert_eq!(kron(&M2::identity(), &M2::identity()), M4::identity());
        let s = kron(&M2::sigma3(), &M2::sigma3());
        let expect = [1.0, -1.0, -1.0, 1.0];
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { re(expect[i]) } else { ZERO };
                assert_eq!(s[(i, j)], e);
            }
        }
    }

    #[test]
    fn kron_matches_index_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (a, b) = (rand_m2(&mut rng), rand_m2(&mut rng));
        let k = kron(&a, &b);
        let mut brute = [[ZERO; 4]; 4];
        for row in 0..4 {
            for col in 0..4 {
                brute[row][col] = a.0[row / 2][col / 2] * b.0[row % 2][col % 2];
            }
        }
        assert_eq!(k.0, brute);
    }

    #[test]
    fn kron_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let (a, b) = (rand_m2(&mut rng), rand_m2(&mut rng));
            let lhs = kron(&a, &b).det();
            let rhs = a.det().powi(2) * b.det().powi(2);
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1e-300), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn inverse_rejects_singular() {
        let m = M2::new(ONE, re(2.0), re(2.0), re(4.0));
        assert!(matches!(m.inv(), Err(Error::SingularMatrix(_))));
        let m = M2::new(ONE, re(2.0), re(3.0), re(4.0));
        assert!((m * m.inv().unwrap() - M2::identity()).norm() < 1e-15);
    }

    #[test]
    fn swap_is_flip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (a, b) = (rand_m2(&mut rng), rand_m2(&mut rng));
        let d = kron(&a, &b).swap_spaces() - kron(&b, &a);
        assert!(d.norm() < 1e-15);
    }

    #[test]
    fn dense_inverse_and_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = DMat::from_fn(6, 6, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let inv = a.inverse().unwrap();
        assert!(a.matmul(&inv).sub(&DMat::identity(6)).norm() < 1e-12);
        let (x, y) = (rand_m2(&mut rng), rand_m2(&mut rng));
        let big = DMat::from(x).kron(&DMat::from(y));
        assert!((big.det() - kron(&x, &y).det()).norm() < 1e-13);
    }

    #[test]
    fn laurent_monomials() {
        let s = laurent_extract(|z| Ok(z + z.inv()), (-2, 2), LAURENT_RADIUS).unwrap();
        let s = s.pruned(1e-12);
        assert_eq!(s.coefficients.len(), 2);
        assert!((s.coeff(1) - ONE).norm() < 1e-12);
        assert!((s.coeff(-1) - ONE).norm() < 1e-12);
    }

    #[test]
    fn laurent_window_too_small_is_reported() {
        let err = laurent_extract(|z| Ok(z.powi(5) + ONE), (-2, 2), LAURENT_RADIUS).unwrap_err();
        assert!(matches!(err, Error::LaurentResidual { .. }));
    }

    #[test]
    fn laurent_singular_on_circle_is_reported() {
        let err = laurent_extract(|z| Ok((z - re(LAURENT_RADIUS) * 1.0000001).inv()), (-4, 4), LAURENT_RADIUS);
        assert!(err.is_err());
    }

    #[test]
    fn equilibrated_solve_handles_wild_scales() {
        // rows and columns spanning forty orders of magnitude
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 6;
        let base = DMat::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let rs: Vec<f64> = (0..n).map(|i| 10f64.powi(8 * i as i32 - 20)).collect();
        let cs: Vec<f64> = (0..n).map(|j| 10f64.powi(20 - 7 * j as i32)).collect();
        let a = DMat::from_fn(n, n, |i, j| base[(i, j)] * rs[i] * cs[j]);
        let x: Vec<C64> = (0..n).map(|j| c(1.0 + j as f64, -0.5) / cs[j]).collect();
        let b: Vec<C64> = (0..n).map(|i| (0..n).map(|j| a[(i, j)] * x[j]).sum()).collect();
        let eq = a.equilibrate(8).unwrap();
        assert!(eq.scaled.condition().unwrap() < 1e6);
        let got = eq.solve(&b).unwrap();
        assert!(got.iter().zip(&x).all(|(g, w)| ((g - w) / w.norm()).norm() < 1e-10));
    }
}
