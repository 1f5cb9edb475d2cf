//! Asymptotics of the Bäcklund matrix (`f¹∞`, `φ`), scattering data of pure
//! solitons and their folded octets.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::ZERO;
use crate::boundary::BoundaryParams;
use crate::error::{Error, Result};
use crate::lax::ModelParams;

/// Two roots closer than this (relative) count as one repeated root.
const ROOT_MERGE: f64 = 1e-10;
const DEGENERATE_FLOOR: f64 = 1e-12;

/// Which quadratic factor of the `f¹∞` constraint a root comes from:
/// `f² - p f - cd = 0` with `p ∈ {a, -a, b/√(αβ), -b/√(αβ)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootFactor {
    APlus,
    AMinus,
    BPlus,
    BMinus,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct F1Root {
    pub value: C64,
    pub factor: RootFactor,
    pub is_real: bool,
    /// Number of returned roots (this one included) at the same value.
    pub multiplicity: usize,
}

/// Value of the quartic product at `f`.
pub fn f1_constraint(f: C64, bp: &BoundaryParams, p: &ModelParams) -> C64 {
    let cd = bp.cd();
    let bb = bp.b / p.sqrt_alpha_beta();
    (f * f + bp.a * f - cd) * (f * f - bp.a * f - cd) * (f * f - bb * f - cd) * (f * f + bb * f - cd)
}

/// All eight roots of the `f¹∞` constraint, factor by factor: for each
/// `f² - p f - cd` the roots `(p ± √(p² + 4cd))/2`, `+` first.
///
/// Index 0 is `(a + √(a² + 4cd))/2`, the root reached by `f¹_j` when the
/// fields vanish on the minus branch.
pub fn f1_infinity_roots(bp: &BoundaryParams, p: &ModelParams) -> Vec<F1Root> {
    let bb = bp.b / p.sqrt_alpha_beta();
    let factors = [(RootFactor::APlus, bp.a), (RootFactor::AMinus, -bp.a), (RootFactor::BPlus, bb), (RootFactor::BMinus, -bb)];
    let mut roots = Vec::with_capacity(8);
    for (factor, pp) in factors {
        let disc = (pp * pp + bp.cd() * 4.0).sqrt();
        for v in [(pp + disc) * 0.5, (pp - disc) * 0.5] {
            roots.push(F1Root { value: v, factor, is_real: v.im.abs() <= 1e-12 * (1.0 + v.norm()), multiplicity: 1 });
        }
    }
    let values: Vec<C64> = roots.iter().map(|r| r.value).collect();
    for r in roots.iter_mut() {
        r.multiplicity = values.iter().filter(|v| (**v - r.value).norm() <= ROOT_MERGE * (1.0 + r.value.norm())).count();
    }
    roots
}

/// `φ(z) = f z + a b f / (α (f² - cd) z) - cd β / (α f z³)`; with
/// `α = β = 1/2` this is `f z + 2abf/((f² - cd) z) - cd/(f z³)`.
pub fn phi(z: C64, f1inf: C64, bp: &BoundaryParams, p: &ModelParams) -> Result<C64> {
    if z == ZERO {
        return Err(Error::ZeroSpectral);
    }
    let cd = bp.cd();
    let gap = f1inf * f1inf - cd;
    if !(gap.norm() > DEGENERATE_FLOOR) {
        return Err(Error::DegenerateRoot);
    }
    let tail = if cd == ZERO {
        ZERO
    } else if !(f1inf.norm() > DEGENERATE_FLOOR) {
        return Err(Error::DegenerateRoot);
    } else {
        cd * p.beta / (p.alpha * f1inf * z * z * z)
    };
    Ok(f1inf * z + bp.a * bp.b * f1inf / (p.alpha * gap * z) - tail)
}

/// `f(z) = -φ(z)/φ(1/z)`, the factor the folding puts between the norming
/// constants of a folded pair.
pub fn phi_ratio(z: C64, f1inf: C64, bp: &BoundaryParams, p: &ModelParams) -> Result<C64> {
    let den = phi(z.inv(), f1inf, bp, p)?;
    if den == ZERO {
        return Err(Error::PhiZero(format!("1/z with z = {z}")));
    }
    Ok(-phi(z, f1inf, bp, p)? / den)
}

/// Soliton spectrum on the half lattice: zeros `ζ_n` (`|ζ_n| > 1`), norming
/// constants `D_n`, the chosen `f¹∞` and the boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteData {
    pub zetas: Vec<C64>,
    pub ds: Vec<C64>,
    pub f1inf: C64,
    pub bp: BoundaryParams,
}

impl DiscreteData {
    /// Picks `f¹∞` by position in [`f1_infinity_roots`].
    pub fn with_root_index(zetas: Vec<C64>, ds: Vec<C64>, bp: BoundaryParams, index: usize, p: &ModelParams) -> Result<Self> {
        let roots = f1_infinity_roots(&bp, p);
        let root = roots
            .get(index)
            .ok_or_else(|| Error::InvalidParams(format!("f1inf index {index} out of range 0..{}", roots.len())))?;
        let dd = DiscreteData { zetas, ds, f1inf: root.value, bp };
        dd.validate(p)?;
        Ok(dd)
    }

    pub fn k(&self) -> usize {
        self.zetas.len()
    }

    pub fn validate(&self, p: &ModelParams) -> Result<()> {
        if self.zetas.len() != self.ds.len() {
            return Err(Error::InvalidParams(format!("{} zeros but {} norming constants", self.zetas.len(), self.ds.len())));
        }
        for (n, (z, d)) in self.zetas.iter().zip(&self.ds).enumerate() {
            if !(z.norm() > 1.0) {
                return Err(Error::InvalidParams(format!("zeta[{n}] = {z} must lie outside the unit circle")));
            }
            if !(d.norm() > 0.0) || !d.is_finite() {
                return Err(Error::InvalidParams(format!("D[{n}] = {d} must be finite and nonzero")));
            }
        }
        // every ζ_n², conj(ζ_n)², their inverses: pairwise distinct
        let mut pts: Vec<(String, C64)> = Vec::new();
        for (n, z) in self.zetas.iter().enumerate() {
            let z2 = z * z;
            pts.push((format!("zeta[{n}]^2"), z2));
            pts.push((format!("conj(zeta[{n}])^2"), z2.conj()));
            pts.push((format!("zeta[{n}]^-2"), z2.inv()));
            pts.push((format!("conj(zeta[{n}])^-2"), z2.conj().inv()));
        }
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if (pts[i].1 - pts[j].1).norm() < 1e-10 {
                    return Err(Error::CoincidentZeros(format!("{} = {}", pts[i].0, pts[j].0)));
                }
            }
        }
        let scale = 1.0 + self.f1inf.norm().powi(8);
        let res = f1_constraint(self.f1inf, &self.bp, p).norm();
        if res > 1e-10 * scale {
            return Err(Error::InvalidParams(format!("f1inf = {} is not a root of the constraint (residual {res:.3e})", self.f1inf)));
        }
        if !((self.f1inf * self.f1inf - self.bp.cd()).norm() > DEGENERATE_FLOOR) {
            return Err(Error::DegenerateRoot);
        }
        Ok(())
    }
}

/// `F∞ = ∏ |ζ_n|⁴`.
pub fn f_infinity(dd: &DiscreteData) -> f64 {
    dd.zetas.iter().map(|z| z.norm().powi(4)).product()
}

/// Numerator zeros and denominator poles of `s₁₁` in the variable `z²`.
fn s11_nodes(dd: &DiscreteData) -> (Vec<C64>, Vec<C64>) {
    let zeros = dd.zetas.iter().flat_map(|z| [z * z, (z * z).conj()]).collect();
    let poles = dd.zetas.iter().flat_map(|z| [(z * z).conj().inv(), (z * z).inv()]).collect();
    (zeros, poles)
}

fn check_pole(w: C64, poles: &[C64]) -> Result<()> {
    for p in poles {
        if !((w - p).norm() > 1e-14 * (1.0 + p.norm())) {
            return Err(Error::Pole(format!("z^2 = {w} hits a pole of the scattering data")));
        }
    }
    Ok(())
}

/// `s₁₁(z) = F∞⁻¹ ∏ (z²-ζ²)(z²-ζ*²)/((z²-ζ*⁻²)(z²-ζ⁻²))`.
pub fn s11(z: C64, dd: &DiscreteData) -> Result<C64> {
    let (zeros, poles) = s11_nodes(dd);
    let w = z * z;
    check_pole(w, &poles)?;
    let num: C64 = zeros.iter().map(|x| w - x).product();
    let den: C64 = poles.iter().map(|x| w - x).product();
    Ok(num / den / f_infinity(dd))
}

/// `s₂₂(z) = F∞⁻¹ ∏ |ζ|⁸ (z²-ζ*⁻²)(z²-ζ⁻²)/((z²-ζ²)(z²-ζ*²))`.
pub fn s22(z: C64, dd: &DiscreteData) -> Result<C64> {
    let (zeros, poles) = s11_nodes(dd);
    let w = z * z;
    check_pole(w, &zeros)?;
    let num: C64 = poles.iter().map(|x| w - x).product();
    let den: C64 = zeros.iter().map(|x| w - x).product();
    let weight: f64 = dd.zetas.iter().map(|z| z.norm().powi(8)).product();
    Ok(num / den * weight / f_infinity(dd))
}

/// `ds₁₁/dz` by the product rule; exact at the zeros of `s₁₁`.
pub fn s11_prime(z: C64, dd: &DiscreteData) -> Result<C64> {
    let (zeros, poles) = s11_nodes(dd);
    let w = z * z;
    check_pole(w, &poles)?;
    let den: C64 = poles.iter().map(|x| w - x).product();
    // d/dz ∏(w - x_k) = 2z Σ_k ∏_{i≠k} (w - x_i)
    let d_num: C64 = (0..zeros.len())
        .map(|k| zeros.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| w - x).product::<C64>())
        .sum::<C64>()
        * z
        * 2.0;
    let num: C64 = zeros.iter().map(|x| w - x).product();
    let log_den: C64 = poles.iter().map(|x| z * 2.0 / (w - x)).sum();
    Ok((d_num - num * log_den) / den / f_infinity(dd))
}

/// Folded scattering data: `z = (ζ, ζ*)`, `z̄ = (1/ζ, 1/ζ*)` and the norming
/// constants `C`, `C̄`, each of length `2k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OctetData {
    pub z: Vec<C64>,
    pub zbar: Vec<C64>,
    pub c: Vec<C64>,
    pub cbar: Vec<C64>,
}

impl OctetData {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

/// Builds the `2k` folded pairs:
/// `C_n = D_n`, `C_{n+k} = -φ*(1/ζ_n)/(D_n* s₁₁'(ζ_n)*² φ*(ζ_n))`,
/// `C̄_n = -φ(1/ζ_n)/(D_n (ζ_n s₁₁'(ζ_n))² φ(ζ_n))`, `C̄_{n+k} = D_n*/ζ_n*²`.
pub fn octet_expand(dd: &DiscreteData, p: &ModelParams) -> Result<OctetData> {
    dd.validate(p)?;
    let k = dd.k();
    let mut out = OctetData {
        z: Vec::with_capacity(2 * k),
        zbar: Vec::with_capacity(2 * k),
        c: vec![ZERO; 2 * k],
        cbar: vec![ZERO; 2 * k],
    };
    out.z.extend(dd.zetas.iter().copied());
    out.z.extend(dd.zetas.iter().map(|z| z.conj()));
    out.zbar.extend(out.z.iter().map(|z| z.inv()));
    for (n, (&zeta, &d)) in dd.zetas.iter().zip(&dd.ds).enumerate() {
        let phi_in = phi(zeta, dd.f1inf, &dd.bp, p)?;
        let phi_out = phi(zeta.inv(), dd.f1inf, &dd.bp, p)?;
        if phi_in == ZERO || !phi_in.is_finite() {
            return Err(Error::PhiZero(format!("zeta[{n}] = {zeta}")));
        }
        if phi_out == ZERO || !phi_out.is_finite() {
            return Err(Error::PhiZero(format!("1/zeta[{n}] = {}", zeta.inv())));
        }
        let sp = s11_prime(zeta, dd)?;
        out.c[n] = d;
        out.c[n + k] = -phi_out.conj() / (d.conj() * sp.conj() * sp.conj() * phi_in.conj());
        out.cbar[n] = -phi_out / (d * (zeta * sp) * (zeta * sp) * phi_in);
        out.cbar[n + k] = d.conj() / (zeta.conj() * zeta.conj());
    }
    if out.c.iter().chain(&out.cbar).any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("octet norming constants".into()));
    }
    Ok(out)
}

/// Largest deviation of `C_n C̄_n` from `-φ(1/z_n)/((z_n s₁₁'(z_n))² φ(z_n))`.
pub fn octet_product_residual(oct: &OctetData, dd: &DiscreteData, p: &ModelParams) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 0..oct.len() {
        let z = oct.z[n];
        let sp = s11_prime(z, dd)?;
        let want = -phi(z.inv(), dd.f1inf, &dd.bp, p)? / ((z * sp) * (z * sp) * phi(z, dd.f1inf, &dd.bp, p)?);
        worst = worst.max((oct.c[n] * oct.cbar[n] - want).norm() / want.norm().max(1.0));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c, re, ONE};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reference() -> (DiscreteData, ModelParams) {
        let p = ModelParams::dnls(-1);
        let bp = BoundaryParams::dnls_focusing(1.0, -1.7, re(1.1));
        (DiscreteData::with_root_index(vec![c(0.6, 1.9)], vec![re(0.1)], bp, 0, &p).unwrap(), p)
    }

    #[test]
    fn robin_roots() {
        let p = ModelParams::dnls(-1);
        let bp = BoundaryParams::new(re(1.3), re(0.4), ZERO, ZERO);
        let roots = f1_infinity_roots(&bp, &p);
        let mut vals: Vec<f64> = roots.iter().map(|r| r.value.re).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = [-1.3, -0.8, 0.0, 0.0, 0.0, 0.0, 0.8, 1.3];
        assert!(vals.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-14));
        assert!(roots.iter().filter(|r| r.value == ZERO).all(|r| r.multiplicity == 4));
    }

    #[test]
    fn reference_roots_and_residuals() {
        let p = ModelParams::dnls(-1);
        let bp = BoundaryParams::dnls_focusing(1.0, -1.7, re(1.1));
        let roots = f1_infinity_roots(&bp, &p);
        assert!((roots[0].value - re((1.0 + 5.84f64.sqrt()) / 2.0)).norm() < 1e-15);
        assert!((roots[0].value.re - 1.70830).abs() < 1e-5);
        for r in &roots {
            assert!(r.is_real);
            assert!(f1_constraint(r.value, &bp, &p).norm() < 1e-10);
            // reduced form ((f²-|d|²)² - a²f²)((f²-|d|²)² - 4b²f²)
            let f = r.value;
            let g = f * f - 1.21;
            let reduced = (g * g - f * f) * (g * g - f * f * 4.0 * 2.89);
            assert!(reduced.norm() < 1e-10);
        }
    }

    #[test]
    fn phi_special_cases() {
        let p = ModelParams::new(c(0.3, 0.1), c(0.6, 0.0), re(0.2)).unwrap();
        let bp = BoundaryParams::new(c(0.9, 0.2), c(-0.4, 0.1), ZERO, ZERO);
        let z = c(0.7, 0.5);
        let got = phi(z, bp.a, &bp, &p).unwrap();
        assert!((got - (bp.a * z + bp.b / (p.alpha * z))).norm() < 1e-14);
        let bp2 = BoundaryParams::dnls_focusing(1.0, 0.3, re(0.5));
        assert_eq!(phi(z, re(0.5), &bp2, &p), Err(Error::DegenerateRoot));
    }

    #[test]
    fn asymptotic_matrix_has_the_boundary_determinant() {
        let (dd, p) = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        for _ in 0..20 {
            let z = C64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..6.28));
            let tz = crate::boundary::tau(z, &p).unwrap();
            let det_binf = phi(z, dd.f1inf, &dd.bp, &p).unwrap() * phi(tz, dd.f1inf, &dd.bp, &p).unwrap();
            let det_k = crate::boundary::k_minus(z, &dd.bp, &p).unwrap().det();
            assert!((det_binf - det_k).norm() < 1e-10 * det_k.norm().max(1.0));
        }
    }

    #[test]
    fn robin_folding_factor() {
        // c = d = 0, a = -1, b = 1/(2χ): f(z) = (zχf² - 1/z)/(z - χf²/z)
        let p = ModelParams::dnls(-1);
        let chi = 0.7;
        let bp = BoundaryParams::new(re(-1.0), re(0.5 / chi), ZERO, ZERO);
        for root in f1_infinity_roots(&bp, &p).iter().filter(|r| r.value != ZERO) {
            let f = root.value;
            for z in [c(0.3, 1.2), c(-0.8, 0.4), c(1.5, -0.2)] {
                let want = (z * chi * f * f - z.inv()) / (z - f * f * chi / z);
                assert!((phi_ratio(z, f, &bp, &p).unwrap() - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn scattering_symmetries() {
        let (dd, _) = reference();
        let two = DiscreteData { zetas: vec![c(0.6, 1.9), c(-1.2, 0.7)], ds: vec![re(0.1), c(0.3, -0.2)], ..dd.clone() };
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for d in [&dd, &two] {
            for _ in 0..100 {
                let th = rng.gen_range(0.0..6.28);
                let u = C64::from_polar(1.0, th);
                assert!((s11(u, d).unwrap() * s22(u, d).unwrap() - ONE).norm() < 1e-12);
                let z = C64::from_polar(rng.gen_range(0.3..3.0), th);
                assert!((s11(z.inv(), d).unwrap() - s22(z, d).unwrap()).norm() < 1e-12 * (1.0 + s22(z, d).unwrap().norm()));
                assert!((s11(-z, d).unwrap() - s11(z, d).unwrap()).norm() < 1e-12 * (1.0 + s11(z, d).unwrap().norm()));
            }
            let big = s11(re(1e7), d).unwrap();
            assert!((big - re(1.0 / f_infinity(d))).norm() < 1e-10);
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let (dd, _) = reference();
        for z in [c(0.6, 1.9), c(1.3, 0.2), c(-0.5, 2.5)] {
            let h = 1e-6;
            let fd = (s11(z + h, &dd).unwrap() - s11(z - h, &dd).unwrap()) / (2.0 * h);
            assert!((s11_prime(z, &dd).unwrap() - fd).norm() < 1e-7);
        }
    }

    #[test]
    fn octets_for_the_reference_data() {
        let (dd, p) = reference();
        let oct = octet_expand(&dd, &p).unwrap();
        let zeta = c(0.6, 1.9);
        assert_eq!(oct.z, vec![zeta, zeta.conj()]);
        assert!((oct.zbar[0] - zeta.inv()).norm() < 1e-15 && (oct.zbar[1] - zeta.conj().inv()).norm() < 1e-15);
        assert_eq!(oct.c[0], re(0.1));
        assert!((oct.cbar[1] - re(0.1) / (zeta.conj() * zeta.conj())).norm() < 1e-15);
        assert!(octet_product_residual(&oct, &dd, &p).unwrap() < 1e-10);
    }

    #[test]
    fn invalid_discrete_data() {
        let (dd, p) = reference();
        let inside = DiscreteData { zetas: vec![c(0.3, 0.2)], ..dd.clone() };
        assert!(matches!(inside.validate(&p), Err(Error::InvalidParams(_))));
        let twice = DiscreteData { zetas: vec![c(0.6, 1.9), c(0.6, 1.9)], ds: vec![re(0.1), re(0.2)], ..dd.clone() };
        assert!(matches!(twice.validate(&p), Err(Error::CoincidentZeros(_))));
        let wrong_root = DiscreteData { f1inf: re(1.5), ..dd.clone() };
        assert!(matches!(wrong_root.validate(&p), Err(Error::InvalidParams(_))));
        assert!(DiscreteData::with_root_index(vec![], vec![], dd.bp, 8, &p).is_err());
    }
}
