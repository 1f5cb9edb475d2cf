//! Scattering coefficients of a reflectionless potential and the folded
//! discrete data used by the soliton formula.

use al_lattice::algebra::{c, re};
use al_lattice::boundary::BoundaryParams;
use al_lattice::lax::ModelParams;
use al_lattice::mirror::{f_infinity, octet_expand, octet_product_residual, s11, s11_prime, s22, DiscreteData};
use al_lattice::C64;

fn main() -> al_lattice::error::Result<()> {
    let p = ModelParams::dnls(-1);
    let bp = BoundaryParams::dnls_focusing(1.0, -1.7, re(1.1));
    let dd = DiscreteData::with_root_index(vec![c(0.6, 1.9), c(-1.2, 0.7)], vec![re(0.1), c(0.3, -0.2)], bp, 0, &p)?;
    println!("F_inf = {:.6}", f_infinity(&dd));
    for th in [0.3, 1.4, 2.9] {
        let u = C64::from_polar(1.0, th);
        println!("|z| = 1, arg {th}: s11 s22 - 1 = {:.1e}", (s11(u, &dd)? * s22(u, &dd)? - 1.0).norm());
    }
    for z in &dd.zetas {
        println!("zero {z:.3}: s11 = {:.1e}, s11' = {:.5}", s11(*z, &dd)?.norm(), s11_prime(*z, &dd)?);
    }
    let oct = octet_expand(&dd, &p)?;
    for k in 0..oct.len() {
        println!("z = {:.4}, zbar = {:.4}, C = {:.4}, Cbar = {:.4}", oct.z[k], oct.zbar[k], oct.c[k], oct.cbar[k]);
    }
    println!("octet product residual {:.1e}", octet_product_residual(&oct, &dd, &p)?);
    Ok(())
}
