//! Classical r-matrix, reflection matrices and the dispersion relation at a
//! few spectral points.

use al_lattice::algebra::c;
use al_lattice::boundary::{k_minus, k_plus, tau, BoundaryParams};
use al_lattice::checks::{
    omega_tau_residual, r_skew_residual, r_space_symmetry_residual, reflection_relative_residual, yang_baxter_residual,
};
use al_lattice::lax::{omega, ModelParams};

fn main() -> al_lattice::error::Result<()> {
    let p = ModelParams::dnls(-1);
    let bp = BoundaryParams::new(c(1.0, 0.0), c(-1.7, 0.0), c(1.1, 0.0), c(1.1, 0.0));
    let points = [(c(1.2, 0.3), c(0.7, -0.4)), (c(0.5, 0.9), c(-1.1, 0.2)), (c(0.9, 0.0), c(0.0, 1.3))];
    println!("{:>22} {:>22} {:>10} {:>10} {:>10} {:>10}", "w", "z", "YB", "skew", "k-", "k+(tau)");
    for (w, z) in points {
        println!(
            "{:>22} {:>22} {:>10.1e} {:>10.1e} {:>10.1e} {:>10.1e}",
            format!("{w:.2}"),
            format!("{z:.2}"),
            yang_baxter_residual(w, z, c(0.8, 0.6))?,
            r_skew_residual(w / z)?.max(r_space_symmetry_residual(w / z)?),
            reflection_relative_residual(|x| k_minus(x, &bp, &p), w, z, &p)?,
            reflection_relative_residual(|x| k_plus(tau(x, &p)?, &p), w, z, &p)?,
        );
    }
    let z = c(1.3, 0.4);
    println!("omega(z) = {:.6}, omega(tau z) = {:.6}, rel. gap {:.1e}", omega(z, &p)?, omega(tau(z, &p)?, &p)?, omega_tau_residual(z, &p)?);
    Ok(())
}
