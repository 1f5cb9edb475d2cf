//! Finite-difference Poisson brackets: canonical relations, the linear
//! algebra of the monodromy and involution of the transfer matrices.

use al_lattice::algebra::c;
use al_lattice::boundary::BoundaryParams;
use al_lattice::checks::{double_row_involution_residual, flow_consistency_residual, rll_residual, transfer_involution_residual};
use al_lattice::lax::{LatticeState, ModelParams, Topology};
use al_lattice::poisson::{bracket, Observable, DEFAULT_STEP};

fn main() -> al_lattice::error::Result<()> {
    let p = ModelParams::dnls(-1);
    let bp = BoundaryParams::new(c(1.0, 0.0), c(-1.7, 0.0), c(1.1, 0.0), c(1.1, 0.0));
    let q = vec![c(0.2, 0.1), c(-0.1, 0.3), c(0.15, -0.2)];
    let r = vec![c(0.1, -0.2), c(0.25, 0.05), c(-0.3, 0.1)];
    let per = LatticeState::new(q.clone(), r.clone(), Topology::Periodic)?;
    let open = LatticeState::new(q, r, Topology::Open)?;
    let h = DEFAULT_STEP;
    let qr = bracket(&Observable::q(0), &Observable::r(0), &per, h)?;
    println!("{{q0, r0}} = {qr:.12}  (i(1 - q0 r0) = {:.12})", c(0.0, 1.0) * (c(1.0, 0.0) - per.q[0] * per.r[0]));
    let (w, z) = (c(1.2, 0.3), c(0.7, -0.5));
    println!("monodromy algebra residual      {:.1e}", rll_residual(&per, w, z, h)?);
    println!("{{t(w), t(z)}}                    {:.1e}", transfer_involution_residual(&per, w, z, h)?);
    println!("{{b(w), b(z)}}                    {:.1e}", double_row_involution_residual(&open, w, z, &bp, &p, h)?);
    println!("periodic flow vs {{H, .}}         {:.1e}", flow_consistency_residual(&per, None, &p, h)?);
    println!("open flow vs {{H, .}}             {:.1e}", flow_consistency_residual(&open, Some(&bp), &p, h)?);
    Ok(())
}
