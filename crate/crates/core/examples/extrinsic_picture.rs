//! Change of variables to the extrinsic picture, the closure at the ghost
//! site and agreement of the two pictures along the flow.

use al_lattice::algebra::c;
use al_lattice::boundary::{BoundaryParams, Branch};
use al_lattice::dynamics::{
    from_extrinsic, ghost_closure, integrate, to_extrinsic, validate_branch, ExtrinsicFlow, IntegrateOptions, OpenFlow,
};
use al_lattice::lax::{LatticeState, ModelParams, Topology};
use al_lattice::mirror::{extrinsic_zero_curvature_residual, zcb1k_residual};

fn main() -> al_lattice::error::Result<()> {
    let p = ModelParams::dnls(-1);
    let bp = BoundaryParams::dnls_focusing(1.0, -1.7, c(1.1, 0.0));
    let q: Vec<_> = (0..=10).map(|j| c(0.15 * (j as f64).cos(), 0.1 * (0.5 * j as f64).sin())).collect();
    let r = q.iter().map(|x| -x.conj()).collect();
    let s = LatticeState::new(q, r, Topology::Open)?;

    println!("round trip on the minus branch: {:.1e}", validate_branch(&s, &bp)?);
    match validate_branch(&s, &bp.with_branch(Branch::Plus)) {
        Ok(v) => println!("plus branch round trip: {v:.1e}"),
        Err(e) => println!("plus branch: {e}"),
    }
    let e = to_extrinsic(&s, &bp)?;
    println!("Q0 = {:.6} (q0 = {:.6}), ghost Q-1 = {:.6}", e.q[0], s.q[0], ghost_closure(&e, &p)?.0);
    let z = c(0.9, 0.4);
    println!("extrinsic zero curvature {:.1e}", extrinsic_zero_curvature_residual(&e, z, &p)?);
    println!("time-dependent boundary relation {:.1e}", zcb1k_residual(&e, z, &p, 1e-4)?);

    let opts = IntegrateOptions::new(5.0, 1e-3).stride(1000).without_monitors();
    let a = integrate(&OpenFlow { bp, p }, OpenFlow::pack(&s), &opts)?;
    let flow = ExtrinsicFlow { bp, p };
    let b = integrate(&flow, ExtrinsicFlow::pack(&e), &opts)?;
    for ((t, x), y) in a.times.iter().zip(&a.states).zip(&b.states) {
        let back = from_extrinsic(&flow.unpack(y))?;
        let direct = OpenFlow::unpack(x);
        let gap = back.q.iter().zip(&direct.q).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
        println!("t = {t:.1}: max |q_intrinsic - q_from_extrinsic| = {gap:.1e}");
    }
    Ok(())
}
