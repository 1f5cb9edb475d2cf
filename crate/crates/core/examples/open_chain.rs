//! Open chain with a boundary: RK4 run, conserved quantities and the
//! measured order of the integrator.

use al_lattice::algebra::c;
use al_lattice::boundary::BoundaryParams;
use al_lattice::dynamics::{integrate, step_halving, IntegrateOptions, OpenFlow};
use al_lattice::lax::{LatticeState, ModelParams, Topology};
use al_lattice::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> al_lattice::error::Result<()> {
    let p = ModelParams::dnls(-1);
    let bp = BoundaryParams::dnls_focusing(1.0, -1.7, c(1.1, 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let q: Vec<C64> = (0..=20).map(|_| C64::from_polar(rng.gen_range(0.0..0.1), rng.gen_range(0.0..6.28))).collect();
    let r = q.iter().map(|x| -x.conj()).collect();
    let s = LatticeState::new(q, r, Topology::Open)?;
    let flow = OpenFlow { bp, p };
    let traj = integrate(&flow, OpenFlow::pack(&s), &IntegrateOptions::new(10.0, 1e-3).stride(2000))?;
    println!("{:>6} {:>30} {:>30}", "t", "H", "I0");
    for (t, m) in traj.times.iter().zip(&traj.monitors) {
        println!("{t:>6.2} {:>30} {:>30}", format!("{:.12}", m.hamiltonian), format!("{:.12}", m.i0));
    }
    let d = traj.relative_drift().unwrap();
    println!("relative drift: H {:.1e}, I0 {:.1e}, I1 {:.1e}", d[0], d[1], d[2]);
    let sh = step_halving(&flow, &OpenFlow::pack(&s), 10.0, 0.05)?;
    println!("step halving: order {:.3}, error estimate {:.1e}", sh.order, sh.error_estimate);
    Ok(())
}
