//! Periodic chain: monodromy, transfer-matrix charges and their
//! conservation under the DNLS flow.

use al_lattice::algebra::c;
use al_lattice::dynamics::{integrate, IntegrateOptions, PeriodicFlow};
use al_lattice::lax::{hamiltonian_periodic, monodromy, transfer_and_charges, LatticeState, ModelParams, Topology};

fn main() -> al_lattice::error::Result<()> {
    let p = ModelParams::dnls(-1);
    let q: Vec<_> = (0..8).map(|j| c(0.3 * (j as f64 * 0.7).cos(), 0.2 * (j as f64 * 1.3).sin())).collect();
    let r = q.iter().map(|x| -x.conj()).collect();
    let s = LatticeState::new(q, r, Topology::Periodic)?;
    let z = c(1.1, 0.2);
    println!("det T(z) = {:.12}", monodromy(&s, z)?.det());

    let flow = PeriodicFlow { p };
    let traj = integrate(&flow, PeriodicFlow::pack(&s), &IntegrateOptions::new(5.0, 1e-3).stride(1000))?;
    let end = PeriodicFlow::unpack(traj.final_state());
    let (a, b) = (transfer_and_charges(&s)?, transfer_and_charges(&end)?);
    println!("{:>6} {:>26} {:>10}", "charge", "t = 0", "|change|");
    println!("{:>6} {:>26} {:>10.1e}", "C", format!("{:.10}", a.c), (a.c - b.c).norm());
    for (k, v) in &a.i {
        println!("{:>6} {:>26} {:>10.1e}", format!("I{k}"), format!("{v:.10}"), (v - b.get(*k)).norm());
    }
    let (h0, h1) = (hamiltonian_periodic(&s, &p)?, hamiltonian_periodic(&end, &p)?);
    println!("H = {h0:.10}, change {:.1e}", (h0 - h1).norm());
    Ok(())
}
