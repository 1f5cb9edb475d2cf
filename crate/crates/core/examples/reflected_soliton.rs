//! One-soliton reflected at a time-dependent boundary: branch
//! certification and a coarse picture of |Q_j(t)| on the full line.

use al_lattice::algebra::{c, re};
use al_lattice::boundary::BoundaryParams;
use al_lattice::lax::ModelParams;
use al_lattice::mirror::{f1_infinity_roots, standard_t_samples, verify_boundary, DiscreteData, SolitonSolution};

fn main() -> al_lattice::error::Result<()> {
    let p = ModelParams::dnls(-1);
    let bp = BoundaryParams::dnls_focusing(1.0, -1.7, re(1.1));
    for (k, root) in f1_infinity_roots(&bp, &p).iter().enumerate() {
        println!("root {k}: {:.5}", root.value);
    }
    let dd = DiscreteData::with_root_index(vec![c(0.6, 1.9)], vec![re(0.1)], bp, 0, &p)?;
    let chk = verify_boundary(&dd, &standard_t_samples(), &p)?;
    println!("closure residual: plus {:.1e}, minus {:.1e}, certified {:?}", chk.plus, chk.minus, chk.certified);

    let sol = SolitonSolution::new(&dd, &p)?;
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    println!("|Q_j(t)|, j = -30..=30 left to right, the boundary at j = -1/0");
    for k in 0..=20 {
        let t = -10.0 + k as f64;
        let line = sol.full_line(-30, 30, t)?;
        let row: String = line.q.iter().map(|q| shades[((q.norm() / 1.8 * 9.0) as usize).min(9)]).collect();
        println!("t = {t:>5.1} |{row}|");
    }
    Ok(())
}
