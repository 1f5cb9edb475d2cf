//! Bäcklund matrix between a reflected soliton and its mirror image.

use al_lattice::algebra::{c, re};
use al_lattice::boundary::{BoundaryParams, Branch};
use al_lattice::lax::ModelParams;
use al_lattice::mirror::{DiscreteData, SolitonSolution};

fn main() -> al_lattice::error::Result<()> {
    let p = ModelParams::dnls(-1);
    let bp = BoundaryParams::dnls_focusing(1.0, -1.7, re(1.1));
    let dd = DiscreteData::with_root_index(vec![c(0.6, 1.9)], vec![re(0.1)], bp, 0, &p)?;
    let sol = SolitonSolution::new(&dd, &p)?;
    let z = c(0.8, 0.5);
    for t in [-3.0, 0.7, 4.0] {
        let ch = sol.backlund_chain(25, t, Branch::Minus)?;
        println!(
            "t = {t:>4}: constraints {:.1e}, space equation {:.1e}, det spread {:.1e}, tails {:.1e} (fields {:.1e}), time equation {:.1e}",
            ch.max_constraint,
            ch.max_space_residual(z)?,
            ch.det_spread(z)?,
            ch.tail_mismatch(),
            ch.tail_fields(),
            sol.backlund_time_residual(t, c(0.9, 0.3), Branch::Minus, 1e-4)?,
        );
    }
    let ch = sol.backlund_chain(25, 0.7, Branch::Minus)?;
    for j in [-2, -1, 0, 1, 2] {
        let m = ch.matrix(j, z)?;
        println!("B({j:>2}) = [[{:.4}, {:.4}], [{:.4}, {:.4}]]", m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    }
    Ok(())
}
