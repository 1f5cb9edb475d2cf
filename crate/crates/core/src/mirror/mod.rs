//! Time-dependent boundary in the extrinsic picture and the nonlinear
//! mirror-image construction of reflected solitons.

mod backlund;
mod folding;
mod gauge;
mod soliton;
mod spectral;

pub use backlund::{BacklundChain, BacklundSeeds, CONSTRAINT_TOL};
pub use folding::{fold, j_matrix, j_power, FullLineFields};
pub use gauge::{
    extrinsic_a0, extrinsic_lax_a, extrinsic_zero_curvature_residual, gauge_g, k_minus_td, time_dependent_bc_residual,
    zcb1k_residual, GAUGE_FLOOR,
};
pub use soliton::{
    soliton_solution, standard_t_samples, verify_boundary, BoundaryCheck, SolitonSolution, BOUNDARY_TOL, CONDITION_CAP,
};
pub use spectral::{
    f1_constraint, f1_infinity_roots, f_infinity, octet_expand, octet_product_residual, phi, phi_ratio, s11, s11_prime,
    s22, DiscreteData, F1Root, OctetData, RootFactor,
};
