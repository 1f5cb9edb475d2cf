pub mod algebra;
pub mod boundary;
pub mod checks;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod lax;
pub mod mirror;
pub mod poisson;

pub use num_complex::Complex64 as C64;
