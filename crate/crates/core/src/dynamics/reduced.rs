//! Single-field DNLS and DMKdV equations, periodic or on the half line with
//! the reduced boundary closure.

use num_complex::Complex64 as C64;

use crate::algebra::{I, ONE};
use crate::boundary::BoundaryParams;
use crate::error::{Error, Result};
use crate::lax::{ModelParams, Reduction};

const CONSTRAINT_TOL: f64 = 1e-12;

fn reduction(p: &ModelParams) -> Result<Reduction> {
    p.validate()?;
    match p.reduction {
        Reduction::None => Err(Error::Constraint("a dnls or dmkdv reduction is required".into())),
        r => Ok(r),
    }
}

/// Ghost value `Q_{-1}` of the reduced closure.
pub fn reduced_ghost(q0: C64, q1: C64, bp: &BoundaryParams, p: &ModelParams) -> Result<C64> {
    match reduction(p)? {
        Reduction::Dnls { nu } => {
            bp.check_dnls(nu, CONSTRAINT_TOL)?;
            let r0 = q0.conj() * nu as f64;
            Ok(q1 + (bp.a * q1 + bp.b * q0 * 2.0) * bp.closure_ratio(q0, r0)?)
        }
        Reduction::Dmkdv { nu } => {
            bp.check_dmkdv(nu, CONSTRAINT_TOL)?;
            let r0 = q0 * nu as f64;
            Ok(-q1 - bp.a * q1 * bp.closure_ratio(q0, r0)?)
        }
        Reduction::None => unreachable!(),
    }
}

/// Reduced right-hand side. With `bp = None` the chain is periodic; otherwise
/// the ghost comes from [`reduced_ghost`] and `Q_{N+1} = 0`.
pub fn rhs_reduced(q: &[C64], bp: Option<&BoundaryParams>, p: &ModelParams) -> Result<Vec<C64>> {
    let red = reduction(p)?;
    let len = q.len() as i64;
    if len == 0 {
        return Err(Error::InvalidParams("empty field".into()));
    }
    let ghost = match bp {
        Some(bp) if len >= 2 => Some(reduced_ghost(q[0], q[1], bp, p)?),
        Some(_) => return Err(Error::InvalidParams("open chain needs at least two sites".into())),
        None => None,
    };
    let at = |j: i64| -> C64 {
        match ghost {
            None => q[j.rem_euclid(len) as usize],
            Some(g) if j == -1 => g,
            Some(_) if (0..len).contains(&j) => q[j as usize],
            Some(_) => C64::default(),
        }
    };
    let mut out = Vec::with_capacity(q.len());
    for j in 0..len {
        let (prev, here, next) = (at(j - 1), at(j), at(j + 1));
        out.push(match red {
            Reduction::Dnls { nu } => {
                let m = nu as f64 * here.norm_sqr();
                if !((ONE - m).norm() > crate::lax::FIELD_FLOOR) {
                    return Err(Error::SingularField { site: j as usize, modulus: (ONE - m).norm() });
                }
                I * (next - here * 2.0 + prev - m * (next + prev))
            }
            Reduction::Dmkdv { nu } => {
                if here.im.abs() > CONSTRAINT_TOL {
                    return Err(Error::Constraint(format!("dmkdv field must be real, Q_{j} = {here}")));
                }
                prev - next + here * here * nu as f64 * (next - prev)
            }
            Reduction::None => unreachable!(),
        });
    }
    Ok(out)
}
