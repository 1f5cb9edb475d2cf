use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spectral parameter z = 0 is not admissible")]
    ZeroSpectral,

    #[error("r-matrix pole: argument {0} is at z = ±1")]
    Pole(String),

    #[error("singular field at site {site}: |1 - q r| = {modulus:.3e} below floor")]
    SingularField { site: usize, modulus: f64 },

    #[error("boundary singularity: |a + d q0 - c r0| = {0:.3e} below floor")]
    BoundarySingular(f64),

    #[error("gauge singularity: |(a + d q0)(a - c r0) + c d| = {0:.3e} below floor")]
    GaugeSingular(f64),

    #[error("matrix is singular: |det| = {0:.3e}")]
    SingularMatrix(f64),

    #[error("ill-conditioned matrix: condition number {0:.3e}")]
    IllConditioned(f64),

    #[error("laurent reconstruction residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    LaurentResidual { residual: f64, tol: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("reduction constraint violated: {0}")]
    Constraint(String),

    #[error("site index {index} outside 0..={max}")]
    IndexRange { index: i64, max: i64 },

    #[error("topology mismatch: expected {expected}, got {got}")]
    Topology { expected: &'static str, got: &'static str },

    #[error("branch {0:?} is singular here (c d → 0 or a + √S → 0)")]
    BranchSingular(crate::boundary::Branch),

    #[error("branch {branch:?} does not invert the change of variables: round-trip error {residual:.3e}")]
    BranchMismatch { branch: crate::boundary::Branch, residual: f64 },

    #[error("Backlund constraint {which} violated at site {site}: residual {residual:.3e}")]
    BacklundConstraint { which: &'static str, site: i64, residual: f64 },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("integration blew up at t = {t_fail} (last valid t = {t_last}): {cause}")]
    BlowUp { t_last: f64, t_fail: f64, cause: String },

    #[error("coincident discrete eigenvalues: {0}")]
    CoincidentZeros(String),

    #[error("phi vanishes at {0}")]
    PhiZero(String),

    #[error("degenerate f1inf root: (f1inf)^2 = c d")]
    DegenerateRoot,

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_)
            | Error::Constraint(_)
            | Error::Config(_)
            | Error::IndexRange { .. }
            | Error::Topology { .. } => 2,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
