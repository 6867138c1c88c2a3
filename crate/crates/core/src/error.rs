use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("unknown Cartan type label `{0}`")]
    UnknownCartanType(String),

    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("iteration cap {cap} exceeded before reaching a dominant representative")]
    CapExceeded { cap: usize },

    #[error("polynomial root finding failed: {0}")]
    RootFinding(String),

    #[error("ill-conditioned poles {first} and {second} (distance {distance:e})")]
    IllConditioned {
        first: Complex64,
        second: Complex64,
        distance: f64,
    },

    #[error("collision between {first} and {second} (distance {distance:e} below guard)")]
    Collision {
        first: String,
        second: String,
        distance: f64,
    },

    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e})")]
    Divergence {
        iterations: usize,
        residual: f64,
        last: Vec<Complex64>,
    },

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("pairing of the residue at infinity with simple root {index} equals -1")]
    ForbiddenPairing { index: usize },

    #[error("shifted residue at infinity lies on the wall of simple reflection {index}")]
    SingularOrbit { index: usize },

    #[error("unsupported Cartan type for this operation: {0}")]
    UnsupportedType(String),

    #[error("Miura expansion left a nonzero subleading coefficient (magnitude {magnitude:e})")]
    MiuraConsistency { magnitude: f64 },

    #[error("matrix oper is not traceless (trace magnitude {magnitude:e})")]
    NotTraceless { magnitude: f64 },

    #[error("matrix oper shape violated at entry ({row}, {col})")]
    OperShape { row: usize, col: usize },

    #[error("coordinate change has a critical point (derivative {derivative:e})")]
    CriticalPoint { derivative: f64 },

    #[error("infertile direction: master integrand has nonzero residues {residues:?}")]
    Infertile {
        residues: Vec<(Complex64, Complex64)>,
    },

    #[error("reproduced function is not a polynomial (polar magnitude {magnitude:e})")]
    NotPolynomial { magnitude: f64 },

    #[error("base point {0} is degenerate for the Riccati parameter")]
    DegenerateBasePoint(Complex64),

    #[error("weight drop of total height {total} exceeds cutoff {cutoff}")]
    CutoffExceeded { total: usize, cutoff: usize },

    #[error("zero vector has no eigenvalue")]
    ZeroVector,

    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}
