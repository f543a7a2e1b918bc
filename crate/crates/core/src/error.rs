use num_complex::Complex64;
use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is singular (|det| = {det_abs:e})")]
    SingularMatrix { det_abs: f64 },

    #[error("generator set is empty")]
    EmptyGenerators,

    #[error("group is not unitary: {0}")]
    NotUnitary(String),

    #[error("hermitian form is degenerate (|det H| = {0:e})")]
    DegenerateForm(f64),

    #[error("constructed form is not preserved by generator {index} (relative residual {residual:e})")]
    FormNotPreserved { index: usize, residual: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("point {z} is within {distance:e} of singular point {pole}")]
    PoleProximity { z: Complex64, pole: Complex64, distance: f64 },

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("integration step {0:e} is not usable")]
    StepUnderflow(f64),

    #[error("local exponent check failed for {loop_name}: residual {residual:e}")]
    ExponentValidation { loop_name: &'static str, residual: f64 },

    #[error("arithmetic-geometric mean failed to converge")]
    AgmNonConvergence,

    #[error("point {0} is too close to a lattice point")]
    LatticeProximity(Complex64),

    #[error("lattice point l0 must be nonzero")]
    ZeroLatticePoint,

    #[error("trace derivatives are parallel (Im(conj(nu) mu) = {0:e})")]
    ParallelDerivatives(f64),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SingularMatrix { .. } => "singular_matrix",
            Error::EmptyGenerators => "empty_generators",
            Error::NotUnitary(_) => "not_unitary",
            Error::DegenerateForm(_) => "degenerate_form",
            Error::FormNotPreserved { .. } => "form_not_preserved",
            Error::InvalidParams(_) => "invalid_params",
            Error::PoleProximity { .. } => "pole_proximity",
            Error::InvalidContour(_) => "invalid_contour",
            Error::StepUnderflow(_) => "step_underflow",
            Error::ExponentValidation { .. } => "exponent_validation",
            Error::AgmNonConvergence => "agm_non_convergence",
            Error::LatticeProximity(_) => "lattice_proximity",
            Error::ZeroLatticePoint => "zero_lattice_point",
            Error::ParallelDerivatives(_) => "parallel_derivatives",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
