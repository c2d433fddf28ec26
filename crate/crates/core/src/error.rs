use thiserror::Error;

/// Errors shared by the stencil, symmetry, lattice, scheme, solver, and
/// experiment layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Stencil abscissas on the upper layer are not strictly increasing,
    /// or the lower point does not sit strictly below the upper layer.
    #[error("stencil is degenerate: upper-layer abscissas must be strictly increasing")]
    NonMonotoneStencil,

    /// The time step separating the two layers is zero or negative.
    #[error("time step must be strictly positive, got {0}")]
    NonPositiveTimeStep(f64),

    /// A scheme that assumes equal upper-layer spacings was handed a layer
    /// whose spacings differ by more than the stated relative tolerance.
    #[error("upper layer is not uniform: relative spacing deviation {deviation:e}")]
    NotUniformLayer { deviation: f64 },

    /// A scheme that assumes a vertical mesh (no horizontal drift between
    /// layers) was handed a stencil with nonzero drift.
    #[error("horizontal drift sigma = {sigma:e} must vanish for this scheme")]
    NonZeroSigma { sigma: f64 },

    /// The advected-mesh constraint sigma = -tau * u is violated.
    #[error("advected-mesh constraint sigma = -tau*u violated by {defect:e}")]
    LatticeConstraintViolated { defect: f64 },

    /// A mesh spacing is zero or negative.
    #[error("mesh spacing must be strictly positive, got {0}")]
    NonPositiveSpacing(f64),

    /// A layer or sample set holds too few points for the requested
    /// operation.
    #[error("need at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },

    /// A time layer sits at, or a step would touch or cross, t = 0, where
    /// the self-similar mesh map and the reference solution blow up.
    #[error("time layer would touch or cross the singular time t = 0")]
    SingularTime,

    /// An advected mesh update folded two nodes past each other.
    #[error("mesh tangled: node ordering lost at index {0}")]
    MeshTangled(usize),

    /// A field layer and its mesh layer disagree in length.
    #[error("field layer has {field} values but mesh layer has {mesh} nodes")]
    LengthMismatch { field: usize, mesh: usize },

    /// Banded elimination met a pivot below tolerance.
    #[error("banded system is singular at pivot column {0}")]
    SingularSystem(usize),

    /// Newton iteration exhausted its budget without meeting tolerance.
    #[error("Newton stalled after {iters} iterations, residual norm {residual:e}")]
    NewtonDiverged { iters: usize, residual: f64 },

    /// A parameter sweep needs at least three values to read off a slope.
    #[error("sweep needs at least 3 parameter values, got {0}")]
    InsufficientSweepValues(usize),

    /// Writing an output artifact failed.
    #[error("could not write output: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
