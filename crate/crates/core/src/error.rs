use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("associativity fails on basis triple ({i}, {j}, {k}): residual {residual:.3e}")]
    AssociativityViolation { i: usize, j: usize, k: usize, residual: f64 },

    #[error("unit law fails at basis index {index}: residual {residual:.3e}")]
    UnitViolation { index: usize, residual: f64 },

    #[error("subspace is not closed under multiplication: residual {residual:.3e}")]
    ClosureViolation { residual: f64 },

    #[error("element is not idempotent: residual {residual:.3e}")]
    NotIdempotent { residual: f64 },

    #[error("group table is not associative at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("group table has no identity element")]
    NoIdentity,

    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("action is not a homomorphism at ({g}, {h}): residual {residual:.3e}")]
    NotHomomorphism { g: usize, h: usize, residual: f64 },

    #[error("element {g} does not act by an automorphism on ({i}, {j}): residual {residual:.3e}")]
    NotAutomorphism { g: usize, i: usize, j: usize, residual: f64 },

    #[error("not a representation at basis pair ({i}, {j}): residual {residual:.3e}")]
    NotARepresentation { i: usize, j: usize, residual: f64 },

    #[error("modules are defined over different algebras")]
    AlgebraMismatch,

    #[error("module is not defined over the expected algebra")]
    ModuleAlgebraMismatch,

    #[error("algebra is not semisimple")]
    NotSemisimple,

    #[error("module is not simple")]
    NotSimple,

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("commutant sample degenerate after {attempts} attempts starting at seed {seed}")]
    DegenerateSample { seed: u64, attempts: u32 },

    #[error("intertwiners are not projective at ({h}, {k}): residual {residual:.3e}")]
    NotProjective { h: usize, k: usize, residual: f64 },

    #[error("cocycle mismatch at ({h}, {k}): residual {residual:.3e}")]
    CocycleMismatch { h: usize, k: usize, residual: f64 },

    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),
}

impl Error {
    /// Errors that indicate a numerical breakdown rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericalInconsistency(_) | Error::DegenerateSample { .. }
        )
    }
}
