use thiserror::Error;

/// Failure modes surfaced by the library.
///
/// Contract violations that indicate a caller bug (mixing elements from
/// different algebras in arithmetic, out-of-range indices) panic instead;
/// everything that can legitimately fail at runtime lands here.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operands live in different algebras: {0} vs {1}")]
    AlgebraMismatch(String, String),

    #[error("block {block} entry ({row},{col}) is not finite")]
    NonFinite { block: usize, row: usize, col: usize },

    #[error("{which} is not invertible (verdict {verdict})")]
    NotInvertible { which: String, verdict: String },

    #[error("eigenvalue iteration failed to converge on block {block}")]
    ConvergenceFailure { block: usize },

    #[error("gave up generating {what} after {attempts} attempts")]
    GenerationFailure { what: String, attempts: usize },

    #[error("determinant interpolation degenerated on every probe ({attempts} resamples)")]
    DegenerateTrial { attempts: usize },

    #[error("no witness found for {mode} separation after {attempts} attempts")]
    WitnessNotFound { mode: String, attempts: usize },

    #[error("inputs are equal within tolerance (difference {diff:.3e} vs threshold {threshold:.3e})")]
    InputsEqual { diff: f64, threshold: f64 },

    #[error("element is not maximal finite rank (rank {rank}, {distinct} distinct nonzero eigenvalues)")]
    NotMaximalFiniteRank { rank: usize, distinct: usize },

    #[error("eigenvector basis too ill-conditioned on block {block} (condition {cond:.3e})")]
    IllConditioned { block: usize, cond: f64 },

    #[error("invalid preserver form: {0}")]
    InvalidForm(String),

    #[error("image of the identity is not invertible (relative smallest singular value {residual:.3e})")]
    NotUnital { residual: f64 },

    #[error("central idempotent images do not induce a block permutation: {0}")]
    PermutationAmbiguous(String),

    #[error("restriction to block {block} is neither multiplicative nor anti-multiplicative (residuals {mult:.3e} / {anti:.3e})")]
    NeitherMultiplicativeNorAnti { block: usize, mult: f64, anti: f64 },

    #[error("recovered similarity is inconsistent on block {block} (residual {residual:.3e})")]
    SimilarityInconsistent { block: usize, residual: f64 },

    #[error("second map disagrees with the first (residual {residual:.3e} vs tolerance {tol:.3e})")]
    SecondMapDisagrees { residual: f64, tol: f64 },

    #[error("reconstructed form disagrees with the map on verification probes (residual {residual:.3e})")]
    ReassemblyMismatch { residual: f64 },

    #[error("schema violation: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
