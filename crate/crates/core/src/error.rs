use thiserror::Error;

/// Crate-wide error type. Mathematical refutations (oracle mismatches, failed
/// certificates, validation failures) are separated from usage errors by the CLI.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("divisor does not divide exactly")]
    NonDivisible,
    #[error("laurent variable mismatch")]
    VariableMismatch,
    #[error("evaluation at zero is not defined for Laurent polynomials")]
    ZeroEvaluationPoint,
    #[error("interpolation produced non-integer coefficients")]
    NonIntegerCoefficients,
    #[error("interpolation samples inconsistent with the degree bound")]
    InconsistentSamples,
    #[error("odd v-exponent {0} has no q-form")]
    OddExponent(i64),

    #[error("unsupported Cartan type: {0}")]
    UnsupportedType(String),
    #[error("group order exceeds the size limit")]
    SizeLimitExceeded,
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("elements are not Bruhat-comparable")]
    NotComparable,
    #[error("named involution invalid for this Cartan type")]
    InvalidInvolution,

    #[error("middle parabolic mismatch in convolution")]
    MiddleMismatch,

    #[error("convolution value not divisible by the normalizer order")]
    NonIntegralConvolution,
    #[error("symmetric pairs require odd characteristic")]
    EvenCharacteristic,

    #[error("operation requires a type-A polynomial context")]
    UnsupportedContext,
    #[error("invalid parabolic chain: {0}")]
    InvalidChain(String),
    #[error("hom-space cutoff too small (needs at least {0})")]
    CutoffTooSmall(i64),

    #[error("orbit datum validation failed: {0}")]
    ValidationFailed(String),
    #[error("fitted action fails at the held-out prime")]
    HeldOutMismatch,
    #[error("hecke action has not been fitted for this datum")]
    ActionNotFitted,
    #[error("orbit datum is not Hecke-connected")]
    NotHeckeConnected,
    #[error("no self-dual basis exists for this datum")]
    NoSelfDualBasis,

    #[error("complexes are not homotopy equivalent")]
    NotEquivalent,
}
