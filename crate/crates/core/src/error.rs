use thiserror::Error;

/// Errors produced by state construction, measurement and reconstruction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// All requested amplitude magnitudes were zero.
    #[error("degenerate state")]
    DegenerateState,

    /// A matrix that must be unitary failed the unitarity check.
    #[error("not unitary")]
    NotUnitary,

    /// A Stokes vector was too short to define a normalized correlation.
    #[error("Stokes vector degenerate")]
    DegenerateStokes,

    /// Interference readings carry no usable fringe contrast.
    #[error("no interference contrast")]
    NoInterferenceContrast,

    /// A reconstruction was asked to normalize by a vanishing intensity.
    #[error("zero total intensity")]
    ZeroIntensity,

    /// A parameter violated its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A serialized record could not be parsed.
    #[error("malformed record: {0}")]
    MalformedRecord(String),
}
