use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("catalog parameters must be exact rationals, got {0}")]
    InexactCatalogParameter(String),

    #[error("incomplete spectrum for '{label}': eigenvalues up to {requested} requested, complete only up to {available}")]
    IncompleteSpectrum {
        label: String,
        requested: String,
        available: String,
    },

    #[error("line {line}: {message}")]
    SpectrumFile { line: usize, message: String },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("boundary role violation: {0}")]
    BoundaryRole(String),

    #[error("total dimension m = {0} is below 3")]
    DimensionTooSmall(u32),

    #[error("incompatible numeric representations: {0}")]
    MixedRepresentation(String),

    #[error("parameter s must be positive, got {0}")]
    NonPositiveParameter(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("degenerate pair at (i*, j*) = ({i_star}, {j_star}): zero is an eigenvalue for every s")]
    DegeneratePair { i_star: usize, j_star: usize },

    #[error("s = {0} is a degeneracy instant; the Morse index is undefined there (use index_jump)")]
    AtDegeneracyInstant(String),

    #[error("s = {0} is not a degeneracy instant of the listed branches")]
    NotAnInstant(String),

    #[error("instant s = {0} is not isolated at the current numeric resolution")]
    NonIsolatedInstant(String),

    #[error("completeness bound {given} is below the required enumeration bound {required}")]
    InsufficientBound { required: String, given: String },

    #[error("square root of {0} is not an exact rational")]
    InexactSqrt(String),

    #[error("oracle: {0}")]
    Oracle(String),
}
