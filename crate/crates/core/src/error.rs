use thiserror::Error;

/// Errors raised by the geometry, tracing and classification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter point ({t}, {z}) lies outside the chart domain")]
    OutOfDomain { t: f64, z: f64 },

    #[error("singular jet at ({t}, {z}): X_t and X_z are (nearly) parallel")]
    SingularJet { t: f64, z: f64 },

    #[error("degenerate surface parameter: {0}")]
    DegenerateParameter(String),

    #[error("umbilic point: principal directions are undefined")]
    UmbilicPoint,

    #[error("direction is not tangent to the surface (normal component {0:e})")]
    NonTangentDirection(f64),

    #[error("curve is not parametrized by arc length (speed deviation {deviation:e} at sample {index})")]
    NonUnitSpeed { index: usize, deviation: f64 },

    #[error("umbilic point on the path at sample {index}")]
    UmbilicOnPath { index: usize },

    #[error("curvature vanishes at sample {index}; torsion is undefined")]
    VanishingCurvature { index: usize },

    #[error("isogonal trace started at an umbilic point")]
    UmbilicEncountered,

    #[error("singular principal decomposition (|det| = {0:e})")]
    SingularDecomposition(f64),

    #[error("pseudo-geodesic equations require an orthogonal chart (|F| = {0:e})")]
    NonOrthogonalChart(f64),

    #[error("pseudo-geodesic angle |theta| must be < pi/2, got {0}")]
    ThetaOutOfRange(f64),

    #[error("trace left the domain at s = {0} before reaching the requested parameter")]
    BoundaryExit(f64),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("every probed point is umbilic")]
    AllUmbilic,

    #[error("preimage mismatch at sample {index}: {distance:e}")]
    PreimageMismatch { index: usize, distance: f64 },

    #[error("surfaces are tangent at sample {index} (normal angle {angle:e} rad)")]
    Tangency { index: usize, angle: f64 },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("unknown surface `{0}`")]
    UnknownSurface(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
