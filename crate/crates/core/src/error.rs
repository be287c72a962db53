use thiserror::Error;

use crate::evolve::ResolutionReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("wavefunctions live on different grids")]
    GridMismatch,

    #[error("expected {expected} samples, got {actual}")]
    SampleCount { expected: usize, actual: usize },

    #[error("empty band: lower edge {lower} exceeds upper edge {upper}")]
    InvalidBand { lower: f64, upper: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "inadmissible resolution: {points_per_wavelength:.3} points per wavelength \
         (wavelength {wavelength:.3e}, spacing {spacing:.3e}); at least {required} needed",
        points_per_wavelength = .0.points_per_wavelength,
        wavelength = .0.wavelength,
        spacing = .0.spacing,
        required = crate::evolve::PPW_MIN
    )]
    InadmissibleResolution(ResolutionReport),

    #[error("kernel propagator is singular at t = 0; use the identity")]
    SingularTime,

    #[error("drift b = {0} is not supported here (requires b > 0)")]
    UnsupportedDrift(f64),

    #[error(
        "initial datum violates the Dirichlet condition: |u(+0)| = {trace:.3e} > {tol:.1e} max|u|"
    )]
    BoundaryIncompatible { trace: f64, tol: f64 },

    #[error("state vector must be normalised: ||phi|| = {0}")]
    NotNormalized(f64),

    #[error("the zero function has no support")]
    ZeroFunction,

    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),

    #[error("divergence probe: {0}")]
    ProbeRefused(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors that reject the input (as opposed to I/O failures).
    pub fn is_refusal(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Json(_))
    }
}
