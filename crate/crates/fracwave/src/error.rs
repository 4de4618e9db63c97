use std::fmt;

/// Errors shared across the kernel, simulation and spectral layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain(String),
    /// Invalid discretization or grid configuration.
    Config(String),
    /// The requested evaluation point is a genuine singularity
    /// (eta = 0 together with lambda = 0).
    SingularCase(String),
    /// Lemma-style hypothesis violated (e.g. requires eta > 0, d >= 2).
    Hypothesis(String),
    /// Mismatched vector/grid sizes.
    Structural(String),
    /// Not enough input data.
    Input(String),
    /// A numerical procedure broke down or failed to converge.
    Numerical(String),
    /// Requested point is too close to the spectrum to factorize.
    NearSpectrum { lambda: f64, detail: String },
    /// Least-squares fit cannot be performed on the given window.
    Fit(String),
    /// Degenerate or inconsistent geometry.
    Geometry(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Config(m) => write!(f, "configuration error: {m}"),
            Error::SingularCase(m) => write!(f, "singular case: {m}"),
            Error::Hypothesis(m) => write!(f, "hypothesis violated: {m}"),
            Error::Structural(m) => write!(f, "structural error: {m}"),
            Error::Input(m) => write!(f, "input error: {m}"),
            Error::Numerical(m) => write!(f, "numerical error: {m}"),
            Error::NearSpectrum { lambda, detail } => {
                write!(f, "near-spectrum error at lambda = {lambda}: {detail}")
            }
            Error::Fit(m) => write!(f, "fit error: {m}"),
            Error::Geometry(m) => write!(f, "geometry error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
