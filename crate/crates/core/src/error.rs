use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("grid does not resolve the packet: discrete norm {discrete_norm:.6} deviates from 1 by more than 1%")]
    UnderResolved { discrete_norm: f64 },

    #[error("aliasing: spectral mass {mass:.3e} on the Nyquist planes exceeds {limit:.1e}")]
    Aliasing { mass: f64, limit: f64 },

    #[error("packet touches the boundary: mass {mass:.3e} in the outer layer exceeds {limit:.1e}")]
    BoundaryMass { mass: f64, limit: f64 },

    #[error("leap-frog instability at step {step} (t = {time:.4}): norm {norm:.9e} drifted by {deviation:.3e}")]
    Instability {
        step: usize,
        time: f64,
        norm: f64,
        deviation: f64,
    },

    #[error("quadrature did not converge: estimate {estimate:.12e}, error estimate {error:.3e} > tolerance {tolerance:.1e}")]
    Quadrature {
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("series too short or undersampled: {0}")]
    Undersampled(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidInput(_) | Error::Unsupported(_) => 2,
            Error::UnderResolved { .. } | Error::BoundaryMass { .. } | Error::Aliasing { .. } => 2,
            _ => 3,
        }
    }
}
