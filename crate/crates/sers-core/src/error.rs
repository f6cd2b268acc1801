use std::path::PathBuf;

use num_complex::Complex64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("invalid model: {0}")]
    Validation(String),

    #[error("dipole element ({p},{q}) is not Hermitian (deviation {deviation:.3e})")]
    Hermiticity { p: usize, q: usize, deviation: f64 },

    #[error("resonance singularity in {factor}: {detail}")]
    Resonance { factor: String, detail: String },

    #[error("{what} did not converge after {} iterations (last residual {:.3e})", history.len(), history.last().copied().unwrap_or(f64::NAN))]
    NonConvergence { what: String, history: Vec<f64> },

    #[error("quasiparticle energy of orbital {orbital} did not converge; last iterates {last:?}")]
    QuasiparticleNonConvergence { orbital: usize, last: [Complex64; 2] },

    #[error("intermediate state {r} has a different occupation from reference state {q}")]
    IntermediateState { r: usize, q: usize },
}

impl Error {
    /// Short machine-readable code, used in CSV status columns.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::Validation(_) => "validation",
            Error::Hermiticity { .. } => "hermiticity",
            Error::Resonance { .. } => "resonance",
            Error::NonConvergence { .. } => "nonconvergence",
            Error::QuasiparticleNonConvergence { .. } => "qp-nonconvergence",
            Error::IntermediateState { .. } => "intermediate-state",
        }
    }

    pub fn resonance(factor: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Resonance { factor: factor.into(), detail: detail.into() }
    }
}
