use thiserror::Error;

#[derive(Debug, Error)]
pub enum IcecError {
    /// Invalid configuration or registry content.
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure failed to converge.
    #[error("numerical error: {0}")]
    Numerics(String),

    /// Malformed input file; carries the 1-based line number.
    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// Photon energy below the ionization threshold of the species.
    #[error("photon energy {omega_ev:.4} eV below ionization threshold {ip_ev:.4} eV of {species}")]
    BelowThreshold {
        species: String,
        omega_ev: f64,
        ip_ev: f64,
    },

    /// Photon energy outside the tabulated range; no silent extrapolation.
    #[error("photon energy {omega_ev:.4} eV outside table range [{min_ev:.4}, {max_ev:.4}] eV of {species}")]
    TableRange {
        species: String,
        omega_ev: f64,
        min_ev: f64,
        max_ev: f64,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// LAPACK returned a nonzero info code.
    #[error("linear algebra failure: {routine} info = {info}")]
    Lapack { routine: &'static str, info: i32 },
}

pub type Result<T> = std::result::Result<T, IcecError>;
