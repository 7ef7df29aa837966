//! Numerical laboratory for the modular surface `SL2(Z) \ H`.
//!
//! The crate is organized as six layers, each usable on its own:
//!
//! * [`specfun`] — scalar special functions (complex gamma/digamma, zeta and
//!   its derivative, Dirichlet L, K-Bessel with complex order, Dedekind eta,
//!   Kronecker symbol, Gauss–Legendre panel quadrature).
//! * [`geometry`] — upper half-plane points, hyperbolic distance, reduction to
//!   the standard fundamental domain, hyperbolic-measure sampling, and
//!   quadrature over geodesic balls and the fundamental domain.
//! * [`kernels`] — radial kernels and the k → q → g → h transform chain, the
//!   closed-form spectral function of the geodesic-ball kernel, and the
//!   automorphic kernel built by exact group-element enumeration.
//! * [`autoforms`] — real-analytic Eisenstein series (full and truncated),
//!   the scattering function, Maass–Selberg inner products, centering
//!   constants, and ingestion of external Maass cusp-form data.
//! * [`quadinv`] — binary quadratic forms: reduction, composition, class
//!   groups (wide and narrow), genus characters, Heegner points, closed
//!   geodesics, minus continued fractions, Pell units, and the class number
//!   formula.
//! * [`equilab`] — the experiment layer: ball averages, Monte-Carlo variance
//!   estimators, counts in shrinking balls, and Weyl sums with
//!   Dirichlet-series oracles.

pub mod autoforms;
pub mod equilab;
pub mod geometry;
pub mod kernels;
pub mod quadinv;
pub mod specfun;

pub use geometry::Point;
pub use num_complex::Complex64;
pub use quadinv::QuadForm;

/// Crate-wide error type. The three variants map onto the CLI exit-code
/// contract: validation 2, tolerance 3, resource 4.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Bad input: out-of-domain argument, malformed data, unknown option.
    #[error("validation: {0}")]
    Validation(String),
    /// A computation finished but failed to meet its accuracy contract.
    #[error("tolerance: {0}")]
    Tolerance(String),
    /// A search or iteration exhausted its budget before converging.
    #[error("resource: {0}")]
    Resource(String),
}

impl Error {
    /// Exit code for the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) => 2,
            Error::Tolerance(_) => 3,
            Error::Resource(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[macro_export]
macro_rules! validation {
    ($($arg:tt)*) => { $crate::Error::Validation(format!($($arg)*)) };
}

#[macro_export]
macro_rules! resource {
    ($($arg:tt)*) => { $crate::Error::Resource(format!($($arg)*)) };
}
