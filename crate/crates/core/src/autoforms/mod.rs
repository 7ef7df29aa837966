//! Real-analytic Eisenstein series on the modular surface: Fourier-expansion
//! evaluation pinned against the defining coset sum, truncation, the
//! Maass–Selberg inner-product formulas, the centering constants D and C,
//! the Kronecker-limit residual, and evaluation of ingested Maass cusp forms.

mod constants;
mod eisenstein;
mod maass;

pub use constants::{c_const, d_const, kronecker_limit_check, EisensteinConstants};
pub use eisenstein::{
    eisenstein_eval, eisenstein_reference, l2_norm_truncated, maass_selberg_lhs_quadrature,
    maass_selberg_rhs, truncated_eval, EisensteinSpec, TruncatedEisenstein,
};
pub use maass::{maass_eval, MaassFormData, Parity};

/// Euler–Mascheroni constant γ₀.
pub(crate) const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
