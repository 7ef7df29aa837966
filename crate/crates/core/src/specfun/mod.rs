//! Scalar special functions consumed by every other module: complex
//! log-Gamma and digamma, Riemann and Hurwitz zeta, the completed zeta Λ and
//! the scattering function φ = Λ(2-2s)/Λ(2s), real Dirichlet L-functions,
//! K- and J-Bessel functions, Dedekind eta, and the archimedean Gamma-factor
//! ratio for Eisenstein-cusp-form triples.
//!
//! Everything here is pure and reentrant. Accuracy contracts are stated per
//! function; the shared defaults live in [`PrecisionPolicy`].

pub mod bessel;
pub mod dirichlet;
pub mod eta;
pub mod gamma;
pub(crate) mod quadrature;
pub mod zeta;

pub use bessel::{bessel_j0, bessel_j1, bessel_k, bessel_k_scaled, bessel_k_scaled_row, BesselK, MAX_ORDER};
pub use dirichlet::{chi_d, dirichlet_l, dirichlet_l_at_1, is_fundamental_discriminant, kronecker_symbol};
pub use eta::{dedekind_eta, log_y_eta4};
pub use gamma::{digamma, digamma_real, log_gamma};
pub use zeta::{hurwitz_zeta, zeta, zeta_log_derivative, zeta_with_derivative};

use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Error budgets shared by the iterative routines.
///
/// Which tolerance applies is documented per function: quadrature-backed
/// routines (Bessel, eta) honor `target_rel_tol` on the value, series-backed
/// ones (zeta, L-functions) honor `target_abs_tol` on the critical strip.
/// `max_terms` caps every series and panel-subdivision loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionPolicy {
    pub target_abs_tol: f64,
    pub target_rel_tol: f64,
    pub max_terms: usize,
}

impl PrecisionPolicy {
    pub fn new(target_abs_tol: f64, target_rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(target_abs_tol > 0.0) || !(target_rel_tol > 0.0) {
            return Err(Error::Validation(format!(
                "PrecisionPolicy: tolerances must be positive, got abs {target_abs_tol}, rel {target_rel_tol}"
            )));
        }
        if max_terms == 0 {
            return Err(Error::Validation("PrecisionPolicy: max_terms must be positive".into()));
        }
        Ok(Self { target_abs_tol, target_rel_tol, max_terms })
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self { target_abs_tol: 1e-12, target_rel_tol: 1e-12, max_terms: 200_000 }
    }
}

/// Spectral parameters of an Eisenstein series (t_g) and a cusp form (t_f).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactorInput {
    pub t_f: f64,
    pub t_g: f64,
}

impl GammaFactorInput {
    pub fn new(t_f: f64, t_g: f64) -> Result<Self> {
        if !(t_g > 0.0) || !(t_f >= 0.0) || !t_f.is_finite() || !t_g.is_finite() {
            return Err(Error::Validation(format!(
                "GammaFactorInput: need t_g > 0 and t_f >= 0, got t_f {t_f}, t_g {t_g}"
            )));
        }
        Ok(Self { t_f, t_g })
    }

    /// Ω = 0 when t_f ≤ 2 t_g, else t_f − 2 t_g; always ≥ 0.
    pub fn omega(&self) -> f64 {
        if self.t_f <= 2.0 * self.t_g {
            0.0
        } else {
            self.t_f - 2.0 * self.t_g
        }
    }
}

/// Λ(s) = π^{-s/2} Γ(s/2) ζ(s). Poles at s = 0 and s = 1 are rejected.
///
/// Satisfies Λ(s) = Λ(1-s); real and negative on (0,1).
pub fn completed_zeta(s: Complex64) -> Result<Complex64> {
    Ok(completed_zeta_log(s)?.exp())
}

/// A logarithm of Λ(s): exact under `exp`, but the imaginary part is only
/// defined modulo 2πi (each factor contributes its principal branch).
///
/// Arguments left of Re s = 0.025 are routed through Λ(s) = Λ(1-s), which
/// steps over the Γ poles and trivial ζ zeros on the negative axis.
pub fn completed_zeta_log(s: Complex64) -> Result<Complex64> {
    if s.re < 0.025 {
        return completed_zeta_log(Complex64::new(1.0, 0.0) - s);
    }
    let z = zeta(s)?;
    if z.norm() == 0.0 {
        return Err(Error::Validation(format!("completed_zeta_log: ζ({s}) = 0, log undefined")));
    }
    Ok(-(s / 2.0) * PI.ln() + gamma::log_gamma(s / 2.0)? + z.ln())
}

/// Λ'/Λ(s) = -½ log π + ½ ψ(s/2) + ζ'/ζ(s), with Λ'/Λ(s) = -Λ'/Λ(1-s)
/// applied left of Re s = 0.025 for the same reason as in the log.
pub fn completed_zeta_log_derivative(s: Complex64) -> Result<Complex64> {
    if s.re < 0.025 {
        return Ok(-completed_zeta_log_derivative(Complex64::new(1.0, 0.0) - s)?);
    }
    Ok(-0.5 * PI.ln() + 0.5 * gamma::digamma(s / 2.0)? + zeta_log_derivative(s)?)
}

/// The scattering function φ(s) = Λ(2-2s)/Λ(2s); |φ| = 1 on Re s = 1/2.
///
/// Computed as exp of a log difference so the Γ-factor decay cancels
/// exactly instead of underflowing at large |Im s|.
pub fn phi(s: Complex64) -> Result<Complex64> {
    let two_s = 2.0 * s;
    let refl = Complex64::new(2.0, 0.0) - two_s;
    Ok((completed_zeta_log(refl)? - completed_zeta_log(two_s)?).exp())
}

/// φ'/φ(s) = -2 Λ'/Λ(2-2s) - 2 Λ'/Λ(2s); real on the critical line, where
/// it equals -4 Re(Λ'/Λ(1+2it)).
pub fn phi_log_derivative(s: Complex64) -> Result<Complex64> {
    let two_s = 2.0 * s;
    let refl = Complex64::new(2.0, 0.0) - two_s;
    Ok(-2.0 * (completed_zeta_log_derivative(refl)? + completed_zeta_log_derivative(two_s)?))
}

/// Ratio of the exact archimedean Gamma-factor product for the pair
/// (Eisenstein at t_g, cusp form at t_f) to its leading-order model
/// 8π² e^{-πΩ} / ((1+t_f)·(1+2t_g+t_f)^{1/2}·(1+|2t_g-t_f|)^{1/2}).
///
/// Tends to 1 as all three of 1+t_f, 1+2t_g+t_f, 1+|2t_g-t_f| grow. All
/// arithmetic is in log space; the e^{-πΩ} decay cancels analytically.
pub fn gamma_factor_ratio(input: GammaFactorInput) -> Result<f64> {
    let GammaFactorInput { t_f, t_g } = input;
    let plus = 2.0 * t_g + t_f;
    let minus = (2.0 * t_g - t_f).abs();
    let lg = |re: f64, im: f64| -> Result<f64> { Ok(gamma::log_gamma(Complex64::new(re, im))?.re) };
    let ln_product = PI.ln() + 2.0 * lg(0.25, plus / 2.0)? + 2.0 * lg(0.25, minus / 2.0)?
        - 4.0 * lg(0.5, t_g)?
        + 4.0 * lg(0.25, t_f / 2.0)?
        - 2.0 * lg(0.5, t_f)?;
    let ln_model = (8.0 * PI * PI).ln() - PI * input.omega()
        - (1.0 + t_f).ln()
        - 0.5 * (1.0 + plus).ln()
        - 0.5 * (1.0 + minus).ln();
    Ok((ln_product - ln_model).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lambda_functional_equation_on_grid() {
        // 10 x 10 grid, 0.1 <= Re <= 0.9, |Im| <= 50
        for k in 0..10 {
            for j in 0..10 {
                let s = c(0.1 + 0.8 * k as f64 / 9.0, -50.0 + 100.0 * j as f64 / 9.0);
                let a = completed_zeta(s).unwrap();
                let b = completed_zeta(Complex64::new(1.0, 0.0) - s).unwrap();
                let rel = (a - b).norm() / a.norm();
                assert!(rel < 1e-10, "Λ(s) != Λ(1-s) at s = {s}: rel {rel:.2e}");
            }
        }
    }

    #[test]
    fn lambda_at_two() {
        let v = completed_zeta(c(2.0, 0.0)).unwrap();
        assert!((v.re - PI / 6.0).abs() < 1e-14, "{v}");
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn lambda_reflection_pair_point_three() {
        let a = completed_zeta(c(0.3, 0.0)).unwrap();
        let b = completed_zeta(c(0.7, 0.0)).unwrap();
        assert!((a - b).norm() / a.norm() < 1e-13, "{a} vs {b}");
        assert!(a.re < 0.0, "Λ is negative on (0,1)");
    }

    #[test]
    fn lambda_left_of_strip_steps_over_gamma_poles() {
        // Λ(-2) = Λ(3) = π^{-3/2} Γ(3/2) ζ(3): the direct product at -2 is
        // the indeterminate Γ(-1)·ζ(-2); the reflected route is finite.
        let want = PI.powf(-1.5) * (PI.sqrt() / 2.0) * zeta(c(3.0, 0.0)).unwrap().re;
        let v = completed_zeta(c(-2.0, 0.0)).unwrap();
        assert!((v.re - want).abs() / want < 1e-13, "{} vs {want}", v.re);
        assert!(v.im.abs() < 1e-13);
        let d = completed_zeta_log_derivative(c(-2.0, 0.0)).unwrap();
        let d3 = completed_zeta_log_derivative(c(3.0, 0.0)).unwrap();
        assert!((d + d3).norm() < 1e-12, "Λ'/Λ(-2) = -Λ'/Λ(3): {d} vs {d3}");
    }

    #[test]
    fn lambda_schwarz_reflection() {
        let a = completed_zeta(c(0.5, 5.0)).unwrap();
        let b = completed_zeta(c(0.5, -5.0)).unwrap();
        assert!((a - b.conj()).norm() / a.norm() < 1e-14);
    }

    #[test]
    fn lambda_pole_rejected() {
        assert!(completed_zeta(c(1.0, 0.0)).is_err());
        assert!(completed_zeta(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn phi_unimodular_on_critical_line() {
        for t in [0.5, 1.0, 5.0, 25.0, 100.0] {
            let v = phi(c(0.5, t)).unwrap();
            assert!((v.norm() - 1.0).abs() < 1e-10, "|φ(1/2+{t}i)| = {}", v.norm());
        }
    }

    #[test]
    fn phi_at_three_quarters_against_direct_product() {
        // Λ(1/2)/Λ(3/2) assembled from raw Γ and ζ values, no log-space route
        let lam = |s: f64| -> f64 {
            let g = gamma::log_gamma(c(s / 2.0, 0.0)).unwrap().exp().re;
            let z = zeta(c(s, 0.0)).unwrap().re;
            PI.powf(-s / 2.0) * g * z
        };
        let want = lam(0.5) / lam(1.5);
        let v = phi(c(0.75, 0.0)).unwrap();
        assert!((v.re - want).abs() / want.abs() < 1e-12, "{} vs {want}", v.re);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn phi_log_derivative_matches_lambda_form() {
        // φ'/φ(1/2+it) = -4 Re Λ'/Λ(1+2it)
        for t in [2.0, 5.0, 10.0] {
            let lhs = phi_log_derivative(c(0.5, t)).unwrap();
            let rhs = -4.0 * completed_zeta_log_derivative(c(1.0, 2.0 * t)).unwrap().re;
            assert!(lhs.im.abs() < 1e-10, "φ'/φ real on the line, got {lhs}");
            assert!((lhs.re - rhs).abs() < 1e-10, "t={t}: {} vs {rhs}", lhs.re);
        }
    }

    #[test]
    fn phi_log_derivative_finite_difference() {
        // d/dt arg φ(1/2+it) = φ'/φ(1/2+it), checked by centered differences
        for t in [2.0, 10.0] {
            let h = 1e-4;
            let up = phi(c(0.5, t + h)).unwrap();
            let dn = phi(c(0.5, t - h)).unwrap();
            let fd = (up / dn).arg() / (2.0 * h);
            let want = -4.0 * completed_zeta_log_derivative(c(1.0, 2.0 * t)).unwrap().re;
            assert!((fd - want).abs() < 1e-6, "t={t}: fd {fd} vs {want}");
        }
    }

    #[test]
    fn omega_piecewise() {
        assert_eq!(GammaFactorInput::new(1.0, 5.0).unwrap().omega(), 0.0);
        assert_eq!(GammaFactorInput::new(12.0, 5.0).unwrap().omega(), 2.0);
        assert_eq!(GammaFactorInput::new(10.0, 5.0).unwrap().omega(), 0.0);
    }

    #[test]
    fn gamma_factor_ratio_tends_to_one() {
        let r = |t_f, t_g| gamma_factor_ratio(GammaFactorInput::new(t_f, t_g).unwrap()).unwrap();
        let large = r(40.0, 100.0);
        assert!((large - 1.0).abs() < 0.15, "ratio(40,100) = {large}");
        // strictly improves as the three shifted parameters grow
        let seq = [r(1.0, 5.0), r(12.0, 5.0), r(40.0, 100.0), r(100.0, 1000.0)];
        for w in seq.windows(2) {
            assert!((w[1] - 1.0).abs() < (w[0] - 1.0).abs(), "sequence {seq:?}");
        }
        assert!((seq[3] - 1.0).abs() < 0.02, "ratio(100,1000) = {}", seq[3]);
    }

    #[test]
    fn gamma_factor_ratio_exceeds_omega_cliff() {
        // the e^{-piΩ} factor is enormous at Ω = 20; log-space must absorb it
        let v = gamma_factor_ratio(GammaFactorInput::new(60.0, 20.0).unwrap()).unwrap();
        assert!(v.is_finite() && v > 0.5 && v < 2.0, "got {v}");
    }

    #[test]
    fn precision_policy_validation() {
        assert!(PrecisionPolicy::new(1e-12, 1e-10, 1000).is_ok());
        assert!(PrecisionPolicy::new(0.0, 1e-10, 1000).is_err());
        assert!(PrecisionPolicy::new(1e-12, -1.0, 1000).is_err());
        assert!(PrecisionPolicy::new(1e-12, 1e-10, 0).is_err());
        let d = PrecisionPolicy::default();
        assert!(d.target_abs_tol > 0.0 && d.max_terms > 0);
    }

    #[test]
    fn gamma_factor_input_validation() {
        assert!(GammaFactorInput::new(-1.0, 5.0).is_err());
        assert!(GammaFactorInput::new(1.0, 0.0).is_err());
        assert!(GammaFactorInput::new(0.0, 5.0).is_ok());
    }
}
