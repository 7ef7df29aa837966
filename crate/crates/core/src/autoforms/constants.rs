//! The centering constants D(g;w) and C(g;R;w) of the shrinking-ball
//! variance, and the Kronecker-limit residual that cross-checks their
//! constant block.

use super::eisenstein::eisenstein_eval;
use super::EULER_GAMMA;
use crate::geometry::{Point, FUNDAMENTAL_VOLUME};
use crate::kernels::{h_r, h_r_prime_at_i_half};
use crate::specfun::{completed_zeta_log, completed_zeta_log_derivative, log_y_eta4, zeta_with_derivative};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// 2γ₀ - 12 ζ'(2)/π² - log|4 Im(w) η(w)⁴|: the w-dependent constant block
/// shared by D(g;w) and the Kronecker limit of vol·E(w, 1+2ε).
fn constant_block(w: Point) -> Result<f64> {
    let zeta_prime_2 = zeta_with_derivative(Complex64::new(2.0, 0.0))?.1.re;
    let eta_term = 4.0f64.ln() + log_y_eta4(w.to_complex())?;
    Ok(2.0 * EULER_GAMMA - 12.0 * zeta_prime_2 / (PI * PI) - eta_term)
}

/// D(g;w) = (2/vol) (2 Re Λ'/Λ(1+2it_g) + 2γ₀ - 12ζ'(2)/π² - log|4 Im(w) η(w)⁴|).
pub fn d_const(t_g: f64, w: Point) -> Result<f64> {
    if !(t_g > 0.0) || !t_g.is_finite() {
        return Err(Error::Validation(format!("d_const: need t_g > 0, got {t_g}")));
    }
    let lam = completed_zeta_log_derivative(Complex64::new(1.0, 2.0 * t_g))?;
    Ok(2.0 / FUNDAMENTAL_VOLUME * (2.0 * lam.re + constant_block(w)?))
}

/// C(g;R;w) = D(g;w) + 2 i h_R'(i/2) / vol
///            + 2 Re( h_R(2t_g + i/2) · Λ(1-2it_g)/Λ(1+2it_g) · E(w, 1-2it_g) ).
///
/// The Λ-ratio is unimodular (Schwarz reflection) and is formed as the exp of
/// a log difference so nothing large is ever multiplied out.
pub fn c_const(t_g: f64, radius: f64, w: Point) -> Result<f64> {
    if !(t_g > 0.0) || !t_g.is_finite() {
        return Err(Error::Validation(format!("c_const: need t_g > 0, got {t_g}")));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Validation(format!("c_const: need R > 0, got {radius}")));
    }
    let d = d_const(t_g, w)?;
    let middle = 2.0 * h_r_prime_at_i_half(radius)? / FUNDAMENTAL_VOLUME;
    let ratio = (completed_zeta_log(Complex64::new(1.0, -2.0 * t_g))?
        - completed_zeta_log(Complex64::new(1.0, 2.0 * t_g))?)
    .exp();
    let e_val = eisenstein_eval(w, Complex64::new(1.0, -2.0 * t_g))?;
    let h = h_r(Complex64::new(2.0 * t_g, 0.5), radius)?;
    Ok(d + middle + 2.0 * (h * ratio * e_val).re)
}

/// Both centering constants for one configuration, with the inputs that
/// produced them.
#[derive(Debug, Clone, Copy)]
pub struct EisensteinConstants {
    d_value: f64,
    c_value: f64,
    w: Point,
    t_g: f64,
    radius: f64,
}

impl EisensteinConstants {
    pub fn new(t_g: f64, radius: f64, w: Point) -> Result<Self> {
        Ok(Self { d_value: d_const(t_g, w)?, c_value: c_const(t_g, radius, w)?, w, t_g, radius })
    }

    pub fn d_value(&self) -> f64 {
        self.d_value
    }

    pub fn c_value(&self) -> f64 {
        self.c_value
    }

    pub fn w(&self) -> Point {
        self.w
    }

    pub fn t_g(&self) -> f64 {
        self.t_g
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Residual of the Kronecker limit formula at s = 1 + 2ε:
///   | vol·E(w, 1+2ε) - 1/(2ε) - (2γ₀ - log|4 Im(w) η(w)⁴| - 12ζ'(2)/π²) |,
/// which is O(ε) with an w-dependent constant.
pub fn kronecker_limit_check(w: Point, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1e-2) {
        return Err(Error::Validation(format!("kronecker_limit_check: need 0 < eps <= 1e-2, got {eps}")));
    }
    let e = eisenstein_eval(w, Complex64::new(1.0 + 2.0 * eps, 0.0))?;
    Ok((FUNDAMENTAL_VOLUME * e.re - 1.0 / (2.0 * eps) - constant_block(w)?).abs())
}
