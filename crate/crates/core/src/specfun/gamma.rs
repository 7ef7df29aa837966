//! Complex log-Gamma and digamma.
//!
//! Both use the asymptotic (Stirling) series once the argument is far enough
//! from the origin, with upward recurrence to get there and the reflection
//! formula for the left half-plane. `log_gamma` is the standard analytic
//! continuation on the plane cut along the negative real axis (real on the
//! positive reals), not the principal logarithm of Gamma; its imaginary part
//! grows like t·log t up the imaginary axis.

use crate::{Error, Result};
use num_complex::Complex64;

const LN_2PI_HALF: f64 = 0.918938533204672742; // ln(2 pi)/2
const LN_PI: f64 = 1.144729885849400174;
const LN_2: f64 = std::f64::consts::LN_2;
const PI: f64 = std::f64::consts::PI;

// B_{2k} / ((2k)(2k-1)) for the Stirling series of log Gamma.
const STIRLING: [f64; 10] = [
    0.08333333333333333333,
    -0.002777777777777777778,
    0.0007936507936507936508,
    -0.0005952380952380952381,
    0.0008417508417508417508,
    -0.001917526917526917527,
    0.006410256410256410256,
    -0.02955065359477124183,
    0.1796443723688305732,
    -1.392432216905901116,
];

// B_{2k} / (2k) for the asymptotic series of digamma.
const DIGAMMA_ASYM: [f64; 10] = [
    0.08333333333333333333,
    -0.008333333333333333333,
    0.003968253968253968254,
    -0.004166666666666666667,
    0.007575757575757575758,
    -0.02109279609279609280,
    0.08333333333333333333,
    -0.4432598039215686275,
    3.053954330270119744,
    -26.45621212121212121,
];

// |z| above which the asymptotic series hold at full double precision.
const ASYM_RADIUS: f64 = 12.0;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor()
}

// Stirling series; requires |z| >= ASYM_RADIUS and Re z >= 0.
fn log_gamma_asym(z: Complex64) -> Complex64 {
    let mut acc = (z - 0.5) * z.ln() - z + LN_2PI_HALF;
    let w = 1.0 / z;
    let w2 = w * w;
    let mut p = w;
    for &c in STIRLING.iter() {
        acc += p * c;
        p *= w2;
    }
    acc
}

/// Log-Gamma, analytically continued from the positive real axis.
///
/// Honors the absolute tolerance of the default policy (≈1e-13 on the strip
/// −5 ≤ Re s ≤ 10, |Im s| ≤ 1e4; degrades gracefully outside). Errors on
/// poles (nonpositive integers).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Validation(format!("log_gamma: non-finite input {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Validation(format!("log_gamma: pole at {z}")));
    }
    Ok(log_gamma_unchecked(z))
}

pub(crate) fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return log_gamma_unchecked(z.conj()).conj();
    }
    if z.re >= 0.5 {
        // shift right until the asymptotic series applies
        let mut shift = Complex64::new(0.0, 0.0);
        let mut w = z;
        while w.norm() < ASYM_RADIUS {
            shift += w.ln();
            w += 1.0;
        }
        log_gamma_asym(w) - shift
    } else {
        // reflection; Im z >= 0 here. With q = e^{2 pi i z} (|q| <= 1):
        //   log Gamma(z) = ln 2pi - i pi/2 + i pi z - Log(1 - q) - log Gamma(1-z)
        // which is the continuation real on (0, 1/2) and analytic off the cut.
        let q = (Complex64::new(0.0, 2.0 * PI) * z).exp();
        let log_sin_part = (Complex64::new(1.0, 0.0) - q).ln();
        Complex64::new(LN_2 + LN_PI, -PI / 2.0) + Complex64::new(0.0, PI) * z
            - log_sin_part
            - log_gamma_unchecked(Complex64::new(1.0, 0.0) - z)
    }
}

// Asymptotic digamma; requires |z| >= ASYM_RADIUS and Re z >= 0.
fn digamma_asym(z: Complex64) -> Complex64 {
    let w = 1.0 / z;
    let w2 = w * w;
    let mut acc = z.ln() - 0.5 * w;
    let mut p = w2;
    for &c in DIGAMMA_ASYM.iter() {
        acc -= p * c;
        p *= w2;
    }
    acc
}

/// Digamma (logarithmic derivative of Gamma). Same pole set and accuracy
/// contract as [`log_gamma`].
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Validation(format!("digamma: non-finite input {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Validation(format!("digamma: pole at {z}")));
    }
    Ok(digamma_unchecked(z))
}

pub(crate) fn digamma_unchecked(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return digamma_unchecked(z.conj()).conj();
    }
    if z.re >= 0.0 {
        let mut shift = Complex64::new(0.0, 0.0);
        let mut w = z;
        while w.norm() < ASYM_RADIUS {
            shift += 1.0 / w;
            w += 1.0;
        }
        digamma_asym(w) - shift
    } else {
        // psi(z) = psi(1-z) - pi cot(pi z); stable cot via e^{2 pi i z}
        // (Im z >= 0 so |q| <= 1).
        let q = (Complex64::new(0.0, 2.0 * PI) * z).exp();
        let cot = if z.im > 20.0 {
            Complex64::new(0.0, -1.0)
        } else {
            Complex64::new(0.0, -1.0) * (1.0 + q) / (1.0 - q)
        };
        digamma_unchecked(Complex64::new(1.0, 0.0) - z) - PI * cot
    }
}

/// Real digamma for real x > 0 or non-integer x < 0 (used by the Dirichlet
/// L(1, χ) closed form, where only real arguments in (0, 1) occur).
pub fn digamma_real(x: f64) -> f64 {
    digamma_unchecked(Complex64::new(x, 0.0)).re
}
