//! Dedekind eta on the upper half plane.

use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// η(w) = e^{πiw/12} Π_{m≥1} (1 - e^{2πimw}) for Im w > 0.
///
/// The product is truncated once the tail Π(1-q^m) is within 1e-18 of 1,
/// using |log Π_{m>M}(1-q^m)| ≤ |q|^{M+1}/(1-|q|).
pub fn dedekind_eta(w: Complex64) -> Result<Complex64> {
    if !(w.im > 0.0) || !w.is_finite() {
        return Err(Error::Validation(format!("dedekind_eta: need Im w > 0, got {w}")));
    }
    let q = (Complex64::new(0.0, 2.0 * PI) * w).exp();
    let qn = q.norm();
    // qn < 1 strictly since Im w > 0; guard the pathological near-boundary case
    if qn >= 1.0 - 1e-14 {
        return Err(Error::Validation(format!("dedekind_eta: Im w = {} too small to converge", w.im)));
    }
    let m_max = ((1e-18 * (1.0 - qn)).ln() / qn.ln()).ceil().max(1.0) as usize;
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qm = Complex64::new(1.0, 0.0);
    for _ in 0..m_max {
        qm *= q;
        prod *= Complex64::new(1.0, 0.0) - qm;
    }
    let prefactor = (Complex64::new(0.0, PI / 12.0) * w).exp();
    Ok(prefactor * prod)
}

/// log |Im(w) · η(w)^4|, the weight-invariant combination that appears in
/// the Kronecker limit formula. Invariant under w → w+1 and w → -1/w.
pub fn log_y_eta4(w: Complex64) -> Result<f64> {
    let eta = dedekind_eta(w)?;
    Ok(w.im.ln() + 4.0 * eta.norm().ln())
}
