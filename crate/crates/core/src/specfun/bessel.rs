//! Bessel functions: K with complex order, J of orders 0 and 1.
//!
//! K_nu(x) has two evaluation routes, dispatched on where the answer's
//! exponential scale can be reached without cancellation:
//!
//! * cosh integral: K_nu(x) = ∫_0^∞ e^{-x cosh u} cosh(nu u) du. The
//!   integrand's peak is ~e^{-x}; the answer is e^{-eta} with
//!   eta = sqrt(x^2-tau^2) + tau asin(tau/x) (tau = |Im nu|), so the route
//!   loses e^{eta-x} of headroom to cancellation. Used when x > tau and
//!   eta - x <= 16, which keeps the loss below ~1e-9 relative.
//! * Barnes contour: Mellin inversion
//!   K_nu(x) = (1/2pi) ∫_R 2^{s-2} Gamma((s+nu)/2) Gamma((s-nu)/2) x^{-s} dw,
//!   s = sigma0 + i w, with the contour through the saddle
//!   sigma0 = max(|Re nu| + 1.5, sqrt(max(0, x^2 - tau^2))). At that abscissa
//!   the integrand's peak matches the answer's scale in every regime, so the
//!   route stays well-conditioned through the turning point x ≈ tau and into
//!   the oscillatory region x < tau where the cosh integral is hopeless.
//!
//! Everything is accumulated against the exponent of the integrand's peak, so
//! results are carried as mantissa·e^exponent and only collapsed to f64 at
//! the end; underflow is reported, not silently flushed.

use super::quadrature;
use crate::{Error, Result};
use num_complex::Complex64;

const PI: f64 = std::f64::consts::PI;

/// K_nu(x) with an explicit underflow marker: `value` is exact zero with
/// `underflowed = true` when |K| is below ~e^-705.
#[derive(Debug, Clone, Copy)]
pub struct BesselK {
    pub value: Complex64,
    pub underflowed: bool,
}

// mantissa * e^exponent representation used internally
#[derive(Debug, Clone, Copy)]
struct Scaled {
    mantissa: Complex64,
    exponent: f64,
}

impl Scaled {
    fn to_f64(self) -> (Complex64, bool) {
        if self.mantissa.norm() == 0.0 {
            return (Complex64::new(0.0, 0.0), true);
        }
        let ln_mag = self.exponent + self.mantissa.norm().ln();
        if ln_mag < -705.0 {
            (Complex64::new(0.0, 0.0), true)
        } else {
            (self.mantissa * self.exponent.exp(), false)
        }
    }
}

/// Largest supported |order|; beyond this the contour length (and the
/// Gamma-argument sizes) leave the validated range.
pub const MAX_ORDER: f64 = 2500.0;

/// Modified Bessel function of the second kind, complex order, x > 0.
///
/// Honors the relative tolerance of the default policy (≈1e-9 or better over
/// the supported order range); purely imaginary order returns an exactly real
/// value, and K_nu = K_{-nu} holds exactly as computed.
pub fn bessel_k(nu: Complex64, x: f64) -> Result<BesselK> {
    let (nu, conj_out) = normalize_order(nu)?;
    check_x(x)?;
    let s = bessel_k_core(nu, x);
    let (mut value, underflowed) = s.to_f64();
    if conj_out {
        value = value.conj();
    }
    Ok(BesselK { value, underflowed })
}

/// e^{pi |Im nu|/2} K_nu(x); underflow (possible once x far outgrows the
/// order) flushes quietly to zero, which is what series summation wants.
pub fn bessel_k_scaled(nu: Complex64, x: f64) -> Result<Complex64> {
    let (nu, conj_out) = normalize_order(nu)?;
    check_x(x)?;
    let mut s = bessel_k_core(nu, x);
    s.exponent += PI * nu.im / 2.0;
    let v = s.to_f64().0;
    Ok(if conj_out { v.conj() } else { v })
}

/// Row evaluation of e^{pi|Im nu|/2} K_nu(x_k).
///
/// For the entries in the oscillatory regime (x_k below the order) the Barnes
/// contour's Gamma grid is shared across the whole row: the integrand
/// factorizes as (Gamma part)(w) · x^{-sigma0 - iw}, so each extra x costs
/// one complex exponential per node instead of two log-Gammas.
pub fn bessel_k_scaled_row(nu: Complex64, xs: &[f64]) -> Result<Vec<Complex64>> {
    let (nu, conj_out) = normalize_order(nu)?;
    let tau = nu.im;
    let mut out = vec![Complex64::new(0.0, 0.0); xs.len()];

    let mut shared: Vec<usize> = Vec::new();
    for (k, &x) in xs.iter().enumerate() {
        check_x(x)?;
        if x <= tau && !cosh_route(nu, x) {
            shared.push(k);
        } else {
            let mut s = bessel_k_core(nu, x);
            s.exponent += PI * tau / 2.0;
            out[k] = s.to_f64().0;
        }
    }

    if !shared.is_empty() {
        let x_min = shared.iter().map(|&k| xs[k]).fold(f64::INFINITY, f64::min);
        let grid = BarnesGrid::build(nu, x_min);
        for &k in shared.iter() {
            let mut s = grid.integrate(xs[k]);
            s.exponent += PI * tau / 2.0;
            out[k] = s.to_f64().0;
        }
    }

    if conj_out {
        for v in out.iter_mut() {
            *v = v.conj();
        }
    }
    Ok(out)
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Validation(format!("bessel_k: x = {x} must be positive and finite")))
    }
}

// K_nu = K_{-nu} and K_{conj nu}(x) = conj K_nu(x): reduce to the quadrant
// Re nu >= 0, Im nu >= 0 and remember whether to conjugate the output.
fn normalize_order(nu: Complex64) -> Result<(Complex64, bool)> {
    if !nu.re.is_finite() || !nu.im.is_finite() {
        return Err(Error::Validation(format!("bessel_k: non-finite order {nu}")));
    }
    if nu.norm() > MAX_ORDER {
        return Err(Error::Validation(format!(
            "bessel_k: |order| = {} exceeds supported bound {MAX_ORDER}",
            nu.norm()
        )));
    }
    let nu = if nu.re < 0.0 { -nu } else { nu };
    if nu.im < 0.0 {
        Ok((nu.conj(), true))
    } else {
        Ok((nu, false))
    }
}

// decay exponent of K_{i tau}(x) beyond the turning point, relative to the
// cosh integrand's peak: eta - x with eta = sqrt(x^2-tau^2) + tau asin(tau/x).
fn eta_minus_x(tau: f64, x: f64) -> f64 {
    let r = (x * x - tau * tau).sqrt();
    r + tau * (tau / x).asin() - x
}

fn cosh_route(nu: Complex64, x: f64) -> bool {
    let tau = nu.im;
    tau < x && eta_minus_x(tau, x) <= 16.0
}

// requires normalized nu
fn bessel_k_core(nu: Complex64, x: f64) -> Scaled {
    if cosh_route(nu, x) {
        cosh_integral(nu, x)
    } else {
        BarnesGrid::build(nu, x).integrate(x)
    }
}

// ---------------------------------------------------------------- cosh route

// K_nu(x) = 1/2 ∫_0^∞ [e^{-x cosh u + nu u} + e^{-x cosh u - nu u}] du,
// accumulated against the peak exponent E0 = max_u (-x cosh u + mu u).
fn cosh_integral(nu: Complex64, x: f64) -> Scaled {
    let mu = nu.re;
    let tau = nu.im;
    let u_star = (mu / x).asinh();
    let e0 = -x * u_star.cosh() + mu * u_star;

    // truncation point: x cosh U - mu U + e0 >= 46 + pi tau/2
    let need = 46.0 + PI * tau / 2.0 - e0;
    let mut u_end = (need / x).max(1.001).acosh().max(1.0);
    for _ in 0..4 {
        u_end = (((need + mu * u_end) / x).max(1.001)).acosh().max(1.0);
    }
    let u_end = u_end.max(u_star + 1.0);

    // panel seeding: oscillation frequency tau, e^{-x u^2/2} width 1/sqrt(x)
    let n_osc = (u_end * tau / 8.0).ceil() as usize;
    let n_gauss = (u_end * x.sqrt() / 2.0).ceil() as usize;
    let n = n_osc.max(n_gauss).max(4).min(40_000);
    let breaks: Vec<f64> = (0..=n).map(|i| u_end * i as f64 / n as f64).collect();

    // The exp argument is O(x) near the peak, so each integrand evaluation
    // carries ~x*eps relative noise; with L1 mass ~ sqrt(2pi/x) the integral
    // cannot be resolved below ~eps*sqrt(2pi*x), and asking for more only
    // forces full-depth bisection.
    let tol = (8.0 * f64::EPSILON * (2.0 * PI * x).sqrt()).max(1e-16);

    let val = if mu == 0.0 {
        // purely imaginary order: integrand e^{-x cosh u - e0} cos(tau u),
        // exactly real
        let v = quadrature::integrate_seeded(
            &mut |u: f64| (-x * u.cosh() - e0).exp() * (tau * u).cos(),
            &breaks,
            tol,
        );
        Complex64::new(v, 0.0)
    } else {
        quadrature::integrate_seeded(
            &mut |u: f64| {
                let base = -x * u.cosh() - e0;
                let a = Complex64::new(base + mu * u, tau * u).exp();
                let b = Complex64::new(base - mu * u, -tau * u).exp();
                0.5 * (a + b)
            },
            &breaks,
            tol,
        )
    };
    Scaled { mantissa: val, exponent: e0 }
}

// -------------------------------------------------------------- Barnes route

// Precomputed contour data: log of the Gamma part at every node, reusable
// across x values at or above the reference x (larger x only lowers the
// phase speed, so the node density stays sufficient).
struct BarnesGrid {
    sigma0: f64,
    // per node: (w, weight * panel_halfwidth, log of Gamma part incl. 2^{s-2})
    nodes: Vec<(f64, f64, Complex64)>,
    full_range: bool,
}

impl BarnesGrid {
    fn build(nu: Complex64, x_ref: f64) -> BarnesGrid {
        let tau = nu.im;
        let mu = nu.re;
        let saddle = if x_ref > tau { (x_ref * x_ref - tau * tau).sqrt() } else { 0.0 };
        let sigma0 = (mu + 1.5).max(saddle);
        let full_range = mu != 0.0;

        // local phase speed of Gamma(a)Gamma(b) x^{-iw} along the contour
        let freq = |w: f64| -> f64 {
            let a2 = (sigma0 * sigma0 + (w + tau) * (w + tau)) / 4.0;
            let b2 = (sigma0 * sigma0 + (w - tau) * (w - tau)) / 4.0;
            (0.25 * (a2 * b2).ln() + (2.0 / x_ref).ln()).abs() + 0.3
        };

        let lg_at = |w: f64| -> Complex64 {
            let s = Complex64::new(sigma0, w);
            crate::specfun::gamma::log_gamma_unchecked((s + nu) / 2.0)
                + crate::specfun::gamma::log_gamma_unchecked((s - nu) / 2.0)
                + (s - 2.0) * std::f64::consts::LN_2
        };

        // grow the contour until the magnitude has dropped 50 e-folds below
        // the running peak (and we are past the plateau edge w = tau)
        let mut nodes: Vec<(f64, f64, Complex64)> = Vec::new();
        let mut w = 0.0f64;
        let mut re_peak = f64::NEG_INFINITY;
        let w_hard_cap = tau + 4.0 * sigma0 + 400.0;
        loop {
            let h = (8.0 / freq(w)).clamp(1e-3, 2.0);
            let (a, b) = (w, (w + h).min(w_hard_cap));
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let mut re_max_panel = f64::NEG_INFINITY;
            for &(t, wt) in quadrature::GL16.iter() {
                let wn = mid + half * t;
                let lg = lg_at(wn);
                re_max_panel = re_max_panel.max(lg.re);
                nodes.push((wn, wt * half, lg));
            }
            re_peak = re_peak.max(re_max_panel);
            w = b;
            if (w > tau + 2.0 && re_max_panel < re_peak - 50.0) || w >= w_hard_cap {
                break;
            }
        }
        if full_range {
            // mirror the grid; no symmetry available for Re nu != 0
            let mirrored: Vec<(f64, f64, Complex64)> =
                nodes.iter().map(|&(w, wt, _)| (-w, wt, lg_at(-w))).collect();
            nodes.extend(mirrored);
        }
        BarnesGrid { sigma0, nodes, full_range }
    }

    fn integrate(&self, x: f64) -> Scaled {
        let ln_x = x.ln();
        let mut e0 = f64::NEG_INFINITY;
        for &(_, _, lg) in self.nodes.iter() {
            e0 = e0.max(lg.re - self.sigma0 * ln_x);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for &(w, wt, lg) in self.nodes.iter() {
            let expo = lg - Complex64::new(self.sigma0, w) * ln_x - e0;
            acc += wt * expo.exp();
        }
        let mantissa = if self.full_range {
            acc / (2.0 * PI)
        } else {
            // half-range, conjugate-symmetric integrand: ∫_R = 2 Re ∫_0^∞
            Complex64::new(acc.re / PI, 0.0)
        };
        Scaled { mantissa, exponent: e0 }
    }
}

// ------------------------------------------------------------ J of order 0,1

/// J_0(x) for real x.
pub fn bessel_j0(x: f64) -> f64 {
    bessel_j_small_order(0, x)
}

/// J_1(x) for real x (odd in x).
pub fn bessel_j1(x: f64) -> f64 {
    bessel_j_small_order(1, x)
}

fn bessel_j_small_order(k: u8, x: f64) -> f64 {
    let ax = x.abs();
    let sign = if k == 1 && x < 0.0 { -1.0 } else { 1.0 };
    if ax <= 9.0 {
        sign * j_series(k, ax)
    } else if ax <= 40.0 {
        // midrange: the ascending series cancels and the asymptotic series
        // bottoms out near 1e-8; the Bessel integral is exact and cheap here
        sign * j_integral(k, ax)
    } else {
        sign * j_hankel(k, ax)
    }
}

// J_k(x) = (1/pi) ∫_0^pi cos(k theta - x sin theta) d theta
fn j_integral(k: u8, x: f64) -> f64 {
    let breaks = quadrature::osc_breaks(0.0, PI, x + k as f64);
    let v = quadrature::integrate_seeded(
        &mut |theta: f64| (k as f64 * theta - x * theta.sin()).cos(),
        &breaks,
        1e-15,
    );
    v / PI
}

// ascending series; fine to |x| = 9 (worst cancellation there ~3 digits)
fn j_series(k: u8, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = if k == 0 { 1.0 } else { half };
    let mut acc = term;
    for m in 1..80 {
        let m = m as f64;
        term *= -q / (m * (m + k as f64));
        acc += term;
        if term.abs() < 1e-18 * acc.abs().max(1.0) {
            break;
        }
    }
    acc
}

// Hankel asymptotic expansion in complex form:
// J_k(x) = Re[ sqrt(2/(pi x)) e^{i(x - k pi/2 - pi/4)} sum_m i^m a_m x^{-m} ],
// a_m = prod_{j=1..m} (4 k^2 - (2j-1)^2) / (8 j); truncated at the smallest
// term (the expansion is asymptotic, not convergent).
fn j_hankel(k: u8, x: f64) -> f64 {
    let nu2 = 4.0 * (k as f64) * (k as f64);
    let mut a = 1.0f64;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut i_pow = Complex64::new(0.0, 1.0);
    let mut prev = f64::INFINITY;
    for m in 1..40 {
        let j = m as f64;
        a *= (nu2 - (2.0 * j - 1.0) * (2.0 * j - 1.0)) / (8.0 * j * x);
        if a.abs() > prev {
            break;
        }
        prev = a.abs();
        sum += i_pow * a;
        i_pow *= Complex64::new(0.0, 1.0);
        if a.abs() < 1e-17 {
            break;
        }
    }
    let phase = x - (k as f64) * PI / 2.0 - PI / 4.0;
    let rot = Complex64::new(0.0, phase).exp();
    (2.0 / (PI * x)).sqrt() * (rot * sum).re
}
