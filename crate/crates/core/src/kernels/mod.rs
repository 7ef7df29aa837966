//! The radial ball kernel k_R, its Selberg–Harish-Chandra transform h_R
//! (pipeline and closed form), the derivative i·h_R'(i/2), small-R
//! asymptotic regimes, and the automorphic kernel K_R on the modular surface.

use crate::geometry::Point;
use crate::specfun::bessel_j1;
use crate::specfun::quadrature;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Normalized indicator kernel of the hyperbolic R-ball:
/// k_R(u) = 1/(4π sinh²(R/2)) on u ≤ sinh²(R/2), else 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelProfile {
    radius: f64,
    normalization: f64,
    support: f64,
}

impl KernelProfile {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Validation(format!("KernelProfile: need R > 0, got {radius}")));
        }
        let s = (radius / 2.0).sinh();
        Ok(Self { radius, normalization: 1.0 / (4.0 * PI * s * s), support: s * s })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Support endpoint in the u-variable, sinh²(R/2).
    pub fn support(&self) -> f64 {
        self.support
    }

    /// k_R(u): the normalization on the closed support, 0 beyond it.
    pub fn k(&self, u: f64) -> f64 {
        if u <= self.support {
            self.normalization
        } else {
            0.0
        }
    }
}

/// How a transform evaluator was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Pipeline,
}

/// An evaluable Selberg–Harish-Chandra transform h(t).
///
/// h is even and takes real values at real arguments, both exact as
/// computed (the real path never touches complex arithmetic).
pub struct TransformResult {
    provenance: Provenance,
    h: Box<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>,
}

impl TransformResult {
    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn h(&self, t: Complex64) -> Result<Complex64> {
        if t.im == 0.0 {
            return Ok(Complex64::new(self.h_real(t.re)?, 0.0));
        }
        (self.h)(t)
    }

    pub fn h_real(&self, t: f64) -> Result<f64> {
        // evenness and realness by construction: the evaluators integrate
        // g(r)·cos(rt), and cos is computed with a real argument here
        Ok((self.h)(Complex64::new(t.abs(), 0.0))?.re)
    }
}

/// Three-step transform of a compactly supported radial kernel:
/// q(v) = ∫_v^∞ k(u)/√(u-v) du (computed with u = v + s²),
/// g(r) = 2 q(sinh²(r/2)), h(t) = ∫_ℝ g(r) e^{irt} dr.
///
/// `u_max` bounds the support of k in the u-variable.
pub fn shc_pipeline(k: impl Fn(f64) -> f64 + Send + Sync + 'static, u_max: f64) -> Result<TransformResult> {
    if !(u_max > 0.0) || !u_max.is_finite() {
        return Err(Error::Validation(format!("shc_pipeline: need finite u_max > 0, got {u_max}")));
    }
    // r such that sinh²(r/2) = u_max
    let r_max = 2.0 * u_max.sqrt().asinh();
    let g = move |r: f64| -> f64 {
        let v = (r / 2.0).sinh().powi(2);
        if v >= u_max {
            return 0.0;
        }
        // q(v) = 2 ∫_0^{√(u_max-v)} k(v+s²) ds after u = v + s²
        let s_top = (u_max - v).sqrt();
        let q = 2.0 * quadrature::integrate(|s| k(v + s * s), 0.0, s_top, 1e-13);
        2.0 * q
    };
    let h = move |t: Complex64| -> Result<Complex64> {
        let breaks = quadrature::osc_breaks(0.0, r_max, t.norm() + 1.0);
        if t.im == 0.0 {
            let v = quadrature::integrate_seeded(&mut |r: f64| g(r) * (r * t.re).cos(), &breaks, 1e-11);
            Ok(Complex64::new(2.0 * v, 0.0))
        } else {
            let v = quadrature::integrate_seeded(&mut |r: f64| (t * r).cos().scale(2.0 * g(r)), &breaks, 1e-11);
            Ok(v)
        }
    };
    Ok(TransformResult { provenance: Provenance::Pipeline, h: Box::new(h) })
}

/// The closed-form transform of the ball kernel as an evaluator.
pub fn h_r_transform(radius: f64) -> Result<TransformResult> {
    KernelProfile::new(radius)?;
    let h = move |t: Complex64| h_r(t, radius);
    Ok(TransformResult { provenance: Provenance::ClosedForm, h: Box::new(h) })
}

/// h_R(t) in closed form: with s = sinh(R/2) and a(ψ) = asinh(s sin ψ),
///
///   h_R(t) = (4/π) ∫_0^{π/2} cos²ψ / √(1+s²sin²ψ) · cos(2 t a(ψ)) dψ,
///
/// the ψ-substitution sinh(Rr/2) = sinh(R/2) sin ψ applied to the defining
/// integral over r ∈ [-1, 1]. Real and even in t for real t, exactly as
/// computed. Supported for |Im t| ≤ 1.
pub fn h_r(t: Complex64, radius: f64) -> Result<Complex64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Validation(format!("h_r: need R > 0, got {radius}")));
    }
    if t.im.abs() > 1.0 || !t.is_finite() {
        return Err(Error::Validation(format!("h_r: need |Im t| <= 1, got t = {t}")));
    }
    if t.im == 0.0 {
        return Ok(Complex64::new(h_r_real(t.re, radius)?, 0.0));
    }
    let s = (radius / 2.0).sinh();
    let omega = 2.0 * t.norm() * s + 1.0;
    let breaks = quadrature::osc_breaks(0.0, PI / 2.0, omega);
    let v = quadrature::integrate_seeded(
        &mut |psi: f64| {
            let sp = psi.sin();
            let cp = psi.cos();
            let root = (1.0 + s * s * sp * sp).sqrt();
            let a = (s * sp).asinh();
            (2.0 * t * a).cos() * (cp * cp / root)
        },
        &breaks,
        1e-12,
    );
    Ok(v * (4.0 / PI))
}

/// h_R at real t, computed entirely in real arithmetic.
pub fn h_r_real(t: f64, radius: f64) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() || !t.is_finite() {
        return Err(Error::Validation(format!("h_r: need R > 0 and finite t, got R = {radius}, t = {t}")));
    }
    let s = (radius / 2.0).sinh();
    let t = t.abs();
    let omega = 2.0 * t * s + 1.0;
    let breaks = quadrature::osc_breaks(0.0, PI / 2.0, omega);
    let v = quadrature::integrate_seeded(
        &mut |psi: f64| {
            let sp = psi.sin();
            let cp = psi.cos();
            let root = (1.0 + s * s * sp * sp).sqrt();
            let a = (s * sp).asinh();
            (2.0 * t * a).cos() * cp * cp / root
        },
        &breaks,
        1e-12,
    );
    Ok(v * (4.0 / PI))
}

/// i·h_R'(i/2) as a positive real: (8/π) ∫_0^{π/2} cos²ψ/√(1+s²sin²ψ) ·
/// a(ψ) sinh(a(ψ)) dψ. Behaves like R²/8 as R → 0.
pub fn h_r_prime_at_i_half(radius: f64) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Validation(format!("h_r_prime_at_i_half: need R > 0, got {radius}")));
    }
    let s = (radius / 2.0).sinh();
    let v = quadrature::integrate(
        |psi: f64| {
            let sp = psi.sin();
            let cp = psi.cos();
            let root = (1.0 + s * s * sp * sp).sqrt();
            let a = (s * sp).asinh();
            cp * cp / root * a * a.sinh()
        },
        0.0,
        PI / 2.0,
        1e-10 * s * s,
    );
    Ok(v * (8.0 / PI))
}

/// Small-R asymptotic regime of h_R(t), selected by x = R|t|.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// x < 0.05: h_R → 1.
    SmallArgument,
    /// 0.05 ≤ x ≤ 30: h_R ≈ 2 J₁(x)/x.
    BesselRange,
    /// x > 30: h_R ≈ (1/√π)(2/x)^{3/2} sin(x - π/4).
    SineTail,
}

impl Regime {
    pub fn index(self) -> u8 {
        match self {
            Regime::SmallArgument => 1,
            Regime::BesselRange => 2,
            Regime::SineTail => 3,
        }
    }
}

/// The asymptotic value of h_R(t) for R ≤ 0.1, with the regime that
/// produced it. Thresholds sit where adjacent regimes agree within 10⁻³.
pub fn asymptotic_h(radius: f64, t: f64) -> Result<(Regime, f64)> {
    if !(radius > 0.0) || radius > 0.1 {
        return Err(Error::Validation(format!("asymptotic_h: need 0 < R <= 0.1, got {radius}")));
    }
    if !t.is_finite() {
        return Err(Error::Validation(format!("asymptotic_h: need finite t, got {t}")));
    }
    let x = (radius * t).abs();
    if x < 0.05 {
        Ok((Regime::SmallArgument, 1.0))
    } else if x <= 30.0 {
        Ok((Regime::BesselRange, 2.0 * bessel_j1(x) / x))
    } else {
        let v = (2.0 / x).powf(1.5) / PI.sqrt() * (x - PI / 4.0).sin();
        Ok((Regime::SineTail, v))
    }
}

const ENUM_CONTRIBUTION_CAP: u64 = 10_000_000;

/// K_R(z,w) = Σ_γ k_R(u(γz,w)), the sum running over the full modular
/// group. Enumeration is exact: every γ with ρ(γz,w) ≤ R appears, found by
/// walking coprime bottom rows (c,d) in the annulus forced by
/// Im(γz) ∈ [y_w e^{-R}, y_w e^R] and closing each row's T^k window in
/// closed form. Symmetric in (z,w).
pub fn automorphic_kernel(z: Point, w: Point, radius: f64) -> Result<f64> {
    if !(radius > 0.0) || radius > 2.0 {
        return Err(Error::Validation(format!("automorphic_kernel: need 0 < R <= 2, got {radius}")));
    }
    let profile = KernelProfile::new(radius)?;
    let count = count_ball_orbit(z, w, radius, profile.support())?;
    Ok(count as f64 * profile.normalization())
}

/// Number of γ ∈ PSL₂(ℤ) with u(γz, w) ≤ u_cap, assuming u_cap corresponds
/// to radius `radius` (the annulus bound uses e^{±R}).
pub(crate) fn count_ball_orbit(z: Point, w: Point, radius: f64, u_cap: f64) -> Result<u64> {
    let mut n: u64 = 0;
    for_each_ball_orbit(z, w, radius, u_cap, &mut |_, _, _, _| n += 1)?;
    Ok(n)
}

/// Visits every γ ∈ PSL₂(ℤ) with u(γz, w) ≤ u_cap as an integer matrix
/// (a, b, c, d), normalized to c > 0 or (c, d) = (0, 1).
///
/// Walks coprime bottom rows (c, d) inside the annulus forced by
/// Im(γz) ∈ [y_w e^{-R}, y_w e^R], then closes each row's T^k window in
/// closed form; every member of the window is checked exactly against u_cap.
pub(crate) fn for_each_ball_orbit(
    z: Point,
    w: Point,
    radius: f64,
    u_cap: f64,
    visit: &mut dyn FnMut(i64, i64, i64, i64),
) -> Result<()> {
    let (zx, zy) = (z.x(), z.y());
    let (wx, wy) = (w.x(), w.y());
    // |cz+d|² must lie in [lower, upper] for Im(γz) to land within e^{±R} of y_w
    let upper = zy * radius.exp() / wy * (1.0 + 1e-12);
    let lower = zy * (-radius).exp() / wy * (1.0 - 1e-12);
    let mut seen: u64 = 0;
    // c = 0 row: γ = T^k, orbit points z + k
    if 1.0 >= lower && 1.0 <= upper {
        visit_row(1, 0, 0, 1, zx, zy, wx, wy, u_cap, &mut seen, visit)?;
    }
    let c_max = (upper.sqrt() / zy).floor() as i64;
    for c in 1..=c_max {
        let cf = c as f64;
        let room = upper - cf * cf * zy * zy;
        if room < 0.0 {
            continue;
        }
        let spread = room.sqrt();
        let d_lo = (-cf * zx - spread).ceil() as i64;
        let d_hi = (-cf * zx + spread).floor() as i64;
        for d in d_lo..=d_hi {
            let re = cf * zx + d as f64;
            let den = re * re + cf * cf * zy * zy;
            if den < lower || den > upper || gcd_i64(c, d) != 1 {
                continue;
            }
            // bottom row (c,d): pick any top row (a,b) with ad - bc = 1
            let (a, b) = top_row(c, d);
            let az = Complex64::new(a as f64, 0.0) * z.to_complex() + b as f64;
            let cz = Complex64::new(cf, 0.0) * z.to_complex() + d as f64;
            let w0 = az / cz;
            visit_row(a, b, c, d, w0.re, w0.im, wx, wy, u_cap, &mut seen, visit)?;
        }
    }
    Ok(())
}

/// One bottom row's T^k window: orbit points x0 + k + i y0 for γ_k = T^k γ,
/// emitted as (a + kc, b + kd, c, d) whenever u ≤ u_cap.
#[allow(clippy::too_many_arguments)]
fn visit_row(
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    x0: f64,
    y0: f64,
    wx: f64,
    wy: f64,
    u_cap: f64,
    seen: &mut u64,
    visit: &mut dyn FnMut(i64, i64, i64, i64),
) -> Result<()> {
    let disc = 4.0 * y0 * wy * u_cap - (y0 - wy) * (y0 - wy);
    if disc < 0.0 {
        return Ok(());
    }
    let half = disc.sqrt();
    let lo = (wx - x0 - half).ceil() as i64;
    let hi = (wx - x0 + half).floor() as i64;
    for k in lo..=hi {
        let dx = x0 + k as f64 - wx;
        let u = (dx * dx + (y0 - wy) * (y0 - wy)) / (4.0 * y0 * wy);
        if u <= u_cap {
            *seen += 1;
            if *seen > ENUM_CONTRIBUTION_CAP {
                return Err(Error::Resource("automorphic_kernel: contribution cap exceeded".into()));
            }
            visit(a + k * c, b + k * d, c, d);
        }
    }
    Ok(())
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Some (a,b) with a·d - b·c = 1 for coprime (c,d), by extended Euclid.
fn top_row(c: i64, d: i64) -> (i64, i64) {
    // find u,v with u·d + v·c = 1, then (a,b) = (u, -v)
    let (mut r0, mut r1) = (d, c);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    // r0 = ±1 = s0·d + t0·c
    if r0 == 1 {
        (s0, -t0)
    } else {
        (-s0, t0)
    }
}
