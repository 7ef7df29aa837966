//! Heegner points and closed geodesics of quadratic forms.
//!
//! A definite form (a, b, c) marks the point (−b + i√−D)/(2a); an indefinite
//! one spans the semicircle between the real roots (−b ± √D)/(2a), which
//! closes up modulo the form's automorphs into a geodesic of length
//! 2·log ε⁺. The sampler walks that closed loop at unit speed.

use super::forms::{isqrt_i64, QuadForm};
use super::surd::log_epsilon_plus;
use crate::geometry::{reduce, GroupWord, Point};
use crate::{Error, Result};

/// The marked point (−b + i√−D)/(2a) of a definite form. Reduced forms land
/// in the standard fundamental domain; forms whose reduction sits on the
/// domain's boundary seam land on the seam, one translation or inversion
/// away from where `geometry::reduce` breaks the tie.
pub fn heegner_point(f: &QuadForm) -> Result<Point> {
    let d = f.disc();
    if d >= 0 {
        return Err(Error::Validation(format!("heegner_point: needs D < 0, got {f} with D = {d}")));
    }
    let a2 = 2.0 * f.a() as f64;
    Point::new(-f.b() as f64 / a2, ((-d) as f64).sqrt() / a2)
}

/// The closed geodesic beneath an indefinite form: the semicircle centered
/// at −b/(2a) of radius √D/(2|a|), traversed once per period 2·log ε⁺.
#[derive(Debug, Clone)]
pub struct GeodesicSegment {
    form: QuadForm,
    center: f64,
    radius: f64,
    length: f64,
}

impl GeodesicSegment {
    pub fn form(&self) -> &QuadForm {
        &self.form
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Length of one closed traversal: 2·log ε⁺ of the discriminant.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// The real endpoints ((−b + √D)/(2a), (−b − √D)/(2a)).
    pub fn endpoints(&self) -> (f64, f64) {
        let a2 = 2.0 * self.form.a() as f64;
        let sd = (self.form.disc() as f64).sqrt();
        ((-self.form.b() as f64 + sd) / a2, (-self.form.b() as f64 - sd) / a2)
    }

    /// Unit-speed point at arclength t from the apex: center +
    /// radius·(tanh t + i·sech t). Fails once sech t underflows (|t| ≈ 710).
    pub fn point_at(&self, t: f64) -> Result<Point> {
        let y = self.radius / t.cosh();
        if y <= 0.0 || !y.is_finite() {
            return Err(Error::Tolerance(format!("geodesic sample at t = {t} underflows toward the real axis")));
        }
        Point::new(self.center + self.radius * t.tanh(), y)
    }

    pub(crate) fn sample_with_words(&self, n: usize) -> Result<Vec<(Point, GroupWord)>> {
        if n == 0 {
            return Err(Error::Validation("geodesic sample: need at least one point".into()));
        }
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let t = ((j as f64 + 0.5) / n as f64 - 0.5) * self.length;
            out.push(reduce(self.point_at(t)?)?);
        }
        Ok(out)
    }

    /// n arclength-uniform samples along one closed traversal, reduced to
    /// the fundamental domain.
    pub fn sample(&self, n: usize) -> Result<Vec<Point>> {
        Ok(self.sample_with_words(n)?.into_iter().map(|(z, _)| z).collect())
    }
}

/// Builds the closed geodesic of an indefinite form of non-square
/// discriminant.
pub fn geodesic_of_form(f: &QuadForm) -> Result<GeodesicSegment> {
    let d = f.disc();
    if d <= 0 {
        return Err(Error::Validation(format!("geodesic_of_form: needs D > 0, got {f} with D = {d}")));
    }
    let s = isqrt_i64(d);
    if s * s == d {
        return Err(Error::Validation(format!(
            "geodesic_of_form: {f} has square discriminant {d}; its roots are rational and span no geodesic"
        )));
    }
    let length = 2.0 * log_epsilon_plus(d)?;
    Ok(GeodesicSegment {
        form: *f,
        center: -f.b() as f64 / (2.0 * f.a() as f64),
        radius: (d as f64).sqrt() / (2.0 * f.a().abs() as f64),
        length,
    })
}
