//! Hyperbolic geometry of the upper half-plane and the modular surface:
//! point-pair invariants, distance, reduction to the standard fundamental
//! domain, ball volume, and quadrature and Monte Carlo sampling of the
//! invariant measure dμ = dx dy / y².

use crate::specfun::quadrature;
use crate::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// μ-volume of the modular surface, vol(Γ\H) = π/3.
pub const FUNDAMENTAL_VOLUME: f64 = PI / 3.0;

/// A point x + iy of the upper half-plane; y > 0 enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    x: f64,
    y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Validation(format!("Point: need finite x and y > 0, got ({x}, {y})")));
        }
        Ok(Self { x, y })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// Membership in the standard fundamental domain |x| ≤ 1/2, x²+y² ≥ 1.
    pub fn in_fundamental_domain(&self) -> bool {
        self.x.abs() <= 0.5 && self.x * self.x + self.y * self.y >= 1.0
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}+{}i", self.x, self.y)
    }
}

/// Generator alphabet of the modular group: S = (0 1; -1 0), T = (1 1; 0 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    S,
    T,
    TInv,
}

impl Letter {
    fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Letter::S => [[0, 1], [-1, 0]],
            Letter::T => [[1, 1], [0, 1]],
            Letter::TInv => [[1, -1], [0, 1]],
        }
    }
}

/// A word in the generators together with the integer matrix it multiplies
/// out to. The matrix always equals the left-to-right product of `letters`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupWord {
    matrix: [[i64; 2]; 2],
    letters: Vec<Letter>,
}

fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> Result<[[i64; 2]; 2]> {
    let mut out = [[0i64; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let p0 = a[i][0].checked_mul(b[0][j]);
            let p1 = a[i][1].checked_mul(b[1][j]);
            *entry = match (p0, p1) {
                (Some(p0), Some(p1)) => p0
                    .checked_add(p1)
                    .ok_or_else(|| Error::Resource("GroupWord: matrix entries overflow i64".into()))?,
                _ => return Err(Error::Resource("GroupWord: matrix entries overflow i64".into())),
            };
        }
    }
    Ok(out)
}

impl GroupWord {
    pub fn identity() -> Self {
        Self { matrix: [[1, 0], [0, 1]], letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Result<Self> {
        let mut matrix = [[1i64, 0], [0, 1]];
        for l in &letters {
            matrix = mat_mul(matrix, l.matrix())?;
        }
        Ok(Self { matrix, letters })
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn det(&self) -> i64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    /// Möbius action (az+b)/(cz+d) on the upper half-plane.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        let [[a, b], [c, d]] = self.matrix;
        let num = Complex64::new(a as f64, 0.0) * z + b as f64;
        let den = Complex64::new(c as f64, 0.0) * z + d as f64;
        num / den
    }

    pub fn apply_point(&self, z: Point) -> Result<Point> {
        Point::from_complex(self.apply(z.to_complex()))
    }
}

/// u(z,w) = |z-w|² / (4 Im z Im w): nonnegative, symmetric, Γ-invariant,
/// zero exactly when z = w.
pub fn pair_invariant_u(z: Point, w: Point) -> f64 {
    let dx = z.x - w.x;
    let dy = z.y - w.y;
    (dx * dx + dy * dy) / (4.0 * z.y * w.y)
}

/// Hyperbolic distance ρ(z,w) = log((|z-w̄| + |z-w|)/(|z-w̄| - |z-w|)),
/// equivalently sinh²(ρ/2) = u(z,w).
pub fn distance_rho(z: Point, w: Point) -> f64 {
    let d = (z.to_complex() - w.to_complex()).norm();
    let dbar = (z.to_complex() - w.to_complex().conj()).norm();
    if d < 1e-8 * dbar {
        // log form cancels; the asinh form is exact in this regime
        return 2.0 * pair_invariant_u(z, w).sqrt().asinh();
    }
    ((dbar + d) / (dbar - d)).ln()
}

const REDUCE_MAX_STEPS: usize = 10_000;
const WORD_LETTER_CAP: usize = 1_000_000;

/// Move z to the standard fundamental domain. Returns the reduced point and
/// a word with word·z = point. Ties at |x| = 1/2 and on the arc x²+y² = 1
/// break toward x ≥ 0.
pub fn reduce(z: Point) -> Result<(Point, GroupWord)> {
    let mut x = z.x;
    let mut y = z.y;
    // letters in application order (first applied first); reversed at the end
    let mut applied: Vec<Letter> = Vec::new();
    let mut done = false;
    for _ in 0..REDUCE_MAX_STEPS {
        let mut n = (x + 0.5).floor();
        if x - n == -0.5 {
            n -= 1.0;
        }
        if n.abs() > 9.0e15 {
            return Err(Error::Resource(format!("reduce: translation magnitude {n:e} exceeds exact integer range")));
        }
        let n = n as i64;
        if n != 0 {
            let count = n.unsigned_abs() as usize;
            if applied.len() + count > WORD_LETTER_CAP {
                return Err(Error::Resource("reduce: word length exceeds cap".into()));
            }
            let letter = if n > 0 { Letter::TInv } else { Letter::T };
            applied.extend(std::iter::repeat(letter).take(count));
            x -= n as f64;
        }
        let norm2 = x * x + y * y;
        if norm2 < 1.0 {
            x = -x / norm2;
            y /= norm2;
            applied.push(Letter::S);
        } else {
            if norm2 == 1.0 && x < 0.0 {
                // boundary-arc tie: S maps x+iy to -x+iy when |z| = 1
                x = -x;
                applied.push(Letter::S);
            }
            done = true;
            break;
        }
    }
    if !done {
        return Err(Error::Resource(format!("reduce: no convergence within {REDUCE_MAX_STEPS} steps from {z}")));
    }
    applied.reverse();
    let word = GroupWord::from_letters(applied)?;
    Ok((Point::new(x, y)?, word))
}

/// vol(B_R) = 4π sinh²(R/2).
pub fn ball_volume(r: f64) -> f64 {
    let s = (r / 2.0).sinh();
    4.0 * PI * s * s
}

/// A hyperbolic ball with its volume cached. Radius capped at 10.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpec {
    pub center: Point,
    pub radius: f64,
    volume: f64,
}

impl BallSpec {
    pub const MAX_RADIUS: f64 = 10.0;

    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || radius > Self::MAX_RADIUS {
            return Err(Error::Validation(format!(
                "BallSpec: need 0 < R <= {}, got {radius}",
                Self::MAX_RADIUS
            )));
        }
        Ok(Self { center, radius, volume: ball_volume(radius) })
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }
}

/// A quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

/// Geodesic polar coordinates around w: r ∈ [0,R], θ ∈ [0,2π), realized in
/// the disk model as ζ = tanh(r/2)e^{iθ}, z = (w - w̄ζ)/(1 - ζ).
fn polar_point(w: Complex64, r: f64, theta: f64) -> Complex64 {
    let zeta = Complex64::from_polar((r / 2.0).tanh(), theta);
    (w - w.conj() * zeta) / (Complex64::new(1.0, 0.0) - zeta)
}

/// ∫_{B_R(w)} f dμ in geodesic polar coordinates (dμ = sinh r dr dθ),
/// adaptive in both variables. On success the true error is within
/// tol·(1 + |value|).
pub fn ball_quadrature(mut f: impl FnMut(Point) -> f64, ball: &BallSpec, tol: f64) -> Result<QuadResult> {
    if !(tol > 0.0) {
        return Err(Error::Validation(format!("ball_quadrature: tol must be positive, got {tol}")));
    }
    let w = ball.center.to_complex();
    let inner_tol = tol * 0.05;
    let mut worst_inner = 0.0f64;
    let mut ring = |r: f64| -> f64 {
        // periodic trapezoid, doubled until two successive levels agree
        let mut m = 32usize;
        let mut prev = f64::NAN;
        loop {
            let mut acc = 0.0;
            for k in 0..m {
                let theta = 2.0 * PI * k as f64 / m as f64;
                let z = polar_point(w, r, theta);
                acc += f(Point { x: z.re, y: z.im.max(f64::MIN_POSITIVE) });
            }
            let val = acc * 2.0 * PI / m as f64;
            if !prev.is_nan() {
                let diff = (val - prev).abs();
                if diff <= inner_tol * (1.0 + val.abs()) || m >= 8192 {
                    if m >= 8192 {
                        worst_inner = worst_inner.max(diff);
                    }
                    return val;
                }
            }
            prev = val;
            m *= 2;
        }
    };
    let breaks: Vec<f64> = (0..=8).map(|k| ball.radius * k as f64 / 8.0).collect();
    let value = quadrature::integrate_seeded(&mut |r: f64| r.sinh() * ring(r), &breaks, tol * 0.4);
    if worst_inner > inner_tol * (1.0 + value.abs()) * 8.0 {
        return Err(Error::Tolerance(format!(
            "ball_quadrature: angular integral stalled (residual {worst_inner:.3e}), best estimate {value:.17e}"
        )));
    }
    Ok(QuadResult { value, error: tol * (1.0 + value.abs()) })
}

/// ∫ f dμ over the fundamental domain clipped at height y_max:
/// x ∈ [-1/2, 1/2], √(1-x²) ≤ y ≤ y_max.
pub(crate) fn domain_quadrature(f: &mut dyn FnMut(f64, f64) -> f64, y_max: f64, tol: f64) -> Result<f64> {
    if !(y_max > 1.0) {
        return Err(Error::Validation(format!("domain_quadrature: need y_max > 1, got {y_max}")));
    }
    let xs: Vec<f64> = (0..=8).map(|k| -0.5 + k as f64 / 8.0).collect();
    let v = quadrature::integrate_seeded(
        &mut |x: f64| {
            let y0 = (1.0 - x * x).sqrt();
            // fixed interior breaks resolve the low strip where f varies most
            let mut kept = vec![y0];
            kept.extend([1.5, 3.0, 8.0].iter().copied().filter(|&b| b > y0 && b < y_max));
            kept.push(y_max);
            quadrature::integrate_seeded(&mut |y: f64| f(x, y) / (y * y), &kept, tol * 0.2)
        },
        &xs,
        tol * 0.4,
    );
    Ok(v)
}

const MIX_GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(MIX_GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Height of the fundamental domain's lowest point, sin(π/3) = √3/2.
const STRIP_FLOOR: f64 = 0.866_025_403_784_438_6;

fn sample_one(seed: u64, index: u64) -> Point {
    let stream = splitmix64(seed ^ index.wrapping_mul(MIX_GOLDEN));
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    loop {
        let x = rng.gen::<f64>() - 0.5;
        let u = rng.gen::<f64>();
        // y-marginal of dμ on the strip y ≥ √3/2 is √3/2 · y⁻²; invert its CDF
        let y = STRIP_FLOOR / (1.0 - u);
        if x * x + y * y >= 1.0 {
            return Point { x, y };
        }
    }
}

/// n i.i.d. points distributed per dμ restricted to the fundamental domain:
/// rejection from the strip |x| ≤ 1/2, y ≥ sin(π/3) with the exact y⁻²
/// marginal (the cusp tail is sampled exactly, never truncated).
///
/// Point i depends only on (seed, i), so any prefix or partition of the
/// index range reproduces the same points.
pub fn sample_mu(n: usize, seed: u64) -> Vec<Point> {
    (0..n as u64).map(|i| sample_one(seed, i)).collect()
}
