//! Integral binary quadratic forms and Gauss reduction in both signatures.
//!
//! A form ax² + bxy + cy² carries its discriminant D = b² − 4ac. Definite
//! forms (D < 0) are kept positive definite (a > 0). A definite form is
//! reduced when |b| ≤ a ≤ c with b ≥ 0 whenever |b| = a or a = c; an
//! indefinite form is reduced when 0 < (√D − b)/2|a| < 1 < (√D + b)/2|a|.
//! The reduced indefinite forms of one discriminant split into disjoint
//! ρ-cycles, one cycle per proper equivalence class; for definite forms each
//! class holds exactly one reduced form.
//!
//! All arithmetic is exact: products go through i128 and conversions back to
//! i64 are checked.

use crate::{Error, Result};

pub(crate) fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Floor of √n.
pub(crate) fn isqrt_i64(n: i64) -> i64 {
    debug_assert!(n >= 0);
    (n as u64).isqrt() as i64
}

fn fit_i64(v: i128, what: &str) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Validation(format!("{what} exceeds the 64-bit coefficient range")))
}

/// ax² + bxy + cy², with D = b² − 4ac computed once at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadForm {
    a: i64,
    b: i64,
    c: i64,
    disc: i64,
}

impl QuadForm {
    /// Builds the form and validates that the discriminant fits in 64 bits
    /// and that a definite form is positive definite.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let disc = (b as i128) * (b as i128) - 4 * (a as i128) * (c as i128);
        let disc = fit_i64(disc, &format!("form ({a},{b},{c}): discriminant"))?;
        if disc < 0 && a <= 0 {
            return Err(Error::Validation(format!(
                "form ({a},{b},{c}): D = {disc} < 0 requires a > 0 (positive definite)"
            )));
        }
        Ok(QuadForm { a, b, c, disc })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// gcd(a, b, c) ≥ 0; zero only for the zero form.
    pub fn content(&self) -> i64 {
        gcd_i64(gcd_i64(self.a, self.b), self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// The represented value a·x² + b·xy + c·y², exact in i128.
    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    pub fn is_reduced(&self) -> bool {
        if self.disc < 0 {
            let (a, b, c) = (self.a, self.b, self.c);
            b.abs() <= a && a <= c && (b >= 0 || (b.abs() < a && a < c))
        } else if self.disc > 0 {
            let s = isqrt_i64(self.disc);
            if s * s == self.disc || self.b <= 0 || self.b > s {
                return false;
            }
            // remaining conditions: √D − b < 2|a| and 2|a| − b < √D
            let ta = 2 * self.a.abs() as i128;
            let (b, d) = (self.b as i128, self.disc as i128);
            (ta + b) * (ta + b) > d && (ta <= b || (ta - b) * (ta - b) < d)
        } else {
            false
        }
    }

    /// One ρ-step for indefinite forms: (a, b, c) → (c, r, (r² − D)/4c) with
    /// r ≡ −b (mod 2c) normalized into the reduction window. Restricted to
    /// reduced forms this is the shift along the form's cycle; iterated from
    /// anywhere it reaches a reduced form.
    pub fn rho(&self) -> Result<QuadForm> {
        if self.disc <= 0 {
            return Err(Error::Validation(format!("rho: needs D > 0, got D = {}", self.disc)));
        }
        let s = isqrt_i64(self.disc);
        if s * s == self.disc {
            return Err(Error::Validation(format!("rho: discriminant {} is a square; the form factors into linear pieces", self.disc)));
        }
        // c = 0 would force D = b², excluded above
        let ca = self.c.abs() as i128;
        let m = 2 * ca;
        let lo = if ca > s as i128 { 1 - ca } else { s as i128 + 1 - m };
        let r = lo + (-self.b as i128 - lo).rem_euclid(m);
        let c2 = (r * r - self.disc as i128) / (4 * self.c as i128);
        debug_assert_eq!((r * r - self.disc as i128) % (4 * self.c as i128), 0);
        QuadForm::new(self.c, fit_i64(r, "rho: middle coefficient")?, fit_i64(c2, "rho: trailing coefficient")?)
    }

    /// A reduced form properly equivalent to this one. Definite forms land on
    /// the unique reduced representative of their class (boundary ties give
    /// b ≥ 0); indefinite forms land somewhere on their class's cycle.
    pub fn reduce(&self) -> Result<QuadForm> {
        const CAP: usize = 20_000;
        if self.disc < 0 {
            let (mut a, mut b, mut c) = (self.a, self.b, self.c);
            for _ in 0..CAP {
                if b > a || b <= -a {
                    // translate b into (−a, a]
                    let r0 = (b as i128).rem_euclid(2 * a as i128);
                    let r = if r0 > a as i128 { r0 - 2 * a as i128 } else { r0 };
                    c = fit_i64((r * r - self.disc as i128) / (4 * a as i128), "reduce: trailing coefficient")?;
                    b = r as i64;
                }
                if a > c {
                    (a, b, c) = (c, -b, a);
                    continue;
                }
                if b < 0 && (-b == a || a == c) {
                    b = -b;
                }
                let out = QuadForm { a, b, c, disc: self.disc };
                debug_assert!(out.is_reduced());
                return Ok(out);
            }
            Err(Error::Resource(format!("reduce: no convergence within {CAP} steps from ({}, {}, {})", self.a, self.b, self.c)))
        } else {
            let mut f = *self;
            for _ in 0..CAP {
                if f.is_reduced() {
                    return Ok(f);
                }
                f = f.rho()?;
            }
            Err(Error::Resource(format!("reduce: no convergence within {CAP} steps from ({}, {}, {})", self.a, self.b, self.c)))
        }
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn check_discriminant_input(d: i64, want_negative: bool) -> Result<()> {
    if want_negative && d >= 0 {
        return Err(Error::Validation(format!("needs D < 0, got {d}")));
    }
    if !want_negative && d <= 0 {
        return Err(Error::Validation(format!("needs D > 0, got {d}")));
    }
    if d.rem_euclid(4) > 1 {
        return Err(Error::Validation(format!("{d} is not a discriminant (D ≡ 0, 1 mod 4 required)")));
    }
    if d.unsigned_abs() > 100_000_000 {
        return Err(Error::Validation(format!("|D| = {} exceeds the supported bound 10^8", d.unsigned_abs())));
    }
    Ok(())
}

/// All primitive reduced positive definite forms of discriminant d, exactly
/// one per proper equivalence class, sorted by (a, −b). Imprimitive reduced
/// forms are excluded: they are integer multiples of forms of a smaller
/// discriminant.
pub fn enumerate_reduced(d: i64) -> Result<Vec<QuadForm>> {
    check_discriminant_input(d, true)?;
    let amax = isqrt_i64(-d / 3);
    let parity = d.rem_euclid(2);
    let mut out = Vec::new();
    for a in 1..=amax {
        let mut b = -a;
        if (b - parity).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = (b as i128) * (b as i128) - d as i128;
            let den = 4 * a as i128;
            if num % den == 0 {
                let c = (num / den) as i64;
                // skip the b < 0 twin of each boundary form
                if c >= a && (b >= 0 || (-b < a && a < c)) && gcd_i64(gcd_i64(a, b), c) == 1 {
                    out.push(QuadForm { a, b, c, disc: d });
                }
            }
            b += 2;
        }
    }
    out.sort_by_key(|f| (f.a, -f.b));
    Ok(out)
}

/// All primitive reduced indefinite forms of nonsquare discriminant d > 0,
/// sorted by (a, b).
pub(crate) fn enumerate_reduced_indefinite(d: i64) -> Result<Vec<QuadForm>> {
    check_discriminant_input(d, false)?;
    let s = isqrt_i64(d);
    if s * s == d {
        return Err(Error::Validation(format!("D = {d} is a square; no indefinite reduction theory applies")));
    }
    let parity = d.rem_euclid(2);
    let mut out = Vec::new();
    let mut b = if parity == 0 { 2 } else { 1 };
    while b <= s {
        let t = ((d as i128 - (b as i128) * (b as i128)) / 4) as i64; // = −ac > 0
        let mut aa = 1;
        while aa * aa <= t {
            if t % aa == 0 {
                let mut pairs = vec![(aa, -(t / aa)), (-aa, t / aa)];
                if aa != t / aa {
                    pairs.push((t / aa, -aa));
                    pairs.push((-(t / aa), aa));
                }
                for (a, c) in pairs {
                    let f = QuadForm { a, b, c, disc: d };
                    if f.is_reduced() && f.is_primitive() {
                        out.push(f);
                    }
                }
            }
            aa += 1;
        }
        b += 2;
    }
    out.sort_by_key(|f| (f.a, f.b));
    Ok(out)
}

/// The ρ-orbits of the reduced indefinite forms of discriminant d: one orbit
/// per proper equivalence class, each listed in ρ order starting from its
/// (a, b, c)-least member with a > 0. Orbits are sorted by that member.
pub(crate) fn reduced_cycles(d: i64) -> Result<Vec<Vec<QuadForm>>> {
    let forms = enumerate_reduced_indefinite(d)?;
    let index: std::collections::HashMap<QuadForm, usize> =
        forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut seen = vec![false; forms.len()];
    let mut starts: Vec<QuadForm> = Vec::new();
    // positive leading coefficients come last in the (a, b) sort, so scan in
    // order and keep the first unseen a > 0 form of each orbit
    let mut cycles = Vec::new();
    for f0 in forms.iter().filter(|f| f.a > 0) {
        if seen[index[f0]] {
            continue;
        }
        let mut cycle = vec![*f0];
        seen[index[f0]] = true;
        let mut f = f0.rho()?;
        while f != *f0 {
            let i = *index.get(&f).ok_or_else(|| {
                Error::Tolerance(format!("reduced_cycles: ρ left the reduced set at {f} (D = {d})"))
            })?;
            seen[i] = true;
            cycle.push(f);
            f = f.rho()?;
        }
        starts.push(*f0);
        cycles.push(cycle);
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Tolerance(format!("reduced_cycles: ρ-orbits missed some reduced forms (D = {d})")));
    }
    let mut order: Vec<usize> = (0..cycles.len()).collect();
    order.sort_by_key(|&i| (starts[i].a, starts[i].b, starts[i].c));
    Ok(order.into_iter().map(|i| cycles[i].clone()).collect())
}
