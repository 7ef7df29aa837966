//! Genus characters: the real characters of the narrow class group cut out
//! by factoring the discriminant into prime discriminants.

use super::compose::{spiral_search, ClassGroupTable};
use super::forms::gcd_i64;
use crate::specfun::{is_fundamental_discriminant, kronecker_symbol};
use crate::{Error, Result};

/// An unordered coprime pair of fundamental discriminants (1 allowed) with
/// d1·d2 = D. Stored with d1 > d2; the character value on a class is
/// χ_{d1}(m) = χ_{d2}(m) for any m > 0 represented by the class and coprime
/// to D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenusChar {
    d1: i64,
    d2: i64,
}

impl GenusChar {
    pub fn d1(&self) -> i64 {
        self.d1
    }

    pub fn d2(&self) -> i64 {
        self.d2
    }

    pub fn discriminant(&self) -> i64 {
        self.d1 * self.d2
    }

    pub fn is_trivial(&self) -> bool {
        self.d1 == 1 || self.d2 == 1
    }
}

impl std::fmt::Display for GenusChar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.d1, self.d2)
    }
}

/// |d| factored into prime discriminants: p* = (−1)^((p−1)/2)·p for each odd
/// prime p | d, plus the even part d / Πp* ∈ {−4, ±8} when d is even. Their
/// product recovers d.
fn prime_discriminants(d: i64) -> Vec<i64> {
    let mut parts = Vec::new();
    let mut odd = d.unsigned_abs();
    while odd % 2 == 0 {
        odd /= 2;
    }
    let mut p = 3u64;
    while p * p <= odd {
        if odd % p == 0 {
            odd /= p;
            parts.push(if p % 4 == 1 { p as i64 } else { -(p as i64) });
        } else {
            p += 2;
        }
    }
    if odd > 1 {
        parts.push(if odd % 4 == 1 { odd as i64 } else { -(odd as i64) });
    }
    let q2 = d / parts.iter().product::<i64>();
    debug_assert!([1, -4, 8, -8].contains(&q2), "even part {q2} of fundamental {d}");
    if q2 != 1 {
        parts.push(q2);
    }
    parts.sort_unstable();
    parts
}

/// All 2^(ω(|D|)−1) genus characters of the fundamental discriminant d,
/// sorted by (d1, d2). The pair (1, d) is the trivial character.
pub fn genus_characters(d: i64) -> Result<Vec<GenusChar>> {
    if d == 1 || !is_fundamental_discriminant(d) {
        return Err(Error::Validation(format!("genus_characters: {d} is not a fundamental discriminant (or is 1)")));
    }
    let parts = prime_discriminants(d);
    let mut out: Vec<GenusChar> = (0..1u32 << parts.len())
        .map(|mask| {
            let d1: i64 = parts.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p).product();
            let d2 = d / d1;
            GenusChar { d1: d1.max(d2), d2: d1.min(d2) }
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    debug_assert_eq!(out.len(), 1 << (parts.len() - 1));
    Ok(out)
}

const REPRESENTATION_CAP: usize = 1_000_000;

/// First two distinct positive values of f coprime to d, in spiral order.
fn represented_values(f: &super::forms::QuadForm, d: i64) -> Result<(i64, i64)> {
    let mut first: Option<i64> = None;
    spiral_search(REPRESENTATION_CAP, |x, y| {
        let v = i64::try_from(f.eval(x, y)).ok()?;
        if v <= 0 || gcd_i64(v, d) != 1 {
            return None;
        }
        match first {
            None => {
                first = Some(v);
                None
            }
            Some(m) if m != v => Some((m, v)),
            Some(_) => None,
        }
    })
    .ok_or_else(|| {
        Error::Resource(format!(
            "chi_eval: no represented value coprime to {d} within {REPRESENTATION_CAP} lattice points"
        ))
    })
}

/// χ(A) for the class with index `class`: ±1, computed from a represented
/// value and checked against a second one.
pub fn chi_eval(chi: &GenusChar, class: usize, table: &ClassGroupTable) -> Result<i32> {
    let d = table.discriminant();
    if chi.d1.checked_mul(chi.d2) != Some(d) {
        return Err(Error::Validation(format!("chi_eval: character {chi} does not belong to discriminant {d}")));
    }
    if class >= table.h() {
        return Err(Error::Validation(format!("chi_eval: class index {class} out of range, h = {}", table.h())));
    }
    if d > 0 && !table.narrow() {
        // a wide class can merge two narrow classes the character separates
        return Err(Error::Validation(
            "chi_eval: genus characters need the narrow class group for positive discriminants".into(),
        ));
    }
    let f = table.representatives()[class];
    let (m1, m2) = represented_values(&f, d)?;
    let value = kronecker_symbol(chi.d1, m1);
    // genus theory: χ_{d1} = χ_{d2} on represented values, independent of m
    for (part, m) in [(chi.d1, m2), (chi.d2, m1), (chi.d2, m2)] {
        if kronecker_symbol(part, m) != value {
            return Err(Error::Tolerance(format!(
                "chi_eval: character {chi} is not constant on class {class} of discriminant {d}"
            )));
        }
    }
    Ok(value)
}
