//! Dirichlet composition and class-group tables.
//!
//! Composition replaces the second form by a properly equivalent one whose
//! leading coefficient is coprime to the first's, glues the middle
//! coefficients with a Chinese-remainder step, and multiplies the leading
//! coefficients. Classes of positive definite forms are identified by their
//! unique reduced representative; narrow classes of indefinite forms by
//! their ρ-cycle. The wide table for D > 0 is the quotient of the narrow one
//! by the class of the negated principal form.

use std::collections::HashMap;

use super::forms::{enumerate_reduced, gcd_i64, isqrt_i64, reduced_cycles, QuadForm};
use crate::specfun::is_fundamental_discriminant;
use crate::{Error, Result};

/// Points of the ring max(|x|, |y|) = r: top row left to right, then the two
/// side columns descending (right before left), then the bottom row left to
/// right. The search order every represented-integer hunt uses.
fn ring(r: i64) -> impl Iterator<Item = (i64, i64)> {
    let top = (-r..=r).map(move |x| (x, r));
    let sides = (1 - r..r).rev().flat_map(move |y| [(r, y), (-r, y)]);
    let bottom = (-r..=r).map(move |x| (x, -r));
    top.chain(sides).chain(bottom)
}

/// Walks the spiral until the visitor returns Some, giving up after `cap`
/// lattice points.
pub(crate) fn spiral_search<T>(cap: usize, mut visit: impl FnMut(i64, i64) -> Option<T>) -> Option<T> {
    let mut seen = 0usize;
    let mut r = 1i64;
    loop {
        for (x, y) in ring(r) {
            seen += 1;
            if seen > cap {
                return None;
            }
            if let Some(v) = visit(x, y) {
                return Some(v);
            }
        }
        r += 1;
    }
}

/// f ∘ γ: the form f(px + qy, rx + sy) for γ = [[p, q], [r, s]] with
/// det γ = 1. Proper equivalence preserves the discriminant and the class.
pub(crate) fn transform(f: &QuadForm, m: [[i64; 2]; 2]) -> Result<QuadForm> {
    let [[p, q], [r, s]] = m;
    let det = p as i128 * s as i128 - q as i128 * r as i128;
    if det != 1 {
        return Err(Error::Validation(format!("transform: determinant {det} ≠ 1")));
    }
    let (a, b, c) = (f.a() as i128, f.b() as i128, f.c() as i128);
    let (p, q, r, s) = (p as i128, q as i128, r as i128, s as i128);
    let a2 = a * p * p + b * p * r + c * r * r;
    let b2 = 2 * (a * p * q + c * r * s) + b * (p * s + q * r);
    let c2 = a * q * q + b * q * s + c * s * s;
    let fit = |v: i128| i64::try_from(v).map_err(|_| Error::Validation("transform: coefficients exceed the 64-bit range".into()));
    let out = QuadForm::new(fit(a2)?, fit(b2)?, fit(c2)?)?;
    debug_assert_eq!(out.disc(), f.disc());
    Ok(out)
}

fn extgcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, u, v) with a·u + b·v = g ≥ 0
    let (mut r0, mut r1) = (a, b);
    let (mut u0, mut u1) = (1i128, 0i128);
    let (mut v0, mut v1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (u0, u1) = (u1, u0 - q * u1);
        (v0, v1) = (v1, v0 - q * v1);
    }
    if r0 < 0 {
        (-r0, -u0, -v0)
    } else {
        (r0, u0, v0)
    }
}

fn mod_inverse(x: i128, m: i128) -> Result<i128> {
    let m = m.abs();
    if m == 1 {
        return Ok(0);
    }
    let (g, u, _) = extgcd(x.rem_euclid(m), m);
    if g != 1 {
        return Err(Error::Validation(format!("mod_inverse: gcd({x}, {m}) = {g} ≠ 1")));
    }
    Ok(u.rem_euclid(m))
}

const SPIRAL_CAP: usize = 1_000_000;

/// A properly equivalent copy of g whose leading coefficient is nonzero and
/// coprime to m. Exists for any primitive form; found by the deterministic
/// spiral over primitive vectors.
fn with_leading_coprime_to(g: &QuadForm, m: i64) -> Result<QuadForm> {
    if g.a() != 0 && gcd_i64(g.a(), m) == 1 {
        return Ok(*g);
    }
    spiral_search(SPIRAL_CAP, |x, y| {
        if gcd_i64(x, y) != 1 {
            return None;
        }
        let v = g.eval(x, y);
        let v64 = i64::try_from(v).ok()?;
        if v64 == 0 || gcd_i64(v64, m) != 1 {
            return None;
        }
        // complete (x, y) to a determinant-one matrix: x·u + y·w = 1
        let (gxy, u, w) = extgcd(x as i128, y as i128);
        debug_assert_eq!(gxy, 1);
        Some(transform(g, [[x, -(w as i64)], [y, u as i64]]))
    })
    .ok_or_else(|| {
        Error::Resource(format!("composition: no represented value coprime to {m} within {SPIRAL_CAP} lattice points"))
    })?
}

/// Dirichlet composition of primitive forms of one (nonsquare) discriminant.
/// Returns the reduced composite.
pub fn compose_forms(f: &QuadForm, g: &QuadForm) -> Result<QuadForm> {
    if f.disc() != g.disc() {
        return Err(Error::Validation(format!("compose: discriminants differ ({} vs {})", f.disc(), g.disc())));
    }
    let d = f.disc();
    if d > 0 {
        let s = isqrt_i64(d);
        if s * s == d {
            return Err(Error::Validation(format!("compose: square discriminant {d} has no class group")));
        }
    }
    if !f.is_primitive() || !g.is_primitive() {
        return Err(Error::Validation("compose: both forms must be primitive".into()));
    }
    let gp = with_leading_coprime_to(g, f.a())?;
    let (a1, a2) = (f.a() as i128, gp.a() as i128);
    let (b1, b2) = (f.b() as i128, gp.b() as i128);
    // B ≡ b1 (mod 2a1) and B ≡ b2 (mod 2a2); both sides share parity, and
    // gcd(a1, a2) = 1 makes the lift unique mod 2a1a2
    let m2 = a2.abs();
    let inv = mod_inverse(a1, m2)?;
    let t = (((b2 - b1) / 2).rem_euclid(m2) * inv).rem_euclid(m2);
    let a3 = a1 * a2;
    let mut b3 = (b1 + 2 * a1 * t).rem_euclid(2 * a3.abs());
    if b3 > a3.abs() {
        b3 -= 2 * a3.abs();
    }
    let num = b3 * b3 - d as i128;
    debug_assert_eq!(num % (4 * a3), 0, "composite middle coefficient fails B² ≡ D (mod 4a₃)");
    let fit = |v: i128, what: &str| {
        i64::try_from(v).map_err(|_| Error::Validation(format!("compose: {what} exceeds the 64-bit range")))
    };
    let composite = QuadForm::new(fit(a3, "leading coefficient")?, fit(b3, "middle coefficient")?, fit(num / (4 * a3), "trailing coefficient")?)?;
    composite.reduce()
}

/// The form (1, D mod 2, ·) whose class is the identity.
pub(crate) fn principal_form(d: i64) -> Result<QuadForm> {
    let b0 = d.rem_euclid(2);
    let c = ((b0 as i128) * (b0 as i128) - d as i128) / 4;
    QuadForm::new(
        1,
        b0,
        i64::try_from(c).map_err(|_| Error::Validation("principal form: coefficient exceeds the 64-bit range".into()))?,
    )
}

/// Finite presentation of a form class group: canonical representatives, the
/// full composition table, and the subgroup of squares. `narrow` selects
/// proper-equivalence classes for D > 0; for D < 0 the two notions coincide
/// and the flag only records the request.
#[derive(Debug, Clone)]
pub struct ClassGroupTable {
    discriminant: i64,
    narrow: bool,
    representatives: Vec<QuadForm>,
    cayley: Vec<usize>,
    index_of: HashMap<QuadForm, usize>,
    identity: usize,
    squares: Vec<usize>,
}

impl ClassGroupTable {
    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn narrow(&self) -> bool {
        self.narrow
    }

    /// Class number: the order of the group.
    pub fn h(&self) -> usize {
        self.representatives.len()
    }

    /// One reduced representative per class, canonically sorted.
    pub fn representatives(&self) -> &[QuadForm] {
        &self.representatives
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Sorted indices of the subgroup {A² : A in the group}.
    pub fn squares_subgroup(&self) -> &[usize] {
        &self.squares
    }

    /// Composition on class indices.
    pub fn compose(&self, i: usize, j: usize) -> Result<usize> {
        let h = self.h();
        if i >= h || j >= h {
            return Err(Error::Validation(format!("compose: index out of range ({i}, {j}) with h = {h}")));
        }
        Ok(self.cayley[i * h + j])
    }

    pub fn inverse(&self, i: usize) -> Result<usize> {
        let h = self.h();
        if i >= h {
            return Err(Error::Validation(format!("inverse: index {i} out of range, h = {h}")));
        }
        let f = &self.representatives[i];
        // the opposite form lies in the inverse class
        self.class_index(&QuadForm::new(f.a(), -f.b(), f.c())?)
    }

    /// Index of the class containing f.
    pub fn class_index(&self, f: &QuadForm) -> Result<usize> {
        if f.disc() != self.discriminant {
            return Err(Error::Validation(format!(
                "class_index: discriminant {} does not match the table's {}",
                f.disc(),
                self.discriminant
            )));
        }
        if !f.is_primitive() {
            return Err(Error::Validation(format!("class_index: {f} is imprimitive")));
        }
        let r = f.reduce()?;
        self.index_of.get(&r).copied().ok_or_else(|| {
            Error::Tolerance(format!("class_index: reduced form {r} missing from the table (D = {})", self.discriminant))
        })
    }

    fn build(discriminant: i64, narrow: bool, classes: Vec<Vec<QuadForm>>) -> Result<Self> {
        // representative: the (a, b, c)-least member with a > 0
        let mut reps: Vec<QuadForm> = classes
            .iter()
            .map(|cl| *cl.iter().filter(|f| f.a() > 0).min_by_key(|f| (f.a(), f.b(), f.c())).expect("every class holds a form with a > 0"))
            .collect();
        let mut order: Vec<usize> = (0..reps.len()).collect();
        order.sort_by_key(|&i| (reps[i].a(), -reps[i].b(), reps[i].c()));
        let classes: Vec<Vec<QuadForm>> = order.iter().map(|&i| classes[i].clone()).collect();
        reps = order.iter().map(|&i| reps[i]).collect();

        let mut index_of = HashMap::new();
        for (i, cl) in classes.iter().enumerate() {
            for f in cl {
                index_of.insert(*f, i);
            }
        }
        let h = reps.len();
        let mut table = ClassGroupTable {
            discriminant,
            narrow,
            representatives: reps,
            cayley: vec![0; h * h],
            index_of,
            identity: 0,
            squares: Vec::new(),
        };
        let principal = principal_form(discriminant)?.reduce()?;
        table.identity = *table
            .index_of
            .get(&principal)
            .ok_or_else(|| Error::Tolerance(format!("class table: principal class missing (D = {discriminant})")))?;
        for i in 0..h {
            for j in i..h {
                let composite = compose_forms(&table.representatives[i], &table.representatives[j])?;
                let k = *table.index_of.get(&composite).ok_or_else(|| {
                    Error::Tolerance(format!("class table: composite {composite} missing (D = {discriminant})"))
                })?;
                table.cayley[i * h + j] = k;
                table.cayley[j * h + i] = k;
            }
        }
        let mut squares: Vec<usize> = (0..h).map(|i| table.cayley[i * h + i]).collect();
        squares.sort_unstable();
        squares.dedup();
        table.squares = squares;
        Ok(table)
    }
}

/// The class group of the fundamental discriminant d. For d > 0, `narrow`
/// chooses between proper-equivalence classes (narrow) and their quotient by
/// the class of the negated principal form (wide); h⁺ = 2h exactly when that
/// class is nontrivial, equivalently when the fundamental unit has norm +1.
pub fn class_group(d: i64, narrow: bool) -> Result<ClassGroupTable> {
    if d == 1 || !is_fundamental_discriminant(d) {
        return Err(Error::Validation(format!("class_group: {d} is not a fundamental discriminant (or is 1)")));
    }
    if d < 0 {
        let classes: Vec<Vec<QuadForm>> = enumerate_reduced(d)?.into_iter().map(|f| vec![f]).collect();
        return ClassGroupTable::build(d, narrow, classes);
    }
    let table = ClassGroupTable::build(d, true, reduced_cycles(d)?)?;
    if narrow {
        return Ok(table);
    }
    // quotient by J = [−principal]: J = identity exactly when a unit of
    // negative norm exists, and then wide = narrow
    let b0 = d.rem_euclid(2);
    let neg_principal = QuadForm::new(-1, -b0, (d - b0 * b0) / 4)?;
    let j = table.class_index(&neg_principal)?;
    if j == table.identity {
        let mut wide = table;
        wide.narrow = false;
        return Ok(wide);
    }
    let h = table.h();
    let mut members: Vec<Vec<QuadForm>> = vec![Vec::new(); h];
    for (f, &i) in &table.index_of {
        members[i].push(*f);
    }
    let mut wide_of_narrow = vec![usize::MAX; h];
    let mut merged: Vec<Vec<QuadForm>> = Vec::new();
    for i in 0..h {
        if wide_of_narrow[i] != usize::MAX {
            continue;
        }
        let k = table.cayley[i * h + j];
        debug_assert_ne!(k, i, "J has order two and acts freely");
        wide_of_narrow[i] = merged.len();
        wide_of_narrow[k] = merged.len();
        let mut class = members[i].clone();
        class.extend(members[k].iter().copied());
        merged.push(class);
    }
    ClassGroupTable::build(d, false, merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_minus_23_is_cyclic_of_order_three() {
        let t = class_group(-23, false).unwrap();
        assert_eq!(t.h(), 3);
        let e = t.identity();
        assert_eq!(t.representatives()[e], QuadForm::new(1, 1, 6).unwrap());
        let g = t.class_index(&QuadForm::new(2, 1, 3).unwrap()).unwrap();
        let g2 = t.compose(g, g).unwrap();
        assert_eq!(t.representatives()[g2], QuadForm::new(2, -1, 3).unwrap(), "the square of (2,1,3) is its opposite");
        assert_eq!(t.compose(g, g2).unwrap(), e, "order three");
        assert_eq!(t.inverse(g).unwrap(), g2);
    }

    #[test]
    fn disc_minus_84_is_klein_four() {
        let t = class_group(-84, false).unwrap();
        assert_eq!(t.h(), 4);
        for i in 0..4 {
            assert_eq!(t.compose(i, i).unwrap(), t.identity(), "every class squares to the identity");
        }
        assert_eq!(t.squares_subgroup(), &[t.identity()]);
    }

    #[test]
    fn disc_twelve_narrow_two_wide_one() {
        let narrow = class_group(12, true).unwrap();
        assert_eq!(narrow.h(), 2);
        let wide = class_group(12, false).unwrap();
        assert_eq!(wide.h(), 1);
        assert!(!wide.narrow());
    }

    #[test]
    fn disc_five_and_eight_have_matching_narrow_and_wide_groups() {
        // norm −1 exists for both, so the negated principal class is trivial
        for d in [5, 8] {
            assert_eq!(class_group(d, true).unwrap().h(), 1, "D = {d}");
            assert_eq!(class_group(d, false).unwrap().h(), 1, "D = {d}");
        }
    }

    #[test]
    fn composition_is_independent_of_representatives() {
        let t = class_group(-47, false).unwrap();
        let gammas = [[[1, 2], [0, 1]], [[1, 0], [2, 1]], [[3, 1], [2, 1]]];
        for f in t.representatives() {
            for g in gammas {
                let scrambled = transform(f, g).unwrap();
                assert_eq!(t.class_index(&scrambled).unwrap(), t.class_index(f).unwrap());
            }
        }
    }

    #[test]
    fn group_axioms_hold_exhaustively_for_small_discriminants() {
        let mut checked = 0;
        for d in [-3i64, -4, -23, -47, -84, -120, -163, -231, 5, 8, 12, 13, 40, 60, 229, 316] {
            for narrow in [false, true] {
                let t = class_group(d, narrow).unwrap();
                let h = t.h();
                let e = t.identity();
                for i in 0..h {
                    assert_eq!(t.compose(e, i).unwrap(), i, "identity, D = {d}");
                    let inv = t.inverse(i).unwrap();
                    assert_eq!(t.compose(i, inv).unwrap(), e, "inverses, D = {d}");
                    for j in 0..h {
                        assert_eq!(t.compose(i, j).unwrap(), t.compose(j, i).unwrap(), "commutativity, D = {d}");
                        for k in 0..h {
                            let left = t.compose(t.compose(i, j).unwrap(), k).unwrap();
                            let right = t.compose(i, t.compose(j, k).unwrap()).unwrap();
                            assert_eq!(left, right, "associativity, D = {d}");
                        }
                    }
                }
                checked += 1;
            }
        }
        assert_eq!(checked, 32);
    }

    #[test]
    fn narrow_to_wide_ratio_matches_the_pell_norm() {
        for d in [5i64, 8, 12, 13, 17, 21, 24, 28, 29, 33, 40, 44, 56, 60, 65, 76, 85, 88, 92, 97] {
            let hplus = class_group(d, true).unwrap().h();
            let hwide = class_group(d, false).unwrap().h();
            let norm = super::super::pell_unit(d).unwrap().norm_of_fundamental_unit();
            if norm == -1 {
                assert_eq!(hplus, hwide, "D = {d}");
            } else {
                assert_eq!(hplus, 2 * hwide, "D = {d}");
            }
        }
    }

    #[test]
    fn squares_index_is_the_genus_count() {
        // [group : squares] = 2^(ω−1) with ω the number of prime divisors
        // of |D|, for narrow tables of fundamental discriminants
        for (d, omega) in [(-4i64, 1u32), (-23, 1), (-84, 3), (-120, 3), (-420, 4), (5, 1), (40, 2), (60, 3), (105, 3)] {
            let t = class_group(d, true).unwrap();
            assert_eq!(
                t.h() / t.squares_subgroup().len(),
                1 << (omega - 1),
                "D = {d}: h = {}, squares = {}",
                t.h(),
                t.squares_subgroup().len()
            );
        }
    }

    #[test]
    fn rejects_non_fundamental_discriminants() {
        for d in [9i64, -12, 0, 1, 18, -27] {
            assert!(class_group(d, false).is_err(), "D = {d}");
        }
    }
}
