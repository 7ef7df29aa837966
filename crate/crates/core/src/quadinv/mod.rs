//! Binary quadratic forms and the invariants of their class groups.
//!
//! Everything here is exact integer arithmetic until the final step of a
//! computation: form reduction and composition run over i64/i128, continued
//! fractions over surd states (P + √D)/Q, and Pell units over big integers.
//! Floating point appears only in the geometric objects handed to callers
//! (Heegner points, closed-geodesic samples) and in the analytic side of the
//! class number formula.
//!
//! The centerpiece is [`ClassGroupTable`], a fully materialised finite
//! abelian group on the reduced-form representatives of a fundamental
//! discriminant, in either the wide or the narrow sense. Genus characters,
//! minus continued fraction cycles, and the geometric attachments (CM points
//! for D < 0, closed geodesics for D > 0) all consume it by class index.

mod cnf;
mod compose;
mod forms;
mod genus;
mod geodesic;
mod surd;

pub use cnf::{class_number_formula_check, ClassNumberCheck};
pub use compose::{class_group, compose_forms, ClassGroupTable};
pub use forms::{enumerate_reduced, QuadForm};
pub use genus::{chi_eval, genus_characters, GenusChar};
pub use geodesic::{geodesic_of_form, heegner_point, GeodesicSegment};
pub use surd::{minus_cf_cycle, pell_unit, MinusCFCycle, PellUnit};

#[cfg(test)]
pub(crate) use compose::transform;
