//! The analytic class number formula as a cross-check: the algebraic side
//! (reduced-form counts, Pell units) against the analytic side (L(1, χ_D)).

use std::f64::consts::PI;

use super::forms::{enumerate_reduced, reduced_cycles};
use super::surd::log_epsilon_plus;
use crate::specfun::{dirichlet_l_at_1, is_fundamental_discriminant};
use crate::{Error, Result};

/// Outcome of the comparison for one discriminant. For D > 0 the counted
/// number is the narrow one, h⁺, matched against √D·L(1,χ_D)/log ε⁺; for
/// D < 0 it is h, matched against w·√|D|·L(1,χ_D)/(2π) with w = 6, 4, 2 for
/// D = −3, −4, and everything else.
#[derive(Debug, Clone, Copy)]
pub struct ClassNumberCheck {
    pub discriminant: i64,
    pub narrow_class_number: usize,
    pub analytic: f64,
    pub difference: f64,
}

const DISC_BOUND: u64 = 1_000_000;

pub fn class_number_formula_check(d: i64) -> Result<ClassNumberCheck> {
    if d == 1 || !is_fundamental_discriminant(d) {
        return Err(Error::Validation(format!("class number check: {d} is not a fundamental discriminant (or is 1)")));
    }
    if d.unsigned_abs() > DISC_BOUND {
        return Err(Error::Validation(format!("class number check: |D| = {} exceeds the bound {DISC_BOUND}", d.unsigned_abs())));
    }
    let l_value = dirichlet_l_at_1(d)?;
    let (h, analytic) = if d < 0 {
        let h = enumerate_reduced(d)?.len();
        let w = match d {
            -3 => 6.0,
            -4 => 4.0,
            _ => 2.0,
        };
        (h, w * ((-d) as f64).sqrt() * l_value / (2.0 * PI))
    } else {
        let h_plus = reduced_cycles(d)?.len();
        (h_plus, (d as f64).sqrt() * l_value / log_epsilon_plus(d)?)
    };
    Ok(ClassNumberCheck { discriminant: d, narrow_class_number: h, analytic, difference: analytic - h as f64 })
}
