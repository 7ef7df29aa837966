//! Experiment descriptions: what to measure, at which radius, how many
//! Monte-Carlo samples, and over which part of a class group.

use crate::geometry::BallSpec;
use crate::quadinv::ClassGroupTable;
use crate::{Error, Result};

/// What the experiment observes.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    /// The Eisenstein density |E(·, 1/2 + i t_g)|².
    Eisenstein { t_g: f64 },
    /// A cusp form from an external coefficient file; the path is recorded
    /// here, the parsed data travels separately.
    Maass { source: String },
    /// Heegner points of a fundamental discriminant D < 0.
    Heegner { discriminant: i64 },
    /// Closed geodesics of a fundamental discriminant D > 0.
    Geodesic { discriminant: i64 },
}

impl Target {
    /// The scale parameter the radius schedule shrinks against: t_g for
    /// Eisenstein targets, |D| for the quadratic ones. Maass targets carry
    /// no scale until their data is loaded.
    pub fn scale(&self) -> Option<f64> {
        match self {
            Target::Eisenstein { t_g } => Some(*t_g),
            Target::Maass { .. } => None,
            Target::Heegner { discriminant } | Target::Geodesic { discriminant } => {
                Some(discriminant.unsigned_abs() as f64)
            }
        }
    }
}

/// A fixed ball radius, or the shrinking schedule R = scale^{−δ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusSpec {
    Fixed(f64),
    Schedule { delta: f64 },
}

impl RadiusSpec {
    /// The concrete radius at a given scale (t_g or |D|).
    pub fn resolve(&self, scale: f64) -> Result<f64> {
        let r = match self {
            RadiusSpec::Fixed(r) => *r,
            RadiusSpec::Schedule { delta } => {
                if !(*delta > 0.0) || !delta.is_finite() {
                    return Err(Error::Validation(format!("radius schedule: need δ > 0, got {delta}")));
                }
                if !(scale > 1.0) {
                    return Err(Error::Validation(format!(
                        "radius schedule: scale^(-δ) needs scale > 1, got {scale}"
                    )));
                }
                scale.powf(-delta)
            }
        };
        if !(r > 0.0) || r > BallSpec::MAX_RADIUS {
            return Err(Error::Validation(format!(
                "radius {r} outside (0, {}]",
                BallSpec::MAX_RADIUS
            )));
        }
        Ok(r)
    }
}

/// Which classes of the group participate in a count, length, or sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenusSelector {
    All,
    /// The principal genus, the subgroup of squares.
    Principal,
    /// The genus (coset of the squares) containing the named class index.
    Coset(usize),
}

impl GenusSelector {
    /// Class indices selected from `table`, ascending.
    pub fn classes(&self, table: &ClassGroupTable) -> Result<Vec<usize>> {
        match self {
            GenusSelector::All => Ok((0..table.h()).collect()),
            GenusSelector::Principal => Ok(table.squares_subgroup().to_vec()),
            GenusSelector::Coset(rep) => {
                if *rep >= table.h() {
                    return Err(Error::Validation(format!(
                        "genus selector: class index {rep} out of range, h = {}",
                        table.h()
                    )));
                }
                let mut coset: Vec<usize> =
                    table.squares_subgroup().iter().map(|&s| table.compose(*rep, s)).collect();
                coset.sort_unstable();
                coset.dedup();
                Ok(coset)
            }
        }
    }
}

/// The centering subtracted from a ball average before squaring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centering {
    /// The target density's own mean, (1/vol) ∫ |g|² dμ; the right choice
    /// for square-integrable data.
    UniformDensity,
    /// The main-term constant D(g; w).
    DConstant,
    /// The radius-aware constant C(g; R; w), the Eisenstein default.
    CConstant,
}

impl std::fmt::Display for Centering {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Centering::UniformDensity => write!(f, "uniform-density"),
            Centering::DConstant => write!(f, "d-constant"),
            Centering::CConstant => write!(f, "c-constant"),
        }
    }
}

/// A reproducible experiment: target, radius, Monte-Carlo budget, RNG seed,
/// quadrature tolerance, class selection, and (optionally) a centering
/// override for the variance estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub target: Target,
    pub radius: RadiusSpec,
    pub samples: usize,
    pub seed: u64,
    pub quadrature_tol: f64,
    pub genus_selector: GenusSelector,
    pub centering: Option<Centering>,
}

pub(crate) const MIN_SAMPLES: usize = 100;

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return Err(Error::Validation(format!(
                "config: samples = {} below the minimum {MIN_SAMPLES}",
                self.samples
            )));
        }
        if !(self.quadrature_tol > 0.0) || self.quadrature_tol > 0.1 {
            return Err(Error::Validation(format!(
                "config: quadrature_tol {} outside (0, 0.1]",
                self.quadrature_tol
            )));
        }
        match self.target {
            Target::Eisenstein { t_g } => {
                if !(t_g > 0.0) || !t_g.is_finite() {
                    return Err(Error::Validation(format!("config: need t_g > 0, got {t_g}")));
                }
            }
            Target::Heegner { discriminant } if discriminant >= 0 => {
                return Err(Error::Validation(format!(
                    "config: heegner target needs D < 0, got {discriminant}"
                )));
            }
            Target::Geodesic { discriminant } if discriminant <= 0 => {
                return Err(Error::Validation(format!(
                    "config: geodesic target needs D > 0, got {discriminant}"
                )));
            }
            _ => {}
        }
        if let RadiusSpec::Fixed(_) = self.radius {
            self.radius.resolve(f64::NAN)?;
        }
        Ok(())
    }

    /// The concrete radius, resolving a schedule against the target's scale.
    pub fn radius_value(&self) -> Result<f64> {
        match (self.radius, self.target.scale()) {
            (RadiusSpec::Fixed(_), _) => self.radius.resolve(f64::NAN),
            (RadiusSpec::Schedule { .. }, Some(scale)) => self.radius.resolve(scale),
            (RadiusSpec::Schedule { .. }, None) => Err(Error::Validation(
                "config: a radius schedule for a cusp-form target resolves against t_f; \
                 resolve it explicitly once the data is loaded"
                    .into(),
            )),
        }
    }
}
