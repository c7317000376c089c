//! Continuity moduli of the exponential and realisability of scheduled
//! transitions.
//!
//! A rule sends a region to a target disk of centre `c` (`|c| >= 2`) via the
//! ideal map `z -> exp(w0)` with `w0 = log c` for `c > 0` and
//! `w0 = pi*i + log|c|` for `c < 0`. If an entire approximant `w` stays
//! within `eps` of `w0` then `|exp(w) - c| <= |c| (e^eps - 1)`, with equality
//! along the real direction, so the largest tolerance that keeps the image in
//! `{|z - c| < 1/2}` is `ln(1 + 1/(2|c|))`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{self, Region};
use crate::schedule::{ScheduleError, TransitionSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("target magnitude must be >= 2, got {0}")]
    Domain(f64),
    #[error("radius must be >= 0, got {0}")]
    NegativeRadius(f64),
    #[error("rule {from} -> {target} is not realisable: displayed centre {c} vs region centre {expected:?}")]
    Unrealizable { from: Region, target: Region, c: i64, expected: Option<i64> },
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// Signed target centre together with its logarithm on the branch used by
/// the construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogTarget {
    c: i64,
    #[serde(skip)]
    w0: Complex64,
}

impl LogTarget {
    pub fn new(c: i64) -> Result<Self, AnalyticError> {
        if c.unsigned_abs() < 2 {
            return Err(AnalyticError::Domain(c as f64));
        }
        let magnitude = (c.unsigned_abs() as f64).ln();
        let w0 = if c > 0 { Complex64::new(magnitude, 0.0) } else { Complex64::new(magnitude, PI) };
        Ok(Self { c, w0 })
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn w0(&self) -> Complex64 {
        self.w0
    }
}

/// Largest `r` with `|w - w0| < r  =>  |exp(w) - c| < 1/2`.
pub fn modulus_radius(c_abs: f64) -> Result<f64, AnalyticError> {
    if !(c_abs >= 2.0) {
        return Err(AnalyticError::Domain(c_abs));
    }
    Ok((0.5 / c_abs).ln_1p())
}

/// `sup_{|w - w0| <= r} |exp(w) - exp(w0)| = |c| (e^r - 1)`.
pub fn sup_image_deviation(c_abs: f64, r: f64) -> Result<f64, AnalyticError> {
    if !(c_abs >= 2.0) {
        return Err(AnalyticError::Domain(c_abs));
    }
    if !(r >= 0.0) {
        return Err(AnalyticError::NegativeRadius(r));
    }
    Ok(c_abs * r.exp_m1())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizabilityReport {
    pub source: Region,
    pub target: Region,
    pub c: i64,
    pub target_center: Option<i64>,
    /// The displayed centre equals the centre of the scheduled region.
    pub center_matches: bool,
    /// `{|z - c| < 1/2}` lies inside the target's unit disk with margin `1/2`.
    pub half_disk_inside: bool,
    pub tolerance_positive: bool,
    pub tolerance: f64,
}

impl RealizabilityReport {
    pub fn realizable(&self) -> bool {
        self.center_matches && self.half_disk_inside && self.tolerance_positive
    }
}

pub fn check_rule_realizability(source: Region, target: Region, lt: &LogTarget) -> RealizabilityReport {
    let target_center = match target.symbol() {
        t @ (Region::Base | Region::GDisk(_) | Region::BDisk(_)) => geometry::center(t).ok().map(|z| z.re),
        _ => None,
    };
    let center_matches = target_center == Some(lt.c);
    // In half units: 2*dist + 1 (image radius) + 1 (margin) <= 2 (unit disk).
    let half_disk_inside = target_center.is_some_and(|t| 2 * (lt.c - t).abs() + 2 <= 2);
    let tolerance = modulus_radius(lt.c.unsigned_abs() as f64).unwrap_or(0.0);
    RealizabilityReport {
        source,
        target,
        c: lt.c,
        target_center,
        center_matches,
        half_disk_inside,
        tolerance_positive: tolerance > 0.0,
        tolerance,
    }
}

/// Per-region tolerance `eps(R)` for the approximant of `log f`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ToleranceAssignment {
    pub spec: String,
    pub epsilon: BTreeMap<Region, f64>,
}

impl ToleranceAssignment {
    pub fn get(&self, r: Region) -> Option<f64> {
        self.epsilon.get(&r.symbol()).copied()
    }
}

/// Assigns the maximal admissible tolerance to every listed region, after
/// checking that the rule it falls under is realisable.
pub fn derive_tolerances(
    spec: &TransitionSpec,
    regions: impl IntoIterator<Item = Region>,
) -> Result<ToleranceAssignment, AnalyticError> {
    let mut epsilon = BTreeMap::new();
    for r in regions {
        let r = r.symbol();
        let (target, lt) = spec.log_target(r)?;
        let report = check_rule_realizability(r, target, &lt);
        if !report.realizable() {
            return Err(AnalyticError::Unrealizable { from: r, target, c: lt.c, expected: report.target_center });
        }
        epsilon.insert(r, report.tolerance);
    }
    Ok(ToleranceAssignment { spec: spec.name().to_string(), epsilon })
}
