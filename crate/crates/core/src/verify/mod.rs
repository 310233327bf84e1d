//! Independent oracles and property checks: ladder-built generator
//! matrices, an explicit PDE solver for H₂, semigroup, mass, symmetry and
//! Plancherel residuals. Each check yields a [`ResidualReport`].

mod generator;
mod pde;
mod residual;

use serde::{Deserialize, Serialize};

pub use generator::{
    algebra_log, generator_spectrum, oracle_kernel_term, truncated_generator, DualParam, TruncatedGenerator,
};
pub use pde::{h2_pde_max_step, h2_pde_oracle, Axis, PdeGrid};
pub use residual::{
    covering_report, eigenvalue_reports, gaveau_report, h2_pde_report, mass_residual,
    plancherel_isometry_check, positivity_report, se2_eigen_report, se2_oracle_report, semigroup_residual,
    su2_rep_matrix, symmetry_report,
};

use crate::error::Result;
use crate::groups::{GroupElement, GroupTag, SE2Element, SU2Element};
use crate::policy::TruncationPolicy;

/// Where a residual came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportContext {
    pub group: Option<String>,
    pub t: Option<f64>,
    pub note: String,
}

/// One named check: `passed ⇔ value ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub context: ReportContext,
}

impl ResidualReport {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64, context: ReportContext) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            // NaN never passes
            passed: value <= tolerance,
            context,
        }
    }

    /// Same report judged against another tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = self.value <= tolerance;
        self
    }
}

/// Fixed sample points, reproducible without an RNG.
pub fn sample_points(tag: GroupTag, count: usize) -> Vec<GroupElement> {
    (0..count)
        .map(|i| {
            let s = i as f64 + 1.0;
            let v = [
                0.9 * (1.3 * s).sin(),
                0.8 * (2.1 * s + 0.4).cos(),
                0.7 * (0.7 * s + 1.1).sin(),
            ];
            tag.exp(v)
        })
        .collect()
}

/// The quick suite behind `hypoheat verify`: every family of check at a
/// size that runs in well under a minute on one core.
pub fn run_suite(policy: &TruncationPolicy) -> Result<Vec<ResidualReport>> {
    let mut out = eigenvalue_reports(30, 20, 5, 31)?;
    out.push(se2_eigen_report(&[0.5, 2.0, 7.5, 20.0], 12, 96)?);
    let g = SE2Element::new(0.6, 0.4, -0.3)?;
    out.push(se2_oracle_report(
        &[(2.0, 0.5, SE2Element::identity()), (4.0, 0.3, g)],
        64,
        policy,
    )?);
    let samples: Vec<(SU2Element, f64)> = (0..4)
        .map(|i| {
            let s = i as f64;
            (SU2Element::exp([0.5 + s, -0.3 * s, 1.0 - 0.2 * s]), 0.3 + 0.4 * s)
        })
        .collect();
    out.push(covering_report(&samples, policy)?);
    out.push(gaveau_report(
        &[([0.3, -0.4, 0.9], 0.8), ([1.0, 0.2, -2.0], 0.4)],
        policy,
    )?);
    let compact = policy.clone().with_quad_nodes(40);
    out.push(mass_residual(GroupTag::SU2, 1.0, &compact)?);
    out.push(mass_residual(GroupTag::SO3, 1.0, &compact)?);
    out.push(mass_residual(GroupTag::H2, 0.5, policy)?);
    for tag in [GroupTag::H2, GroupTag::SU2, GroupTag::SO3] {
        out.push(symmetry_report(tag, 0.7, &sample_points(tag, 3), policy)?);
    }
    let mut coeffs = Vec::new();
    for n in 0..=3usize {
        coeffs.push(nalgebra::DMatrix::from_fn(n + 1, n + 1, |r, c| {
            num_complex::Complex64::new(((r * 7 + c * 3 + n) as f64).sin(), ((r + 2 * c + n) as f64).cos())
                * 0.3
        }));
    }
    out.push(plancherel_isometry_check(&coeffs, 8)?);
    Ok(out)
}
