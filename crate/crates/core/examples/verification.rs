//! Residual reports: eigenvalue reproduction, covering identity, mass and
//! symmetry checks. `run_suite` bundles a fast default set.
//!
//! cargo run --release --example verification

use hypoheat::groups::GroupTag;
use hypoheat::verify::{mass_residual, run_suite, sample_points, symmetry_report};
use hypoheat::{Result, TruncationPolicy};

fn main() -> Result<()> {
    let policy = TruncationPolicy::default();
    let mut reports = run_suite(&policy)?;
    // at t = 1, 40 nodes per axis keep the compact mass check under 1e-6
    reports.push(mass_residual(
        GroupTag::SO3,
        1.0,
        &policy.clone().with_quad_nodes(40),
    )?);
    reports.push(symmetry_report(
        GroupTag::SL2,
        0.6,
        &sample_points(GroupTag::SL2, 3),
        &policy,
    )?);
    for r in &reports {
        println!(
            "{} {:<26} {:>11.3e} (tol {:.0e})  {}",
            if r.passed { "ok  " } else { "FAIL" },
            r.name,
            r.value,
            r.tolerance,
            r.context.note
        );
    }
    Ok(())
}
