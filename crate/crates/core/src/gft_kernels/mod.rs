//! Heat kernels of the five groups from their Fourier-side spectral data.
//!
//! Each evaluator sums `Σ_λ dP(λ) Tr(e^{tΔ̂_λ} 𝔛^λ(g))` in the eigenbasis of
//! `Δ̂_λ`, so only diagonal matrix elements are needed. The evaluators that
//! are expensive to set up ([`Su2HeatKernel`], [`So3HeatKernel`],
//! [`Se2HeatKernel`]) are structs meant to be built once per `(t, policy)`
//! and reused across many points.

mod h2;
mod se2;
mod sl2;
mod so3;
mod su2;

use serde::Serialize;

pub use h2::{h2_kernel, h2_kernel_gaveau};
pub use se2::{se2_lambda_integrand, se2_matrix_element, Se2HeatKernel};
pub use sl2::{
    sl2_continuous_entry, sl2_continuous_matrix_element, sl2_discrete_contour_element,
    sl2_discrete_matrix_element, sl2_kernel, HalfInteger, SL2_CONTOUR_RADIUS,
};
pub use so3::{so3_kernel, so3_sphere_element, So3HeatKernel, So3Method};
pub use su2::{su2_kernel, su2_matrix_element, Su2HeatKernel};

use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupTag};
use crate::policy::TruncationPolicy;

/// A kernel value with its bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelResult {
    pub value: f64,
    /// Size of the imaginary part left after summation; zero in exact
    /// arithmetic.
    pub imag_residual: f64,
    /// Bound or estimate of everything the truncation left out.
    pub tail_estimate: f64,
    pub policy_used: TruncationPolicy,
}

pub fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("time must be positive and finite, got {t}")))
    }
}

/// `p_t(g)` for any of the five groups; `tag` must match the element.
pub fn kernel(tag: GroupTag, g: &GroupElement, t: f64, policy: &TruncationPolicy) -> Result<KernelResult> {
    if g.tag() != tag {
        return Err(Error::Input(format!(
            "element belongs to {} but the {} kernel was requested",
            g.tag(),
            tag
        )));
    }
    match g {
        GroupElement::H2(h) => h2_kernel(h, t, policy),
        GroupElement::SU2(h) => su2_kernel(h, t, policy),
        GroupElement::SO3(h) => so3_kernel(h, t, policy, So3Method::Covering),
        GroupElement::SL2(h) => sl2_kernel(h, t, policy),
        GroupElement::SE2(h) => se2_kernel(h, t, policy),
    }
}

/// Same as [`kernel`] with the tag given by name.
pub fn kernel_by_name(
    name: &str,
    g: &GroupElement,
    t: f64,
    policy: &TruncationPolicy,
) -> Result<KernelResult> {
    let tag: GroupTag = name.parse()?;
    kernel(tag, g, t, policy)
}

/// A kernel prepared once for `(group, t, policy)` and evaluated at many
/// points. `extent` bounds `|x|` of the SE(2) points to come and is
/// ignored by the other groups.
#[derive(Debug)]
pub enum KernelEvaluator {
    H2 { t: f64, policy: TruncationPolicy },
    SU2(Su2HeatKernel),
    SO3(So3HeatKernel),
    SL2 { t: f64, policy: TruncationPolicy },
    SE2(Se2HeatKernel),
}

impl KernelEvaluator {
    pub fn new(tag: GroupTag, t: f64, policy: &TruncationPolicy, extent: f64) -> Result<Self> {
        check_time(t)?;
        policy.validate()?;
        Ok(match tag {
            GroupTag::H2 => KernelEvaluator::H2 {
                t,
                policy: policy.clone(),
            },
            GroupTag::SU2 => KernelEvaluator::SU2(Su2HeatKernel::new(t, policy)?),
            GroupTag::SO3 => KernelEvaluator::SO3(So3HeatKernel::new(t, policy, So3Method::Covering)?),
            GroupTag::SL2 => KernelEvaluator::SL2 {
                t,
                policy: policy.clone(),
            },
            GroupTag::SE2 => KernelEvaluator::SE2(Se2HeatKernel::new(t, policy, extent)?),
        })
    }

    pub fn tag(&self) -> GroupTag {
        match self {
            KernelEvaluator::H2 { .. } => GroupTag::H2,
            KernelEvaluator::SU2(_) => GroupTag::SU2,
            KernelEvaluator::SO3(_) => GroupTag::SO3,
            KernelEvaluator::SL2 { .. } => GroupTag::SL2,
            KernelEvaluator::SE2(_) => GroupTag::SE2,
        }
    }

    pub fn eval(&self, g: &GroupElement) -> Result<KernelResult> {
        match (self, g) {
            (KernelEvaluator::H2 { t, policy }, GroupElement::H2(h)) => h2_kernel(h, *t, policy),
            (KernelEvaluator::SU2(k), GroupElement::SU2(h)) => Ok(k.eval(h)),
            (KernelEvaluator::SO3(k), GroupElement::SO3(h)) => Ok(k.eval(h)),
            (KernelEvaluator::SL2 { t, policy }, GroupElement::SL2(h)) => sl2_kernel(h, *t, policy),
            (KernelEvaluator::SE2(k), GroupElement::SE2(h)) => k.eval(h),
            _ => Err(Error::Input(format!(
                "element belongs to {} but the {} kernel was prepared",
                g.tag(),
                self.tag()
            ))),
        }
    }
}

/// SE(2) kernel at a single point.
pub fn se2_kernel(g: &crate::groups::SE2Element, t: f64, policy: &TruncationPolicy) -> Result<KernelResult> {
    let extent = g.x1().hypot(g.x2());
    Se2HeatKernel::new(t, policy, extent)?.eval(g)
}
