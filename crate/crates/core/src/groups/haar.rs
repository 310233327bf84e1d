use std::f64::consts::PI;

use num_complex::Complex64;

use super::{GroupElement, GroupTag, SE2Element, SU11Element, SU2Element};
use crate::error::{Error, Result};
use crate::policy::TruncationPolicy;
use crate::quadrature::{periodic_nodes, GaussLegendre};

/// Haar measure on SE(2) paired with `dP(λ) = λ dλ`: this constant times
/// `dα dx_1 dx_2`.
pub const SE2_HAAR_SCALE: f64 = 1.0 / (4.0 * PI * PI);

/// Haar measure on SL(2) paired with the stated Plancherel measures: this
/// constant times `sinh r cosh r dr dφ dψ` in the SU(1,1) polar chart
/// `α = cosh r e^{iφ}`, `β = sinh r e^{iψ}`, `φ, ψ ∈ [0, 2π)`.
pub const SL2_HAAR_SCALE: f64 = 2.0 / PI;

/// Nodes and weights approximating the Haar measure.
#[derive(Debug, Clone)]
pub struct HaarRule {
    pub nodes: Vec<GroupElement>,
    pub weights: Vec<f64>,
}

impl HaarRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, f64)> {
        self.nodes.iter().zip(self.weights.iter().cloned())
    }
}

/// Haar quadrature in the fixed normalisations: probability measure on
/// SU(2) and SO(3), `dx dy dz` on H₂, [`SE2_HAAR_SCALE`] and
/// [`SL2_HAAR_SCALE`] on the other two. Noncompact directions are cut to
/// the policy box.
pub fn haar_quadrature(tag: GroupTag, policy: &TruncationPolicy) -> Result<HaarRule> {
    policy.validate()?;
    let n = policy.quad_nodes;
    let boxed = || {
        policy
            .box_half_width
            .ok_or_else(|| Error::Input(format!("{tag} quadrature needs a box half-width in the policy")))
    };
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    match tag {
        GroupTag::SU2 | GroupTag::SO3 => {
            // |α|² = u is uniform on [0,1]; phases uniform
            let gl = GaussLegendre::new(n);
            let h = 2.0 * PI / n as f64;
            for (u, wu) in gl.on(0.0, 1.0) {
                for x1 in periodic_nodes(n) {
                    for x2 in periodic_nodes(n) {
                        let g = SU2Element::normalized(
                            Complex64::from_polar(u.sqrt(), x1),
                            Complex64::from_polar((1.0 - u).sqrt(), x2),
                        );
                        nodes.push(if tag == GroupTag::SU2 {
                            GroupElement::SU2(g)
                        } else {
                            GroupElement::SO3(g.ad_cover())
                        });
                        weights.push(wu * h * h / (4.0 * PI * PI));
                    }
                }
            }
        }
        GroupTag::H2 => {
            let l = boxed()?;
            let axis = GaussLegendre::new(n).composite(-l, l, policy.box_panels);
            for &(x, wx) in &axis {
                for &(y, wy) in &axis {
                    for &(z, wz) in &axis {
                        nodes.push(GroupElement::H2(super::H2Element { x, y, z }));
                        weights.push(wx * wy * wz);
                    }
                }
            }
        }
        GroupTag::SE2 => {
            let l = boxed()?;
            let axis = GaussLegendre::new(n).composite(-l, l, policy.box_panels);
            let h = 2.0 * PI / n as f64;
            for a in periodic_nodes(n) {
                for &(x1, w1) in &axis {
                    for &(x2, w2) in &axis {
                        nodes.push(GroupElement::SE2(SE2Element::new(a, x1, x2)?));
                        weights.push(SE2_HAAR_SCALE * h * w1 * w2);
                    }
                }
            }
        }
        GroupTag::SL2 => {
            let r_max = boxed()?;
            let radial = GaussLegendre::new(n).composite(0.0, r_max, policy.box_panels);
            let h = 2.0 * PI / n as f64;
            for &(r, wr) in &radial {
                let jac = r.sinh() * r.cosh();
                for phi in periodic_nodes(n) {
                    for psi in periodic_nodes(n) {
                        let g = SU11Element::from_polar(r, phi, psi);
                        nodes.push(GroupElement::SL2(g.to_sl2()));
                        weights.push(SL2_HAAR_SCALE * jac * wr * h * h);
                    }
                }
            }
        }
    }
    if nodes.is_empty() {
        return Err(Error::Input("empty quadrature".into()));
    }
    Ok(HaarRule { nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_total_weight_is_one() {
        let rule = haar_quadrature(GroupTag::SU2, &TruncationPolicy::default().with_quad_nodes(8)).unwrap();
        assert!((rule.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn h2_weight_is_box_volume() {
        let p = TruncationPolicy::default().with_quad_nodes(4).with_box(1.5);
        let rule = haar_quadrature(GroupTag::H2, &p).unwrap();
        assert!((rule.total_weight() - 27.0).abs() < 1e-11);
    }

    #[test]
    fn noncompact_needs_box() {
        assert!(haar_quadrature(GroupTag::SE2, &TruncationPolicy::default()).is_err());
    }
}
