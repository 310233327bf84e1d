use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::frame::{BracketWord, FramePointData};
use crate::error::{Error, Result};

/// Default step of the five-point stencil used for finite-difference jets.
pub const DEFAULT_FD_STEP: f64 = 2e-4;

/// A frame of vector fields on a coordinate chart, declared orthonormal.
pub trait FrameField: Send + Sync {
    fn coords_dim(&self) -> usize;

    fn frame_len(&self) -> usize;

    /// Components of the frame at `q`, one vector per field.
    fn frame(&self, q: &[f64]) -> Vec<Vec<f64>>;

    /// Iterated brackets at `q`. Canonical words only are needed.
    fn brackets(&self, q: &[f64]) -> BTreeMap<BracketWord, Vec<f64>>;

    fn point_data(&self, q: &[f64]) -> Result<FramePointData> {
        if q.len() != self.coords_dim() {
            return Err(Error::Dimension {
                expected: self.coords_dim(),
                got: q.len(),
            });
        }
        FramePointData::new(self.coords_dim(), self.frame(q), self.brackets(q))
    }
}

/// Popp density at a point together with what the Laplacian needs from a
/// neighbourhood: derivatives of the density along each frame field and the
/// coordinate divergence of each field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoppJet {
    pub density: f64,
    pub frame_derivatives: Vec<f64>,
    pub frame_divergence: Vec<f64>,
}

/// Coefficients `c_i` in `Δ = Σ X_i² + Σ c_i X_i`, where
/// `c_i = div X_i + X_i(log ρ)` is the divergence of `X_i` with respect to
/// the Popp volume `ρ dx`.
pub fn intrinsic_laplacian_coeffs_at_point(data: &FramePointData, jet: &PoppJet) -> Result<Vec<f64>> {
    let m = data.frame().len();
    for v in [&jet.frame_derivatives, &jet.frame_divergence] {
        if v.len() != m {
            return Err(Error::Dimension {
                expected: m,
                got: v.len(),
            });
        }
    }
    // the point must be regular for the density to mean anything
    let rho = data.popp_density()?;
    if !(jet.density > 0.0) {
        return Err(Error::Input("jet density must be positive".into()));
    }
    if (jet.density - rho).abs() > 1e-6 * rho {
        return Err(Error::Input(format!(
            "jet density {} disagrees with the frame data ({rho})",
            jet.density
        )));
    }
    Ok((0..m)
        .map(|i| jet.frame_divergence[i] + jet.frame_derivatives[i] / jet.density)
        .collect())
}

fn five_point(f: impl Fn(f64) -> Result<f64>, h: f64) -> Result<f64> {
    let (m2, m1, p1, p2) = (f(-2.0 * h)?, f(-h)?, f(h)?, f(2.0 * h)?);
    Ok((m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h))
}

/// Finite-difference Popp jet with a five-point stencil of step `h`.
///
/// Every stencil point must carry the same growth vector as `q`; otherwise
/// the density is not smooth there and a singular-point error is returned.
pub fn popp_jet_fd(field: &dyn FrameField, q: &[f64], h: f64) -> Result<PoppJet> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Input(format!(
            "finite-difference step must be > 0, got {h}"
        )));
    }
    let n = field.coords_dim();
    let data = field.point_data(q)?;
    let growth = data.growth_vector().map_err(|e| singular(0, e))?;
    let density = data.popp_density()?;
    let frame = data.frame().to_vec();
    let shifted = |dir: &[f64], s: f64| -> Vec<f64> { q.iter().zip(dir).map(|(a, d)| a + s * d).collect() };
    let density_at = |p: &[f64]| -> Result<f64> {
        let d = field.point_data(p)?;
        let g = d.growth_vector().map_err(|e| singular(growth.len(), e))?;
        if g != growth {
            return Err(Error::SingularPoint {
                step: growth.len(),
                detail: format!("growth vector changes near the point ({growth:?} vs {g:?})"),
            });
        }
        d.popp_density()
    };
    let mut frame_derivatives = Vec::with_capacity(frame.len());
    for x in &frame {
        frame_derivatives.push(five_point(|s| density_at(&shifted(x, s)), h)?);
    }
    let mut frame_divergence = vec![0.0; frame.len()];
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        for (i, div) in frame_divergence.iter_mut().enumerate() {
            *div += five_point(|s| Ok(field.frame(&shifted(&e, s))[i][j]), h)?;
        }
    }
    Ok(PoppJet {
        density,
        frame_derivatives,
        frame_divergence,
    })
}

fn singular(step: usize, e: Error) -> Error {
    match e {
        Error::NotBracketGenerating { reached, dim, growth } => Error::SingularPoint {
            step: step.max(growth.len()),
            detail: format!("flag stops at dimension {reached} < {dim}"),
        },
        other => other,
    }
}

/// First-order coefficients of the intrinsic Laplacian of a frame field at
/// `q`, using a finite-difference jet.
pub fn laplacian_coeffs_fd(field: &dyn FrameField, q: &[f64], h: f64) -> Result<Vec<f64>> {
    let data = field.point_data(q)?;
    let jet = popp_jet_fd(field, q, h)?;
    intrinsic_laplacian_coeffs_at_point(&data, &jet)
}

fn words(entries: &[(&[usize], Vec<f64>)]) -> BTreeMap<BracketWord, Vec<f64>> {
    entries
        .iter()
        .map(|(w, v)| (BracketWord(w.to_vec()), v.clone()))
        .collect()
}

/// `L_1 = ∂x + (y²/2) ∂z`, `L_2 = ∂y` on ℝ³. Singular on `y = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MartinetFrame;

impl FrameField for MartinetFrame {
    fn coords_dim(&self) -> usize {
        3
    }
    fn frame_len(&self) -> usize {
        2
    }
    fn frame(&self, q: &[f64]) -> Vec<Vec<f64>> {
        vec![vec![1.0, 0.0, 0.5 * q[1] * q[1]], vec![0.0, 1.0, 0.0]]
    }
    fn brackets(&self, q: &[f64]) -> BTreeMap<BracketWord, Vec<f64>> {
        words(&[
            (&[0, 1], vec![0.0, 0.0, -q[1]]),
            (&[0, 0, 1], vec![0.0, 0.0, 0.0]),
            (&[1, 0, 1], vec![0.0, 0.0, -1.0]),
        ])
    }
}

/// `X_1 = ∂x`, `X_2 = x ∂y` on ℝ². Riemannian off `x = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GrushinFrame;

impl FrameField for GrushinFrame {
    fn coords_dim(&self) -> usize {
        2
    }
    fn frame_len(&self) -> usize {
        2
    }
    fn frame(&self, q: &[f64]) -> Vec<Vec<f64>> {
        vec![vec![1.0, 0.0], vec![0.0, q[0]]]
    }
    fn brackets(&self, _q: &[f64]) -> BTreeMap<BracketWord, Vec<f64>> {
        words(&[(&[0, 1], vec![0.0, 1.0])])
    }
}

/// Left-invariant frame of the Heisenberg group, `L_1 = ∂x − (y/2)∂z`,
/// `L_2 = ∂y + (x/2)∂z`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeisenbergFrame;

impl FrameField for HeisenbergFrame {
    fn coords_dim(&self) -> usize {
        3
    }
    fn frame_len(&self) -> usize {
        2
    }
    fn frame(&self, q: &[f64]) -> Vec<Vec<f64>> {
        vec![vec![1.0, 0.0, -0.5 * q[1]], vec![0.0, 1.0, 0.5 * q[0]]]
    }
    fn brackets(&self, _q: &[f64]) -> BTreeMap<BracketWord, Vec<f64>> {
        words(&[(&[0, 1], vec![0.0, 0.0, 1.0])])
    }
}

/// Left-invariant frame `X_0 = ∂α`, `X_1 = cos α ∂x_1 + sin α ∂x_2` of SE(2)
/// in coordinates `(α, x_1, x_2)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Se2Frame;

impl FrameField for Se2Frame {
    fn coords_dim(&self) -> usize {
        3
    }
    fn frame_len(&self) -> usize {
        2
    }
    fn frame(&self, q: &[f64]) -> Vec<Vec<f64>> {
        let (s, c) = q[0].sin_cos();
        vec![vec![1.0, 0.0, 0.0], vec![0.0, c, s]]
    }
    fn brackets(&self, q: &[f64]) -> BTreeMap<BracketWord, Vec<f64>> {
        let (s, c) = q[0].sin_cos();
        words(&[(&[0, 1], vec![0.0, -s, c])])
    }
}

/// Left-invariant frame of `A⁺(ℝ) ⊕ ℝ` in coordinates `(a, b, c)`, `a > 0`:
/// `X_1 = a ∂a`, `X_2 = a ∂b + ∂c`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AffPlusRFrame;

impl FrameField for AffPlusRFrame {
    fn coords_dim(&self) -> usize {
        3
    }
    fn frame_len(&self) -> usize {
        2
    }
    fn frame(&self, q: &[f64]) -> Vec<Vec<f64>> {
        vec![vec![q[0], 0.0, 0.0], vec![0.0, q[0], 1.0]]
    }
    fn brackets(&self, q: &[f64]) -> BTreeMap<BracketWord, Vec<f64>> {
        words(&[(&[0, 1], vec![0.0, q[0], 0.0])])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn martinet_coefficient() {
        for &(x, y, z) in &[(0.0, 2.0, 0.0), (1.0, -0.7, 3.0), (-2.0, 0.5, -1.0)] {
            let c = laplacian_coeffs_fd(&MartinetFrame, &[x, y, z], DEFAULT_FD_STEP).unwrap();
            assert!(c[0].abs() < 1e-10);
            assert!((c[1] + 1.0 / y).abs() < 1e-10, "{c:?}");
        }
    }

    #[test]
    fn martinet_growth_changes_on_singular_plane() {
        let d = MartinetFrame.point_data(&[0.3, 0.0, 1.0]).unwrap();
        assert_eq!(d.growth_vector().unwrap(), vec![2, 2, 3]);
        let d = MartinetFrame.point_data(&[0.3, 1.0, 1.0]).unwrap();
        assert_eq!(d.growth_vector().unwrap(), vec![2, 3]);
        assert!(matches!(
            laplacian_coeffs_fd(&MartinetFrame, &[0.3, 0.0, 1.0], DEFAULT_FD_STEP),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn grushin_density_and_coefficient() {
        let d = GrushinFrame.point_data(&[-0.8, 2.0]).unwrap();
        assert!((d.popp_density().unwrap() - 1.0 / 0.8).abs() < 1e-14);
        let c = laplacian_coeffs_fd(&GrushinFrame, &[-0.8, 2.0], DEFAULT_FD_STEP).unwrap();
        assert!((c[0] + 1.0 / -0.8).abs() < 1e-10);
        assert!(c[1].abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_step() {
        assert!(popp_jet_fd(&HeisenbergFrame, &[0.0; 3], 0.0).is_err());
    }
}
