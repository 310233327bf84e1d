use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie_core::su2_matrices;

const SU2_TOL: f64 = 1e-12;
const SO3_TOL: f64 = 1e-10;

/// `[[α, β], [−β̄, ᾱ]]` with `|α|² + |β|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSu2", into = "RawSu2")]
pub struct SU2Element {
    alpha: Complex64,
    beta: Complex64,
}

#[derive(Serialize, Deserialize)]
struct RawSu2 {
    alpha: [f64; 2],
    beta: [f64; 2],
}

impl TryFrom<RawSu2> for SU2Element {
    type Error = Error;
    fn try_from(r: RawSu2) -> Result<Self> {
        SU2Element::new(
            Complex64::new(r.alpha[0], r.alpha[1]),
            Complex64::new(r.beta[0], r.beta[1]),
        )
    }
}

impl From<SU2Element> for RawSu2 {
    fn from(g: SU2Element) -> Self {
        RawSu2 {
            alpha: [g.alpha.re, g.alpha.im],
            beta: [g.beta.re, g.beta.im],
        }
    }
}

impl SU2Element {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let n = alpha.norm_sqr() + beta.norm_sqr();
        if !n.is_finite() || (n - 1.0).abs() > SU2_TOL {
            return Err(Error::Input(format!("|alpha|^2 + |beta|^2 = {n}, expected 1")));
        }
        Ok(Self { alpha, beta })
    }

    /// Projects onto the group; for inputs already within rounding of it.
    pub(crate) fn normalized(alpha: Complex64, beta: Complex64) -> Self {
        let s = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        Self {
            alpha: alpha / s,
            beta: beta / s,
        }
    }

    pub fn identity() -> Self {
        Self {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.alpha, self.beta, -self.beta.conj(), self.alpha.conj())
    }

    fn from_matrix(m: &Matrix2<Complex64>) -> Self {
        Self::normalized(m[(0, 0)], m[(0, 1)])
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_matrix(&(self.matrix() * o.matrix()))
    }

    pub fn inverse(&self) -> Self {
        Self {
            alpha: self.alpha.conj(),
            beta: -self.beta,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            alpha: -self.alpha,
            beta: -self.beta,
        }
    }

    /// Distance of `|α|² + |β|²` from one.
    pub fn drift(&self) -> f64 {
        (self.alpha.norm_sqr() + self.beta.norm_sqr() - 1.0).abs()
    }

    /// `exp(a p_1 + b p_2 + c k)`.
    pub fn exp(v: [f64; 3]) -> Self {
        let [p1, p2, k] = su2_matrices();
        let m: Matrix2<Complex64> =
            Matrix2::from_fn(|r, c| p1[(r, c)] * v[0] + p2[(r, c)] * v[1] + k[(r, c)] * v[2]);
        // m² = −(|v|/2)² I
        let theta = 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let sinc = if theta < 1e-8 {
            1.0 - theta * theta / 6.0
        } else {
            theta.sin() / theta
        };
        let e = Matrix2::identity() * Complex64::new(theta.cos(), 0.0) + m * Complex64::new(sinc, 0.0);
        Self::from_matrix(&e)
    }

    /// `Ad(g)` in the basis `(p_1, p_2, k)`: the covering map onto SO(3).
    pub fn ad_cover(&self) -> SO3Element {
        let basis = su2_matrices();
        let g = self.matrix();
        let gi = self.inverse().matrix();
        let basis: Vec<Matrix2<Complex64>> =
            basis.iter().map(|b| Matrix2::from_fn(|r, c| b[(r, c)])).collect();
        // coordinates via tr(p_i p_j) = −δ_ij / 2
        let m = Matrix3::from_fn(|i, j| {
            let conj = g * basis[j] * gi;
            -2.0 * (conj * basis[i]).trace().re
        });
        SO3Element::from_matrix_unchecked(m)
    }
}

/// A rotation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSo3", into = "RawSo3")]
pub struct SO3Element {
    m: Matrix3<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSo3 {
    matrix: [[f64; 3]; 3],
}

impl TryFrom<RawSo3> for SO3Element {
    type Error = Error;
    fn try_from(r: RawSo3) -> Result<Self> {
        SO3Element::new(Matrix3::from_fn(|i, j| r.matrix[i][j]))
    }
}

impl From<SO3Element> for RawSo3 {
    fn from(g: SO3Element) -> Self {
        let mut matrix = [[0.0; 3]; 3];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = g.m[(i, j)];
            }
        }
        RawSo3 { matrix }
    }
}

impl SO3Element {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let orth = (m.transpose() * m - Matrix3::identity()).abs().max();
        let det = m.determinant();
        if !(orth <= SO3_TOL) || !((det - 1.0).abs() <= SO3_TOL) {
            return Err(Error::Input(format!(
                "not a rotation: |AᵀA − I| = {orth:e}, det = {det}"
            )));
        }
        Ok(Self { m })
    }

    fn from_matrix_unchecked(m: Matrix3<f64>) -> Self {
        Self { m }.reorthonormalized()
    }

    pub fn identity() -> Self {
        Self {
            m: Matrix3::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// Polar projection onto SO(3) (one Newton step suffices near the group).
    fn reorthonormalized(self) -> Self {
        let m = self.m;
        let inv_t = m.try_inverse().map(|i| i.transpose()).unwrap_or(m);
        Self { m: 0.5 * (m + inv_t) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self { m: self.m * o.m }.reorthonormalized()
    }

    pub fn inverse(&self) -> Self {
        Self {
            m: self.m.transpose(),
        }
    }

    pub fn drift(&self) -> f64 {
        let orth = (self.m.transpose() * self.m - Matrix3::identity()).abs().max();
        orth.max((self.m.determinant() - 1.0).abs())
    }

    /// `exp(a p_1 + b p_2 + c k)`; the basis matrices are the cross-product
    /// matrices, so this is Rodrigues' formula about `(a, b, c)`.
    pub fn exp(v: [f64; 3]) -> Self {
        let w = Vector3::new(v[0], v[1], v[2]);
        let theta = w.norm();
        let k = w.cross_matrix();
        let (a, b) = if theta < 1e-6 {
            (1.0 - theta * theta / 6.0, 0.5 - theta * theta / 24.0)
        } else {
            (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
        };
        Self::from_matrix_unchecked(Matrix3::identity() + k * a + k * k * b)
    }

    /// Rotation vector `v` with `exp(v) = self`, `|v| ≤ π`.
    pub fn log(&self) -> [f64; 3] {
        let m = &self.m;
        let cos = ((m.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
        let skew = Vector3::new(
            m[(2, 1)] - m[(1, 2)],
            m[(0, 2)] - m[(2, 0)],
            m[(1, 0)] - m[(0, 1)],
        );
        // atan2 keeps full accuracy near 0 and π where acos does not
        let theta = (0.5 * skew.norm()).atan2(cos);
        if theta < 1e-6 {
            let v = skew * 0.5;
            return [v[0], v[1], v[2]];
        }
        if theta < std::f64::consts::PI - 1e-4 {
            let v = skew * (theta / (2.0 * theta.sin()));
            return [v[0], v[1], v[2]];
        }
        // near π: axis from the symmetric part
        let s = (m + m.transpose()) * 0.5 - Matrix3::identity() * cos;
        let col = (0..3)
            .max_by(|&a, &b| s[(a, a)].total_cmp(&s[(b, b)]))
            .unwrap_or(0);
        let mut axis: Vector3<f64> = s.column(col).into();
        axis /= axis.norm();
        if axis.dot(&skew) < 0.0 {
            axis = -axis;
        }
        let v = axis * theta;
        [v[0], v[1], v[2]]
    }

    /// One of the two preimages under [`SU2Element::ad_cover`].
    pub fn lift(&self) -> SU2Element {
        SU2Element::exp(self.log())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_k_is_diagonal() {
        let g = SU2Element::exp([0.0, 0.0, 0.7]);
        assert!((g.alpha() - Complex64::from_polar(1.0, 0.35)).norm() < 1e-15);
        assert!(g.beta().norm() < 1e-15);
    }

    #[test]
    fn ad_of_k_rotates_third_axis() {
        let t = 0.9;
        let r = SU2Element::exp([0.0, 0.0, t]).ad_cover();
        let expect = Matrix3::new(t.cos(), -t.sin(), 0.0, t.sin(), t.cos(), 0.0, 0.0, 0.0, 1.0);
        assert!((r.matrix() - expect).abs().max() < 1e-14);
    }

    #[test]
    fn lift_inverts_cover() {
        for v in [
            [0.3, -1.2, 0.4],
            [3.0, 0.1, 0.2],
            [0.0, 0.0, std::f64::consts::PI - 1e-9],
        ] {
            let r = SO3Element::exp(v);
            let back = r.lift().ad_cover();
            assert!((back.matrix() - r.matrix()).abs().max() < 1e-9, "{v:?}");
        }
    }
}
