use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DET_TOL: f64 = 1e-12;

/// Real 2×2 matrix of determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSl2", into = "RawSl2")]
pub struct SL2Element {
    m: Matrix2<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSl2 {
    matrix: [[f64; 2]; 2],
}

impl TryFrom<RawSl2> for SL2Element {
    type Error = Error;
    fn try_from(r: RawSl2) -> Result<Self> {
        SL2Element::new(Matrix2::new(
            r.matrix[0][0],
            r.matrix[0][1],
            r.matrix[1][0],
            r.matrix[1][1],
        ))
    }
}

impl From<SL2Element> for RawSl2 {
    fn from(g: SL2Element) -> Self {
        RawSl2 {
            matrix: [[g.m[(0, 0)], g.m[(0, 1)]], [g.m[(1, 0)], g.m[(1, 1)]]],
        }
    }
}

impl SL2Element {
    pub fn new(m: Matrix2<f64>) -> Result<Self> {
        let det = m.determinant();
        let scale = m.norm_squared().max(1.0);
        if !det.is_finite() || (det - 1.0).abs() > DET_TOL * scale {
            return Err(Error::Input(format!("det = {det}, expected 1")));
        }
        Ok(Self { m })
    }

    fn renormalized(m: Matrix2<f64>) -> Self {
        let det = m.determinant();
        Self {
            m: m / det.abs().sqrt(),
        }
    }

    pub fn identity() -> Self {
        Self {
            m: Matrix2::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.m
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::renormalized(self.m * o.m)
    }

    pub fn inverse(&self) -> Self {
        let m = &self.m;
        Self {
            m: Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]),
        }
    }

    pub fn drift(&self) -> f64 {
        (self.m.determinant() - 1.0).abs()
    }

    /// `exp(a p_1 + b p_2 + c k)` with `M = ½[[a, b − c], [b + c, −a]]`,
    /// `M² = δ I`, `δ = (a² + b² − c²)/4`.
    pub fn exp(v: [f64; 3]) -> Self {
        let [a, b, c] = v;
        let m = Matrix2::new(0.5 * a, 0.5 * (b - c), 0.5 * (b + c), -0.5 * a);
        let delta = 0.25 * (a * a + b * b - c * c);
        let (ch, sh) = if delta.abs() < 1e-12 {
            (1.0 + 0.5 * delta, 1.0 + delta / 6.0)
        } else if delta > 0.0 {
            let r = delta.sqrt();
            (r.cosh(), r.sinh() / r)
        } else {
            let r = (-delta).sqrt();
            (r.cos(), r.sin() / r)
        };
        Self::renormalized(Matrix2::identity() * ch + m * sh)
    }

    /// `Π(g) = C g C⁻¹`, `C = (1/√2)[[1, −i], [1, i]]`.
    pub fn pi_iso(&self) -> SU11Element {
        let (c, ci) = cayley();
        let g = self.m.map(|x| Complex64::new(x, 0.0));
        let p = c * g * ci;
        SU11Element::normalized(p[(0, 0)], p[(0, 1)])
    }
}

fn cayley() -> (Matrix2<Complex64>, Matrix2<Complex64>) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = Matrix2::new(
        Complex64::new(s, 0.0),
        Complex64::new(0.0, -s),
        Complex64::new(s, 0.0),
        Complex64::new(0.0, s),
    );
    // C is unitary
    let ci = c.adjoint();
    (c, ci)
}

/// `[[α, β], [β̄, ᾱ]]` with `|α|² − |β|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SU11Element {
    alpha: Complex64,
    beta: Complex64,
}

impl SU11Element {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let d = alpha.norm_sqr() - beta.norm_sqr();
        let scale = alpha.norm_sqr().max(1.0);
        if !d.is_finite() || (d - 1.0).abs() > DET_TOL * scale {
            return Err(Error::Input(format!("|alpha|^2 - |beta|^2 = {d}, expected 1")));
        }
        Ok(Self { alpha, beta })
    }

    fn normalized(alpha: Complex64, beta: Complex64) -> Self {
        let d = (alpha.norm_sqr() - beta.norm_sqr()).abs().sqrt();
        Self {
            alpha: alpha / d,
            beta: beta / d,
        }
    }

    pub fn identity() -> Self {
        Self {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
        }
    }

    /// Polar form `α = cosh r · e^{iφ}`, `β = sinh r · e^{iψ}`.
    pub fn from_polar(r: f64, phi: f64, psi: f64) -> Self {
        Self {
            alpha: Complex64::from_polar(r.cosh(), phi),
            beta: Complex64::from_polar(r.sinh(), psi),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.alpha, self.beta, self.beta.conj(), self.alpha.conj())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.matrix() * o.matrix();
        Self::normalized(p[(0, 0)], p[(0, 1)])
    }

    pub fn inverse(&self) -> Self {
        Self {
            alpha: self.alpha.conj(),
            beta: -self.beta,
        }
    }

    /// Inverse of [`SL2Element::pi_iso`].
    pub fn to_sl2(&self) -> SL2Element {
        let (c, ci) = cayley();
        let g = ci * self.matrix() * c;
        SL2Element::renormalized(g.map(|z| z.re))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_of_identity() {
        let p = SL2Element::identity().pi_iso();
        assert!((p.alpha() - 1.0).norm() < 1e-15 && p.beta().norm() < 1e-15);
    }

    #[test]
    fn pi_roundtrip() {
        let g = SL2Element::exp([0.4, -0.9, 1.3]);
        let back = g.pi_iso().to_sl2();
        assert!((back.matrix() - g.matrix()).abs().max() < 1e-13);
    }

    #[test]
    fn exp_matches_series() {
        let v = [0.3, 0.2, 0.7];
        let g = SL2Element::exp(v);
        let m = Matrix2::new(0.15, -0.25, 0.45, -0.15);
        let mut term = Matrix2::identity();
        let mut sum = Matrix2::identity();
        for k in 1..30 {
            term = term * m / k as f64;
            sum += term;
        }
        assert!((g.matrix() - sum).abs().max() < 1e-14);
    }
}
