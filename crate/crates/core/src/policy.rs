use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every cutoff, node count and tolerance that turns an infinite sum or
/// integral into a finite computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TruncationPolicy {
    /// Cap on the adaptive series cut: SU(2)/SO(3) degree, SL(2) discrete
    /// weight and m range, SE(2) Mathieu order.
    pub series_cut: usize,
    /// Upper end of the continuous-dual integral (λ or v). `None` starts at
    /// `8/√t` and grows until the tail estimate drops below `abs_tol`.
    pub spectral_box: Option<f64>,
    /// Nodes per compact direction (circle / sphere / Haar quadrature).
    pub quad_nodes: usize,
    /// Half-width of the box used on noncompact directions.
    pub box_half_width: Option<f64>,
    /// Gauss–Legendre panels per noncompact direction.
    pub box_panels: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            series_cut: 400,
            spectral_box: None,
            quad_nodes: 32,
            box_half_width: None,
            box_panels: 4,
            abs_tol: 1e-8,
            rel_tol: 1e-10,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.series_cut == 0 || self.quad_nodes == 0 || self.box_panels == 0 {
            return Err(Error::Input("series cut and node counts must be positive".into()));
        }
        for (name, tol) in [("abs_tol", self.abs_tol), ("rel_tol", self.rel_tol)] {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(Error::Input(format!("{name} must lie in (0, 1), got {tol}")));
            }
        }
        if let Some(b) = self.spectral_box {
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::Input(format!("spectral box must be > 0, got {b}")));
            }
        }
        if let Some(l) = self.box_half_width {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::Input(format!("box half-width must be > 0, got {l}")));
            }
        }
        Ok(())
    }

    pub fn with_box(mut self, half_width: f64) -> Self {
        self.box_half_width = Some(half_width);
        self
    }

    pub fn with_quad_nodes(mut self, n: usize) -> Self {
        self.quad_nodes = n;
        self
    }

    pub fn with_abs_tol(mut self, tol: f64) -> Self {
        self.abs_tol = tol;
        self
    }

    pub fn with_spectral_box(mut self, b: f64) -> Self {
        self.spectral_box = Some(b);
        self
    }

    pub fn with_series_cut(mut self, n: usize) -> Self {
        self.series_cut = n;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        TruncationPolicy::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(TruncationPolicy::default().with_abs_tol(0.0).validate().is_err());
        assert!(TruncationPolicy::default().with_quad_nodes(0).validate().is_err());
    }
}
