use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Point `(x, y, z)` of the Heisenberg group, identified with
/// `[[1, x, z + xy/2], [0, 1, y], [0, 0, 1]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H2Element {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl H2Element {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::Input("H2 coordinates must be finite".into()));
        }
        Ok(Self { x, y, z })
    }

    pub fn identity() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            z: 0.0,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z + 0.5 * (self.x * o.y - o.x * self.y),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// `exp(a p_1 + b p_2 + c k)`; the nilpotent series stops at order two.
    pub fn exp(v: [f64; 3]) -> Self {
        Self {
            x: v[0],
            y: v[1],
            z: v[2],
        }
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        [
            [1.0, self.x, self.z + 0.5 * self.x * self.y],
            [0.0, 1.0, self.y],
            [0.0, 0.0, 1.0],
        ]
    }
}
