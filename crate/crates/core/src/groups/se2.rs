use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Roto-translation `(α, x_1, x_2)`, angle kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSe2", into = "RawSe2")]
pub struct SE2Element {
    angle: f64,
    x1: f64,
    x2: f64,
}

#[derive(Serialize, Deserialize)]
struct RawSe2 {
    angle: f64,
    x1: f64,
    x2: f64,
}

impl TryFrom<RawSe2> for SE2Element {
    type Error = Error;
    fn try_from(r: RawSe2) -> Result<Self> {
        SE2Element::new(r.angle, r.x1, r.x2)
    }
}

impl From<SE2Element> for RawSe2 {
    fn from(g: SE2Element) -> Self {
        RawSe2 {
            angle: g.angle,
            x1: g.x1,
            x2: g.x2,
        }
    }
}

fn wrap(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl SE2Element {
    pub fn new(angle: f64, x1: f64, x2: f64) -> Result<Self> {
        if !(angle.is_finite() && x1.is_finite() && x2.is_finite()) {
            return Err(Error::Input("SE(2) coordinates must be finite".into()));
        }
        Ok(Self {
            angle: wrap(angle),
            x1,
            x2,
        })
    }

    pub fn identity() -> Self {
        Self {
            angle: 0.0,
            x1: 0.0,
            x2: 0.0,
        }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let (s, c) = self.angle.sin_cos();
        [[c, -s, self.x1], [s, c, self.x2], [0.0, 0.0, 1.0]]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (s, c) = self.angle.sin_cos();
        Self {
            angle: wrap(self.angle + o.angle),
            x1: self.x1 + c * o.x1 - s * o.x2,
            x2: self.x2 + s * o.x1 + c * o.x2,
        }
    }

    pub fn inverse(&self) -> Self {
        let (s, c) = self.angle.sin_cos();
        Self {
            angle: wrap(-self.angle),
            x1: -(c * self.x1 + s * self.x2),
            x2: -(-s * self.x1 + c * self.x2),
        }
    }

    /// `exp(θ p_0 + u_1 p_1 + u_2 p_2)`.
    pub fn exp(v: [f64; 3]) -> Self {
        let [theta, u1, u2] = v;
        let (a, b) = if theta.abs() < 1e-8 {
            (1.0 - theta * theta / 6.0, 0.5 * theta)
        } else {
            (theta.sin() / theta, (1.0 - theta.cos()) / theta)
        };
        Self {
            angle: wrap(theta),
            x1: a * u1 - b * u2,
            x2: b * u1 + a * u2,
        }
    }
}
