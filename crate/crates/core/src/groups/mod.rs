//! Element types, group laws, exponential maps and Haar quadrature for
//! H₂, SU(2), SO(3), SL(2) (with SU(1,1)) and SE(2).

mod compact;
mod h2;
mod haar;
mod se2;
mod sl2;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use compact::{SO3Element, SU2Element};
pub use h2::H2Element;
pub use haar::{haar_quadrature, HaarRule, SE2_HAAR_SCALE, SL2_HAAR_SCALE};
pub use se2::SE2Element;
pub use sl2::{SL2Element, SU11Element};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupTag {
    H2,
    SU2,
    SO3,
    SL2,
    SE2,
}

impl GroupTag {
    pub const ALL: [GroupTag; 5] = [
        GroupTag::H2,
        GroupTag::SU2,
        GroupTag::SO3,
        GroupTag::SL2,
        GroupTag::SE2,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            GroupTag::H2 => "h2",
            GroupTag::SU2 => "su2",
            GroupTag::SO3 => "so3",
            GroupTag::SL2 => "sl2",
            GroupTag::SE2 => "se2",
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, GroupTag::SU2 | GroupTag::SO3)
    }

    /// Names of the coordinates accepted by [`GroupElement::from_coords`].
    pub fn coord_names(&self) -> [&'static str; 3] {
        match self {
            GroupTag::H2 => ["x", "y", "z"],
            GroupTag::SE2 => ["angle", "x1", "x2"],
            _ => ["v1", "v2", "v3"],
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupTag::H2 => GroupElement::H2(H2Element::identity()),
            GroupTag::SU2 => GroupElement::SU2(SU2Element::identity()),
            GroupTag::SO3 => GroupElement::SO3(SO3Element::identity()),
            GroupTag::SL2 => GroupElement::SL2(SL2Element::identity()),
            GroupTag::SE2 => GroupElement::SE2(SE2Element::identity()),
        }
    }

    /// `exp(v)` for a coefficient vector in the basis used throughout.
    pub fn exp(&self, v: [f64; 3]) -> GroupElement {
        match self {
            GroupTag::H2 => GroupElement::H2(H2Element::exp(v)),
            GroupTag::SU2 => GroupElement::SU2(SU2Element::exp(v)),
            GroupTag::SO3 => GroupElement::SO3(SO3Element::exp(v)),
            GroupTag::SL2 => GroupElement::SL2(SL2Element::exp(v)),
            GroupTag::SE2 => GroupElement::SE2(SE2Element::exp(v)),
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "h2" | "heisenberg" => Ok(GroupTag::H2),
            "su2" => Ok(GroupTag::SU2),
            "so3" => Ok(GroupTag::SO3),
            "sl2" | "su11" => Ok(GroupTag::SL2),
            "se2" | "m2" => Ok(GroupTag::SE2),
            other => Err(Error::UnsupportedGroup(other.to_string())),
        }
    }
}

/// A point of one of the five groups.
///
/// JSON form: `{"group":"su2","alpha":[re,im],"beta":[re,im]}`,
/// `{"group":"h2","x":..,"y":..,"z":..}`, `{"group":"so3","matrix":[[..],..]}`,
/// `{"group":"sl2","matrix":[[a,b],[c,d]]}`, `{"group":"se2","angle":..,"x1":..,"x2":..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "group", rename_all = "lowercase")]
pub enum GroupElement {
    H2(H2Element),
    SU2(SU2Element),
    SO3(SO3Element),
    SL2(SL2Element),
    SE2(SE2Element),
}

impl GroupElement {
    pub fn tag(&self) -> GroupTag {
        match self {
            GroupElement::H2(_) => GroupTag::H2,
            GroupElement::SU2(_) => GroupTag::SU2,
            GroupElement::SO3(_) => GroupTag::SO3,
            GroupElement::SL2(_) => GroupTag::SL2,
            GroupElement::SE2(_) => GroupTag::SE2,
        }
    }

    /// Element from flat coordinates.
    ///
    /// H₂: `(x, y, z)`. SE(2): `(angle, x1, x2)`. SU(2), SO(3), SL(2): three
    /// exponential coordinates, or the full form (SU(2): `Re α, Im α, Re β,
    /// Im β`; SO(3): nine row-major entries; SL(2): `a, b, c, d`).
    pub fn from_coords(tag: GroupTag, c: &[f64]) -> Result<Self> {
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("coordinates must be finite".into()));
        }
        let bad = || {
            Error::Input(format!(
                "{} coordinates of length {} are not understood",
                tag,
                c.len()
            ))
        };
        let three = |c: &[f64]| [c[0], c[1], c[2]];
        Ok(match (tag, c.len()) {
            (GroupTag::H2, 3) => GroupElement::H2(H2Element::new(c[0], c[1], c[2])?),
            (GroupTag::SE2, 3) => GroupElement::SE2(SE2Element::new(c[0], c[1], c[2])?),
            (GroupTag::SU2 | GroupTag::SO3 | GroupTag::SL2, 3) => tag.exp(three(c)),
            (GroupTag::SU2, 4) => GroupElement::SU2(SU2Element::new(
                Complex64::new(c[0], c[1]),
                Complex64::new(c[2], c[3]),
            )?),
            (GroupTag::SO3, 9) => GroupElement::SO3(SO3Element::new(nalgebra::Matrix3::from_row_slice(c))?),
            (GroupTag::SL2, 4) => {
                GroupElement::SL2(SL2Element::new(nalgebra::Matrix2::new(c[0], c[1], c[2], c[3]))?)
            }
            _ => return Err(bad()),
        })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Ok(match (self, o) {
            (GroupElement::H2(a), GroupElement::H2(b)) => GroupElement::H2(a.mul(b)),
            (GroupElement::SU2(a), GroupElement::SU2(b)) => GroupElement::SU2(a.mul(b)),
            (GroupElement::SO3(a), GroupElement::SO3(b)) => GroupElement::SO3(a.mul(b)),
            (GroupElement::SL2(a), GroupElement::SL2(b)) => GroupElement::SL2(a.mul(b)),
            (GroupElement::SE2(a), GroupElement::SE2(b)) => GroupElement::SE2(a.mul(b)),
            _ => {
                return Err(Error::Input(format!(
                    "cannot multiply {} by {}",
                    self.tag(),
                    o.tag()
                )))
            }
        })
    }

    pub fn inverse(&self) -> Self {
        match self {
            GroupElement::H2(a) => GroupElement::H2(a.inverse()),
            GroupElement::SU2(a) => GroupElement::SU2(a.inverse()),
            GroupElement::SO3(a) => GroupElement::SO3(a.inverse()),
            GroupElement::SL2(a) => GroupElement::SL2(a.inverse()),
            GroupElement::SE2(a) => GroupElement::SE2(a.inverse()),
        }
    }

    /// Coordinates for tabular output: the native coordinates for H₂ and
    /// SE(2), exponential coordinates of the principal branch otherwise
    /// (SL(2) elements outside the image of exp fall back to matrix entries).
    pub fn display_coords(&self) -> Vec<f64> {
        match self {
            GroupElement::H2(g) => vec![g.x, g.y, g.z],
            GroupElement::SE2(g) => vec![g.angle(), g.x1(), g.x2()],
            GroupElement::SU2(g) => vec![g.alpha().re, g.alpha().im, g.beta().re, g.beta().im],
            GroupElement::SO3(g) => g.matrix().transpose().iter().cloned().collect(),
            GroupElement::SL2(g) => g.matrix().transpose().iter().cloned().collect(),
        }
    }
}
