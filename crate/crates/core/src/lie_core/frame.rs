use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::rank::{column_basis, pinv, rank, RANK_RTOL};
use crate::error::{Error, Result};

/// Right-nested bracket `[X_{w0}, [X_{w1}, … [X_{w(l-1)}, X_{wl}]]]`,
/// frame indices zero-based, length at least 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BracketWord(pub Vec<usize>);

impl BracketWord {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.len() < 2 {
            return Err(Error::Input("a bracket word needs at least two letters".into()));
        }
        Ok(Self(letters))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Canonical form using antisymmetry of the innermost pair.
    /// `None` when the word vanishes identically, otherwise the sign to apply.
    fn canonical(&self) -> Option<(BracketWord, f64)> {
        let l = self.0.len();
        let (a, b) = (self.0[l - 2], self.0[l - 1]);
        if a == b {
            return None;
        }
        if a < b {
            Some((self.clone(), 1.0))
        } else {
            let mut w = self.0.clone();
            w.swap(l - 2, l - 1);
            Some((BracketWord(w), -1.0))
        }
    }

    /// All words of a given length over `m` letters, lexicographic.
    pub fn all(m: usize, len: usize) -> Vec<BracketWord> {
        let total = m.pow(len as u32);
        (0..total)
            .map(|mut code| {
                let mut w = vec![0; len];
                for slot in w.iter_mut().rev() {
                    *slot = code % m;
                    code /= m;
                }
                BracketWord(w)
            })
            .collect()
    }
}

impl fmt::Display for BracketWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

/// Values at a point of an orthonormal frame and of its iterated brackets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FramePointData {
    coords_dim: usize,
    frame: Vec<Vec<f64>>,
    bracket_closure: BTreeMap<BracketWord, Vec<f64>>,
}

impl FramePointData {
    /// Validates dimensions and linear independence of the frame.
    ///
    /// Only canonical words are needed: a word whose last two letters are
    /// decreasing is recovered by antisymmetry. Supplying both orders is
    /// allowed; the increasing one wins.
    pub fn new(
        coords_dim: usize,
        frame: Vec<Vec<f64>>,
        bracket_closure: BTreeMap<BracketWord, Vec<f64>>,
    ) -> Result<Self> {
        if coords_dim == 0 || frame.is_empty() {
            return Err(Error::Input("empty frame".into()));
        }
        if frame.len() > coords_dim {
            return Err(Error::Input(format!(
                "{} frame vectors in dimension {coords_dim}",
                frame.len()
            )));
        }
        let m = frame.len();
        for v in frame.iter().chain(bracket_closure.values()) {
            if v.len() != coords_dim {
                return Err(Error::Dimension {
                    expected: coords_dim,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Input("non-finite frame or bracket value".into()));
            }
        }
        for w in bracket_closure.keys() {
            if w.len() < 2 || w.0.iter().any(|&i| i >= m) {
                return Err(Error::Input(format!("invalid bracket word [{w}]")));
            }
        }
        let data = Self {
            coords_dim,
            frame,
            bracket_closure,
        };
        if rank(&data.frame_matrix(), RANK_RTOL) < m {
            return Err(Error::Input("frame vectors are linearly dependent".into()));
        }
        Ok(data)
    }

    pub fn coords_dim(&self) -> usize {
        self.coords_dim
    }

    pub fn frame(&self) -> &[Vec<f64>] {
        &self.frame
    }

    pub fn bracket_closure(&self) -> &BTreeMap<BracketWord, Vec<f64>> {
        &self.bracket_closure
    }

    pub fn frame_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.coords_dim, self.frame.len(), |r, c| self.frame[c][r])
    }

    fn max_word_len(&self) -> usize {
        self.bracket_closure.keys().map(|w| w.len()).max().unwrap_or(1)
    }

    /// Value of any word, using antisymmetry of the innermost pair.
    pub fn bracket_value(&self, word: &BracketWord) -> Result<Vec<f64>> {
        match word.canonical() {
            None => Ok(vec![0.0; self.coords_dim]),
            Some((canon, sign)) => {
                if let Some(v) = self.bracket_closure.get(&canon) {
                    return Ok(v.iter().map(|x| sign * x).collect());
                }
                let mut flipped = canon.0.clone();
                let l = flipped.len();
                flipped.swap(l - 2, l - 1);
                match self.bracket_closure.get(&BracketWord(flipped)) {
                    Some(v) => Ok(v.iter().map(|x| -sign * x).collect()),
                    None => Err(Error::MissingBracket(canon.0)),
                }
            }
        }
    }

    fn level_matrix(&self, len: usize) -> Result<DMatrix<f64>> {
        let words = BracketWord::all(self.frame.len(), len);
        let mut b = DMatrix::zeros(self.coords_dim, words.len());
        for (j, w) in words.iter().enumerate() {
            b.set_column(j, &DVector::from_vec(self.bracket_value(w)?));
        }
        Ok(b)
    }

    /// Flag levels: for each step the projected bracket matrix, its new
    /// directions, and the running dimension.
    fn flag(&self) -> Result<Flag> {
        let n = self.coords_dim;
        let frame = self.frame_matrix();
        let mut span = column_basis(&frame, RANK_RTOL);
        let mut growth = vec![span.ncols()];
        let mut levels = Vec::new();
        let mut len = 2;
        while span.ncols() < n {
            if len > self.max_word_len() {
                return Err(Error::NotBracketGenerating {
                    reached: span.ncols(),
                    dim: n,
                    growth,
                });
            }
            let b = self.level_matrix(len)?;
            let proj = DMatrix::<f64>::identity(n, n) - &span * span.transpose();
            let pb = &proj * &b;
            // scale-aware cutoff: compare with the raw bracket sizes
            let scale = b.norm().max(frame.norm());
            let new_dirs = if pb.norm() <= RANK_RTOL * scale {
                DMatrix::zeros(n, 0)
            } else {
                column_basis(&pb, RANK_RTOL)
            };
            if new_dirs.ncols() > 0 {
                let mut joined = DMatrix::zeros(n, span.ncols() + new_dirs.ncols());
                joined.columns_mut(0, span.ncols()).copy_from(&span);
                joined
                    .columns_mut(span.ncols(), new_dirs.ncols())
                    .copy_from(&new_dirs);
                span = column_basis(&joined, RANK_RTOL);
            }
            growth.push(span.ncols());
            levels.push(Level {
                projected: pb,
                new_dirs,
            });
            len += 1;
        }
        Ok(Flag { growth, levels })
    }

    /// Dimensions `(n_1, …, n_k)` of the flag at the point, through the step
    /// where it reaches the full dimension.
    pub fn growth_vector(&self) -> Result<Vec<usize>> {
        Ok(self.flag()?.growth)
    }

    /// Density of the Popp volume with respect to `dx_1 ∧ … ∧ dx_n`.
    pub fn popp_density(&self) -> Result<f64> {
        let flag = self.flag().map_err(|e| match e {
            Error::NotBracketGenerating { reached, growth, .. } => Error::SingularPoint {
                step: growth.len(),
                detail: format!("flag stops at dimension {reached} < {}", self.coords_dim),
            },
            other => other,
        })?;
        let n = self.coords_dim;
        let mut w = DMatrix::zeros(n, n);
        let m = self.frame.len();
        w.columns_mut(0, m).copy_from(&self.frame_matrix());
        let mut col = m;
        let mut log_vol = 0.0;
        for level in &flag.levels {
            let r = level.new_dirs.ncols();
            if r == 0 {
                continue;
            }
            let pre = pinv(&level.projected, RANK_RTOL) * &level.new_dirs;
            let gram = pre.transpose() * &pre;
            let det = gram.determinant();
            if !(det > 0.0) {
                return Err(Error::Numeric("degenerate quotient Gram matrix".into()));
            }
            // quotient norms rescaled by √2 per direction above the first layer
            log_vol += 0.5 * det.ln() + 0.5 * r as f64 * std::f64::consts::LN_2;
            w.columns_mut(col, r).copy_from(&level.new_dirs);
            col += r;
        }
        let det_w = w.determinant().abs();
        if !(det_w > 0.0) {
            return Err(Error::SingularPoint {
                step: flag.growth.len(),
                detail: "adapted basis is singular".into(),
            });
        }
        Ok(log_vol.exp() / det_w)
    }
}

struct Level {
    projected: DMatrix<f64>,
    new_dirs: DMatrix<f64>,
}

struct Flag {
    growth: Vec<usize>,
    levels: Vec<Level>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contact(x3: [f64; 3]) -> FramePointData {
        let mut closure = BTreeMap::new();
        closure.insert(BracketWord(vec![0, 1]), x3.to_vec());
        FramePointData::new(3, vec![vec![1., 0., 0.], vec![0., 1., 0.]], closure).unwrap()
    }

    #[test]
    fn contact_density_is_inverse_determinant() {
        let d = contact([0.3, -0.2, 2.5]);
        assert!((d.popp_density().unwrap() - 1.0 / 2.5).abs() < 1e-14);
        assert_eq!(d.growth_vector().unwrap(), vec![2, 3]);
    }

    #[test]
    fn riemannian_is_one() {
        let d = FramePointData::new(2, vec![vec![1., 0.], vec![0., 1.]], BTreeMap::new()).unwrap();
        assert!((d.popp_density().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_flag_is_singular() {
        let d = contact([0., 0., 0.]);
        assert!(matches!(d.popp_density(), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn missing_word_is_reported() {
        let mut closure = BTreeMap::new();
        closure.insert(BracketWord(vec![0, 1]), vec![0., 0., 0.]);
        let d = FramePointData::new(3, vec![vec![1., 0., 0.], vec![0., 1., 0.]], closure.clone()).unwrap();
        // only length-2 words supplied, flag stalls
        assert!(matches!(
            d.growth_vector(),
            Err(Error::NotBracketGenerating { reached: 2, .. })
        ));
        closure.insert(BracketWord(vec![1, 0, 1]), vec![0., 0., 1.]);
        let d = FramePointData::new(3, vec![vec![1., 0., 0.], vec![0., 1., 0.]], closure).unwrap();
        assert_eq!(d.growth_vector(), Err(Error::MissingBracket(vec![0, 0, 1])));
    }

    #[test]
    fn words_enumerate_lexicographically() {
        let w = BracketWord::all(2, 2);
        assert_eq!(
            w.iter().map(|w| w.0.clone()).collect::<Vec<_>>(),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
    }
}
