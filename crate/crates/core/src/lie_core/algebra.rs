use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rank::{rank, RANK_RTOL};
use crate::error::{Error, Result};

/// Tolerance for the antisymmetry and Jacobi checks at construction.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// A finite-dimensional Lie algebra given by structure constants
/// `[p_i, p_j] = Σ_k c[i][j][k] p_k` and an orthonormal horizontal sub-basis.
///
/// Indices are zero-based throughout the API.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct LieAlgebraSpec {
    name: String,
    dim: usize,
    c: Vec<f64>,
    horizontal: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    #[serde(default)]
    name: String,
    dim: usize,
    structure_constants: Vec<Vec<Vec<f64>>>,
    horizontal: Vec<usize>,
}

impl TryFrom<RawSpec> for LieAlgebraSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        LieAlgebraSpec::new(raw.name, raw.dim, raw.structure_constants, raw.horizontal)
    }
}

impl From<LieAlgebraSpec> for RawSpec {
    fn from(s: LieAlgebraSpec) -> Self {
        let n = s.dim;
        let structure_constants = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| s.c(i, j, k)).collect()).collect())
            .collect();
        RawSpec {
            name: s.name,
            dim: n,
            structure_constants,
            horizontal: s.horizontal,
        }
    }
}

impl LieAlgebraSpec {
    /// Validates antisymmetry, Jacobi and the bracket-generating condition.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        structure_constants: Vec<Vec<Vec<f64>>>,
        horizontal: Vec<usize>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("dimension must be positive".into()));
        }
        if structure_constants.len() != dim
            || structure_constants
                .iter()
                .any(|row| row.len() != dim || row.iter().any(|v| v.len() != dim))
        {
            return Err(Error::Input(format!(
                "structure constants must be a {dim}x{dim}x{dim} array"
            )));
        }
        let mut c = vec![0.0; dim * dim * dim];
        for (i, row) in structure_constants.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                for (k, &x) in v.iter().enumerate() {
                    if !x.is_finite() {
                        return Err(Error::Input("non-finite structure constant".into()));
                    }
                    c[(i * dim + j) * dim + k] = x;
                }
            }
        }
        Self::from_flat(name.into(), dim, c, horizontal)
    }

    fn from_flat(name: String, dim: usize, c: Vec<f64>, horizontal: Vec<usize>) -> Result<Self> {
        if horizontal.is_empty() {
            return Err(Error::Input("horizontal sub-basis is empty".into()));
        }
        for (a, &h) in horizontal.iter().enumerate() {
            if h >= dim {
                return Err(Error::Input(format!("horizontal index {h} out of range")));
            }
            if horizontal[..a].contains(&h) {
                return Err(Error::Input(format!("horizontal index {h} repeated")));
            }
        }
        let spec = Self {
            name,
            dim,
            c,
            horizontal,
        };
        let scale = spec.c.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let anti = spec.antisymmetry_residual();
        if anti > STRUCTURE_TOL * scale {
            return Err(Error::Structure {
                identity: "antisymmetry",
                residual: anti,
            });
        }
        let jac = spec.jacobi_residual();
        if jac > STRUCTURE_TOL * scale * scale {
            return Err(Error::Structure {
                identity: "jacobi",
                residual: jac,
            });
        }
        spec.growth_vector()?;
        Ok(spec)
    }

    /// Structure constants of the linear span of the given matrices under
    /// the commutator. The matrices must be linearly independent and closed.
    pub fn from_matrices(
        name: impl Into<String>,
        basis: &[DMatrix<Complex64>],
        horizontal: Vec<usize>,
    ) -> Result<Self> {
        let n = basis.len();
        if n == 0 {
            return Err(Error::Input("empty basis".into()));
        }
        let shape = basis[0].shape();
        if basis.iter().any(|b| b.shape() != shape || shape.0 != shape.1) {
            return Err(Error::Input(
                "basis matrices must be square and equal size".into(),
            ));
        }
        // real embedding of vec(M)
        let flat = |m: &DMatrix<Complex64>| -> DVector<f64> {
            DVector::from_iterator(2 * m.len(), m.iter().map(|z| z.re).chain(m.iter().map(|z| z.im)))
        };
        let rows = 2 * shape.0 * shape.1;
        let mut a = DMatrix::<f64>::zeros(rows, n);
        for (j, b) in basis.iter().enumerate() {
            a.set_column(j, &flat(b));
        }
        if rank(&a, RANK_RTOL) < n {
            return Err(Error::Input("basis matrices are linearly dependent".into()));
        }
        let svd = a.clone().svd(true, true);
        let mut c = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let comm = &basis[i] * &basis[j] - &basis[j] * &basis[i];
                let rhs = flat(&comm);
                let coef = svd
                    .solve(&rhs, 1e-14)
                    .map_err(|e| Error::Numeric(e.to_string()))?;
                let resid = (&a * &coef - &rhs).norm();
                if resid > 1e-10 * (1.0 + rhs.norm()) {
                    return Err(Error::Input(format!(
                        "basis is not closed under the commutator (residual {resid:e})"
                    )));
                }
                for k in 0..n {
                    c[(i * n + j) * n + k] = snap(coef[k]);
                }
            }
        }
        Self::from_flat(name.into(), n, c, horizontal)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn horizontal(&self) -> &[usize] {
        &self.horizontal
    }

    /// `c[i][j][k]`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim;
        let mut r = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    r = r.max((self.c(i, j, k) + self.c(j, i, k)).abs());
                }
            }
        }
        r
    }

    /// Largest component of `[[p_i,p_j],p_k] + [[p_j,p_k],p_i] + [[p_k,p_i],p_j]`.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut s = 0.0;
                        for l in 0..n {
                            s += self.c(i, j, l) * self.c(l, k, m)
                                + self.c(j, k, l) * self.c(l, i, m)
                                + self.c(k, i, l) * self.c(l, j, m);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// `[u, v] = Σ u_i v_j c[i][j][·]`.
    pub fn bracket(&self, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim;
        for x in [u, v] {
            if x.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: x.len(),
                });
            }
        }
        let mut out = vec![0.0; n];
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = u[i] * v[j];
                if w == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * self.c(i, j, k);
                }
            }
        }
        Ok(out)
    }

    /// `Tr(ad p_i) = Σ_j c[i][j][j]`.
    pub fn trace_ad(&self, i: usize) -> Result<f64> {
        if i >= self.dim {
            return Err(Error::Input(format!(
                "basis index {i} out of range for dimension {}",
                self.dim
            )));
        }
        Ok((0..self.dim).map(|j| self.c(i, j, j)).sum())
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|i| {
            self.trace_ad(i)
                .map(|t| t.abs() <= STRUCTURE_TOL)
                .unwrap_or(false)
        })
    }

    /// `(Tr(ad p_1), …, Tr(ad p_m))` over the horizontal generators.
    ///
    /// Note the sign: the divergence of `X_i = g p_i` with respect to a left
    /// Haar (hence Popp) volume is `−Tr(ad p_i)`, so the operator assembled
    /// from [`super::intrinsic_laplacian_coeffs_at_point`] carries the
    /// opposite sign on non-unimodular algebras. Both vanish together.
    pub fn laplacian_first_order(&self) -> Vec<f64> {
        self.horizontal
            .iter()
            .map(|&i| (0..self.dim).map(|j| self.c(i, j, j)).sum())
            .collect()
    }

    /// Dimensions of `Δ_1 ⊂ Δ_2 ⊂ …` with `Δ_{i+1} = Δ_i + [Δ_1, Δ_i]`.
    pub fn growth_vector(&self) -> Result<Vec<usize>> {
        let n = self.dim;
        let unit = |i: usize| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        };
        let gens: Vec<Vec<f64>> = self.horizontal.iter().map(|&i| unit(i)).collect();
        let mut span = gens.clone();
        let mut layer = gens.clone();
        let mut growth = vec![rank_of(&span, n)];
        while *growth.last().unwrap() < n {
            let mut next = Vec::new();
            for g in &gens {
                for l in &layer {
                    next.push(self.bracket(g, l)?);
                }
            }
            span.extend(next.iter().cloned());
            let r = rank_of(&span, n);
            if r == *growth.last().unwrap() {
                return Err(Error::NotBracketGenerating {
                    reached: r,
                    dim: n,
                    growth,
                });
            }
            growth.push(r);
            layer = next;
        }
        Ok(growth)
    }
}

/// The built-in matrix bases have dyadic structure constants; strip the last-bit
/// noise of the least-squares solve so they come out exact.
fn snap(v: f64) -> f64 {
    const GRID: f64 = 1048576.0;
    let r = (v * GRID).round() / GRID;
    if (v - r).abs() < 1e-12 {
        r
    } else {
        v
    }
}

fn rank_of(vectors: &[Vec<f64>], n: usize) -> usize {
    let m = DMatrix::from_fn(n, vectors.len(), |r, c| vectors[c][r]);
    rank(&m, RANK_RTOL)
}

fn real(rows: usize, data: &[f64]) -> DMatrix<Complex64> {
    DMatrix::from_row_iterator(rows, rows, data.iter().map(|&x| Complex64::new(x, 0.0)))
}

fn cplx(rows: usize, data: &[(f64, f64)]) -> DMatrix<Complex64> {
    DMatrix::from_row_iterator(rows, rows, data.iter().map(|&(a, b)| Complex64::new(a, b)))
}

/// Heisenberg algebra, basis `(p_1, p_2, k)`.
pub fn heisenberg() -> LieAlgebraSpec {
    let p1 = real(3, &[0., 1., 0., 0., 0., 0., 0., 0., 0.]);
    let p2 = real(3, &[0., 0., 0., 0., 0., 1., 0., 0., 0.]);
    let k = real(3, &[0., 0., 1., 0., 0., 0., 0., 0., 0.]);
    LieAlgebraSpec::from_matrices("heisenberg", &[p1, p2, k], vec![0, 1]).expect("builtin")
}

/// Matrices `(p_1, p_2, k)` of su(2).
pub fn su2_matrices() -> [DMatrix<Complex64>; 3] {
    [
        cplx(2, &[(0., 0.), (0., 0.5), (0., 0.5), (0., 0.)]),
        cplx(2, &[(0., 0.), (-0.5, 0.), (0.5, 0.), (0., 0.)]),
        cplx(2, &[(0., 0.5), (0., 0.), (0., 0.), (0., -0.5)]),
    ]
}

pub fn su2() -> LieAlgebraSpec {
    LieAlgebraSpec::from_matrices("su2", &su2_matrices(), vec![0, 1]).expect("builtin")
}

/// Matrices `(p_1, p_2, k)` of so(3).
pub fn so3_matrices() -> [DMatrix<Complex64>; 3] {
    [
        real(3, &[0., 0., 0., 0., 0., -1., 0., 1., 0.]),
        real(3, &[0., 0., 1., 0., 0., 0., -1., 0., 0.]),
        real(3, &[0., -1., 0., 1., 0., 0., 0., 0., 0.]),
    ]
}

pub fn so3() -> LieAlgebraSpec {
    LieAlgebraSpec::from_matrices("so3", &so3_matrices(), vec![0, 1]).expect("builtin")
}

/// Matrices `(p_1, p_2, k)` of sl(2).
pub fn sl2_matrices() -> [DMatrix<Complex64>; 3] {
    [
        real(2, &[0.5, 0., 0., -0.5]),
        real(2, &[0., 0.5, 0.5, 0.]),
        real(2, &[0., -0.5, 0.5, 0.]),
    ]
}

pub fn sl2() -> LieAlgebraSpec {
    LieAlgebraSpec::from_matrices("sl2", &sl2_matrices(), vec![0, 1]).expect("builtin")
}

/// Matrices `(p_0, p_1, p_2)` of se(2); horizontal `p_0, p_1`.
pub fn se2_matrices() -> [DMatrix<Complex64>; 3] {
    [
        real(3, &[0., -1., 0., 1., 0., 0., 0., 0., 0.]),
        real(3, &[0., 0., 1., 0., 0., 0., 0., 0., 0.]),
        real(3, &[0., 0., 0., 0., 0., 1., 0., 0., 0.]),
    ]
}

pub fn se2() -> LieAlgebraSpec {
    LieAlgebraSpec::from_matrices("se2", &se2_matrices(), vec![0, 1]).expect("builtin")
}

/// Lie algebra of `A⁺(ℝ) ⊕ ℝ`, basis `(p_1, p_2, k)`. Not unimodular.
pub fn aff_plus_r() -> LieAlgebraSpec {
    let p1 = real(3, &[1., 0., 0., 0., 0., 0., 0., 0., 0.]);
    let p2 = real(3, &[0., 0., 1., 0., 0., 1., 0., 0., 0.]);
    let k = real(3, &[0., 0., 1., 0., 0., 0., 0., 0., 0.]);
    LieAlgebraSpec::from_matrices("aff_plus_r", &[p1, p2, k], vec![0, 1]).expect("builtin")
}

/// Built-in algebra by name.
pub fn builtin(name: &str) -> Result<LieAlgebraSpec> {
    match name {
        "heisenberg" | "h2" => Ok(heisenberg()),
        "su2" => Ok(su2()),
        "so3" => Ok(so3()),
        "sl2" => Ok(sl2()),
        "se2" => Ok(se2()),
        "aff_plus_r" | "aff" => Ok(aff_plus_r()),
        other => Err(Error::UnsupportedGroup(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_bracket() {
        let h = heisenberg();
        assert_eq!(h.bracket(&[1., 0., 0.], &[0., 1., 0.]).unwrap(), vec![0., 0., 1.]);
    }

    #[test]
    fn rejects_bad_constants() {
        let mut c = vec![vec![vec![0.0; 2]; 2]; 2];
        c[0][1][1] = 1.0;
        assert!(matches!(
            LieAlgebraSpec::new("bad", 2, c, vec![0]),
            Err(Error::Structure {
                identity: "antisymmetry",
                ..
            })
        ));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            su2().bracket(&[1., 0.], &[0., 1., 0.]),
            Err(Error::Dimension { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn not_bracket_generating() {
        // abelian R^2 with one horizontal direction
        let c = vec![vec![vec![0.0; 2]; 2]; 2];
        assert!(matches!(
            LieAlgebraSpec::new("abelian", 2, c, vec![0]),
            Err(Error::NotBracketGenerating {
                reached: 1,
                dim: 2,
                ..
            })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let s = sl2();
        let text = serde_json::to_string(&s).unwrap();
        let back: LieAlgebraSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(s, back);
    }
}
