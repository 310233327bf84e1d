//! Truncated matrices of `d𝔛(X_i)` and `Δ̂ = d𝔛(X_1)² + d𝔛(X_2)²` built
//! from ladder operators, and the trace `Tr(e^{tΔ̂} 𝔛(g))` computed from them.
//!
//! Nothing here uses the closed-form eigenvalues or the matrix elements of
//! the kernel module, so agreement is a genuine cross-check.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gft_kernels::HalfInteger;
use crate::groups::{GroupElement, GroupTag, SE2Element, SL2Element, SU2Element};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A point of the unitary dual, enough to pick a representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "series", rename_all = "snake_case")]
pub enum DualParam {
    /// Degree `n`, dimension `n + 1`.
    Su2 { n: usize },
    /// Degree `r`, dimension `2r + 1`.
    So3 { r: usize },
    /// Weight `n` with `|n| ≥ 1`, `2n ∈ ℤ`; basis `z^m`, `m ≥ 0`.
    Sl2Discrete { n: f64 },
    /// `j ∈ {0, ½}`, `s = ½ + iv`; basis `e^{i(m+j)θ}`, `m ∈ ℤ`.
    Sl2Continuous { j: f64, v: f64 },
    /// `λ > 0`; basis `e^{ikθ}`.
    Se2 { lambda: f64 },
}

impl DualParam {
    fn tag(&self) -> GroupTag {
        match self {
            DualParam::Su2 { .. } => GroupTag::SU2,
            DualParam::So3 { .. } => GroupTag::SO3,
            DualParam::Sl2Discrete { .. } | DualParam::Sl2Continuous { .. } => GroupTag::SL2,
            DualParam::Se2 { .. } => GroupTag::SE2,
        }
    }
}

/// `Δ̂` and the three `d𝔛(X_i)` in one truncated basis.
#[derive(Debug, Clone)]
pub struct TruncatedGenerator {
    pub laplacian: DMatrix<Complex64>,
    /// In the algebra basis order of the group; the first two are horizontal.
    pub fields: [DMatrix<Complex64>; 3],
    /// Basis label per row: `k` (SU(2)), `s` (SO(3)), `m` (SL(2)), Fourier
    /// index (SE(2)).
    pub labels: Vec<i64>,
}

/// Ladder data: `J₀` diagonal, `⟨i+1|J₊|i⟩` and `⟨i|J₋|i+1⟩`.
struct Ladder {
    diag: Vec<f64>,
    up: Vec<Complex64>,
    down: Vec<Complex64>,
}

impl Ladder {
    fn matrices(&self) -> (DMatrix<Complex64>, DMatrix<Complex64>, DMatrix<Complex64>) {
        let d = self.diag.len();
        let j0 = DMatrix::from_fn(d, d, |r, c| {
            if r == c {
                Complex64::new(self.diag[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let mut jp = DMatrix::zeros(d, d);
        let mut jm = DMatrix::zeros(d, d);
        for i in 0..d - 1 {
            jp[(i + 1, i)] = self.up[i];
            jm[(i, i + 1)] = self.down[i];
        }
        let j1 = (&jp + &jm) * Complex64::new(0.5, 0.0);
        let j2 = (&jp - &jm) * (-0.5 * I);
        (j0, j1, j2)
    }
}

/// Spin `j = d/2` ladder for `su(2)`, rows ordered `m = j, j−1, …, −j`
/// (row `k` has `m = j − k`), so `J₊` moves row `k` to `k − 1`.
fn spin(twice_j: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>, DMatrix<Complex64>) {
    let d = twice_j + 1;
    let j = 0.5 * twice_j as f64;
    let m = |k: usize| j - k as f64;
    let mut jz = DMatrix::zeros(d, d);
    let mut jp = DMatrix::zeros(d, d);
    for k in 0..d {
        jz[(k, k)] = Complex64::new(m(k), 0.0);
        if k > 0 {
            let mk = m(k);
            jp[(k - 1, k)] = Complex64::new((j * (j + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * Complex64::new(0.5, 0.0);
    let jy = (&jp - &jm) * (-0.5 * I);
    (jx, jy, jz)
}

fn square_sum(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, keep: usize) -> DMatrix<Complex64> {
    let full = a * a + b * b;
    full.view((0, 0), (keep, keep)).into_owned()
}

fn cut(m: &DMatrix<Complex64>, keep: usize) -> DMatrix<Complex64> {
    m.view((0, 0), (keep, keep)).into_owned()
}

/// Truncated generator matrices for `dual`, keeping `k` basis vectors
/// (`|Fourier index| ≤ k` for SE(2) and `|m| ≤ k` for the SL(2) continuous
/// series; SU(2), SO(3) are exact and ignore `k`).
pub fn truncated_generator(tag: GroupTag, dual: &DualParam, k: usize) -> Result<TruncatedGenerator> {
    if dual.tag() != tag {
        return Err(Error::UnsupportedGroup(format!("{tag} with dual {dual:?}")));
    }
    if !tag.is_compact() && k < 4 {
        return Err(Error::Input(format!("basis cut must be at least 4, got {k}")));
    }
    match *dual {
        DualParam::Su2 { n } => {
            // p₁ = iσ_x/2, p₂ = −iσ_y/2, k = iσ_z/2 ↦ iJ_x, −iJ_y, iJ_z
            let (jx, jy, jz) = spin(n);
            let f = [&jx * I, &jy * (-I), &jz * I];
            let lap = square_sum(&f[0], &f[1], n + 1);
            Ok(TruncatedGenerator {
                laplacian: lap,
                fields: f,
                labels: (0..=n as i64).collect(),
            })
        }
        DualParam::So3 { r } => {
            let (jx, jy, jz) = spin(2 * r);
            let f = [&jx * I, &jy * (-I), &jz * I];
            let lap = square_sum(&f[0], &f[1], 2 * r + 1);
            Ok(TruncatedGenerator {
                laplacian: lap,
                fields: f,
                labels: (0..=2 * r as i64).map(|i| r as i64 - i).collect(),
            })
        }
        DualParam::Sl2Discrete { n } => {
            let n = HalfInteger::new(n)?;
            if n.twice().abs() < 2 {
                return Err(Error::Input(format!(
                    "discrete series needs |n| ≥ 1, got {}",
                    n.value()
                )));
            }
            let w = n.value().abs();
            // holomorphic series of lowest weight |n|: J₀ = |n| + m,
            // ⟨m+1|J₊|m⟩ = √((m+1)(m+2|n|))
            let d = k + 1;
            let up: Vec<Complex64> = (0..d)
                .map(|m| Complex64::new(((m as f64 + 1.0) * (m as f64 + 2.0 * w)).sqrt(), 0.0))
                .collect();
            let ladder = Ladder {
                diag: (0..d).map(|m| w + m as f64).collect(),
                down: up.clone(),
                up,
            };
            let (j0, j1, j2) = ladder.matrices();
            // p₁, p₂, k ↦ iJ₂, iJ₁, iJ₀ matches [p₁,p₂] = −k, [p₂,k] = p₁
            let mut f = [&j2 * I, &j1 * I, &j0 * I];
            if n.twice() < 0 {
                for m in f.iter_mut() {
                    *m = m.map(|z| z.conj());
                }
            }
            let lap = square_sum(&f[0], &f[1], k);
            Ok(TruncatedGenerator {
                laplacian: lap,
                fields: f.map(|m| cut(&m, k)),
                labels: (0..k as i64).collect(),
            })
        }
        DualParam::Sl2Continuous { j, v } => {
            if !(j == 0.0 || j == 0.5) || !(v > 0.0 && v.is_finite()) {
                return Err(Error::Input(format!(
                    "continuous series needs j ∈ {{0, ½}}, v > 0; got j={j}, v={v}"
                )));
            }
            // rows m = −k−1 ..= k+1, kept rows |m| ≤ k sit at offset 1
            let lo = -(k as i64) - 1;
            let d = 2 * k + 3;
            let sigma = Complex64::new(0.5, v);
            let mu = |i: usize| (lo + i as i64) as f64 + j;
            let up: Vec<Complex64> = (0..d).map(|i| mu(i) + sigma).collect();
            let down: Vec<Complex64> = (0..d).map(|i| mu(i) + 1.0 - sigma).collect();
            let ladder = Ladder {
                diag: (0..d).map(mu).collect(),
                up,
                down,
            };
            let (j0, j1, j2) = ladder.matrices();
            let f = [&j2 * I, &j1 * I, &j0 * I];
            let full = &f[0] * &f[0] + &f[1] * &f[1];
            let keep = 2 * k + 1;
            let inner = |m: &DMatrix<Complex64>| m.view((1, 1), (keep, keep)).into_owned();
            Ok(TruncatedGenerator {
                laplacian: inner(&full),
                fields: [inner(&f[0]), inner(&f[1]), inner(&f[2])],
                labels: (-(k as i64)..=k as i64).collect(),
            })
        }
        DualParam::Se2 { lambda } => {
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(Error::Input(format!("λ must be positive, got {lambda}")));
            }
            // (𝔛ψ)(θ) = e^{iλ(x₁cos θ − x₂sin θ)} ψ(θ+α):
            // p₀ ↦ d/dθ, p₁ ↦ iλ cos θ, p₂ ↦ −iλ sin θ
            let kk = k as i64 + 1;
            let d = (2 * kk + 1) as usize;
            let idx = |i: usize| i as i64 - kk;
            let mut f0 = DMatrix::zeros(d, d);
            let mut f1 = DMatrix::zeros(d, d);
            let mut f2 = DMatrix::zeros(d, d);
            for i in 0..d {
                f0[(i, i)] = I * idx(i) as f64;
                if i + 1 < d {
                    f1[(i + 1, i)] = I * (0.5 * lambda);
                    f1[(i, i + 1)] = I * (0.5 * lambda);
                    f2[(i + 1, i)] = Complex64::new(-0.5 * lambda, 0.0);
                    f2[(i, i + 1)] = Complex64::new(0.5 * lambda, 0.0);
                }
            }
            let full = &f0 * &f0 + &f1 * &f1;
            let keep = 2 * k + 1;
            let inner = |m: &DMatrix<Complex64>| m.view((1, 1), (keep, keep)).into_owned();
            Ok(TruncatedGenerator {
                laplacian: inner(&full),
                fields: [inner(&f0), inner(&f1), inner(&f2)],
                labels: (-(k as i64)..=k as i64).collect(),
            })
        }
    }
}

/// Eigenvalues of the truncated `Δ̂`, ascending in magnitude.
pub fn generator_spectrum(gen: &TruncatedGenerator) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(hermitian(&gen.laplacian))
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

fn hermitian(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `exp(tH)` for Hermitian `H` by eigendecomposition.
fn heat_matrix(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(hermitian(h));
    let v = &eig.eigenvectors;
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| Complex64::new((t * e).exp(), 0.0)));
    v * d * v.adjoint()
}

/// `log g` in algebra coordinates for the groups whose exponential map
/// reaches `g`.
pub fn algebra_log(g: &GroupElement) -> Result<[f64; 3]> {
    match g {
        GroupElement::SU2(h) => Ok(su2_log(h)),
        GroupElement::SO3(h) => Ok(h.log()),
        GroupElement::SE2(h) => se2_log(h),
        GroupElement::SL2(h) => sl2_log(h),
        GroupElement::H2(h) => Ok([h.x, h.y, h.z]),
    }
}

fn su2_log(g: &SU2Element) -> [f64; 3] {
    // g − Re α·I = sin θ · (unit generator); read v off M = v·(p₁,p₂,k)
    let (a, b) = (g.alpha(), g.beta());
    let s = [2.0 * b.im, -2.0 * b.re, 2.0 * a.im];
    let norm = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    let theta = norm.atan2(2.0 * a.re);
    if norm < 1e-300 {
        return if a.re > 0.0 {
            [0.0; 3]
        } else {
            [0.0, 0.0, 2.0 * PI]
        };
    }
    s.map(|x| x / norm * 2.0 * theta)
}

fn se2_log(g: &SE2Element) -> Result<[f64; 3]> {
    let th = g.angle();
    let (a, b) = if th.abs() < 1e-8 {
        (1.0 - th * th / 6.0, 0.5 * th)
    } else {
        (th.sin() / th, (1.0 - th.cos()) / th)
    };
    let det = a * a + b * b;
    if det < 1e-14 {
        return Err(Error::Input("SE(2) element has no logarithm".into()));
    }
    let (x1, x2) = (g.x1(), g.x2());
    Ok([th, (a * x1 + b * x2) / det, (-b * x1 + a * x2) / det])
}

fn sl2_log(g: &SL2Element) -> Result<[f64; 3]> {
    let m = g.matrix();
    let half = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let f = if (half - 1.0).abs() < 1e-12 {
        1.0
    } else if half > 1.0 {
        let r = half.acosh();
        r / r.sinh()
    } else if half > -1.0 {
        let th = half.acos();
        th / th.sin()
    } else {
        return Err(Error::Input(format!(
            "SL(2) element with trace {} is not an exponential",
            2.0 * half
        )));
    };
    // M = ½[[a, b − c], [b + c, −a]]
    let l00 = f * (m[(0, 0)] - half);
    let (l01, l10) = (f * m[(0, 1)], f * m[(1, 0)]);
    Ok([2.0 * l00, l01 + l10, l10 - l01])
}

/// `𝔛_K(g)` for SE(2) in Fourier modes `|k| ≤ kmax`, by trapezoid
/// quadrature of `(1/2π)∫ e^{−ijθ} e^{iλ(x₁cos θ − x₂sin θ)} e^{ik(θ+α)} dθ`.
fn se2_rep_matrix(lambda: f64, g: &SE2Element, kmax: usize) -> DMatrix<Complex64> {
    let d = 2 * kmax + 1;
    let osc = lambda * g.x1().hypot(g.x2());
    let n = (4 * kmax + (2.0 * osc) as usize + 128).next_power_of_two();
    let h = 2.0 * PI / n as f64;
    // c_p = (1/n) Σ e^{iλ(...)} e^{−ipθ}; element (j, k) = c_{j−k} e^{ikα}
    let samples: Vec<Complex64> = (0..n)
        .map(|s| {
            let th = s as f64 * h;
            Complex64::from_polar(1.0, lambda * (g.x1() * th.cos() - g.x2() * th.sin()))
        })
        .collect();
    let coeff = |p: i64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, z) in samples.iter().enumerate() {
            acc += z * Complex64::from_polar(1.0, -(p as f64) * s as f64 * h);
        }
        acc / n as f64
    };
    let span = 2 * kmax as i64;
    let table: Vec<Complex64> = (-span..=span).map(coeff).collect();
    DMatrix::from_fn(d, d, |r, c| {
        let (j, k) = (r as i64 - kmax as i64, c as i64 - kmax as i64);
        table[(j - k + span) as usize] * Complex64::from_polar(1.0, k as f64 * g.angle())
    })
}

fn trace_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

fn term_at(dual: &DualParam, g: &GroupElement, t: f64, k: usize) -> Result<Complex64> {
    let tag = g.tag();
    let gen = truncated_generator(tag, dual, k)?;
    let heat = heat_matrix(&gen.laplacian, t);
    let keep = gen.laplacian.nrows();
    let rep = match (dual, g) {
        (DualParam::Se2 { lambda }, GroupElement::SE2(h)) => se2_rep_matrix(*lambda, h, k),
        (DualParam::Su2 { .. } | DualParam::So3 { .. }, _) => {
            let v = algebra_log(g)?;
            let x = &gen.fields[0] * Complex64::new(v[0], 0.0)
                + &gen.fields[1] * Complex64::new(v[1], 0.0)
                + &gen.fields[2] * Complex64::new(v[2], 0.0);
            x.exp()
        }
        _ => {
            // infinite-dimensional: exponentiate a generously padded truncation
            let v = algebra_log(g)?;
            let big = truncated_generator(tag, dual, 2 * k + 32)?;
            let x = &big.fields[0] * Complex64::new(v[0], 0.0)
                + &big.fields[1] * Complex64::new(v[1], 0.0)
                + &big.fields[2] * Complex64::new(v[2], 0.0);
            let e = x.exp();
            let off = (big.laplacian.nrows() - keep) / 2;
            let off = if matches!(dual, DualParam::Sl2Discrete { .. }) {
                0
            } else {
                off
            };
            e.view((off, off), (keep, keep)).into_owned()
        }
    };
    Ok(trace_product(&heat, &rep))
}

/// `Tr(e^{tΔ̂_K} 𝔛_K(g))` for one point of the dual.
///
/// Fails with an accuracy error when raising `k` by 8 moves the trace by
/// more than `1e-9` (relative to `max(1, |trace|)`).
pub fn oracle_kernel_term(dual: &DualParam, g: &GroupElement, t: f64, k: usize) -> Result<Complex64> {
    crate::gft_kernels::check_time(t)?;
    let a = term_at(dual, g, t, k)?;
    if matches!(dual, DualParam::Su2 { .. } | DualParam::So3 { .. }) {
        return Ok(a);
    }
    let b = term_at(dual, g, t, k + 8)?;
    let diff = (a - b).norm();
    if diff > 1e-9 * a.norm().max(1.0) {
        return Err(Error::Accuracy {
            what: format!("oracle trace not converged at basis cut {k}"),
            tail: diff,
        });
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comm(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        a * b - b * a
    }

    #[test]
    fn spin_matrices_satisfy_su2_brackets() {
        let g = truncated_generator(GroupTag::SU2, &DualParam::Su2 { n: 5 }, 4).unwrap();
        let [p1, p2, k] = &g.fields;
        // [p₁,p₂] = k, [p₂,k] = p₁, [k,p₁] = p₂
        assert!((comm(p1, p2) - k).norm() < 1e-12);
        assert!((comm(p2, k) - p1).norm() < 1e-12);
        assert!((comm(k, p1) - p2).norm() < 1e-12);
    }

    #[test]
    fn discrete_ladder_satisfies_sl2_brackets_away_from_the_edge() {
        let g = truncated_generator(GroupTag::SL2, &DualParam::Sl2Discrete { n: 1.5 }, 12).unwrap();
        let [p1, p2, k] = &g.fields;
        let e = |m: DMatrix<Complex64>| m.view((0, 0), (10, 10)).norm();
        assert!(e(comm(p1, p2) + k) < 1e-12);
        assert!(e(comm(p2, k) - p1) < 1e-12);
        assert!(e(comm(k, p1) - p2) < 1e-12);
    }

    #[test]
    fn logs_invert_exp() {
        let v = [0.3, -0.7, 1.1];
        for tag in GroupTag::ALL {
            let g = tag.exp(v);
            let w = algebra_log(&g).unwrap();
            for (a, b) in v.iter().zip(&w) {
                assert!((a - b).abs() < 1e-10, "{tag}: {w:?}");
            }
        }
    }

    #[test]
    fn identity_trace_is_heat_trace() {
        let dual = DualParam::Se2 { lambda: 2.0 };
        let g = truncated_generator(GroupTag::SE2, &dual, 20).unwrap();
        let expect: f64 = generator_spectrum(&g).iter().map(|e| (0.4 * e).exp()).sum();
        let v = term_at(&dual, &GroupTag::SE2.identity(), 0.4, 20).unwrap();
        assert!((v.re - expect).abs() < 1e-10 && v.im.abs() < 1e-12);
    }

    #[test]
    fn rejects_small_cut_and_mismatch() {
        assert!(truncated_generator(GroupTag::SE2, &DualParam::Se2 { lambda: 1.0 }, 3).is_err());
        // exact for the compact groups, so the cut is not looked at
        assert!(truncated_generator(GroupTag::SU2, &DualParam::Su2 { n: 2 }, 3).is_ok());
        assert!(truncated_generator(GroupTag::H2, &DualParam::Su2 { n: 2 }, 8).is_err());
    }
}
