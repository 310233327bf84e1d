//! Periodic Mathieu functions `ce_n`, `se_n` and characteristic values.
//!
//! Normalisation: every function has unit norm in `L²([0, 2π), dθ)`, not the
//! classical `∫ ce² = π`. Signs are fixed by `ce_n(0) > 0` and `se_n'(0) > 0`.
//!
//! The eigenproblem `ψ'' + (a − 2q cos 2θ) ψ = 0` splits into four symmetric
//! tridiagonal problems, one per Fourier class:
//!
//! | class | basis            | orders      |
//! |-------|------------------|-------------|
//! | even, period π  | `cos 2kθ`      | `ce_{2r}`   |
//! | even, period 2π | `cos (2k+1)θ`  | `ce_{2r+1}` |
//! | odd,  period 2π | `sin (2k+1)θ`  | `se_{2r+1}` |
//! | odd,  period π  | `sin (2k+2)θ`  | `se_{2r+2}` |
//!
//! Within the even (odd) family the orders follow the sorted characteristic
//! values, which for `q ≥ 0` interleave the two Fourier classes.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// One Fourier class of the tridiagonal splitting.
#[allow(clippy::enum_variant_names)] // the period is the point
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FourierClass {
    EvenPi,
    EvenTwoPi,
    OddTwoPi,
    OddPi,
}

impl FourierClass {
    fn parity(self) -> Parity {
        match self {
            FourierClass::EvenPi | FourierClass::EvenTwoPi => Parity::Even,
            FourierClass::OddTwoPi | FourierClass::OddPi => Parity::Odd,
        }
    }

    fn first_frequency(self) -> usize {
        match self {
            FourierClass::EvenPi => 0,
            FourierClass::EvenTwoPi | FourierClass::OddTwoPi => 1,
            FourierClass::OddPi => 2,
        }
    }

    /// Order of the `r`-th eigenfunction of this class.
    fn order(self, r: usize) -> usize {
        match self {
            FourierClass::EvenPi => 2 * r,
            FourierClass::EvenTwoPi | FourierClass::OddTwoPi => 2 * r + 1,
            FourierClass::OddPi => 2 * r + 2,
        }
    }

    /// Number of basis functions with frequency at most `k`.
    fn size(self, k: usize) -> usize {
        let f0 = self.first_frequency();
        if k < f0 {
            0
        } else {
            (k - f0) / 2 + 1
        }
    }

    /// Symmetric tridiagonal matrix of `-d²/dθ² + 2q cos 2θ` in the
    /// orthonormal basis of this class.
    fn matrix(self, q: f64, k: usize) -> DMatrix<f64> {
        let n = self.size(k);
        let f0 = self.first_frequency();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            let f = (f0 + 2 * i) as f64;
            m[(i, i)] = f * f;
            if i + 1 < n {
                m[(i, i + 1)] = q;
                m[(i + 1, i)] = q;
            }
        }
        match self {
            FourierClass::EvenPi if n > 1 => {
                m[(0, 1)] = std::f64::consts::SQRT_2 * q;
                m[(1, 0)] = std::f64::consts::SQRT_2 * q;
            }
            FourierClass::EvenTwoPi if n > 0 => m[(0, 0)] += q,
            FourierClass::OddTwoPi if n > 0 => m[(0, 0)] -= q,
            _ => {}
        }
        m
    }

    /// Orthonormal basis function normalisation for the `i`-th coefficient.
    fn basis_norm(self, i: usize) -> f64 {
        if self == FourierClass::EvenPi && i == 0 {
            1.0 / (2.0 * PI).sqrt()
        } else {
            1.0 / PI.sqrt()
        }
    }
}

/// A single Mathieu function with its Fourier expansion.
///
/// `coeffs[i]` multiplies `cos(k_i θ)` (even) or `sin(k_i θ)` (odd) with
/// `k_i = first_frequency + 2 i`.
#[derive(Debug, Clone, Serialize)]
pub struct MathieuFunction {
    pub order: usize,
    pub parity: Parity,
    pub eigenvalue: f64,
    pub first_frequency: usize,
    pub coeffs: Vec<f64>,
}

impl MathieuFunction {
    pub fn frequency(&self, i: usize) -> usize {
        self.first_frequency + 2 * i
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * self.basis(self.frequency(i) as f64 * theta))
            .sum()
    }

    pub fn eval_derivative(&self, theta: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.frequency(i) as f64;
                match self.parity {
                    Parity::Even => -c * k * (k * theta).sin(),
                    Parity::Odd => c * k * (k * theta).cos(),
                }
            })
            .sum()
    }

    pub fn eval_second_derivative(&self, theta: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.frequency(i) as f64;
                -c * k * k * self.basis(k * theta)
            })
            .sum()
    }

    /// Values at the uniform grid `θ_j = 2πj/n`.
    pub fn eval_on_grid(&self, n: usize) -> Vec<f64> {
        let h = 2.0 * PI / n as f64;
        (0..n).map(|j| self.eval(j as f64 * h)).collect()
    }

    fn basis(&self, x: f64) -> f64 {
        match self.parity {
            Parity::Even => x.cos(),
            Parity::Odd => x.sin(),
        }
    }
}

/// Eigenvalues and unit-norm eigenfunctions of Mathieu's equation at fixed `q`.
#[derive(Debug, Clone, Serialize)]
pub struct MathieuBasis {
    q: f64,
    truncation: usize,
    /// `even[n]` is `ce_n`.
    even: Vec<MathieuFunction>,
    /// `odd[n - 1]` is `se_n`.
    odd: Vec<MathieuFunction>,
}

impl MathieuBasis {
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn n_max(&self) -> usize {
        self.even.len().saturating_sub(1)
    }

    pub fn ce(&self, n: usize) -> Option<&MathieuFunction> {
        self.even.get(n)
    }

    pub fn se(&self, n: usize) -> Option<&MathieuFunction> {
        if n == 0 {
            None
        } else {
            self.odd.get(n - 1)
        }
    }

    pub fn get(&self, n: usize, parity: Parity) -> Option<&MathieuFunction> {
        match parity {
            Parity::Even => self.ce(n),
            Parity::Odd => self.se(n),
        }
    }

    /// Characteristic value `a_n(q)`.
    pub fn a(&self, n: usize) -> Option<f64> {
        self.ce(n).map(|f| f.eigenvalue)
    }

    /// Characteristic value `b_n(q)`.
    pub fn b(&self, n: usize) -> Option<f64> {
        self.se(n).map(|f| f.eigenvalue)
    }

    /// All functions, even ones first.
    pub fn functions(&self) -> impl Iterator<Item = &MathieuFunction> {
        self.even.iter().chain(self.odd.iter())
    }

    pub fn eval(&self, n: usize, parity: Parity, theta: f64) -> Result<f64> {
        self.get(n, parity)
            .map(|f| f.eval(theta))
            .ok_or_else(|| Error::Input(format!("order {n} ({parity:?}) not in basis")))
    }
}

/// Default truncation order: `max(2 n_max + 16, ⌈2√q⌉ + 24)`.
pub fn default_truncation(q: f64, n_max: usize) -> usize {
    (2 * n_max + 16).max((2.0 * q.max(0.0).sqrt()).ceil() as usize + 24)
}

/// Eigenpairs with orders `0..=n_max` (`ce`) and `1..=n_max` (`se`).
///
/// `k` is the highest Fourier frequency kept. Convergence is checked by
/// repeating the solve with `k + 8`.
pub fn mathieu_spectrum(q: f64, n_max: usize, k: usize) -> Result<MathieuBasis> {
    if !(q >= 0.0) || !q.is_finite() {
        return Err(Error::Input(format!("q must be finite and >= 0, got {q}")));
    }
    let needed = 2 * n_max + 16;
    if k < needed {
        return Err(Error::Truncation {
            k,
            suggested: default_truncation(q, n_max),
        });
    }
    let coarse = solve_all(q, n_max, k);
    let fine = solve_all(q, n_max, k + 8);
    for (a, b) in coarse.functions().zip(fine.functions()) {
        if (a.eigenvalue - b.eigenvalue).abs() > 1e-12 * (1.0 + a.eigenvalue.abs()) {
            return Err(Error::Truncation {
                k,
                suggested: k.max(default_truncation(q, n_max)) + 16,
            });
        }
    }
    Ok(coarse)
}

/// Same as [`mathieu_spectrum`] without the convergence re-solve.
pub(crate) fn mathieu_spectrum_unchecked(q: f64, n_max: usize, k: usize) -> MathieuBasis {
    solve_all(q, n_max, k.max(2 * n_max + 16))
}

fn solve_all(q: f64, n_max: usize, k: usize) -> MathieuBasis {
    let mut even = Vec::with_capacity(n_max + 1);
    let mut odd = Vec::with_capacity(n_max);
    let ep = solve_class(FourierClass::EvenPi, q, k);
    let e2 = solve_class(FourierClass::EvenTwoPi, q, k);
    let o2 = solve_class(FourierClass::OddTwoPi, q, k);
    let op = solve_class(FourierClass::OddPi, q, k);
    for n in 0..=n_max {
        let src = if n % 2 == 0 { &ep } else { &e2 };
        even.push(src[n / 2].clone());
        if n >= 1 {
            let src = if n % 2 == 1 { &o2 } else { &op };
            odd.push(src[(n - 1) / 2].clone());
        }
    }
    MathieuBasis {
        q,
        truncation: k,
        even,
        odd,
    }
}

fn solve_class(class: FourierClass, q: f64, k: usize) -> Vec<MathieuFunction> {
    let m = class.matrix(q, k);
    let n = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    idx.iter()
        .enumerate()
        .map(|(r, &col)| {
            let mut coeffs: Vec<f64> = (0..n)
                .map(|i| eig.eigenvectors[(i, col)] * class.basis_norm(i))
                .collect();
            let f0 = class.first_frequency();
            let sign_probe: f64 = match class.parity() {
                Parity::Even => coeffs.iter().sum(),
                Parity::Odd => coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * (f0 + 2 * i) as f64)
                    .sum(),
            };
            if sign_probe < 0.0 {
                coeffs.iter_mut().for_each(|c| *c = -*c);
            }
            MathieuFunction {
                order: class.order(r),
                parity: class.parity(),
                eigenvalue: eig.eigenvalues[col],
                first_frequency: f0,
                coeffs,
            }
        })
        .collect()
}
