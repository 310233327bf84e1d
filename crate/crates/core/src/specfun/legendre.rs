//! Associated Legendre functions without the Condon–Shortley phase:
//!
//! `P_r^s(x) = (1 − x²)^{s/2} / (r! 2^r) · d^{r+s}/dx^{r+s} (x² − 1)^r`,
//!
//! for `−r ≤ s ≤ r`. Evaluation goes through the fully normalised recurrence
//! so large degrees neither overflow nor lose digits.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// `P_r^s(x)` in the convention above.
///
/// `|s| > r` yields [`Error::OrderExceedsDegree`]; the function is zero there.
pub fn legendre_assoc(r: usize, s: i64, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Input(format!("|x| must be <= 1, got {x}")));
    }
    let m = s.unsigned_abs() as usize;
    if m > r {
        return Err(Error::OrderExceedsDegree { r, s });
    }
    let pbar = normalized_column(r, m, x)[r - m];
    // log of (r - m)! / (r + m)!
    let log_ratio = ln_gamma((r - m + 1) as f64) - ln_gamma((r + m + 1) as f64);
    let scale = (2 * r + 1) as f64;
    let value = if s >= 0 {
        pbar * (-0.5 * log_ratio).exp() / scale.sqrt()
    } else {
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * pbar * (0.5 * log_ratio).exp() / scale.sqrt()
    };
    Ok(value)
}

/// `P̄_k^m(x)` for `k = m..=r`, normalised so that `½∫₋₁¹ (P̄_k^m)² dx = 1`.
fn normalized_column(r: usize, m: usize, x: f64) -> Vec<f64> {
    let sin = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 1..=m {
        let kf = k as f64;
        pmm *= ((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * sin;
    }
    let mut out = Vec::with_capacity(r - m + 1);
    out.push(pmm);
    if r == m {
        return out;
    }
    let mf = m as f64;
    out.push((2.0 * mf + 3.0).sqrt() * x * pmm);
    for k in (m + 2)..=r {
        let kf = k as f64;
        let a = ((4.0 * kf * kf - 1.0) / (kf * kf - mf * mf)).sqrt();
        let km1 = kf - 1.0;
        let b = ((km1 * km1 - mf * mf) / (4.0 * km1 * km1 - 1.0)).sqrt();
        let next = a * (x * out[k - m - 1] - b * out[k - m - 2]);
        out.push(next);
    }
    out
}

/// Triangular table of `P̄_k^m(x)` for `0 ≤ m ≤ k ≤ r_max`.
#[derive(Debug, Clone)]
pub struct NormalizedLegendreTable {
    r_max: usize,
    values: Vec<f64>,
}

impl NormalizedLegendreTable {
    pub fn new(r_max: usize, x: f64) -> Self {
        let mut values = vec![0.0; (r_max + 1) * (r_max + 2) / 2];
        for m in 0..=r_max {
            for (i, v) in normalized_column(r_max, m, x).into_iter().enumerate() {
                let k = m + i;
                values[k * (k + 1) / 2 + m] = v;
            }
        }
        Self { r_max, values }
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    /// `P̄_k^m(x)` for `m ≤ k ≤ r_max`.
    pub fn get(&self, k: usize, m: usize) -> f64 {
        self.values[k * (k + 1) / 2 + m]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees() {
        for &x in &[-0.9, -0.2, 0.0, 0.4, 1.0] {
            assert!((legendre_assoc(0, 0, x).unwrap() - 1.0).abs() < 1e-15);
            assert!((legendre_assoc(1, 0, x).unwrap() - x).abs() < 1e-15);
            let s = (1.0 - x * x).sqrt();
            assert!((legendre_assoc(1, 1, x).unwrap() - s).abs() < 4e-15);
            assert!((legendre_assoc(1, -1, x).unwrap() + 0.5 * s).abs() < 4e-15);
            let p22 = 3.0 * (1.0 - x * x);
            assert!((legendre_assoc(2, 2, x).unwrap() - p22).abs() < 1e-13);
        }
    }

    #[test]
    fn order_beyond_degree_is_flagged() {
        assert_eq!(
            legendre_assoc(2, 3, 0.1),
            Err(Error::OrderExceedsDegree { r: 2, s: 3 })
        );
    }

    #[test]
    fn table_matches_direct() {
        let x = 0.3;
        let t = NormalizedLegendreTable::new(12, x);
        for k in 0..=12usize {
            for m in 0..=k {
                let direct = legendre_assoc(k, m as i64, x).unwrap();
                let log_ratio = ln_gamma((k - m + 1) as f64) - ln_gamma((k + m + 1) as f64);
                let expect = direct * ((2 * k + 1) as f64).sqrt() * (0.5 * log_ratio).exp();
                assert!((t.get(k, m) - expect).abs() < 1e-12 * (1.0 + expect.abs()));
            }
        }
    }
}
