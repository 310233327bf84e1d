//! Special functions used by the kernel formulas.

mod legendre;
mod mathieu;
mod mehler;

pub use legendre::{legendre_assoc, NormalizedLegendreTable};
pub(crate) use mathieu::mathieu_spectrum_unchecked;
pub use mathieu::{default_truncation, mathieu_spectrum, MathieuBasis, MathieuFunction, Parity};
pub use mehler::mehler_kernel;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// `√(Γ(2|n| + m) / (Γ(2|n|) Γ(m + 1)))`, the weight of `z^m` in the
/// orthonormal basis of the discrete series with weight `n`.
pub fn sl2_basis_coeff(n: f64, m: usize) -> Result<f64> {
    let two_n = 2.0 * n.abs();
    if (two_n - two_n.round()).abs() > 1e-12 || n.abs() < 1.0 {
        return Err(Error::Input(format!(
            "discrete series weight must be a half-integer with |n| >= 1, got {n}"
        )));
    }
    let log = ln_gamma(two_n + m as f64) - ln_gamma(two_n) - ln_gamma(m as f64 + 1.0);
    let value = (0.5 * log).exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numeric(format!(
            "basis coefficient overflows at n={n}, m={m}"
        )))
    }
}
