use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Below this value of `|λ| t` the Gaussian limit is returned.
const SMALL_LAMBDA_T: f64 = 1e-8;

/// Mehler kernel: heat kernel of `d²/dθ² − λ²θ²` on the line.
///
/// `Q_t^λ(θ, θ̄) = √(λ / (2π sinh 2λt)) · exp(−½ λ coth(2λt)(θ² + θ̄²) + λθθ̄ / sinh 2λt)`
pub fn mehler_kernel(lambda: f64, t: f64, theta: f64, theta_bar: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Input(format!("t must be > 0, got {t}")));
    }
    let l = lambda.abs();
    if l * t < SMALL_LAMBDA_T {
        let d = theta - theta_bar;
        return Ok((4.0 * PI * t).powf(-0.5) * (-d * d / (4.0 * t)).exp());
    }
    let x = 2.0 * l * t;
    // ln sinh x, safe for large x
    let ln_sinh = if x > 20.0 {
        x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
    } else {
        x.sinh().ln()
    };
    let coth = 1.0 / x.tanh();
    let inv_sinh = (-ln_sinh).exp();
    let log_q = 0.5 * (l.ln() - (2.0 * PI).ln() - ln_sinh)
        - 0.5 * l * coth * (theta * theta + theta_bar * theta_bar)
        + l * theta * theta_bar * inv_sinh;
    Ok(log_q.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;

    #[test]
    fn symmetric() {
        let a = mehler_kernel(1.3, 0.4, 0.2, -0.7).unwrap();
        let b = mehler_kernel(1.3, 0.4, -0.7, 0.2).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn gaussian_limit_is_continuous() {
        let t = 0.3;
        let g = mehler_kernel(0.0, t, 0.4, 0.1).unwrap();
        let near = mehler_kernel(1e-5, t, 0.4, 0.1).unwrap();
        assert!((g - near).abs() < 1e-9);
    }

    #[test]
    fn semigroup_by_quadrature() {
        let (l, t, s) = (0.8, 0.3, 0.45);
        let gl = GaussLegendre::new(60);
        let nodes = gl.composite(-12.0, 12.0, 8);
        let conv: f64 = nodes
            .iter()
            .map(|&(x, w)| w * mehler_kernel(l, t, 0.3, x).unwrap() * mehler_kernel(l, s, x, -0.5).unwrap())
            .sum();
        let direct = mehler_kernel(l, t + s, 0.3, -0.5).unwrap();
        assert!((conv - direct).abs() < 1e-8);
    }

    #[test]
    fn rejects_non_positive_time() {
        assert!(mehler_kernel(1.0, 0.0, 0.0, 0.0).is_err());
    }
}
