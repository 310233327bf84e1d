//! Mathieu characteristic values and functions (unit L² norm on [0, 2π)),
//! associated Legendre functions and the Mehler kernel.
//!
//! cargo run --release --example special_functions

use std::f64::consts::PI;

use hypoheat::specfun::{default_truncation, legendre_assoc, mathieu_spectrum, mehler_kernel, Parity};
use hypoheat::Result;

fn main() -> Result<()> {
    for q in [0.0, 1.0, 25.0] {
        let basis = mathieu_spectrum(q, 4, default_truncation(q, 4))?;
        let a: Vec<String> = (0..=4)
            .filter_map(|n| basis.a(n))
            .map(|v| format!("{v:.8}"))
            .collect();
        let b: Vec<String> = (1..=4)
            .filter_map(|n| basis.b(n))
            .map(|v| format!("{v:.8}"))
            .collect();
        println!("q = {q:>4}: a = [{}]", a.join(", "));
        println!("          b = [{}]", b.join(", "));
        // norm check by the trapezoid rule, exact for trigonometric polynomials
        let n = 512;
        let norm: f64 = (0..n)
            .map(|i| {
                basis
                    .eval(2, Parity::Even, 2.0 * PI * i as f64 / n as f64)
                    .map(|v| v * v)
            })
            .sum::<Result<f64>>()?
            * 2.0
            * PI
            / n as f64;
        println!("          ∫ ce_2² = {norm:.12}");
    }

    println!();
    for (r, s, x) in [(2usize, 1i64, 0.3), (10, 4, -0.7), (40, 20, 0.1)] {
        println!("P_{r}^{s}({x}) = {:.12e}", legendre_assoc(r, s, x)?);
    }

    println!();
    for lambda in [0.0, 0.5, 2.0] {
        println!(
            "Q_0.5^{lambda}(0.2, -0.1) = {:.12}",
            mehler_kernel(lambda, 0.5, 0.2, -0.1)?
        );
    }
    Ok(())
}
