//! Structure constants, growth vectors, unimodularity and the first-order
//! part of the intrinsic sub-Laplacian.
//!
//! cargo run --release --example lie_algebra

use hypoheat::lie_core::{
    builtin, laplacian_coeffs_fd, FrameField, GrushinFrame, MartinetFrame, DEFAULT_FD_STEP,
};
use hypoheat::Result;

fn main() -> Result<()> {
    println!(
        "{:<12} {:>8} {:>11} first-order coefficients",
        "algebra", "growth", "unimodular"
    );
    for name in ["h2", "su2", "so3", "sl2", "se2", "aff_plus_r"] {
        let spec = builtin(name)?;
        println!(
            "{:<12} {:>8} {:>11} {:?}",
            name,
            format!("{:?}", spec.growth_vector()?),
            spec.is_unimodular(),
            spec.laplacian_first_order()
        );
    }

    // Martinet: Popp density and the -1/y term on L2, away from the singular plane y = 0
    println!();
    for y in [0.5, 1.0, 2.0, -3.0] {
        let q = [0.0, y, 0.0];
        let density = MartinetFrame.point_data(&q)?.popp_density()?;
        let c = laplacian_coeffs_fd(&MartinetFrame, &q, DEFAULT_FD_STEP)?;
        println!(
            "martinet y = {y:>4}: density {density:.6}  coeffs [{:+.10}, {:+.10}]",
            c[0], c[1]
        );
    }
    match MartinetFrame.point_data(&[0.0, 0.0, 0.0])?.growth_vector() {
        Ok(g) => println!("martinet y = 0: growth {g:?}"),
        Err(e) => println!("martinet y = 0: {e}"),
    }

    // Grushin plane: coefficient -1/x on X1
    for x in [0.5, 1.5] {
        let c = laplacian_coeffs_fd(&GrushinFrame, &[x, 0.3], DEFAULT_FD_STEP)?;
        println!("grushin  x = {x}: coeffs [{:+.10}, {:+.10}]", c[0], c[1]);
    }
    Ok(())
}
