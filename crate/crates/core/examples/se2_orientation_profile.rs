//! Roto-translation diffusion: the SE(2) kernel along the x1 axis for a few
//! orientations, the shape used for contour completion in image analysis.
//! The kernel is prepared once per time and evaluated at many points.
//!
//! cargo run --release --example se2_orientation_profile

use hypoheat::gft_kernels::KernelEvaluator;
use hypoheat::groups::{GroupElement, GroupTag, SE2Element};
use hypoheat::{Result, TruncationPolicy};

fn main() -> Result<()> {
    let t = 0.5;
    let xs: Vec<f64> = (0..9).map(|i| -1.0 + 0.25 * i as f64).collect();
    let k = KernelEvaluator::new(GroupTag::SE2, t, &TruncationPolicy::default(), 1.0)?;
    print!("{:>8}", "angle\\x1");
    for x in &xs {
        print!("{x:>10.2}");
    }
    println!();
    for angle in [0.0, 0.4, 0.8, 1.6] {
        print!("{angle:>8.2}");
        for &x in &xs {
            let g = GroupElement::SE2(SE2Element::new(angle, x, 0.0)?);
            print!("{:>10.5}", k.eval(&g)?.value);
        }
        println!();
    }
    Ok(())
}
