//! Fourier-side view: the sub-Laplacian in a unitary irreducible
//! representation, truncated to a finite basis, and its spectrum.
//!
//! cargo run --release --example fourier_generators

use hypoheat::groups::GroupTag;
use hypoheat::verify::{generator_spectrum, truncated_generator, DualParam};
use hypoheat::Result;

fn show(tag: GroupTag, dual: DualParam, k: usize) -> Result<()> {
    let gen = truncated_generator(tag, &dual, k)?;
    let mut spec = generator_spectrum(&gen);
    spec.sort_by(|a, b| b.total_cmp(a));
    let head: Vec<String> = spec.iter().take(5).map(|v| format!("{v:.6}")).collect();
    println!("{tag} {dual:?}: {}", head.join(", "));
    Ok(())
}

fn main() -> Result<()> {
    show(GroupTag::SU2, DualParam::Su2 { n: 4 }, 0)?;
    show(GroupTag::SO3, DualParam::So3 { r: 2 }, 0)?;
    show(GroupTag::SL2, DualParam::Sl2Discrete { n: 1.5 }, 12)?;
    show(GroupTag::SL2, DualParam::Sl2Continuous { j: 0.0, v: 1.0 }, 12)?;
    show(GroupTag::SE2, DualParam::Se2 { lambda: 2.0 }, 40)?;
    Ok(())
}
