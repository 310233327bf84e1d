//! Group elements: products, the SU(2) -> SO(3) cover, the SL(2) ≅ SU(1,1)
//! isomorphism, JSON and Haar quadrature.
//!
//! cargo run --release --example group_elements

use hypoheat::groups::{haar_quadrature, GroupElement, GroupTag, SL2Element, SU2Element};
use hypoheat::{Result, TruncationPolicy};

fn main() -> Result<()> {
    for tag in GroupTag::ALL {
        let g = tag.exp([0.4, -0.3, 0.7]);
        let h = tag.exp([-1.0, 0.2, 0.1]);
        let gh = g.mul(&h)?;
        println!(
            "{tag}: g·h = {}",
            serde_json::to_string(&gh).expect("serialisable")
        );
        let back: GroupElement =
            serde_json::from_str(&serde_json::to_string(&gh).expect("serialisable")).expect("valid element");
        assert_eq!(back, gh);
    }

    let u = SU2Element::exp([0.3, 1.1, -0.4]);
    let r = u.ad_cover();
    println!("\nAd(u) =\n{}", r.matrix());
    println!(
        "Ad(-u) == Ad(u): {}",
        (u.neg().ad_cover().matrix() - r.matrix()).amax() < 1e-15
    );

    let s = SL2Element::exp([0.5, -0.2, 0.9]);
    let p = s.pi_iso();
    println!(
        "Π(s): α = {:.6}, β = {:.6}, |α|² − |β|² = {:.3e}",
        p.alpha(),
        p.beta(),
        p.alpha().norm_sqr() - p.beta().norm_sqr() - 1.0
    );

    println!();
    let policy = TruncationPolicy::default().with_quad_nodes(12);
    for tag in [GroupTag::SU2, GroupTag::SO3] {
        let rule = haar_quadrature(tag, &policy)?;
        println!(
            "{tag} Haar rule: {} nodes, total weight {:.15}",
            rule.len(),
            rule.total_weight()
        );
    }
    Ok(())
}
