//! The hypoelliptic heat kernel on each of the five groups, with the
//! truncation diagnostics that come with every value.
//!
//! cargo run --release --example heat_kernels

use hypoheat::gft_kernels::kernel;
use hypoheat::groups::GroupTag;
use hypoheat::{Result, TruncationPolicy};

fn main() -> Result<()> {
    let policy = TruncationPolicy::default();
    println!(
        "{:<5} {:>5} {:>22} {:>12} {:>12}",
        "group", "t", "p_t(exp v)", "tail", "imag"
    );
    for tag in GroupTag::ALL {
        for t in [0.25, 1.0] {
            let g = tag.exp([0.3, -0.2, 0.4]);
            let k = kernel(tag, &g, t, &policy)?;
            println!(
                "{:<5} {:>5} {:>22.15e} {:>12.3e} {:>12.3e}",
                tag.as_str(),
                t,
                k.value,
                k.tail_estimate,
                k.imag_residual
            );
        }
    }

    // tighter tolerance: the change stays inside the reported tail
    let g = GroupTag::H2.exp([0.5, 0.5, 0.5]);
    let loose = kernel(GroupTag::H2, &g, 0.5, &policy)?;
    let tight = kernel(GroupTag::H2, &g, 0.5, &policy.clone().with_abs_tol(1e-12))?;
    println!(
        "\nh2 tighten: Δ = {:.3e}, tail = {:.3e}",
        (loose.value - tight.value).abs(),
        loose.tail_estimate
    );
    Ok(())
}
