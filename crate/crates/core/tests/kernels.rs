// Kernel-level properties: positivity, truncation monotonicity, long-time limit.

use hypoheat::gft_kernels::{kernel, KernelEvaluator};
use hypoheat::groups::{GroupElement, GroupTag};
use hypoheat::TruncationPolicy;

fn lattice(tag: GroupTag) -> Vec<GroupElement> {
    let mut pts = vec![tag.identity()];
    for a in [-0.8, 0.7] {
        for b in [-0.6, 0.9] {
            for c in [-1.1, 0.5] {
                pts.push(tag.exp([a, b, c]));
            }
        }
    }
    pts
}

fn extent(g: &GroupElement) -> f64 {
    match g {
        GroupElement::SE2(h) => h.x1().hypot(h.x2()),
        _ => 0.0,
    }
}

#[test]
fn kernels_are_nonnegative_on_grids() {
    let p = TruncationPolicy::default();
    for tag in GroupTag::ALL {
        let pts = lattice(tag);
        let reach = pts.iter().map(extent).fold(0.0, f64::max);
        for t in [0.25, 1.0, 4.0] {
            let k = KernelEvaluator::new(tag, t, &p, reach).unwrap();
            for g in &pts {
                let v = k.eval(g).unwrap().value;
                assert!(v > -p.abs_tol, "{tag} t={t} at {:?}: {v}", g.display_coords());
            }
        }
    }
}

#[test]
fn tightening_the_policy_stays_within_the_tail_estimate() {
    let loose = TruncationPolicy::default();
    let tight = loose.clone().with_abs_tol(1e-11);
    for tag in GroupTag::ALL {
        for g in lattice(tag).iter().take(4) {
            let a = kernel(tag, g, 1.0, &loose).unwrap();
            let b = kernel(tag, g, 1.0, &tight).unwrap();
            let diff = (a.value - b.value).abs();
            // round-off floor of the summation itself
            let floor = 1e-12 * a.value.abs().max(1.0);
            assert!(
                diff <= a.tail_estimate + b.tail_estimate + floor,
                "{tag} at {:?}: |Δ| = {diff:e}, tails {:e} / {:e}",
                g.display_coords(),
                a.tail_estimate,
                b.tail_estimate
            );
        }
    }
}

#[test]
fn compact_kernels_flatten_to_one() {
    let p = TruncationPolicy::default();
    // smallest nonzero |eigenvalue|: k² − kn − n/2 at n = 1, and s² − r(r+1) at r = 1, s = ±1
    for (tag, gap) in [(GroupTag::SU2, 0.5), (GroupTag::SO3, 1.0)] {
        let devs: Vec<f64> = [2.0, 5.0, 10.0, 20.0]
            .iter()
            .map(|&t| {
                lattice(tag)
                    .iter()
                    .map(|g| (kernel(tag, g, t, &p).unwrap().value - 1.0).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(devs.windows(2).all(|w| w[1] < w[0]), "{tag}: {devs:?}");
        let rate = (devs[2] / devs[3]).ln() / 10.0;
        // the next mode still weighs ~e^{-5} at t = 10
        assert!((rate - gap).abs() < 1e-2, "{tag}: decay rate {rate}");
    }
}

#[test]
fn symmetric_under_inversion_at_fixed_time() {
    let p = TruncationPolicy::default();
    for tag in GroupTag::ALL {
        for g in lattice(tag).iter().skip(1).take(3) {
            let a = kernel(tag, g, 0.7, &p).unwrap().value;
            let b = kernel(tag, &g.inverse(), 0.7, &p).unwrap().value;
            assert!((a - b).abs() < 1e-8 * a.abs().max(1.0), "{tag}: {a} vs {b}");
        }
    }
}

#[test]
fn se2_translation_rotation_holds_only_for_the_half_turn() {
    use hypoheat::groups::SE2Element;
    let p = TruncationPolicy::default();
    let k = KernelEvaluator::new(GroupTag::SE2, 0.5, &p, 1.0).unwrap();
    let at = |angle: f64, x1: f64, x2: f64| {
        k.eval(&GroupElement::SE2(SE2Element::new(angle, x1, x2).unwrap()))
            .unwrap()
            .value
    };
    let rotated = |psi: f64, angle: f64, x1: f64, x2: f64| {
        let (s, c) = f64::sin_cos(psi);
        at(angle, x1 * c - x2 * s, x1 * s + x2 * c)
    };
    for (angle, x1, x2) in [(0.3, 0.5, 0.2), (1.2, -0.4, 0.6), (0.0, 0.7, 0.0)] {
        let base = at(angle, x1, x2);
        // x -> -x maps span{p0, p1} to itself
        let half = rotated(std::f64::consts::PI, angle, x1, x2);
        assert!((base - half).abs() < 1e-8 * base.max(1.0), "{base} vs {half}");
    }
    // a quarter turn swaps the horizontal translation with the vertical one
    let base = at(0.0, 0.7, 0.0);
    let quarter = rotated(std::f64::consts::FRAC_PI_2, 0.0, 0.7, 0.0);
    assert!((base - quarter).abs() > 1e-2 * base, "{base} vs {quarter}");
}
