// Randomised invariants of the group, special-function and Lie layers.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use hypoheat::groups::{GroupElement, GroupTag, SE2Element, SL2Element, SO3Element, SU2Element};
use hypoheat::lie_core::{builtin, laplacian_coeffs_fd, AffPlusRFrame, HeisenbergFrame, DEFAULT_FD_STEP};
use hypoheat::specfun::{default_truncation, legendre_assoc, mathieu_spectrum, mehler_kernel};

fn coords() -> impl Strategy<Value = [f64; 3]> {
    [-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64]
}

fn tag() -> impl Strategy<Value = GroupTag> {
    prop::sample::select(GroupTag::ALL.to_vec())
}

fn distance(a: &GroupElement, b: &GroupElement) -> f64 {
    let se2 = a.tag() == GroupTag::SE2;
    a.display_coords()
        .iter()
        .zip(b.display_coords())
        .enumerate()
        .map(|(i, (x, y))| {
            let d = (x - y).abs();
            // SE(2) stores the angle in [0, 2π)
            if se2 && i == 0 {
                d.min(2.0 * PI - d)
            } else {
                d
            }
        })
        .fold(0.0, f64::max)
}

fn c_close(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn associativity(tag in tag(), a in coords(), b in coords(), c in coords()) {
        let (g, h, k) = (tag.exp(a), tag.exp(b), tag.exp(c));
        let left = g.mul(&h).unwrap().mul(&k).unwrap();
        let right = g.mul(&h.mul(&k).unwrap()).unwrap();
        let id = left.mul(&right.inverse()).unwrap();
        prop_assert!(distance(&id, &tag.identity()) < 1e-12, "{tag}: {:?}", id.display_coords());
    }

    #[test]
    fn inverse_is_two_sided(tag in tag(), a in coords()) {
        let g = tag.exp(a);
        let e = tag.identity();
        prop_assert!(distance(&g.mul(&g.inverse()).unwrap(), &e) < 1e-12);
        prop_assert!(distance(&g.inverse().mul(&g).unwrap(), &e) < 1e-12);
    }

    #[test]
    fn json_round_trip_is_exact(tag in tag(), a in coords()) {
        let g = tag.exp(a);
        let text = serde_json::to_string(&g).unwrap();
        let back: GroupElement = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, g);
        let key = format!("\"group\":\"{tag}\"");
        prop_assert!(text.contains(&key), "{}", text);
    }

    #[test]
    fn ad_cover_is_a_two_to_one_homomorphism(a in coords(), b in coords()) {
        let (g, h) = (SU2Element::exp(a), SU2Element::exp(b));
        let lhs = g.mul(&h).ad_cover();
        let rhs = g.ad_cover().mul(&h.ad_cover());
        prop_assert!((lhs.matrix() - rhs.matrix()).amax() < 1e-12);
        prop_assert!((g.neg().ad_cover().matrix() - g.ad_cover().matrix()).amax() < 1e-15);
        // Ad(g) = Ad(k) forces k = ±g
        let k = g.ad_cover().lift();
        let plus = c_close(k.alpha(), g.alpha()) + c_close(k.beta(), g.beta());
        let minus = c_close(k.alpha(), -g.alpha()) + c_close(k.beta(), -g.beta());
        prop_assert!(plus.min(minus) < 1e-12);
    }

    #[test]
    fn pi_iso_is_a_homomorphism(a in coords(), b in coords()) {
        let (g, h) = (SL2Element::exp(a), SL2Element::exp(b));
        let lhs = g.mul(&h).pi_iso();
        let rhs = g.pi_iso().mul(&h.pi_iso());
        let scale = 1.0 + lhs.alpha().norm();
        prop_assert!(c_close(lhs.alpha(), rhs.alpha()) < 1e-12 * scale);
        prop_assert!(c_close(lhs.beta(), rhs.beta()) < 1e-12 * scale);
        prop_assert!((lhs.to_sl2().matrix() - g.mul(&h).matrix()).amax() < 1e-12 * scale);
    }

    #[test]
    fn so3_log_inverts_exp(v in [-1.5..1.5f64, -1.5..1.5f64, -1.5..1.5f64]) {
        let w = SO3Element::exp(v).log();
        for i in 0..3 {
            prop_assert!((w[i] - v[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn legendre_three_term_recurrence(r in 1usize..40, s_frac in 0.0..1.0f64, x in -0.999..0.999f64) {
        let s = (s_frac * r as f64).floor() as i64;
        if s > r as i64 - 1 {
            return Ok(());
        }
        let rf = r as f64;
        let sf = s as f64;
        let p_next = legendre_assoc(r + 1, s, x).unwrap();
        let p = legendre_assoc(r, s, x).unwrap();
        let p_prev = legendre_assoc(r - 1, s, x).unwrap();
        let lhs = (rf - sf + 1.0) * p_next;
        let rhs = (2.0 * rf + 1.0) * x * p - (rf + sf) * p_prev;
        let scale = lhs.abs().max(((2.0 * rf + 1.0) * p).abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() < 1e-12 * scale, "r={r} s={s} x={x}: {lhs} vs {rhs}");
    }

    #[test]
    fn mathieu_functions_solve_the_ode(q in 0.0..100.0f64) {
        let basis = mathieu_spectrum(q, 8, default_truncation(q, 8)).unwrap();
        for f in basis.functions() {
            let a = f.eigenvalue;
            for i in 0..100 {
                let x = 2.0 * PI * i as f64 / 100.0;
                let res = f.eval_second_derivative(x) + (a - 2.0 * q * (2.0 * x).cos()) * f.eval(x);
                prop_assert!(res.abs() < 1e-8 * (1.0 + a.abs()), "q={q} order {}: {res}", f.order);
            }
        }
    }

    #[test]
    fn mehler_mass_at_most_one(lambda in 0.0..5.0f64, t in 0.05..2.0f64, theta in -2.0..2.0f64) {
        // midpoint rule on a window that holds the Gaussian part
        let half = 12.0 * (2.0 * t).sqrt() + theta.abs();
        let n = 4000;
        let h = 2.0 * half / n as f64;
        let mass: f64 = (0..n)
            .map(|i| mehler_kernel(lambda, t, theta, -half + (i as f64 + 0.5) * h).unwrap() * h)
            .sum();
        prop_assert!(mass <= 1.0 + 1e-10, "{mass}");
        prop_assert!(mass > 0.0);
    }

    #[test]
    fn heisenberg_frame_has_no_first_order_term(q in coords()) {
        let c = laplacian_coeffs_fd(&HeisenbergFrame, &q, DEFAULT_FD_STEP).unwrap();
        prop_assert!(c.iter().all(|x| x.abs() < 1e-10), "{c:?}");
    }

    #[test]
    fn aff_plus_r_frame_sign(a in 0.2..3.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64) {
        // divergence of the left-invariant a ∂a against Popp: −1 on L1, none on L2
        let coeffs = laplacian_coeffs_fd(&AffPlusRFrame, &[a, b, c], DEFAULT_FD_STEP).unwrap();
        prop_assert!((coeffs[0] + 1.0).abs() < 1e-9, "{coeffs:?}");
        prop_assert!(coeffs[1].abs() < 1e-9, "{coeffs:?}");
    }
}

#[test]
fn mehler_mass_tends_to_one_as_lambda_vanishes() {
    let mass = |lambda: f64| -> f64 {
        let (t, half, n) = (0.5f64, 15.0f64, 6000);
        let h = 2.0 * half / n as f64;
        (0..n)
            .map(|i| mehler_kernel(lambda, t, 0.3, -half + (i as f64 + 0.5) * h).unwrap() * h)
            .sum()
    };
    let m: Vec<f64> = [1.0, 0.1, 0.01, 0.0].iter().map(|&l| mass(l)).collect();
    assert!(m.windows(2).all(|w| w[0] < w[1]), "{m:?}");
    assert!((m[3] - 1.0).abs() < 1e-12, "{m:?}");
}

#[test]
fn product_chains_keep_invariants() {
    let step = [0.37, -0.61, 0.23];
    for tag in [GroupTag::SU2, GroupTag::SO3, GroupTag::SL2, GroupTag::SE2] {
        let a = tag.exp(step);
        let b = tag.exp([-0.2, 0.45, 0.9]);
        let mut g = tag.identity();
        for i in 0..10_000 {
            g = g.mul(if i % 3 == 0 { &b } else { &a }).unwrap();
        }
        // rebuilding from stored components re-runs every invariant check
        let back = match &g {
            GroupElement::SU2(x) => {
                assert!(x.drift() < 1e-9, "{}", x.drift());
                GroupElement::SU2(SU2Element::new(x.alpha(), x.beta()).unwrap())
            }
            GroupElement::SO3(x) => {
                assert!(x.drift() < 1e-9, "{}", x.drift());
                GroupElement::SO3(SO3Element::new(*x.matrix()).unwrap())
            }
            GroupElement::SL2(x) => {
                assert!(x.drift() < 1e-9, "{}", x.drift());
                GroupElement::SL2(SL2Element::new(*x.matrix()).unwrap())
            }
            GroupElement::SE2(x) => GroupElement::SE2(SE2Element::new(x.angle(), x.x1(), x.x2()).unwrap()),
            GroupElement::H2(_) => unreachable!(),
        };
        assert_eq!(back.tag(), tag);
    }
}

#[test]
fn five_groups_are_step_two_and_unimodular() {
    for name in ["h2", "su2", "so3", "sl2", "se2"] {
        let spec = builtin(name).unwrap();
        assert_eq!(spec.growth_vector().unwrap(), vec![2, 3], "{name}");
        assert_eq!(spec.horizontal().len(), 2);
        assert!(spec.jacobi_residual() < 1e-12);
        assert!(spec.is_unimodular());
        assert!(spec.laplacian_first_order().iter().all(|&c| c == 0.0));
    }
    let aff = builtin("aff_plus_r").unwrap();
    assert!(!aff.is_unimodular());
    assert!(aff.laplacian_first_order().iter().any(|&c| c != 0.0));
}
