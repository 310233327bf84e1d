//! Acceptance criteria 1–9. Runs as a plain binary (no libtest harness) so
//! that one PASS/FAIL line per criterion is always printed.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypoheat::gft_kernels::{kernel, KernelEvaluator};
use hypoheat::groups::{GroupElement, GroupTag, SE2Element, SL2Element, SU2Element};
use hypoheat::lie_core::{
    builtin, laplacian_coeffs_fd, AffPlusRFrame, FrameField, FramePointData, GrushinFrame, HeisenbergFrame,
    MartinetFrame, Se2Frame, DEFAULT_FD_STEP,
};
use hypoheat::verify::{
    covering_report, eigenvalue_reports, gaveau_report, h2_pde_report, mass_residual,
    plancherel_isometry_check, sample_points, se2_eigen_report, se2_oracle_report, semigroup_residual,
    symmetry_report, ReportContext, ResidualReport,
};
use hypoheat::{Result, TruncationPolicy};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn report(name: &str, value: f64, tol: f64, note: impl Into<String>) -> ResidualReport {
    ResidualReport::new(
        name,
        value,
        tol,
        ReportContext {
            group: None,
            t: None,
            note: note.into(),
        },
    )
}

fn random_su2(r: &mut ChaCha8Rng) -> SU2Element {
    SU2Element::exp([
        r.random_range(-PI..PI),
        r.random_range(-PI..PI),
        r.random_range(-PI..PI),
    ])
}

// ------------------------------------------------------------------ 1

fn eigenvalues() -> Result<Vec<ResidualReport>> {
    let mut out = eigenvalue_reports(30, 20, 5, 31)?;
    out.push(se2_eigen_report(
        &[0.25, 1.0, 2.5, 5.0, 7.5, 10.0, 15.0, 20.0],
        12,
        96,
    )?);
    Ok(out)
}

// ------------------------------------------------------------------ 2

fn covering() -> Result<Vec<ResidualReport>> {
    let mut r = rng(2);
    let samples: Vec<(SU2Element, f64)> = (0..20)
        .map(|_| (random_su2(&mut r), r.random_range(0.2..2.0)))
        .collect();
    Ok(vec![covering_report(&samples, &TruncationPolicy::default())?])
}

// ------------------------------------------------------------------ 3

fn gaveau() -> Result<Vec<ResidualReport>> {
    let mut r = rng(3);
    let samples: Vec<([f64; 3], f64)> = (0..8)
        .map(|_| {
            let p = [
                r.random_range(-1.5..1.5),
                r.random_range(-1.5..1.5),
                r.random_range(-2.0..2.0),
            ];
            (p, r.random_range(0.2..2.0))
        })
        .collect();
    Ok(vec![gaveau_report(&samples, &TruncationPolicy::default())?])
}

// ------------------------------------------------------------------ 4

fn semigroup_laws() -> Result<Vec<ResidualReport>> {
    let p = TruncationPolicy::default();
    let compact = p.clone().with_quad_nodes(40);
    let mut out = vec![
        mass_residual(GroupTag::SU2, 1.0, &compact)?.with_tolerance(1e-6),
        mass_residual(GroupTag::SO3, 1.0, &compact)?.with_tolerance(1e-6),
        mass_residual(GroupTag::H2, 0.5, &p)?.with_tolerance(1e-3),
        mass_residual(GroupTag::SE2, 0.5, &p.clone().with_quad_nodes(8))?.with_tolerance(1e-3),
        // the rotation direction is a bracket direction, so small t needs many angles
        mass_residual(GroupTag::SL2, 1.0, &p.clone().with_quad_nodes(24))?.with_tolerance(1e-3),
    ];
    let semi = |tag: GroupTag, nodes: usize, tol: f64| -> Result<ResidualReport> {
        Ok(semigroup_residual(
            tag,
            0.5,
            0.5,
            &sample_points(tag, 2),
            &p.clone().with_quad_nodes(nodes),
        )?
        .with_tolerance(tol))
    };
    out.push(semi(GroupTag::SU2, 64, 1e-4)?);
    out.push(semi(GroupTag::SO3, 64, 1e-4)?);
    out.push(semi(GroupTag::H2, 12, 1e-3)?);
    out.push(semi(GroupTag::SE2, 12, 1e-3)?);
    for tag in GroupTag::ALL {
        let mut r = rng(40 + tag as u64);
        let samples: Vec<GroupElement> = (0..4)
            .map(|_| {
                tag.exp([
                    r.random_range(-1.0..1.0),
                    r.random_range(-1.0..1.0),
                    r.random_range(-1.0..1.0),
                ])
            })
            .collect();
        out.push(symmetry_report(tag, 0.6, &samples, &p)?.with_tolerance(1e-6));
    }
    Ok(out)
}

// ------------------------------------------------------------------ 5

fn reality() -> Result<Vec<ResidualReport>> {
    let p = TruncationPolicy::default();
    let mut r = rng(5);
    let mut se2 = 0.0f64;
    let mut sl2 = 0.0f64;
    for _ in 0..50 {
        let t = r.random_range(0.2..2.0);
        let g = SE2Element::new(
            r.random_range(-PI..PI),
            r.random_range(-2.0..2.0),
            r.random_range(-2.0..2.0),
        )?;
        let k = KernelEvaluator::new(GroupTag::SE2, t, &p, g.x1().hypot(g.x2()))?;
        se2 = se2.max(k.eval(&GroupElement::SE2(g))?.imag_residual);
        let t = r.random_range(0.2..2.0);
        let h = SL2Element::exp([
            r.random_range(-1.5..1.5),
            r.random_range(-1.5..1.5),
            r.random_range(-1.5..1.5),
        ]);
        sl2 = sl2.max(kernel(GroupTag::SL2, &GroupElement::SL2(h), t, &p)?.imag_residual);
    }
    Ok(vec![
        report("imag_residual_se2", se2, 1e-8, "50 random (g, t)"),
        report("imag_residual_sl2", sl2, 1e-8, "50 random (g, t)"),
    ])
}

// ------------------------------------------------------------------ 6

fn oracles() -> Result<Vec<ResidualReport>> {
    let p = TruncationPolicy::default();
    let cases = [
        (0.5, 0.1, SE2Element::new(0.4, 0.3, -0.2)?),
        (2.0, 0.3, SE2Element::new(-1.2, 0.8, 0.5)?),
        (5.0, 0.1, SE2Element::new(2.5, -0.4, 0.9)?),
        (7.5, 0.5, SE2Element::identity()),
        (10.0, 0.1, SE2Element::new(0.9, 0.2, 0.1)?),
        (10.0, 1.0, SE2Element::new(-2.0, -0.3, 0.6)?),
    ];
    let se2 = se2_oracle_report(&cases, 64, &p)?;
    let points = [
        [0.0, 0.0, 0.0],
        [0.5, 0.0, 0.0],
        [0.0, 0.5, 0.2],
        [0.3, -0.4, 0.3],
        [0.0, 0.0, 0.5],
    ];
    let pde = h2_pde_report(&points, 0.5, &p)?;
    Ok(vec![se2, pde])
}

// ------------------------------------------------------------------ 7

fn lie_layer() -> Result<Vec<ResidualReport>> {
    let mut out = Vec::new();
    let mut bad = 0usize;
    for name in ["h2", "su2", "so3", "sl2", "se2"] {
        let spec = builtin(name)?;
        let lin: f64 = spec.laplacian_first_order().iter().map(|c| c.abs()).sum();
        if !spec.is_unimodular() || lin != 0.0 {
            bad += 1;
        }
    }
    out.push(report(
        "unimodular_five_groups",
        bad as f64,
        0.0,
        "failures among five",
    ));
    let aff = builtin("aff_plus_r")?;
    let c = aff.laplacian_first_order();
    let dev = (c[0] - 1.0).abs() + c[1].abs() + if aff.is_unimodular() { 1.0 } else { 0.0 };
    out.push(report(
        "aff_plus_r_first_order",
        dev,
        1e-12,
        format!("coefficients {c:?}"),
    ));

    let mut r = rng(7);
    let mut martinet = 0.0f64;
    let mut grushin = 0.0f64;
    for _ in 0..10 {
        let y = r.random_range(0.5..3.0) * if r.random_bool(0.5) { 1.0 } else { -1.0 };
        let q = [r.random_range(-2.0..2.0), y, r.random_range(-2.0..2.0)];
        let c = laplacian_coeffs_fd(&MartinetFrame, &q, DEFAULT_FD_STEP)?;
        martinet = martinet.max(c[0].abs()).max((c[1] + 1.0 / y).abs());
        let x = r.random_range(0.5..3.0) * if r.random_bool(0.5) { 1.0 } else { -1.0 };
        let q = [x, r.random_range(-2.0..2.0)];
        let c = laplacian_coeffs_fd(&GrushinFrame, &q, DEFAULT_FD_STEP)?;
        grushin = grushin.max((c[0] + 1.0 / x).abs()).max(c[1].abs());
    }
    out.push(report("martinet_minus_one_over_y", martinet, 1e-10, "10 points"));
    out.push(report("grushin_minus_one_over_x", grushin, 1e-10, "10 points"));

    let mut worst = 0.0f64;
    let fields: [&dyn FrameField; 4] = [&HeisenbergFrame, &Se2Frame, &AffPlusRFrame, &MartinetFrame];
    for field in fields {
        for _ in 0..5 {
            let q = [
                r.random_range(0.5..2.0),
                r.random_range(0.5..2.0),
                r.random_range(-1.0..1.0),
            ];
            let data = field.point_data(&q)?;
            let rho = data.popp_density()?;
            let th = r.random_range(-PI..PI);
            let (s, c) = th.sin_cos();
            let f = data.frame();
            let rot = vec![
                f[0].iter()
                    .zip(&f[1])
                    .map(|(a, b)| c * a + s * b)
                    .collect::<Vec<_>>(),
                f[0].iter()
                    .zip(&f[1])
                    .map(|(a, b)| -s * a + c * b)
                    .collect::<Vec<_>>(),
            ];
            // a constant rotation leaves [X1, X2] unchanged
            let mut br = std::collections::BTreeMap::new();
            let w = hypoheat::lie_core::BracketWord(vec![0, 1]);
            br.insert(w.clone(), data.bracket_value(&w)?);
            let rotated = FramePointData::new(3, rot, br)?;
            worst = worst.max((rotated.popp_density()? - rho).abs() / rho);
        }
    }
    out.push(report(
        "popp_rotation_invariance",
        worst,
        1e-10,
        "contact frames, 20 rotations",
    ));
    Ok(out)
}

// ------------------------------------------------------------------ 8

fn plancherel() -> Result<Vec<ResidualReport>> {
    let mut r = rng(8);
    let coeffs: Vec<DMatrix<Complex64>> = (0..=4usize)
        .map(|n| {
            DMatrix::from_fn(n + 1, n + 1, |_, _| {
                Complex64::new(r.random_range(-0.5..0.5), r.random_range(-0.5..0.5))
            })
        })
        .collect();
    Ok(vec![plancherel_isometry_check(&coeffs, 12)?.with_tolerance(1e-8)])
}

// ------------------------------------------------------------------ 9

fn determinism() -> Result<Vec<ResidualReport>> {
    let exe = env!("CARGO_BIN_EXE_hypoheat");
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let runs: Vec<Vec<String>> = vec![
        vec!["--config".into(), format!("{fixtures}/se2_grid.cfg")],
        vec![
            "--config".into(),
            format!("{fixtures}/se2_grid.cfg"),
            "--format".into(),
            "json".into(),
        ],
        "grid --group sl2 --time 0.4,0.9 --range v1:-1:1:3 --range v3:0:0.6:2"
            .split(' ')
            .map(String::from)
            .collect(),
        "eval --group so3 --point 0.4,-1.1,0.7 --time 0.3 --format json"
            .split(' ')
            .map(String::from)
            .collect(),
        vec![
            "popp".into(),
            "--frame-file".into(),
            format!("{fixtures}/martinet.frame"),
        ],
    ];
    let mut differing = 0usize;
    for args in &runs {
        let mut outputs = Vec::new();
        for threads in ["1", "1", "3"] {
            let o = Command::new(exe)
                .args(args)
                .env("HYPOHEAT_THREADS", threads)
                .output()
                .map_err(|e| hypoheat::Error::Numeric(format!("cannot run the binary: {e}")))?;
            if !o.status.success() {
                return Err(hypoheat::Error::Numeric(format!(
                    "{args:?} failed: {}",
                    String::from_utf8_lossy(&o.stderr)
                )));
            }
            outputs.push(o.stdout);
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            differing += 1;
        }
    }
    Ok(vec![report(
        "cli_byte_identical",
        differing as f64,
        0.0,
        format!("{} commands × 3 runs", runs.len()),
    )])
}

fn main() {
    type Check = fn() -> Result<Vec<ResidualReport>>;
    let criteria: [(&str, Check); 9] = [
        ("eigenvalue reproduction", eigenvalues),
        ("SO(3)/SU(2) covering identity", covering),
        ("H2 Gaveau normalisation", gaveau),
        ("mass, semigroup and symmetry", semigroup_laws),
        ("reality of SE(2) and SL(2) kernels", reality),
        ("oracle equivalence", oracles),
        ("Laplacian and measure layer", lie_layer),
        ("Plancherel isometry on SU(2)", plancherel),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, lines) = match check() {
            Ok(reports) => {
                let ok = reports.iter().all(|r| r.passed);
                let lines: Vec<String> = reports
                    .iter()
                    .map(|r| {
                        format!(
                            "      {} {:<28} {:.3e} (tol {:.0e}) {}",
                            if r.passed { "ok  " } else { "FAIL" },
                            r.name,
                            r.value,
                            r.tolerance,
                            r.context.note
                        )
                    })
                    .collect();
                (ok, lines)
            }
            Err(e) => (false, vec![format!("      error: {e}")]),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {}: {} {} [{:.1}s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            title,
            start.elapsed().as_secs_f64()
        );
        for l in lines {
            println!("{l}");
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
