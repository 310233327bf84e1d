use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::generator::{generator_spectrum, oracle_kernel_term, truncated_generator, DualParam};
use super::pde::{h2_pde_max_step, h2_pde_oracle, Axis};
use super::{ReportContext, ResidualReport};
use crate::error::{Error, Result};
use crate::gft_kernels::{
    h2_kernel, h2_kernel_gaveau, se2_lambda_integrand, sl2_kernel, HalfInteger, Se2HeatKernel, So3HeatKernel,
    So3Method, Su2HeatKernel,
};
use crate::groups::{
    haar_quadrature, GroupElement, GroupTag, H2Element, SE2Element, SU11Element, SU2Element, SE2_HAAR_SCALE,
    SL2_HAAR_SCALE,
};
use crate::policy::TruncationPolicy;
use crate::quadrature::{periodic_nodes, GaussLegendre, KahanSum};
use crate::specfun::mathieu_spectrum;

fn ctx(group: Option<GroupTag>, t: Option<f64>, note: impl Into<String>) -> ReportContext {
    ReportContext {
        group: group.map(|g| g.to_string()),
        t,
        note: note.into(),
    }
}

/// Max absolute deviation between two equal-length lists.
fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------- spectra

/// Eigenvalues of the truncated generators against the closed forms: SU(2)
/// `k² − kn − n/2` (n ≤ `n_max`), SO(3) `s² − r(r+1)` (r ≤ `r_max`), SL(2)
/// discrete `−(|n| + 2m|n| + m²)` (|n| ≤ `n_disc`, m < `m_count`) and the
/// two continuous families on a few `v`.
pub fn eigenvalue_reports(
    n_max: usize,
    r_max: usize,
    n_disc: usize,
    m_count: usize,
) -> Result<Vec<ResidualReport>> {
    let sorted = |mut v: Vec<f64>| {
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let mut out = Vec::new();
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        let gen = truncated_generator(GroupTag::SU2, &DualParam::Su2 { n }, 4)?;
        let nf = n as f64;
        let expect = sorted(
            (0..=n)
                .map(|k| {
                    let k = k as f64;
                    k * k - k * nf - nf / 2.0
                })
                .collect(),
        );
        worst = worst.max(max_dev(&generator_spectrum(&gen), &expect));
        // Δ̂ is diagonal in the weight basis
        let off = off_diagonal(&gen.laplacian);
        worst = worst.max(off);
    }
    out.push(ResidualReport::new(
        "eigen_su2",
        worst,
        1e-12,
        ctx(Some(GroupTag::SU2), None, format!("n ≤ {n_max}")),
    ));

    let mut worst = 0.0f64;
    for r in 0..=r_max {
        let gen = truncated_generator(GroupTag::SO3, &DualParam::So3 { r }, 4)?;
        let rf = r as f64;
        let expect = sorted(
            (-(r as i64)..=r as i64)
                .map(|s| (s * s) as f64 - rf * (rf + 1.0))
                .collect(),
        );
        worst = worst.max(max_dev(&generator_spectrum(&gen), &expect));
    }
    out.push(ResidualReport::new(
        "eigen_so3",
        worst,
        1e-12,
        ctx(Some(GroupTag::SO3), None, format!("r ≤ {r_max}")),
    ));

    let mut worst = 0.0f64;
    for twice in 2..=2 * n_disc as i32 {
        for sign in [1, -1] {
            let n = HalfInteger::from_twice(sign * twice).value();
            let gen = truncated_generator(GroupTag::SL2, &DualParam::Sl2Discrete { n }, m_count)?;
            let a = n.abs();
            let diag: Vec<f64> = (0..m_count).map(|m| gen.laplacian[(m, m)].re).collect();
            let expect: Vec<f64> = (0..m_count)
                .map(|m| {
                    let m = m as f64;
                    -(a + 2.0 * m * a + m * m)
                })
                .collect();
            worst = worst
                .max(max_dev(&diag, &expect))
                .max(off_diagonal(&gen.laplacian));
        }
    }
    out.push(ResidualReport::new(
        "eigen_sl2_discrete",
        worst,
        1e-12,
        ctx(
            Some(GroupTag::SL2),
            None,
            format!("|n| ≤ {n_disc}, m < {m_count}"),
        ),
    ));

    let mut worst = 0.0f64;
    for v in [0.3, 1.0, 2.7] {
        for j in [0.0, 0.5] {
            let k = 20;
            let gen = truncated_generator(GroupTag::SL2, &DualParam::Sl2Continuous { j, v }, k)?;
            let diag: Vec<f64> = (0..=2 * k).map(|i| gen.laplacian[(i, i)].re).collect();
            let expect: Vec<f64> = (-(k as i64)..=k as i64)
                .map(|m| {
                    let m = m as f64;
                    if j == 0.0 {
                        -(m * m + v * v + 0.25)
                    } else {
                        -(m * m + m + v * v + 0.5)
                    }
                })
                .collect();
            let imag = gen
                .laplacian
                .diagonal()
                .iter()
                .fold(0.0f64, |a, z| a.max(z.im.abs()));
            worst = worst
                .max(max_dev(&diag, &expect))
                .max(off_diagonal(&gen.laplacian))
                .max(imag);
        }
    }
    out.push(ResidualReport::new(
        "eigen_sl2_continuous",
        worst,
        1e-12,
        ctx(Some(GroupTag::SL2), None, "j ∈ {0, ½}"),
    ));
    Ok(out)
}

fn off_diagonal(m: &DMatrix<Complex64>) -> f64 {
    let mut w = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                w = w.max(m[(i, j)].norm());
            }
        }
    }
    w
}

/// SE(2): lowest `count` eigenvalues of the Fourier-mode `Δ̂^λ` (cut `k`)
/// against `−λ²/2 − a_n(λ²/4)`, `−λ²/2 − b_n(λ²/4)` from the Mathieu solver.
pub fn se2_eigen_report(lambdas: &[f64], count: usize, k: usize) -> Result<ResidualReport> {
    let mut worst = 0.0f64;
    for &lambda in lambdas {
        let gen = truncated_generator(GroupTag::SE2, &DualParam::Se2 { lambda }, k)?;
        let fourier = generator_spectrum(&gen);
        let q = lambda * lambda / 4.0;
        let basis = mathieu_spectrum(q, count, crate::specfun::default_truncation(q, count))?;
        let mut mathieu: Vec<f64> = basis
            .functions()
            .map(|f| -lambda * lambda / 2.0 - f.eigenvalue)
            .collect();
        mathieu.sort_by(|a, b| b.total_cmp(a));
        worst = worst.max(max_dev(&fourier[..count], &mathieu[..count]));
    }
    Ok(ResidualReport::new(
        "eigen_se2",
        worst,
        1e-10,
        ctx(
            Some(GroupTag::SE2),
            None,
            format!("λ ∈ {lambdas:?}, lowest {count}, |k| ≤ {k}"),
        ),
    ))
}

// ---------------------------------------------------------------- oracles

/// Per-λ SE(2) integrand from the Mathieu series against the truncated
/// matrix exponential in Fourier modes.
pub fn se2_oracle_report(
    cases: &[(f64, f64, SE2Element)],
    k: usize,
    policy: &TruncationPolicy,
) -> Result<ResidualReport> {
    let mut worst = 0.0f64;
    for (lambda, t, g) in cases {
        let a = se2_lambda_integrand(*lambda, g, *t, policy)?;
        let b = oracle_kernel_term(&DualParam::Se2 { lambda: *lambda }, &GroupElement::SE2(*g), *t, k)?;
        worst = worst.max((a - b).norm());
    }
    Ok(ResidualReport::new(
        "oracle_se2_integrand",
        worst,
        1e-8,
        ctx(
            Some(GroupTag::SE2),
            None,
            format!("{} cases, K = {k}", cases.len()),
        ),
    ))
}

/// H₂ kernel against the explicit PDE grid at `points`, relative error.
pub fn h2_pde_report(points: &[[f64; 3]], t: f64, policy: &TruncationPolicy) -> Result<ResidualReport> {
    let axes = [
        Axis::new(-4.0, 4.0, 0.125)?,
        Axis::new(-4.0, 4.0, 0.125)?,
        Axis::new(-3.0, 3.0, 0.125)?,
    ];
    let grid = h2_pde_oracle(axes, t, h2_pde_max_step(&axes), 0.12, 0.06)?;
    let mut worst = 0.0f64;
    for p in points {
        let v = grid
            .value_at(*p)
            .ok_or_else(|| Error::Input(format!("{p:?} is outside the PDE box")))?;
        let k = h2_kernel(&H2Element::new(p[0], p[1], p[2])?, t, policy)?.value;
        worst = worst.max((v - k).abs() / k.abs());
    }
    Ok(ResidualReport::new(
        "oracle_h2_pde",
        worst,
        0.05,
        ctx(
            Some(GroupTag::H2),
            Some(t),
            format!("{} points, mass drift {:.2e}", points.len(), grid.mass_drift),
        ),
    ))
}

// ---------------------------------------------------------------- identities

/// `|p^{SO(3)}_t(Ad g) − ½(p^{SU(2)}_t(g) + p^{SU(2)}_t(−g))|` with the SO(3)
/// side from the direct sphere method.
pub fn covering_report(samples: &[(SU2Element, f64)], policy: &TruncationPolicy) -> Result<ResidualReport> {
    let mut worst = 0.0f64;
    for (g, t) in samples {
        let su2 = Su2HeatKernel::new(*t, policy)?;
        let so3 = So3HeatKernel::new(*t, policy, So3Method::Direct)?;
        let avg = 0.5 * (su2.eval(g).value + su2.eval(&g.neg()).value);
        worst = worst.max((so3.eval(&g.ad_cover()).value - avg).abs());
    }
    Ok(ResidualReport::new(
        "covering_so3_su2",
        worst,
        1e-6,
        ctx(Some(GroupTag::SO3), None, format!("{} samples", samples.len())),
    ))
}

/// `|¼ p_{t/2}(x, y, z/4) − p^{Gaveau}_t(x, y, z)|`.
pub fn gaveau_report(samples: &[([f64; 3], f64)], policy: &TruncationPolicy) -> Result<ResidualReport> {
    let mut worst = 0.0f64;
    for ([x, y, z], t) in samples {
        let ours = h2_kernel(&H2Element::new(*x, *y, z / 4.0)?, t / 2.0, policy)?.value;
        let gav = h2_kernel_gaveau(&H2Element::new(*x, *y, *z)?, *t, policy)?.value;
        worst = worst.max((0.25 * ours - gav).abs());
    }
    Ok(ResidualReport::new(
        "gaveau_h2",
        worst,
        1e-10,
        ctx(Some(GroupTag::H2), None, format!("{} samples", samples.len())),
    ))
}

// ---------------------------------------------------------------- evaluators

/// Kernel evaluator for one group at one time, reused across many points.
enum Eval {
    H2(TruncationPolicy),
    Su2(Su2HeatKernel),
    So3(So3HeatKernel),
    Sl2(TruncationPolicy),
    Se2(Se2HeatKernel),
}

impl Eval {
    fn new(tag: GroupTag, t: f64, policy: &TruncationPolicy, extent: f64) -> Result<Self> {
        Ok(match tag {
            GroupTag::H2 => Eval::H2(policy.clone()),
            GroupTag::SU2 => Eval::Su2(Su2HeatKernel::new(t, policy)?),
            GroupTag::SO3 => Eval::So3(So3HeatKernel::new(t, policy, So3Method::Covering)?),
            GroupTag::SL2 => Eval::Sl2(policy.clone()),
            GroupTag::SE2 => Eval::Se2(Se2HeatKernel::new(t, policy, extent)?),
        })
    }

    fn at(&self, g: &GroupElement, t: f64) -> Result<f64> {
        Ok(match (self, g) {
            (Eval::H2(p), GroupElement::H2(h)) => h2_kernel(h, t, p)?.value,
            (Eval::Su2(k), GroupElement::SU2(h)) => k.eval(h).value,
            (Eval::So3(k), GroupElement::SO3(h)) => k.eval(h).value,
            (Eval::Sl2(p), GroupElement::SL2(h)) => sl2_kernel(h, t, p)?.value,
            (Eval::Se2(k), GroupElement::SE2(h)) => k.eval(h)?.value,
            _ => return Err(Error::Input(format!("evaluator does not match {}", g.tag()))),
        })
    }
}

/// `max |p_t(g) − p_t(g⁻¹)|` over `samples`.
pub fn symmetry_report(
    tag: GroupTag,
    t: f64,
    samples: &[GroupElement],
    policy: &TruncationPolicy,
) -> Result<ResidualReport> {
    let extent = samples
        .iter()
        .map(|g| match g {
            GroupElement::SE2(h) => h.x1().hypot(h.x2()),
            _ => 0.0,
        })
        .fold(0.0, f64::max);
    let ev = Eval::new(tag, t, policy, extent)?;
    let mut worst = 0.0f64;
    for g in samples {
        worst = worst.max((ev.at(g, t)? - ev.at(&g.inverse(), t)?).abs());
    }
    Ok(ResidualReport::new(
        format!("symmetry_{tag}"),
        worst,
        1e-6,
        ctx(Some(tag), Some(t), format!("{} samples", samples.len())),
    ))
}

/// `−min p_t` over `samples` (passes when the kernel is above `−abs_tol`).
pub fn positivity_report(
    tag: GroupTag,
    t: f64,
    samples: &[GroupElement],
    policy: &TruncationPolicy,
) -> Result<ResidualReport> {
    let extent = samples
        .iter()
        .map(|g| match g {
            GroupElement::SE2(h) => h.x1().hypot(h.x2()),
            _ => 0.0,
        })
        .fold(0.0, f64::max);
    let ev = Eval::new(tag, t, policy, extent)?;
    let mut low = f64::INFINITY;
    for g in samples {
        low = low.min(ev.at(g, t)?);
    }
    Ok(ResidualReport::new(
        format!("positivity_{tag}"),
        (-low).max(0.0),
        policy.abs_tol,
        ctx(
            Some(tag),
            Some(t),
            format!("min {low:e} over {} samples", samples.len()),
        ),
    ))
}

// ---------------------------------------------------------------- mass

/// Box half-width used for the noncompact checks at time `t`.
fn box_for(t: f64) -> f64 {
    8.0 * t.sqrt()
}

/// `|∫_G p_t dμ − 1|` with the Haar normalisation of the groups module.
///
/// SU(2), SO(3): the Haar rule with `policy.quad_nodes`. H₂: cylinder of
/// radius `8√t` (the kernel is radial in `(x, y)` and even in `z`). SE(2):
/// angle times the square `[−8√t, 8√t]²`. SL(2): polar chart, using that
/// the kernel only depends on `(r, φ)`.
pub fn mass_residual(tag: GroupTag, t: f64, policy: &TruncationPolicy) -> Result<ResidualReport> {
    let (mass, tol, note) = match tag {
        GroupTag::SU2 | GroupTag::SO3 => {
            let ev = Eval::new(tag, t, policy, 0.0)?;
            let rule = haar_quadrature(tag, policy)?;
            let mut s = KahanSum::new();
            for (g, w) in rule.iter() {
                s.add(w * ev.at(g, t)?);
            }
            (s.value(), 1e-6, format!("{} Haar nodes", rule.len()))
        }
        GroupTag::H2 => {
            let l = box_for(t);
            let zmax = l.max(12.0 * t);
            let gl = GaussLegendre::new(24);
            let rs = gl.composite(0.0, l, 6);
            let zs = gl.composite(0.0, zmax, 8);
            let mut s = KahanSum::new();
            for &(r, wr) in &rs {
                for &(z, wz) in &zs {
                    let v = h2_kernel(&H2Element::new(r, 0.0, z)?, t, policy)?.value;
                    s.add(2.0 * 2.0 * PI * r * wr * wz * v);
                }
            }
            (s.value(), 1e-3, format!("cylinder r ≤ {l:.3}, |z| ≤ {zmax:.3}"))
        }
        GroupTag::SE2 => {
            let l = box_for(t);
            let k = Se2HeatKernel::new(t, policy, l * std::f64::consts::SQRT_2)?;
            let axis = GaussLegendre::new(policy.quad_nodes).composite(-l, l, policy.box_panels);
            let (ys, ws): (Vec<f64>, Vec<f64>) = axis.iter().cloned().unzip();
            let n_a = policy.quad_nodes.max(16);
            let mut s = KahanSum::new();
            for a in periodic_nodes(n_a) {
                let vals = k.eval_tensor_re(a, [0.0, 0.0], [[1.0, 0.0], [0.0, 1.0]], &ys, &ys)?;
                for (i, wi) in ws.iter().enumerate() {
                    for (j, wj) in ws.iter().enumerate() {
                        s.add(wi * wj * vals[i * ys.len() + j]);
                    }
                }
            }
            let h = 2.0 * PI / n_a as f64;
            (
                SE2_HAAR_SCALE * h * s.value(),
                1e-3,
                format!("box {l:.3}, {n_a} angles"),
            )
        }
        GroupTag::SL2 => {
            let r_max = policy.box_half_width.unwrap_or(box_for(t).min(6.0));
            let radial = GaussLegendre::new(policy.quad_nodes).composite(0.0, r_max, policy.box_panels);
            let n_phi = policy.quad_nodes.max(16);
            let mut s = KahanSum::new();
            for &(r, wr) in &radial {
                for phi in periodic_nodes(n_phi) {
                    let g = SU11Element::from_polar(r, phi, 0.0).to_sl2();
                    let v = sl2_kernel(&g, t, policy)?.value;
                    s.add(wr * r.sinh() * r.cosh() * v);
                }
            }
            let h = 2.0 * PI / n_phi as f64;
            (
                SL2_HAAR_SCALE * 2.0 * PI * h * s.value(),
                1e-3,
                format!("r ≤ {r_max:.3}, {n_phi} angles"),
            )
        }
    };
    Ok(ResidualReport::new(
        format!("mass_{tag}"),
        (mass - 1.0).abs(),
        tol,
        ctx(Some(tag), Some(t), format!("mass {mass:.12}; {note}")),
    ))
}

// ---------------------------------------------------------------- semigroup

/// `max_g |p_{t+s}(g) − ∫ p_t(h) p_s(h⁻¹g) dμ(h)|` over `samples`.
///
/// Compact groups use the Haar rule with `policy.quad_nodes`; H₂ and SE(2)
/// integrate `h` over a box of half-width `8√max(t,s)` (the tolerance
/// absorbs the truncation). SL(2) is not covered.
pub fn semigroup_residual(
    tag: GroupTag,
    t: f64,
    s: f64,
    samples: &[GroupElement],
    policy: &TruncationPolicy,
) -> Result<ResidualReport> {
    crate::gft_kernels::check_time(s)?;
    let l = box_for(t.max(s));
    let (worst, tol) = match tag {
        GroupTag::SU2 | GroupTag::SO3 => {
            let (et, es, ets) = (
                Eval::new(tag, t, policy, 0.0)?,
                Eval::new(tag, s, policy, 0.0)?,
                Eval::new(tag, t + s, policy, 0.0)?,
            );
            let rule = haar_quadrature(tag, policy)?;
            let pt: Vec<f64> = rule.nodes.iter().map(|h| et.at(h, t)).collect::<Result<_>>()?;
            let mut worst = 0.0f64;
            for g in samples {
                let mut acc = KahanSum::new();
                for ((h, w), p) in rule.iter().zip(&pt) {
                    acc.add(w * p * es.at(&h.inverse().mul(g)?, s)?);
                }
                worst = worst.max((acc.value() - ets.at(g, t + s)?).abs());
            }
            (worst, 1e-4)
        }
        GroupTag::H2 => {
            let p = policy.clone().with_box(l);
            let rule = haar_quadrature(tag, &p)?;
            let pt: Vec<f64> = rule
                .nodes
                .iter()
                .map(|h| match h {
                    GroupElement::H2(h) => h2_kernel(h, t, policy).map(|r| r.value),
                    _ => unreachable!(),
                })
                .collect::<Result<_>>()?;
            let mut worst = 0.0f64;
            for g in samples {
                let mut acc = KahanSum::new();
                for ((h, w), p) in rule.iter().zip(&pt) {
                    if w * p.abs() < 1e-16 {
                        continue;
                    }
                    if let GroupElement::H2(x) = h.inverse().mul(g)? {
                        acc.add(w * p * h2_kernel(&x, s, policy)?.value);
                    }
                }
                let GroupElement::H2(gg) = g else {
                    return Err(Error::Input("sample is not an H2 element".into()));
                };
                worst = worst.max((acc.value() - h2_kernel(gg, t + s, policy)?.value).abs());
            }
            (worst, 1e-3)
        }
        GroupTag::SE2 => (se2_semigroup(t, s, l, samples, policy)?, 1e-3),
        GroupTag::SL2 => {
            return Err(Error::UnsupportedGroup("sl2 semigroup check".into()));
        }
    };
    Ok(ResidualReport::new(
        format!("semigroup_{tag}"),
        worst,
        tol,
        ctx(Some(tag), Some(t), format!("s = {s}, {} samples", samples.len())),
    ))
}

fn se2_semigroup(t: f64, s: f64, l: f64, samples: &[GroupElement], policy: &TruncationPolicy) -> Result<f64> {
    let gs: Vec<SE2Element> = samples
        .iter()
        .map(|g| match g {
            GroupElement::SE2(h) => Ok(*h),
            _ => Err(Error::Input("sample is not an SE2 element".into())),
        })
        .collect::<Result<_>>()?;
    let reach = gs.iter().map(|g| g.x1().hypot(g.x2())).fold(0.0, f64::max);
    let box_reach = l * std::f64::consts::SQRT_2;
    let kt = Se2HeatKernel::new(t, policy, box_reach)?;
    let ks = Se2HeatKernel::new(s, policy, box_reach + reach)?;
    let kts = Se2HeatKernel::new(t + s, policy, reach)?;
    let axis = GaussLegendre::new(policy.quad_nodes).composite(-l, l, policy.box_panels);
    let (ys, ws): (Vec<f64>, Vec<f64>) = axis.iter().cloned().unzip();
    let n = ys.len();
    let n_a = policy.quad_nodes.max(16);
    let h = 2.0 * PI / n_a as f64;
    let mut acc: Vec<KahanSum> = gs.iter().map(|_| KahanSum::new()).collect();
    for a in periodic_nodes(n_a) {
        let pt = kt.eval_tensor_re(a, [0.0, 0.0], [[1.0, 0.0], [0.0, 1.0]], &ys, &ys)?;
        let (sn, cs) = a.sin_cos();
        for (g, acc) in gs.iter().zip(acc.iter_mut()) {
            // h⁻¹g = (α_g − a, R(−a)(x_g − y)) for h = (a, y)
            let c = [cs * g.x1() + sn * g.x2(), -sn * g.x1() + cs * g.x2()];
            let axes = [[-cs, sn], [-sn, -cs]];
            let ps = ks.eval_tensor_re(g.angle() - a, c, axes, &ys, &ys)?;
            for i in 0..n {
                for j in 0..n {
                    acc.add(ws[i] * ws[j] * pt[i * n + j] * ps[i * n + j]);
                }
            }
        }
    }
    let mut worst = 0.0f64;
    for (g, acc) in gs.iter().zip(&acc) {
        let conv = SE2_HAAR_SCALE * h * acc.value();
        worst = worst.max((conv - kts.eval(g)?.value).abs());
    }
    Ok(worst)
}

// ---------------------------------------------------------------- Plancherel

/// Unitary `𝔛^n(g)` on polynomials of degree ≤ n in the orthonormal basis
/// `√C(n,k) z^k`: `p(z) ↦ (β̄z + ᾱ)^n p((αz − β)/(β̄z + ᾱ))`.
pub fn su2_rep_matrix(n: usize, g: &SU2Element) -> DMatrix<Complex64> {
    let (a, b) = (g.alpha(), g.beta());
    let binom = |n: usize, k: usize| (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    let mut m = DMatrix::zeros(n + 1, n + 1);
    for k in 0..=n {
        // (αz − β)^k (β̄z + ᾱ)^{n−k}
        let mut poly = vec![Complex64::new(1.0, 0.0)];
        let mul = |p: &[Complex64], c0: Complex64, c1: Complex64| -> Vec<Complex64> {
            let mut q = vec![Complex64::new(0.0, 0.0); p.len() + 1];
            for (i, x) in p.iter().enumerate() {
                q[i] += x * c0;
                q[i + 1] += x * c1;
            }
            q
        };
        for _ in 0..k {
            poly = mul(&poly, -b, a);
        }
        for _ in 0..n - k {
            poly = mul(&poly, a.conj(), b.conj());
        }
        for (l, c) in poly.iter().enumerate() {
            m[(l, k)] = c * (binom(n, k) / binom(n, l)).sqrt();
        }
    }
    m
}

/// `|∫|f|² dμ − Σ_n (n+1) Tr(f̂(n) f̂(n)*)|` for
/// `f(g) = Σ_n (n+1) Tr(f̂(n) 𝔛^n(g))` with `coeffs[n]` of size `(n+1)²`,
/// using the SU(2) Haar rule with `nodes` points per direction.
pub fn plancherel_isometry_check(coeffs: &[DMatrix<Complex64>], nodes: usize) -> Result<ResidualReport> {
    for (n, c) in coeffs.iter().enumerate() {
        if c.nrows() != n + 1 || c.ncols() != n + 1 {
            return Err(Error::Dimension {
                expected: n + 1,
                got: c.nrows(),
            });
        }
    }
    let spectral: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| (n + 1) as f64 * c.norm_squared())
        .sum();
    let policy = TruncationPolicy::default().with_quad_nodes(nodes);
    let rule = haar_quadrature(GroupTag::SU2, &policy)?;
    let mut s = KahanSum::new();
    for (g, w) in rule.iter() {
        let GroupElement::SU2(h) = g else { unreachable!() };
        let mut f = Complex64::new(0.0, 0.0);
        for (n, c) in coeffs.iter().enumerate() {
            let rep = su2_rep_matrix(n, h);
            f += (c * rep).trace() * (n + 1) as f64;
        }
        s.add(w * f.norm_sqr());
    }
    let value = (s.value() - spectral).abs();
    Ok(ResidualReport::new(
        "plancherel_su2",
        value,
        1e-8,
        ctx(
            Some(GroupTag::SU2),
            None,
            format!(
                "‖f‖² = {spectral:.12}, degree ≤ {}",
                coeffs.len().saturating_sub(1)
            ),
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_rep_is_a_unitary_homomorphism() {
        let g = SU2Element::exp([0.3, -1.2, 0.8]);
        let h = SU2Element::exp([-0.5, 0.4, 2.0]);
        for n in 0..5 {
            let a = su2_rep_matrix(n, &g);
            let u = &a * a.adjoint();
            assert!((u - DMatrix::identity(n + 1, n + 1)).norm() < 1e-12);
            let prod = su2_rep_matrix(n, &g.mul(&h));
            let ab = &a * su2_rep_matrix(n, &h);
            let ba = su2_rep_matrix(n, &h) * &a;
            assert!((&prod - ab).norm() < 1e-12 || (&prod - ba).norm() < 1e-12);
        }
    }

    #[test]
    fn plancherel_constant_function() {
        let r = plancherel_isometry_check(&[DMatrix::identity(1, 1)], 4).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn compact_mass_is_one() {
        let p = TruncationPolicy::default().with_quad_nodes(40);
        for tag in [GroupTag::SU2, GroupTag::SO3] {
            let r = mass_residual(tag, 1.0, &p).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn gaveau_identity() {
        let r = gaveau_report(&[([0.3, -0.2, 0.9], 0.7)], &TruncationPolicy::default()).unwrap();
        assert!(r.passed, "{r:?}");
    }
}
