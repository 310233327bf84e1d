use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::su2::jacobi_0b;
use super::{check_time, KernelResult};
use crate::error::{Error, Result};
use crate::groups::{SL2Element, SU11Element};
use crate::policy::TruncationPolicy;
use crate::quadrature::{ComplexSum, GaussLegendre, KahanSum};
use crate::specfun::sl2_basis_coeff;

/// Default radius of the coefficient-extraction contour.
pub const SL2_CONTOUR_RADIUS: f64 = 0.6;

const MAX_CIRCLE_NODES: usize = 1 << 18;
const V_NODES: usize = 20;

/// A half-integer `n`, stored as `2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInteger(i32);

impl HalfInteger {
    pub fn from_twice(two_n: i32) -> Self {
        Self(two_n)
    }

    pub fn new(n: f64) -> Result<Self> {
        let two = 2.0 * n;
        if !two.is_finite() || (two - two.round()).abs() > 1e-12 || two.abs() > 1e9 {
            return Err(Error::Input(format!("{n} is not a half-integer")));
        }
        Ok(Self(two.round() as i32))
    }

    pub fn twice(&self) -> i32 {
        self.0
    }

    pub fn value(&self) -> f64 {
        0.5 * self.0 as f64
    }
}

/// Nodes `x_k` on the unit circle and weights summing to one, clustered at
/// the minimum of `|β̄x + ᾱ|` by a disc automorphism so that the width of
/// the peak (`~e^{−2r}` for `|β| = sinh r`) is resolved with `~e^{r}` nodes.
fn circle_rule(alpha: Complex64, beta: Complex64, n: usize) -> Vec<(Complex64, f64)> {
    let (na, nb) = (alpha.norm(), beta.norm());
    let (rot, c) = if nb > 1e-14 {
        let r = nb.asinh();
        ((alpha.conj() * beta) / (na * nb), -(0.5 * r).tanh())
    } else {
        (Complex64::new(1.0, 0.0), 0.0)
    };
    (0..n)
        .map(|k| {
            let y = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            let x = rot * (y + c) / (1.0 + y * c);
            let jac = (1.0 - c * c) / (1.0 + y * c).norm_sqr();
            (x / x.norm(), jac / n as f64)
        })
        .collect()
}

fn check_j(j: f64) -> Result<()> {
    if j == 0.0 || j == 0.5 {
        Ok(())
    } else {
        Err(Error::Input(format!("j must be 0 or 1/2, got {j}")))
    }
}

/// `⟨ψ_{m'}, 𝔛^{j,s}(G) ψ_m⟩`, `s = ½ + iv`, by circle quadrature with
/// `nodes` points, in the convention
/// `(1/2π) ∫ |β̄x+ᾱ|^{−2s} ((β̄x+ᾱ)/|β̄x+ᾱ|)^{2j} ((αx+β)/(β̄x+ᾱ))^{−m} x^{m'} dθ`
/// with `(α, β)` taken from `G⁻¹`.
pub fn sl2_continuous_entry(
    j: f64,
    v: f64,
    m_row: i64,
    m: i64,
    g: &SU11Element,
    nodes: usize,
) -> Result<Complex64> {
    check_j(j)?;
    if !(v >= 0.0 && v.is_finite()) || nodes == 0 {
        return Err(Error::Input("need v ≥ 0 and a positive node count".into()));
    }
    let gi = g.inverse();
    let (al, be) = (gi.alpha(), gi.beta());
    let mut sum = ComplexSum::new();
    for (x, w) in circle_rule(al, be, nodes) {
        let d = be.conj() * x + al.conj();
        let nd = d.norm();
        let mut f = Complex64::from_polar(nd.powf(-1.0), -2.0 * v * nd.ln());
        if j == 0.5 {
            f *= d / nd;
        }
        let mob = (al * x + be) / d;
        f *= mob.powi(-(m as i32)) * x.powi(m_row as i32);
        sum.add(f * w);
    }
    Ok(sum.value())
}

/// Diagonal element of the continuous series, see [`sl2_continuous_entry`].
pub fn sl2_continuous_matrix_element(
    j: f64,
    v: f64,
    m: i64,
    g: &SU11Element,
    nodes: usize,
) -> Result<Complex64> {
    sl2_continuous_entry(j, v, m, m, g, nodes)
}

/// `⟨ψ_{m'}^n, 𝔛^n(G) ψ_m^n⟩` of the discrete series by coefficient
/// extraction on `|z| = ρ`: the coefficient of `z^{m'}` in
/// `(β̄z+ᾱ)^{−2|n|} ((αz+β)/(β̄z+ᾱ))^m`, rescaled by the basis weights,
/// `(α, β)` from `G⁻¹`; conjugated for `n < 0`.
pub fn sl2_discrete_contour_element(
    n: HalfInteger,
    m_row: usize,
    m: usize,
    g: &SU11Element,
    rho: f64,
    nodes: usize,
) -> Result<Complex64> {
    let two_n = n.twice().unsigned_abs();
    if two_n < 2 {
        return Err(Error::Input(format!(
            "discrete series needs |n| ≥ 1, got {}",
            n.value()
        )));
    }
    let gi = g.inverse();
    let (al, be) = (gi.alpha(), gi.beta());
    // the Möbius denominator vanishes at |z| = |α|/|β|
    let pole = if be.norm() > 0.0 {
        al.norm() / be.norm()
    } else {
        f64::INFINITY
    };
    let mut rho = rho;
    if rho >= 0.95 * pole {
        rho = 0.9 * pole;
    }
    if !(0.5..1.0).contains(&rho) {
        return Err(Error::Numeric(format!(
            "no usable contour radius (pole at {pole})"
        )));
    }
    let nodes = nodes.max(2 * (m.max(m_row) + 8));
    let mut sum = ComplexSum::new();
    for k in 0..nodes {
        let z = Complex64::from_polar(rho, 2.0 * PI * k as f64 / nodes as f64);
        let d = be.conj() * z + al.conj();
        let f = d.powi(-(two_n as i32)) * ((al * z + be) / d).powi(m as i32);
        sum.add(f * z.powi(-(m_row as i32)));
    }
    let nf = n.value().abs();
    let scale = sl2_basis_coeff(nf, m)? / sl2_basis_coeff(nf, m_row)?;
    let v = sum.value() / nodes as f64 * scale;
    Ok(if n.twice() < 0 { v.conj() } else { v })
}

/// Diagonal discrete-series element by contour extraction at the default
/// radius.
pub fn sl2_discrete_matrix_element(n: HalfInteger, m: usize, g: &SU11Element) -> Result<Complex64> {
    sl2_discrete_contour_element(n, m, m, g, SL2_CONTOUR_RADIUS, 256)
}

/// Closed form of the diagonal discrete-series element for `n > 0`:
/// `e^{2iφ(n+m)} cosh^{−2n} r · P_m^{(0, 2n−1)}(1 − 2 tanh² r)` where
/// `α = cosh r e^{iφ}` belongs to `G⁻¹`. Returns the elements for
/// `m = 0..=m_max`.
pub(crate) fn discrete_diagonal(
    two_n: u32,
    m_max: usize,
    al: Complex64,
    be: Complex64,
    out: &mut Vec<Complex64>,
) {
    let a = al.norm();
    let th2 = (be.norm() / a).powi(2);
    let phi = al.arg();
    let mut jac = Vec::new();
    jacobi_0b(m_max, two_n as f64 - 1.0, 1.0 - 2.0 * th2, &mut jac);
    let base = a.powf(-(two_n as f64));
    out.clear();
    for (m, p) in jac.iter().enumerate() {
        let ph = phi * (two_n as f64 + 2.0 * m as f64);
        out.push(Complex64::from_polar(base * p, ph));
    }
}

/// Plancherel-weighted continuous spectral density, without the Gaussian.
fn rho_j(j: f64, v: f64) -> f64 {
    let pv = PI * v;
    if j == 0.0 {
        v / (2.0 * PI) * pv.tanh()
    } else if pv < 1e-8 {
        1.0 / (2.0 * PI * PI)
    } else {
        v / (2.0 * PI) / pv.tanh()
    }
}

struct Continuous {
    v_nodes: Vec<(f64, [f64; 2])>,
    theta_m: i64,
    tail: f64,
}

fn prepare_continuous(t: f64, r: f64, policy: &TruncationPolicy) -> Continuous {
    // ∫₀^∞ ρ_j e^{−tv²} dv ≤ 1/(4πt) + 1/(4π^{3/2}√t)
    let mass_v = 1.0 / (4.0 * PI * t) + 1.0 / (4.0 * PI.powf(1.5) * t.sqrt());
    let target = 1e-2 * policy.abs_tol;
    let mut theta_m: i64 = 1;
    let m_tail = |m: i64| -> f64 {
        let mut s = 0.0;
        let mut k = m + 1;
        loop {
            let v = (-(t * (k as f64 - 0.5).powi(2))).exp();
            s += 2.0 * v;
            if v < 1e-30 || k > m + 100_000 {
                break;
            }
            k += 1;
        }
        s
    };
    while m_tail(theta_m) * mass_v > target {
        theta_m += 1;
    }
    let theta_one: f64 = (-theta_m..=theta_m)
        .map(|m| (-(t * (m as f64).powi(2))).exp())
        .sum::<f64>()
        + 1.0;
    let v_tail = |vmax: f64| {
        theta_one * (1.0 + 1.0 / (PI * vmax)) * (-t * (vmax * vmax + 0.25)).exp() / (4.0 * PI * t)
    };
    let vmax = match policy.spectral_box {
        Some(b) => b,
        None => {
            let mut v = 8.0 / t.sqrt();
            while v_tail(v) > target {
                v *= 1.25;
            }
            v
        }
    };
    let width = if r > 0.0 { (5.0 / r).min(1.0) } else { 1.0 };
    let panels = (vmax / width).ceil().max(1.0) as usize;
    let gl = GaussLegendre::new(V_NODES);
    let v_nodes = gl
        .composite(0.0, vmax, panels)
        .into_iter()
        .map(|(v, w)| {
            let g = w * (-t * (v * v + 0.25)).exp();
            (v, [g * rho_j(0.0, v), g * rho_j(0.5, v)])
        })
        .collect();
    Continuous {
        v_nodes,
        theta_m,
        tail: v_tail(vmax) + m_tail(theta_m) * mass_v,
    }
}

/// Continuous part of the kernel on `n` circle nodes.
fn continuous_part(t: f64, al: Complex64, be: Complex64, c: &Continuous, n: usize) -> Complex64 {
    let mut sum = ComplexSum::new();
    let gauss: Vec<[f64; 2]> = (-c.theta_m..=c.theta_m)
        .map(|m| {
            let m = m as f64;
            [(-t * m * m).exp(), (-t * (m + 0.5).powi(2)).exp()]
        })
        .collect();
    for (x, w) in circle_rule(al, be, n) {
        let d = be.conj() * x + al.conj();
        let nd = d.norm();
        let l = nd.ln();
        let ph = d / nd;
        let u = (al * x + be) / d / x;
        let u = u / u.norm();
        // Θ_j(u) = Σ_m e^{−t(m+j)²} u^{−m}
        let ui = u.conj();
        let mut th = [Complex64::new(0.0, 0.0); 2];
        let mut pw = ui.powi(-(c.theta_m as i32));
        for gm in &gauss {
            th[0] += pw * gm[0];
            th[1] += pw * gm[1];
            pw *= ui;
        }
        let mut f = [Complex64::new(0.0, 0.0); 2];
        for (v, wv) in &c.v_nodes {
            let e = Complex64::from_polar(1.0, -2.0 * v * l);
            f[0] += e * wv[0];
            f[1] += e * wv[1];
        }
        sum.add((th[0] * f[0] + ph * th[1] * f[1]) * (w / nd));
    }
    sum.value()
}

/// Discrete part, summed in order of increasing eigenvalue magnitude.
fn discrete_part(t: f64, al: Complex64, be: Complex64, policy: &TruncationPolicy) -> Result<(f64, f64)> {
    let target = 1e-2 * policy.abs_tol;
    let m_cut = |n: f64| -> usize {
        let mut m = 0usize;
        while (-(t * (n + 2.0 * m as f64 * n + (m * m) as f64))).exp() > 1e-18 {
            m += 1;
        }
        m
    };
    // bound for weight n: 2 (2n−1)/(4π) Σ_m e^{−t(n+2mn+m²)}
    let weight_bound = |two_n: u32| -> f64 {
        let n = 0.5 * two_n as f64;
        let mut s = 0.0;
        for m in 0..=m_cut(n) {
            s += (-(t * (n + 2.0 * m as f64 * n + (m * m) as f64))).exp();
        }
        2.0 * (2.0 * n - 1.0) / (4.0 * PI) * s
    };
    let mut two_max = 2u32;
    let mut tail = f64::INFINITY;
    while two_max as usize <= policy.series_cut {
        // remaining weights decay at least geometrically by e^{−t/2}
        let next = weight_bound(two_max + 1);
        let ratio = (-0.5 * t).exp();
        tail = next / (1.0 - ratio) * (1.0 + 1.0 / (two_max as f64));
        if tail < target {
            break;
        }
        two_max += 1;
    }
    if two_max as usize > policy.series_cut {
        return Err(Error::Accuracy {
            what: format!(
                "SL(2) discrete weight cut exceeds series_cut {}",
                policy.series_cut
            ),
            tail,
        });
    }
    let mut terms = Vec::new();
    let mut diag = Vec::new();
    for two_n in 2..=two_max {
        let n = 0.5 * two_n as f64;
        let mm = m_cut(n);
        discrete_diagonal(two_n, mm, al, be, &mut diag);
        for (m, d) in diag.iter().enumerate() {
            let mf = m as f64;
            let lam = n + 2.0 * mf * n + mf * mf;
            // n and −n together give 2 Re
            terms.push((lam, (2.0 * n - 1.0) / (4.0 * PI) * (-t * lam).exp() * 2.0 * d.re));
        }
    }
    terms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut s = KahanSum::new();
    for (_, v) in terms {
        s.add(v);
    }
    Ok((s.value(), tail))
}

/// SL(2) heat kernel with respect to the Haar measure
/// [`crate::groups::SL2_HAAR_SCALE`]` · sinh r cosh r dr dφ dψ`.
pub fn sl2_kernel(g: &SL2Element, t: f64, policy: &TruncationPolicy) -> Result<KernelResult> {
    check_time(t)?;
    policy.validate()?;
    // 𝒢 = Π(g⁻¹), and the representation reads (α, β) off 𝒢⁻¹ = Π(g)
    let p = g.pi_iso();
    let (al, be) = (p.alpha(), p.beta());
    let r = be.norm().asinh();
    let cont = prepare_continuous(t, r, policy);
    let (disc, disc_tail) = discrete_part(t, al, be, policy)?;
    let start = policy.quad_nodes.max(32).next_power_of_two();
    let mut n = start;
    let mut prev = continuous_part(t, al, be, &cont, n);
    loop {
        n *= 2;
        if n > MAX_CIRCLE_NODES {
            return Err(Error::Accuracy {
                what: format!("SL(2) circle quadrature unresolved at r = {r:.3}"),
                tail: f64::NAN,
            });
        }
        let cur = continuous_part(t, al, be, &cont, n);
        let diff = (cur - prev).norm();
        prev = cur;
        if diff < 1e-2 * policy.abs_tol.max(policy.rel_tol * cur.norm()) {
            break;
        }
    }
    Ok(KernelResult {
        value: prev.re + disc,
        imag_residual: prev.im.abs(),
        tail_estimate: cont.tail + disc_tail,
        policy_used: policy.clone(),
    })
}
