use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_time, KernelResult, Su2HeatKernel};
use crate::error::{Error, Result};
use crate::groups::SO3Element;
use crate::policy::TruncationPolicy;
use crate::quadrature::{GaussLegendre, KahanSum};
use crate::specfun::NormalizedLegendreTable;

/// How the SO(3) kernel is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum So3Method {
    /// Spectral sum with matrix elements from sphere quadrature.
    Direct,
    /// Average of the SU(2) kernel over the two preimages.
    Covering,
}

impl std::str::FromStr for So3Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(So3Method::Direct),
            "covering" => Ok(So3Method::Covering),
            other => Err(Error::Input(format!("unknown SO(3) method `{other}`"))),
        }
    }
}

/// Row vector `ω` times `M`, returned as `(cos α', β')`.
fn rotate(m: &nalgebra::Matrix3<f64>, ca: f64, sa: f64, b: f64) -> (f64, f64) {
    let w = [sa * b.cos(), sa * b.sin(), ca];
    let r: Vec<f64> = (0..3)
        .map(|c| w[0] * m[(0, c)] + w[1] * m[(1, c)] + w[2] * m[(2, c)])
        .collect();
    (r[2].clamp(-1.0, 1.0), r[1].atan2(r[0]))
}

/// `⟨φ_s^r, 𝔛^r(g) φ_s^r⟩` for `φ_s^r(α, β) ∝ e^{isβ} P_r^{|s|}(cos α)` of
/// unit norm in `(1/4π) ∫ |f|² sin α dα dβ`, with `(𝔛^r(g) f)(ω) = f(ω g)`.
/// Gauss–Legendre in `cos α` times trapezoid in `β`, exact for this degree.
pub fn so3_sphere_element(r: usize, s: i64, g: &SO3Element) -> Result<Complex64> {
    if s.unsigned_abs() as usize > r {
        return Err(Error::OrderExceedsDegree { r, s });
    }
    let m = s.unsigned_abs() as usize;
    let gl = GaussLegendre::new(r + 8);
    let nb = 2 * r + 8;
    let mut acc_re = KahanSum::new();
    let mut acc_im = KahanSum::new();
    for (ca, w) in gl.on(-1.0, 1.0) {
        let sa = (1.0 - ca * ca).max(0.0).sqrt();
        let p = NormalizedLegendreTable::new(r, ca).get(r, m);
        for j in 0..nb {
            let b = 2.0 * PI * j as f64 / nb as f64;
            let (cp, bp) = rotate(g.matrix(), ca, sa, b);
            let pp = NormalizedLegendreTable::new(r, cp).get(r, m);
            let z = Complex64::from_polar(w * p * pp / (2.0 * nb as f64), s as f64 * (b - bp));
            acc_re.add(z.re);
            acc_im.add(z.im);
        }
    }
    Ok(Complex64::new(acc_re.value(), acc_im.value()))
}

#[derive(Debug, Clone)]
enum Engine {
    Covering(Su2HeatKernel),
    Direct {
        r_max: usize,
        /// `(2r+1) e^{(s²−r(r+1))t}` at `[r][s]`, `s ≤ r`.
        coeff: Vec<Vec<f64>>,
        nodes: Vec<(f64, f64, NormalizedLegendreTable)>,
        n_beta: usize,
    },
}

/// SO(3) heat kernel prepared for one `(t, policy, method)`.
#[derive(Debug, Clone)]
pub struct So3HeatKernel {
    engine: Engine,
    tail: f64,
    policy: TruncationPolicy,
}

impl So3HeatKernel {
    pub fn new(t: f64, policy: &TruncationPolicy, method: So3Method) -> Result<Self> {
        check_time(t)?;
        policy.validate()?;
        match method {
            So3Method::Covering => {
                let k = Su2HeatKernel::new(t, policy)?;
                Ok(Self {
                    tail: k.tail_estimate(),
                    engine: Engine::Covering(k),
                    policy: policy.clone(),
                })
            }
            So3Method::Direct => Self::direct(t, policy),
        }
    }

    fn direct(t: f64, policy: &TruncationPolicy) -> Result<Self> {
        let cut = policy.series_cut;
        let level = |r: usize| -> f64 {
            let rf = r as f64;
            let inner: f64 = (-(r as i64)..=r as i64)
                .map(|s| (((s * s) as f64 - rf * (rf + 1.0)) * t).exp())
                .sum();
            (2.0 * rf + 1.0) * inner
        };
        let levels: Vec<f64> = (0..=cut + 1).map(level).collect();
        let mut beyond = 0.0;
        for r in cut + 2..cut + 2 + 10_000_000 {
            let v = ((2 * r + 1) as f64).powi(2) * (-(r as f64) * t).exp();
            beyond += v;
            if v < 1e-20 * beyond || v == 0.0 {
                break;
            }
        }
        let mut tails = vec![0.0; cut + 2];
        tails[cut + 1] = beyond;
        for r in (0..=cut).rev() {
            tails[r] = tails[r + 1] + levels[r + 1];
        }
        let r_max = (0..=cut)
            .find(|&r| tails[r] < policy.abs_tol)
            .ok_or_else(|| Error::Accuracy {
                what: format!("SO(3) degree cut exceeds series_cut {cut} at t = {t}"),
                tail: tails[cut],
            })?;
        let coeff = (0..=r_max)
            .map(|r| {
                let rf = r as f64;
                (0..=r)
                    .map(|s| (2.0 * rf + 1.0) * (((s * s) as f64 - rf * (rf + 1.0)) * t).exp())
                    .collect()
            })
            .collect();
        let nodes = GaussLegendre::new(r_max + 8)
            .on(-1.0, 1.0)
            .map(|(ca, w)| (ca, w, NormalizedLegendreTable::new(r_max, ca)))
            .collect();
        Ok(Self {
            engine: Engine::Direct {
                r_max,
                coeff,
                nodes,
                n_beta: 2 * r_max + 8,
            },
            tail: tails[r_max],
            policy: policy.clone(),
        })
    }

    pub fn tail_estimate(&self) -> f64 {
        self.tail
    }

    pub fn eval(&self, g: &SO3Element) -> KernelResult {
        let (value, imag) = match &self.engine {
            Engine::Covering(k) => {
                let h = g.lift();
                let a = k.eval_complex(&h);
                let b = k.eval_complex(&h.neg());
                let z = (a + b) * 0.5;
                (z.re, z.im.abs())
            }
            Engine::Direct {
                r_max,
                coeff,
                nodes,
                n_beta,
            } => (self.direct_sum(g, *r_max, coeff, nodes, *n_beta), 0.0),
        };
        KernelResult {
            value,
            imag_residual: imag,
            tail_estimate: self.tail,
            policy_used: self.policy.clone(),
        }
    }

    fn direct_sum(
        &self,
        g: &SO3Element,
        r_max: usize,
        coeff: &[Vec<f64>],
        nodes: &[(f64, f64, NormalizedLegendreTable)],
        n_beta: usize,
    ) -> f64 {
        let mut total = KahanSum::new();
        for (ca, w, table) in nodes {
            let sa = (1.0 - ca * ca).max(0.0).sqrt();
            for j in 0..n_beta {
                let b = 2.0 * PI * j as f64 / n_beta as f64;
                let (cp, bp) = rotate(g.matrix(), *ca, sa, b);
                let other = NormalizedLegendreTable::new(r_max, cp);
                let d = b - bp;
                let (c1, c0) = (d.cos(), 1.0);
                let (mut cs_prev, mut cs) = (c1, c0);
                let mut acc = 0.0;
                for s in 0..=r_max {
                    // cos(sd) by the Chebyshev recurrence
                    let cos_s = if s == 0 {
                        1.0
                    } else {
                        let next = 2.0 * c1 * cs - cs_prev;
                        cs_prev = cs;
                        cs = next;
                        next
                    };
                    let mut inner = 0.0;
                    for r in s..=r_max {
                        inner += coeff[r][s] * table.get(r, s) * other.get(r, s);
                    }
                    acc += if s == 0 { inner } else { 2.0 * cos_s * inner };
                }
                total.add(w * acc / (2.0 * n_beta as f64));
            }
        }
        total.value()
    }
}

/// SO(3) heat kernel with respect to the probability Haar measure.
pub fn so3_kernel(
    g: &SO3Element,
    t: f64,
    policy: &TruncationPolicy,
    method: So3Method,
) -> Result<KernelResult> {
    Ok(So3HeatKernel::new(t, policy, method)?.eval(g))
}
