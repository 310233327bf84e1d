use num_complex::Complex64;

use super::{check_time, KernelResult};
use crate::error::{Error, Result};
use crate::groups::SU2Element;
use crate::policy::TruncationPolicy;
use crate::quadrature::KahanSum;

/// Jacobi polynomials `P_p^{(0, μ)}(x)` for `p = 0..=p_max`.
pub(crate) fn jacobi_0b(p_max: usize, b: f64, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if p_max == 0 {
        return;
    }
    out.push(1.0 + (b + 2.0) * (x - 1.0) * 0.5);
    for n in 2..=p_max {
        let n = n as f64;
        let s = 2.0 * n + b;
        let c1 = 2.0 * n * (n + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x - b * b);
        let c3 = 2.0 * (n - 1.0) * (n + b - 1.0) * s;
        let k = out.len();
        let next = (c2 * out[k - 1] - c3 * out[k - 2]) / c1;
        out.push(next);
    }
}

/// Diagonal matrix element `A^{n,k}(g) = ⟨ψ_k, 𝔛^n(g) ψ_k⟩`.
///
/// Evaluated as `e^{iμξ} |α|^μ P_p^{(0,μ)}(2|α|² − 1)` with `μ = n − 2k`,
/// `p = min(k, n − k)`, `ξ = arg α`, which equals the binomial sum
/// `Σ_l C(k,l) C(n−k,l) ᾱ^{k−l} α^{n−k−l} (|α|² − 1)^l` but does not cancel.
pub fn su2_matrix_element(n: usize, k: usize, g: &SU2Element) -> Result<Complex64> {
    if k > n {
        return Err(Error::Input(format!("index k = {k} exceeds degree n = {n}")));
    }
    let alpha = g.alpha();
    let a = alpha.norm_sqr().min(1.0);
    let mu = n as i64 - 2 * k as i64;
    let p = k.min(n - k);
    let mut jac = Vec::new();
    jacobi_0b(p, mu.unsigned_abs() as f64, 2.0 * a - 1.0, &mut jac);
    let modulus = a.sqrt().powi(mu.unsigned_abs() as i32) * jac[p];
    let phase = if alpha.norm() > 0.0 { alpha.arg() } else { 0.0 };
    Ok(Complex64::from_polar(1.0, mu as f64 * phase) * modulus)
}

/// `λ = k² − kn − n/2` for `k = p`, `n = μ + 2p`.
fn eigenvalue(mu: usize, p: usize) -> f64 {
    let (mu, p) = (mu as f64, p as f64);
    -(p * p + p * mu + 0.5 * mu + p)
}

/// SU(2) heat kernel prepared for one `(t, policy)`.
#[derive(Debug, Clone)]
pub struct Su2HeatKernel {
    t: f64,
    n_max: usize,
    tail: f64,
    /// `(μ, flat index of (μ, p), (n+1) e^{λt})` sorted by `|λ|`.
    terms: Vec<(usize, usize, f64)>,
    /// Start of each `μ` row in the flat Jacobi table.
    offsets: Vec<usize>,
    /// `P_p = (a x + b) P_{p−1} − c P_{p−2}` per flat index.
    rec: Vec<[f64; 3]>,
    policy: TruncationPolicy,
}

/// Three-term recurrence coefficients of `P_p^{(0, b)}` for `p = 0..=p_max`.
fn jacobi_coeffs(p_max: usize, b: f64, out: &mut Vec<[f64; 3]>) {
    out.push([0.0, 1.0, 0.0]);
    if p_max >= 1 {
        out.push([0.5 * (b + 2.0), -0.5 * b, 0.0]);
    }
    for n in 2..=p_max {
        let n = n as f64;
        let s = 2.0 * n + b;
        let c1 = 2.0 * n * (n + b) * (s - 2.0);
        out.push([
            (s - 1.0) * s * (s - 2.0) / c1,
            -(s - 1.0) * b * b / c1,
            2.0 * (n - 1.0) * (n + b - 1.0) * s / c1,
        ]);
    }
}

impl Su2HeatKernel {
    pub fn new(t: f64, policy: &TruncationPolicy) -> Result<Self> {
        check_time(t)?;
        policy.validate()?;
        // level n carries Σ_k (n+1) e^{(k²−kn−n/2)t}, and |A^{n,k}| ≤ 1
        let cut = policy.series_cut;
        let levels: Vec<f64> = (0..=cut + 1)
            .map(|n| {
                let nf = n as f64;
                (0..=n)
                    .map(|k| {
                        let k = k as f64;
                        (nf + 1.0) * ((k * k - k * nf - 0.5 * nf) * t).exp()
                    })
                    .sum()
            })
            .collect();
        // beyond the cut: (n+1)² e^{−nt/2}
        let mut beyond = 0.0;
        for n in cut + 2..cut + 2 + 10_000_000 {
            let v = ((n + 1) as f64).powi(2) * (-(n as f64) * t * 0.5).exp();
            beyond += v;
            if v < 1e-20 * beyond || v == 0.0 {
                break;
            }
        }
        let mut tails = vec![0.0; cut + 2];
        tails[cut + 1] = beyond;
        for n in (0..=cut).rev() {
            tails[n] = tails[n + 1] + levels[n + 1];
        }
        let n_max = match (0..=cut).find(|&n| tails[n] < policy.abs_tol) {
            Some(n) => n,
            None => {
                return Err(Error::Accuracy {
                    what: format!("SU(2) degree cut exceeds series_cut {cut} at t = {t}"),
                    tail: tails[cut],
                })
            }
        };
        let tail = tails[n_max];
        let mut terms = Vec::new();
        let mut offsets = Vec::with_capacity(n_max + 2);
        let mut rec = Vec::new();
        for mu in 0..=n_max {
            offsets.push(rec.len());
            jacobi_coeffs((n_max - mu) / 2, mu as f64, &mut rec);
            for p in 0..=(n_max - mu) / 2 {
                let n = mu + 2 * p;
                let w = (n as f64 + 1.0) * (eigenvalue(mu, p) * t).exp();
                terms.push((mu, p, w));
            }
        }
        offsets.push(rec.len());
        terms.sort_by(|a, b| {
            eigenvalue(b.0, b.1)
                .total_cmp(&eigenvalue(a.0, a.1))
                .then(a.0.cmp(&b.0))
                .then(a.1.cmp(&b.1))
        });
        let terms = terms
            .into_iter()
            .map(|(mu, p, w)| (mu, offsets[mu] + p, w))
            .collect();
        Ok(Self {
            t,
            n_max,
            tail,
            terms,
            offsets,
            rec,
            policy: policy.clone(),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn degree_cut(&self) -> usize {
        self.n_max
    }

    pub fn tail_estimate(&self) -> f64 {
        self.tail
    }

    /// Kernel value as a complex number. The two members of each `±μ` pair
    /// are conjugate, so the imaginary part vanishes identically.
    pub fn eval_complex(&self, g: &SU2Element) -> Complex64 {
        let alpha = g.alpha();
        let a = alpha.norm_sqr().min(1.0);
        let x = 2.0 * a - 1.0;
        let xi = if alpha.norm() > 0.0 { alpha.arg() } else { 0.0 };
        let sa = a.sqrt();
        // P_p^{(0,μ)}(x) |α|^μ, flat
        let mut table = vec![0.0; self.rec.len()];
        let mut pow = 1.0;
        for mu in 0..=self.n_max {
            let (lo, hi) = (self.offsets[mu], self.offsets[mu + 1]);
            let (mut prev, mut cur) = (0.0, 1.0);
            table[lo] = pow;
            for i in lo + 1..hi {
                let [a, b, c] = self.rec[i];
                let next = (a * x + b) * cur - c * prev;
                prev = cur;
                cur = next;
                table[i] = cur * pow;
            }
            pow *= sa;
        }
        // e^{iμξ} + e^{−iμξ} = 2cos μξ, by the Chebyshev recurrence
        let c1 = xi.cos();
        let mut two_cos = Vec::with_capacity(self.n_max + 1);
        two_cos.push(2.0);
        if self.n_max >= 1 {
            two_cos.push(2.0 * c1);
        }
        for mu in 2..=self.n_max {
            let next = 2.0 * c1 * two_cos[mu - 1] - two_cos[mu - 2];
            two_cos.push(next);
        }
        let mut sum = KahanSum::new();
        for &(mu, i, w) in &self.terms {
            let v = w * table[i];
            // k = p and k = n − p pair up for μ > 0
            sum.add(if mu == 0 { v } else { two_cos[mu] * v });
        }
        Complex64::new(sum.value(), 0.0)
    }

    pub fn eval(&self, g: &SU2Element) -> KernelResult {
        let z = self.eval_complex(g);
        KernelResult {
            value: z.re,
            imag_residual: z.im.abs(),
            tail_estimate: self.tail,
            policy_used: self.policy.clone(),
        }
    }
}

/// SU(2) heat kernel with respect to the probability Haar measure.
pub fn su2_kernel(g: &SU2Element, t: f64, policy: &TruncationPolicy) -> Result<KernelResult> {
    Ok(Su2HeatKernel::new(t, policy)?.eval(g))
}
