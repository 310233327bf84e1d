use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_time, KernelResult};
use crate::error::{Error, Result};
use crate::groups::SE2Element;
use crate::policy::TruncationPolicy;
use crate::quadrature::{ComplexSum, GaussLegendre};
use crate::specfun::mathieu_spectrum_unchecked as spectrum;
use crate::specfun::{MathieuBasis, MathieuFunction, Parity};

const LAMBDA_NODES: usize = 16;
const MAX_THETA_NODES: usize = 1 << 20;

/// `f(θ)` by the three-term recurrence for `cos/sin((k0 + 2i)θ)`.
fn eval_fast(f: &MathieuFunction, theta: f64) -> f64 {
    let k0 = f.first_frequency as f64;
    let c2 = 2.0 * (2.0 * theta).cos();
    let (mut prev, mut cur) = match f.parity {
        Parity::Even => (((k0 - 2.0) * theta).cos(), (k0 * theta).cos()),
        Parity::Odd => (((k0 - 2.0) * theta).sin(), (k0 * theta).sin()),
    };
    let mut s = 0.0;
    for c in &f.coeffs {
        s += c * cur;
        let next = c2 * cur - prev;
        prev = cur;
        cur = next;
    }
    s
}

/// Highest frequency carrying a coefficient above rounding level.
fn bandwidth(f: &MathieuFunction) -> usize {
    let big = f.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let last = f.coeffs.iter().rposition(|c| c.abs() > 1e-18 * big).unwrap_or(0);
    f.frequency(last)
}

/// Trapezoid node count resolving `e^{iλ ρ cos(θ+φ)} f(θ+α) g(θ)`.
fn theta_nodes(band: usize, lambda: f64, extent: f64) -> Result<usize> {
    let osc = lambda * extent;
    let need = 2.0 * band as f64 + osc + 10.0 * osc.cbrt() + 16.0;
    let n = ((need / 64.0).ceil() as usize).max(1) * 64;
    if n > MAX_THETA_NODES {
        return Err(Error::Accuracy {
            what: format!("SE(2) angular quadrature needs {n} nodes (λ|x| = {osc:.3e})"),
            tail: f64::NAN,
        });
    }
    Ok(n)
}

/// `∫₀^{2π} e^{iλ(x₁cos θ − x₂sin θ)} f_n(θ+α) f_n(θ) dθ` with `f_n` the
/// order-`n` Mathieu function of the given parity, from a basis built at
/// `q = λ²/4`.
pub fn se2_matrix_element(
    lambda: f64,
    n: usize,
    parity: Parity,
    g: &SE2Element,
    basis: &MathieuBasis,
) -> Result<Complex64> {
    let q = lambda * lambda / 4.0;
    if (basis.q() - q).abs() > 1e-12 * (1.0 + q) {
        return Err(Error::Input(format!(
            "basis built at q = {}, need q = λ²/4 = {q}",
            basis.q()
        )));
    }
    let f = basis
        .get(n, parity)
        .ok_or_else(|| Error::Input(format!("order {n} ({parity:?}) not in basis")))?;
    let extent = g.x1().abs().max(g.x2().abs()) * std::f64::consts::SQRT_2;
    let nt = theta_nodes(bandwidth(f), lambda, extent)?;
    let h = 2.0 * PI / nt as f64;
    let mut s = ComplexSum::new();
    for j in 0..nt {
        let th = j as f64 * h;
        let ph = lambda * (g.x1() * th.cos() - g.x2() * th.sin());
        let v = eval_fast(f, th + g.angle()) * eval_fast(f, th);
        s.add(Complex64::from_polar(v * h, ph));
    }
    Ok(s.value())
}

/// Eigenfunctions kept at one `λ`: `(e^{μt}, f)` with `μ = −λ²/2 − a`.
fn weighted_basis(lambda: f64, t: f64, rel_tol: f64, cap: usize) -> Result<Vec<(f64, MathieuFunction)>> {
    let q = lambda * lambda / 4.0;
    let mut n_max = 6;
    loop {
        let basis = spectrum(q, n_max, crate::specfun::default_truncation(q, n_max));
        // all functions are relative to the lowest eigenvalue a_0
        let a0 = basis.a(0).unwrap_or(0.0);
        let top = basis
            .a(n_max)
            .into_iter()
            .chain(basis.b(n_max))
            .fold(f64::INFINITY, f64::min);
        if ((a0 - top) * t).exp() < rel_tol || n_max >= cap {
            if ((a0 - top) * t).exp() >= rel_tol {
                return Err(Error::Accuracy {
                    what: format!("SE(2) Mathieu order cut exceeds series_cut {cap} at λ = {lambda}"),
                    tail: ((a0 - top) * t).exp(),
                });
            }
            let lead = -lambda * lambda / 2.0;
            return Ok(basis
                .functions()
                .filter(|f| ((a0 - f.eigenvalue) * t).exp() >= rel_tol)
                .map(|f| (((lead - f.eigenvalue) * t).exp(), f.clone()))
                .collect());
        }
        n_max = (2 * n_max).min(cap);
    }
}

/// `Σ_n e^{a_n^λ t} ⟨ce_n, 𝔛^λ(g) ce_n⟩ + Σ_n e^{b_n^λ t} ⟨se_n, 𝔛^λ(g) se_n⟩`,
/// the integrand of the λ-integral without the Plancherel factor `λ`.
pub fn se2_lambda_integrand(
    lambda: f64,
    g: &SE2Element,
    t: f64,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    check_time(t)?;
    policy.validate()?;
    let funcs = weighted_basis(lambda, t, policy.rel_tol, policy.series_cut)?;
    let extent = g.x1().hypot(g.x2());
    let band = funcs.iter().map(|(_, f)| bandwidth(f)).max().unwrap_or(0);
    let nt = theta_nodes(band, lambda, extent)?;
    let h = 2.0 * PI / nt as f64;
    let mut s = ComplexSum::new();
    for j in 0..nt {
        let th = j as f64 * h;
        let ph = lambda * (g.x1() * th.cos() - g.x2() * th.sin());
        let v: f64 = funcs
            .iter()
            .map(|(w, f)| w * eval_fast(f, th + g.angle()) * eval_fast(f, th))
            .sum();
        s.add(Complex64::from_polar(v * h, ph));
    }
    Ok(s.value())
}

#[derive(Debug, Clone)]
struct LambdaNode {
    lambda: f64,
    /// Gauss–Legendre weight times the Plancherel density `λ`.
    weight: f64,
    n_theta: usize,
    funcs: Vec<(f64, MathieuFunction)>,
    /// `f(θ_j)` on the node's grid, one row per function.
    samples: Vec<Vec<f64>>,
}

/// SE(2) heat kernel prepared for one `(t, policy)` and all points with
/// `|x| ≤ extent`. One Mathieu basis is kept per λ quadrature node.
#[derive(Debug, Clone)]
pub struct Se2HeatKernel {
    t: f64,
    extent: f64,
    lambda_max: f64,
    nodes: Vec<LambdaNode>,
    tail: f64,
    policy: TruncationPolicy,
}

impl Se2HeatKernel {
    pub fn new(t: f64, policy: &TruncationPolicy, extent: f64) -> Result<Self> {
        check_time(t)?;
        policy.validate()?;
        if !(extent >= 0.0 && extent.is_finite()) {
            return Err(Error::Input(format!(
                "extent must be finite and ≥ 0, got {extent}"
            )));
        }
        // majorant of the integrand: λ Σ_n e^{μ_n t} (all |elements| ≤ 1)
        let majorant = |lambda: f64| -> Result<f64> {
            let f = weighted_basis(lambda, t, policy.rel_tol, policy.series_cut)?;
            Ok(lambda * f.iter().map(|(w, _)| w).sum::<f64>())
        };
        // the leading eigenvalue tends to −λ + 1/4, so the tail decays like λe^{−λt}
        let tail_at =
            |lambda: f64| -> Result<f64> { Ok(majorant(lambda)? * (1.0 / t + 1.0 / (lambda * t * t))) };
        let target = 0.25 * policy.abs_tol;
        let lambda_max = match policy.spectral_box {
            Some(b) => b,
            None => {
                let mut l = 8.0 / t.sqrt();
                while tail_at(l)? > target {
                    l *= 1.25;
                    if l > 1e5 {
                        return Err(Error::Accuracy {
                            what: format!("SE(2) λ range does not close at t = {t}"),
                            tail: tail_at(l)?,
                        });
                    }
                }
                l
            }
        };
        let tail = tail_at(lambda_max)?;
        let width = (12.0 / extent.max(1e-9)).min(2.0);
        let panels = (lambda_max / width).ceil().max(1.0) as usize;
        let gl = GaussLegendre::new(LAMBDA_NODES);
        let mut nodes = Vec::new();
        for (lambda, w) in gl.composite(0.0, lambda_max, panels) {
            let funcs = weighted_basis(lambda, t, policy.rel_tol, policy.series_cut)?;
            let band = funcs.iter().map(|(_, f)| bandwidth(f)).max().unwrap_or(0);
            let n_theta = theta_nodes(band, lambda, extent)?;
            let h = 2.0 * PI / n_theta as f64;
            let samples = funcs
                .iter()
                .map(|(_, f)| (0..n_theta).map(|j| eval_fast(f, j as f64 * h)).collect())
                .collect();
            nodes.push(LambdaNode {
                lambda,
                weight: w * lambda,
                n_theta,
                funcs,
                samples,
            });
        }
        Ok(Self {
            t,
            extent,
            lambda_max,
            nodes,
            tail,
            policy: policy.clone(),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn lambda_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Total angular samples over all radial nodes; cost of one point.
    pub fn angular_samples(&self) -> usize {
        self.nodes.iter().map(|n| n.n_theta).sum()
    }

    pub fn tail_estimate(&self) -> f64 {
        self.tail
    }

    pub fn eval(&self, g: &SE2Element) -> Result<KernelResult> {
        let z = self.eval_tensor(
            g.angle(),
            [g.x1(), g.x2()],
            [[1.0, 0.0], [0.0, 1.0]],
            &[0.0],
            &[0.0],
        )?;
        Ok(KernelResult {
            value: z[0].re,
            imag_residual: z[0].im.abs(),
            tail_estimate: self.tail,
            policy_used: self.policy.clone(),
        })
    }

    /// Complex kernel values at angle `angle` and translations
    /// `center + y₁ e₁ + y₂ e₂` for `y₁ ∈ ys1`, `y₂ ∈ ys2` (row-major,
    /// `ys2` fastest). The angular and translational dependence separate, so
    /// a whole grid costs little more than its two axes.
    pub fn eval_tensor(
        &self,
        angle: f64,
        center: [f64; 2],
        axes: [[f64; 2]; 2],
        ys1: &[f64],
        ys2: &[f64],
    ) -> Result<Vec<Complex64>> {
        let (re, im) = self.tensor(angle, center, axes, ys1, ys2, true)?;
        Ok(re
            .into_iter()
            .zip(im)
            .map(|(r, i)| Complex64::new(r, i))
            .collect())
    }

    /// Real part of [`eval_tensor`](Self::eval_tensor), about twice as fast.
    pub fn eval_tensor_re(
        &self,
        angle: f64,
        center: [f64; 2],
        axes: [[f64; 2]; 2],
        ys1: &[f64],
        ys2: &[f64],
    ) -> Result<Vec<f64>> {
        Ok(self.tensor(angle, center, axes, ys1, ys2, false)?.0)
    }

    fn tensor(
        &self,
        angle: f64,
        center: [f64; 2],
        axes: [[f64; 2]; 2],
        ys1: &[f64],
        ys2: &[f64],
        want_imag: bool,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let corner = |a: f64, b: f64| {
            let x = center[0] + a * axes[0][0] + b * axes[1][0];
            let y = center[1] + a * axes[0][1] + b * axes[1][1];
            x.hypot(y)
        };
        let (lo1, hi1) = min_max(ys1);
        let (lo2, hi2) = min_max(ys2);
        let reach = [
            corner(lo1, lo2),
            corner(lo1, hi2),
            corner(hi1, lo2),
            corner(hi1, hi2),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        if reach > self.extent * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::Input(format!(
                "translation of size {reach} exceeds the prepared extent {}",
                self.extent
            )));
        }
        let (n1, n2) = (ys1.len(), ys2.len());
        let mut chunk = TensorChunk::new(n1, n2, want_imag);
        for node in &self.nodes {
            let nt = node.n_theta;
            // θ and θ + π carry conjugate phases, so pair them
            let half = nt / 2;
            if chunk.rows + half > CHUNK_ROWS && chunk.rows > 0 {
                chunk.flush();
            }
            chunk.reserve(half);
            let h = 2.0 * PI / nt as f64;
            let shift = angle / h;
            let on_grid = (shift - shift.round()).abs() < 1e-9;
            let s = shift.round().rem_euclid(nt as f64) as usize;
            let gval = |j: usize| -> f64 {
                if on_grid {
                    node.funcs
                        .iter()
                        .zip(&node.samples)
                        .map(|((w, _), smp)| w * smp[(j + s) % nt] * smp[j])
                        .sum()
                } else {
                    let th = j as f64 * h;
                    node.funcs
                        .iter()
                        .zip(&node.samples)
                        .map(|((w, f), smp)| w * eval_fast(f, th + angle) * smp[j])
                        .sum()
                }
            };
            let lam = node.lambda;
            for j in 0..half {
                let (g, g_opp) = (gval(j), gval(j + half));
                let th = j as f64 * h;
                let (sn, cs) = th.sin_cos();
                let u = [cs, -sn];
                let p0 = lam * (center[0] * u[0] + center[1] * u[1]);
                let d1 = lam * (axes[0][0] * u[0] + axes[0][1] * u[1]);
                let d2 = lam * (axes[1][0] * u[0] + axes[1][1] * u[1]);
                let scale = h * node.weight;
                chunk.push((g + g_opp) * scale, (g - g_opp) * scale, p0, d1, d2, ys1, ys2);
            }
        }
        chunk.flush();
        Ok((chunk.re, chunk.im))
    }
}

const CHUNK_ROWS: usize = 4096;

/// Paired angular rows: with `P = e^{i(p₀ + d₁y₁)}` and `E = e^{i d₂y₂}`,
/// a pair contributes `w₊ Re(PE) + i w₋ Im(PE)`, which is a handful of
/// real matrix products once rows are stacked.
struct TensorChunk {
    n1: usize,
    n2: usize,
    want_imag: bool,
    rows: usize,
    // n1 × rows, column-major
    pr: Vec<f64>,
    pi: Vec<f64>,
    qr: Vec<f64>,
    qi: Vec<f64>,
    // n2 × rows, column-major
    er: Vec<f64>,
    ei: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
    // Kahan carries for the output
    re_c: Vec<f64>,
    im_c: Vec<f64>,
}

impl TensorChunk {
    fn new(n1: usize, n2: usize, want_imag: bool) -> Self {
        let n = n1 * n2;
        Self {
            n1,
            n2,
            want_imag,
            rows: 0,
            pr: Vec::new(),
            pi: Vec::new(),
            qr: Vec::new(),
            qi: Vec::new(),
            er: Vec::new(),
            ei: Vec::new(),
            re: vec![0.0; n],
            im: vec![0.0; n],
            re_c: vec![0.0; n],
            im_c: vec![0.0; n],
        }
    }

    fn reserve(&mut self, extra: usize) {
        self.pr.reserve(extra * self.n1);
        self.pi.reserve(extra * self.n1);
        if self.want_imag {
            self.qr.reserve(extra * self.n1);
            self.qi.reserve(extra * self.n1);
        }
        self.er.reserve(extra * self.n2);
        self.ei.reserve(extra * self.n2);
    }

    #[allow(clippy::too_many_arguments)]
    fn push(&mut self, w_plus: f64, w_minus: f64, p0: f64, d1: f64, d2: f64, ys1: &[f64], ys2: &[f64]) {
        for y in ys1 {
            let (s, c) = (p0 + d1 * y).sin_cos();
            self.pr.push(w_plus * c);
            self.pi.push(w_plus * s);
            if self.want_imag {
                self.qr.push(w_minus * c);
                self.qi.push(w_minus * s);
            }
        }
        for y in ys2 {
            let (s, c) = (d2 * y).sin_cos();
            self.er.push(c);
            self.ei.push(s);
        }
        self.rows += 1;
    }

    fn flush(&mut self) {
        if self.rows == 0 {
            return;
        }
        let (n1, n2, r) = (self.n1, self.n2, self.rows);
        let er = DMatrix::from_column_slice(n2, r, &self.er).transpose();
        let ei = DMatrix::from_column_slice(n2, r, &self.ei).transpose();
        let pr = DMatrix::from_column_slice(n1, r, &self.pr);
        let pi = DMatrix::from_column_slice(n1, r, &self.pi);
        let mut re = &pr * &er;
        re.gemm(-1.0, &pi, &ei, 1.0);
        kahan_into(&mut self.re, &mut self.re_c, &re, n2);
        if self.want_imag {
            let qr = DMatrix::from_column_slice(n1, r, &self.qr);
            let qi = DMatrix::from_column_slice(n1, r, &self.qi);
            let mut im = &qr * &ei;
            im.gemm(1.0, &qi, &er, 1.0);
            kahan_into(&mut self.im, &mut self.im_c, &im, n2);
        }
        self.rows = 0;
        for v in [
            &mut self.pr,
            &mut self.pi,
            &mut self.qr,
            &mut self.qi,
            &mut self.er,
            &mut self.ei,
        ] {
            v.clear();
        }
    }
}

fn kahan_into(sum: &mut [f64], carry: &mut [f64], m: &DMatrix<f64>, n2: usize) {
    for i in 0..m.nrows() {
        for j in 0..n2 {
            let k = i * n2 + j;
            let y = m[(i, j)] - carry[k];
            let t = sum[k] + y;
            carry[k] = (t - sum[k]) - y;
            sum[k] = t;
        }
    }
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
        (a.min(x), b.max(x))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::mathieu_spectrum;

    #[test]
    fn fast_eval_matches_direct() {
        let b = mathieu_spectrum(7.3, 6, 40).unwrap();
        for f in b.functions() {
            for th in [0.0, 0.3, 2.0, 5.9] {
                assert!((eval_fast(f, th) - f.eval(th)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn element_examples() {
        let lambda = 2.5;
        let b = mathieu_spectrum(lambda * lambda / 4.0, 5, 40).unwrap();
        let id = SE2Element::identity();
        for n in 0..5 {
            let v = se2_matrix_element(lambda, n, Parity::Even, &id, &b).unwrap();
            assert!((v - 1.0).norm() < 1e-13);
        }
        let rot = SE2Element::new(0.9, 0.0, 0.0).unwrap();
        let v = se2_matrix_element(lambda, 2, Parity::Odd, &rot, &b).unwrap();
        assert!(v.im.abs() < 1e-15 && v.re.abs() <= 1.0);
        let g = SE2Element::new(1.3, 0.7, -1.9).unwrap();
        for n in 0..5 {
            let v = se2_matrix_element(lambda, n, Parity::Even, &g, &b).unwrap();
            assert!(v.im.abs() < 1e-10, "{v}");
        }
        assert!(se2_matrix_element(3.0, 0, Parity::Even, &g, &b).is_err());
    }

    #[test]
    fn tensor_grid_matches_pointwise() {
        let p = TruncationPolicy::default();
        let k = Se2HeatKernel::new(0.8, &p, 3.0).unwrap();
        let ys = [-1.0, 0.2, 1.4];
        let grid = k
            .eval_tensor(0.7, [0.3, -0.2], [[0.8, 0.6], [-0.6, 0.8]], &ys, &ys)
            .unwrap();
        for (i, a) in ys.iter().enumerate() {
            for (j, b) in ys.iter().enumerate() {
                let x1 = 0.3 + a * 0.8 - b * 0.6;
                let x2 = -0.2 + a * 0.6 + b * 0.8;
                let v = k.eval(&SE2Element::new(0.7, x1, x2).unwrap()).unwrap();
                assert!((grid[i * 3 + j].re - v.value).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn refuses_points_beyond_extent() {
        let k = Se2HeatKernel::new(1.0, &TruncationPolicy::default(), 1.0).unwrap();
        assert!(k.eval(&SE2Element::new(0.0, 2.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn real_and_positive() {
        let p = TruncationPolicy::default();
        let k = Se2HeatKernel::new(0.5, &p, 2.0).unwrap();
        for (a, x1, x2) in [(0.0, 0.0, 0.0), (1.0, 0.5, -0.3), (3.0, -1.0, 1.2)] {
            let r = k.eval(&SE2Element::new(a, x1, x2).unwrap()).unwrap();
            assert!(r.imag_residual < 1e-10, "{r:?}");
            assert!(r.value > 0.0, "{r:?}");
        }
    }

    #[test]
    fn symmetric_under_inverse() {
        let p = TruncationPolicy::default();
        let g = SE2Element::new(0.8, 0.6, -0.4).unwrap();
        let k = Se2HeatKernel::new(0.6, &p, 1.0).unwrap();
        let a = k.eval(&g).unwrap().value;
        let b = k.eval(&g.inverse()).unwrap().value;
        assert!((a - b).abs() < 1e-8, "{a} {b}");
    }
}
