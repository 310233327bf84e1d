//! Explicit finite-difference solver for `∂_t φ = (L₁² + L₂²) φ` on H₂,
//! `L₁ = ∂x − (y/2)∂z`, `L₂ = ∂y + (x/2)∂z`. Deliberately crude: it exists
//! to catch sign and factor errors in the kernel, not to match tolerances.

use serde::Serialize;

use crate::error::{Error, Result};

/// Box `[lo, hi]` per axis and its grid step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(hi > lo && step > 0.0 && step.is_finite()) {
            return Err(Error::Input(format!("bad axis [{lo}, {hi}] with step {step}")));
        }
        Ok(Self { lo, hi, step })
    }

    fn len(&self) -> usize {
        ((self.hi - self.lo) / self.step).round() as usize + 1
    }

    fn at(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step
    }
}

/// Solution `φ(t, ·)` on the grid, x slowest and z fastest.
#[derive(Debug, Clone)]
pub struct PdeGrid {
    pub axes: [Axis; 3],
    pub dims: [usize; 3],
    pub values: Vec<f64>,
    pub t: f64,
    /// Largest `|mass − 1|` seen during the run.
    pub mass_drift: f64,
    pub steps: usize,
}

impl PdeGrid {
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn mass(&self) -> f64 {
        let cell = self.axes.iter().map(|a| a.step).product::<f64>();
        self.values.iter().sum::<f64>() * cell
    }

    /// Trilinear interpolation; `None` outside the box.
    pub fn value_at(&self, p: [f64; 3]) -> Option<f64> {
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        for d in 0..3 {
            let u = (p[d] - self.axes[d].lo) / self.axes[d].step;
            if u < 0.0 || u > (self.dims[d] - 1) as f64 {
                return None;
            }
            let b = (u.floor() as usize).min(self.dims[d] - 2);
            base[d] = b;
            frac[d] = u - b as f64;
        }
        let mut v = 0.0;
        for c in 0..8 {
            let o = [(c >> 2) & 1, (c >> 1) & 1, c & 1];
            let w: f64 = (0..3)
                .map(|d| if o[d] == 1 { frac[d] } else { 1.0 - frac[d] })
                .product();
            v += w * self.values[self.idx(base[0] + o[0], base[1] + o[1], base[2] + o[2])];
        }
        Some(v)
    }
}

/// Largest stable explicit step on this box: `1.8/λ_max` with
/// `λ_max ≤ (2/h_x + |y|/h_z)² + (2/h_y + |x|/h_z)²` bounding the symbol.
pub fn h2_pde_max_step(axes: &[Axis; 3]) -> f64 {
    let xm = axes[0].lo.abs().max(axes[0].hi.abs());
    let ym = axes[1].lo.abs().max(axes[1].hi.abs());
    let a = 2.0 / axes[0].step + ym / axes[2].step;
    let b = 2.0 / axes[1].step + xm / axes[2].step;
    1.8 / (a * a + b * b)
}

/// Explicit Euler from a narrow normalised Gaussian at the identity
/// (widths `sigma` in x, y and `sigma_z` in z), central differences,
/// zero values outside the box.
pub fn h2_pde_oracle(axes: [Axis; 3], t: f64, dt: f64, sigma: f64, sigma_z: f64) -> Result<PdeGrid> {
    crate::gft_kernels::check_time(t)?;
    let limit = h2_pde_max_step(&axes);
    if !(dt > 0.0 && dt <= limit) {
        return Err(Error::Input(format!(
            "time step {dt} violates the stability bound {limit:.3e}"
        )));
    }
    let dims = [axes[0].len(), axes[1].len(), axes[2].len()];
    if dims.iter().any(|&n| n < 5) {
        return Err(Error::Input("grid needs at least 5 points per axis".into()));
    }
    let mut grid = PdeGrid {
        axes,
        dims,
        values: vec![0.0; dims[0] * dims[1] * dims[2]],
        t,
        mass_drift: 0.0,
        steps: 0,
    };
    let norm = 1.0 / ((2.0 * std::f64::consts::PI).powf(1.5) * sigma * sigma * sigma_z);
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                let (x, y, z) = (axes[0].at(i), axes[1].at(j), axes[2].at(k));
                let e = (x * x + y * y) / (2.0 * sigma * sigma) + z * z / (2.0 * sigma_z * sigma_z);
                let id = grid.idx(i, j, k);
                grid.values[id] = norm * (-e).exp();
            }
        }
    }
    // renormalise the discrete mass so drift is measured from exactly one
    let m0 = grid.mass();
    grid.values.iter_mut().for_each(|v| *v /= m0);
    let peak0 = grid.values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));

    let steps = (t / dt).ceil() as usize;
    let dt = t / steps as f64;
    let [hx, hy, hz] = [axes[0].step, axes[1].step, axes[2].step];
    let n = grid.values.len();
    let mut next = vec![0.0; n];
    let (d0, d1, d2) = (dims[0] as isize, dims[1] as isize, dims[2] as isize);
    // L₁² = ∂x² − y∂x∂z + (y²/4)∂z², L₂² = ∂y² + x∂y∂z + (x²/4)∂z², compact
    // stencils; every term is a difference along a direction its
    // coefficient does not depend on, so the grid sum is conserved
    for step in 0..steps {
        let src = &grid.values;
        let at = |i: isize, j: isize, k: isize| -> f64 {
            if i < 0 || j < 0 || k < 0 || i >= d0 || j >= d1 || k >= d2 {
                0.0
            } else {
                src[((i * d1 + j) * d2 + k) as usize]
            }
        };
        for i in 0..d0 {
            let x = axes[0].at(i as usize);
            for j in 0..d1 {
                let y = axes[1].at(j as usize);
                for k in 0..d2 {
                    let c = at(i, j, k);
                    let dxx = (at(i + 1, j, k) - 2.0 * c + at(i - 1, j, k)) / (hx * hx);
                    let dyy = (at(i, j + 1, k) - 2.0 * c + at(i, j - 1, k)) / (hy * hy);
                    let dzz = (at(i, j, k + 1) - 2.0 * c + at(i, j, k - 1)) / (hz * hz);
                    let dxz = (at(i + 1, j, k + 1) - at(i + 1, j, k - 1) - at(i - 1, j, k + 1)
                        + at(i - 1, j, k - 1))
                        / (4.0 * hx * hz);
                    let dyz = (at(i, j + 1, k + 1) - at(i, j + 1, k - 1) - at(i, j - 1, k + 1)
                        + at(i, j - 1, k - 1))
                        / (4.0 * hy * hz);
                    let lap = dxx + dyy - y * dxz + x * dyz + 0.25 * (x * x + y * y) * dzz;
                    next[((i * d1 + j) * d2 + k) as usize] = c + dt * lap;
                }
            }
        }
        std::mem::swap(&mut grid.values, &mut next);
        let peak = grid.values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        if !peak.is_finite() || peak > 10.0 * peak0 {
            return Err(Error::Numeric(format!("explicit scheme blew up at step {step}")));
        }
        grid.mass_drift = grid.mass_drift.max((grid.mass() - 1.0).abs());
    }
    grid.steps = steps;
    Ok(grid)
}
