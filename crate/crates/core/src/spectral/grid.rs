use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Row batches below this many points are transformed on the calling thread.
const PARALLEL_THRESHOLD: usize = 1 << 15;

struct Plans {
    forward_x: Arc<dyn Fft<f64>>,
    inverse_x: Arc<dyn Fft<f64>>,
    forward_y: Arc<dyn Fft<f64>>,
    inverse_y: Arc<dyn Fft<f64>>,
    kx: Vec<f64>,
    ky: Vec<f64>,
}

/// Periodic box `[-Lx/2, Lx/2) x [-Ly/2, Ly/2)` sampled on `nx x ny` points.
///
/// Samples are stored row-major with `x` as the slow index, so sample
/// `(i, j)` lives at `i * ny + j`. Spectral coefficients use the same layout
/// in FFT order; the signed mode index of slot `j` is `j` for `j < n/2` and
/// `j - n` otherwise, which puts the lattice on `[-n/2, n/2)`.
///
/// A grid with `ny == 1` is a one-dimensional line (see [`SpectralGrid::line`]).
#[derive(Clone)]
pub struct SpectralGrid {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    plans: Arc<Plans>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("nx", &self.nx)
            .field("ny", &self.ny)
            .field("lx", &self.lx)
            .field("ly", &self.ly)
            .finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.lx == other.lx && self.ly == other.ly
    }
}

pub(crate) fn signed_mode(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn lattice(n: usize, len: f64) -> Vec<f64> {
    (0..n)
        .map(|j| 2.0 * PI * signed_mode(j, n) as f64 / len)
        .collect()
}

impl SpectralGrid {
    /// Two-dimensional grid. Mode counts must be even and at least 8.
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 8 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n} must be even and at least 8"
                )));
            }
        }
        for (name, l) in [("Lx", lx), ("Ly", ly)] {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidGrid(format!("{name} = {l} must be positive")));
            }
        }
        Ok(Self::build(nx, ny, lx, ly))
    }

    /// One-dimensional grid on `[-Lx/2, Lx/2)`; stored with `ny = 1, Ly = 1`.
    pub fn line(nx: usize, lx: f64) -> Result<Self> {
        if nx < 8 || nx % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "nx = {nx} must be even and at least 8"
            )));
        }
        if !(lx > 0.0 && lx.is_finite()) {
            return Err(Error::InvalidGrid(format!("Lx = {lx} must be positive")));
        }
        Ok(Self::build(nx, 1, lx, 1.0))
    }

    fn build(nx: usize, ny: usize, lx: f64, ly: f64) -> Self {
        let mut planner = FftPlanner::new();
        let plans = Plans {
            forward_x: planner.plan_fft_forward(nx),
            inverse_x: planner.plan_fft_inverse(nx),
            forward_y: planner.plan_fft_forward(ny),
            inverse_y: planner.plan_fft_inverse(ny),
            kx: lattice(nx, lx),
            ky: if ny == 1 { vec![0.0] } else { lattice(ny, ly) },
        };
        Self {
            nx,
            ny,
            lx,
            ly,
            plans: Arc::new(plans),
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn is_1d(&self) -> bool {
        self.ny == 1
    }

    pub fn dims(&self) -> usize {
        if self.is_1d() {
            1
        } else {
            2
        }
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    /// Quadrature weight of one sample (`dx` on a line).
    pub fn cell(&self) -> f64 {
        if self.is_1d() {
            self.dx()
        } else {
            self.dx() * self.dy()
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        -0.5 * self.lx + i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        if self.is_1d() {
            0.0
        } else {
            -0.5 * self.ly + j as f64 * self.dy()
        }
    }

    /// Physical coordinates of sample `idx`.
    pub fn point(&self, idx: usize) -> (f64, f64) {
        (self.x(idx / self.ny), self.y(idx % self.ny))
    }

    /// Signed lattice indices `(j, k)` of spectral slot `idx`.
    pub fn mode(&self, idx: usize) -> (i64, i64) {
        (
            signed_mode(idx / self.ny, self.nx),
            if self.is_1d() {
                0
            } else {
                signed_mode(idx % self.ny, self.ny)
            },
        )
    }

    /// Frequencies `(xi, mu)` of spectral slot `idx`.
    #[inline]
    pub fn wavevector(&self, idx: usize) -> (f64, f64) {
        (self.plans.kx[idx / self.ny], self.plans.ky[idx % self.ny])
    }

    pub fn kx(&self) -> &[f64] {
        &self.plans.kx
    }

    pub fn ky(&self) -> &[f64] {
        &self.plans.ky
    }

    /// Lattice spacings `(2 pi / Lx, 2 pi / Ly)`.
    pub fn spacing(&self) -> (f64, f64) {
        (2.0 * PI / self.lx, 2.0 * PI / self.ly)
    }

    /// Sorted frequency lattice in `x`: `2 pi j / Lx` for `j` in `[-nx/2, nx/2)`.
    pub fn xi_lattice(&self) -> Vec<f64> {
        let h = self.nx as i64 / 2;
        (-h..h).map(|j| 2.0 * PI * j as f64 / self.lx).collect()
    }

    pub fn mu_lattice(&self) -> Vec<f64> {
        if self.is_1d() {
            return vec![0.0];
        }
        let h = self.ny as i64 / 2;
        (-h..h).map(|j| 2.0 * PI * j as f64 / self.ly).collect()
    }

    /// True when slot `idx` sits on the Nyquist row or column.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let (j, k) = self.mode(idx);
        j == -(self.nx as i64) / 2 || (!self.is_1d() && k == -(self.ny as i64) / 2)
    }

    /// Largest `|(xi, mu)|` on the lattice.
    pub fn max_wavenumber(&self) -> f64 {
        let (sx, sy) = self.spacing();
        let kx = sx * (self.nx / 2) as f64;
        let ky = if self.is_1d() { 0.0 } else { sy * (self.ny / 2) as f64 };
        kx.hypot(ky)
    }

    /// The same sampling on a box shrunk by `lambda` in every direction.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "scaling factor must be positive, got {lambda}"
            )));
        }
        if self.is_1d() {
            Self::line(self.nx, self.lx / lambda)
        } else {
            Self::new(self.nx, self.ny, self.lx / lambda, self.ly / lambda)
        }
    }

    /// In-place unitary 2D DFT (forward uses `exp(-i k x)`).
    pub(crate) fn fft(&self, data: &mut [Complex64], forward: bool) {
        debug_assert_eq!(data.len(), self.len());
        let (px, py) = if forward {
            (&self.plans.forward_x, &self.plans.forward_y)
        } else {
            (&self.plans.inverse_x, &self.plans.inverse_y)
        };
        if self.ny > 1 {
            transform_rows(py.as_ref(), data, self.ny);
        }
        if self.ny == 1 {
            transform_rows(px.as_ref(), data, self.nx);
        } else {
            let mut t = vec![Complex64::new(0.0, 0.0); data.len()];
            transpose(data, &mut t, self.nx, self.ny);
            transform_rows(px.as_ref(), &mut t, self.nx);
            transpose(&t, data, self.ny, self.nx);
        }
        let scale = 1.0 / (self.len() as f64).sqrt();
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Transforms every contiguous row of length `n`.
fn transform_rows(plan: &dyn Fft<f64>, data: &mut [Complex64], n: usize) {
    if data.len() < PARALLEL_THRESHOLD {
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        return;
    }
    let rows_per_task = (PARALLEL_THRESHOLD / n).max(1);
    data.par_chunks_mut(rows_per_task * n).for_each(|chunk| {
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(chunk, &mut scratch);
    });
}

/// `src` is `rows x cols` row-major; `dst` becomes `cols x rows`.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const B: usize = 32;
    for rb in (0..rows).step_by(B) {
        for cb in (0..cols).step_by(B) {
            for r in rb..(rb + B).min(rows) {
                for c in cb..(cb + B).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}
