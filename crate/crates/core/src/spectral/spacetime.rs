use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::field::{FieldState, Representation};
use super::grid::{signed_mode, SpectralGrid};
use super::lp::{check_dyadic, dyadic_cover, dyadic_weight};
use super::norms::{check_exponent, lq_of_samples};
use crate::error::{Error, Result};
use crate::symbols::w_symbol;

/// Samples of `u(t, x, y)` at `t_n = t0 + n dt`, `n < nt`, stored slice by
/// slice in physical space.
#[derive(Clone, Debug)]
pub struct SpaceTimeField {
    grid: SpectralGrid,
    t0: f64,
    dt: f64,
    nt: usize,
    values: Vec<Complex64>,
}

impl SpaceTimeField {
    pub fn new(grid: SpectralGrid, t0: f64, dt: f64, nt: usize, values: Vec<Complex64>) -> Result<Self> {
        if nt < 4 {
            return Err(Error::InvalidParameter(format!("nt = {nt}, need at least 4 time samples")));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidTimeStep(dt));
        }
        if values.len() != nt * grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for {nt} slices of {} samples",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            t0,
            dt,
            nt,
            values,
        })
    }

    /// Samples `f(t, x, y)` on `nt` uniformly spaced times in `[t0, t0 + (nt-1) dt]`.
    pub fn from_fn(
        grid: &SpectralGrid,
        t0: f64,
        dt: f64,
        nt: usize,
        f: impl Fn(f64, f64, f64) -> Complex64 + Sync,
    ) -> Result<Self> {
        let n = grid.len();
        let values: Vec<Complex64> = (0..nt * n)
            .into_par_iter()
            .map(|i| {
                let (x, y) = grid.point(i % n);
                f(t0 + (i / n) as f64 * dt, x, y)
            })
            .collect();
        Self::new(grid.clone(), t0, dt, nt, values)
    }

    /// Stacks equally spaced snapshots.
    pub fn from_slices(slices: &[FieldState], t0: f64, dt: f64) -> Result<Self> {
        let grid = slices
            .first()
            .ok_or_else(|| Error::InvalidParameter("no time slices".into()))?
            .grid()
            .clone();
        let mut values = Vec::with_capacity(slices.len() * grid.len());
        for s in slices {
            if s.grid() != &grid {
                return Err(Error::GridMismatch);
            }
            values.extend_from_slice(s.to_physical().values());
        }
        Self::new(grid, t0, dt, slices.len(), values)
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.dt
    }

    /// Span covered by the samples, `(nt - 1) dt`.
    pub fn window(&self) -> f64 {
        (self.nt - 1) as f64 * self.dt
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn slice(&self, n: usize) -> FieldState {
        let len = self.grid.len();
        FieldState::new(
            self.grid.clone(),
            self.values[n * len..(n + 1) * len].to_vec(),
            Representation::Physical,
            self.time(n),
        )
        .expect("slice length matches grid")
    }

    /// Space-time `L^2` by periodic Riemann sum (weight `dt * cell`).
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (self.dt * self.grid.cell() * s).sqrt()
    }

    pub fn sub(&self, other: &SpaceTimeField) -> Result<SpaceTimeField> {
        if self.grid != other.grid || self.nt != other.nt {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self {
            values,
            ..self.clone()
        })
    }

    /// Per-mode time series after removing the free phase, transformed to
    /// the modulation variable. Layout: mode-major, `nt` entries per mode.
    fn modulation_spectrum(&self) -> Vec<Complex64> {
        let n = self.grid.len();
        let nt = self.nt;
        let mut spectra = self.values.clone();
        spectra
            .par_chunks_mut(n)
            .for_each(|slice| self.grid.fft(slice, true));

        let fft = FftPlanner::new().plan_fft_forward(nt);
        let scale = 1.0 / (nt as f64).sqrt();
        let mut out = vec![Complex64::new(0.0, 0.0); n * nt];
        out.par_chunks_mut(nt).enumerate().for_each(|(idx, series)| {
            let (xi, mu) = self.grid.wavevector(idx);
            let w = w_symbol(xi, mu);
            for (m, s) in series.iter_mut().enumerate() {
                *s = spectra[m * n + idx] * Complex64::from_polar(scale, -self.time(m) * w);
            }
            fft.process(series);
        });
        out
    }

    fn from_modulation_spectrum(&self, mut spec: Vec<Complex64>) -> SpaceTimeField {
        let n = self.grid.len();
        let nt = self.nt;
        let ifft = FftPlanner::new().plan_fft_inverse(nt);
        let scale = 1.0 / (nt as f64).sqrt();
        spec.par_chunks_mut(nt).enumerate().for_each(|(idx, series)| {
            let (xi, mu) = self.grid.wavevector(idx);
            let w = w_symbol(xi, mu);
            ifft.process(series);
            for (m, s) in series.iter_mut().enumerate() {
                *s *= Complex64::from_polar(scale, self.time(m) * w);
            }
        });
        let mut values = vec![Complex64::new(0.0, 0.0); n * nt];
        values.par_chunks_mut(n).enumerate().for_each(|(m, slice)| {
            for (idx, v) in slice.iter_mut().enumerate() {
                *v = spec[idx * nt + m];
            }
            self.grid.fft(slice, false);
        });
        SpaceTimeField {
            values,
            ..self.clone()
        }
    }

    /// Modulation frequency of time slot `m`.
    fn sigma(&self, m: usize) -> f64 {
        2.0 * PI * signed_mode(m, self.nt) as f64 / (self.nt as f64 * self.dt)
    }

    fn warn_if_unresolved(&self) {
        let spacing = 2.0 * PI / (self.nt as f64 * self.dt);
        if spacing > 1.25 {
            log::warn!(
                "time window {} resolves modulations only in steps of {spacing:.3}; \
                 the lowest modulation band collapses to a single frequency",
                self.nt as f64 * self.dt
            );
        }
        let first = self.pulled_back_slice(0);
        let last = self.pulled_back_slice(self.nt - 1);
        let scale = first.l2_norm().max(last.l2_norm());
        if scale > 0.0 && first.l2_distance(&last).unwrap_or(0.0) > 1e-3 * scale {
            log::warn!("pulled-back field differs at the window ends; periodization adds spurious modulation");
        }
    }

    fn pulled_back_slice(&self, n: usize) -> FieldState {
        let t = self.time(n);
        self.slice(n)
            .apply_multiplier(|xi, mu| Complex64::from_polar(1.0, -t * w_symbol(xi, mu)))
    }
}

/// Smooth projection onto space-time frequencies with `|tau - w(xi, mu)| ~ l`.
///
/// The time direction is treated as periodic over `nt * dt`.
pub fn modulation_project(f: &SpaceTimeField, l: u64) -> Result<SpaceTimeField> {
    check_dyadic(l)?;
    f.warn_if_unresolved();
    let nt = f.nt;
    let mut spec = f.modulation_spectrum();
    let weights: Vec<f64> = (0..nt).map(|m| dyadic_weight(l, f.sigma(m).abs())).collect();
    spec.par_chunks_mut(nt).for_each(|series| {
        for (s, w) in series.iter_mut().zip(&weights) {
            *s *= w;
        }
    });
    Ok(f.from_modulation_spectrum(spec))
}

/// Modulation blocks whose weights sum to one on the time-frequency lattice.
pub fn modulation_cover(f: &SpaceTimeField) -> Vec<u64> {
    dyadic_cover(PI / f.dt)
}

/// `L^p_t L^q_{xy}` norm: Riemann sum in space, trapezoid rule in time.
pub fn mixed_norm(f: &SpaceTimeField, p: f64, q: f64) -> Result<f64> {
    check_exponent(p)?;
    check_exponent(q)?;
    let n = f.grid.len();
    let cell = f.grid.cell();
    let inner: Vec<f64> = f
        .values
        .par_chunks(n)
        .map(|slice| lq_of_samples(slice, cell, q))
        .collect();
    Ok(time_lp(&inner, f.dt, p))
}

/// Trapezoid-rule `L^p` norm in time of per-slice values.
pub(crate) fn time_lp(inner: &[f64], dt: f64, p: f64) -> f64 {
    if p.is_infinite() {
        return inner.iter().copied().fold(0.0, f64::max);
    }
    let last = inner.len().saturating_sub(1);
    let sum: f64 = inner
        .iter()
        .enumerate()
        .map(|(m, v)| {
            let w = if m == 0 || m == last { 0.5 } else { 1.0 };
            w * v.powf(p)
        })
        .sum();
    (dt * sum).powf(1.0 / p)
}

/// Fourier restriction norm `(sum_{N,L} N^{2s} L^{2b} ||P_N Q_L F||^2)^{1/2}`
/// with the space-time `L^2` norm taken as a periodic Riemann sum.
pub fn xsb_norm(f: &SpaceTimeField, s: f64, b: f64) -> f64 {
    f.warn_if_unresolved();
    let nt = f.nt;
    let spec = f.modulation_spectrum();
    let freq_blocks = dyadic_cover(f.grid.max_wavenumber());
    let mod_blocks = modulation_cover(f);
    let time_weight: Vec<f64> = (0..nt)
        .map(|m| {
            let sigma = f.sigma(m).abs();
            mod_blocks
                .iter()
                .map(|&l| (l as f64).powf(2.0 * b) * dyadic_weight(l, sigma).powi(2))
                .sum()
        })
        .collect();
    let total: f64 = spec
        .par_chunks(nt)
        .enumerate()
        .map(|(idx, series)| {
            let (xi, mu) = f.grid.wavevector(idx);
            let r = xi.hypot(mu);
            let space_weight: f64 = freq_blocks
                .iter()
                .map(|&n| (n as f64).powf(2.0 * s) * dyadic_weight(n, r).powi(2))
                .sum();
            if space_weight == 0.0 {
                return 0.0;
            }
            let t: f64 = series
                .iter()
                .zip(&time_weight)
                .map(|(v, w)| w * v.norm_sqr())
                .sum();
            space_weight * t
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    (f.dt * f.grid.cell() * total).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::lp::lp_project;

    fn free_wave(grid: &SpectralGrid, j: i64, k: i64, extra: f64, dt: f64, nt: usize) -> SpaceTimeField {
        let (sx, sy) = grid.spacing();
        let (xi, mu) = (sx * j as f64, sy * k as f64);
        let w = w_symbol(xi, mu);
        SpaceTimeField::from_fn(grid, 0.0, dt, nt, |t, x, y| {
            Complex64::from_polar(1.0, xi * x + mu * y + t * (w + extra))
        })
        .unwrap()
    }

    fn grid() -> SpectralGrid {
        SpectralGrid::new(16, 16, 2.0 * PI, 2.0 * PI).unwrap()
    }

    #[test]
    fn free_wave_sits_in_lowest_modulation_band() {
        let g = grid();
        let f = free_wave(&g, 2, 1, 0.0, 2.0 * PI / 32.0, 32);
        let q = modulation_project(&f, 1).unwrap();
        assert!(q.sub(&f).unwrap().l2_norm() < 1e-12 * f.l2_norm());
        let q2 = modulation_project(&f, 2).unwrap();
        assert!(q2.l2_norm() < 1e-12 * f.l2_norm());
    }

    #[test]
    fn shifted_wave_sits_in_its_band() {
        let g = grid();
        // Time period 2 pi makes the modulation lattice the integers.
        let nt = 64;
        let dt = 2.0 * PI / nt as f64;
        for l in 0..4u32 {
            let shift = (1u64 << l) as f64;
            let f = free_wave(&g, 1, 1, shift, dt, nt);
            let q = modulation_project(&f, 1 << l).unwrap();
            assert!(q.sub(&f).unwrap().l2_norm() < 1e-11 * f.l2_norm(), "band {}", 1 << l);
        }
    }

    #[test]
    fn modulation_bands_resum() {
        let g = SpectralGrid::new(8, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let f = SpaceTimeField::from_fn(&g, -1.0, 0.05, 40, |t, x, y| {
            Complex64::new((x - t).cos() * (-y * y).exp(), (t * t * x).sin())
        })
        .unwrap();
        let mut acc = vec![Complex64::new(0.0, 0.0); f.values().len()];
        for l in modulation_cover(&f) {
            let q = modulation_project(&f, l).unwrap();
            for (a, v) in acc.iter_mut().zip(q.values()) {
                *a += v;
            }
        }
        let err: f64 = acc
            .iter()
            .zip(f.values())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let norm: f64 = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        assert!(err < 1e-12 * norm);
    }

    #[test]
    fn xsb_of_single_cell_mode() {
        let g = grid();
        let nt = 64;
        let dt = 2.0 * PI / nt as f64;
        // |(4, 0)| = 4 and modulation 2: weight 1 in the (4, 2) cell only.
        let f = free_wave(&g, 4, 0, 2.0, dt, nt);
        let l2 = f.l2_norm();
        for (s, b) in [(0.0, 0.0), (1.0, 0.5), (-0.5, 2.0)] {
            let expect = 4f64.powf(s) * 2f64.powf(b) * l2;
            assert!((xsb_norm(&f, s, b) - expect).abs() < 1e-10 * expect);
        }
    }

    #[test]
    fn xsb_zero_field() {
        let g = grid();
        let f = SpaceTimeField::from_fn(&g, 0.0, 0.1, 8, |_, _, _| Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(xsb_norm(&f, 1.0, 0.5), 0.0);
    }

    #[test]
    fn xsb_l2_bounds_for_general_data() {
        let g = SpectralGrid::new(16, 16, 8.0, 8.0).unwrap();
        let f = SpaceTimeField::from_fn(&g, -2.0, 0.1, 41, |t, x, y| {
            Complex64::new((-(x - t).powi(2) - y * y).exp(), 0.3 * (-(x * x + y * y) / 2.0).exp())
        })
        .unwrap();
        let l2 = f.l2_norm();
        let x = xsb_norm(&f, 0.0, 0.0);
        assert!(x <= l2 * (1.0 + 1e-12));
        assert!(x >= 0.5 * l2 * (1.0 - 1e-12));
    }

    #[test]
    fn lp_blocks_match_xsb_spatial_weight() {
        let g = grid();
        let nt = 16;
        let f = free_wave(&g, 3, 2, 0.0, 2.0 * PI / nt as f64, nt);
        let slice = f.slice(0);
        let sq: f64 = dyadic_cover(g.max_wavenumber())
            .iter()
            .map(|&n| lp_project(&slice, n).unwrap().l2_norm().powi(2))
            .sum();
        let per_slice = (sq * nt as f64 * f.dt()).sqrt();
        assert!((xsb_norm(&f, 0.0, 0.0) - per_slice).abs() < 1e-10 * per_slice);
    }

    #[test]
    fn mixed_norm_of_constant() {
        let g = grid();
        let f = SpaceTimeField::from_fn(&g, 0.0, 0.25, 5, |_, _, _| Complex64::new(2.0, 0.0)).unwrap();
        // Spatial L^2 = 2 * 2 pi on every slice; window length 1.
        assert!((mixed_norm(&f, 2.0, 2.0).unwrap() - 4.0 * PI).abs() < 1e-12);
        assert!((mixed_norm(&f, f64::INFINITY, f64::INFINITY).unwrap() - 2.0).abs() < 1e-15);
        assert!(mixed_norm(&f, 0.0, 2.0).is_err());
    }

    #[test]
    fn rejects_short_windows() {
        let g = grid();
        assert!(SpaceTimeField::from_fn(&g, 0.0, 0.1, 3, |_, _, _| Complex64::new(0.0, 0.0)).is_err());
        let f = SpaceTimeField::from_fn(&g, 0.0, 0.1, 4, |_, _, _| Complex64::new(0.0, 0.0)).unwrap();
        assert!(modulation_project(&f, 6).is_err());
    }
}
