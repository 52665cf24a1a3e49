use num_complex::Complex64;

use super::grid::SpectralGrid;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Spectral,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Physical => "physical",
            Representation::Spectral => "spectral",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    ToSpectral,
    ToPhysical,
}

/// Complex envelope sampled on a grid at one instant.
///
/// Spectral values are unitary DFT coefficients, so `sum |u|^2` is the same
/// in both representations and the mass is `cell * sum |u|^2` either way.
#[derive(Clone, Debug)]
pub struct FieldState {
    grid: SpectralGrid,
    values: Vec<Complex64>,
    repr: Representation,
    time: f64,
}

impl FieldState {
    pub fn new(
        grid: SpectralGrid,
        values: Vec<Complex64>,
        repr: Representation,
        time: f64,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a grid of {} samples",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            values,
            repr,
            time,
        })
    }

    pub fn zeros(grid: &SpectralGrid, repr: Representation) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            grid: grid.clone(),
            repr,
            time: 0.0,
        }
    }

    /// Samples `f(x, y)` at the grid points.
    pub fn from_fn(grid: &SpectralGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let values = (0..grid.len())
            .map(|idx| {
                let (x, y) = grid.point(idx);
                f(x, y)
            })
            .collect();
        Self {
            grid: grid.clone(),
            values,
            repr: Representation::Physical,
            time: 0.0,
        }
    }

    /// Builds spectral data from a per-mode function of `(xi, mu)`.
    pub fn from_spectrum(grid: &SpectralGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let values = (0..grid.len())
            .map(|idx| {
                let (xi, mu) = grid.wavevector(idx);
                f(xi, mu)
            })
            .collect();
        Self {
            grid: grid.clone(),
            values,
            repr: Representation::Spectral,
            time: 0.0,
        }
    }

    /// A single lattice mode `exp(i (xi_j x + mu_k y))` in physical space.
    pub fn plane_wave(grid: &SpectralGrid, j: i64, k: i64, amplitude: Complex64) -> Self {
        let (sx, sy) = grid.spacing();
        let (xi, mu) = (sx * j as f64, sy * k as f64);
        Self::from_fn(grid, |x, y| amplitude * Complex64::from_polar(1.0, xi * x + mu * y))
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn is_spectral(&self) -> bool {
        self.repr == Representation::Spectral
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.time = t;
        self
    }

    pub fn into_spectral(mut self) -> Self {
        if self.repr == Representation::Physical {
            self.grid.fft(&mut self.values, true);
            self.repr = Representation::Spectral;
        }
        self
    }

    pub fn into_physical(mut self) -> Self {
        if self.repr == Representation::Spectral {
            self.grid.fft(&mut self.values, false);
            self.repr = Representation::Physical;
        }
        self
    }

    pub fn to_spectral(&self) -> Self {
        self.clone().into_spectral()
    }

    pub fn to_physical(&self) -> Self {
        self.clone().into_physical()
    }

    pub fn into_representation(self, repr: Representation) -> Self {
        match repr {
            Representation::Physical => self.into_physical(),
            Representation::Spectral => self.into_spectral(),
        }
    }

    /// Zeros the Nyquist row and column; keeps the current representation.
    pub fn without_nyquist(self) -> Self {
        let repr = self.repr;
        let mut s = self.into_spectral();
        for idx in 0..s.grid.len() {
            if s.grid.is_nyquist(idx) {
                s.values[idx] = Complex64::new(0.0, 0.0);
            }
        }
        s.into_representation(repr)
    }

    /// Multiplies every spectral coefficient by `m(xi, mu)`.
    pub fn apply_multiplier(&self, m: impl Fn(f64, f64) -> Complex64) -> Self {
        let repr = self.repr;
        let mut s = self.to_spectral();
        for (idx, v) in s.values.iter_mut().enumerate() {
            let (xi, mu) = s.grid.wavevector(idx);
            *v *= m(xi, mu);
        }
        s.into_representation(repr)
    }

    pub fn scale(mut self, a: Complex64) -> Self {
        for v in &mut self.values {
            *v *= a;
        }
        self
    }

    pub fn conj(mut self) -> Self {
        for v in &mut self.values {
            *v = v.conj();
        }
        self
    }

    /// Sum of `|values|^2`, identical in both representations.
    pub fn norm_sqr_sum(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.grid.cell() * self.norm_sqr_sum()).sqrt()
    }

    /// `self - other` in the representation of `self`.
    pub fn sub(&self, other: &FieldState) -> Result<FieldState> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let other = other.clone().into_representation(self.repr);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            grid: self.grid.clone(),
            values,
            repr: self.repr,
            time: self.time,
        })
    }

    /// `||self - other||_{L^2}`.
    pub fn l2_distance(&self, other: &FieldState) -> Result<f64> {
        Ok(self.sub(other)?.l2_norm())
    }
}

/// Unitary DFT between representations. The input must be in the
/// representation opposite to the requested direction.
pub fn spectral_transform(f: &FieldState, direction: Direction) -> Result<FieldState> {
    let expected = match direction {
        Direction::ToSpectral => Representation::Physical,
        Direction::ToPhysical => Representation::Spectral,
    };
    if f.repr != expected {
        return Err(Error::Representation {
            expected: expected.name(),
            actual: f.repr.name(),
        });
    }
    Ok(match direction {
        Direction::ToSpectral => f.to_spectral(),
        Direction::ToPhysical => f.to_physical(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn box2pi(n: usize) -> SpectralGrid {
        SpectralGrid::new(n, n, 2.0 * PI, 2.0 * PI).unwrap()
    }

    #[test]
    fn constant_field_lives_on_zero_mode() {
        let g = box2pi(16);
        let a = Complex64::new(0.3, -1.2);
        let s = FieldState::from_fn(&g, |_, _| a).into_spectral();
        for (idx, v) in s.values().iter().enumerate() {
            if g.mode(idx) == (0, 0) {
                assert!((v.norm() - a.norm() * 16.0).abs() < 1e-12);
            } else {
                assert!(v.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn pure_mode_lands_on_its_slot() {
        let g = box2pi(16);
        let s = FieldState::from_fn(&g, |x, _| Complex64::from_polar(1.0, x)).into_spectral();
        for (idx, v) in s.values().iter().enumerate() {
            if g.mode(idx) == (1, 0) {
                assert!(v.norm() > 1.0);
            } else {
                assert!(v.norm() < 1e-12, "mode {:?} = {}", g.mode(idx), v);
            }
        }
    }

    #[test]
    fn random_roundtrip_and_parseval() {
        let g = SpectralGrid::new(32, 16, 5.0, 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let vals: Vec<Complex64> = (0..g.len())
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let f = FieldState::new(g, vals, Representation::Physical, 0.0).unwrap();
        let s = spectral_transform(&f, Direction::ToSpectral).unwrap();
        assert!(((s.l2_norm() - f.l2_norm()) / f.l2_norm()).abs() < 1e-12);
        let back = spectral_transform(&s, Direction::ToPhysical).unwrap();
        assert!(back.l2_distance(&f).unwrap() / f.l2_norm() < 1e-12);
    }

    #[test]
    fn transform_rejects_wrong_representation() {
        let g = box2pi(8);
        let f = FieldState::zeros(&g, Representation::Spectral);
        assert!(matches!(
            spectral_transform(&f, Direction::ToSpectral),
            Err(Error::Representation { .. })
        ));
    }

    #[test]
    fn nyquist_removal_only_touches_nyquist_slots() {
        let g = box2pi(8);
        let f = FieldState::from_spectrum(&g, |_, _| Complex64::new(1.0, 0.0));
        let h = f.clone().without_nyquist();
        for idx in 0..g.len() {
            let expect = if g.is_nyquist(idx) { 0.0 } else { 1.0 };
            assert!((h.values()[idx].re - expect).abs() < 1e-14);
        }
    }
}
