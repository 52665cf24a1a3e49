//! Measured constants of the linear, band-limited and bilinear space-time
//! estimates for the free group, and the pullback diagnostic for scattering.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolve::{linear_propagate, Trajectory};
use crate::models::ModelSpec;
use crate::spectral::{
    check_dyadic, edge_mass_fraction, lq_of_samples, time_lp, CarrierField, FieldState, SpectralGrid,
};

/// Uniform samples `t_n = -T + n dt` of the symmetric window `[-T, T]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeWindow {
    pub half_width: f64,
    pub samples: usize,
}

impl TimeWindow {
    pub fn new(half_width: f64, samples: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidParameter(format!("window half width {half_width}")));
        }
        if samples < 3 {
            return Err(Error::InvalidParameter(format!("{samples} time samples, need at least 3")));
        }
        Ok(Self { half_width, samples })
    }

    pub fn dt(&self) -> f64 {
        2.0 * self.half_width / (self.samples - 1) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let dt = self.dt();
        (0..self.samples).map(|n| -self.half_width + n as f64 * dt).collect()
    }

    /// Same sample count, half width scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.half_width * factor, self.samples)
    }
}

/// Spatial `L^q` norms of the free evolution of `phi` at each window sample.
fn evolved_slice_norms(phi: &CarrierField, window: &TimeWindow, q: f64) -> Vec<f64> {
    let cell = phi.envelope.grid().cell();
    window
        .times()
        .par_iter()
        .map(|&t| {
            let e = phi.free_evolve(t).envelope.into_physical();
            lq_of_samples(e.values(), cell, q)
        })
        .collect()
}

fn warn_if_wrapped(phi: &CarrierField, window: &TimeWindow) {
    let end = phi.free_evolve(window.half_width).envelope;
    let edge = edge_mass_fraction(&end);
    if edge > 1e-6 {
        log::warn!(
            "edge mass {edge:.2e} at the window end; the periodic box no longer models free dispersion"
        );
    }
}

fn nonzero_norm(phi: &CarrierField, what: &str) -> Result<f64> {
    let n = phi.l2_norm();
    if n > 0.0 && n.is_finite() {
        Ok(n)
    } else {
        Err(Error::Degenerate(format!("{what} has zero L2 norm")))
    }
}

/// Projects onto shell `n` and rejects data whose shell part is negligible.
fn shell_part(phi: &CarrierField, n: u64, what: &str) -> Result<(CarrierField, f64)> {
    let total = nonzero_norm(phi, what)?;
    let p = phi.lp_project(n)?;
    let norm = p.l2_norm();
    if norm <= 1e-12 * total {
        return Err(Error::Degenerate(format!("{what} has no mass on the frequency shell {n}")));
    }
    Ok((p, norm))
}

/// `||D^{1/4} S(t) phi||_{L^4_{t,x,y}} / ||phi||_{L^2}` over the window.
pub fn strichartz_ratio(phi: &CarrierField, window: &TimeWindow) -> Result<f64> {
    let norm = nonzero_norm(phi, "data")?;
    warn_if_wrapped(phi, window);
    let weighted = phi.apply_multiplier(|xi, mu| Complex64::new(xi.hypot(mu).powf(0.25), 0.0));
    let inner = evolved_slice_norms(&weighted, window, 4.0);
    Ok(time_lp(&inner, window.dt(), 4.0) / norm)
}

/// `||P_N S(t) phi||_{L^4_{t,x,y}} N^{1/4} / ||P_N phi||_{L^2}`.
pub fn l4_band_ratio(phi: &CarrierField, n: u64, window: &TimeWindow) -> Result<f64> {
    check_dyadic(n)?;
    if n < 2 {
        return Err(Error::InvalidParameter("band estimate needs N >= 2".into()));
    }
    let (p, norm) = shell_part(phi, n, "data")?;
    warn_if_wrapped(&p, window);
    let inner = evolved_slice_norms(&p, window, 4.0);
    Ok(time_lp(&inner, window.dt(), 4.0) * (n as f64).powf(0.25) / norm)
}

/// Product norm and implied constant of one bilinear measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BilinearMeasurement {
    /// `||(P_{N1} S phi1)(P_{N2} S phi2)||_{L^2_{t,x,y}}`.
    pub product: f64,
    pub shell_norms: (f64, f64),
    /// `product * N1 * N2^{-1/2} / (||P_{N1} phi1|| ||P_{N2} phi2||)`.
    pub constant: f64,
}

pub fn bilinear_measure(
    phi1: &CarrierField,
    n1: u64,
    phi2: &CarrierField,
    n2: u64,
    window: &TimeWindow,
) -> Result<BilinearMeasurement> {
    check_dyadic(n1)?;
    check_dyadic(n2)?;
    if n1 < 4 * n2 {
        return Err(Error::InvalidParameter(format!(
            "bilinear estimate needs N1 >= 4 N2, got N1 = {n1}, N2 = {n2}"
        )));
    }
    if phi1.envelope.grid() != phi2.envelope.grid() {
        return Err(Error::GridMismatch);
    }
    let (p1, a) = shell_part(phi1, n1, "high-frequency data")?;
    let (p2, b) = shell_part(phi2, n2, "low-frequency data")?;
    warn_if_wrapped(&p1, window);
    let cell = p1.envelope.grid().cell();
    let inner: Vec<f64> = window
        .times()
        .par_iter()
        .map(|&t| {
            let e1 = p1.free_evolve(t).envelope.into_physical();
            let e2 = p2.free_evolve(t).envelope.into_physical();
            let s: f64 = e1
                .values()
                .iter()
                .zip(e2.values())
                .map(|(u, v)| u.norm_sqr() * v.norm_sqr())
                .sum();
            (cell * s).sqrt()
        })
        .collect();
    let product = time_lp(&inner, window.dt(), 2.0);
    Ok(BilinearMeasurement {
        product,
        shell_norms: (a, b),
        constant: product * n1 as f64 / (n2 as f64).sqrt() / (a * b),
    })
}

/// Implied constant of the bilinear estimate for `N1 >= 4 N2`.
pub fn bilinear_ratio(
    phi1: &CarrierField,
    n1: u64,
    phi2: &CarrierField,
    n2: u64,
    window: &TimeWindow,
) -> Result<f64> {
    Ok(bilinear_measure(phi1, n1, phi2, n2, window)?.constant)
}

/// Gaussian packet with a random lattice carrier of radius in
/// `[0.85 N, 1.15 N]`, random direction, width `width * U[0.8, 1.25]`,
/// random centre offset and random phase.
pub fn random_shell_packet(grid: &SpectralGrid, n: u64, width: f64, rng: &mut impl Rng) -> CarrierField {
    let (sx, sy) = grid.spacing();
    let r = n as f64 * rng.random_range(0.85..1.15);
    let theta = rng.random_range(0.0..2.0 * PI);
    let carrier = [(r * theta.cos() / sx).round() as i64, (r * theta.sin() / sy).round() as i64];
    let sigma = width * rng.random_range(0.8..1.25);
    let x0 = rng.random_range(-0.5..0.5) * width;
    let y0 = rng.random_range(-0.5..0.5) * width;
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
    let envelope = FieldState::from_fn(grid, |x, y| {
        let d2 = (x - x0).powi(2) + (y - y0).powi(2);
        phase * (-d2 / (2.0 * sigma * sigma)).exp()
    });
    CarrierField::new(envelope, carrier)
}

/// Window that lets the high-frequency packet of width `width` travel
/// six widths past the low one on either side.
pub fn bilinear_window(n1: u64, width: f64, samples: usize) -> Result<TimeWindow> {
    let speed = 3.0 * (n1 as f64).powi(2);
    TimeWindow::new(6.0 * width / speed, samples)
}

/// Monte-Carlo draws of the bilinear constant for one `(N1, N2)` pair.
#[derive(Clone, Debug)]
pub struct BilinearSample {
    pub n1: u64,
    pub n2: u64,
    pub constants: Vec<f64>,
    pub products: Vec<f64>,
}

impl BilinearSample {
    pub fn mean_constant(&self) -> f64 {
        self.constants.iter().sum::<f64>() / self.constants.len() as f64
    }

    pub fn mean_product(&self) -> f64 {
        self.products.iter().sum::<f64>() / self.products.len() as f64
    }

    /// Largest over smallest constant among the draws.
    pub fn spread(&self) -> f64 {
        let max = self.constants.iter().copied().fold(0.0, f64::max);
        let min = self.constants.iter().copied().fold(f64::INFINITY, f64::min);
        max / min
    }
}

/// Draw `k` uses the ChaCha stream `k` of `seed`, so results do not depend
/// on scheduling.
pub fn bilinear_monte_carlo(
    grid: &SpectralGrid,
    n1: u64,
    n2: u64,
    width: f64,
    draws: usize,
    seed: u64,
    samples: usize,
) -> Result<BilinearSample> {
    let window = bilinear_window(n1, width, samples)?;
    let results: Vec<BilinearMeasurement> = (0..draws)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let high = random_shell_packet(grid, n1, width, &mut rng);
            let low = random_shell_packet(grid, n2, width, &mut rng);
            bilinear_measure(&high, n1, &low, n2, &window)
        })
        .collect::<Result<_>>()?;
    Ok(BilinearSample {
        n1,
        n2,
        constants: results.iter().map(|m| m.constant).collect(),
        products: results.iter().map(|m| m.product).collect(),
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::InvalidParameter("slope fit needs two or more positive points".into()));
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("slope fit needs distinct abscissae".into()));
    }
    Ok(sxy / sxx)
}

/// Frequency orderings of the quadrilinear interaction `N1 <= N2 <= N3`,
/// `N4` free, in which the two largest shells are comparable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InteractionCase {
    /// `N1 <= N2 << N3 ~ N4`.
    LowLowHighHigh,
    /// `N1, N4 << N2 ~ N3`.
    LowHighHighLow,
    /// `N1 << N2 ~ N3 ~ N4`.
    LowHighHighHigh,
    /// `N4 << N1 ~ N2 ~ N3`.
    HighHighHighLow,
    /// `1 << N1 ~ N2 ~ N3 ~ N4`.
    AllHigh,
    /// `N1 ~ N2 ~ N3 ~ N4 <~ 1`.
    AllLow,
}

/// Shells closer than a factor 4 count as comparable.
fn comparable(a: u64, b: u64) -> bool {
    a.max(b) < 4 * a.min(b)
}

fn much_less(a: u64, b: u64) -> bool {
    4 * a <= b
}

impl InteractionCase {
    /// `None` when the ordering `N1 <= N2 <= N3` fails or the two largest
    /// shells are not comparable (such quadruples cannot sum to zero).
    pub fn classify(n: [u64; 4]) -> Option<Self> {
        let [a, b, c, d] = n;
        if !(a <= b && b <= c) || n.contains(&0) {
            return None;
        }
        let max = a.max(d).max(c);
        let min = a.min(d);
        if comparable(min, max) {
            return Some(if max <= 2 { Self::AllLow } else { Self::AllHigh });
        }
        if much_less(b, c) && comparable(c, d) {
            return Some(Self::LowLowHighHigh);
        }
        if comparable(b, c) && much_less(a, b) {
            if much_less(d, b) {
                return Some(Self::LowHighHighLow);
            }
            if comparable(c, d) {
                return Some(Self::LowHighHighHigh);
            }
        }
        if comparable(a, c) && much_less(d, a) {
            return Some(Self::HighHighHighLow);
        }
        None
    }
}

/// Successive pullback differences of a trajectory sampled at dyadic times.
#[derive(Clone, Debug)]
pub struct ScatteringProfile {
    /// `(t_k, ||S(-t_k) u(t_k) - S(-t_{k-1}) u(t_{k-1})||)`.
    pub differences: Vec<(f64, f64)>,
    /// `S(-t_last) u(t_last)`, the candidate asymptotic state.
    pub pullback: FieldState,
}

impl ScatteringProfile {
    /// Consecutive ratios of the differences.
    pub fn ratios(&self) -> Vec<f64> {
        self.differences.windows(2).map(|w| w[1].1 / w[0].1).collect()
    }
}

/// Uses the snapshots at positive times, which must double from one to the next.
pub fn scattering_profile(traj: &Trajectory, spec: &ModelSpec) -> Result<ScatteringProfile> {
    let snaps: Vec<&FieldState> = traj.snapshots.iter().filter(|s| s.time() > 0.0).collect();
    if snaps.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "scattering profile needs at least 3 snapshots at positive times, got {}",
            snaps.len()
        )));
    }
    for w in snaps.windows(2) {
        let ratio = w[1].time() / w[0].time();
        if (ratio - 2.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "snapshot times {} and {} are not dyadic neighbours",
                w[0].time(),
                w[1].time()
            )));
        }
    }
    let pulled: Vec<FieldState> = snaps
        .par_iter()
        .map(|s| linear_propagate(s, spec, -s.time()))
        .collect::<Result<_>>()?;
    let mut differences = Vec::with_capacity(pulled.len() - 1);
    for (k, w) in pulled.windows(2).enumerate() {
        differences.push((snaps[k + 1].time(), w[1].l2_distance(&w[0])?));
    }
    let pullback = pulled.into_iter().last().expect("at least three snapshots");
    Ok(ScatteringProfile { differences, pullback })
}
