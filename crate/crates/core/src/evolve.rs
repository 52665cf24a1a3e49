//! Time integration of `du/dt = Lambda u + N(u)` with a diagonal, purely
//! dispersive `Lambda`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::spectral::{edge_mass_fraction, sobolev_norm, FieldState, Representation};

pub use crate::spectral::mass;

const CONTOUR_POINTS: usize = 32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    #[default]
    Etdrk4,
    Strang,
}

/// Exact linear flow `exp(t Lambda)`; keeps the input representation.
pub fn linear_propagate(u: &FieldState, spec: &ModelSpec, t: f64) -> Result<FieldState> {
    if u.grid() != spec.grid() {
        return Err(Error::GridMismatch);
    }
    let repr = u.representation();
    let mut s = u.to_spectral();
    for (v, l) in s.values_mut().iter_mut().zip(spec.linear_symbol()) {
        *v *= (l * t).exp();
    }
    s.set_time(u.time() + t);
    Ok(s.into_representation(repr))
}

fn check_dt(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTimeStep(dt))
    }
}

fn all_finite(v: &[Complex64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Per-mode coefficients of the fourth-order exponential Runge-Kutta scheme.
#[derive(Clone, Debug)]
pub struct Etdrk4 {
    dt: f64,
    e: Vec<Complex64>,
    e2: Vec<Complex64>,
    q: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    f3: Vec<Complex64>,
}

struct PhiValues {
    q: Complex64,
    f1: Complex64,
    f2: Complex64,
    f3: Complex64,
}

fn phi_direct(z: Complex64) -> PhiValues {
    let ez = z.exp();
    let z3 = z * z * z;
    PhiValues {
        q: ((z * 0.5).exp() - 1.0) / z,
        f1: (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3,
        f2: (2.0 + z + ez * (z - 2.0)) / z3,
        f3: (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3,
    }
}

/// Mean over a circle of radius 2 around `z`, which keeps every node at
/// least 1 away from the removable singularity at zero.
fn phi_contour(z: Complex64) -> PhiValues {
    let mut acc = PhiValues {
        q: Complex64::new(0.0, 0.0),
        f1: Complex64::new(0.0, 0.0),
        f2: Complex64::new(0.0, 0.0),
        f3: Complex64::new(0.0, 0.0),
    };
    for k in 0..CONTOUR_POINTS {
        let theta = std::f64::consts::PI * (k as f64 + 0.5) / CONTOUR_POINTS as f64 * 2.0;
        let p = phi_direct(z + Complex64::from_polar(2.0, theta));
        acc.q += p.q;
        acc.f1 += p.f1;
        acc.f2 += p.f2;
        acc.f3 += p.f3;
    }
    let m = CONTOUR_POINTS as f64;
    PhiValues {
        q: acc.q / m,
        f1: acc.f1 / m,
        f2: acc.f2 / m,
        f3: acc.f3 / m,
    }
}

fn phi(z: Complex64) -> PhiValues {
    if z.norm() < 1.0 {
        phi_contour(z)
    } else {
        phi_direct(z)
    }
}

impl Etdrk4 {
    pub fn new(spec: &ModelSpec, dt: f64) -> Result<Self> {
        check_dt(dt)?;
        let n = spec.linear_symbol().len();
        let mut s = Self {
            dt,
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        for l in spec.linear_symbol() {
            let z = l * dt;
            let p = phi(z);
            s.e.push(z.exp());
            s.e2.push((z * 0.5).exp());
            s.q.push(p.q * dt);
            s.f1.push(p.f1 * dt);
            s.f2.push(p.f2 * dt);
            s.f3.push(p.f3 * dt);
        }
        Ok(s)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// One step on spectral coefficients.
    pub fn step(&self, spec: &ModelSpec, v: &[Complex64]) -> Vec<Complex64> {
        let nv = spec.rhs_spectral(v);
        let a: Vec<Complex64> = (0..v.len()).map(|i| self.e2[i] * v[i] + self.q[i] * nv[i]).collect();
        let na = spec.rhs_spectral(&a);
        let b: Vec<Complex64> = (0..v.len()).map(|i| self.e2[i] * v[i] + self.q[i] * na[i]).collect();
        let nb = spec.rhs_spectral(&b);
        let c: Vec<Complex64> = (0..v.len())
            .map(|i| self.e2[i] * a[i] + self.q[i] * (2.0 * nb[i] - nv[i]))
            .collect();
        let nc = spec.rhs_spectral(&c);
        (0..v.len())
            .into_par_iter()
            .with_min_len(4096)
            .map(|i| {
                self.e[i] * v[i]
                    + self.f1[i] * nv[i]
                    + 2.0 * self.f2[i] * (na[i] + nb[i])
                    + self.f3[i] * nc[i]
            })
            .collect()
    }
}

/// Symmetric splitting: half linear step, classical RK4 on the cubic part,
/// half linear step.
#[derive(Clone, Debug)]
pub struct Strang {
    dt: f64,
    half: Vec<Complex64>,
}

impl Strang {
    pub fn new(spec: &ModelSpec, dt: f64) -> Result<Self> {
        check_dt(dt)?;
        let half = spec.linear_symbol().iter().map(|l| (l * (0.5 * dt)).exp()).collect();
        Ok(Self { dt, half })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&self, spec: &ModelSpec, v: &[Complex64]) -> Vec<Complex64> {
        let h = self.dt;
        let u: Vec<Complex64> = v.iter().zip(&self.half).map(|(a, e)| a * e).collect();
        let axpy = |x: &[Complex64], k: &[Complex64], s: f64| -> Vec<Complex64> {
            x.iter().zip(k).map(|(a, b)| a + b * s).collect()
        };
        let k1 = spec.rhs_spectral(&u);
        let k2 = spec.rhs_spectral(&axpy(&u, &k1, 0.5 * h));
        let k3 = spec.rhs_spectral(&axpy(&u, &k2, 0.5 * h));
        let k4 = spec.rhs_spectral(&axpy(&u, &k3, h));
        (0..u.len())
            .map(|i| (u[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0)) * self.half[i])
            .collect()
    }
}

#[derive(Clone, Debug)]
enum Stepper {
    Etdrk4(Etdrk4),
    Strang(Strang),
}

impl Stepper {
    fn new(integrator: Integrator, spec: &ModelSpec, dt: f64) -> Result<Self> {
        Ok(match integrator {
            Integrator::Etdrk4 => Stepper::Etdrk4(Etdrk4::new(spec, dt)?),
            Integrator::Strang => Stepper::Strang(Strang::new(spec, dt)?),
        })
    }

    fn dt(&self) -> f64 {
        match self {
            Stepper::Etdrk4(s) => s.dt(),
            Stepper::Strang(s) => s.dt(),
        }
    }

    fn step(&self, spec: &ModelSpec, v: &[Complex64]) -> Vec<Complex64> {
        match self {
            Stepper::Etdrk4(s) => s.step(spec, v),
            Stepper::Strang(s) => s.step(spec, v),
        }
    }
}

fn single_step(u: &FieldState, spec: &ModelSpec, dt: f64, integrator: Integrator) -> Result<FieldState> {
    if u.grid() != spec.grid() {
        return Err(Error::GridMismatch);
    }
    let stepper = Stepper::new(integrator, spec, dt)?;
    let repr = u.representation();
    let s = u.to_spectral();
    let next = stepper.step(spec, s.values());
    if !all_finite(&next) {
        return Err(Error::Instability {
            t: u.time() + dt,
            last_valid: Box::new(u.clone()),
        });
    }
    Ok(FieldState::new(u.grid().clone(), next, Representation::Spectral, u.time() + dt)?
        .into_representation(repr))
}

/// One exponential fourth-order step; keeps the input representation.
pub fn etdrk4_step(u: &FieldState, spec: &ModelSpec, dt: f64) -> Result<FieldState> {
    single_step(u, spec, dt, Integrator::Etdrk4)
}

/// One second-order splitting step; keeps the input representation.
pub fn strang_step(u: &FieldState, spec: &ModelSpec, dt: f64) -> Result<FieldState> {
    single_step(u, spec, dt, Integrator::Strang)
}

/// When to keep full states.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum SnapshotSchedule {
    /// Only the final state.
    #[default]
    Final,
    /// Every `k` steps (and the initial state).
    Every(usize),
    /// At the listed times; the step is shortened so each time is hit exactly.
    Times(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Controls {
    pub dt: f64,
    pub integrator: Integrator,
    pub snapshots: SnapshotSchedule,
    /// Diagnostics every `k` steps; `0` records only the endpoints.
    pub diagnostic_every: usize,
}

impl Controls {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            integrator: Integrator::Etdrk4,
            snapshots: SnapshotSchedule::Final,
            diagnostic_every: 0,
        }
    }

    pub fn integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn snapshots(mut self, s: SnapshotSchedule) -> Self {
        self.snapshots = s;
        self
    }

    pub fn diagnostics_every(mut self, k: usize) -> Self {
        self.diagnostic_every = k;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiagnosticRow {
    pub t: f64,
    pub mass: f64,
    pub h1_norm: f64,
    pub edge_mass: f64,
}

impl DiagnosticRow {
    pub fn of(u: &FieldState) -> Self {
        Self {
            t: u.time(),
            mass: mass(u),
            h1_norm: sobolev_norm(u, 1.0),
            edge_mass: edge_mass_fraction(u),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub snapshots: Vec<FieldState>,
    pub diagnostics: Vec<DiagnosticRow>,
    pub final_state: FieldState,
    pub steps: usize,
}

impl Trajectory {
    /// Largest relative deviation of the mass from its initial value.
    pub fn mass_drift(&self) -> f64 {
        let m0 = match self.diagnostics.first() {
            Some(d) => d.mass,
            None => return 0.0,
        };
        self.diagnostics
            .iter()
            .map(|d| (d.mass - m0).abs() / m0.max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }

    pub fn snapshot_times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time()).collect()
    }
}

/// Integrates from `u0.time()` to `u0.time() + t_final`.
pub fn evolve(u0: &FieldState, spec: &ModelSpec, t_final: f64, controls: &Controls) -> Result<Trajectory> {
    check_dt(controls.dt)?;
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter(format!("final time must be positive, got {t_final}")));
    }
    if u0.grid() != spec.grid() {
        return Err(Error::GridMismatch);
    }
    let t0 = u0.time();
    let mut targets: Vec<f64> = match &controls.snapshots {
        SnapshotSchedule::Times(ts) => {
            let mut ts: Vec<f64> = ts.iter().copied().filter(|&t| t > 0.0 && t < t_final).collect();
            ts.sort_by(f64::total_cmp);
            ts.dedup();
            ts
        }
        _ => Vec::new(),
    };
    targets.push(t_final);

    let mut steppers: Vec<Stepper> = Vec::new();
    let mut stepper_for = |dt: f64| -> Result<usize> {
        if let Some(i) = steppers.iter().position(|s| s.dt() == dt) {
            return Ok(i);
        }
        steppers.push(Stepper::new(controls.integrator, spec, dt)?);
        Ok(steppers.len() - 1)
    };
    // Collect the step plan first so the stepper cache is not borrowed across the loop.
    let mut plan: Vec<(usize, usize, f64)> = Vec::new();
    let mut elapsed = 0.0;
    for &target in &targets {
        let span = target - elapsed;
        let n = ((span / controls.dt) - 1e-9).ceil().max(1.0) as usize;
        let h = span / n as f64;
        plan.push((stepper_for(h)?, n, target));
        elapsed = target;
    }

    let mut snapshots = Vec::new();
    let mut diagnostics = vec![DiagnosticRow::of(u0)];
    let keep_initial = !matches!(controls.snapshots, SnapshotSchedule::Final);
    if keep_initial {
        snapshots.push(u0.clone());
    }
    let mut state = u0.to_spectral();
    let grid = u0.grid().clone();
    let mut steps = 0usize;
    let last_segment = plan.len() - 1;
    for (seg, &(si, n, target)) in plan.iter().enumerate() {
        let stepper = &steppers[si];
        for k in 0..n {
            let next = stepper.step(spec, state.values());
            let t = if k + 1 == n {
                t0 + target
            } else {
                state.time() + stepper.dt()
            };
            if !all_finite(&next) {
                return Err(Error::Instability {
                    t,
                    last_valid: Box::new(state.into_physical()),
                });
            }
            state = FieldState::new(grid.clone(), next, Representation::Spectral, t)?;
            steps += 1;
            let is_end = seg == last_segment && k + 1 == n;
            if controls.diagnostic_every > 0 && steps % controls.diagnostic_every == 0 && !is_end {
                diagnostics.push(DiagnosticRow::of(&state));
            }
            if let SnapshotSchedule::Every(every) = controls.snapshots {
                if every > 0 && steps % every == 0 && !is_end {
                    snapshots.push(state.to_physical());
                }
            }
        }
        if matches!(controls.snapshots, SnapshotSchedule::Times(_)) && seg != last_segment {
            snapshots.push(state.to_physical());
        }
    }
    diagnostics.push(DiagnosticRow::of(&state));
    let final_state = state.into_physical();
    snapshots.push(final_state.clone());
    Ok(Trajectory {
        snapshots,
        diagnostics,
        final_state,
        steps,
    })
}
