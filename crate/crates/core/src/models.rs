//! Equations of the family `du/dt + sum a_mn dx^m dy^n u = sum_j c_j N_j(u)`.
//!
//! The cubic terms are
//!
//! * `N1 = |u|^2 u`
//! * `N2 = |u|^2 dx u`
//! * `N3 = u^2 dx conj(u)`
//! * `N4 = u * dx T(|u|^2)` where `T` is the Riesz transform in `x`, or the
//!   negated finite-depth operator for the depth-dependent models.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{dealias_in_place, FieldState, Representation, SpectralGrid};
use crate::symbols::{
    check_depth, coth, kappa_coefficients, kappa_infinity_limits, x_coth, DispersionParams,
    KappaCoefficients,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn im(v: f64) -> Complex64 {
    Complex64::new(0.0, v)
}

/// Equation selector with its physical parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelKind {
    /// `du/dt + dx(dx^2 - 3 dy^2) u = sum c_j N_j`.
    NormalizedDysthe,
    /// General third-order dispersion `omega` with coefficients `(alpha1, alpha2, alpha3)`.
    Generalized(DispersionParams),
    /// Infinite-depth Dysthe equation in dimensionless form.
    FullDysthe,
    /// Finite-depth equation with depth `h`.
    FiniteDepth { h: f64 },
    /// Gravity-capillary equation with surface tension parameter `kappa`.
    GravityCapillary { kappa: f64 },
    /// Pure capillary limit of the gravity-capillary equation.
    KappaInfinity,
    /// One-dimensional finite-depth equation in the frame moving with the
    /// group velocity.
    Dysthe1D { h: f64 },
    /// Broad-bandwidth extension with fourth- and fifth-order dispersion;
    /// `h = None` is infinite depth.
    TrulsenDysthe { h: Option<f64> },
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::NormalizedDysthe => "normalized",
            ModelKind::Generalized(_) => "generalized",
            ModelKind::FullDysthe => "full",
            ModelKind::FiniteDepth { .. } => "finite_depth",
            ModelKind::GravityCapillary { .. } => "gravity_capillary",
            ModelKind::KappaInfinity => "kappa_infinity",
            ModelKind::Dysthe1D { .. } => "dysthe_1d",
            ModelKind::TrulsenDysthe { .. } => "trulsen_dysthe",
        }
    }
}

/// Operator inside the fourth cubic term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Nonlocal {
    RieszX,
    /// Negated finite-depth operator with depth `h`.
    CothDepth(f64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dealiasing {
    /// Zero modes with `|j| > nx/3` or `|k| > ny/3` after each product.
    #[default]
    TwoThirds,
    /// Evaluate products on a grid with twice the modes in each direction.
    Padded,
    /// Plain pseudospectral products.
    Off,
}

/// Coefficient of `dx^mx dy^my` on the left-hand side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearTerm {
    pub mx: u32,
    pub my: u32,
    pub coeff: Complex64,
}

impl LinearTerm {
    fn new(mx: u32, my: u32, coeff: Complex64) -> Self {
        Self { mx, my, coeff }
    }
}

/// Options shared by all kinds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Overrides the kind's cubic coefficients.
    pub c: Option<[Complex64; 4]>,
    pub dealiasing: Dealiasing,
    /// Carrier frequency for the depth-dependent models.
    pub omega: f64,
    /// Carrier wavenumber for the depth-dependent models.
    pub k0: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            c: None,
            dealiasing: Dealiasing::TwoThirds,
            omega: 1.0,
            k0: 1.0,
        }
    }
}

impl ModelParams {
    pub fn with_c(c: [Complex64; 4]) -> Self {
        Self {
            c: Some(c),
            ..Self::default()
        }
    }
}

/// Assembled equation on a fixed grid.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    kind: ModelKind,
    params: ModelParams,
    grid: SpectralGrid,
    terms: Vec<LinearTerm>,
    c: [Complex64; 4],
    nonlocal: Nonlocal,
    /// Per-slot evolution rate `Lambda` with `du/dt = Lambda u` for the linear part.
    linear: Arc<Vec<Complex64>>,
    /// Per-slot real multiplier of `dx T`.
    mean_flow: Arc<Vec<f64>>,
    padded: Option<Arc<PaddedGrid>>,
}

#[derive(Debug)]
struct PaddedGrid {
    fine: SpectralGrid,
    /// Fine-grid slot for each coarse slot.
    slots: Vec<usize>,
    mean_flow: Vec<f64>,
}

/// Infinite-depth Dysthe coefficients of the cubic terms.
pub const DYSTHE_COEFFICIENTS: [Complex64; 4] = [
    Complex64::new(0.0, -2.0),
    Complex64::new(-6.0, 0.0),
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 2.0),
];

fn gravity_capillary_terms(k: &KappaCoefficients) -> (Vec<LinearTerm>, [Complex64; 4]) {
    let cg = 0.5 * k.cg_factor;
    let terms = vec![
        LinearTerm::new(1, 0, re(cg)),
        LinearTerm::new(2, 0, im(-0.5 * k.p)),
        LinearTerm::new(0, 2, im(-0.5 * k.q)),
        LinearTerm::new(3, 0, re(0.5 * k.r)),
        LinearTerm::new(1, 2, re(0.5 * k.s)),
    ];
    let c = [im(-0.5 * k.gamma), re(0.5 * k.v), re(-0.5 * k.u), im(-0.5)];
    (terms, c)
}

fn full_dysthe_terms() -> Vec<LinearTerm> {
    vec![
        LinearTerm::new(1, 0, re(0.5)),
        LinearTerm::new(2, 0, im(0.125)),
        LinearTerm::new(0, 2, im(-0.25)),
        LinearTerm::new(3, 0, re(-1.0 / 16.0)),
        LinearTerm::new(1, 2, re(3.0 / 8.0)),
    ]
}

/// Linear terms of the finite-depth equations for carrier `(omega, k0)`.
fn finite_depth_terms(omega: f64, k0: f64, transport: bool, dims: usize) -> Vec<LinearTerm> {
    let mut t = Vec::new();
    if transport {
        t.push(LinearTerm::new(1, 0, re(omega / (2.0 * k0))));
    }
    t.push(LinearTerm::new(2, 0, im(omega / (8.0 * k0 * k0))));
    if dims == 2 {
        t.push(LinearTerm::new(0, 2, im(-omega / (4.0 * k0 * k0))));
    }
    t.push(LinearTerm::new(3, 0, re(-omega / (16.0 * k0.powi(3)))));
    if dims == 2 {
        t.push(LinearTerm::new(1, 2, re(3.0 * omega / (8.0 * k0.powi(3)))));
    }
    t
}

fn finite_depth_coefficients(omega: f64, k0: f64) -> [Complex64; 4] {
    [
        im(-0.5 * omega * k0 * k0),
        re(-1.5 * omega * k0),
        re(0.25 * omega * k0),
        im(0.5 * omega * k0),
    ]
}

/// `(i xi)^mx (i mu)^my`.
fn derivative_symbol(mx: u32, my: u32, xi: f64, mu: f64) -> Complex64 {
    let p = I.powu(mx + my);
    p * xi.powi(mx as i32) * mu.powi(my as i32)
}

/// Evolution rate of the linear part at `(xi, mu)`.
pub fn evolution_rate(terms: &[LinearTerm], xi: f64, mu: f64) -> Complex64 {
    -terms
        .iter()
        .map(|t| t.coeff * derivative_symbol(t.mx, t.my, xi, mu))
        .sum::<Complex64>()
}

/// Real multiplier of `dx T` at `(xi, mu)` for the given grid dimension.
pub fn mean_flow_multiplier(nonlocal: Nonlocal, dims: usize, xi: f64, mu: f64) -> f64 {
    match (nonlocal, dims) {
        (Nonlocal::RieszX, 1) => xi.abs(),
        (Nonlocal::RieszX, _) => {
            let r = xi.hypot(mu);
            if r == 0.0 {
                0.0
            } else {
                xi * xi / r
            }
        }
        (Nonlocal::CothDepth(h), 1) => x_coth(h * xi) / h,
        (Nonlocal::CothDepth(h), _) => {
            let r = xi.hypot(mu);
            if r == 0.0 {
                0.0
            } else {
                xi * xi * coth(h * r) / r
            }
        }
    }
}

fn check_finite_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

impl ModelSpec {
    pub fn assemble(kind: ModelKind, grid: &SpectralGrid, params: ModelParams) -> Result<Self> {
        let dims = grid.dims();
        let (terms, c, nonlocal) = match kind {
            ModelKind::NormalizedDysthe => (
                vec![LinearTerm::new(3, 0, re(1.0)), LinearTerm::new(1, 2, re(-3.0))],
                DYSTHE_COEFFICIENTS,
                Nonlocal::RieszX,
            ),
            ModelKind::Generalized(d) => {
                let d = DispersionParams::new(d.alpha1, d.alpha2, d.alpha3)?;
                (
                    vec![
                        LinearTerm::new(3, 0, re(d.alpha1)),
                        LinearTerm::new(1, 2, re(-3.0 * d.alpha1)),
                        LinearTerm::new(2, 0, im(d.alpha2)),
                        LinearTerm::new(0, 2, im(-d.alpha2)),
                        LinearTerm::new(1, 0, re(d.alpha3)),
                    ],
                    DYSTHE_COEFFICIENTS,
                    Nonlocal::RieszX,
                )
            }
            ModelKind::FullDysthe => (full_dysthe_terms(), DYSTHE_COEFFICIENTS, Nonlocal::RieszX),
            ModelKind::GravityCapillary { kappa } => {
                let (t, c) = gravity_capillary_terms(&kappa_coefficients(kappa)?);
                (t, c, Nonlocal::RieszX)
            }
            ModelKind::KappaInfinity => {
                let (t, c) = gravity_capillary_terms(&kappa_infinity_limits());
                (t, c, Nonlocal::RieszX)
            }
            ModelKind::FiniteDepth { h } => {
                check_depth(h)?;
                check_finite_positive("omega", params.omega)?;
                check_finite_positive("k0", params.k0)?;
                (
                    finite_depth_terms(params.omega, params.k0, true, dims),
                    finite_depth_coefficients(params.omega, params.k0),
                    Nonlocal::CothDepth(h),
                )
            }
            ModelKind::Dysthe1D { h } => {
                check_depth(h)?;
                check_finite_positive("omega", params.omega)?;
                check_finite_positive("k0", params.k0)?;
                if !grid.is_1d() {
                    return Err(Error::InvalidGrid(
                        "the one-dimensional model needs a line grid".into(),
                    ));
                }
                (
                    finite_depth_terms(params.omega, params.k0, false, 1),
                    finite_depth_coefficients(params.omega, params.k0),
                    Nonlocal::CothDepth(h),
                )
            }
            ModelKind::TrulsenDysthe { h } => {
                let nonlocal = match h {
                    Some(h) => {
                        check_depth(h)?;
                        Nonlocal::CothDepth(h)
                    }
                    None => Nonlocal::RieszX,
                };
                let mut t = full_dysthe_terms();
                t.extend([
                    LinearTerm::new(4, 0, im(-5.0 / 128.0)),
                    LinearTerm::new(2, 2, im(15.0 / 32.0)),
                    LinearTerm::new(0, 4, im(-3.0 / 32.0)),
                    LinearTerm::new(5, 0, re(7.0 / 256.0)),
                    LinearTerm::new(3, 2, re(-35.0 / 64.0)),
                    LinearTerm::new(1, 4, re(21.0 / 64.0)),
                ]);
                (t, finite_depth_coefficients(1.0, 1.0), nonlocal)
            }
        };
        let c = params.c.unwrap_or(c);
        if c.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidParameter("nonlinear coefficients must be finite".into()));
        }
        let linear: Vec<Complex64> = (0..grid.len())
            .map(|idx| {
                let (xi, mu) = grid.wavevector(idx);
                let l = evolution_rate(&terms, xi, mu);
                // Every term is dispersive; drop roundoff in the real part.
                Complex64::new(0.0, l.im)
            })
            .collect();
        let mean_flow = (0..grid.len())
            .map(|idx| {
                let (xi, mu) = grid.wavevector(idx);
                mean_flow_multiplier(nonlocal, dims, xi, mu)
            })
            .collect();
        let padded = match params.dealiasing {
            Dealiasing::Padded => Some(Arc::new(PaddedGrid::new(grid, nonlocal)?)),
            _ => None,
        };
        Ok(Self {
            kind,
            params,
            grid: grid.clone(),
            terms,
            c,
            nonlocal,
            linear: Arc::new(linear),
            mean_flow: Arc::new(mean_flow),
            padded,
        })
    }

    /// The same equation on another grid.
    pub fn on_grid(&self, grid: &SpectralGrid) -> Result<Self> {
        let mut params = self.params;
        params.c = Some(self.c);
        Self::assemble(self.kind, grid, params)
    }

    /// The same linear part with other cubic coefficients.
    pub fn with_coefficients(&self, c: [Complex64; 4]) -> Self {
        let mut out = self.clone();
        out.c = c;
        out.params.c = Some(c);
        out
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn dims(&self) -> usize {
        self.grid.dims()
    }

    pub fn terms(&self) -> &[LinearTerm] {
        &self.terms
    }

    /// Coefficient of `dx^mx dy^my`, zero when absent.
    pub fn term(&self, mx: u32, my: u32) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.mx == mx && t.my == my)
            .map(|t| t.coeff)
            .sum()
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        self.c
    }

    pub fn nonlocal(&self) -> Nonlocal {
        self.nonlocal
    }

    pub fn dealiasing(&self) -> Dealiasing {
        self.params.dealiasing
    }

    /// Per-slot linear evolution rate (purely imaginary).
    pub fn linear_symbol(&self) -> &[Complex64] {
        &self.linear
    }

    /// Real dispersion `omega` with `exp(t Lambda) = exp(i t omega)`, at any frequency.
    pub fn dispersion(&self, xi: f64, mu: f64) -> f64 {
        evolution_rate(&self.terms, xi, mu).im
    }

    /// True when the coefficients make the flow conserve mass.
    pub fn conserves_mass(&self) -> bool {
        self.c[0].re == 0.0 && self.c[3].re == 0.0 && self.c[1].im == 0.0 && self.c[2].im == 0.0
    }

    fn check_grid(&self, u: &FieldState) -> Result<()> {
        if u.grid() != &self.grid {
            Err(Error::GridMismatch)
        } else {
            Ok(())
        }
    }

    /// Sum of `c_j N_j(u)` from spectral data into spectral output.
    pub(crate) fn rhs_spectral(&self, uhat: &[Complex64]) -> Vec<Complex64> {
        self.weighted_terms(uhat, &self.c)
    }

    fn weighted_terms(&self, uhat: &[Complex64], c: &[Complex64; 4]) -> Vec<Complex64> {
        match &self.padded {
            Some(p) => {
                let fine = p.fine.len();
                let scale = (fine as f64 / self.grid.len() as f64).sqrt();
                let mut up = vec![ZERO; fine];
                for (v, &slot) in uhat.iter().zip(&p.slots) {
                    up[slot] = v * scale;
                }
                let out = cubic_terms(&p.fine, &up, &p.mean_flow, c, false);
                p.slots.iter().map(|&slot| out[slot] / scale).collect()
            }
            None => {
                let dealias = self.params.dealiasing == Dealiasing::TwoThirds;
                cubic_terms(&self.grid, uhat, &self.mean_flow, c, dealias)
            }
        }
    }
}

impl PaddedGrid {
    fn new(grid: &SpectralGrid, nonlocal: Nonlocal) -> Result<Self> {
        let fine = if grid.is_1d() {
            SpectralGrid::line(2 * grid.nx(), grid.lx())?
        } else {
            SpectralGrid::new(2 * grid.nx(), 2 * grid.ny(), grid.lx(), grid.ly())?
        };
        let slot = |m: i64, n: usize| -> usize { m.rem_euclid(n as i64) as usize };
        let slots = (0..grid.len())
            .map(|idx| {
                let (j, k) = grid.mode(idx);
                slot(j, fine.nx()) * fine.ny() + slot(k, fine.ny())
            })
            .collect();
        let dims = grid.dims();
        let mean_flow = (0..fine.len())
            .map(|idx| {
                let (xi, mu) = fine.wavevector(idx);
                mean_flow_multiplier(nonlocal, dims, xi, mu)
            })
            .collect();
        Ok(Self {
            fine,
            slots,
            mean_flow,
        })
    }
}

/// Pseudospectral evaluation of `sum c_j N_j` on `grid`.
fn cubic_terms(
    grid: &SpectralGrid,
    uhat: &[Complex64],
    mean_flow: &[f64],
    c: &[Complex64; 4],
    dealias: bool,
) -> Vec<Complex64> {
    let n = grid.len();
    let mut u = uhat.to_vec();
    grid.fft(&mut u, false);

    let need_dx = c[1] != ZERO || c[2] != ZERO;
    let mut ux = Vec::new();
    if need_dx {
        ux = (0..n)
            .map(|idx| uhat[idx] * Complex64::new(0.0, grid.wavevector(idx).0))
            .collect();
        grid.fft(&mut ux, false);
    }

    let mut flow = Vec::new();
    if c[3] != ZERO {
        flow = u.iter().map(|v| re(v.norm_sqr())).collect();
        let mut tmp = FieldState::new(grid.clone(), flow, Representation::Physical, 0.0)
            .expect("length matches")
            .into_spectral();
        if dealias {
            dealias_in_place(&mut tmp);
        }
        for (v, m) in tmp.values_mut().iter_mut().zip(mean_flow) {
            *v *= m;
        }
        flow = tmp.into_physical().into_values();
    }

    let mut out: Vec<Complex64> = (0..n)
        .into_par_iter()
        .with_min_len(4096)
        .map(|idx| {
            let v = u[idx];
            let m = v.norm_sqr();
            let mut acc = c[0] * (m * v);
            if need_dx {
                let d = ux[idx];
                acc += c[1] * (m * d) + c[2] * (v * v * d.conj());
            }
            if c[3] != ZERO {
                acc += c[3] * (v * flow[idx].re);
            }
            acc
        })
        .collect();
    let mut state = FieldState::new(grid.clone(), std::mem::take(&mut out), Representation::Physical, 0.0)
        .expect("length matches")
        .into_spectral();
    if dealias {
        dealias_in_place(&mut state);
    }
    state.into_values()
}

/// `N_j(u)` for `j` in `1..=4`, returned in spectral representation.
pub fn evaluate_nonlinearity(j: usize, u: &FieldState, spec: &ModelSpec) -> Result<FieldState> {
    if !(1..=4).contains(&j) {
        return Err(Error::InvalidParameter(format!("nonlinear term index {j} not in 1..=4")));
    }
    spec.check_grid(u)?;
    let mut c = [ZERO; 4];
    c[j - 1] = re(1.0);
    let uhat = u.to_spectral();
    let values = spec.weighted_terms(uhat.values(), &c);
    FieldState::new(spec.grid.clone(), values, Representation::Spectral, u.time())
}

/// `sum_j c_j N_j(u)` in spectral representation.
pub fn nonlinear_rhs(u: &FieldState, spec: &ModelSpec) -> Result<FieldState> {
    spec.check_grid(u)?;
    let uhat = u.to_spectral();
    let values = spec.rhs_spectral(uhat.values());
    FieldState::new(spec.grid.clone(), values, Representation::Spectral, u.time())
}

/// Gaussian envelope `A exp(-x^2/(2 sx^2) - y^2/(2 sy^2)) exp(i (xi0 x + mu0 y))`
/// centred at `center`, with Nyquist modes removed.
pub fn gaussian(
    grid: &SpectralGrid,
    amplitude: Complex64,
    sigma: (f64, f64),
    carrier: (f64, f64),
    center: (f64, f64),
) -> FieldState {
    let (sx, sy) = sigma;
    FieldState::from_fn(grid, |x, y| {
        let (dx, dy) = (x - center.0, y - center.1);
        let gy = if grid.is_1d() { 1.0 } else { (-dy * dy / (2.0 * sy * sy)).exp() };
        amplitude
            * (-dx * dx / (2.0 * sx * sx)).exp()
            * gy
            * Complex64::from_polar(1.0, carrier.0 * x + carrier.1 * y)
    })
    .without_nyquist()
}

/// Rescales `u` to have the given `L^2` norm.
pub fn normalize_l2(u: FieldState, target: f64) -> FieldState {
    let n = u.l2_norm();
    if n == 0.0 {
        u
    } else {
        u.scale(re(target / n))
    }
}

/// Domain length with `m` periods of `2 pi / k`, used to place a frequency on the lattice.
pub fn box_for_frequency(k: f64, periods: u32) -> f64 {
    2.0 * PI * periods as f64 / k
}
