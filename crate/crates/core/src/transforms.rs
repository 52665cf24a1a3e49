//! Exact symmetries: the change of variables that normalizes the general
//! third-order dispersion, the scaling map and the time-reversal involution.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolve::{evolve, Controls, SnapshotSchedule};
use crate::models::{ModelKind, ModelParams, ModelSpec};
use crate::spectral::{FieldState, Representation, SpectralGrid};
use crate::symbols::DispersionParams;

/// Tolerance for snapping a frequency shift onto the lattice.
const LATTICE_SNAP: f64 = 1e-9;

/// Shift, modulation and phase of the normalizing change of variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

pub fn cov_coefficients(d: &DispersionParams) -> Result<CovCoefficients> {
    let DispersionParams {
        alpha1: p,
        alpha2: q,
        alpha3: r,
    } = *d;
    if p == 0.0 || !p.is_finite() {
        return Err(Error::ZeroAlpha1);
    }
    Ok(CovCoefficients {
        a1: q * q / (3.0 * p * p) + r / p,
        a2: q / (3.0 * p),
        a3: q * r / (3.0 * p * p) + 2.0 / 27.0 * q.powi(3) / p.powi(3),
    })
}

/// Lattice index of the modulation `a2` on the grid's `x` frequencies.
fn lattice_index(grid: &SpectralGrid, a2: f64) -> Result<i64> {
    let (sx, _) = grid.spacing();
    let m = (a2 / sx).round();
    if ((a2 / sx) - m).abs() > LATTICE_SNAP {
        return Err(Error::OffLattice(a2));
    }
    Ok(m as i64)
}

fn modulate(u: FieldState, m: i64, sign: f64) -> FieldState {
    let (sx, _) = u.grid().spacing();
    let k = sign * sx * m as f64;
    let mut p = u.into_physical();
    let g = p.grid().clone();
    for (idx, v) in p.values_mut().iter_mut().enumerate() {
        *v *= Complex64::from_polar(1.0, k * g.point(idx).0);
    }
    p
}

fn translate_x(u: &FieldState, shift: f64) -> FieldState {
    u.apply_multiplier(|xi, _| Complex64::from_polar(1.0, xi * shift))
}

/// Maps a state `v` of the general-dispersion equation at time `s` to the
/// state `u` of the normalized equation at time `alpha1 * s`:
/// `u(t, x, y) = exp(-i a3 t) exp(i a2 (x + a1 t)) v(t / alpha1, x + a1 t, y)`.
pub fn apply_cov(v: &FieldState, d: &DispersionParams) -> Result<FieldState> {
    let k = cov_coefficients(d)?;
    let m = lattice_index(v.grid(), k.a2)?;
    let t = d.alpha1 * v.time();
    let repr = v.representation();
    let modulated = modulate(v.clone(), m, 1.0);
    let shifted = translate_x(&modulated, k.a1 * t)
        .scale(Complex64::from_polar(1.0, -k.a3 * t))
        .with_time(t);
    Ok(shifted.into_representation(repr))
}

/// Inverse of [`apply_cov`].
pub fn apply_cov_inverse(u: &FieldState, d: &DispersionParams) -> Result<FieldState> {
    let k = cov_coefficients(d)?;
    let m = lattice_index(u.grid(), k.a2)?;
    let t = u.time();
    let repr = u.representation();
    let back = translate_x(u, -k.a1 * t).scale(Complex64::from_polar(1.0, k.a3 * t));
    let v = modulate(back, m, -1.0).with_time(t / d.alpha1);
    Ok(v.into_representation(repr))
}

/// Cubic coefficients after the modulation `exp(i a2 x)`, before the time
/// dilation.
pub fn remap_nonlinear_coeffs(c: [Complex64; 4], a2: f64) -> [Complex64; 4] {
    let i = Complex64::new(0.0, 1.0);
    [c[0] - i * a2 * c[1] + i * a2 * c[2], c[1], c[2], c[3]]
}

/// Cubic coefficients of the normalized equation solved by `apply_cov(v)`.
pub fn normalized_coefficients(c: [Complex64; 4], d: &DispersionParams) -> Result<[Complex64; 4]> {
    let k = cov_coefficients(d)?;
    Ok(remap_nonlinear_coeffs(c, k.a2).map(|v| v / d.alpha1))
}

/// `u_lambda(x) = lambda u(lambda x)` on the box shrunk by `lambda`; the time
/// label becomes `t / lambda^3`.
pub fn scale_field(u: &FieldState, lambda: f64) -> Result<FieldState> {
    let grid = u.grid().rescaled(lambda)?;
    let p = u.to_physical();
    let t = p.time() / lambda.powi(3);
    let values = p.into_values().into_iter().map(|v| v * lambda).collect();
    FieldState::new(grid, values, Representation::Physical, t)
}

/// Evolves `u0` to time `t` and `scale_field(u0, lambda)` to `t / lambda^3`
/// under the normalized model with coefficients `c`, and returns the `L^2`
/// distance between `scale_field(u(t), lambda)` and the second run.
/// The cubic term without derivative breaks the symmetry, so `c[0]` must vanish.
pub fn scaling_commutation_gap(
    u0: &FieldState,
    c: [Complex64; 4],
    params: ModelParams,
    lambda: f64,
    t: f64,
    controls: &Controls,
) -> Result<f64> {
    if c[0] != Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidParameter(
            "the scaling symmetry needs a vanishing cubic coefficient c1".into(),
        ));
    }
    let params = ModelParams { c: Some(c), ..params };
    let spec = ModelSpec::assemble(ModelKind::NormalizedDysthe, u0.grid(), params)?;
    let v0 = scale_field(u0, lambda)?;
    let scaled_spec = ModelSpec::assemble(ModelKind::NormalizedDysthe, v0.grid(), params)?;
    let l3 = lambda.powi(3);
    let scaled_controls = Controls {
        dt: controls.dt / l3,
        snapshots: SnapshotSchedule::Final,
        ..controls.clone()
    };
    let ut = evolve(u0, &spec, t, controls)?.final_state;
    let vt = evolve(&v0, &scaled_spec, t / l3, &scaled_controls)?.final_state;
    scale_field(&ut, lambda)?.l2_distance(&vt)
}

/// `conj u(-t, -x, -y)`.
pub fn time_reversal(u: &FieldState) -> FieldState {
    let p = u.to_physical();
    let g = p.grid().clone();
    let (nx, ny) = (g.nx(), g.ny());
    let src = p.values();
    let mut values = vec![Complex64::new(0.0, 0.0); src.len()];
    for i in 0..nx {
        let ri = (nx - i) % nx;
        for j in 0..ny {
            let rj = (ny - j) % ny;
            values[ri * ny + rj] = src[i * ny + j].conj();
        }
    }
    FieldState::new(g, values, Representation::Physical, -u.time()).expect("same grid")
}

/// Coefficients of the equation solved by the time-reversed solution.
pub fn time_reversed_coefficients(c: [Complex64; 4]) -> [Complex64; 4] {
    [-c[0].conj(), c[1].conj(), c[2].conj(), -c[3].conj()]
}

/// Evolves `v0` under the general equation and `apply_cov(v0)` under the
/// normalized one, and returns the largest `L^2` gap between `apply_cov(v(s))`
/// and `u(alpha1 s)` over the sample times (normalized-equation times).
pub fn cov_equivalence_gap(
    v0: &FieldState,
    d: &DispersionParams,
    c: [Complex64; 4],
    params: ModelParams,
    sample_times: &[f64],
    dt: f64,
) -> Result<f64> {
    let t_end = sample_times.iter().copied().fold(0.0, f64::max);
    if t_end <= 0.0 {
        return Err(Error::InvalidParameter("need a positive sample time".into()));
    }
    let grid = v0.grid();
    let general = ModelSpec::assemble(ModelKind::Generalized(*d), grid, ModelParams { c: Some(c), ..params })?;
    let normal = ModelSpec::assemble(
        ModelKind::NormalizedDysthe,
        grid,
        ModelParams {
            c: Some(normalized_coefficients(c, d)?),
            ..params
        },
    )?;
    let v0 = v0.clone().with_time(0.0);
    let u0 = apply_cov(&v0, d)?;
    let sched = |scale: f64| SnapshotSchedule::Times(sample_times.iter().map(|t| t * scale).collect());
    let a1 = d.alpha1.abs();
    if d.alpha1 < 0.0 {
        return Err(Error::InvalidParameter(
            "negative alpha1 maps forward time to backward time; use the time-reversed data".into(),
        ));
    }
    let vt = evolve(&v0, &general, t_end / a1, &Controls::new(dt / a1).snapshots(sched(1.0 / a1)))?;
    let ut = evolve(&u0, &normal, t_end, &Controls::new(dt).snapshots(sched(1.0)))?;
    let mut gap: f64 = 0.0;
    for (vs, us) in vt.snapshots.iter().zip(&ut.snapshots) {
        let mapped = apply_cov(vs, d)?;
        gap = gap.max(mapped.l2_distance(us)?);
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::linear_propagate;
    use crate::models::{gaussian, DYSTHE_COEFFICIENTS};
    use crate::spectral::sobolev_norm;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coefficient_values() {
        let k = cov_coefficients(&DispersionParams::normalized()).unwrap();
        assert_eq!((k.a1, k.a2, k.a3), (0.0, 0.0, 0.0));
        let k = cov_coefficients(&DispersionParams::new(1.0, 3.0, 0.0).unwrap()).unwrap();
        assert_eq!((k.a1, k.a2, k.a3), (3.0, 1.0, 2.0));
        let bad = DispersionParams {
            alpha1: 0.0,
            alpha2: 1.0,
            alpha3: 1.0,
        };
        assert!(matches!(cov_coefficients(&bad), Err(Error::ZeroAlpha1)));
    }

    #[test]
    fn remap_values() {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let base = [c(0.3, 1.0), c(2.0, 0.0), c(-1.0, 0.5), c(0.0, 4.0)];
        assert_eq!(remap_nonlinear_coeffs(base, 0.0), base);
        assert_eq!(remap_nonlinear_coeffs([z, one, z, z], 1.0), [c(0.0, -1.0), one, z, z]);
        assert_eq!(remap_nonlinear_coeffs([z, z, one, z], 1.0), [c(0.0, 1.0), z, one, z]);
    }

    fn test_state(grid: &SpectralGrid, t: f64) -> FieldState {
        gaussian(grid, c(0.7, 0.2), (1.0, 1.3), (0.5, -0.5), (0.4, 0.0)).with_time(t)
    }

    #[test]
    fn identity_and_pure_shift() {
        let g = SpectralGrid::new(64, 48, 16.0, 20.0).unwrap();
        let v = test_state(&g, 0.8);
        let u = apply_cov(&v, &DispersionParams::normalized()).unwrap();
        assert!(u.l2_distance(&v).unwrap() < 1e-13);
        assert_eq!(u.time(), 0.8);

        let d = DispersionParams::new(1.0, 0.0, 1.0).unwrap();
        let u = apply_cov(&v, &d).unwrap();
        let shifted = FieldState::from_fn(&g, |x, y| {
            gaussian_value(x + 0.8, y)
        });
        let e = u.l2_distance(&shifted).unwrap();
        assert!(e < 1e-10, "{e} {}", shifted.l2_norm());
    }

    fn gaussian_value(x: f64, y: f64) -> Complex64 {
        let dx = x - 0.4;
        c(0.7, 0.2)
            * (-dx * dx / 2.0 - y * y / (2.0 * 1.69)).exp()
            * Complex64::from_polar(1.0, 0.5 * x - 0.5 * y)
    }

    #[test]
    fn roundtrip_and_norm_invariance() {
        let g = SpectralGrid::new(128, 32, 12.0 * PI, 16.0).unwrap();
        let d = DispersionParams::new(2.0, 1.0, 1.0).unwrap();
        let v = test_state(&g, 0.35);
        let u = apply_cov(&v, &d).unwrap();
        assert!((u.time() - 0.7).abs() < 1e-15);
        let back = apply_cov_inverse(&u, &d).unwrap();
        assert!(back.l2_distance(&v).unwrap() < 1e-12 * v.l2_norm());
        assert!((back.time() - 0.35).abs() < 1e-15);
        assert!((u.l2_norm() - v.l2_norm()).abs() < 1e-12 * v.l2_norm());
    }

    #[test]
    fn sobolev_norms_of_modulated_data() {
        // The modulation shifts frequencies by a2, so H^s norms change unless a2 = 0;
        // the translation and phase alone keep every H^s norm.
        let g = SpectralGrid::new(64, 32, 16.0, 16.0).unwrap();
        let d = DispersionParams::new(1.0, 0.0, 2.5).unwrap();
        let v = test_state(&g, 0.6);
        let u = apply_cov(&v, &d).unwrap();
        for s in [0.5, 1.0, 2.0] {
            let (a, b) = (sobolev_norm(&u, s), sobolev_norm(&v, s));
            assert!((a - b).abs() < 1e-12 * b, "s = {s}");
        }
    }

    #[test]
    fn off_lattice_modulation_rejected() {
        let g = SpectralGrid::new(32, 32, 10.0, 10.0).unwrap();
        let d = DispersionParams::new(1.0, 3.0, 0.0).unwrap();
        assert!(matches!(apply_cov(&test_state(&g, 0.0), &d), Err(Error::OffLattice(_))));
    }

    #[test]
    fn linear_flows_are_conjugate() {
        let g = SpectralGrid::new(128, 32, 12.0 * PI, 16.0).unwrap();
        let d = DispersionParams::new(2.0, 1.0, 1.0).unwrap();
        let zero = [c(0.0, 0.0); 4];
        let general = ModelSpec::assemble(ModelKind::Generalized(d), &g, ModelParams::with_c(zero)).unwrap();
        let normal = ModelSpec::assemble(ModelKind::NormalizedDysthe, &g, ModelParams::with_c(zero)).unwrap();
        let v0 = test_state(&g, 0.0);
        let s = 0.3;
        let vs = linear_propagate(&v0, &general, s).unwrap();
        let us = linear_propagate(&apply_cov(&v0, &d).unwrap(), &normal, d.alpha1 * s).unwrap();
        let e = apply_cov(&vs, &d).unwrap().l2_distance(&us).unwrap();
        assert!(e < 1e-11, "{e}");
    }

    #[test]
    fn nonlinear_flows_are_conjugate() {
        for (d, lx) in [
            (DispersionParams::new(1.0, 0.0, 1.0).unwrap(), 16.0),
            (DispersionParams::new(1.0, 3.0, 0.0).unwrap(), 6.0 * PI),
            (DispersionParams::new(2.0, 1.0, 1.0).unwrap(), 12.0 * PI),
        ] {
            let g = SpectralGrid::new(128, 32, lx, 12.0).unwrap();
            let v0 = gaussian(&g, c(0.5, 0.0), (1.0, 1.0), (0.0, 0.0), (0.0, 0.0));
            let coeffs = DYSTHE_COEFFICIENTS.map(|v| v * 0.2);
            let gap = cov_equivalence_gap(&v0, &d, coeffs, ModelParams::default(), &[0.1, 0.2], 2e-3).unwrap();
            assert!(gap < 1e-6, "{d:?}: {gap}");
        }
    }

    #[test]
    fn scaling_preserves_mass_and_profile() {
        let g = SpectralGrid::new(64, 64, 16.0, 16.0).unwrap();
        let sigma = 1.2;
        let u = FieldState::from_fn(&g, |x, y| c((-(x * x + y * y) / (2.0 * sigma * sigma)).exp(), 0.0));
        assert!(scale_field(&u, 1.0).unwrap().l2_distance(&u).unwrap() == 0.0);
        let ul = scale_field(&u, 2.0).unwrap();
        assert!((ul.l2_norm() - u.l2_norm()).abs() < 1e-12 * u.l2_norm());
        let s2 = sigma / 2.0;
        let closed = FieldState::from_fn(ul.grid(), |x, y| c(2.0 * (-(x * x + y * y) / (2.0 * s2 * s2)).exp(), 0.0));
        assert!(ul.l2_distance(&closed).unwrap() < 1e-13);
        assert!(scale_field(&u, 0.0).is_err());
        assert!(scale_field(&u, -1.0).is_err());
    }

    #[test]
    fn scaling_commutes_with_the_flow_without_c1() {
        let g = SpectralGrid::new(64, 64, 16.0, 16.0).unwrap();
        let u0 = gaussian(&g, c(0.5, 0.0), (1.0, 1.2), (0.5, 0.0), (0.0, 0.0));
        let mut coeffs = DYSTHE_COEFFICIENTS;
        coeffs[0] = c(0.0, 0.0);
        let ctl = Controls::new(2e-3);
        let gap = scaling_commutation_gap(&u0, coeffs, ModelParams::default(), 2.0, 0.2, &ctl).unwrap();
        assert!(gap < 1e-8, "{gap}");
        // A factor of two rescales bit-exactly; 1.5 exercises rounding.
        let gap = scaling_commutation_gap(&u0, coeffs, ModelParams::default(), 1.5, 0.2, &ctl).unwrap();
        assert!(gap > 0.0 && gap < 1e-8, "{gap}");
        assert!(scaling_commutation_gap(&u0, DYSTHE_COEFFICIENTS, ModelParams::default(), 2.0, 0.2, &ctl).is_err());
    }

    #[test]
    fn reversal_properties() {
        let g = SpectralGrid::new(32, 16, 2.0 * PI, 2.0 * PI).unwrap();
        let u = test_state(&g, 0.4);
        let twice = time_reversal(&time_reversal(&u));
        assert_eq!(twice.values(), u.to_physical().values());
        assert_eq!(twice.time(), 0.4);
        let even = FieldState::from_fn(&g, |x, y| c(x.cos() + (2.0 * y).cos(), 0.0));
        assert!(time_reversal(&even).l2_distance(&even).unwrap() < 1e-14);
        let wave = FieldState::from_fn(&g, |x, _| Complex64::from_polar(1.0, x));
        assert!(time_reversal(&wave).l2_distance(&wave).unwrap() < 1e-13);
    }

    #[test]
    fn reversed_solution_solves_conjugated_equation() {
        let g = SpectralGrid::new(64, 64, 16.0, 16.0).unwrap();
        let coeffs = [c(0.1, -0.4), c(-1.0, 0.2), c(0.6, -0.3), c(0.2, 0.5)];
        let spec = ModelSpec::assemble(ModelKind::NormalizedDysthe, &g, ModelParams::with_c(coeffs)).unwrap();
        let rev = spec.with_coefficients(time_reversed_coefficients(coeffs));
        let u0 = gaussian(&g, c(0.6, 0.1), (1.0, 1.2), (0.5, 0.0), (0.0, 0.0));
        let t = 0.3;
        let ut = evolve(&u0, &spec, t, &Controls::new(1e-3)).unwrap().final_state;
        // The reversed solution runs from I(u(t)) at time -t to I(u0) at time 0.
        let back = evolve(&time_reversal(&ut), &rev, t, &Controls::new(1e-3)).unwrap().final_state;
        assert!(back.l2_distance(&time_reversal(&u0)).unwrap() < 1e-8);
        let mass_conserving = DYSTHE_COEFFICIENTS;
        assert_eq!(time_reversed_coefficients(mass_conserving), mass_conserving);
    }
}
