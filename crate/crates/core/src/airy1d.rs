//! The one-dimensional model: the Airy function, the closed-form kernel of
//! the linear flow, the depth operator and the frame change that removes
//! the transport term.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evolve::linear_propagate;
use crate::models::{ModelKind, ModelParams, ModelSpec};
use crate::spectral::{FieldState, Representation, SpectralGrid};
use crate::symbols::{check_depth, coth, x_coth};

const AI0: f64 = 0.355_028_053_887_817_239_3;
const AIP0: f64 = -0.258_819_403_792_806_798_4;
/// Beyond this modulus the asymptotic expansions are used directly.
const ASYMPTOTIC_FROM: f64 = 8.5;
/// Within this modulus the Maclaurin series is used directly.
const SERIES_UP_TO: f64 = 2.0;

/// `Ai(z)`.
pub fn airy_ai(z: f64) -> f64 {
    airy_ai_pair(z).0
}

/// `(Ai(z), Ai'(z))`.
///
/// Maclaurin series near the origin, asymptotic expansions for `|z| >= 8.5`,
/// and Taylor integration of `y'' = z y` in between. The integration runs
/// towards the origin on the decaying side, so it stays stable.
pub fn airy_ai_pair(z: f64) -> (f64, f64) {
    if z.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if z.abs() <= SERIES_UP_TO {
        maclaurin(z)
    } else if z >= ASYMPTOTIC_FROM {
        asymptotic_positive(z)
    } else if z <= -ASYMPTOTIC_FROM {
        asymptotic_negative(-z)
    } else if z > 0.0 {
        let start = asymptotic_positive(ASYMPTOTIC_FROM);
        integrate(ASYMPTOTIC_FROM, start, z)
    } else {
        let start = maclaurin(-SERIES_UP_TO);
        integrate(-SERIES_UP_TO, start, z)
    }
}

fn maclaurin(z: f64) -> (f64, f64) {
    if z == 0.0 {
        return (AI0, AIP0);
    }
    // Ai = Ai(0) f + Ai'(0) g with f = 1 + z^3/6 + ..., g = z + z^4/12 + ...
    let z3 = z * z * z;
    let (mut f, mut g) = (1.0, z);
    let (mut fp, mut gp) = (0.0, 1.0);
    let (mut tf, mut tg) = (1.0, z);
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        tf *= z3 / ((k3 - 1.0) * k3);
        tg *= z3 / (k3 * (k3 + 1.0));
        f += tf;
        g += tg;
        fp += k3 * tf / z;
        gp += (k3 + 1.0) * tg / z;
        if tf.abs() < 1e-18 * f.abs() && tg.abs() < 1e-18 * g.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    (AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp)
}

/// Coefficients `u_k` and `v_k` of the large-argument expansions.
fn asymptotic_coefficients(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..n {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * next);
    }
    (u, v)
}

/// `sum_k sign(k) c_k zeta^-k` truncated at the smallest term.
fn truncated_sum(c: &[f64], zeta: f64, alternate: bool, start: usize, stride: usize) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut sign = 1.0;
    let mut k = start;
    while k < c.len() {
        let term = c[k] / zeta.powi(k as i32);
        if term.abs() > last {
            break;
        }
        sum += sign * term;
        last = term.abs();
        if last < 1e-17 * sum.abs() {
            break;
        }
        if alternate {
            sign = -sign;
        }
        k += stride;
    }
    sum
}

fn asymptotic_positive(z: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients(40);
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = z.powf(0.25);
    let su = truncated_sum(&u, zeta, true, 0, 1);
    let sv = truncated_sum(&v, zeta, true, 0, 1);
    (e / q * su, -e * q * sv)
}

/// `Ai(-x)` and `Ai'(-x)` for large positive `x`.
fn asymptotic_negative(x: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients(40);
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let theta = zeta - PI / 4.0;
    let (s, c) = theta.sin_cos();
    let q = x.powf(0.25);
    let a = 1.0 / (PI.sqrt() * q);
    let ue = truncated_sum(&u, zeta, true, 0, 2);
    let uo = truncated_sum(&u, zeta, true, 1, 2);
    let ve = truncated_sum(&v, zeta, true, 0, 2);
    let vo = truncated_sum(&v, zeta, true, 1, 2);
    let ai = a * (c * ue + s * uo);
    let aip = q / PI.sqrt() * (s * ve - c * vo);
    (ai, aip)
}

/// Taylor steps of `y'' = z y` from `(z0, y, y')` to `z1`.
fn integrate(z0: f64, start: (f64, f64), z1: f64) -> (f64, f64) {
    let steps = ((z1 - z0).abs() / 0.25).ceil().max(1.0) as usize;
    let h = (z1 - z0) / steps as f64;
    let (mut y, mut yp) = start;
    let mut z = z0;
    let mut a = [0.0f64; 48];
    for _ in 0..steps {
        a[0] = y;
        a[1] = yp;
        a[2] = z * y / 2.0;
        for n in 1..a.len() - 2 {
            a[n + 2] = (z * a[n] + a[n - 1]) / ((n + 1) as f64 * (n + 2) as f64);
        }
        let (mut ny, mut nyp) = (0.0, 0.0);
        let mut p = 1.0;
        for n in 0..a.len() {
            ny += a[n] * p;
            if n + 1 < a.len() {
                nyp += (n + 1) as f64 * a[n + 1] * p;
            }
            p *= h;
        }
        y = ny;
        yp = nyp;
        z += h;
    }
    (y, yp)
}

/// Third- and second-order coefficients `(alpha, beta)` of the linear part,
/// `alpha = -omega / (16 k0^3)`, `beta = omega / (8 k0^2)`.
pub fn kernel_coefficients(omega: f64, k0: f64) -> (f64, f64) {
    (-omega / (16.0 * k0.powi(3)), omega / (8.0 * k0 * k0))
}

/// Fourier integral `int exp(i (s^3 + z s)) ds = 2 pi 3^{-1/3} Ai(3^{-1/3} z)`.
pub fn cubic_oscillatory_integral(z: f64) -> f64 {
    let c = 3f64.powf(-1.0 / 3.0);
    2.0 * PI * c * airy_ai(c * z)
}

/// Kernel of `u_t + i beta u_xx + alpha u_xxx = 0`:
/// `|t alpha|^{-1/3} exp(2 i t beta^3 / (27 alpha^2)) exp(-i beta x / (3 alpha))
///  I((x - beta^2 t / (3 alpha)) / (t alpha)^{1/3})` with `I` the cubic
/// oscillatory integral and a real signed cube root.
///
/// Solutions are `u(t) = AIRY_CONVOLUTION_NORMALIZATION * (kernel(t) * u0)`.
pub fn airy_fundamental(x: f64, t: f64, alpha: f64, beta: f64) -> Result<Complex64> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("kernel time must be nonzero and finite, got {t}")));
    }
    if alpha == 0.0 || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("kernel needs alpha != 0, got alpha = {alpha}, beta = {beta}")));
    }
    let ta = t * alpha;
    let root = ta.cbrt();
    let shifted = x - beta * beta * t / (3.0 * alpha);
    let phase = 2.0 * t * beta.powi(3) / (27.0 * alpha * alpha) - beta * x / (3.0 * alpha);
    Ok(Complex64::from_polar(cubic_oscillatory_integral(shifted / root) / ta.abs().cbrt(), phase))
}

/// Factor in front of the convolution integral, fitted once against
/// spectral propagation (see the tests) and frozen.
pub const AIRY_CONVOLUTION_NORMALIZATION: f64 = 1.0 / (2.0 * PI);

fn require_line(u: &FieldState) -> Result<()> {
    if u.grid().is_1d() {
        Ok(())
    } else {
        Err(Error::InvalidGrid("the one-dimensional operators need a line grid".into()))
    }
}

/// Trapezoid-rule convolution of `u0` with the kernel on the line (no
/// periodization). The result carries time `u0.time() + t`.
pub fn airy_convolution(u0: &FieldState, t: f64, alpha: f64, beta: f64) -> Result<FieldState> {
    require_line(u0)?;
    let g = u0.grid().clone();
    let n = g.nx();
    let dx = g.dx();
    let kernel: Vec<Complex64> = (0..2 * n - 1)
        .into_par_iter()
        .map(|m| airy_fundamental((m as f64 - (n - 1) as f64) * dx, t, alpha, beta))
        .collect::<Result<_>>()?;
    let data = u0.to_physical();
    let src = data.values();
    let w = AIRY_CONVOLUTION_NORMALIZATION * dx;
    let values: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let row = &kernel[i..i + n];
            // kernel index (i - j) + n - 1 for source j, i.e. row[n - 1 - j].
            let s: Complex64 = src.iter().zip(row.iter().rev()).map(|(u, k)| u * k).sum();
            s * w
        })
        .collect();
    FieldState::new(g, values, Representation::Physical, u0.time() + t)
}

/// Relative `L^2` gap between the kernel convolution and the spectral
/// linear flow of the one-dimensional model, for a centred Gaussian of width
/// `sigma` on `n` points over `[-length/2, length/2)`.
pub fn kernel_identity_error(n: usize, length: f64, sigma: f64, t: f64, params: &ModelParams) -> Result<f64> {
    let grid = SpectralGrid::line(n, length)?;
    let u0 = FieldState::from_fn(&grid, |x, _| Complex64::new((-x * x / (2.0 * sigma * sigma)).exp(), 0.0));
    let linear = ModelParams {
        c: Some([Complex64::new(0.0, 0.0); 4]),
        ..*params
    };
    let spec = assemble_1d(&grid, 1.0, linear)?;
    let (alpha, beta) = kernel_coefficients(params.omega, params.k0);
    let exact = linear_propagate(&u0, &spec, t)?;
    let conv = airy_convolution(&u0, t, alpha, beta)?;
    Ok(conv.l2_distance(&exact)? / exact.l2_norm())
}

/// Multiplier `i coth(h xi)` of the depth operator; the zero mode is sent to 0.
pub fn coth_symbol_1d(xi: f64, h: f64) -> Complex64 {
    if xi == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, coth(h * xi))
    }
}

/// Symbol of `dx` composed with the depth operator, `(i xi)(i coth(h xi)) =
/// -xi coth(h xi)`, continuous at the origin with value `-1/h`.
pub fn dx_coth_symbol_1d(xi: f64, h: f64) -> f64 {
    -x_coth(h * xi) / h
}

pub fn coth_operator_1d(f: &FieldState, h: f64) -> Result<FieldState> {
    check_depth(h)?;
    require_line(f)?;
    Ok(f.apply_multiplier(|xi, _| coth_symbol_1d(xi, h)))
}

pub fn dx_coth_operator_1d(f: &FieldState, h: f64) -> Result<FieldState> {
    check_depth(h)?;
    require_line(f)?;
    Ok(f.apply_multiplier(|xi, _| Complex64::new(dx_coth_symbol_1d(xi, h), 0.0)))
}

/// The one-dimensional finite-depth model in the frame moving with the
/// group velocity `omega / (2 k0)`.
pub fn assemble_1d(grid: &SpectralGrid, h: f64, params: ModelParams) -> Result<ModelSpec> {
    ModelSpec::assemble(ModelKind::Dysthe1D { h }, grid, params)
}

/// Transport speed `omega / (2 k0)` removed by the moving frame.
pub fn transport_speed(params: &ModelParams) -> f64 {
    params.omega / (2.0 * params.k0)
}

/// Moving-frame state at time `t` to the laboratory frame: `u(x - v t)`,
/// applied as the spectral phase `exp(-i xi v t)`.
pub fn to_lab_frame(u: &FieldState, params: &ModelParams) -> Result<FieldState> {
    require_line(u)?;
    let shift = transport_speed(params) * u.time();
    Ok(u.apply_multiplier(|xi, _| Complex64::from_polar(1.0, -xi * shift)))
}

pub fn to_moving_frame(u: &FieldState, params: &ModelParams) -> Result<FieldState> {
    require_line(u)?;
    let shift = transport_speed(params) * u.time();
    Ok(u.apply_multiplier(|xi, _| Complex64::from_polar(1.0, xi * shift)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{evolve, Controls};
    use crate::models::{gaussian, mean_flow_multiplier, Nonlocal};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Reference values from an arbitrary-precision library.
    const AI_TABLE: [(f64, f64, f64); 13] = [
        (0.0, 0.355_028_053_887_817_24, -0.258_819_403_792_806_8),
        (1.0, 0.135_292_416_312_881_42, -0.159_147_441_296_793_2),
        (-1.0, 0.535_560_883_292_352_1, -0.010_160_567_116_645_209),
        (2.5, 0.015_725_923_380_470_49, -0.026_250_881_035_903_23),
        (-2.5, -0.112_325_067_692_966_09, 0.678_852_734_264_794_4),
        (3.7, 0.001_745_572_000_609_978_5, -0.003_466_940_749_027_627),
        (-5.3, 0.182_567_931_068_339_63, 0.754_575_419_947_010_9),
        (8.5, 1.099_700_975_519_550_7e-8, -3.237_725_440_447_602_3e-8),
        (-8.5, -0.330_290_237_630_208_9, -0.032_313_348_284_639_136),
        (10.0, 1.104_753_255_289_868_6e-10, -3.520_633_676_738_923_6e-10),
        (-20.0, -0.176_406_127_077_984_7, 0.892_862_856_736_471_2),
        (-100.0, 0.176_753_393_239_552_88, -0.242_297_031_660_583_8),
        (25.0, 8.116_026_824_691_387e-38, -4.066_089_337_243_281e-37),
    ];

    #[test]
    fn airy_reference_values() {
        for (z, ai, aip) in AI_TABLE {
            let (a, ap) = airy_ai_pair(z);
            assert!((a - ai).abs() <= 2e-13 * ai.abs().max(1e-3), "Ai({z}) = {a}, want {ai}");
            assert!((ap - aip).abs() <= 2e-12 * aip.abs().max(1e-3), "Ai'({z}) = {ap}, want {aip}");
        }
        let ai0 = 3f64.powf(-2.0 / 3.0) / 1.354_117_939_426_400_4;
        assert!((airy_ai(0.0) - ai0).abs() < 1e-15);
    }

    #[test]
    fn branches_join_smoothly() {
        for z in [-8.5, -2.0, 2.0, 8.5] {
            let (a, ap) = airy_ai_pair(z - 1e-9);
            let (b, _) = airy_ai_pair(z + 1e-9);
            let jump = b - a - 2e-9 * ap;
            assert!(jump.abs() < 1e-13 * a.abs().max(1e-8), "{z}: {a} {b}");
        }
    }

    #[test]
    fn kernel_reductions() {
        for t in [0.5, 1.0, 3.0] {
            for x in [-2.0, 0.0, 1.3] {
                let k = airy_fundamental(x, t, 1.0, 0.0).unwrap();
                let want = cubic_oscillatory_integral(x * t.powf(-1.0 / 3.0)) * t.powf(-1.0 / 3.0);
                assert!((k - c(want, 0.0)).norm() < 1e-13);
            }
        }
        let (a, b) = (-1.0 / 16.0, 0.125);
        let t = 1.7;
        let peak = airy_fundamental(b * b * t / (3.0 * a), t, a, b).unwrap();
        let want = 2.0 * PI * 3f64.powf(-1.0 / 3.0) * airy_ai(0.0) / (t * a).abs().cbrt();
        assert!((peak.norm() - want).abs() < 1e-13);
        let far: Vec<f64> = [5.0, 10.0, 20.0].iter().map(|&x| airy_fundamental(x, 1.0, 1.0, 0.0).unwrap().norm()).collect();
        assert!(far[0] > far[1] && far[1] > far[2] && far[2] < 1e-10);
        assert!(airy_fundamental(1.0, 0.0, 1.0, 0.0).is_err());
        assert!(airy_fundamental(1.0, 1.0, 0.0, 0.0).is_err());
    }

    fn gaussian_line(n: usize, l: f64, sigma: f64) -> FieldState {
        let g = SpectralGrid::line(n, l).unwrap();
        FieldState::from_fn(&g, |x, _| c((-x * x / (2.0 * sigma * sigma)).exp(), 0.0))
    }

    #[test]
    fn convolution_normalization_fit() {
        // Least-squares factor between the unnormalized quadrature and the
        // spectral flow; this is where the frozen constant comes from.
        let (a, b) = kernel_coefficients(1.0, 1.0);
        let u0 = gaussian_line(1024, 64.0, 1.0);
        let spec = assemble_1d(u0.grid(), 1.0, ModelParams::with_c([c(0.0, 0.0); 4])).unwrap();
        let exact = linear_propagate(&u0, &spec, 1.0).unwrap().into_physical();
        let conv = airy_convolution(&u0, 1.0, a, b).unwrap();
        let raw: Vec<Complex64> = conv.values().iter().map(|v| v / AIRY_CONVOLUTION_NORMALIZATION).collect();
        let num: Complex64 = raw.iter().zip(exact.values()).map(|(r, e)| r.conj() * e).sum();
        let den: f64 = raw.iter().map(|r| r.norm_sqr()).sum();
        let fit = num / den;
        assert!((fit - c(1.0 / (2.0 * PI), 0.0)).norm() < 1e-12, "{fit}");
    }

    #[test]
    fn kernel_matches_spectral_flow_for_both_signs_of_t_alpha() {
        let u0 = gaussian_line(512, 48.0, 1.0);
        for (omega, k0, t) in [(1.0, 1.0, 1.0), (1.0, 1.0, -0.7), (2.0, 0.8, 0.4)] {
            let p = ModelParams {
                omega,
                k0,
                ..ModelParams::with_c([c(0.0, 0.0); 4])
            };
            let spec = assemble_1d(u0.grid(), 1.0, p).unwrap();
            let (a, b) = kernel_coefficients(omega, k0);
            let exact = linear_propagate(&u0, &spec, t).unwrap();
            let conv = airy_convolution(&u0, t, a, b).unwrap();
            let e = conv.l2_distance(&exact).unwrap() / exact.l2_norm();
            assert!(e < 1e-10, "omega {omega}, k0 {k0}, t {t}: {e}");
        }
    }

    #[test]
    fn dispersion_of_assembled_model() {
        let g = SpectralGrid::line(64, 20.0).unwrap();
        let spec = assemble_1d(&g, 2.0, ModelParams::default()).unwrap();
        let (a, b) = kernel_coefficients(1.0, 1.0);
        for xi in [-3.0, -0.5, 0.0, 1.0, 4.0] {
            assert!((spec.dispersion(xi, 0.0) - (a * xi.powi(3) + b * xi * xi)).abs() < 1e-14);
        }
        assert_eq!(spec.nonlocal(), Nonlocal::CothDepth(2.0));
        let square = SpectralGrid::new(8, 8, 1.0, 1.0).unwrap();
        assert!(assemble_1d(&square, 2.0, ModelParams::default()).is_err());
        assert!(assemble_1d(&g, 0.0, ModelParams::default()).is_err());
    }

    #[test]
    fn depth_operator_symbols() {
        let h = 0.7;
        assert!((dx_coth_symbol_1d(0.0, h) + 1.0 / h).abs() < 1e-15);
        assert!((dx_coth_symbol_1d(1e-7, h) + 1.0 / h).abs() < 1e-12);
        for xi in [-2.0, -0.1, 0.0, 0.3, 5.0] {
            let composite = dx_coth_symbol_1d(xi, h);
            let product = c(0.0, xi) * coth_symbol_1d(xi, h);
            if xi != 0.0 {
                assert!((product - c(composite, 0.0)).norm() < 1e-14);
            }
            assert!((composite + mean_flow_multiplier(Nonlocal::CothDepth(h), 1, xi, 0.0)).abs() < 1e-15);
        }
        // Infinite-depth limit: i sign(xi), minus the Hilbert transform symbol.
        for xi in [-3.0, -0.2, 0.2, 3.0] {
            assert!((coth_symbol_1d(xi, 1e3) - c(0.0, xi.signum())).norm() < 1e-15);
        }
    }

    #[test]
    fn depth_operator_on_fields() {
        let g = SpectralGrid::line(64, 2.0 * PI).unwrap();
        let f = FieldState::from_fn(&g, |x, _| c(x.cos() + 0.5, 0.0));
        let lf = coth_operator_1d(&f, 1.5).unwrap().into_physical();
        // i coth(h) on e^{ix}, -i coth(h) on e^{-ix}: cos x -> -coth(h) sin x.
        let want = FieldState::from_fn(&g, |x, _| c(-coth(1.5) * x.sin(), 0.0));
        assert!(lf.l2_distance(&want).unwrap() < 1e-12);
        let d = dx_coth_operator_1d(&f, 1.5).unwrap().into_physical();
        let want = FieldState::from_fn(&g, |x, _| c(-coth(1.5) * x.cos() - 0.5 / 1.5, 0.0));
        assert!(d.l2_distance(&want).unwrap() < 1e-12);
        assert!(coth_operator_1d(&f, -1.0).is_err());
        let square = SpectralGrid::new(8, 8, 1.0, 1.0).unwrap();
        assert!(coth_operator_1d(&FieldState::zeros(&square, Representation::Physical), 1.0).is_err());
    }

    #[test]
    fn frame_change_roundtrip_and_shift() {
        let p = ModelParams::default();
        let u = gaussian_line(256, 40.0, 1.0).with_time(2.0);
        let lab = to_lab_frame(&u, &p).unwrap();
        assert!(to_moving_frame(&lab, &p).unwrap().l2_distance(&u).unwrap() < 1e-13);
        // Shift by v t = 1: the peak moves to x = 1.
        let want = FieldState::from_fn(u.grid(), |x, _| c((-(x - 1.0) * (x - 1.0) / 2.0).exp(), 0.0));
        assert!(lab.l2_distance(&want).unwrap() < 1e-12);
    }

    #[test]
    fn nonlinear_flow_conserves_mass_and_zero_stays_zero() {
        let g = SpectralGrid::line(256, 40.0).unwrap();
        let spec = assemble_1d(&g, 1.0, ModelParams::default()).unwrap();
        let u0 = gaussian(&g, c(0.3, 0.0), (1.5, 1.0), (0.0, 0.0), (0.0, 0.0));
        let tr = evolve(&u0, &spec, 1.0, &Controls::new(1e-3).diagnostics_every(100)).unwrap();
        assert!(tr.mass_drift() < 1e-10, "{}", tr.mass_drift());
        let zero = FieldState::zeros(&g, Representation::Physical);
        let z = evolve(&zero, &spec, 0.1, &Controls::new(1e-2)).unwrap();
        assert!(z.final_state.values().iter().all(|v| *v == c(0.0, 0.0)));
    }

    proptest! {
        #[test]
        fn airy_satisfies_its_equation(z in -30.0f64..12.0) {
            // Central difference of Ai' against z Ai.
            let h = 1e-5;
            let d = (airy_ai_pair(z + h).1 - airy_ai_pair(z - h).1) / (2.0 * h);
            let (ai, aip) = airy_ai_pair(z);
            prop_assert!((d - z * ai).abs() <= 1e-7 * (1.0 + z.abs()) * (ai.abs() + aip.abs()));
        }

        #[test]
        fn depth_symbols_are_odd(xi in -20.0f64..20.0, h in 0.05f64..10.0) {
            prop_assert_eq!(coth_symbol_1d(-xi, h), -coth_symbol_1d(xi, h));
            prop_assert_eq!(dx_coth_symbol_1d(-xi, h), dx_coth_symbol_1d(xi, h));
            prop_assert_eq!(coth_symbol_1d(xi, h).re, 0.0);
        }
    }
}
