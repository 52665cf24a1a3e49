//! Fourier symbols: dispersion relations, nonlocal operators, resonance
//! function and the surface-tension coefficient family.

use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Normalized third-order dispersion `xi^3 - 3 xi mu^2`.
#[inline]
pub fn w_symbol(xi: f64, mu: f64) -> f64 {
    xi * (xi * xi - 3.0 * mu * mu)
}

/// Coefficients of `omega = a1 (xi^3 - 3 xi mu^2) + a2 (xi^2 - mu^2) - a3 xi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DispersionParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

impl DispersionParams {
    pub fn new(alpha1: f64, alpha2: f64, alpha3: f64) -> Result<Self> {
        if alpha1 == 0.0 || !alpha1.is_finite() {
            return Err(Error::ZeroAlpha1);
        }
        if !(alpha2.is_finite() && alpha3.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dispersion coefficients must be finite, got ({alpha1}, {alpha2}, {alpha3})"
            )));
        }
        Ok(Self {
            alpha1,
            alpha2,
            alpha3,
        })
    }

    pub fn normalized() -> Self {
        Self {
            alpha1: 1.0,
            alpha2: 0.0,
            alpha3: 0.0,
        }
    }
}

#[inline]
pub fn omega_symbol(xi: f64, mu: f64, d: &DispersionParams) -> f64 {
    d.alpha1 * w_symbol(xi, mu) + d.alpha2 * (xi * xi - mu * mu) - d.alpha3 * xi
}

/// `w(xi1 + xi2, mu1 + mu2) - w(xi1, mu1) - w(xi2, mu2)` in factored form.
#[inline]
pub fn resonance(xi1: f64, mu1: f64, xi2: f64, mu2: f64) -> f64 {
    3.0 * xi1 * xi2 * (xi1 + xi2)
        - 3.0 * xi2 * mu1 * mu1
        - 3.0 * xi1 * mu2 * mu2
        - 6.0 * (xi1 + xi2) * mu1 * mu2
}

/// Derivatives of the resonance in `(xi1, mu1)` with the output frequency
/// `(xi1 + xi2, mu1 + mu2)` held fixed.
#[inline]
pub fn resonance_gradient(xi1: f64, mu1: f64, xi2: f64, mu2: f64) -> (f64, f64) {
    (
        3.0 * (xi2 * xi2 - mu2 * mu2) - 3.0 * (xi1 * xi1 - mu1 * mu1),
        6.0 * xi1 * mu1 - 6.0 * xi2 * mu2,
    )
}

/// Determinant of the Hessian of `w`.
#[inline]
pub fn hessian_det_w(xi: f64, mu: f64) -> f64 {
    -36.0 * (xi * xi + mu * mu)
}

/// `-i xi / |(xi, mu)|`, zero at the origin.
pub fn riesz_x_symbol(xi: f64, mu: f64) -> Complex64 {
    let r = xi.hypot(mu);
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, -xi / r)
    }
}

/// Hyperbolic cotangent, accurate near zero and for large arguments.
/// Odd in `x`; infinite at zero.
pub fn coth(x: f64) -> f64 {
    let a = x.abs();
    let v = if a < 1e-2 {
        let a2 = a * a;
        1.0 / a + a * (1.0 / 3.0 + a2 * (-1.0 / 45.0 + a2 * 2.0 / 945.0))
    } else if a > 20.0 {
        1.0 + 2.0 * (-2.0 * a).exp()
    } else {
        1.0 + 2.0 / (2.0 * a).exp_m1()
    };
    v.copysign(x)
}

/// `x coth(x)`, equal to 1 at the origin.
pub fn x_coth(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x * coth(x)
    }
}

pub(crate) fn check_depth(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDepth(h))
    }
}

/// Symbol of the finite-depth operator: `i (xi / r) coth(h r)`, zero on `xi = 0`.
pub fn finite_depth_symbol(xi: f64, mu: f64, h: f64) -> Result<Complex64> {
    check_depth(h)?;
    if xi == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let r = xi.hypot(mu);
    Ok(Complex64::new(0.0, xi / r * coth(h * r)))
}

/// Surface-tension dependent coefficients, plus the group-velocity factor
/// `(1 + 3 kappa) / (1 + kappa)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KappaCoefficients {
    pub kappa: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub gamma: f64,
    pub u: f64,
    pub v: f64,
    pub cg_factor: f64,
}

/// Exact rational evaluation of [`KappaCoefficients`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KappaCoefficientsExact {
    pub kappa: Ratio<i64>,
    pub p: Ratio<i64>,
    pub q: Ratio<i64>,
    pub r: Ratio<i64>,
    pub s: Ratio<i64>,
    pub gamma: Ratio<i64>,
    pub u: Ratio<i64>,
    pub v: Ratio<i64>,
    pub cg_factor: Ratio<i64>,
}

pub fn kappa_coefficients(kappa: f64) -> Result<KappaCoefficients> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "kappa must be finite and non-negative, got {kappa}"
        )));
    }
    if kappa == 0.5 {
        return Err(Error::SingularKappa);
    }
    let k = kappa;
    let a = 1.0 + k;
    let b = 1.0 - 2.0 * k;
    Ok(KappaCoefficients {
        kappa,
        p: (3.0 * k * k + 6.0 * k - 1.0) / (4.0 * a * a),
        q: (1.0 + 3.0 * k) / (2.0 * a),
        r: -(1.0 - k) * (1.0 + 6.0 * k + k * k) / (8.0 * a * a * a),
        s: (3.0 + 2.0 * k + 3.0 * k * k) / (4.0 * a * a),
        gamma: (8.0 + k + 2.0 * k * k) / (8.0 * b * a),
        u: (1.0 - k) * (8.0 + k + 2.0 * k * k) / (16.0 * b * a * a),
        v: 3.0 * (4.0 * k.powi(4) + 4.0 * k.powi(3) - 9.0 * k * k + k - 8.0) / (8.0 * a * a * b * b),
        cg_factor: (1.0 + 3.0 * k) / a,
    })
}

pub fn kappa_coefficients_exact(kappa: Ratio<i64>) -> Result<KappaCoefficientsExact> {
    let zero = Ratio::from_integer(0);
    let one = Ratio::from_integer(1);
    let two = Ratio::from_integer(2);
    let n = |v: i64| Ratio::from_integer(v);
    if kappa < zero {
        return Err(Error::InvalidParameter(format!("kappa must be non-negative, got {kappa}")));
    }
    if kappa == Ratio::new(1, 2) {
        return Err(Error::SingularKappa);
    }
    let k = kappa;
    let a = one + k;
    let b = one - two * k;
    Ok(KappaCoefficientsExact {
        kappa,
        p: (n(3) * k * k + n(6) * k - one) / (n(4) * a * a),
        q: (one + n(3) * k) / (two * a),
        r: -(one - k) * (one + n(6) * k + k * k) / (n(8) * a * a * a),
        s: (n(3) + two * k + n(3) * k * k) / (n(4) * a * a),
        gamma: (n(8) + k + two * k * k) / (n(8) * b * a),
        u: (one - k) * (n(8) + k + two * k * k) / (n(16) * b * a * a),
        v: n(3) * (n(4) * k * k * k * k + n(4) * k * k * k - n(9) * k * k + k - n(8))
            / (n(8) * a * a * b * b),
        cg_factor: (one + n(3) * k) / a,
    })
}

/// Limits of the coefficient family as `kappa -> inf`.
pub fn kappa_infinity_limits() -> KappaCoefficients {
    KappaCoefficients {
        kappa: f64::INFINITY,
        p: 0.75,
        q: 1.5,
        r: 0.125,
        s: 0.75,
        gamma: -0.125,
        u: 0.0625,
        v: 0.375,
        cg_factor: 3.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn w_values() {
        assert_eq!(w_symbol(0.0, 3.7), 0.0);
        assert_eq!(w_symbol(1.0, 0.0), 1.0);
        assert_eq!(w_symbol(2.0, 1.0), 2.0);
    }

    #[test]
    fn omega_values() {
        let d = DispersionParams::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(omega_symbol(1.0, 0.0, &d), 1.0);
        let d = DispersionParams::new(2.0, 0.0, 0.0).unwrap();
        assert_eq!(omega_symbol(1.0, 1.0, &d), -4.0);
        let d = DispersionParams::normalized();
        assert_eq!(omega_symbol(1.3, -0.4, &d), w_symbol(1.3, -0.4));
        assert!(matches!(DispersionParams::new(0.0, 1.0, 1.0), Err(Error::ZeroAlpha1)));
    }

    #[test]
    fn resonance_values() {
        assert_eq!(resonance(1.0, 0.0, 1.0, 0.0), 6.0);
        assert_eq!(resonance(0.7, -1.1, -0.7, 1.1), 0.0);
        assert_eq!(resonance(1.0, 1.0, 1.0, -1.0), 12.0);
    }

    #[test]
    fn hessian_values() {
        assert_eq!(hessian_det_w(1.0, 0.0), -36.0);
        assert_eq!(hessian_det_w(0.0, 0.0), 0.0);
        assert_eq!(hessian_det_w(1.0, 1.0), -72.0);
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let r = rng.random_range(0.5..10.0);
            let th = rng.random_range(0.0..std::f64::consts::TAU);
            let (xi, mu) = (r * th.cos(), r * th.sin());
            let h = 1e-3 * r;
            let f = |a: f64, b: f64| w_symbol(a, b);
            let fxx = (f(xi + h, mu) - 2.0 * f(xi, mu) + f(xi - h, mu)) / (h * h);
            let fyy = (f(xi, mu + h) - 2.0 * f(xi, mu) + f(xi, mu - h)) / (h * h);
            let fxy = (f(xi + h, mu + h) - f(xi + h, mu - h) - f(xi - h, mu + h) + f(xi - h, mu - h))
                / (4.0 * h * h);
            let det = fxx * fyy - fxy * fxy;
            let exact = hessian_det_w(xi, mu);
            assert!(((det - exact) / exact).abs() < 1e-6, "{det} vs {exact}");
        }
    }

    #[test]
    fn riesz_values() {
        assert_eq!(riesz_x_symbol(1.0, 0.0), Complex64::new(0.0, -1.0));
        assert_eq!(riesz_x_symbol(0.0, 1.0).norm(), 0.0);
        assert_eq!(riesz_x_symbol(0.0, 0.0).norm(), 0.0);
    }

    #[test]
    fn coth_branches() {
        // Independent values of coth.
        assert!((coth(1.0) - 1.313_035_285_499_331_3).abs() < 1e-15);
        assert!((coth(0.005) - 200.001_666_663_888_9).abs() < 1e-10);
        assert_eq!(coth(25.0), 1.0);
        for &x in &[0.0099999f64, 0.0100001, 19.9999, 20.0001] {
            let direct = x.cosh() / x.sinh();
            assert!(((coth(x) - direct) / direct).abs() < 1e-13, "{x}");
        }
        assert_eq!(coth(-2.0), -coth(2.0));
        assert!((x_coth(1e-8) - 1.0).abs() < 1e-15);
        assert_eq!(x_coth(0.0), 1.0);
    }

    #[test]
    fn finite_depth_values() {
        let v = finite_depth_symbol(1.0, 0.0, 1.0).unwrap();
        assert!(v.re == 0.0 && (v.im - 1.3130352854993313).abs() < 1e-14);
        assert_eq!(finite_depth_symbol(0.0, 2.0, 0.3).unwrap().norm(), 0.0);
        assert_eq!(finite_depth_symbol(0.0, 0.0, 0.3).unwrap().norm(), 0.0);
        let deep = finite_depth_symbol(1.0, 0.0, 50.0).unwrap();
        assert!((deep + riesz_x_symbol(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(finite_depth_symbol(1.0, 0.0, 0.0), Err(Error::InvalidDepth(_))));
        assert!(finite_depth_symbol(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn finite_depth_converges_monotonically() {
        let (xi, mu) = (0.8, -0.3);
        let limit = -riesz_x_symbol(xi, mu);
        let mut prev = f64::INFINITY;
        for k in 0..40 {
            let h = 0.05 * 1.3f64.powi(k);
            let d = (finite_depth_symbol(xi, mu, h).unwrap() - limit).norm();
            assert!(d <= prev);
            prev = d;
        }
        assert!(prev < 1e-12);
    }

    #[test]
    fn kappa_zero_and_one() {
        let c = kappa_coefficients(0.0).unwrap();
        assert_eq!(
            (c.p, c.q, c.r, c.s, c.gamma, c.u, c.v),
            (-0.25, 0.5, -0.125, 0.75, 1.0, 0.5, -3.0)
        );
        assert_eq!(c.cg_factor, 1.0);
        let c = kappa_coefficients(1.0).unwrap();
        assert_eq!((c.r, c.p, c.q), (0.0, 0.5, 1.0));
        assert!(matches!(kappa_coefficients(0.5), Err(Error::SingularKappa)));
        assert!(kappa_coefficients(-0.1).is_err());
    }

    #[test]
    fn kappa_exact_matches_float() {
        for (num, den) in [(0, 1), (1, 1), (1, 3), (7, 4), (5, 2)] {
            let e = kappa_coefficients_exact(Ratio::new(num, den)).unwrap();
            let f = kappa_coefficients(num as f64 / den as f64).unwrap();
            let to_f = |r: Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
            for (a, b) in [(e.p, f.p), (e.q, f.q), (e.r, f.r), (e.s, f.s), (e.gamma, f.gamma), (e.u, f.u), (e.v, f.v)] {
                assert!((to_f(a) - b).abs() < 1e-14 * b.abs().max(1.0));
            }
        }
        assert!(matches!(kappa_coefficients_exact(Ratio::new(1, 2)), Err(Error::SingularKappa)));
    }

    #[test]
    fn kappa_large_approaches_limits() {
        let c = kappa_coefficients(1e7).unwrap();
        let l = kappa_infinity_limits();
        for (a, b) in [(c.p, l.p), (c.q, l.q), (c.r, l.r), (c.s, l.s), (c.gamma, l.gamma), (c.u, l.u), (c.v, l.v), (c.cg_factor, l.cg_factor)] {
            assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        }
    }

    #[test]
    fn resonance_gradient_matches_differences() {
        let (xi1, mu1, xi2, mu2) = (3.1, -1.7, 0.4, 0.9);
        let (zx, zy) = (xi1 + xi2, mu1 + mu2);
        let r = |a: f64, b: f64| resonance(a, b, zx - a, zy - b);
        let h = 1e-5;
        let gx = (r(xi1 + h, mu1) - r(xi1 - h, mu1)) / (2.0 * h);
        let gy = (r(xi1, mu1 + h) - r(xi1, mu1 - h)) / (2.0 * h);
        let (ax, ay) = resonance_gradient(xi1, mu1, xi2, mu2);
        assert!((gx - ax).abs() < 1e-6 && (gy - ay).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn resonance_identity(a in -50.0f64..50.0, b in -50.0f64..50.0, c in -50.0f64..50.0, d in -50.0f64..50.0) {
            let lhs = resonance(a, b, c, d);
            let rhs = w_symbol(a + c, b + d) - w_symbol(a, b) - w_symbol(c, d);
            let scale = (a.abs() + b.abs() + c.abs() + d.abs()).powi(3).max(1.0);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * scale);
        }

        #[test]
        fn w_is_odd(a in -1e3f64..1e3, b in -1e3f64..1e3) {
            prop_assert_eq!(w_symbol(-a, -b), -w_symbol(a, b));
        }

        #[test]
        fn q_and_s_positive(k in 0.0f64..100.0) {
            prop_assume!((k - 0.5).abs() > 1e-9);
            let c = kappa_coefficients(k).unwrap();
            prop_assert!(c.q > 0.0 && c.s > 0.0);
        }

        #[test]
        fn riesz_bounded_and_imaginary(a in -1e3f64..1e3, b in -1e3f64..1e3) {
            let v = riesz_x_symbol(a, b);
            prop_assert!(v.re == 0.0 && v.im.abs() <= 1.0);
        }
    }
}
