use super::field::FieldState;
use crate::error::{Error, Result};

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 && !p.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

/// `(cell * sum |v|^q)^(1/q)`, or the max modulus for `q = inf`.
pub(crate) fn lq_of_samples(values: &[num_complex::Complex64], cell: f64, q: f64) -> f64 {
    if q.is_infinite() {
        return values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    if q == 2.0 {
        return (cell * values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt();
    }
    (cell * values.iter().map(|v| v.norm().powf(q)).sum::<f64>()).powf(1.0 / q)
}

/// Spatial `L^q` norm by Riemann sum over the physical samples.
pub fn lebesgue_norm(f: &FieldState, q: f64) -> Result<f64> {
    check_exponent(q)?;
    let phys = f.to_physical();
    Ok(lq_of_samples(phys.values(), f.grid().cell(), q))
}

/// `H^s` norm with Bessel weight `(1 + |k|^2)^s`.
pub fn sobolev_norm(f: &FieldState, s: f64) -> f64 {
    let spec = f.to_spectral();
    let g = spec.grid();
    let sum: f64 = spec
        .values()
        .iter()
        .enumerate()
        .map(|(idx, v)| {
            let (xi, mu) = g.wavevector(idx);
            (1.0 + xi * xi + mu * mu).powf(s) * v.norm_sqr()
        })
        .sum();
    (g.cell() * sum).sqrt()
}

/// `integral |u|^2`; identical in either representation.
pub fn mass(f: &FieldState) -> f64 {
    f.grid().cell() * f.norm_sqr_sum()
}

/// Fraction of the mass outside the centred window `|x| <= 3Lx/8, |y| <= 3Ly/8`.
pub fn edge_mass_fraction(f: &FieldState) -> f64 {
    let phys = f.to_physical();
    let g = phys.grid();
    let (wx, wy) = (0.375 * g.lx(), 0.375 * g.ly());
    let mut total = 0.0;
    let mut outside = 0.0;
    for (idx, v) in phys.values().iter().enumerate() {
        let (x, y) = g.point(idx);
        let m = v.norm_sqr();
        total += m;
        if x.abs() > wx || (!g.is_1d() && y.abs() > wy) {
            outside += m;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        outside / total
    }
}
