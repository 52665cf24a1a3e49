use num_complex::Complex64;

use super::field::FieldState;
use crate::error::{Error, Result};

const PLATEAU_EDGE: f64 = 1.25;
const SUPPORT_EDGE: f64 = 1.6;

fn mollifier(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// Smooth radial cutoff: 1 on `[0, 5/4]`, 0 on `[8/5, inf)`.
pub fn cutoff(r: f64) -> f64 {
    let r = r.abs();
    if r <= PLATEAU_EDGE {
        1.0
    } else if r >= SUPPORT_EDGE {
        0.0
    } else {
        let s = (SUPPORT_EDGE - r) / (SUPPORT_EDGE - PLATEAU_EDGE);
        let a = mollifier(s);
        a / (a + mollifier(1.0 - s))
    }
}

/// Annulus profile `cutoff(r) - cutoff(2r)`, supported on `[5/8, 8/5]`.
pub fn annulus(r: f64) -> f64 {
    cutoff(r) - cutoff(2.0 * r)
}

/// Weight of the dyadic block `n` at radius `r`.
///
/// `n = 1` is the low-frequency ball, `n >= 2` the annulus rescaled to `n`.
pub fn dyadic_weight(n: u64, r: f64) -> f64 {
    if n == 1 {
        cutoff(r)
    } else {
        annulus(r / n as f64)
    }
}

pub fn check_dyadic(n: u64) -> Result<()> {
    if n >= 1 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::NotDyadic(n))
    }
}

/// Dyadic blocks `1, 2, ..., 2^K` whose weights sum to one on `[0, r_max]`.
pub fn dyadic_cover(r_max: f64) -> Vec<u64> {
    let mut blocks = vec![1u64];
    let mut top = 1u64;
    while PLATEAU_EDGE * (top as f64) < r_max {
        top *= 2;
        blocks.push(top);
    }
    blocks
}

/// Smooth Littlewood-Paley projection onto frequencies `|(xi, mu)| ~ n`.
///
/// Keeps the representation of the input.
pub fn lp_project(f: &FieldState, n: u64) -> Result<FieldState> {
    check_dyadic(n)?;
    Ok(f.apply_multiplier(|xi, mu| Complex64::new(dyadic_weight(n, xi.hypot(mu)), 0.0)))
}

/// All nonzero projections of `f` covering the grid lattice, paired with
/// their block index.
pub fn lp_decompose(f: &FieldState) -> Vec<(u64, FieldState)> {
    dyadic_cover(f.grid().max_wavenumber())
        .into_iter()
        .map(|n| (n, lp_project(f, n).expect("cover blocks are dyadic")))
        .collect()
}

/// Zeros every mode with `|j| > nx/3` or `|k| > ny/3`. Input must be spectral.
pub fn dealias(f: &FieldState) -> Result<FieldState> {
    if !f.is_spectral() {
        return Err(Error::Representation {
            expected: "spectral",
            actual: "physical",
        });
    }
    let mut out = f.clone();
    dealias_in_place(&mut out);
    Ok(out)
}

pub(crate) fn dealias_in_place(f: &mut FieldState) {
    let grid = f.grid().clone();
    let (cx, cy) = (grid.nx() as i64 / 3, grid.ny() as i64 / 3);
    let is_1d = grid.is_1d();
    for (idx, v) in f.values_mut().iter_mut().enumerate() {
        let (j, k) = grid.mode(idx);
        if j.abs() > cx || (!is_1d && k.abs() > cy) {
            *v = Complex64::new(0.0, 0.0);
        }
    }
}
