use num_complex::Complex64;

use super::field::FieldState;
use super::lp::{check_dyadic, dyadic_weight};
use crate::error::Result;
use crate::symbols::w_symbol;

/// Field `exp(i k_c . x) * envelope(x)` with `k_c` a lattice vector.
///
/// The envelope's spectral slot `(j, k)` carries the total frequency
/// `(j + c0, k + c1)` in lattice units, so packets centred far above the
/// grid's own band can be represented on a modest grid. Moduli, and hence
/// every Lebesgue norm, are those of the envelope.
#[derive(Clone, Debug)]
pub struct CarrierField {
    pub envelope: FieldState,
    pub carrier: [i64; 2],
}

impl From<FieldState> for CarrierField {
    fn from(envelope: FieldState) -> Self {
        Self {
            envelope,
            carrier: [0, 0],
        }
    }
}

impl From<&FieldState> for CarrierField {
    fn from(envelope: &FieldState) -> Self {
        envelope.clone().into()
    }
}

impl CarrierField {
    pub fn new(envelope: FieldState, carrier: [i64; 2]) -> Self {
        Self { envelope, carrier }
    }

    /// Carrier frequency `(xi_c, mu_c)`.
    pub fn carrier_frequency(&self) -> (f64, f64) {
        let (sx, sy) = self.envelope.grid().spacing();
        let cy = if self.envelope.grid().is_1d() { 0.0 } else { sy * self.carrier[1] as f64 };
        (sx * self.carrier[0] as f64, cy)
    }

    /// Multiplies by `m` evaluated at the total frequencies.
    pub fn apply_multiplier(&self, m: impl Fn(f64, f64) -> Complex64) -> Self {
        let (cx, cy) = self.carrier_frequency();
        Self {
            envelope: self.envelope.apply_multiplier(|xi, mu| m(xi + cx, mu + cy)),
            carrier: self.carrier,
        }
    }

    pub fn lp_project(&self, n: u64) -> Result<Self> {
        check_dyadic(n)?;
        Ok(self.apply_multiplier(|xi, mu| Complex64::new(dyadic_weight(n, xi.hypot(mu)), 0.0)))
    }

    /// Free evolution `exp(i t symbol(xi, mu))`.
    pub fn free_evolve_with(&self, t: f64, symbol: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = self.apply_multiplier(|xi, mu| Complex64::from_polar(1.0, t * symbol(xi, mu)));
        out.envelope.set_time(self.envelope.time() + t);
        out
    }

    /// Free evolution under the normalized third-order dispersion.
    pub fn free_evolve(&self, t: f64) -> Self {
        self.free_evolve_with(t, w_symbol)
    }

    pub fn l2_norm(&self) -> f64 {
        self.envelope.l2_norm()
    }

    /// Physical samples of the full field. Frequencies beyond the grid band
    /// alias, so this is only faithful when the shifted spectrum fits.
    pub fn to_field(&self) -> FieldState {
        let (cx, cy) = self.carrier_frequency();
        let phys = self.envelope.to_physical();
        let g = phys.grid().clone();
        let mut out = phys;
        for (idx, v) in out.values_mut().iter_mut().enumerate() {
            let (x, y) = g.point(idx);
            *v *= Complex64::from_polar(1.0, cx * x + cy * y);
        }
        out
    }

    /// Largest total frequency with a spectral coefficient above `tol` times the peak.
    pub fn spectral_extent(&self, tol: f64) -> (f64, f64) {
        let (cx, cy) = self.carrier_frequency();
        let s = self.envelope.to_spectral();
        let g = s.grid();
        let peak = s.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for (idx, v) in s.values().iter().enumerate() {
            if v.norm() > tol * peak {
                let (xi, mu) = g.wavevector(idx);
                let r = (xi + cx).hypot(mu + cy);
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        (lo, hi)
    }
}
