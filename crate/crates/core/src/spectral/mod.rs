//! Periodic grids, unitary transforms, frequency projectors and norms.

mod carrier;
mod field;
mod grid;
mod lp;
mod norms;
mod spacetime;

pub use carrier::CarrierField;
pub use field::{spectral_transform, Direction, FieldState, Representation};
pub use grid::SpectralGrid;
pub use lp::{
    annulus, check_dyadic, cutoff, dealias, dyadic_cover, dyadic_weight, lp_decompose, lp_project,
};
pub(crate) use lp::dealias_in_place;
pub(crate) use norms::lq_of_samples;
pub(crate) use spacetime::time_lp;
pub use norms::{edge_mass_fraction, lebesgue_norm, mass, sobolev_norm};
pub use spacetime::{mixed_norm, modulation_cover, modulation_project, xsb_norm, SpaceTimeField};
