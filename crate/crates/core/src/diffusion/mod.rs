//! Order finding by heat diffusion on the dyadic Cayley graph of ⟨b⟩, with a
//! closed-form spectral backend and the RC-network analogue.

mod rc;
mod series;
mod spectral;
mod walk;

pub use rc::{loglog_slope, rc_discretize, symmetric_norm, truncation_errors, Discretization, RcNetwork};
pub use series::{heat_series, read_csv, stable_from, write_csv, SeriesRow, CSV_HEADER};
pub use spectral::{doubling_witness, mixing_gap, spectral_heat_identity, ExponentWalk, SpectralModel};
pub use walk::{
    recover_order, required_steps, round_inverse, CayleyWalk, HeatSimulator, HeatState,
    OrderRecovery, DEFAULT_STATE_GUARD, ROUND_GUARD,
};
