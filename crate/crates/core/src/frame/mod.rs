//! Spectra, divergence sums, translated energies, cone checks and
//! finite-dimensional frame bounds.

pub mod bounds;
pub mod energy;
pub mod spectrum;
pub mod sums;

pub use bounds::{frame_bounds_estimate, FrameEstimate};
pub use energy::{
    cone_filter, cone_lower_bound_check, energy_scan, ConePartition, EnergyReport, EnergySample, LowerBoundReport,
    LowerBoundSample, OffConeSample,
};
pub use spectrum::{generate_spectrum, Spectrum, SpectrumSpec};
pub use sums::{divergence_partial_sum, DivergenceReport, PartialSum};
