//! Fourier transforms of surface measures, stationary-phase asymptotics and
//! decay fits.

pub mod asymptotics;
pub mod ft;
pub mod hemisphere;
pub mod stationary_phase;

pub use asymptotics::{
    asymptotic_compare, decay_phase_fit, envelope_fit, fit_loglog, peak_fit, zero_crossings, zero_crossings_within,
    AsymptoticReport, CompareSample, DecayPhaseReport, LogFit,
};
pub use ft::{
    ft_point, ft_scan, linspace, ray, FourierCache, FourierSample, Measure, QuadratureConfig, ScanFailure, ScanOutcome,
};
pub use hemisphere::{
    axis_integral, hemisphere_axis_profile, hemisphere_symmetry_check, sphere_area, AxisProfileReport, AxisSample,
    SymmetryReport, SymmetrySample,
};
pub use stationary_phase::{
    stationary_phase_eval, PhaseOptions, RayPoints, StationaryData, StationaryPhase, StationaryTerm,
};
