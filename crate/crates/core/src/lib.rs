//! Fourier analysis of surface measures on immersed hypersurfaces with
//! nonvanishing Gaussian curvature.
//!
//! The crate is organised as
//! - [`surface`]: charts, surfaces, windows and a catalog of examples;
//! - [`geometry`]: curvature, stationary points of linear phases, normal cones;
//! - [`fourier`]: quadrature transforms, stationary-phase asymptotics, fits;
//! - [`frame`]: spectra, divergence sums, translated energies, frame bounds;
//! - [`reference`]: independent closed forms for testing.
//!
//! Transforms use the kernel `e^{−2πi x·ξ}`.

pub mod error;
pub mod fourier;
pub mod frame;
pub mod geometry;
pub mod linalg;
pub mod quadrature;
pub mod reference;
pub mod surface;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use fourier::{
    asymptotic_compare, decay_phase_fit, ft_point, ft_scan, hemisphere_axis_profile, hemisphere_symmetry_check,
    stationary_phase_eval, FourierCache, FourierSample, Measure, PhaseOptions, QuadratureConfig, StationaryData,
    StationaryPhase,
};
pub use frame::{
    cone_filter, cone_lower_bound_check, divergence_partial_sum, energy_scan, frame_bounds_estimate, generate_spectrum,
    FrameEstimate, Spectrum, SpectrumSpec,
};
pub use geometry::{
    curvature_closed_form_revolution, normal_cone_coverage, normal_cone_membership, shape_data, stationary_points,
    CoverageReport, NormalCone, SearchOptions, ShapeData,
};
pub use surface::catalog;
pub use surface::spec::{SurfaceDocument, SurfaceSpec, WindowSpec};
pub use surface::{
    surface_measure_weight, total_mass, validate_chart, validate_surface, Chart, OverlapPolicy, Region,
    SubsurfaceSelection, Surface, SurfacePoint, ValidationReport, Window,
};
