//! Curvature, Gauss-map searches and normal cones.

pub mod cone;
pub mod shape;

pub use cone::{
    coverage_with, direction_cells, normal_cone_coverage, normal_cone_membership, stationary_points, CoverageCell,
    CoverageReport, NearestNormal, NormalCone, SearchOptions,
};
pub use shape::{chart_shape, curvature_closed_form_revolution, gaussian_curvature, shape_data, ShapeData};
