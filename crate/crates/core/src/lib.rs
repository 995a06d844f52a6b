//! Anisotropic outer Minkowski contents and perimeters.
//!
//! For a closed convex body `C` with the origin inside, the crate computes
//!
//! - the outer content `(|Ω ∩ (E + εC)| - |E|) / ε`,
//! - the anisotropic perimeter `∫_{∂E} h_C(ν_E)`, with `h_C` the support function,
//! - the sup-filter functional `F_ε(u) = (1/ε) ∫ (max_{x - εC} u - u)`,
//!
//! both exactly on planar polygons ([`polygon`]) and on sampling grids in two
//! or three dimensions ([`grid`], [`functionals`]). The [`lab`] module drives
//! ε-sweeps that compare grid estimates against the exact values.

pub mod body;
pub mod error;
pub mod functionals;
pub mod grid;
pub mod lab;
pub mod polygon;
pub mod vec2;

pub use body::{Ball, BoxBody, ConvexBody, StructuringBody};
pub use error::{Error, Result};
pub use functionals::{
    affine_reference, coarea_sum, f_eps, f_eps_on, sup_filter, tv_indicator_reference, LevelDecomposition,
    ScalarField,
};
pub use grid::{
    boundary_content, brute_distance, chamfer_distance, dilate, dilate_direct, eikonal_residual, measure, rasterize,
    signed_distance, sm0_grid, symmetric_content_grid, DistanceField, GridDomain, GridSet, SignedField,
};
pub use polygon::{
    aniso_perimeter, polygon_area, sm0_exact_convex, steiner_decompose, symmetric_aniso_perimeter, OrientedEdge,
    SimplePolygon, SteinerTerms,
};
pub use vec2::Vec2;
