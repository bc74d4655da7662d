//! Annulus coordinates, closed polylines and action integrals on the cylinder.

mod curve;
mod cylinder;
mod frame;

pub(crate) use frame::canonical_angle;

pub use curve::{hausdorff_distance, inside_curve, min_separation, Parametrization, point_polyline_distance, ClosedCurve, Vec2};
pub use cylinder::{
    exactness_defect, loop_action_integral, CylinderLoop, CylinderMap, CylinderPoint, Profile,
    QUADRATURE_TOL,
};
pub use frame::{
    cartesian_to_frame, chi, chi_prime, eta, eta_prime, frame_to_cartesian, AnnulusPoint,
    FramePoint, RHO_MAX, RHO_MIN,
};

/// 2π.
pub const TAU: f64 = 2.0 * core::f64::consts::PI;

/// Default chord bound for curve refinement: 1e-3 of the annulus diameter (10).
pub const DEFAULT_CHORD_BOUND: f64 = 1e-2;
