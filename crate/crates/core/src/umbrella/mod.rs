//! Exact verification of the Whitney-umbrella normal form, its embedding
//! lift, the singularity-detecting normal section, and the quaternionic
//! framing of the lift's normal bundle.
//!
//! All rank, projection, and zero-set decisions run in exact rational
//! arithmetic (fraction-free elimination and Gram-matrix solves); floating
//! point appears only in the normalized frame vectors, where square roots
//! are unavoidable, and never feeds back into a decision.

mod dual;
mod frame;
mod germ;
mod linalg;
mod section;
mod verify;

pub use dual::Dual;
pub use frame::{framing_frame, FrameError, NormalFrame, DEFAULT_FRAME_TOLERANCE};
pub use germ::{
    image_norm_squared, invert_lift, lift_coords, lift_jacobian, lift_map, map_jacobian,
    umbrella_map, Germ, SourcePoint, TargetPoint7, TargetPoint8,
};
pub use linalg::{
    dot, is_zero_vector, kernel_vector, rank_bigint, rank_i128, rational_rank, solve, ExactScalar,
};
pub use section::{
    jacobian_rank, jacobian_rank_for, kernel_derivative_of_s1, kernel_direction_at_origin,
    normal_projection, s1_vanishes_for, section_s1, section_s1_for, sigma2_empty_check,
    sigma2_empty_check_for,
};
pub use verify::{
    run_verification, GridSummary, SphereSummary, UmbrellaConfig, UmbrellaReport,
    DEFAULT_GRID_HEIGHT,
};
