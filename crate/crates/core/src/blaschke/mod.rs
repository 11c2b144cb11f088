//! Finite Blaschke products as a numerical model of holomorphic disks with
//! boundary on the circle: evaluation, Maslov index by winding, the moduli
//! dimension count, fiber products and bubbling.

mod degenerate;
mod dimension;
mod fiber;
mod map;

pub use degenerate::{
    degenerating_map, degeneration_path, limit_map, DegenerationReport, DegenerationStep, SPLIT_TOL, TRAJECTORY,
};
pub use dimension::{automorphism_rank, is_stable, moduli_dim_check, DimReport};
pub use fiber::{
    solve_fiber_product, symbolic_fiber_dim, Family, FiberReport, MarkedConfig, SeedRecord, MAX_RADIUS, RESIDUAL_TOL,
};
pub use map::{
    arg_change, evaluate, maslov_via_winding, mobius_defect, winding, BlaschkeMap, Mobius, CIRCLE_TOL, WINDING_TOL,
    ZERO_MARGIN,
};
