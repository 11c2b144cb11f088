//! Bubbling: `d₂` zeros running to a boundary point `w`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::map::{arg_change, BlaschkeMap};
use crate::corner::{Calculus, KIndex};
use crate::error::BlaschkeError;
use crate::novikov::fixtures::disk_monoid;
use crate::tree::BoundarySplit;

/// Distances `1 − |a|` along the path.
pub const TRAJECTORY: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
/// Tolerance on the split windings at the end of the path.
pub const SPLIT_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerationStep {
    pub eps: f64,
    /// Half-width of the arc around `w` left out of the comparison.
    pub delta: f64,
    /// Winding of the main component: `u_ε` off the arc, the limit on it.
    pub main_winding: f64,
    /// The rest of the winding, carried by the arc.
    pub bubble_winding: f64,
    pub main_error: f64,
    pub bubble_error: f64,
    /// Largest `|u_ε − u_∞|` off the arc.
    pub sup_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerationReport {
    pub d: u32,
    pub split: (u32, u32),
    /// Angle of the bubbling point.
    pub w: f64,
    pub steps: Vec<DegenerationStep>,
    /// Canonical form of the boundary stratum the path limits to.
    pub tree: String,
    pub in_boundary: bool,
    pub passed: bool,
}

fn main_zeros(d1: u32, w: f64) -> Vec<Complex64> {
    (0..d1).map(|j| Complex64::from_polar(0.4, w + PI + 1.3 * j as f64)).collect()
}

/// `u_ε`: the fixed main zeros and `d₂` zeros at `(1 − ε) w`.
pub fn degenerating_map(d1: u32, d2: u32, w: f64, eps: f64) -> Result<BlaschkeMap, BlaschkeError> {
    let mut zeros = main_zeros(d1, w);
    zeros.extend(std::iter::repeat(Complex64::from_polar(1.0 - eps, w)).take(d2 as usize));
    BlaschkeMap::new(zeros, 0.0)
}

/// The limit away from `w`: each escaping factor tends to `−w`.
pub fn limit_map(d1: u32, d2: u32, w: f64) -> BlaschkeMap {
    BlaschkeMap::new(main_zeros(d1, w), d2 as f64 * (w + PI)).expect("main zeros are inside")
}

/// Follows `u_ε` along [`TRAJECTORY`] and checks that the winding splits as
/// `d₁ + d₂` with the limit stratum on the boundary.
pub fn degeneration_path(d: u32, split: (u32, u32), w: f64) -> Result<DegenerationReport, BlaschkeError> {
    let (d1, d2) = split;
    if d1 == 0 || d2 == 0 || d1 + d2 != d {
        return Err(BlaschkeError::BadSplit(d1, d2));
    }
    let limit = limit_map(d1, d2, w);
    let mut steps = Vec::new();
    for &eps in &TRAJECTORY {
        let u = degenerating_map(d1, d2, w, eps)?;
        let delta = eps.cbrt();
        let (lo, hi) = (w + delta, w + TAU - delta);
        let off = arg_change(&u, lo, hi);
        let on_limit = arg_change(&limit, hi, hi + 2.0 * delta);
        let main_winding = (off + on_limit) / TAU;
        let bubble_winding = (arg_change(&u, hi, hi + 2.0 * delta) - on_limit) / TAU;
        let sup_distance = (0..=512)
            .map(|j| {
                let z = Complex64::from_polar(1.0, lo + (hi - lo) * j as f64 / 512.0);
                (u.eval(z) - limit.eval(z)).norm()
            })
            .fold(0.0, f64::max);
        steps.push(DegenerationStep {
            eps,
            delta,
            main_winding,
            bubble_winding,
            main_error: (main_winding - d1 as f64).abs(),
            bubble_error: (bubble_winding - d2 as f64).abs(),
            sup_distance,
        });
    }
    let m = disk_monoid();
    let boundary_split = BoundarySplit {
        beta1: m.multiple(0, d1),
        beta2: m.multiple(0, d2),
        k1: 1,
        k2: 0,
        i: 1,
        l1: Default::default(),
        l2: Default::default(),
    };
    let tree = boundary_split.tree().canonicalize().0;
    let in_boundary = Calculus::new(&m)
        .normalized_boundary(&KIndex::new(0, 0, m.multiple(0, d)))
        .iter()
        .any(|t| t.descriptor.tree == tree);
    let last = steps.last().expect("nonempty trajectory");
    let passed = in_boundary && last.main_error < SPLIT_TOL && last.bubble_error < SPLIT_TOL;
    Ok(DegenerationReport { d, split, w, steps, tree: tree.canonical_form(), in_boundary, passed })
}
