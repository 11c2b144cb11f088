//! The inductive cover construction and the comparison of two covers.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::maps::{base_id, push_label, BaseDatum, CoverMaps, Label, PointLabels};
use super::model::{PointRef, StratifiedModel};
use super::verify::verify_cover;
use crate::error::CoverError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuildOrder {
    #[default]
    Forward,
    Reverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverConfig {
    /// Upper bound on `r∘²`.
    pub r_max_sq: BigRational,
    /// Smallest admissible `r₋²` for a fresh base.
    pub r_min_sq: BigRational,
    /// Squared collar constant; by default a fifth of the smallest distance
    /// from a boundary point to a point eligible as a base.
    pub rho_sq: Option<BigRational>,
    /// Order in which uncovered points are tried as bases.
    pub order: BuildOrder,
    /// Longest zig-zag searched by `compare_covers`.
    pub zigzag_depth: usize,
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl Default for CoverConfig {
    fn default() -> Self {
        CoverConfig { r_max_sq: frac(1, 4), r_min_sq: frac(1, 10_000), rho_sq: None, order: BuildOrder::Forward, zigzag_depth: 2 }
    }
}

/// `(r∘², r₋²)` for a base at `p`: `r∘ = min(r_max, d(p, ∂)/2)` and `r₋ = r∘/2`.
pub fn base_radii(model: &StratifiedModel, p: PointRef, config: &CoverConfig) -> (BigRational, BigRational) {
    let r_open = match model.boundary_dist_sq(p) {
        Some(d) => (d / frac(4, 1)).min(config.r_max_sq.clone()),
        None => config.r_max_sq.clone(),
    };
    let r_minus = &r_open / frac(4, 1);
    (r_open, r_minus)
}

/// Squared collar constant of a cloud, or `None` if it has no boundary points.
pub fn collar_rho_sq(model: &StratifiedModel, ci: usize, config: &CoverConfig) -> Option<BigRational> {
    let pts = &model.clouds()[ci].points;
    let boundary: Vec<usize> = (0..pts.len()).filter(|&i| pts[i].is_boundary()).collect();
    if boundary.is_empty() {
        return None;
    }
    if let Some(r) = &config.rho_sq {
        return Some(r.clone());
    }
    let open: Vec<usize> = (0..pts.len()).filter(|&i| !pts[i].is_boundary()).collect();
    let eligible: Vec<usize> =
        open.iter().copied().filter(|&i| base_radii(model, (ci, i), config).1 >= config.r_min_sq).collect();
    let candidates = if eligible.is_empty() { &open } else { &eligible };
    candidates
        .iter()
        .flat_map(|&c| boundary.iter().map(move |&b| model.dist_sq((ci, b), (ci, c))))
        .min()
        .map(|d| d / frac(25, 1))
}

/// The collar rule: `d(p′, p) ≤ 2·d(p′, ∂) ≤ ρ/10`, in squares.
pub fn in_collar(model: &StratifiedModel, inner: PointRef, boundary: PointRef, rho_sq: &BigRational) -> bool {
    let Some(db) = model.boundary_dist_sq(inner) else { return false };
    let four_db = frac(4, 1) * db;
    model.dist_sq(inner, boundary) <= four_db && four_db <= rho_sq / frac(100, 1)
}

fn extend_unique(into: &mut Vec<Label>, from: &[Label]) {
    for l in from {
        if !into.contains(l) {
            into.push(l.clone());
        }
    }
}

/// Builds `(ℱ°, ℱ)` triple by triple in the induction order.
pub fn build_cover(model: &StratifiedModel, config: &CoverConfig) -> Result<CoverMaps, CoverError> {
    let clouds = model.clouds();
    let mut labels: Vec<Vec<PointLabels>> = Vec::with_capacity(clouds.len());
    let mut bases: Vec<BaseDatum> = Vec::new();
    let mut rhos = Vec::with_capacity(clouds.len());
    for (ci, cloud) in clouds.iter().enumerate() {
        let n = cloud.points.len();
        let is_boundary: Vec<bool> = cloud.points.iter().map(|p| p.is_boundary()).collect();
        let mut here = vec![PointLabels::default(); n];

        // (i) Boundary law.
        for pi in (0..n).filter(|&i| is_boundary[i]) {
            for (v, f) in model.factor_refs((ci, pi)).into_iter().enumerate() {
                let at = &labels[f.0][f.1];
                here[pi].open.extend(at.open.iter().map(|l| push_label(&cloud.triple, v, l)));
                here[pi].proper.extend(at.proper.iter().map(|l| push_label(&cloud.triple, v, l)));
            }
        }

        // (ii) Collar.
        let rho = collar_rho_sq(model, ci, config);
        if let Some(rho) = &rho {
            let inherited: Vec<PointLabels> = (0..n)
                .into_par_iter()
                .map(|pi| {
                    let mut out = PointLabels::default();
                    if is_boundary[pi] {
                        return out;
                    }
                    for b in (0..n).filter(|&b| is_boundary[b]) {
                        if in_collar(model, (ci, pi), (ci, b), rho) {
                            extend_unique(&mut out.open, &here[b].open);
                            extend_unique(&mut out.proper, &here[b].proper);
                        }
                    }
                    out
                })
                .collect();
            for (pi, l) in inherited.into_iter().enumerate() {
                if !is_boundary[pi] {
                    here[pi] = l;
                }
            }
        }

        // (iii) Fresh bases for the points the collar leaves uncovered.
        let mut order: Vec<usize> = (0..n).filter(|&i| !is_boundary[i] && here[i].open.is_empty()).collect();
        if config.order == BuildOrder::Reverse {
            order.reverse();
        }
        let mut local: Vec<BaseDatum> = Vec::new();
        let covered = |local: &[BaseDatum], pi: usize| {
            local.iter().any(|b| model.dist_sq((ci, pi), b.point) < b.r_minus_sq)
        };
        for &pi in &order {
            if covered(&local, pi) {
                continue;
            }
            let (r_open_sq, r_minus_sq) = base_radii(model, (ci, pi), config);
            if r_minus_sq >= config.r_min_sq && r_minus_sq > BigRational::zero() {
                local.push(BaseDatum { id: base_id(model, (ci, pi)), point: (ci, pi), r_open_sq, r_minus_sq });
            }
        }
        for &pi in &order {
            if !covered(&local, pi) {
                let d = model.boundary_dist_sq((ci, pi)).map(|d| crate::rational::format_big_rational(&d));
                return Err(CoverError::ResolutionTooCoarse(
                    model.point_name((ci, pi)),
                    format!(
                        "outside the collar band and too close to the boundary for a base (d(p, ∂)² = {})",
                        d.unwrap_or_else(|| "∞".into())
                    ),
                ));
            }
        }
        local.sort_by_key(|b| b.point);
        let direct: Vec<(Vec<Label>, Vec<Label>)> = (0..n)
            .into_par_iter()
            .map(|pi| {
                let (mut open, mut proper) = (Vec::new(), Vec::new());
                if is_boundary[pi] {
                    return (open, proper);
                }
                for b in &local {
                    let d = model.dist_sq((ci, pi), b.point);
                    if d < b.r_open_sq {
                        open.push(Label::direct(&b.id));
                    }
                    if d <= b.r_open_sq {
                        proper.push(Label::direct(&b.id));
                    }
                }
                (open, proper)
            })
            .collect();
        for (pi, (open, proper)) in direct.into_iter().enumerate() {
            extend_unique(&mut here[pi].open, &open);
            extend_unique(&mut here[pi].proper, &proper);
        }
        bases.extend(local);
        labels.push(here);
        rhos.push(rho);
    }
    Ok(CoverMaps { bases, rho_sq: rhos, labels })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverRelation {
    Contained,
    Equivalent,
    Incomparable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub relation: CoverRelation,
    /// For `contained`: whether the first cover sits inside the second.
    pub first_in_second: bool,
    pub second_in_first: bool,
    /// The zig-zag that certifies equivalence, as cover names.
    pub zigzag: Vec<String>,
    pub first_valid: bool,
    pub second_valid: bool,
}

/// Relates two covers of the same model.
///
/// Inclusion is pointwise on both maps. Equivalence is certified by a zig-zag
/// through the union or the intersection, which must itself pass
/// `verify_cover`.
pub fn compare_covers(model: &StratifiedModel, a: &CoverMaps, b: &CoverMaps, config: &CoverConfig) -> CompareReport {
    let first_in_second = a.is_contained_in(b);
    let second_in_first = b.is_contained_in(a);
    let first_valid = verify_cover(model, a).passed;
    let second_valid = verify_cover(model, b).passed;
    let mut report = CompareReport {
        relation: CoverRelation::Incomparable,
        first_in_second,
        second_in_first,
        zigzag: Vec::new(),
        first_valid,
        second_valid,
    };
    if first_in_second && second_in_first {
        report.relation = CoverRelation::Equivalent;
        report.zigzag = vec!["A".into(), "B".into()];
    } else if first_in_second || second_in_first {
        report.relation = CoverRelation::Contained;
        report.zigzag = if first_in_second { vec!["A ⊆ B".into()] } else { vec!["B ⊆ A".into()] };
    } else if config.zigzag_depth >= 2 && first_valid && second_valid {
        if verify_cover(model, &a.union(b)).passed {
            report.relation = CoverRelation::Equivalent;
            report.zigzag = vec!["A ⊆ A∪B".into(), "A∪B ⊇ B".into()];
        } else if verify_cover(model, &a.intersection(b)).passed {
            report.relation = CoverRelation::Equivalent;
            report.zigzag = vec!["A ⊇ A∩B".into(), "A∩B ⊆ B".into()];
        }
    }
    report
}

/// Base ids of a cover, for reporting.
pub fn base_ids(cm: &CoverMaps) -> BTreeSet<String> {
    cm.bases.iter().map(|b| b.id.clone()).collect()
}
