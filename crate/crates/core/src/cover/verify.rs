//! The four clauses a cover must satisfy.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::build::in_collar;
use super::maps::{base_id, push_label, CoverMaps, Label};
use super::model::{PointRef, StratifiedModel};
use crate::monoid::triple_lt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseReport {
    pub clause: String,
    pub name: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub points: usize,
    pub bases: usize,
    pub labels: usize,
    pub max_labels_per_point: usize,
    pub label_bound: usize,
    pub clauses: Vec<ClauseReport>,
    pub passed: bool,
}

fn set(v: &[Label]) -> BTreeSet<&Label> {
    v.iter().collect()
}

fn duplicates(v: &[Label]) -> Vec<&Label> {
    let mut seen = BTreeSet::new();
    v.iter().filter(|l| !seen.insert(*l)).collect()
}

/// Checks (A) openness and properness, (B) the boundary law, (C) distinct
/// labels and (D) coverage.
pub fn verify_cover(model: &StratifiedModel, cm: &CoverMaps) -> CoverReport {
    let clouds = model.clouds();
    let points: Vec<PointRef> =
        clouds.iter().enumerate().flat_map(|(ci, c)| (0..c.points.len()).map(move |pi| (ci, pi))).collect();
    let shape_ok = cm.labels.len() == clouds.len()
        && cm.rho_sq.len() == clouds.len()
        && cm.labels.iter().zip(clouds).all(|(l, c)| l.len() == c.points.len());
    if !shape_ok {
        let clause = |c: &str, n: &str| ClauseReport {
            clause: c.into(),
            name: n.into(),
            passed: false,
            failures: vec!["cover does not match the model's clouds".into()],
        };
        return CoverReport {
            points: points.len(),
            bases: cm.bases.len(),
            labels: 0,
            max_labels_per_point: 0,
            label_bound: 0,
            clauses: vec![clause("A", NAMES[0]), clause("B", NAMES[1]), clause("C", NAMES[2]), clause("D", NAMES[3])],
            passed: false,
        };
    }
    let name = |r: PointRef| model.point_name(r);
    let bases: BTreeMap<&str, _> = cm.bases.iter().map(|b| (b.id.as_str(), b)).collect();

    // Hops are (triple, vertex) pairs; paths are no longer than the longest chain.
    let chain = model.longest_chain();
    let hops: usize = clouds
        .iter()
        .map(|c| c.points.iter().map(|p| p.tree.interior_vertices().len()).max().unwrap_or(0))
        .filter(|&v| v > 1)
        .sum();
    let paths: usize = (0..chain).map(|j| hops.saturating_pow(j as u32)).fold(0usize, usize::saturating_add);
    let label_bound = cm.bases.len().saturating_mul(paths);

    // (A)
    let mut a: Vec<String> = Vec::new();
    let mut ids = BTreeSet::new();
    for b in &cm.bases {
        if !ids.insert(&b.id) {
            a.push(format!("base {} listed twice", b.id));
        }
        if b.point.0 >= clouds.len() || b.point.1 >= clouds[b.point.0].points.len() {
            a.push(format!("base {} refers to a missing point", b.id));
            continue;
        }
        if model.point(b.point).is_boundary() {
            a.push(format!("base {} sits on a boundary point", b.id));
        }
        if b.id != base_id(model, b.point) {
            a.push(format!("base {} is named after another point", b.id));
        }
        if !(b.r_minus_sq > num_traits::Zero::zero() && b.r_minus_sq < b.r_open_sq) {
            a.push(format!("base {} needs 0 < r₋ < r∘", b.id));
        }
        let cloud = &clouds[b.point.0];
        for (qi, q) in cloud.points.iter().enumerate() {
            if q.is_boundary() && model.dist_sq(b.point, (b.point.0, qi)) <= b.r_open_sq {
                a.push(format!("K({}) contains boundary point {}", b.id, name((b.point.0, qi))));
            }
        }
    }
    let per_point: Vec<Vec<String>> = points
        .par_iter()
        .map(|&r| {
            let mut out = Vec::new();
            let here = cm.at(r);
            let triple = &clouds[r.0].triple;
            let boundary = model.point(r).is_boundary();
            let proper = set(&here.proper);
            for l in here.open.iter().filter(|l| !proper.contains(l)) {
                out.push(format!("{}: {l} is in ℱ° but not in ℱ", name(r)));
            }
            if here.proper.len() > label_bound {
                out.push(format!("{}: {} labels exceed the bound {label_bound}", name(r), here.proper.len()));
            }
            for l in set(&here.proper) {
                let Some(b) = bases.get(l.base.as_str()) else {
                    out.push(format!("{}: {l} refers to an unknown base", name(r)));
                    continue;
                };
                if l.xi.len() >= chain.max(1) {
                    out.push(format!("{}: {l} has a path longer than the longest chain", name(r)));
                }
                if l.xi.is_empty() {
                    if b.point.0 != r.0 || boundary {
                        out.push(format!("{}: direct label {l} away from its open stratum", name(r)));
                    }
                    continue;
                }
                let mut ok = l.xi[0].triple == *triple;
                for w in l.xi.windows(2) {
                    ok &= triple_lt(&w[1].triple, &w[0].triple, model.monoid());
                }
                let last = &l.xi[l.xi.len() - 1].triple;
                ok &= triple_lt(&clouds[b.point.0].triple, last, model.monoid());
                if !ok {
                    out.push(format!("{}: path of {l} does not descend in the triple order", name(r)));
                }
            }
            if boundary {
                return out;
            }
            // Direct labels are exactly the traces of Int K∘ and K.
            for b in cm.bases.iter().filter(|b| b.point.0 == r.0) {
                let d = model.dist_sq(r, b.point);
                let l = Label::direct(&b.id);
                if (d < b.r_open_sq) != here.open.contains(&l) {
                    out.push(format!("{}: ℱ° disagrees with Int K∘({})", name(r), b.id));
                }
                if (d <= b.r_open_sq) != here.proper.contains(&l) {
                    out.push(format!("{}: ℱ disagrees with K({})", name(r), b.id));
                }
            }
            // Inherited labels are exactly those of boundary points whose collar band holds r.
            let band: Vec<PointRef> = match &cm.rho_sq[r.0] {
                Some(rho) => (0..clouds[r.0].points.len())
                    .map(|qi| (r.0, qi))
                    .filter(|&q| model.point(q).is_boundary() && in_collar(model, r, q, rho))
                    .collect(),
                None => Vec::new(),
            };
            for (map, pick) in [("ℱ°", 0usize), ("ℱ", 1)] {
                let get = |p: PointRef| if pick == 0 { &cm.at(p).open } else { &cm.at(p).proper };
                let expected: BTreeSet<&Label> = band.iter().flat_map(|&q| get(q).iter()).collect();
                let found: BTreeSet<&Label> = get(r).iter().filter(|l| !l.xi.is_empty()).collect();
                if expected != found {
                    out.push(format!("{}: inherited labels in {map} do not match the collar rule", name(r)));
                }
            }
            out
        })
        .collect();
    a.extend(per_point.into_iter().flatten());

    // (B)
    let b_fail: Vec<String> = points
        .par_iter()
        .filter(|&&r| model.point(r).is_boundary())
        .flat_map_iter(|&r| {
            let mut out = Vec::new();
            let triple = &clouds[r.0].triple;
            for (map, pick) in [("ℱ°", 0usize), ("ℱ", 1)] {
                let get = |p: PointRef| if pick == 0 { &cm.at(p).open } else { &cm.at(p).proper };
                let expected: Vec<Label> = model
                    .factor_refs(r)
                    .into_iter()
                    .enumerate()
                    .flat_map(|(v, f)| get(f).iter().map(move |l| push_label(triple, v, l)))
                    .collect();
                if !duplicates(&expected).is_empty() {
                    out.push(format!("{}: pushforwards into {map} are not disjoint", name(r)));
                }
                let have = set(get(r));
                let want = set(&expected);
                for l in want.difference(&have) {
                    out.push(format!("{}: {map} lacks pushforward {l}", name(r)));
                }
                for l in have.difference(&want) {
                    out.push(format!("{}: {map} has {l}, which is not a pushforward", name(r)));
                }
            }
            out
        })
        .collect();

    // (C)
    let c_fail: Vec<String> = points
        .iter()
        .flat_map(|&r| {
            let here = cm.at(r);
            duplicates(&here.open)
                .into_iter()
                .map(move |l| format!("{}: {l} repeated in ℱ°", name(r)))
                .chain(duplicates(&here.proper).into_iter().map(move |l| format!("{}: {l} repeated in ℱ", name(r))))
                .collect::<Vec<_>>()
        })
        .collect();

    // (D)
    let d_fail: Vec<String> =
        points.iter().filter(|&&r| cm.at(r).open.is_empty()).map(|&r| format!("{}: ℱ° is empty", name(r))).collect();

    let clauses: Vec<ClauseReport> = [("A", a), ("B", b_fail), ("C", c_fail), ("D", d_fail)]
        .into_iter()
        .zip(NAMES)
        .map(|((c, failures), n)| ClauseReport { clause: c.into(), name: n.into(), passed: failures.is_empty(), failures })
        .collect();
    CoverReport {
        points: points.len(),
        bases: cm.bases.len(),
        labels: cm.num_labels(),
        max_labels_per_point: points.iter().map(|&r| cm.at(r).proper.len()).max().unwrap_or(0),
        label_bound,
        passed: clauses.iter().all(|c| c.passed),
        clauses,
    }
}

const NAMES: [&str; 4] = ["open and proper", "boundary law", "direct sum", "coverage"];
