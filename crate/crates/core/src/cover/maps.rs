//! Quasi-component labels and the pair of choice maps.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::model::{PointRef, StratifiedModel};
use crate::error::CoverError;
use crate::monoid::Triple;
use crate::rational::{format_big_rational, parse_big_rational};

/// One step of a path descriptor: entering vertex `vertex` of a tree at `triple`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hop {
    pub triple: Triple,
    pub vertex: usize,
}

/// `(ξ, 𝔭)`: the point is implicit in where the label is stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label {
    pub xi: Vec<Hop>,
    pub base: String,
}

impl Label {
    pub fn direct(base: &str) -> Self {
        Label { xi: Vec::new(), base: base.to_string() }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.xi {
            write!(f, "{}/{} > ", h.triple, h.vertex)?;
        }
        write!(f, "{}", self.base)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuasiComponent {
    pub point: PointRef,
    pub label: Label,
}

/// `𝓘_{p,v}`: carries a quasi-component at the factor point of `v` to `p`.
pub fn pushforward(
    model: &StratifiedModel,
    qc: &QuasiComponent,
    p: PointRef,
    v: usize,
) -> Result<QuasiComponent, CoverError> {
    let point = model.point(p);
    let bad = || CoverError::BadVertex { point: model.point_name(p), vertex: v };
    if !point.is_boundary() {
        return Err(bad());
    }
    let factors = model.factor_refs(p);
    let &fv = factors.get(v).ok_or_else(bad)?;
    if fv != qc.point {
        return Err(CoverError::BadPoint(
            model.point_name(p),
            format!("vertex {v} has factor {}, not {}", model.point_name(fv), model.point_name(qc.point)),
        ));
    }
    Ok(QuasiComponent { point: p, label: push_label(&model.clouds()[p.0].triple, v, &qc.label) })
}

pub(crate) fn push_label(triple: &Triple, v: usize, l: &Label) -> Label {
    let mut xi = Vec::with_capacity(l.xi.len() + 1);
    xi.push(Hop { triple: triple.clone(), vertex: v });
    xi.extend(l.xi.iter().cloned());
    Label { xi, base: l.base.clone() }
}

/// `𝔭`: a base point of an open stratum with the radii of `K∘ ⊃ K₋`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseDatum {
    pub id: String,
    pub point: PointRef,
    pub r_open_sq: BigRational,
    pub r_minus_sq: BigRational,
}

pub fn base_id(model: &StratifiedModel, p: PointRef) -> String {
    model.point_name(p)
}

/// Label lists at one point: `ℱ°(p)` and `ℱ(p)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointLabels {
    pub open: Vec<Label>,
    pub proper: Vec<Label>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverMaps {
    pub bases: Vec<BaseDatum>,
    /// Squared collar constant per cloud; `None` where the cloud has no boundary.
    pub rho_sq: Vec<Option<BigRational>>,
    pub labels: Vec<Vec<PointLabels>>,
}

impl CoverMaps {
    pub fn at(&self, r: PointRef) -> &PointLabels {
        &self.labels[r.0][r.1]
    }

    pub fn base(&self, id: &str) -> Option<&BaseDatum> {
        self.bases.iter().find(|b| b.id == id)
    }

    pub fn num_labels(&self) -> usize {
        self.labels.iter().flatten().map(|l| l.proper.len()).sum()
    }

    fn combine(&self, other: &CoverMaps, keep: impl Fn(bool, bool) -> bool) -> CoverMaps {
        let ids_a: BTreeSet<&str> = self.bases.iter().map(|b| b.id.as_str()).collect();
        let ids_b: BTreeSet<&str> = other.bases.iter().map(|b| b.id.as_str()).collect();
        let mut bases: Vec<BaseDatum> = self
            .bases
            .iter()
            .chain(other.bases.iter().filter(|b| !ids_a.contains(b.id.as_str())))
            .filter(|b| keep(ids_a.contains(b.id.as_str()), ids_b.contains(b.id.as_str())))
            .cloned()
            .collect();
        bases.sort_by(|a, b| a.point.cmp(&b.point));
        let merge = |x: &[Label], y: &[Label]| -> Vec<Label> {
            let sx: BTreeSet<&Label> = x.iter().collect();
            let sy: BTreeSet<&Label> = y.iter().collect();
            sx.union(&sy).filter(|l| keep(sx.contains(*l), sy.contains(*l))).map(|l| (*l).clone()).collect()
        };
        let labels = self
            .labels
            .iter()
            .zip(&other.labels)
            .map(|(ca, cb)| {
                ca.iter()
                    .zip(cb)
                    .map(|(a, b)| PointLabels { open: merge(&a.open, &b.open), proper: merge(&a.proper, &b.proper) })
                    .collect()
            })
            .collect();
        CoverMaps { bases, rho_sq: self.rho_sq.clone(), labels }
    }

    /// Pointwise union of label sets.
    pub fn union(&self, other: &CoverMaps) -> CoverMaps {
        self.combine(other, |a, b| a || b)
    }

    /// Pointwise intersection of label sets.
    pub fn intersection(&self, other: &CoverMaps) -> CoverMaps {
        self.combine(other, |a, b| a && b)
    }

    /// Pointwise inclusion of both `ℱ°` and `ℱ`.
    pub fn is_contained_in(&self, other: &CoverMaps) -> bool {
        let sub = |x: &[Label], y: &[Label]| {
            let sy: BTreeSet<&Label> = y.iter().collect();
            x.iter().all(|l| sy.contains(l))
        };
        self.labels.len() == other.labels.len()
            && self.labels.iter().zip(&other.labels).all(|(ca, cb)| {
                ca.len() == cb.len() && ca.iter().zip(cb).all(|(a, b)| sub(&a.open, &b.open) && sub(&a.proper, &b.proper))
            })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverFile {
    pub bases: Vec<BaseRecord>,
    pub clouds: Vec<CloudCoverRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseRecord {
    pub id: String,
    pub triple: Triple,
    pub point: String,
    pub r_open_sq: String,
    pub r_minus_sq: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CloudCoverRecord {
    pub triple: Triple,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_sq: Option<String>,
    pub points: Vec<PointCoverRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointCoverRecord {
    pub point: String,
    pub open: Vec<Label>,
    pub proper: Vec<Label>,
}

impl CoverMaps {
    pub fn to_file(&self, model: &StratifiedModel) -> CoverFile {
        let clouds = model.clouds();
        CoverFile {
            bases: self
                .bases
                .iter()
                .map(|b| BaseRecord {
                    id: b.id.clone(),
                    triple: clouds[b.point.0].triple.clone(),
                    point: model.point(b.point).name.clone(),
                    r_open_sq: format_big_rational(&b.r_open_sq),
                    r_minus_sq: format_big_rational(&b.r_minus_sq),
                })
                .collect(),
            clouds: clouds
                .iter()
                .enumerate()
                .map(|(ci, c)| CloudCoverRecord {
                    triple: c.triple.clone(),
                    rho_sq: self.rho_sq[ci].as_ref().map(format_big_rational),
                    points: c
                        .points
                        .iter()
                        .zip(&self.labels[ci])
                        .map(|(p, l)| PointCoverRecord {
                            point: p.name.clone(),
                            open: l.open.clone(),
                            proper: l.proper.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_file(model: &StratifiedModel, file: &CoverFile) -> Result<Self, CoverError> {
        let parse = |e: String| CoverError::Parse(e);
        let locate = |t: &Triple, name: &str| -> Result<PointRef, CoverError> {
            let ci = model.cloud_index(t).ok_or_else(|| parse(format!("triple {t} not in the model")))?;
            let pi = model.clouds()[ci]
                .points
                .iter()
                .position(|p| p.name == name)
                .ok_or_else(|| parse(format!("point {name} not in {t}")))?;
            Ok((ci, pi))
        };
        let mut bases = Vec::new();
        for b in &file.bases {
            bases.push(BaseDatum {
                id: b.id.clone(),
                point: locate(&b.triple, &b.point)?,
                r_open_sq: parse_big_rational(&b.r_open_sq).map_err(parse)?,
                r_minus_sq: parse_big_rational(&b.r_minus_sq).map_err(parse)?,
            });
        }
        let n = model.clouds().len();
        let mut rho_sq = vec![None; n];
        let mut labels: Vec<Vec<PointLabels>> =
            model.clouds().iter().map(|c| vec![PointLabels::default(); c.points.len()]).collect();
        for rec in &file.clouds {
            let ci = model.cloud_index(&rec.triple).ok_or_else(|| parse(format!("triple {} not in the model", rec.triple)))?;
            rho_sq[ci] = rec.rho_sq.as_deref().map(parse_big_rational).transpose().map_err(parse)?;
            for p in &rec.points {
                let (_, pi) = locate(&rec.triple, &p.point)?;
                labels[ci][pi] = PointLabels { open: p.open.clone(), proper: p.proper.clone() };
            }
        }
        Ok(CoverMaps { bases, rho_sq, labels })
    }

    pub fn to_json(&self, model: &StratifiedModel) -> String {
        serde_json::to_string_pretty(&self.to_file(model)).expect("cover serializes")
    }

    pub fn from_json(model: &StratifiedModel, text: &str) -> Result<Self, CoverError> {
        let file: CoverFile = serde_json::from_str(text).map_err(|e| CoverError::Parse(e.to_string()))?;
        Self::from_file(model, &file)
    }
}
