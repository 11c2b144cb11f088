//! Finite stratified models: one metric point cloud per moduli index.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::CoverError;
use crate::monoid::{triple_cmp, triple_lt, ClassMonoid, DefaultActivity, MonoidFile, Triple};
use crate::rational::{format_big_rational, parse_big_rational};
use crate::tree::{predecessor_triples, DecoratedTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelPoint {
    pub name: String,
    pub coords: Vec<BigRational>,
    pub tree: DecoratedTree,
    /// For a nontrivial tree, the factor point (index into the cloud of the
    /// vertex triple) of each interior vertex, in preorder.
    pub factors: Vec<usize>,
}

impl ModelPoint {
    pub fn is_boundary(&self) -> bool {
        self.tree.interior_vertices().len() > 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cloud {
    pub triple: Triple,
    pub points: Vec<ModelPoint>,
}

/// Index of a point: `(cloud, point)`.
pub type PointRef = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratifiedModel {
    monoid: ClassMonoid,
    /// Sorted by the induction order.
    clouds: Vec<Cloud>,
    index: BTreeMap<Triple, usize>,
    boundary_dist: Vec<Vec<Option<BigRational>>>,
}

pub fn dist_sq(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| {
        let d = x - y;
        acc + &d * &d
    })
}

impl StratifiedModel {
    /// Validates and sorts the clouds.
    pub fn new(monoid: ClassMonoid, mut clouds: Vec<Cloud>) -> Result<Self, CoverError> {
        clouds.sort_by(|a, b| triple_cmp(&a.triple, &b.triple, &monoid));
        let mut index = BTreeMap::new();
        for (i, c) in clouds.iter().enumerate() {
            if index.insert(c.triple.clone(), i).is_some() {
                return Err(CoverError::Parse(format!("triple {} listed twice", c.triple)));
            }
        }
        let boundary_dist = clouds
            .iter()
            .map(|c| {
                c.points
                    .iter()
                    .map(|p| c.points.iter().filter(|q| q.is_boundary()).map(|q| dist_sq(&q.coords, &p.coords)).min())
                    .collect()
            })
            .collect();
        let model = StratifiedModel { monoid, clouds, index, boundary_dist };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<(), CoverError> {
        let triples: BTreeSet<&Triple> = self.index.keys().collect();
        for c in &self.clouds {
            for p in predecessor_triples(&c.triple, &self.monoid, &DefaultActivity) {
                if !triples.contains(&p) {
                    return Err(CoverError::NotPredecessorClosed(c.triple.to_string(), p.to_string()));
                }
            }
        }
        for (ci, c) in self.clouds.iter().enumerate() {
            let dim = c.points.first().map(|p| p.coords.len());
            let mut names = BTreeSet::new();
            for (pi, p) in c.points.iter().enumerate() {
                let here = self.point_name((ci, pi));
                let bad = |msg: String| CoverError::BadPoint(here.clone(), msg);
                if !names.insert(&p.name) {
                    return Err(bad("duplicate name".into()));
                }
                if Some(p.coords.len()) != dim {
                    return Err(bad("coordinate dimension differs within the cloud".into()));
                }
                p.tree.validate(&self.monoid).map_err(|e| bad(e.to_string()))?;
                if p.tree.triple() != c.triple {
                    return Err(bad(format!("tree has index {}", p.tree.triple())));
                }
                let verts = p.tree.interior_vertices();
                if !p.is_boundary() {
                    if !p.factors.is_empty() {
                        return Err(bad("open-stratum point with factors".into()));
                    }
                    continue;
                }
                if p.factors.len() != verts.len() {
                    return Err(bad(format!("{} factors for {} vertices", p.factors.len(), verts.len())));
                }
                for (&v, &f) in verts.iter().zip(&p.factors) {
                    let t = p.tree.vertex_triple(v);
                    if !triple_lt(&t, &c.triple, &self.monoid) {
                        return Err(bad(format!("factor triple {t} is not below {}", c.triple)));
                    }
                    let Some(&fc) = self.index.get(&t) else {
                        return Err(bad(format!("factor triple {t} has no cloud")));
                    };
                    match self.clouds[fc].points.get(f) {
                        Some(q) if !q.is_boundary() => {}
                        Some(_) => return Err(bad(format!("factor {f} of {t} is not in the open stratum"))),
                        None => return Err(bad(format!("factor {f} missing from {t}"))),
                    }
                }
            }
            // Product points with the same tree are at least as far apart as their factors.
            for (i, p) in c.points.iter().enumerate().filter(|(_, p)| p.is_boundary()) {
                for q in c.points[i + 1..].iter().filter(|q| q.is_boundary() && q.tree == p.tree) {
                    let d = dist_sq(&p.coords, &q.coords);
                    for (j, v) in p.tree.interior_vertices().into_iter().enumerate() {
                        let fc = &self.clouds[self.index[&p.tree.vertex_triple(v)]];
                        let dv = dist_sq(&fc.points[p.factors[j]].coords, &fc.points[q.factors[j]].coords);
                        if dv > d {
                            return Err(CoverError::BadPoint(
                                self.point_name((ci, i)),
                                format!("closer to {} than their factors at vertex {j}", q.name),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn monoid(&self) -> &ClassMonoid {
        &self.monoid
    }

    pub fn clouds(&self) -> &[Cloud] {
        &self.clouds
    }

    pub fn cloud_index(&self, t: &Triple) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn point(&self, r: PointRef) -> &ModelPoint {
        &self.clouds[r.0].points[r.1]
    }

    pub fn point_name(&self, r: PointRef) -> String {
        format!("{}:{}", self.clouds[r.0].triple, self.clouds[r.0].points[r.1].name)
    }

    pub fn num_points(&self) -> usize {
        self.clouds.iter().map(|c| c.points.len()).sum()
    }

    /// Factor points of a boundary point, one per interior vertex.
    pub fn factor_refs(&self, r: PointRef) -> Vec<PointRef> {
        let p = self.point(r);
        p.tree
            .interior_vertices()
            .into_iter()
            .zip(&p.factors)
            .map(|(v, &f)| (self.index[&p.tree.vertex_triple(v)], f))
            .collect()
    }

    pub fn dist_sq(&self, a: PointRef, b: PointRef) -> BigRational {
        debug_assert_eq!(a.0, b.0);
        dist_sq(&self.point(a).coords, &self.point(b).coords)
    }

    /// Squared distance to the nearest boundary point of the same cloud.
    pub fn boundary_dist_sq(&self, r: PointRef) -> Option<BigRational> {
        self.boundary_dist[r.0][r.1].clone()
    }

    /// Longest strictly increasing chain of model triples.
    pub fn longest_chain(&self) -> usize {
        let mut best = vec![1usize; self.clouds.len()];
        for i in 0..self.clouds.len() {
            for j in 0..i {
                if triple_lt(&self.clouds[j].triple, &self.clouds[i].triple, &self.monoid) {
                    best[i] = best[i].max(best[j] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub monoid: MonoidFile,
    pub triples: Vec<CloudRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CloudRecord {
    pub k: usize,
    pub ell: usize,
    pub beta: Vec<u32>,
    pub points: Vec<PointRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointRecord {
    pub name: String,
    pub coords: Vec<String>,
    pub tree: String,
    /// Factor point names, one per interior vertex in preorder.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<String>,
}

impl StratifiedModel {
    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            monoid: self.monoid.to_file(),
            triples: self
                .clouds
                .iter()
                .map(|c| CloudRecord {
                    k: c.triple.k,
                    ell: c.triple.ell,
                    beta: c.triple.beta.exponents().to_vec(),
                    points: c
                        .points
                        .iter()
                        .map(|p| PointRecord {
                            name: p.name.clone(),
                            coords: p.coords.iter().map(format_big_rational).collect(),
                            tree: p.tree.canonical_form(),
                            factors: p
                                .tree
                                .interior_vertices()
                                .into_iter()
                                .zip(&p.factors)
                                .map(|(v, &f)| {
                                    self.clouds[self.index[&p.tree.vertex_triple(v)]].points[f].name.clone()
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &ModelFile) -> Result<Self, CoverError> {
        let parse = |e: String| CoverError::Parse(e);
        let monoid = ClassMonoid::from_file(&file.monoid).map_err(|e| parse(e.to_string()))?;
        let mut triples = Vec::new();
        for rec in &file.triples {
            let beta = monoid.element(rec.beta.clone()).map_err(|e| parse(e.to_string()))?;
            triples.push(Triple::new(rec.k, rec.ell, beta));
        }
        let names: BTreeMap<&Triple, BTreeMap<&str, usize>> = triples
            .iter()
            .zip(&file.triples)
            .map(|(t, rec)| (t, rec.points.iter().enumerate().map(|(i, p)| (p.name.as_str(), i)).collect()))
            .collect();
        let mut clouds = Vec::new();
        for (t, rec) in triples.iter().zip(&file.triples) {
            let mut points = Vec::new();
            for p in &rec.points {
                let tree = DecoratedTree::parse_canonical(&p.tree).map_err(|e| parse(format!("{}: {e}", p.name)))?;
                let coords =
                    p.coords.iter().map(|s| parse_big_rational(s)).collect::<Result<Vec<_>, _>>().map_err(parse)?;
                let verts = tree.interior_vertices();
                if !p.factors.is_empty() && p.factors.len() != verts.len() {
                    return Err(parse(format!("{}: {} factors for {} vertices", p.name, p.factors.len(), verts.len())));
                }
                let mut factors = Vec::new();
                for (&v, f) in verts.iter().zip(&p.factors) {
                    let vt = tree.vertex_triple(v);
                    let idx = names
                        .get(&vt)
                        .and_then(|m| m.get(f.as_str()))
                        .ok_or_else(|| parse(format!("{}: unknown factor {f} in {vt}", p.name)))?;
                    factors.push(*idx);
                }
                points.push(ModelPoint { name: p.name.clone(), coords, tree, factors });
            }
            clouds.push(Cloud { triple: t.clone(), points });
        }
        StratifiedModel::new(monoid, clouds)
    }

    pub fn from_json(text: &str) -> Result<Self, CoverError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| CoverError::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model serializes")
    }
}
