//! Iterated corners and their multiplicities.
//!
//! A corner of a corner is enumerated as the product structure dictates: take
//! a stratum `D₁` of total codimension `m₁`, then a stratum of total
//! codimension `m₂` in the product of its vertex factors (and of `P`, if `D₁`
//! lies over all of `P`). Each vertex factor `v` contributes a tree
//! `S_v ∈ 𝒢(k_v+1, ℓ_v, β_v)` that is grafted in place of `v`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Calculus, DescriptorKey, IndexRecord, KIndex, ParamFace, StratumDescriptor};
use crate::tree::{ChildSpec, DecoratedTree, NodeSpec, VertexId};

/// Mirrors a [`NodeSpec`], recording for each interior node the vertex of `D₁` it refines.
struct Origins {
    origin: VertexId,
    children: Vec<Option<Origins>>,
}

type Filler = (ChildSpec, Option<Origins>);

/// Copies `s` with marks relabeled, replacing its legs in order by `fillers`.
fn fill(
    s: &NodeSpec,
    origin: VertexId,
    labels: &[usize],
    fillers: &mut impl Iterator<Item = Filler>,
) -> (NodeSpec, Origins) {
    let mut children = Vec::with_capacity(s.children.len());
    let mut tags = Vec::with_capacity(s.children.len());
    for c in &s.children {
        let (spec, tag) = match c {
            ChildSpec::Leg => fillers.next().expect("one filler per leg"),
            ChildSpec::Node(n) => {
                let (spec, tag) = fill(n, origin, labels, fillers);
                (ChildSpec::Node(spec), Some(tag))
            }
        };
        children.push(spec);
        tags.push(tag);
    }
    let node = NodeSpec {
        beta: s.beta.clone(),
        marks: s.marks.iter().map(|&m| labels[m - 1]).collect(),
        children,
    };
    (node, Origins { origin, children: tags })
}

fn graft_below(t1: &DecoratedTree, v: VertexId, subs: &BTreeMap<VertexId, NodeSpec>) -> (NodeSpec, Origins) {
    let fillers: Vec<Filler> = t1
        .child_edges(v)
        .iter()
        .map(|&e| {
            let w = t1.edges()[e].leafward;
            if t1.vertices()[w].is_interior() {
                let (spec, tag) = graft_below(t1, w, subs);
                (ChildSpec::Node(spec), Some(tag))
            } else {
                (ChildSpec::Leg, None)
            }
        })
        .collect();
    let labels: Vec<usize> = t1.marks(v).iter().copied().collect();
    fill(&subs[&v], v, &labels, &mut fillers.into_iter())
}

/// Assigns ids in the order [`DecoratedTree::from_spec`] does.
fn number(spec: &NodeSpec, tag: &Origins, out: &mut Vec<Option<VertexId>>) {
    out.push(Some(tag.origin));
    for (c, t) in spec.children.iter().zip(&tag.children) {
        match (c, t) {
            (ChildSpec::Node(n), Some(t)) => number(n, t, out),
            _ => out.push(None),
        }
    }
}

/// Replaces every interior vertex `v` of `t1` by the tree `subs[v]`.
///
/// Returns the grafted tree and, per vertex, the vertex of `t1` it came from.
pub(super) fn graft_all(t1: &DecoratedTree, subs: &BTreeMap<VertexId, NodeSpec>) -> (DecoratedTree, Vec<Option<VertexId>>) {
    let (spec, tag) = graft_below(t1, t1.top(), subs);
    let mut origins = vec![None];
    number(&spec, &tag, &mut origins);
    let tree = DecoratedTree::from_spec(&spec).expect("grafting preserves structure");
    (tree, origins)
}

/// The grafted edges contract back to `t1`, each vertex onto its origin.
fn fold_is_identity(t1: &DecoratedTree, t: &DecoratedTree, origins: &[Option<VertexId>]) -> bool {
    let inner: Vec<usize> = t
        .interior_edges()
        .into_iter()
        .filter(|&e| {
            let edge = t.edges()[e];
            origins[edge.rootward] == origins[edge.leafward]
        })
        .collect();
    let Ok((folded, map)) = t.contract_edges(&inner) else {
        return false;
    };
    folded.canonical_form() == t1.canonical_form()
        && t.interior_vertices().into_iter().all(|w| Some(map[w]) == origins[w])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityRecord {
    pub canonical: String,
    pub face: ParamFace,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerReport {
    pub index: IndexRecord,
    pub m1: usize,
    pub m2: usize,
    pub expected: u64,
    pub descriptors: Vec<MultiplicityRecord>,
    /// Descriptors of the codimension `m₁+m₂` corner with the wrong count (including zero).
    pub deviations: Vec<MultiplicityRecord>,
    /// Iterated-corner components that are not strata of the index.
    pub unexpected: Vec<MultiplicityRecord>,
    /// Components whose fold map does not contract back to the first corner.
    pub fold_failures: Vec<String>,
    pub passed: bool,
}

pub fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u64, |acc, j| acc * (n - j) as u64 / (j + 1) as u64)
}

/// Compositions of `total` into `caps.len()` parts with `parts[j] ≤ caps[j]`.
fn compositions(total: usize, caps: &[usize]) -> Vec<Vec<usize>> {
    fn go(j: usize, left: usize, caps: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if j == caps.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for a in 0..=left.min(caps[j]) {
            cur.push(a);
            go(j + 1, left - a, caps, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, total, caps, &mut Vec::new(), &mut out);
    out
}

struct Tally {
    counts: HashMap<DescriptorKey, u64>,
    fold_failures: Vec<String>,
}

impl Calculus<'_> {
    /// Multiplicities of the components of the iterated corner `Ŝ_{m₂}(Ŝ_{m₁})`.
    pub fn iterated_corner_tally(&self, idx: &KIndex, m1: usize, m2: usize) -> HashMap<DescriptorKey, u64> {
        self.tally(idx, m1, m2).counts
    }

    fn tally(&self, idx: &KIndex, m1: usize, m2: usize) -> Tally {
        let first = self.normalized_corner(idx, m1);
        let parts: Vec<Tally> = first.par_iter().map(|d1| self.tally_over(d1, idx, m2)).collect();
        let mut counts = HashMap::new();
        let mut fold_failures = Vec::new();
        for part in parts {
            for (key, n) in part.counts {
                *counts.entry(key).or_insert(0) += n;
            }
            fold_failures.extend(part.fold_failures);
        }
        Tally { counts, fold_failures }
    }

    fn tally_over(&self, d1: &StratumDescriptor, idx: &KIndex, m2: usize) -> Tally {
        let t1 = &d1.tree;
        let verts = t1.interior_vertices();
        let triples: Vec<_> = verts.iter().map(|&v| t1.vertex_triple(v)).collect();
        let mut caps = vec![m2; triples.len()];
        // The parameter factor, when D₁ still lies over all of P.
        let p_free = if d1.face == ParamFace::Whole { idx.dim_p() } else { 0 };
        caps.push(p_free);
        let mut tally = Tally { counts: HashMap::new(), fold_failures: Vec::new() };
        for parts in compositions(m2, &caps) {
            let choices: Vec<Vec<NodeSpec>> = triples
                .iter()
                .zip(&parts)
                .map(|(t, &a)| self.trees_with_edges(t, a).iter().map(|s| s.to_spec()).collect())
                .collect();
            let faces = if parts[verts.len()] == 0 {
                vec![d1.face]
            } else {
                ParamFace::faces(idx.param, 1)
            };
            let mut pick = vec![0usize; verts.len()];
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            loop {
                let subs: BTreeMap<VertexId, NodeSpec> =
                    verts.iter().zip(&pick).zip(&choices).map(|((&v, &j), c)| (v, c[j].clone())).collect();
                let (t, origins) = graft_all(t1, &subs);
                if !fold_is_identity(t1, &t, &origins) {
                    tally.fold_failures.push(format!("{} <- {}", t.canonical_form(), t1.canonical_form()));
                }
                let canonical = t.canonical_form();
                for &face in &faces {
                    *tally.counts.entry((canonical.clone(), face)).or_insert(0) += 1;
                }
                // Advance the mixed-radix counter over vertex choices.
                let mut j = 0;
                while j < pick.len() {
                    pick[j] += 1;
                    if pick[j] < choices[j].len() {
                        break;
                    }
                    pick[j] = 0;
                    j += 1;
                }
                if j == pick.len() {
                    break;
                }
            }
        }
        tally
    }

    /// Checks that each stratum of total codimension `m₁+m₂` occurs in
    /// `Ŝ_{m₂}(Ŝ_{m₁})` exactly `(m₁+m₂)!/(m₁!m₂!)` times, and that folding each
    /// component back along its second-step edges recovers the first corner.
    ///
    /// `m₁` and `m₂` count faces of `P` along with interior edges.
    pub fn check_corner_consistency(&self, idx: &KIndex, m1: usize, m2: usize) -> CornerReport {
        let expected = binomial(m1 + m2, m1);
        let tally = self.tally(idx, m1, m2);
        let target = self.normalized_corner(idx, m1 + m2);
        let mut descriptors = Vec::with_capacity(target.len());
        let mut deviations = Vec::new();
        for d in &target {
            let key = d.key();
            let n = tally.counts.get(&key).copied().unwrap_or(0);
            let rec = MultiplicityRecord { canonical: key.0, face: key.1, multiplicity: n };
            if n != expected {
                deviations.push(rec.clone());
            }
            descriptors.push(rec);
        }
        let known: std::collections::HashSet<DescriptorKey> = target.iter().map(|d| d.key()).collect();
        let mut unexpected: Vec<MultiplicityRecord> = tally
            .counts
            .iter()
            .filter(|(k, _)| !known.contains(*k))
            .map(|(k, &n)| MultiplicityRecord { canonical: k.0.clone(), face: k.1, multiplicity: n })
            .collect();
        unexpected.sort_by(|a, b| (&a.canonical, a.face).cmp(&(&b.canonical, b.face)));
        let mut fold_failures = tally.fold_failures;
        fold_failures.sort();
        let passed = deviations.is_empty() && unexpected.is_empty() && fold_failures.is_empty();
        CornerReport {
            index: idx.record(self.monoid()),
            m1,
            m2,
            expected,
            descriptors,
            deviations,
            unexpected,
            fold_failures,
            passed,
        }
    }
}
