//! Boundary and corner calculus of tree-indexed moduli spaces.
//!
//! An index `(k, ℓ, β, dim L, P)` has a stratification by trees in
//! `𝒢(k+1, ℓ, β)` and, when `P = [1,2]`, by the two endpoint faces of `P`.
//! The normalized corner of codimension `m` lists every stratum whose number of
//! interior edges plus codimension in `P` equals `m`.

mod consistency;
mod sign;
mod squared;
mod symmetry;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::monoid::{Activity, ClassElement, ClassMonoid, DefaultActivity, Triple};
use crate::rational::format_rational;
use crate::tree::{boundary_splits, enumerate_trees_capped, max_interior_edges, BoundarySplit, DecoratedTree, NodeSpec, TreeRecord, VertexId};

pub use consistency::{CornerReport, MultiplicityRecord};
pub use sign::{AffineForm, KoszulExponent, SignConvention};
pub use squared::{D2Report, HistoryRecord, PairRecord};
pub use symmetry::{all_permutations, compose, GroupActionReport, PermReport};

/// Parameter space of a family: a point or the interval `[1,2]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamSpace {
    #[default]
    Point,
    Interval,
}

impl ParamSpace {
    pub fn dim(self) -> usize {
        match self {
            ParamSpace::Point => 0,
            ParamSpace::Interval => 1,
        }
    }
}

/// A stratum of the parameter space: all of it, or one endpoint of `[1,2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamFace {
    Whole,
    /// The face `t = 1`.
    Start,
    /// The face `t = 2`.
    End,
}

impl ParamFace {
    pub fn codim(self) -> usize {
        match self {
            ParamFace::Whole => 0,
            ParamFace::Start | ParamFace::End => 1,
        }
    }

    pub fn faces(space: ParamSpace, codim: usize) -> Vec<ParamFace> {
        match (space, codim) {
            (_, 0) => vec![ParamFace::Whole],
            (ParamSpace::Interval, 1) => vec![ParamFace::Start, ParamFace::End],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for ParamFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParamFace::Whole => "P",
            ParamFace::Start => "t=1",
            ParamFace::End => "t=2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KIndex {
    pub k: usize,
    pub ell: usize,
    pub beta: ClassElement,
    pub dim_l: usize,
    pub param: ParamSpace,
}

impl KIndex {
    /// An index over a point with `dim L = 1`.
    pub fn new(k: usize, ell: usize, beta: ClassElement) -> Self {
        KIndex { k, ell, beta, dim_l: 1, param: ParamSpace::Point }
    }

    pub fn from_triple(t: &Triple) -> Self {
        KIndex::new(t.k, t.ell, t.beta.clone())
    }

    pub fn with_dim_l(mut self, dim_l: usize) -> Self {
        self.dim_l = dim_l;
        self
    }

    pub fn with_param(mut self, param: ParamSpace) -> Self {
        self.param = param;
        self
    }

    pub fn triple(&self) -> Triple {
        Triple::new(self.k, self.ell, self.beta.clone())
    }

    pub fn dim_p(&self) -> usize {
        self.param.dim()
    }

    pub fn record(&self, monoid: &ClassMonoid) -> IndexRecord {
        IndexRecord {
            k: self.k,
            ell: self.ell,
            beta: self.beta.exponents().to_vec(),
            beta_display: monoid.display(&self.beta),
            energy: format_rational(&monoid.energy(&self.beta)),
            maslov: monoid.maslov(&self.beta),
            dim_l: self.dim_l,
            dim_p: self.dim_p(),
            dimension: dimension(self, monoid),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRecord {
    pub k: usize,
    pub ell: usize,
    pub beta: Vec<u32>,
    pub beta_display: String,
    pub energy: String,
    pub maslov: i64,
    pub dim_l: usize,
    pub dim_p: usize,
    pub dimension: i64,
}

/// `μ(β) + dim L + k − 2 + 2ℓ + dim P`.
pub fn dimension(idx: &KIndex, monoid: &ClassMonoid) -> i64 {
    monoid.maslov(&idx.beta) + idx.dim_l as i64 + idx.k as i64 - 2 + 2 * idx.ell as i64 + idx.dim_p() as i64
}

/// `ev_0` of the vertex `source` must equal `ev_{target_slot}` of `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberConstraint {
    pub edge: usize,
    pub source: VertexId,
    pub source_slot: usize,
    pub target: VertexId,
    pub target_slot: usize,
}

/// One diagonal constraint per interior edge.
pub fn fiber_constraints(t: &DecoratedTree) -> Vec<FiberConstraint> {
    t.oriented_interior_edges()
        .into_iter()
        .map(|e| FiberConstraint {
            edge: e.edge,
            source: e.source,
            source_slot: 0,
            target: e.target,
            target_slot: e.slot,
        })
        .collect()
}

/// A tree-indexed fiber product over a face of the parameter space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumDescriptor {
    pub tree: DecoratedTree,
    pub constraints: Vec<FiberConstraint>,
    pub codim: usize,
    pub face: ParamFace,
}

impl StratumDescriptor {
    pub fn new(tree: DecoratedTree, face: ParamFace) -> Self {
        let (tree, _) = tree.canonicalize();
        let constraints = fiber_constraints(&tree);
        let codim = constraints.len();
        StratumDescriptor { tree, constraints, codim, face }
    }

    pub fn param_codim(&self) -> usize {
        self.face.codim()
    }

    /// Interior edges plus codimension in `P`.
    pub fn total_codim(&self) -> usize {
        self.codim + self.param_codim()
    }

    pub fn key(&self) -> DescriptorKey {
        (self.tree.canonical_form(), self.face)
    }

    pub fn permute_marks(&self, perm: &[usize]) -> StratumDescriptor {
        StratumDescriptor::new(self.tree.permute_marks(perm), self.face)
    }

    pub fn record(&self) -> DescriptorRecord {
        DescriptorRecord {
            canonical: self.tree.canonical_form(),
            face: self.face,
            codim: self.codim,
            param_codim: self.param_codim(),
            constraints: self.constraints.clone(),
        }
    }
}

pub type DescriptorKey = (String, ParamFace);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorRecord {
    pub canonical: String,
    pub face: ParamFace,
    pub codim: usize,
    pub param_codim: usize,
    pub constraints: Vec<FiberConstraint>,
}

/// A boundary stratum with its sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedTerm {
    pub descriptor: StratumDescriptor,
    /// The splitting for tree terms; `None` for faces of `P`.
    pub split: Option<BoundarySplit>,
    pub koszul: KoszulExponent,
    /// The sign when every input has even shifted degree.
    pub sign: i8,
}

impl SignedTerm {
    fn new(descriptor: StratumDescriptor, split: Option<BoundarySplit>, koszul: KoszulExponent) -> Self {
        let sign = if koszul.offset % 2 == 0 { 1 } else { -1 };
        SignedTerm { descriptor, split, koszul, sign }
    }

    pub fn sign_at(&self, shifted_degrees: &[i64]) -> i8 {
        self.koszul.sign(shifted_degrees)
    }

    pub fn record(&self) -> TermRecord {
        TermRecord {
            descriptor: self.descriptor.record(),
            split: self.split.clone(),
            koszul_prefix: self.koszul.prefix.clone(),
            koszul_offset: self.koszul.offset,
            sign: self.sign,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub descriptor: DescriptorRecord,
    pub split: Option<BoundarySplit>,
    pub koszul_prefix: Vec<usize>,
    pub koszul_offset: u32,
    pub sign: i8,
}

/// Every splitting term of `(k, ℓ, β)`, without activity filtering.
///
/// These are the terms of the algebraic relation, which also involves
/// operations the geometry would leave empty (such as `m_{1,0}`).
pub fn boundary_terms_raw(
    k: usize,
    ell: usize,
    beta: &ClassElement,
    monoid: &ClassMonoid,
    convention: SignConvention,
) -> Vec<SignedTerm> {
    boundary_splits(k, ell, beta, monoid)
        .into_iter()
        .map(|s| {
            let koszul = convention.exponent(s.i);
            SignedTerm::new(StratumDescriptor::new(s.tree(), ParamFace::Whole), Some(s), koszul)
        })
        .collect()
}

/// The single-vertex tree of a triple.
pub fn trivial_tree(t: &Triple) -> DecoratedTree {
    DecoratedTree::from_spec(&NodeSpec::with_legs(t.beta.clone(), t.k).marked(1..=t.ell))
        .expect("one-vertex trees are well formed")
}

/// Per triple: trees bucketed by number of interior edges, complete up to the
/// length of the list.
type TreeCache = Mutex<HashMap<Triple, Arc<Vec<Vec<DecoratedTree>>>>>;

/// Shared configuration for the calculus: monoid, activity predicate, sign
/// convention, and a cache of enumerated tree sets.
pub struct Calculus<'a> {
    monoid: &'a ClassMonoid,
    activity: &'a dyn Activity,
    convention: SignConvention,
    trees: TreeCache,
}

impl<'a> Calculus<'a> {
    pub fn new(monoid: &'a ClassMonoid) -> Self {
        Calculus { monoid, activity: &DefaultActivity, convention: SignConvention::default(), trees: Mutex::default() }
    }

    pub fn with_activity(mut self, activity: &'a dyn Activity) -> Self {
        self.activity = activity;
        self.trees = Mutex::default();
        self
    }

    pub fn with_convention(mut self, convention: SignConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn monoid(&self) -> &ClassMonoid {
        self.monoid
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    pub fn is_active(&self, t: &Triple) -> bool {
        self.activity.is_active(self.monoid, t)
    }

    /// Active trees in `𝒢(k+1, ℓ, β)` by number of interior edges, complete
    /// at least up to `max_edges` edges. Cached.
    fn trees_up_to(&self, t: &Triple, max_edges: usize) -> Arc<Vec<Vec<DecoratedTree>>> {
        if let Some(hit) = self.trees.lock().expect("cache lock").get(t) {
            if hit.len() > max_edges {
                return hit.clone();
            }
        }
        let mut buckets = vec![Vec::new(); max_edges + 1];
        for tree in enumerate_trees_capped(t.k, t.ell, &t.beta, self.monoid, self.activity, Some(max_edges)) {
            buckets[tree.num_interior_edges()].push(tree);
        }
        let list = Arc::new(buckets);
        let mut cache = self.trees.lock().expect("cache lock");
        let entry = cache.entry(t.clone()).or_insert_with(|| list.clone());
        if entry.len() < list.len() {
            *entry = list;
        }
        entry.clone()
    }

    /// Active trees with exactly `edges` interior edges.
    pub fn trees_with_edges(&self, t: &Triple, edges: usize) -> Vec<DecoratedTree> {
        self.trees_up_to(t, edges)[edges].clone()
    }

    /// The largest number of interior edges of an active tree for `t`.
    pub fn max_edges(&self, t: &Triple) -> Option<usize> {
        max_interior_edges(t.k, t.ell, &t.beta, self.monoid, self.activity)
    }

    /// Codimension-one strata with signs, in the order of [`boundary_splits`]
    /// followed by the faces of `P`.
    pub fn normalized_boundary(&self, idx: &KIndex) -> Vec<SignedTerm> {
        let mut out: Vec<SignedTerm> = boundary_terms_raw(idx.k, idx.ell, &idx.beta, self.monoid, self.convention)
            .into_iter()
            .filter(|term| {
                let s = term.split.as_ref().expect("split term");
                s.is_active(self.monoid, self.activity)
            })
            .collect();
        if idx.param == ParamSpace::Interval && self.is_active(&idx.triple()) {
            let trivial = trivial_tree(&idx.triple());
            out.push(SignedTerm::new(
                StratumDescriptor::new(trivial.clone(), ParamFace::Start),
                None,
                KoszulExponent::constant(1),
            ));
            out.push(SignedTerm::new(
                StratumDescriptor::new(trivial, ParamFace::End),
                None,
                KoszulExponent::constant(0),
            ));
        }
        out
    }

    /// Strata of total codimension `m`: trees with `m − m′` interior edges over
    /// faces of `P` of codimension `m′`.
    pub fn normalized_corner(&self, idx: &KIndex, m: usize) -> Vec<StratumDescriptor> {
        let trees = self.trees_up_to(&idx.triple(), m);
        let mut out = Vec::new();
        for m_p in 0..=idx.dim_p().min(m) {
            for face in ParamFace::faces(idx.param, m_p) {
                for t in &trees[m - m_p] {
                    out.push(StratumDescriptor::new(t.clone(), face));
                }
            }
        }
        out
    }

    /// The largest `m` with a nonempty normalized corner.
    pub fn max_codim(&self, idx: &KIndex) -> usize {
        self.max_edges(&idx.triple()).map_or(0, |e| e + idx.dim_p())
    }

    /// Checks that each splitting's two factors have dimensions adding up to
    /// the boundary dimension once the diagonal constraint is imposed.
    pub fn dimension_additivity(&self, idx: &KIndex) -> bool {
        let whole = dimension(idx, self.monoid);
        boundary_splits(idx.k, idx.ell, &idx.beta, self.monoid).iter().all(|s| {
            let factor = |t: Triple| {
                dimension(&KIndex::from_triple(&t).with_dim_l(idx.dim_l).with_param(idx.param), self.monoid)
            };
            // The parameter space is shared, so it is counted once.
            factor(s.parent()) + factor(s.child()) - idx.dim_l as i64 - idx.dim_p() as i64 == whole - 1
        })
    }
}

/// Dimension of a stratum of `idx`.
pub fn descriptor_dimension(idx: &KIndex, d: &StratumDescriptor, monoid: &ClassMonoid) -> i64 {
    dimension(idx, monoid) - d.total_codim() as i64
}

/// Serializable tree record, re-exported for reports.
pub fn tree_record(t: &DecoratedTree) -> TreeRecord {
    t.record()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_examples() {
        let m = ClassMonoid::unit();
        let b = m.generator(0);
        assert_eq!(dimension(&KIndex::new(2, 0, b.clone()).with_dim_l(2), &m), 4);
        for d in 0..4u32 {
            for k in 0..4 {
                let idx = KIndex::new(k, 0, m.multiple(0, d));
                assert_eq!(dimension(&idx, &m), 2 * d as i64 + k as i64 - 1);
            }
        }
        // β = 0: P × L × M_{k+1,ℓ} with dim M_{k+1,ℓ} = k + 1 + 2ℓ − 3.
        let idx = KIndex::new(3, 1, m.zero()).with_dim_l(2).with_param(ParamSpace::Interval);
        assert_eq!(dimension(&idx, &m), 1 + 2 + (3 + 1 + 2 - 3));
    }

    #[test]
    fn boundary_of_unstable_zero_index_is_empty() {
        let m = ClassMonoid::unit();
        let calc = Calculus::new(&m);
        for k in 0..2 {
            assert!(calc.normalized_boundary(&KIndex::new(k, 0, m.zero())).is_empty());
        }
    }

    #[test]
    fn boundary_matches_active_splits() {
        let m = ClassMonoid::unit();
        let calc = Calculus::new(&m);
        let b = m.generator(0);
        let idx = KIndex::new(1, 0, b.clone());
        let terms = calc.normalized_boundary(&idx);
        let active: Vec<_> = boundary_splits(1, 0, &b, &m)
            .into_iter()
            .filter(|s| s.is_active(&m, &DefaultActivity))
            .collect();
        assert_eq!(terms.len(), active.len());
        assert_eq!(terms.len(), 2);
        assert!(terms.iter().all(|t| t.split.as_ref().unwrap().k1 == 2));
        let raw = boundary_terms_raw(1, 0, &b, &m, SignConvention::ShiftedKoszul);
        let first = raw.iter().find(|t| t.split.as_ref().unwrap().k1 == 1).unwrap();
        assert_eq!(first.sign, 1);
        assert!(first.koszul.prefix.is_empty());
    }

    #[test]
    fn interval_adds_two_faces() {
        let m = ClassMonoid::unit();
        let calc = Calculus::new(&m);
        let idx = KIndex::new(1, 0, m.generator(0)).with_param(ParamSpace::Interval);
        let terms = calc.normalized_boundary(&idx);
        let faces: Vec<_> = terms.iter().filter(|t| t.split.is_none()).collect();
        assert_eq!(faces.len(), 2);
        assert_eq!(faces[0].descriptor.face, ParamFace::Start);
        assert_eq!(faces[0].sign, -1);
        assert_eq!(faces[1].sign, 1);
    }

    #[test]
    fn corner_zero_and_one() {
        let m = ClassMonoid::unit();
        let calc = Calculus::new(&m);
        let idx = KIndex::new(2, 1, m.multiple(0, 2));
        let c0 = calc.normalized_corner(&idx, 0);
        assert_eq!(c0.len(), 1);
        assert_eq!(c0[0].codim, 0);
        let mut c1: Vec<_> = calc.normalized_corner(&idx, 1).iter().map(|d| d.key()).collect();
        let mut b: Vec<_> = calc.normalized_boundary(&idx).iter().map(|t| t.descriptor.key()).collect();
        c1.sort();
        b.sort();
        assert_eq!(c1, b);
        let max = calc.max_codim(&idx);
        assert!(!calc.normalized_corner(&idx, max).is_empty());
        assert!(calc.normalized_corner(&idx, max + 1).is_empty());
    }

    #[test]
    fn constraints_per_edge() {
        let m = ClassMonoid::unit();
        let b = m.generator(0);
        assert!(fiber_constraints(&trivial_tree(&Triple::new(2, 0, b.clone()))).is_empty());
        let s = &boundary_splits(2, 0, &m.multiple(0, 2), &m)[5];
        let c = fiber_constraints(&s.tree());
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].source_slot, 0);
        assert_eq!(c[0].target_slot, s.i);
        let chain = DecoratedTree::from_spec(
            &NodeSpec::leaf(b.clone()).leg().child(NodeSpec::leaf(b.clone()).child(NodeSpec::leaf(b).leg())),
        )
        .unwrap();
        assert_eq!(fiber_constraints(&chain).len(), 2);
    }

    #[test]
    fn additivity_over_splits() {
        let m = ClassMonoid::unit();
        let calc = Calculus::new(&m);
        for k in 0..4 {
            for ell in 0..2 {
                for e in 0..3 {
                    let idx = KIndex::new(k, ell, m.multiple(0, e)).with_dim_l(2);
                    assert!(calc.dimension_additivity(&idx));
                    assert!(calc.dimension_additivity(&idx.clone().with_param(ParamSpace::Interval)));
                }
            }
        }
    }
}
