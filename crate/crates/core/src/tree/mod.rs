//! Decorated rooted ribbon trees.
//!
//! A tree is stored as an arena of vertices and edges. Every vertex keeps its
//! cyclic edge order (the ribbon structure) rotated so that position 0 is the
//! edge pointing toward the root. Exterior legs are numbered counterclockwise
//! from the root: the root is leg 0 and the remaining exterior vertices are
//! legs `1..=k` in depth-first order.
//!
//! Because the root is fixed and ribbon orders are linear once rotated, a tree
//! is determined up to isomorphism by its nested [`NodeSpec`], and
//! [`DecoratedTree::canonical_form`] is a faithful encoding of that spec.

mod enumerate;
mod order;
mod splits;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::TreeError;
use crate::monoid::{ClassElement, ClassMonoid, Triple};

pub use enumerate::{
    count_trees, enumerate_trees, enumerate_trees_capped, enumerate_trees_with, for_each_tree_form, max_interior_edges,
    tree_forms,
};
pub use order::{subtree_extract, tree_leq, tree_leq_witness, Subtree};
pub use splits::{boundary_splits, predecessor_triples, BoundarySplit};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Exterior,
    Interior {
        beta: ClassElement,
        marks: BTreeSet<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub kind: VertexKind,
    /// Incident edges in counterclockwise order, starting at the rootward edge.
    pub ribbon: Vec<EdgeId>,
}

impl Vertex {
    pub fn is_interior(&self) -> bool {
        matches!(self.kind, VertexKind::Interior { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    /// `t(e)`: the endpoint on the root side.
    pub rootward: VertexId,
    /// `s(e)`: the endpoint away from the root.
    pub leafward: VertexId,
}

/// An interior edge together with its slot data: `e = e_0(s(e)) = e_slot(t(e))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedInteriorEdge {
    pub edge: EdgeId,
    pub source: VertexId,
    pub target: VertexId,
    pub slot: usize,
}

/// Nested form of a planted subtree hanging below its rootward edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeSpec {
    pub beta: ClassElement,
    pub marks: BTreeSet<usize>,
    pub children: Vec<ChildSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ChildSpec {
    Leg,
    Node(NodeSpec),
}

impl NodeSpec {
    pub fn leaf(beta: ClassElement) -> Self {
        NodeSpec { beta, marks: BTreeSet::new(), children: Vec::new() }
    }

    pub fn with_legs(beta: ClassElement, legs: usize) -> Self {
        NodeSpec { beta, marks: BTreeSet::new(), children: vec![ChildSpec::Leg; legs] }
    }

    pub fn marked(mut self, marks: impl IntoIterator<Item = usize>) -> Self {
        self.marks = marks.into_iter().collect();
        self
    }

    pub fn child(mut self, node: NodeSpec) -> Self {
        self.children.push(ChildSpec::Node(node));
        self
    }

    pub fn leg(mut self) -> Self {
        self.children.push(ChildSpec::Leg);
        self
    }

    pub fn legs(&self) -> usize {
        self.children
            .iter()
            .map(|c| match c {
                ChildSpec::Leg => 1,
                ChildSpec::Node(n) => n.legs(),
            })
            .sum()
    }

    fn encode(&self, out: &mut String) {
        out.push('[');
        out.push_str(&self.beta.token());
        out.push('|');
        let marks: Vec<String> = self.marks.iter().map(|m| m.to_string()).collect();
        out.push_str(&marks.join("."));
        out.push_str("](");
        for (i, c) in self.children.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            match c {
                ChildSpec::Leg => out.push('*'),
                ChildSpec::Node(n) => n.encode(out),
            }
        }
        out.push(')');
    }

    /// Replaces the legs of `self`, in order, by the given children.
    fn fill_legs(&self, fillers: &mut impl Iterator<Item = ChildSpec>) -> NodeSpec {
        NodeSpec {
            beta: self.beta.clone(),
            marks: self.marks.clone(),
            children: self
                .children
                .iter()
                .map(|c| match c {
                    ChildSpec::Leg => fillers.next().expect("enough fillers"),
                    ChildSpec::Node(n) => ChildSpec::Node(n.fill_legs(fillers)),
                })
                .collect(),
        }
    }

    fn map_marks(&self, f: &impl Fn(usize) -> usize) -> NodeSpec {
        NodeSpec {
            beta: self.beta.clone(),
            marks: self.marks.iter().map(|&m| f(m)).collect(),
            children: self
                .children
                .iter()
                .map(|c| match c {
                    ChildSpec::Leg => ChildSpec::Leg,
                    ChildSpec::Node(n) => ChildSpec::Node(n.map_marks(f)),
                })
                .collect(),
        }
    }
}

/// A decorated rooted ribbon tree with interior marked points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedTree {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    root: VertexId,
    ell: usize,
}

impl DecoratedTree {
    /// Builds a tree from unoriented edges and per-vertex cyclic orders.
    ///
    /// Each `ribbons[v]` lists the edges at `v` in counterclockwise order,
    /// starting anywhere; it is rotated to begin at the rootward edge.
    pub fn new(
        kinds: Vec<VertexKind>,
        edges: Vec<(VertexId, VertexId)>,
        ribbons: Vec<Vec<EdgeId>>,
        root: VertexId,
    ) -> Result<Self, TreeError> {
        let n = kinds.len();
        if root >= n {
            return Err(TreeError::NoSuchVertex(root));
        }
        if edges.len() + 1 != n || ribbons.len() != n {
            return Err(TreeError::NotATree);
        }
        let mut incident = vec![Vec::new(); n];
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n || a == b {
                return Err(TreeError::NotATree);
            }
            incident[a].push(e);
            incident[b].push(e);
        }
        for (v, ribbon) in ribbons.iter().enumerate() {
            let mut listed = ribbon.clone();
            listed.sort_unstable();
            let mut actual = incident[v].clone();
            actual.sort_unstable();
            if listed != actual {
                return Err(TreeError::NotATree);
            }
        }
        // Orient edges by breadth-first search from the root.
        let mut oriented: Vec<Option<Edge>> = vec![None; edges.len()];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &e in &incident[v] {
                if oriented[e].is_some() {
                    continue;
                }
                let (a, b) = edges[e];
                let w = if a == v { b } else { a };
                if seen[w] {
                    return Err(TreeError::NotATree);
                }
                seen[w] = true;
                oriented[e] = Some(Edge { rootward: v, leafward: w });
                queue.push_back(w);
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(TreeError::NotATree);
        }
        let edges: Vec<Edge> = oriented.into_iter().map(|e| e.expect("oriented")).collect();
        let vertices = kinds
            .into_iter()
            .zip(ribbons)
            .enumerate()
            .map(|(v, (kind, mut ribbon))| {
                if v != root {
                    let up = ribbon
                        .iter()
                        .position(|&e| edges[e].leafward == v)
                        .expect("non-root vertex has a rootward edge");
                    ribbon.rotate_left(up);
                }
                Vertex { kind, ribbon }
            })
            .collect::<Vec<_>>();
        let ell = vertices
            .iter()
            .map(|v| match &v.kind {
                VertexKind::Interior { marks, .. } => marks.len(),
                VertexKind::Exterior => 0,
            })
            .sum();
        let tree = DecoratedTree { vertices, edges, root, ell };
        tree.check_structure()?;
        Ok(tree)
    }

    /// Builds the tree whose root leg is attached to `top`.
    pub fn from_spec(top: &NodeSpec) -> Result<Self, TreeError> {
        let mut builder = SpecBuilder::default();
        builder.vertices.push(Vertex { kind: VertexKind::Exterior, ribbon: vec![0] });
        builder.add_node(top, 0);
        let ell = builder.ell;
        let tree = DecoratedTree {
            vertices: builder.vertices,
            edges: builder.edges,
            root: 0,
            ell,
        };
        tree.check_structure()?;
        Ok(tree)
    }

    fn check_structure(&self) -> Result<(), TreeError> {
        let root = &self.vertices[self.root];
        if root.is_interior() {
            return Err(TreeError::BadRoot);
        }
        let mut any_interior = false;
        let mut all_marks = Vec::new();
        for (v, vert) in self.vertices.iter().enumerate() {
            match &vert.kind {
                VertexKind::Exterior => {
                    if vert.ribbon.len() != 1 {
                        return Err(TreeError::ExteriorValence(v, vert.ribbon.len()));
                    }
                }
                VertexKind::Interior { marks, .. } => {
                    any_interior = true;
                    all_marks.extend(marks.iter().copied());
                }
            }
        }
        if !any_interior {
            return Err(TreeError::NoInteriorVertex);
        }
        all_marks.sort_unstable();
        if all_marks != (1..=self.ell).collect::<Vec<_>>() {
            return Err(TreeError::MarksNotPartition(self.ell));
        }
        Ok(())
    }

    /// Checks the energy rule and stability against a monoid.
    pub fn validate(&self, monoid: &ClassMonoid) -> Result<(), TreeError> {
        for v in self.interior_vertices() {
            if self.beta(v).rank() != monoid.rank() {
                return Err(TreeError::IndexMismatch);
            }
            if !self.vertex_is_stable(v, monoid) {
                return Err(TreeError::Unstable(v));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    /// Number of exterior vertices other than the root.
    pub fn k(&self) -> usize {
        self.vertices.iter().filter(|v| !v.is_interior()).count() - 1
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Vertices in depth-first order from the root, children counterclockwise.
    pub fn preorder(&self) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.vertices.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            for &e in self.child_edges(v).iter().rev() {
                stack.push(self.edges[e].leafward);
            }
        }
        out
    }

    /// Edges at `v` leading away from the root, in ribbon order.
    pub fn child_edges(&self, v: VertexId) -> &[EdgeId] {
        if v == self.root {
            &self.vertices[v].ribbon
        } else {
            &self.vertices[v].ribbon[1..]
        }
    }

    pub fn parent_edge(&self, v: VertexId) -> Option<EdgeId> {
        (v != self.root).then(|| self.vertices[v].ribbon[0])
    }

    pub fn interior_vertices(&self) -> Vec<VertexId> {
        self.preorder()
            .into_iter()
            .filter(|&v| self.vertices[v].is_interior())
            .collect()
    }

    /// Exterior vertices in leg order (root first).
    pub fn legs(&self) -> Vec<VertexId> {
        self.preorder()
            .into_iter()
            .filter(|&v| !self.vertices[v].is_interior())
            .collect()
    }

    pub fn is_interior_edge(&self, e: EdgeId) -> bool {
        let edge = self.edges[e];
        self.vertices[edge.rootward].is_interior() && self.vertices[edge.leafward].is_interior()
    }

    pub fn interior_edges(&self) -> Vec<EdgeId> {
        (0..self.edges.len()).filter(|&e| self.is_interior_edge(e)).collect()
    }

    pub fn num_interior_edges(&self) -> usize {
        self.interior_edges().len()
    }

    pub fn valence(&self, v: VertexId) -> usize {
        self.vertices[v].ribbon.len()
    }

    pub fn beta(&self, v: VertexId) -> &ClassElement {
        match &self.vertices[v].kind {
            VertexKind::Interior { beta, .. } => beta,
            VertexKind::Exterior => panic!("exterior vertex {v} has no class"),
        }
    }

    pub fn marks(&self, v: VertexId) -> &BTreeSet<usize> {
        match &self.vertices[v].kind {
            VertexKind::Interior { marks, .. } => marks,
            VertexKind::Exterior => panic!("exterior vertex {v} has no marks"),
        }
    }

    /// `(k_v, #l(v), β(v))` for an interior vertex.
    pub fn vertex_triple(&self, v: VertexId) -> Triple {
        Triple::new(self.valence(v) - 1, self.marks(v).len(), self.beta(v).clone())
    }

    pub fn total_class(&self) -> ClassElement {
        let verts = self.interior_vertices();
        let mut total = ClassElement::zero(self.beta(verts[0]).rank());
        for v in verts {
            total = total.add(self.beta(v));
        }
        total
    }

    pub fn triple(&self) -> Triple {
        Triple::new(self.k(), self.ell, self.total_class())
    }

    pub fn vertex_is_stable(&self, v: VertexId, monoid: &ClassMonoid) -> bool {
        monoid.energy(self.beta(v)) > num_rational::Rational64::from_integer(0)
            || self.valence(v) >= 3
            || !self.marks(v).is_empty()
    }

    /// Positive energy, valence at least three, or a marked point at every interior vertex.
    pub fn is_stable(&self, monoid: &ClassMonoid) -> bool {
        self.interior_vertices()
            .into_iter()
            .all(|v| self.vertex_is_stable(v, monoid))
    }

    pub fn oriented_interior_edges(&self) -> Vec<OrientedInteriorEdge> {
        self.interior_edges()
            .into_iter()
            .map(|e| {
                let Edge { rootward, leafward } = self.edges[e];
                let slot = self.vertices[rootward]
                    .ribbon
                    .iter()
                    .position(|&x| x == e)
                    .expect("edge is incident");
                OrientedInteriorEdge { edge: e, source: leafward, target: rootward, slot }
            })
            .collect()
    }

    /// The top interior vertex, adjacent to the root.
    pub fn top(&self) -> VertexId {
        self.edges[self.vertices[self.root].ribbon[0]].leafward
    }

    pub fn to_spec(&self) -> NodeSpec {
        self.spec_at(self.top())
    }

    fn spec_at(&self, v: VertexId) -> NodeSpec {
        NodeSpec {
            beta: self.beta(v).clone(),
            marks: self.marks(v).clone(),
            children: self
                .child_edges(v)
                .iter()
                .map(|&e| {
                    let w = self.edges[e].leafward;
                    if self.vertices[w].is_interior() {
                        ChildSpec::Node(self.spec_at(w))
                    } else {
                        ChildSpec::Leg
                    }
                })
                .collect(),
        }
    }

    /// Root-anchored planar traversal encoding; equal iff the trees are isomorphic.
    ///
    /// Grammar: `node := "[" class "|" marks "](" (child ("," child)*)? ")"`,
    /// `child := "*" | node`, where `class` is the exponent vector joined by `.`
    /// and `marks` the sorted marked-point labels joined by `.`.
    pub fn canonical_form(&self) -> String {
        let mut out = String::new();
        self.to_spec().encode(&mut out);
        out
    }

    pub fn parse_canonical(text: &str) -> Result<Self, TreeError> {
        let mut parser = Parser { bytes: text.trim().as_bytes(), pos: 0 };
        let spec = parser.node()?;
        if parser.pos != parser.bytes.len() {
            return Err(TreeError::Parse(format!("trailing input at {}", parser.pos)));
        }
        DecoratedTree::from_spec(&spec)
    }

    /// The same tree with vertices and edges renumbered in depth-first order.
    ///
    /// Returns the renumbered tree and the map from old to new vertex ids.
    pub fn canonicalize(&self) -> (DecoratedTree, Vec<VertexId>) {
        self.contract_edges(&[]).expect("empty contraction")
    }

    /// Contracts one interior edge.
    pub fn contract_edge(&self, e: EdgeId) -> Result<DecoratedTree, TreeError> {
        self.contract_edges(&[e]).map(|(t, _)| t)
    }

    /// Contracts a set of interior edges; the result does not depend on order.
    ///
    /// The merged vertex carries the sum of classes and the union of marks, and
    /// its ribbon order is obtained by splicing each contracted vertex's child
    /// edges in place of the contracted edge. Also returns the vertex map.
    pub fn contract_edges(&self, set: &[EdgeId]) -> Result<(DecoratedTree, Vec<VertexId>), TreeError> {
        let mut contract = vec![false; self.edges.len()];
        for &e in set {
            if e >= self.edges.len() {
                return Err(TreeError::NoSuchEdge(e));
            }
            if !self.is_interior_edge(e) {
                return Err(TreeError::ExteriorEdge(e));
            }
            contract[e] = true;
        }
        let spec = self.merged_spec(self.top(), &contract);
        let tree = DecoratedTree::from_spec(&spec)?;
        let mut map = vec![usize::MAX; self.vertices.len()];
        map[self.root] = 0;
        map[self.top()] = 1;
        let mut counter = 2;
        self.assign_contracted(self.top(), 1, &contract, &mut map, &mut counter);
        Ok((tree, map))
    }

    fn merged_spec(&self, v: VertexId, contract: &[bool]) -> NodeSpec {
        let mut node = NodeSpec {
            beta: self.beta(v).clone(),
            marks: self.marks(v).clone(),
            children: Vec::new(),
        };
        for &e in self.child_edges(v) {
            let w = self.edges[e].leafward;
            if contract[e] {
                let sub = self.merged_spec(w, contract);
                node.beta = node.beta.add(&sub.beta);
                node.marks.extend(sub.marks);
                node.children.extend(sub.children);
            } else if self.vertices[w].is_interior() {
                node.children.push(ChildSpec::Node(self.merged_spec(w, contract)));
            } else {
                node.children.push(ChildSpec::Leg);
            }
        }
        node
    }

    fn assign_contracted(
        &self,
        v: VertexId,
        class: VertexId,
        contract: &[bool],
        map: &mut [VertexId],
        counter: &mut usize,
    ) {
        for &e in self.child_edges(v) {
            let w = self.edges[e].leafward;
            if contract[e] {
                map[w] = class;
                self.assign_contracted(w, class, contract, map, counter);
            } else {
                map[w] = *counter;
                *counter += 1;
                self.assign_contracted(w, map[w], contract, map, counter);
            }
        }
    }

    /// Substitutes `sub` for the interior vertex `v`.
    ///
    /// `sub` must have `k_v` legs and class `β(v)`; its marks `1..=#l(v)` are
    /// relabeled onto `l(v)` in increasing order. The root leg of `sub` takes
    /// the place of `e_0(v)` and its legs take the places of `e_1(v), …`.
    pub fn graft(&self, v: VertexId, sub: &DecoratedTree) -> Result<DecoratedTree, TreeError> {
        if v >= self.vertices.len() {
            return Err(TreeError::NoSuchVertex(v));
        }
        if !self.vertices[v].is_interior() {
            return Err(TreeError::ExteriorVertex(v));
        }
        let target = self.vertex_triple(v);
        if sub.triple() != target {
            return Err(TreeError::IndexMismatch);
        }
        let labels: Vec<usize> = self.marks(v).iter().copied().collect();
        let sub_spec = sub.to_spec().map_marks(&|m| labels[m - 1]);
        let spec = self.graft_spec(self.top(), v, &sub_spec);
        DecoratedTree::from_spec(&spec)
    }

    fn graft_spec(&self, at: VertexId, v: VertexId, sub: &NodeSpec) -> NodeSpec {
        let children: Vec<ChildSpec> = self
            .child_edges(at)
            .iter()
            .map(|&e| {
                let w = self.edges[e].leafward;
                if self.vertices[w].is_interior() {
                    ChildSpec::Node(self.graft_spec(w, v, sub))
                } else {
                    ChildSpec::Leg
                }
            })
            .collect();
        if at == v {
            sub.fill_legs(&mut children.into_iter())
        } else {
            NodeSpec {
                beta: self.beta(at).clone(),
                marks: self.marks(at).clone(),
                children,
            }
        }
    }

    /// Applies a permutation of `{1..ℓ}` (given as `perm[i-1] = σ(i)`) to all marks.
    pub fn permute_marks(&self, perm: &[usize]) -> DecoratedTree {
        let spec = self.to_spec().map_marks(&|m| perm[m - 1]);
        DecoratedTree::from_spec(&spec).expect("permutation preserves structure")
    }
}

impl fmt::Display for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_form())
    }
}

#[derive(Default)]
struct SpecBuilder {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    ell: usize,
}

impl SpecBuilder {
    fn add_node(&mut self, node: &NodeSpec, parent: VertexId) -> VertexId {
        let v = self.vertices.len();
        let up = self.edges.len();
        self.edges.push(Edge { rootward: parent, leafward: v });
        // The root's only edge is created together with the root.
        if up != 0 {
            self.vertices[parent].ribbon.push(up);
        }
        self.ell += node.marks.len();
        self.vertices.push(Vertex {
            kind: VertexKind::Interior { beta: node.beta.clone(), marks: node.marks.clone() },
            ribbon: vec![up],
        });
        for child in &node.children {
            match child {
                ChildSpec::Leg => {
                    let w = self.vertices.len();
                    let e = self.edges.len();
                    self.edges.push(Edge { rootward: v, leafward: w });
                    self.vertices[v].ribbon.push(e);
                    self.vertices.push(Vertex { kind: VertexKind::Exterior, ribbon: vec![e] });
                }
                ChildSpec::Node(n) => {
                    self.add_node(n, v);
                }
            }
        }
        v
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn expect(&mut self, c: u8) -> Result<(), TreeError> {
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(TreeError::Parse(format!("expected {:?} at {}", c as char, self.pos)))
        }
    }

    fn numbers(&mut self, stop: u8) -> Result<Vec<usize>, TreeError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos] != stop {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        if text.is_empty() {
            return Ok(Vec::new());
        }
        text.split('.')
            .map(|s| s.parse().map_err(|_| TreeError::Parse(format!("bad number {s:?}"))))
            .collect()
    }

    fn node(&mut self) -> Result<NodeSpec, TreeError> {
        self.expect(b'[')?;
        let beta: Vec<u32> = self.numbers(b'|')?.into_iter().map(|e| e as u32).collect();
        if beta.is_empty() {
            return Err(TreeError::Parse("empty class".into()));
        }
        self.expect(b'|')?;
        let marks = self.numbers(b']')?;
        self.expect(b']')?;
        self.expect(b'(')?;
        let mut children = Vec::new();
        while self.bytes.get(self.pos) != Some(&b')') {
            if !children.is_empty() {
                self.expect(b',')?;
            }
            match self.bytes.get(self.pos) {
                Some(b'*') => {
                    self.pos += 1;
                    children.push(ChildSpec::Leg);
                }
                Some(b'[') => children.push(ChildSpec::Node(self.node()?)),
                _ => return Err(TreeError::Parse(format!("unexpected input at {}", self.pos))),
            }
        }
        self.expect(b')')?;
        Ok(NodeSpec {
            beta: ClassElement::from_exponents(beta),
            marks: marks.into_iter().collect(),
            children,
        })
    }
}

/// Structured record form of a tree, used in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeRecord {
    pub canonical: String,
    pub k: usize,
    pub ell: usize,
    pub interior_vertices: Vec<VertexRecord>,
    pub interior_edges: Vec<OrientedInteriorEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: VertexId,
    pub beta: ClassElement,
    pub marks: Vec<usize>,
    pub valence: usize,
}

impl DecoratedTree {
    pub fn record(&self) -> TreeRecord {
        let (t, _) = self.canonicalize();
        TreeRecord {
            canonical: t.canonical_form(),
            k: t.k(),
            ell: t.ell(),
            interior_vertices: t
                .interior_vertices()
                .into_iter()
                .map(|v| VertexRecord {
                    id: v,
                    beta: t.beta(v).clone(),
                    marks: t.marks(v).iter().copied().collect(),
                    valence: t.valence(v),
                })
                .collect(),
            interior_edges: t.oriented_interior_edges(),
        }
    }
}
