//! The contraction order on trees and preimage subtrees.

use std::collections::BTreeSet;

use super::{ChildSpec, DecoratedTree, EdgeId, NodeSpec, VertexId};
use crate::error::TreeError;

/// Combinations of `n` items taken `r` at a time, in lexicographic order.
pub(crate) fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= n {
        go(0, n, r, &mut Vec::with_capacity(r), &mut out);
    }
    out
}

/// A set of interior edges of `t` whose contraction is isomorphic to `t2`.
pub fn tree_leq_witness(t: &DecoratedTree, t2: &DecoratedTree) -> Option<Vec<EdgeId>> {
    if t.triple() != t2.triple() {
        return None;
    }
    let edges = t.interior_edges();
    let target_edges = t2.num_interior_edges();
    if target_edges > edges.len() {
        return None;
    }
    let want = t2.canonical_form();
    combinations(edges.len(), edges.len() - target_edges)
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| edges[i]).collect::<Vec<_>>())
        .find(|set| {
            t.contract_edges(set)
                .map(|(c, _)| c.canonical_form() == want)
                .unwrap_or(false)
        })
}

/// True iff `t2` is obtained from `t` by finitely many edge contractions (including none).
pub fn tree_leq(t: &DecoratedTree, t2: &DecoratedTree) -> bool {
    tree_leq_witness(t, t2).is_some()
}

/// The preimage of one vertex under a contraction, as a tree in its own right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subtree {
    /// Interior vertices of the parent tree forming the preimage.
    pub vertices: BTreeSet<VertexId>,
    /// The induced tree: cut edges become the root stub and legs.
    pub tree: DecoratedTree,
    /// `mark_labels[j-1]` is the parent-tree label of the subtree's mark `j`.
    pub mark_labels: Vec<usize>,
}

/// Extracts the subtree of `t` lying over the interior vertex `v` of `t2`.
///
/// `t2` must be a contraction of `t`; vertex ids of `t2` are interpreted in
/// its own numbering.
pub fn subtree_extract(t: &DecoratedTree, t2: &DecoratedTree, v: VertexId) -> Result<Subtree, TreeError> {
    if v >= t2.vertices().len() {
        return Err(TreeError::NoSuchVertex(v));
    }
    if !t2.vertices()[v].is_interior() {
        return Err(TreeError::ExteriorVertex(v));
    }
    let witness = tree_leq_witness(t, t2).ok_or(TreeError::NotComparable)?;
    let (contracted, map) = t.contract_edges(&witness)?;
    // Both `contracted` and the canonicalized `t2` number vertices in preorder.
    let (_, t2_map) = t2.canonicalize();
    debug_assert_eq!(contracted.canonical_form(), t2.canonical_form());
    let target = t2_map[v];
    let vertices: BTreeSet<VertexId> = (0..t.vertices().len())
        .filter(|&w| t.vertices()[w].is_interior() && map[w] == target)
        .collect();
    let top = *vertices
        .iter()
        .find(|&&w| {
            let up = t.parent_edge(w).expect("interior vertex has a parent edge");
            !vertices.contains(&t.edges()[up].rootward)
        })
        .expect("preimage has a top vertex");
    let mut marks: Vec<usize> = vertices.iter().flat_map(|&w| t.marks(w).iter().copied()).collect();
    marks.sort_unstable();
    let relabel = |m: usize| marks.iter().position(|&x| x == m).expect("mark in preimage") + 1;
    let spec = induced_spec(t, top, &vertices, &relabel);
    let tree = DecoratedTree::from_spec(&spec)?;
    Ok(Subtree { vertices, tree, mark_labels: marks })
}

fn induced_spec(
    t: &DecoratedTree,
    v: VertexId,
    keep: &BTreeSet<VertexId>,
    relabel: &impl Fn(usize) -> usize,
) -> NodeSpec {
    NodeSpec {
        beta: t.beta(v).clone(),
        marks: t.marks(v).iter().map(|&m| relabel(m)).collect(),
        children: t
            .child_edges(v)
            .iter()
            .map(|&e| {
                let w = t.edges()[e].leafward;
                if keep.contains(&w) {
                    ChildSpec::Node(induced_spec(t, w, keep, relabel))
                } else {
                    ChildSpec::Leg
                }
            })
            .collect(),
    }
}
