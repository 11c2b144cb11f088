use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::enumerate::nontrivial_vertex_triples;
use super::{DecoratedTree, NodeSpec};
use crate::monoid::{Activity, ClassElement, ClassMonoid, Triple};

/// One codimension-one boundary index: the child disk `(k2, l2, β2)` is attached
/// at input slot `i` of the parent `(k1, l1, β1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundarySplit {
    pub beta1: ClassElement,
    pub beta2: ClassElement,
    pub k1: usize,
    pub k2: usize,
    pub i: usize,
    pub l1: BTreeSet<usize>,
    pub l2: BTreeSet<usize>,
}

impl BoundarySplit {
    pub fn parent(&self) -> Triple {
        Triple::new(self.k1, self.l1.len(), self.beta1.clone())
    }

    pub fn child(&self) -> Triple {
        Triple::new(self.k2, self.l2.len(), self.beta2.clone())
    }

    /// The two-vertex tree realizing this split.
    pub fn tree(&self) -> DecoratedTree {
        let mut parent = NodeSpec::leaf(self.beta1.clone()).marked(self.l1.iter().copied());
        for slot in 1..=self.k1 {
            parent = if slot == self.i {
                parent.child(NodeSpec::with_legs(self.beta2.clone(), self.k2).marked(self.l2.iter().copied()))
            } else {
                parent.leg()
            };
        }
        DecoratedTree::from_spec(&parent).expect("split trees are well formed")
    }

    pub fn is_active(&self, monoid: &ClassMonoid, activity: &dyn Activity) -> bool {
        activity.is_active(monoid, &self.parent()) && activity.is_active(monoid, &self.child())
    }

    pub fn permute_marks(&self, perm: &[usize]) -> BoundarySplit {
        BoundarySplit {
            l1: self.l1.iter().map(|&m| perm[m - 1]).collect(),
            l2: self.l2.iter().map(|&m| perm[m - 1]).collect(),
            ..self.clone()
        }
    }
}

/// Every raw boundary index of `(k, ℓ, β)`, before activity filtering.
///
/// Order: class decomposition (by energy of `β1`), then `k1`, then `i`, then
/// the marks on the parent as a bitmask.
pub fn boundary_splits(k: usize, ell: usize, beta: &ClassElement, monoid: &ClassMonoid) -> Vec<BoundarySplit> {
    let mut out = Vec::new();
    for (beta1, beta2) in monoid.decompositions(beta) {
        for k1 in 1..=k + 1 {
            let k2 = k + 1 - k1;
            for i in 1..=k1 {
                for mask in 0u32..(1 << ell) {
                    let l1: BTreeSet<usize> = (1..=ell).filter(|m| mask & (1 << (m - 1)) != 0).collect();
                    let l2: BTreeSet<usize> = (1..=ell).filter(|m| !l1.contains(m)).collect();
                    out.push(BoundarySplit {
                        beta1: beta1.clone(),
                        beta2: beta2.clone(),
                        k1,
                        k2,
                        i,
                        l1,
                        l2,
                    });
                }
            }
        }
    }
    out
}

/// Triples at interior vertices of nontrivial trees in `𝒢(k+1, ℓ, β)`.
pub fn predecessor_triples(t: &Triple, monoid: &ClassMonoid, activity: &dyn Activity) -> BTreeSet<Triple> {
    nontrivial_vertex_triples(t, monoid, activity).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{triple_lt, DefaultActivity};

    #[test]
    fn raw_split_counts() {
        let m = ClassMonoid::unit();
        let b = m.generator(0);
        let raw = boundary_splits(1, 0, &b, &m);
        assert_eq!(raw.len(), 6);
        let kki: BTreeSet<_> = raw.iter().map(|s| (s.k1, s.k2, s.i)).collect();
        assert_eq!(kki, [(1, 1, 1), (2, 0, 1), (2, 0, 2)].into());
        assert_eq!(boundary_splits(1, 1, &b, &m).len(), 12);
        let z = boundary_splits(0, 0, &m.zero(), &m);
        assert_eq!(z.len(), 1);
        assert_eq!((z[0].k1, z[0].k2), (1, 0));
        assert!(!z[0].is_active(&m, &DefaultActivity));
    }

    #[test]
    fn split_tree_shape() {
        let m = ClassMonoid::unit();
        let s = &boundary_splits(2, 0, &m.generator(0), &m)
            .into_iter()
            .find(|s| s.k1 == 2 && s.k2 == 1 && s.i == 2 && s.beta1.is_zero())
            .unwrap();
        let t = s.tree();
        assert_eq!(t.k(), 2);
        let oe = t.oriented_interior_edges();
        assert_eq!(oe[0].slot, 2);
        assert_eq!(t.vertex_triple(oe[0].target), s.parent());
        assert_eq!(t.vertex_triple(oe[0].source), s.child());
    }

    #[test]
    fn predecessors() {
        let m = ClassMonoid::unit();
        let b = m.generator(0);
        let minimal = Triple::new(0, 0, b.clone());
        assert!(predecessor_triples(&minimal, &m, &DefaultActivity).is_empty());
        let t = Triple::new(1, 0, b.clone());
        let p = predecessor_triples(&t, &m, &DefaultActivity);
        assert!(p.contains(&Triple::new(2, 0, m.zero())));
        assert!(p.contains(&Triple::new(0, 0, b.clone())));
        assert!(p.iter().all(|s| triple_lt(s, &t, &m)));
        let t2 = Triple::new(0, 0, m.multiple(0, 2));
        let p2 = predecessor_triples(&t2, &m, &DefaultActivity);
        assert!(p2.iter().any(|s| s.beta == b && s.ell == 0));
        assert!(p2.iter().all(|s| triple_lt(s, &t2, &m)));
    }
}
