//! Cancellation of iterated boundary terms.
//!
//! A codimension-two stratum is reached twice: split off one edge, then split
//! a factor of the result along the other. Both histories are generated from
//! the boundary term lists, their signs are composed, and the two must be
//! opposite for every degree assignment.
//!
//! Composition rule. Take the first-step term with parent `P` and child `C`
//! at slot `i`, and a boundary term of one factor `X`. The sign exponent of
//! the history is
//!
//! * the first term's exponent, evaluated on the raw inputs,
//! * plus the second term's exponent, evaluated on the inputs of `X`, where
//!   an input fed by `C` has shifted degree `1 + Σ` (inputs of `C`),
//! * plus, when `X = C`, the Leibniz sign `1 + Σ_{j<i} deg′ x_j` for moving
//!   the boundary past the odd operation `P` and the inputs before `C`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AffineForm, Calculus, IndexRecord, KIndex, SignedTerm};
use crate::tree::{DecoratedTree, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryRecord {
    /// The first-step boundary stratum.
    pub first: String,
    /// Which factor of the first step is split next.
    pub factor: String,
    /// The second-step boundary stratum of that factor.
    pub second: String,
    /// Sign exponent as a GF(2) form in the shifted input degrees.
    pub exponent: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub canonical: String,
    pub histories: Vec<HistoryRecord>,
    pub opposite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct D2Report {
    pub index: IndexRecord,
    pub pairs: Vec<PairRecord>,
    /// Codimension-two strata without exactly two histories.
    pub unpaired: Vec<String>,
    pub passed: bool,
}

/// Shifted-degree forms of the inputs of `v`, in slot order.
fn input_forms(t: &DecoratedTree, v: VertexId, leg_index: &BTreeMap<VertexId, usize>) -> Vec<AffineForm> {
    t.child_edges(v)
        .iter()
        .map(|&e| {
            let w = t.edges()[e].leafward;
            if t.vertices()[w].is_interior() {
                legs_below(t, w, leg_index)
                    .into_iter()
                    .fold(AffineForm::ONE, |acc, j| acc + AffineForm::var(j))
            } else {
                AffineForm::var(leg_index[&w])
            }
        })
        .collect()
}

fn legs_below(t: &DecoratedTree, v: VertexId, leg_index: &BTreeMap<VertexId, usize>) -> Vec<usize> {
    let mut out = Vec::new();
    for &e in t.child_edges(v) {
        let w = t.edges()[e].leafward;
        if t.vertices()[w].is_interior() {
            out.extend(legs_below(t, w, leg_index));
        } else {
            out.push(leg_index[&w]);
        }
    }
    out
}

impl Calculus<'_> {
    /// Pairs the two histories of every codimension-two tree stratum and checks
    /// that their signs are opposite. Faces of `P` are not considered.
    pub fn check_d_squared(&self, idx: &KIndex) -> D2Report {
        let point = KIndex { param: super::ParamSpace::Point, ..idx.clone() };
        let mut histories: BTreeMap<String, Vec<(HistoryRecord, AffineForm)>> = BTreeMap::new();
        for first in self.normalized_boundary(&point) {
            self.extend_histories(&first, &mut histories);
        }
        let mut unpaired = Vec::new();
        let mut pairs = Vec::new();
        for d in self.normalized_corner(&point, 2) {
            let canonical = d.tree.canonical_form();
            if !histories.contains_key(&canonical) {
                unpaired.push(canonical);
            }
        }
        for (canonical, hs) in histories {
            let opposite = hs.len() == 2 && hs[0].1 + hs[1].1 == AffineForm::ONE;
            if !opposite {
                unpaired.push(canonical.clone());
            }
            pairs.push(PairRecord { canonical, histories: hs.into_iter().map(|(h, _)| h).collect(), opposite });
        }
        unpaired.sort();
        unpaired.dedup();
        D2Report { index: idx.record(self.monoid()), passed: unpaired.is_empty(), pairs, unpaired }
    }

    fn extend_histories(&self, first: &SignedTerm, out: &mut BTreeMap<String, Vec<(HistoryRecord, AffineForm)>>) {
        let t1 = &first.descriptor.tree;
        let legs = t1.legs();
        let leg_index: BTreeMap<VertexId, usize> = legs.iter().enumerate().skip(1).map(|(j, &w)| (w, j)).collect();
        let raw: Vec<AffineForm> = (1..legs.len()).map(AffineForm::var).collect();
        let stage1 = first.koszul.form(&raw);
        let top = t1.top();
        for x in t1.interior_vertices() {
            let leibniz = if x == top {
                AffineForm::ZERO
            } else {
                let before = leg_index
                    .iter()
                    .filter(|(&w, _)| w < x)
                    .fold(AffineForm::ZERO, |acc, (_, &j)| acc + AffineForm::var(j));
                before + AffineForm::ONE
            };
            let inputs = input_forms(t1, x, &leg_index);
            let factor = KIndex::from_triple(&t1.vertex_triple(x));
            for second in self.normalized_boundary(&factor) {
                let Ok(t) = t1.graft(x, &second.descriptor.tree) else {
                    continue;
                };
                let form = stage1 + second.koszul.form(&inputs) + leibniz;
                let record = HistoryRecord {
                    first: t1.canonical_form(),
                    factor: if x == top { "parent".into() } else { "child".into() },
                    second: second.descriptor.tree.canonical_form(),
                    exponent: form.to_string(),
                };
                out.entry(t.canonical_form()).or_default().push((record, form));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corner::SignConvention;
    use crate::monoid::ClassMonoid;

    #[test]
    fn shifted_koszul_cancels() {
        let m = ClassMonoid::unit();
        let calc = Calculus::new(&m);
        for k in 0..=3 {
            let r = calc.check_d_squared(&KIndex::new(k, 0, m.multiple(0, 2)));
            assert!(r.passed, "k={k}: {:?}", r.unpaired);
        }
    }

    #[test]
    fn vacuous_without_splits() {
        let m = ClassMonoid::unit();
        let calc = Calculus::new(&m);
        let r = calc.check_d_squared(&KIndex::new(0, 0, m.generator(0)));
        assert!(r.passed);
        assert!(r.pairs.is_empty());
    }

    #[test]
    fn unshifted_fails() {
        let m = ClassMonoid::unit();
        let calc = Calculus::new(&m).with_convention(SignConvention::Unshifted);
        let r = calc.check_d_squared(&KIndex::new(3, 0, m.multiple(0, 2)));
        assert!(!r.passed);
    }
}
