//! The action of permutations of the interior marked points.
//!
//! A permutation is written as `perm[i-1] = σ(i)` and acts on a stratum by
//! relabeling every mark `i` to `σ(i)`.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{descriptor_dimension, Calculus, DescriptorKey, IndexRecord, KIndex, SignedTerm, StratumDescriptor};
use crate::error::CornerError;

/// `(σ ∘ τ)(i) = σ(τ(i))`.
pub fn compose(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    tau.iter().map(|&t| sigma[t - 1]).collect()
}

/// All permutations of `1..=n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                cur.push(j + 1);
                go(cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn check_permutation(perm: &[usize], ell: usize) -> Result<(), CornerError> {
    let mut seen = vec![false; ell];
    let ok = perm.len() == ell
        && perm.iter().all(|&p| {
            (1..=ell).contains(&p) && !std::mem::replace(&mut seen[p - 1], true)
        });
    if ok {
        Ok(())
    } else {
        Err(CornerError::NotAPermutation(perm.to_vec(), ell))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermReport {
    pub index: IndexRecord,
    pub perm: Vec<usize>,
    /// Boundary terms as `(from, to)` canonical forms with faces.
    pub boundary_map: Vec<(String, String)>,
    /// The action permutes the boundary terms, preserving signs and splittings.
    pub boundary_bijective: bool,
    /// The action permutes each normalized corner, preserving codimension and dimension.
    pub corner_bijective: bool,
    /// Iterated-corner multiplicities are invariant: `#(σD) = #D` for all `m₁+m₂ ≤` the bound.
    pub decomposition_invariant: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupActionReport {
    pub index: IndexRecord,
    pub permutations: usize,
    pub strata: usize,
    pub identity_ok: bool,
    /// Pairs `(σ, τ)` for which `σ·(τ·D) ≠ (σ∘τ)·D` for some stratum `D`.
    pub composition_failures: Vec<(Vec<usize>, Vec<usize>)>,
    pub passed: bool,
}

/// Strata and iterated-corner tallies shared by all permutations.
struct SymmetryData {
    boundary: Vec<SignedTerm>,
    corners: Vec<Vec<StratumDescriptor>>,
    tallies: Vec<HashMap<DescriptorKey, u64>>,
}

fn key_string(k: &DescriptorKey) -> String {
    format!("{} @ {}", k.0, k.1)
}

impl Calculus<'_> {
    /// Applies `σ` to the strata of `idx` and checks it permutes the boundary
    /// terms and the normalized corners of codimension at most `max_total`,
    /// and leaves the multiplicities of iterated corners with
    /// `m₁ + m₂ ≤ max_total` unchanged.
    pub fn perm_relabel(&self, idx: &KIndex, perm: &[usize], max_total: usize) -> Result<PermReport, CornerError> {
        check_permutation(perm, idx.ell)?;
        Ok(self.relabel_with(idx, perm, &self.symmetry_data(idx, max_total)))
    }

    /// [`Calculus::perm_relabel`] for every permutation of the marks.
    pub fn check_symmetry(&self, idx: &KIndex, max_total: usize) -> Vec<PermReport> {
        let data = self.symmetry_data(idx, max_total);
        all_permutations(idx.ell).iter().map(|p| self.relabel_with(idx, p, &data)).collect()
    }

    fn symmetry_data(&self, idx: &KIndex, max_total: usize) -> SymmetryData {
        let max_m = self.max_codim(idx);
        let corners = (0..=max_total.min(max_m + 1)).map(|m| self.normalized_corner(idx, m)).collect();
        let mut tallies = Vec::new();
        for total in 0..=max_total.min(max_m) {
            for m1 in 0..=total {
                tallies.push(self.iterated_corner_tally(idx, m1, total - m1));
            }
        }
        SymmetryData { boundary: self.normalized_boundary(idx), corners, tallies }
    }

    fn relabel_with(&self, idx: &KIndex, perm: &[usize], data: &SymmetryData) -> PermReport {
        let terms = &data.boundary;
        let by_key: HashMap<DescriptorKey, usize> =
            terms.iter().enumerate().map(|(j, t)| (t.descriptor.key(), j)).collect();
        let mut boundary_map = Vec::with_capacity(terms.len());
        let mut images = HashSet::new();
        let mut boundary_bijective = true;
        for t in terms {
            let image = t.descriptor.permute_marks(perm);
            let key = image.key();
            match by_key.get(&key) {
                Some(&j) => {
                    let target = &terms[j];
                    let split_ok = match (&t.split, &target.split) {
                        (Some(a), Some(b)) => &a.permute_marks(perm) == b,
                        (None, None) => true,
                        _ => false,
                    };
                    boundary_bijective &= split_ok && target.koszul == t.koszul && images.insert(j);
                }
                None => boundary_bijective = false,
            }
            boundary_map.push((key_string(&t.descriptor.key()), key_string(&key)));
        }

        let mut corner_bijective = true;
        for corner in &data.corners {
            let keys: HashSet<DescriptorKey> = corner.iter().map(StratumDescriptor::key).collect();
            let mut seen = HashSet::new();
            for d in corner {
                let image = d.permute_marks(perm);
                corner_bijective &= keys.contains(&image.key())
                    && seen.insert(image.key())
                    && image.total_codim() == d.total_codim()
                    && descriptor_dimension(idx, &image, self.monoid()) == descriptor_dimension(idx, d, self.monoid());
            }
        }

        let mut decomposition_invariant = true;
        for tally in &data.tallies {
            for (key, &n) in tally {
                let tree = crate::tree::DecoratedTree::parse_canonical(&key.0).expect("own encoding");
                let image = StratumDescriptor::new(tree.permute_marks(perm), key.1).key();
                decomposition_invariant &= tally.get(&image) == Some(&n);
            }
        }

        PermReport {
            index: idx.record(self.monoid()),
            perm: perm.to_vec(),
            boundary_map,
            passed: boundary_bijective && corner_bijective && decomposition_invariant,
            boundary_bijective,
            corner_bijective,
            decomposition_invariant,
        }
    }

    /// Checks the identity and composition laws of the action on the strata
    /// of `idx` of codimension at most `max_codim`.
    ///
    /// Each permutation is turned into a map on stratum positions, which also
    /// checks that the strata are closed under the action.
    pub fn check_group_action(&self, idx: &KIndex, max_codim: usize) -> GroupActionReport {
        let perms = all_permutations(idx.ell);
        let strata: Vec<StratumDescriptor> =
            (0..=max_codim.min(self.max_codim(idx))).flat_map(|m| self.normalized_corner(idx, m)).collect();
        let position: HashMap<DescriptorKey, usize> =
            strata.iter().enumerate().map(|(j, d)| (d.key(), j)).collect();
        let act = |perm: &[usize]| -> Option<Vec<usize>> {
            strata.iter().map(|d| position.get(&d.permute_marks(perm).key()).copied()).collect()
        };
        let maps: Vec<Option<Vec<usize>>> = perms.iter().map(|p| act(p)).collect();
        let identity: Vec<usize> = (1..=idx.ell).collect();
        let identity_ok = act(&identity) == Some((0..strata.len()).collect());
        let index_of: HashMap<&[usize], usize> = perms.iter().enumerate().map(|(j, p)| (p.as_slice(), j)).collect();
        let mut composition_failures = Vec::new();
        for (a, sigma) in perms.iter().enumerate() {
            for (b, tau) in perms.iter().enumerate() {
                let composite = &maps[index_of[compose(sigma, tau).as_slice()]];
                let ok = match (&maps[a], &maps[b], composite) {
                    (Some(ps), Some(pt), Some(pc)) => pt.iter().map(|&j| ps[j]).eq(pc.iter().copied()),
                    _ => false,
                };
                if !ok {
                    composition_failures.push((sigma.clone(), tau.clone()));
                }
            }
        }
        GroupActionReport {
            index: idx.record(self.monoid()),
            permutations: perms.len(),
            strata: strata.len(),
            passed: identity_ok && composition_failures.is_empty(),
            identity_ok,
            composition_failures,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::ClassMonoid;

    #[test]
    fn permutations_and_composition() {
        assert_eq!(all_permutations(3).len(), 6);
        assert_eq!(all_permutations(0), vec![Vec::<usize>::new()]);
        // (12)∘(23) sends 1→2, 2→3, 3→1.
        assert_eq!(compose(&[2, 1, 3], &[1, 3, 2]), vec![2, 3, 1]);
    }

    #[test]
    fn rejects_non_permutations() {
        let m = ClassMonoid::unit();
        let calc = Calculus::new(&m);
        let idx = KIndex::new(1, 2, m.generator(0));
        assert!(calc.perm_relabel(&idx, &[1, 1], 1).is_err());
        assert!(calc.perm_relabel(&idx, &[1], 1).is_err());
    }

    #[test]
    fn transposition_swaps_split_marks() {
        let m = ClassMonoid::unit();
        let calc = Calculus::new(&m);
        let idx = KIndex::new(1, 2, m.generator(0));
        let r = calc.perm_relabel(&idx, &[2, 1], 2).unwrap();
        assert!(r.passed, "{r:?}");
        let terms = calc.normalized_boundary(&idx);
        let t = terms
            .iter()
            .find(|t| {
                let s = t.split.as_ref().unwrap();
                s.l1 == [1].into() && s.l2 == [2].into()
            })
            .unwrap();
        let image = t.split.as_ref().unwrap().permute_marks(&[2, 1]);
        assert_eq!(image.l1, [2].into());
        assert_eq!(image.l2, [1].into());
        let identity = calc.perm_relabel(&idx, &[1, 2], 0).unwrap();
        assert!(identity.boundary_map.iter().all(|(a, b)| a == b));
    }

    #[test]
    fn group_law_on_three_marks() {
        let m = ClassMonoid::unit();
        let calc = Calculus::new(&m);
        let r = calc.check_group_action(&KIndex::new(1, 3, m.generator(0)), usize::MAX);
        assert!(r.passed);
        assert_eq!(r.permutations, 6);
        assert_eq!(r.strata, 24735);
    }
}
