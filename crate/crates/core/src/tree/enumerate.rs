//! Enumeration of `𝒢(k+1, ℓ, β)`.
//!
//! A planted subtree is an interior vertex together with an ordered list of
//! children, each a leg or another planted subtree. Generation recurses over
//! the resources a subtree consumes (legs, marks, class). Every planted subtree
//! consumes at least one leg, mark or generator, because a vertex with none of
//! them below it would be unstable, so a child always uses a nonempty part of
//! its parent's budget and the recursion terminates.
//!
//! Planted subtrees for every proper sub-budget are memoized as canonical-form
//! fragments bucketed by vertex count. Trees for the full budget are streamed,
//! never stored, so very large sets can be scanned in little memory.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use super::DecoratedTree;
use crate::monoid::{Activity, ClassElement, ClassMonoid, DefaultActivity, Triple};

type Budget = (usize, u32, ClassElement);

fn submasks(mask: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut s = mask;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    out.reverse();
    out
}

fn mark_text(mask: u32) -> String {
    let labels: Vec<String> = (0..32).filter(|i| mask & (1 << i) != 0).map(|i| (i + 1).to_string()).collect();
    labels.join(".")
}

fn units(b: &Budget) -> usize {
    b.0 + b.1.count_ones() as usize + b.2.exponents().iter().map(|&e| e as usize).sum::<usize>()
}

fn full_mask(ell: usize) -> u32 {
    assert!(ell < 32, "at most 31 interior marked points");
    if ell == 0 {
        0
    } else {
        (1u32 << ell) - 1
    }
}

fn is_empty(b: &Budget) -> bool {
    b.0 == 0 && b.1 == 0 && b.2.is_zero()
}

/// Nonempty sub-budgets of `b`, smallest first.
fn sub_budgets(b: &Budget) -> Vec<Budget> {
    let mut out = Vec::new();
    for legs in 0..=b.0 {
        for mask in submasks(b.1) {
            for beta in b.2.divisors() {
                let y = (legs, mask, beta);
                if !is_empty(&y) {
                    out.push(y);
                }
            }
        }
    }
    out.sort_by_key(units);
    out
}

fn minus(b: &Budget, y: &Budget) -> Budget {
    (b.0 - y.0, b.1 & !y.1, b.2.checked_sub(&y.2).expect("sub-budget"))
}

fn decorations(b: &Budget) -> Vec<(ClassElement, u32)> {
    let mut out = Vec::new();
    for bv in b.2.divisors() {
        for mv in submasks(b.1) {
            out.push((bv.clone(), mv));
        }
    }
    out
}

/// Upper bound on interior vertices. Positive and marked vertices number at
/// most the generators plus marks; the rest branch, so they are fewer than the leaves.
fn vertex_bound(b: &Budget) -> usize {
    2 * units(b) + 1
}

fn cap_for(b: &Budget, max_edges: Option<usize>) -> usize {
    let bound = vertex_bound(b);
    max_edges.map_or(bound, |e| (e + 1).min(bound))
}

type Sink<'s> = dyn FnMut(&str, usize, usize) + 's;

struct Enumerator<'a> {
    monoid: &'a ClassMonoid,
    activity: &'a dyn Activity,
    /// Maximum number of interior vertices.
    cap: usize,
    /// `planted[b][n]`: fragments of planted subtrees with `n` interior vertices.
    planted: HashMap<Budget, Vec<Vec<String>>>,
}

impl<'a> Enumerator<'a> {
    fn new(monoid: &'a ClassMonoid, activity: &'a dyn Activity, cap: usize) -> Self {
        Enumerator { monoid, activity, cap, planted: HashMap::new() }
    }

    /// Memoizes planted subtrees for every proper sub-budget of `b`.
    fn warm(&mut self, b: &Budget) {
        for z in sub_budgets(b) {
            if &z == b || self.planted.contains_key(&z) {
                continue;
            }
            let mut lists: Vec<Vec<String>> = Vec::new();
            for dec in decorations(&z) {
                self.nodes(&z, &dec, &mut |s, n| {
                    if lists.len() <= n {
                        lists.resize(n + 1, Vec::new());
                    }
                    lists[n].push(s.to_string());
                });
            }
            self.planted.insert(z, lists);
        }
    }

    /// Streams planted subtrees with budget `b` whose top vertex carries `dec`,
    /// as `(fragment, interior vertices)`.
    fn nodes(&self, b: &Budget, dec: &(ClassElement, u32), f: &mut dyn FnMut(&str, usize)) {
        let (bv, mv) = dec;
        let zero = bv.is_zero() && *mv == 0;
        let rest: Budget = (b.0, b.1 & !mv, b.2.checked_sub(bv).expect("divisor"));
        let marks = mv.count_ones() as usize;
        let mut buf = format!("[{}|{}](", bv.token(), mark_text(*mv));
        let mut out = String::new();
        self.seq(&rest, zero, &mut buf, 0, 0, &mut |text, used, children| {
            // A vertex without class or marks needs valence at least three.
            if zero && children < 2 {
                return;
            }
            if !self.activity.is_active(self.monoid, &Triple::new(children, marks, bv.clone())) {
                return;
            }
            out.clear();
            out.push_str(text);
            out.push(')');
            f(&out, used + 1);
        });
    }

    /// Streams child sequences consuming exactly `b`, appended to `buf`, as
    /// `(text, interior vertices, children)`.
    ///
    /// With `exclude_whole`, a single planted child taking all of `b` is skipped.
    fn seq(&self, b: &Budget, exclude_whole: bool, buf: &mut String, children: usize, used: usize, f: &mut Sink<'_>) {
        if is_empty(b) {
            f(buf, used, children);
            return;
        }
        let mark = buf.len();
        let sep = if children > 0 { "," } else { "" };
        if b.0 > 0 {
            buf.push_str(sep);
            buf.push('*');
            self.seq(&(b.0 - 1, b.1, b.2.clone()), false, buf, children + 1, used, f);
            buf.truncate(mark);
        }
        // The parent vertex itself counts against the cap.
        let room = self.cap - 1 - used;
        for y in sub_budgets(b) {
            if exclude_whole && &y == b {
                continue;
            }
            let lists = self.planted.get(&y).expect("sub-budget warmed");
            let rest = minus(b, &y);
            for (n, frags) in lists.iter().enumerate().take(room + 1) {
                for frag in frags {
                    buf.push_str(sep);
                    buf.push_str(frag);
                    self.seq(&rest, false, buf, children + 1, used + n, f);
                    buf.truncate(mark);
                }
            }
        }
    }
}

/// Calls `f(canonical_form, interior_vertices)` once per active stable tree in
/// `𝒢(k+1, ℓ, β)` with at most `max_edges` interior edges, in no particular order.
pub fn for_each_tree_form(
    k: usize,
    ell: usize,
    beta: &ClassElement,
    monoid: &ClassMonoid,
    activity: &dyn Activity,
    max_edges: Option<usize>,
    mut f: impl FnMut(&str, usize),
) {
    let b: Budget = (k, full_mask(ell), beta.clone());
    let mut en = Enumerator::new(monoid, activity, cap_for(&b, max_edges));
    en.warm(&b);
    for dec in decorations(&b) {
        en.nodes(&b, &dec, &mut f);
    }
}

/// Canonical forms with vertex counts, sorted by count then form.
pub fn tree_forms(
    k: usize,
    ell: usize,
    beta: &ClassElement,
    monoid: &ClassMonoid,
    activity: &dyn Activity,
    max_edges: Option<usize>,
) -> Vec<(usize, String)> {
    let b: Budget = (k, full_mask(ell), beta.clone());
    let mut en = Enumerator::new(monoid, activity, cap_for(&b, max_edges));
    en.warm(&b);
    let en = &en;
    // The memo is read-only from here, and each top-vertex decoration is independent.
    let mut forms: Vec<(usize, String)> = decorations(&b)
        .par_iter()
        .flat_map_iter(|dec| {
            let mut out = Vec::new();
            en.nodes(&b, dec, &mut |s, n| out.push((n, s.to_string())));
            out
        })
        .collect();
    forms.par_sort_unstable();
    forms
}

/// All stable trees in `𝒢(k+1, ℓ, β)`, one per isomorphism class.
///
/// Sorted by number of interior vertices, then canonical form.
pub fn enumerate_trees(k: usize, ell: usize, beta: &ClassElement, monoid: &ClassMonoid) -> Vec<DecoratedTree> {
    enumerate_trees_with(k, ell, beta, monoid, &DefaultActivity)
}

/// As [`enumerate_trees`], keeping only trees whose vertex triples are all active.
pub fn enumerate_trees_with(
    k: usize,
    ell: usize,
    beta: &ClassElement,
    monoid: &ClassMonoid,
    activity: &dyn Activity,
) -> Vec<DecoratedTree> {
    enumerate_trees_capped(k, ell, beta, monoid, activity, None)
}

/// As [`enumerate_trees_with`], restricted to trees with at most `max_edges` interior edges.
pub fn enumerate_trees_capped(
    k: usize,
    ell: usize,
    beta: &ClassElement,
    monoid: &ClassMonoid,
    activity: &dyn Activity,
    max_edges: Option<usize>,
) -> Vec<DecoratedTree> {
    tree_forms(k, ell, beta, monoid, activity, max_edges)
        .par_iter()
        .map(|(_, s)| DecoratedTree::parse_canonical(s).expect("generated forms parse"))
        .collect()
}

/// Number of trees in `𝒢(k+1, ℓ, β)` indexed by number of interior vertices.
pub fn count_trees(
    k: usize,
    ell: usize,
    beta: &ClassElement,
    monoid: &ClassMonoid,
    activity: &dyn Activity,
) -> Vec<u128> {
    let b: Budget = (k, full_mask(ell), beta.clone());
    let mut c = Counter { monoid, activity, planted: HashMap::new(), seqs: HashMap::new() };
    for z in sub_budgets(&b) {
        if z != b {
            let row = c.node_counts(&z);
            c.planted.insert(z, row);
        }
    }
    let mut out = c.node_counts(&b);
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// The largest number of interior edges of a tree in `𝒢(k+1, ℓ, β)`, if any.
pub fn max_interior_edges(
    k: usize,
    ell: usize,
    beta: &ClassElement,
    monoid: &ClassMonoid,
    activity: &dyn Activity,
) -> Option<usize> {
    count_trees(k, ell, beta, monoid, activity).len().checked_sub(2)
}

/// Counting version of [`Enumerator`].
struct Counter<'a> {
    monoid: &'a ClassMonoid,
    activity: &'a dyn Activity,
    planted: HashMap<Budget, Vec<u128>>,
    /// `seqs[(b, exclude_whole)][used][children]`.
    seqs: HashMap<(Budget, bool), Vec<Vec<u128>>>,
}

fn add_at(t: &mut Vec<Vec<u128>>, u: usize, c: usize, v: u128) {
    if t.len() <= u {
        t.resize(u + 1, Vec::new());
    }
    if t[u].len() <= c {
        t[u].resize(c + 1, 0);
    }
    t[u][c] += v;
}

impl Counter<'_> {
    fn node_counts(&mut self, b: &Budget) -> Vec<u128> {
        let mut row = Vec::new();
        for (bv, mv) in decorations(b) {
            let zero = bv.is_zero() && mv == 0;
            let rest: Budget = (b.0, b.1 & !mv, b.2.checked_sub(&bv).expect("divisor"));
            let marks = mv.count_ones() as usize;
            let tab = self.seq(&rest, zero);
            for (u, by_children) in tab.iter().enumerate() {
                for (c, &v) in by_children.iter().enumerate() {
                    if v == 0 || (zero && c < 2) {
                        continue;
                    }
                    if !self.activity.is_active(self.monoid, &Triple::new(c, marks, bv.clone())) {
                        continue;
                    }
                    if row.len() <= u + 1 {
                        row.resize(u + 2, 0);
                    }
                    row[u + 1] += v;
                }
            }
        }
        row
    }

    fn seq(&mut self, b: &Budget, exclude_whole: bool) -> Vec<Vec<u128>> {
        if is_empty(b) {
            return vec![vec![1]];
        }
        let key = (b.clone(), exclude_whole);
        if let Some(hit) = self.seqs.get(&key) {
            return hit.clone();
        }
        let mut t = Vec::new();
        if b.0 > 0 {
            let rest = self.seq(&(b.0 - 1, b.1, b.2.clone()), false);
            for (u, row) in rest.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    add_at(&mut t, u, c + 1, v);
                }
            }
        }
        for y in sub_budgets(b) {
            if exclude_whole && &y == b {
                continue;
            }
            let first = self.planted.get(&y).expect("sub-budget counted").clone();
            let rest = self.seq(&minus(b, &y), false);
            for (n, &p) in first.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                for (u, row) in rest.iter().enumerate() {
                    for (c, &v) in row.iter().enumerate() {
                        add_at(&mut t, u + n, c + 1, p * v);
                    }
                }
            }
        }
        self.seqs.insert(key, t.clone());
        t
    }
}

/// Vertex triples of every tree with at least two interior vertices.
pub(super) fn nontrivial_vertex_triples(t: &Triple, monoid: &ClassMonoid, activity: &dyn Activity) -> Vec<Triple> {
    let mut out = BTreeSet::new();
    for_each_tree_form(t.k, t.ell, &t.beta, monoid, activity, None, |form, n| {
        if n >= 2 {
            scan_vertex_triples(form, &mut out);
        }
    });
    out.into_iter().collect()
}

/// Reads the triple of every vertex straight off a canonical form.
fn scan_vertex_triples(form: &str, out: &mut BTreeSet<Triple>) {
    // Open nodes as (class, marks, children so far).
    let mut stack: Vec<(ClassElement, usize, usize)> = Vec::new();
    let bytes = form.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'[' => {
                if let Some(top) = stack.last_mut() {
                    top.2 += 1;
                }
                let close = i + form[i..].find(']').expect("closing bracket");
                let (class, marks) = form[i + 1..close].split_once('|').expect("separator");
                let beta = ClassElement::from_exponents(class.split('.').map(|e| e.parse().expect("exponent")).collect());
                let marks = if marks.is_empty() { 0 } else { marks.split('.').count() };
                stack.push((beta, marks, 0));
                i = close + 2;
                continue;
            }
            b'*' => stack.last_mut().expect("inside a node").2 += 1,
            b')' => {
                let (beta, marks, children) = stack.pop().expect("balanced");
                out.insert(Triple::new(children, marks, beta));
            }
            _ => {}
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let m = ClassMonoid::unit();
        let zero = m.zero();
        let b = m.generator(0);
        assert!(enumerate_trees(1, 0, &zero, &m).is_empty());
        assert_eq!(enumerate_trees(2, 0, &zero, &m).len(), 1);
        let trees = enumerate_trees(1, 0, &b, &m);
        assert_eq!(trees.len(), 3);
        assert_eq!(trees[0].interior_vertices().len(), 1);
        assert!(trees[1..].iter().all(|t| t.interior_vertices().len() == 2));
        assert_ne!(trees[1].canonical_form(), trees[2].canonical_form());
    }

    #[test]
    fn output_is_stable_and_distinct() {
        let m = ClassMonoid::unit();
        for k in 0..=3 {
            for ell in 0..=1 {
                let trees = enumerate_trees(k, ell, &m.multiple(0, 2), &m);
                let mut forms: Vec<_> = trees.iter().map(|t| t.canonical_form()).collect();
                assert!(trees.iter().all(|t| t.is_stable(&m)));
                forms.sort();
                forms.dedup();
                assert_eq!(forms.len(), trees.len());
            }
        }
    }

    #[test]
    fn edges_equal_vertices_minus_one() {
        let m = ClassMonoid::unit();
        for t in enumerate_trees(2, 1, &m.multiple(0, 2), &m) {
            assert_eq!(t.num_interior_edges() + 1, t.interior_vertices().len());
            assert_eq!(t.triple(), Triple::new(2, 1, m.multiple(0, 2)));
        }
    }

    #[test]
    fn counts_match_enumeration() {
        let m = ClassMonoid::unit();
        for k in 0..=3 {
            for ell in 0..=1 {
                for e in 0..=2 {
                    let beta = m.multiple(0, e);
                    let trees = enumerate_trees(k, ell, &beta, &m);
                    let counts = count_trees(k, ell, &beta, &m, &DefaultActivity);
                    assert_eq!(counts.iter().sum::<u128>(), trees.len() as u128);
                    for (n, &c) in counts.iter().enumerate() {
                        let have = trees.iter().filter(|t| t.interior_vertices().len() == n).count();
                        assert_eq!(have as u128, c, "k={k} ell={ell} e={e} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn cap_keeps_small_trees() {
        let m = ClassMonoid::unit();
        let beta = m.multiple(0, 2);
        let all = enumerate_trees(2, 1, &beta, &m);
        for cap in 0..4 {
            let some = enumerate_trees_capped(2, 1, &beta, &m, &DefaultActivity, Some(cap));
            let want: Vec<_> = all.iter().filter(|t| t.num_interior_edges() <= cap).cloned().collect();
            assert_eq!(some, want);
        }
    }

    #[test]
    fn scanned_triples_match_parsed() {
        let m = ClassMonoid::unit();
        for t in enumerate_trees(2, 1, &m.multiple(0, 2), &m) {
            let mut scanned = BTreeSet::new();
            scan_vertex_triples(&t.canonical_form(), &mut scanned);
            let parsed: BTreeSet<_> = t.interior_vertices().into_iter().map(|v| t.vertex_triple(v)).collect();
            assert_eq!(scanned, parsed);
        }
    }
}
